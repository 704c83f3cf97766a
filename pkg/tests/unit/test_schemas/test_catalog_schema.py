import pytest

from app.schemas.asset_schema import AssetFormat, AssetRef
from app.schemas.catalog_schema import (
    Authority, AuthorityRef, Iri, Licence, LicenceVocab, ObjectTypeVocab, slugify,
)
from app.schemas.process_schema import (
    EQUIPMENT, EquipmentKind, EquipmentSpec, Measure, ModelLevel, WorkflowStage,
)
from app.utils.constants import OBJECT_TYPES, VOCAB_BASE


def test_iri_must_be_absolute():
    assert str(Iri('https://example.org/x')) == 'https://example.org/x'
    with pytest.raises(ValueError):
        Iri('not an iri')
    with pytest.raises(ValueError):
        Iri('http://www.wikidata.org/entity/Q1\n')


class TestAuthority:

    def test_parse_is_case_insensitive(self):
        assert Authority.parse('wikidata') is Authority.WIKIDATA
        assert Authority.parse(' GeoNames ') is Authority.GEONAMES

    def test_parse_unknown(self):
        with pytest.raises(ValueError):
            Authority.parse('ISNI')

    def test_ref_round_trips_through_its_cell_form(self):
        ref = AuthorityRef.parse('VIAF:7392797')
        assert ref == AuthorityRef(Authority.VIAF, '7392797')
        assert str(ref) == 'VIAF:7392797'

    def test_ref_needs_a_colon(self):
        with pytest.raises(ValueError):
            AuthorityRef.parse('7392797')


class TestObjectTypeVocab:

    def test_terms_resolve_to_distinct_iris(self):
        vocab = ObjectTypeVocab()
        iris = {vocab.term_iri(label) for label in OBJECT_TYPES}
        assert len(iris) == len(OBJECT_TYPES)

    def test_term_iri_and_back(self):
        vocab = ObjectTypeVocab()
        iri = vocab.term_iri('Rooms/Painted ceilings')
        assert iri == VOCAB_BASE + 'object-type/rooms-painted-ceilings'
        assert vocab.label_for(iri) == 'Rooms/Painted ceilings'

    def test_unknown_label(self):
        vocab = ObjectTypeVocab()
        assert 'Spaceship' not in vocab
        assert vocab.term_iri('Spaceship') is None
        assert vocab.label_for(VOCAB_BASE + 'object-type/spaceship') is None

    def test_labels_are_trimmed(self):
        assert ' Specimen ' in ObjectTypeVocab()


def test_slugify():
    assert slugify('reuse of existing model') == 'reuse-of-existing-model'
    assert slugify('CG modelling') == 'cg-modelling'


class TestLicenceVocab:

    def test_creative_commons_codes(self):
        assert LicenceVocab.term_iri('CC0') == 'https://creativecommons.org/publicdomain/zero/1.0/legalcode'
        assert str(LicenceVocab.parse('CC-BY-NC')) == 'CC-BY-NC'

    def test_custom_label(self):
        licence = LicenceVocab.parse('custom:Museum reuse terms')
        assert licence == Licence('custom', 'Museum reuse terms')
        assert licence.iri == VOCAB_BASE + 'licence/custom/museum-reuse-terms'
        assert str(licence) == 'custom:Museum reuse terms'

    def test_rejects_unknown_and_empty_custom(self):
        assert LicenceVocab.term_iri('GPL') is None
        with pytest.raises(ValueError):
            LicenceVocab.parse('custom:  ')


class TestAssetFormat:

    @pytest.mark.parametrize('text, expected', [
        ('glb', AssetFormat.GLB),
        ('glTF', AssetFormat.GLTF),
        ('obj', AssetFormat.OBJ),
        ('OBJ+MTL+texture', AssetFormat.OBJ),
        ('e57', AssetFormat.E57),
    ])
    def test_parse(self, text, expected):
        assert AssetFormat.parse(text) is expected

    def test_parse_unknown(self):
        with pytest.raises(ValueError):
            AssetFormat.parse('fbx')

    def test_web_formats(self):
        assert {f for f in AssetFormat if f.is_web} == {AssetFormat.GLTF, AssetFormat.GLB}


def test_asset_ref_form():
    assert str(AssetRef('aldr-0003', ModelLevel.LEVEL2)) == 'aldr-0003/l2'


def test_stage_labels():
    assert WorkflowStage.ACQUISITION.label == 'Acquisition'
    assert WorkflowStage(6).label == 'MetadataCreation'


class TestEquipment:

    def test_catalogue_kinds(self):
        kinds = {spec.name: spec.kind for spec in EQUIPMENT}
        assert kinds['Artec Space Spider'] is EquipmentKind.SCANNER
        assert kinds['Nikon D7200'] is EquipmentKind.CAMERA

    def test_measures_are_positive(self):
        with pytest.raises(ValueError):
            EquipmentSpec('Broken', EquipmentKind.CAMERA, (('pixel_size', (Measure(0, 'µm'),)),))

    def test_to_dict(self):
        spider = next(spec for spec in EQUIPMENT if spec.name == 'Artec Space Spider')
        document = spider.to_dict()
        assert document['kind'] == 'scanner'
        assert document['attributes']['point_precision'] == [{'value': 0.05, 'unit': 'mm'}]
