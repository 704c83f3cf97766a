import random

import pytest

from app.exceptions.catalog_exceptions import InvalidAuthorityError
from app.schemas.catalog_schema import Authority, AuthorityRef, CatalogRecord, Creator, Licence
from app.services.catalog_service import (
    expand_authority, parse_creators, record_from_row, validate_authority_ref, validate_record,
    validate_unique_ids,
)


def make_record(**overrides) -> CatalogRecord:
    fields = dict(
        id='aldr-0001',
        title='Herbarium of Ulisse Aldrovandi',
        object_type='Herbarium',
        room=2,
        licence=Licence('CC-BY'),
        holder=AuthorityRef(Authority.WIKIDATA, 'Q131262'),
    )
    fields.update(overrides)
    return CatalogRecord(**fields)


class TestValidateAuthorityRef:

    @pytest.mark.parametrize('authority, identifier', [
        (Authority.VIAF, '7392797'),
        (Authority.WIKIDATA, 'Q131262'),
        (Authority.GEONAMES, '3181928'),
        (Authority.ULAN, '500115393'),
    ])
    def test_valid(self, authority, identifier):
        assert validate_authority_ref(AuthorityRef(authority, identifier)).ok

    def test_viaf_letters(self):
        report = validate_authority_ref(AuthorityRef(Authority.VIAF, 'abc'))
        assert report.messages == ['VIAF id must be 1-22 decimal digits']

    def test_wikidata_shape(self):
        report = validate_authority_ref(AuthorityRef(Authority.WIKIDATA, '131262'))
        assert report.messages == ['Wikidata id must match Q+digits']

    @pytest.mark.parametrize('authority, identifier', [
        (Authority.WIKIDATA, 'Q131262\n'),
        (Authority.VIAF, '7392797\n'),
        (Authority.GEONAMES, ' 3181928'),
    ])
    def test_surrounding_whitespace_is_rejected(self, authority, identifier):
        assert not validate_authority_ref(AuthorityRef(authority, identifier)).ok

    def test_empty(self):
        assert validate_authority_ref(AuthorityRef(Authority.ULAN, '')).messages == ['empty identifier']

    def test_ulan_length(self):
        assert not validate_authority_ref(AuthorityRef(Authority.ULAN, '1' * 13)).ok


class TestExpandAuthority:

    @pytest.mark.parametrize('authority, identifier, iri', [
        (Authority.VIAF, '7392797', 'https://viaf.org/viaf/7392797'),
        (Authority.WIKIDATA, 'Q131262', 'http://www.wikidata.org/entity/Q131262'),
        (Authority.GEONAMES, '3181928', 'https://sws.geonames.org/3181928/'),
        (Authority.ULAN, '500115393', 'http://vocab.getty.edu/ulan/500115393'),
    ])
    def test_bases(self, authority, identifier, iri):
        assert str(expand_authority(AuthorityRef(authority, identifier))) == iri

    def test_invalid_raises(self):
        with pytest.raises(InvalidAuthorityError, match='VIAF'):
            expand_authority(AuthorityRef(Authority.VIAF, 'x1'))

    def test_idempotent(self):
        ref = AuthorityRef(Authority.GEONAMES, '3181928')
        assert expand_authority(ref) == expand_authority(ref)

    @pytest.mark.parametrize('authority', [Authority.VIAF, Authority.GEONAMES, Authority.ULAN])
    def test_injective_per_authority(self, authority):
        rng = random.Random(int.from_bytes(authority.value.encode(), 'big') % 1000)
        identifiers = {str(rng.randint(1, 10 ** 12)) for _ in range(500)}
        iris = {expand_authority(AuthorityRef(authority, i)) for i in identifiers}
        assert len(iris) == len(identifiers)


class TestValidateRecord:

    def test_valid(self):
        assert validate_record(make_record()).ok

    def test_unknown_type_and_room(self):
        report = validate_record(make_record(object_type='Spaceship', room=7))
        assert report.messages == ['unknown object type', 'room out of range 1–6']

    def test_literal_holder_is_fine(self):
        assert validate_record(make_record(holder='Biblioteca Universitaria di Bologna')).ok

    def test_bad_creator_authority(self):
        record = make_record(creators=(Creator('author', AuthorityRef(Authority.VIAF, 'x')),))
        report = validate_record(record)
        assert report.messages == ['creator author: VIAF id must be 1-22 decimal digits']
        assert report.violations[0].column == 'creators'

    def test_place_must_be_geonames(self):
        record = make_record(place=AuthorityRef(Authority.VIAF, '7392797'))
        assert validate_record(record).messages == ['place must be a GeoNames reference']

    def test_parts(self):
        assert validate_record(make_record(parts=0)).messages == ['parts must be at least 1']


def test_unique_ids():
    records = [make_record(), make_record(id='aldr-0002'), make_record()]
    report = validate_unique_ids(records)
    assert [(v.row, v.message) for v in report.violations] == [(3, "duplicate record id 'aldr-0001'")]


class TestParseCreators:

    def test_roles_and_authorities(self):
        creators = parse_creators('author=VIAF:7392797|illustrator=Jacopo Ligozzi')
        assert creators == [
            Creator('author', AuthorityRef(Authority.VIAF, '7392797')),
            Creator('illustrator', 'Jacopo Ligozzi'),
        ]

    def test_default_role(self):
        assert parse_creators('Cornelio Schwindt') == [Creator('creator', 'Cornelio Schwindt')]

    def test_unknown_authority_stays_a_name(self):
        assert parse_creators('author=Atelier: Bologna') == [Creator('author', 'Atelier: Bologna')]

    def test_empty(self):
        assert parse_creators('') == []


class TestRecordFromRow:

    def test_full_row(self):
        record = record_from_row({
            'id': 'aldr-0001', 'title': 'Herbarium', 'object_type': 'Herbarium', 'room': '2',
            'creators': 'author=VIAF:7392797', 'holder': 'Q131262', 'holder_name': 'University of Bologna',
            'place': '3181928', 'notes': 'Dried plants', 'parts': '15', 'licence': 'CC-BY-NC',
        })
        assert record.room == 2
        assert record.parts == 15
        assert record.holder == AuthorityRef(Authority.WIKIDATA, 'Q131262')
        assert record.place == AuthorityRef(Authority.GEONAMES, '3181928')
        assert record.to_dict()['licence'] == 'CC-BY-NC'

    def test_defaults(self):
        record = record_from_row({
            'id': 'aldr-0002', 'title': 'Ornithologiae', 'object_type': 'Printed volume', 'room': '1',
            'holder': '', 'holder_name': 'Biblioteca Universitaria di Bologna',
        })
        assert record.holder == 'Biblioteca Universitaria di Bologna'
        assert str(record.licence) == 'CC-BY'
        assert record.place is None and record.notes is None and record.parts is None

    def test_bad_room(self):
        with pytest.raises(ValueError):
            record_from_row({'id': 'x', 'title': 't', 'object_type': 'Model', 'room': 'five'})
