import json

import pytest

from app.exceptions.mapping_exceptions import CsvFormatError, InputFileError
from app.repositories.catalog_repository import CatalogEntryRepository, ProcessEntryRepository
from app.services.ingest_service import IngestConfig, IngestReport, IngestService
from app.services.prov_service import dump_nquads
from app.services.store_service import StoreService
from tests.factories import BASE, utc

pytestmark = pytest.mark.usefixtures('app_context')


def ingest(store, bibliographic, digitisation=None, at=utc(2024, 1, 1), **kwargs):
    cfg = IngestConfig(bibliographic, digitisation, at=at, **kwargs)
    return IngestService(StoreService(BASE)).ingest(store, cfg)


def edited(tmp_path, source, old, new, name='edited.csv'):
    text = source.read_text(encoding='utf-8')
    assert old in text
    path = tmp_path / name
    path.write_text(text.replace(old, new), encoding='utf-8')
    return path


@pytest.fixture
def store():
    return StoreService(BASE).load()


class TestFirstIngest:

    def test_creates_every_entity(self, store, exhibition_bibliographic, exhibition_digitisation):
        report = ingest(store, exhibition_bibliographic, exhibition_digitisation)
        assert report.ok, report.errors
        assert (report.created, report.updated, report.unchanged) == (318, 0, 0)
        assert report.warnings == []
        assert len(store) == 318 and store.snapshot_count == 318

    def test_persisted_store_reloads_identically(self, store, exhibition_bibliographic, exhibition_digitisation):
        ingest(store, exhibition_bibliographic, exhibition_digitisation)
        assert dump_nquads(StoreService(BASE).load()) == dump_nquads(store)

    def test_projections_are_written(self, store, exhibition_bibliographic, exhibition_digitisation):
        ingest(store, exhibition_bibliographic, exhibition_digitisation)
        record = json.loads(CatalogEntryRepository().find_document('aldr-0003'))
        assert record['creators'] == [{'role': 'illustrator', 'agent': 'Jacopo Ligozzi'}]
        process = json.loads(ProcessEntryRepository().find_document('aldr-0003'))
        assert len(process['stages']) == 7
        assert process['stages'][0]['equipment'][0]['name'] == 'Artec Space Spider'

    def test_snapshot_metadata(self, store, fixtures_dir):
        ingest(store, fixtures_dir / 'golden_bibliographic.csv', source='https://example.org/src/exhibition')
        snapshot = store.snapshot(BASE + 'obj/aldr-0001', 1)
        assert snapshot.description == f"The entity '{BASE}obj/aldr-0001' has been created."
        assert str(snapshot.agent) == BASE + 'agent/ingest'
        assert str(snapshot.primary_source) == 'https://example.org/src/exhibition'


class TestReingest:

    def test_same_input_commits_nothing(self, store, exhibition_bibliographic, exhibition_digitisation):
        ingest(store, exhibition_bibliographic, exhibition_digitisation)
        report = ingest(store, exhibition_bibliographic, exhibition_digitisation, at=utc(2024, 2, 1))
        assert report.committed == 0
        assert report.unchanged == 318
        assert store.snapshot_count == 318

    def test_single_cell_edit_updates_one_entity(self, store, tmp_path, exhibition_bibliographic):
        ingest(store, exhibition_bibliographic)
        changed = edited(tmp_path, exhibition_bibliographic,
                         'aldr-0001,Video 1 (room 1),', 'aldr-0001,Video 1 (first room),')
        report = ingest(store, changed, at=utc(2024, 2, 1))
        assert (report.created, report.updated, report.unchanged) == (0, 1, 300)
        delta = store.snapshot(BASE + 'obj/aldr-0001', 2).delta
        assert len(delta.insertions) == 1 and len(delta.deletions) == 1
        assert str(next(iter(delta.insertions)).object) == 'Video 1 (first room)'

    def test_entities_missing_from_an_ingest_are_untouched(self, store, tmp_path, fixtures_dir,
                                                           exhibition_bibliographic):
        ingest(store, exhibition_bibliographic)
        report = ingest(store, fixtures_dir / 'golden_bibliographic.csv', at=utc(2024, 2, 1))
        assert report.updated == 2
        assert len(store.chain(BASE + 'obj/aldr-0100')) == 1

    def test_stale_timestamp_is_reported_per_entity(self, store, tmp_path, exhibition_bibliographic):
        ingest(store, exhibition_bibliographic)
        changed = edited(tmp_path, exhibition_bibliographic,
                         'aldr-0001,Video 1 (room 1),', 'aldr-0001,Video 1 (first room),')
        report = ingest(store, changed, at=utc(2024, 1, 1))
        assert report.updated == 0
        assert len(report.errors) == 1 and report.errors[0].startswith(f'{BASE}obj/aldr-0001: stale timestamp')


class TestRejection:

    def test_bad_row_is_rejected_and_the_rest_commit(self, store, tmp_path, exhibition_bibliographic):
        bad = edited(tmp_path, exhibition_bibliographic,
                     'aldr-0002,Video 2 (room 1),Video,1,', 'aldr-0002,Video 2 (room 1),Video,9,')
        report = ingest(store, bad)
        assert not report.ok
        assert report.errors == ["bibliographic row 2, column 'room': value out of range 1–6"]
        assert report.rejected_rows == 1
        assert report.created == 300
        assert BASE + 'obj/aldr-0002' not in store
        assert CatalogEntryRepository().find_document('aldr-0002') is None

    def test_rows_failing_the_crosswalk_get_no_projection(self, store, tmp_path, fixtures_dir):
        profile = tmp_path / 'strict.map'
        profile.write_text(
            '@base <https://example.org/aldrovandi/>\n'
            'map object\n'
            'subject obj/{id}\n'
            'po <http://a.org/title> literal:title\n'
            'po <http://a.org/made-by> vocab:object_type technique\n',
            encoding='utf-8',
        )
        report = ingest(store, fixtures_dir / 'golden_bibliographic.csv', bibliographic_profile=str(profile))
        assert report.rejected_rows == 2 and report.created == 0
        assert all('unknown technique term' in error for error in report.errors)
        assert CatalogEntryRepository().find_document('aldr-0001') is None
        assert CatalogEntryRepository().find_document('aldr-0002') is None

    def test_process_problems_are_warnings(self, store, tmp_path, fixtures_dir):
        digitisation = tmp_path / 'digitisation.csv'
        digitisation.write_text(
            'object_id,stage,institution,people,technique,tools,start_date,end_date,output_level\n'
            'aldr-0001,1,FICLIT,Anna Rossi,SLS,Artec Space Spider,2022-03-01,2022-03-02,0\n'
            'aldr-0001,7,CNR ISPC,Luca Neri,,ATON,2022-03-25,2022-03-25,2\n',
            encoding='utf-8',
        )
        report = ingest(store, fixtures_dir / 'golden_bibliographic.csv', digitisation)
        assert report.ok
        assert report.warnings == ["digitisation object 'aldr-0001': Upload without Export"]
        assert report.created == 4

    def test_missing_file(self, store, tmp_path):
        with pytest.raises(InputFileError, match='no such file'):
            ingest(store, tmp_path / 'absent.csv')

    def test_malformed_csv(self, store, tmp_path):
        path = tmp_path / 'broken.csv'
        path.write_bytes(b'id,title\n"abc,def\n')
        with pytest.raises(CsvFormatError, match='unbalanced quote at byte 9'):
            ingest(store, path)


def test_report_rendering():
    report = IngestReport(created=2, rejected_rows=1, errors=['bibliographic row 1: bad'], warnings=['w'])
    assert report.render() == (
        'error: bibliographic row 1: bad\n'
        'warning: w\n'
        'created 2, updated 0, unchanged 0, rejected rows 1\n'
    )
