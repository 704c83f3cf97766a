from pathlib import Path

import pandas as pd
import pytest

from app.schemas.mapping_schema import BIBLIOGRAPHIC_SCHEMA, DIGITISATION_SCHEMA
from app.services.mapping_service import apply_mapping, load_profile, parse_table
from app.services.stats_service import Grouping, StatsService, render_csv, render_text
from app.services.version_store import VersionedStore
from tests.factories import BASE, START, meta

FIXTURES = Path(__file__).resolve().parents[2] / 'fixtures'


def mapped_store(*inputs) -> VersionedStore:
    """A store holding one creation snapshot per entity mapped from the given tables"""
    store = VersionedStore(BASE)
    for path, schema, profile in inputs:
        table, _ = parse_table(path.read_bytes(), schema)
        result = apply_mapping(table, load_profile(profile), schema)
        for entity, triples in sorted(result.by_entity().items()):
            store.create_entity(entity, triples, meta(START))
    return store


@pytest.fixture(scope='module')
def store():
    return mapped_store(
        (FIXTURES / 'exhibition_bibliographic.csv', BIBLIOGRAPHIC_SCHEMA, 'bibliographic'),
        (FIXTURES / 'exhibition_digitisation.csv', DIGITISATION_SCHEMA, 'digitisation'),
    )


def counts(store, grouping):
    return render_csv(StatsService().counts(store, grouping))


def test_room_counts(store):
    assert counts(store, Grouping.ROOM) == 'room,count\n1,30\n2,39\n3,20\n4,13\n5,146\n6,53\n'


def test_technique_counts(store):
    assert counts(store, Grouping.TECHNIQUE) == \
        'technique,count\nSLS,1\nphotogrammetry,2\nreuse of existing model,1\n'


def test_stage_counts_follow_stage_order(store):
    assert counts(store, Grouping.STAGE) == (
        'stage,count\nAcquisition,3\nProcessing,3\nModelling,3\nOptimisation,2\n'
        'Export,3\nMetadataCreation,1\nUpload,2\n'
    )


def test_type_counts(store):
    frame = StatsService().counts(store, Grouping.TYPE)
    by_type = dict(zip(frame['type'], frame['count']))
    assert by_type['Specimen'] == 104
    assert by_type['Printed volume'] == 27
    assert by_type['Herbarium'] == 7
    assert by_type['Model'] == 21
    assert (by_type['Woodcut'], by_type['Cast'], by_type['Medal']) == (7, 11, 2)
    assert frame['count'].sum() == 301
    assert list(frame['type']) == sorted(frame['type'])


def test_text_rendering_ends_with_total(store):
    text = render_text(StatsService().counts(store, Grouping.ROOM))
    last = text.splitlines()[-1].split()
    assert last == ['total', '301']


def test_unknown_grouping(store):
    with pytest.raises(ValueError, match='unknown grouping'):
        StatsService().counts(store, 'colour')


def test_empty_store():
    assert counts(VersionedStore(BASE), Grouping.ROOM) == 'room,count\n'


def test_render_text_empty_frame():
    assert render_text(pd.DataFrame(columns=['room', 'count'])) == 'room  count\n'
