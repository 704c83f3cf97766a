import json
import struct

import pytest

from tests.conftest import INGEST_AT
from tests.factories import BASE

TITLE = 'http://www.cidoc-crm.org/cidoc-crm/P102_has_title'
EDITED_AT = '2024-02-01T00:00:00Z'


def edited_bibliographic(tmp_path, source, old, new):
    text = source.read_text(encoding='utf-8')
    assert old in text
    path = tmp_path / 'edited.csv'
    path.write_text(text.replace(old, new), encoding='utf-8')
    return path


@pytest.fixture
def updated(ingested, tmp_path, exhibition_bibliographic):
    """Second ingest that retitles aldr-0001 one month later"""
    changed = edited_bibliographic(tmp_path, exhibition_bibliographic,
                                   'aldr-0001,Video 1 (room 1),', 'aldr-0001,Video 1 (first room),')
    result = ingested.invoke(args=['ingest', str(changed), '--at', EDITED_AT])
    assert result.exit_code == 0, result.output
    assert result.stdout == 'created 0, updated 1, unchanged 300, rejected rows 0\n'
    return ingested


def glb_bytes(magic=b'glTF'):
    scene = b'{"asset":{"version":"2.0"}}\x20'
    body = struct.pack('<II', len(scene), 0x4E4F534A) + scene
    return struct.pack('<4sII', magic, 2, 12 + len(body)) + body


def test_init_store(runner):
    result = runner.invoke(args=['init-store'])
    assert result.exit_code == 0
    assert result.stdout.startswith('store ready at ')


class TestIngest:

    def test_report(self, runner, exhibition_bibliographic, exhibition_digitisation):
        result = runner.invoke(args=[
            'ingest', str(exhibition_bibliographic), '--digitisation', str(exhibition_digitisation), '--at', INGEST_AT,
        ])
        assert result.exit_code == 0
        assert result.stdout == 'created 318, updated 0, unchanged 0, rejected rows 0\n'

    def test_rerun_is_a_no_op(self, ingested, exhibition_bibliographic, exhibition_digitisation):
        result = ingested.invoke(args=[
            'ingest', str(exhibition_bibliographic), '--digitisation', str(exhibition_digitisation), '--at', EDITED_AT,
        ])
        assert result.exit_code == 0
        assert result.stdout == 'created 0, updated 0, unchanged 318, rejected rows 0\n'

    def test_bad_row_exits_non_zero(self, runner, tmp_path, exhibition_bibliographic):
        bad = edited_bibliographic(tmp_path, exhibition_bibliographic,
                                   'aldr-0002,Video 2 (room 1),Video,1,', 'aldr-0002,Video 2 (room 1),Video,9,')
        result = runner.invoke(args=['ingest', str(bad), '--at', INGEST_AT])
        assert result.exit_code == 1
        assert result.stdout == (
            "error: bibliographic row 2, column 'room': value out of range 1–6\n"
            'created 300, updated 0, unchanged 0, rejected rows 1\n'
        )

    def test_missing_file(self, runner, tmp_path):
        result = runner.invoke(args=['ingest', str(tmp_path / 'absent.csv')])
        assert result.exit_code == 1
        assert 'no such file' in result.stderr

    def test_bad_timestamp(self, runner, exhibition_bibliographic):
        result = runner.invoke(args=['ingest', str(exhibition_bibliographic), '--at', 'yesterday'])
        assert result.exit_code == 2
        assert 'is not an ISO 8601 timestamp' in result.stderr


class TestStats:

    def test_room_csv(self, ingested):
        result = ingested.invoke(args=['stats', '--csv'])
        assert result.exit_code == 0
        assert result.stdout == 'room,count\n1,30\n2,39\n3,20\n4,13\n5,146\n6,53\n'

    def test_text_table_has_a_total(self, ingested):
        result = ingested.invoke(args=['stats'])
        assert result.stdout.splitlines()[-1].split() == ['total', '301']

    def test_technique_and_stage(self, ingested):
        technique = ingested.invoke(args=['stats', '--by', 'technique', '--csv'])
        assert technique.stdout == 'technique,count\nSLS,1\nphotogrammetry,2\nreuse of existing model,1\n'
        stage = ingested.invoke(args=['stats', '--by', 'stage', '--csv'])
        assert stage.stdout.splitlines()[1:] == [
            'Acquisition,3', 'Processing,3', 'Modelling,3', 'Optimisation,2',
            'Export,3', 'MetadataCreation,1', 'Upload,2',
        ]

    def test_unknown_grouping(self, ingested):
        result = ingested.invoke(args=['stats', '--by', 'colour'])
        assert result.exit_code == 2


class TestQuery:

    def test_latest(self, ingested):
        result = ingested.invoke(args=['query', f'?o <{TITLE}> "Specimen 1 (room 1)" .'])
        assert result.exit_code == 0
        assert result.stdout == f'o\n<{BASE}obj/aldr-0003>\n'

    def test_specimens(self, ingested):
        has_type = 'http://www.cidoc-crm.org/cidoc-crm/P2_has_type'
        result = ingested.invoke(args=['query', f'?o <{has_type}> <{BASE}vocab/object-type/specimen> .'])
        lines = result.stdout.splitlines()
        assert lines[0] == 'o'
        assert len(lines) == 1 + 104
        assert lines[1:] == sorted(lines[1:])

    def test_before_creation(self, ingested):
        result = ingested.invoke(args=['query', f'?o <{TITLE}> ?t .', '--at', '2023-01-01T00:00:00Z'])
        assert result.stdout == 'o\tt\n'

    def test_at_instant_and_cross_version(self, updated):
        pattern = f'<{BASE}obj/aldr-0001> <{TITLE}> ?t .'
        old = updated.invoke(args=['query', pattern, '--at', '2024-01-15T00:00:00Z'])
        assert old.stdout == 't\n"Video 1 (room 1)"\n'
        runs = updated.invoke(args=['query', pattern, '--cross-version'])
        assert runs.stdout == (
            'from\tto\tt\n'
            f'{INGEST_AT}\t{EDITED_AT}\t"Video 1 (room 1)"\n'
            f'{EDITED_AT}\t-\t"Video 1 (first room)"\n'
        )

    def test_delta(self, updated):
        pattern = f'?s <{TITLE}> ?t .'
        removed = updated.invoke(args=['query', pattern, '--delta', 'obj/aldr-0001', '2', '--side', 'deletions'])
        assert removed.stdout == f's\tt\n<{BASE}obj/aldr-0001>\t"Video 1 (room 1)"\n'
        added = updated.invoke(args=['query', pattern, '--delta', 'obj/aldr-0001', '2'])
        assert added.stdout == f's\tt\n<{BASE}obj/aldr-0001>\t"Video 1 (first room)"\n'

    def test_modes_are_exclusive(self, ingested):
        result = ingested.invoke(args=['query', f'?s <{TITLE}> ?t .', '--cross-version', '--cross-delta'])
        assert result.exit_code == 2
        assert 'choose at most one' in result.stderr

    def test_parse_error(self, ingested):
        result = ingested.invoke(args=['query', '?s <p> ?o'])
        assert result.exit_code == 1
        assert 'not an absolute IRI' in result.stderr

    def test_unknown_snapshot(self, ingested):
        result = ingested.invoke(args=['query', f'?s <{TITLE}> ?t .', '--delta', 'obj/aldr-0001', '5'])
        assert result.exit_code == 1
        assert result.stderr.startswith('Error: ')


class TestExport:

    def test_record(self, ingested):
        result = ingested.invoke(args=['export', 'record', 'aldr-0003'])
        assert result.exit_code == 0
        document = json.loads(result.stdout)
        assert document['id'] == 'aldr-0003'
        assert document['title'] == 'Specimen 1 (room 1)'
        assert len(document['process']) == 7

    def test_record_is_deterministic(self, ingested):
        first = ingested.invoke(args=['export', 'record', 'aldr-0150'])
        assert first.stdout == ingested.invoke(args=['export', 'record', 'aldr-0150']).stdout

    def test_unknown_record(self, ingested):
        result = ingested.invoke(args=['export', 'record', 'aldr-9999'])
        assert result.exit_code == 1
        assert 'unknown record: aldr-9999' in result.stderr

    def test_prov(self, ingested):
        result = ingested.invoke(args=['export', 'prov', 'obj/aldr-0001'])
        assert result.stdout.startswith(f'# snapshot <{BASE}obj/aldr-0001/prov/se/1>\n')

    def test_dump(self, ingested):
        result = ingested.invoke(args=['export', 'dump'])
        assert result.exit_code == 0
        assert f'<{BASE}obj/aldr-0003> <{TITLE}> "Specimen 1 (room 1)"' in result.stdout
        assert all(line.endswith(' .') for line in result.stdout.splitlines())


class TestSnapshots:

    def test_log(self, updated):
        result = updated.invoke(args=['snapshot', 'log', 'obj/aldr-0001'])
        header, first, second = result.stdout.splitlines()
        assert header == 'ordinal\tvalid_from\tvalid_to\tinsertions\tdeletions\tdescription'
        first, second = first.split('\t'), second.split('\t')
        assert first[:3] == ['1', INGEST_AT, EDITED_AT] and first[4] == '0'
        assert first[5] == f"The entity '{BASE}obj/aldr-0001' has been created."
        assert second == ['2', EDITED_AT, '-', '1', '1', f"The entity '{BASE}obj/aldr-0001' has been modified."]

    def test_restore(self, updated):
        result = updated.invoke(args=['restore', 'obj/aldr-0001', '1', '--at', '2024-03-01T00:00:00Z'])
        assert result.exit_code == 0
        assert result.stdout == f'{BASE}obj/aldr-0001/prov/se/3\n'
        latest = updated.invoke(args=['query', f'<{BASE}obj/aldr-0001> <{TITLE}> ?t .'])
        assert latest.stdout == 't\n"Video 1 (room 1)"\n'

    def test_restore_to_head(self, ingested):
        result = ingested.invoke(args=['restore', 'obj/aldr-0001', '1', '--at', '2024-03-01T00:00:00Z'])
        assert result.exit_code == 1
        assert 'already at 1' in result.stderr


class TestAssetsAndScenes:

    def register(self, runner, *extra):
        return runner.invoke(args=[
            'asset', 'register', 'aldr-0003', '2', 'glb', 'models/aldr-0003.glb',
            '--size', '4200000', '--texture-px', '4096', *extra,
        ])

    def test_register(self, ingested):
        result = self.register(ingested, '--paradata', 'left wing=photogrammetry')
        assert result.exit_code == 0, result.output
        assert json.loads(result.stdout) == {
            'object_id': 'aldr-0003', 'level': 2, 'format': 'GLB', 'path': 'models/aldr-0003.glb',
            'size_bytes': 4200000, 'texture_max_px': 4096, 'licence': 'CC-BY',
            'paradata': [{'region': 'left wing', 'method': 'photogrammetry'}],
        }
        again = self.register(ingested)
        assert again.exit_code == 1
        assert 'duplicate level 2 for aldr-0003' in again.stderr

    def test_register_rejects_raw_level2(self, ingested):
        result = ingested.invoke(args=['asset', 'register', 'aldr-0003', '2', 'obj', 'm.obj', '--size', '10'])
        assert result.exit_code == 1
        assert 'level 2 must be glTF/GLB' in result.stderr

    def test_register_rejects_repeated_paradata(self, ingested):
        result = self.register(ingested, '--paradata', 'base=SLS', '--paradata', 'base =SLS')
        assert result.exit_code == 1
        assert 'duplicate paradata base=SLS' in result.stderr
        assert self.register(ingested).exit_code == 0

    def test_size_needed_for_missing_file(self, ingested):
        result = ingested.invoke(args=['asset', 'register', 'aldr-0003', '2', 'glb', 'nowhere.glb'])
        assert result.exit_code == 2

    def test_paradata(self, ingested):
        self.register(ingested)
        result = ingested.invoke(args=['asset', 'paradata', 'aldr-0003', '2', 'base', 'CG modelling'])
        assert result.exit_code == 0
        assert json.loads(result.stdout)['paradata'] == [{'region': 'base', 'method': 'CG modelling'}]

    def test_scene_create_and_show(self, ingested):
        self.register(ingested)
        created = ingested.invoke(args=['scene', 'create', '--item', 'aldr-0003', '--title', 'Room 1', '--seed', '5'])
        assert created.exit_code == 0, created.output
        scene = json.loads(created.stdout)
        assert scene['items'] == [{'object_id': 'aldr-0003', 'level': 2}]
        shown = ingested.invoke(args=['scene', 'show', scene['scene_id']])
        assert shown.stdout == created.stdout
        exported = ingested.invoke(args=['export', 'scene', scene['scene_id']])
        assert exported.stdout == created.stdout
        record = json.loads(ingested.invoke(args=['export', 'record', 'aldr-0003']).stdout)
        assert record['scenes'] == [scene['scene_id']]

    def test_scene_needs_registered_assets(self, ingested):
        result = ingested.invoke(args=['scene', 'create', '--item', 'aldr-0150', '--title', 'Empty'])
        assert result.exit_code == 1
        assert 'unregistered asset aldr-0150/l2' in result.stderr


class TestValidateGlb:

    def test_valid(self, runner, tmp_path):
        path = tmp_path / 'model.glb'
        path.write_bytes(glb_bytes())
        result = runner.invoke(args=['asset', 'validate-glb', str(path)])
        assert result.exit_code == 0
        assert json.loads(result.stdout)['chunks'] == [{'type': 'JSON', 'length': 28}]

    def test_invalid(self, runner, tmp_path):
        path = tmp_path / 'model.glb'
        path.write_bytes(glb_bytes(magic=b'gltf'))
        result = runner.invoke(args=['asset', 'validate-glb', str(path)])
        assert result.exit_code == 1
        assert result.stdout == 'bad magic\n'


def test_workflow(ingested):
    result = ingested.invoke(args=['workflow'])
    assert result.exit_code == 0
    summary = json.loads(result.stdout)
    assert summary['records'] == 4
    assert summary['total_stages'] == 17
    assert summary['stages'] == {
        'Acquisition': 3, 'Processing': 3, 'Modelling': 3, 'Optimisation': 2,
        'Export': 3, 'MetadataCreation': 1, 'Upload': 2,
    }
    assert summary['techniques'] == {'SLS': 1, 'photogrammetry': 2, 'reuse of existing model': 1}
    assert summary['span'] == {'start': '2022-03-01', 'end': '2022-06-10'}
