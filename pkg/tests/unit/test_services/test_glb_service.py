import struct

import pytest

from app.services.glb_service import CHUNK_JSON, glb_summary, validate_glb_header

CHUNK_BIN = 0x004E4942


def chunk(kind, payload, declared=None):
    return struct.pack('<II', len(payload) if declared is None else declared, kind) + payload


def glb(*chunks, magic=b'glTF', version=2, length=None):
    body = b''.join(chunks)
    total = 12 + len(body)
    return struct.pack('<4sII', magic, version, total if length is None else length) + body


SCENE = chunk(CHUNK_JSON, b'{"asset":{"version":"2.0"}}\x20')
MESH = chunk(CHUNK_BIN, b'\x00' * 16)


@pytest.mark.parametrize('data, messages', [
    (glb(SCENE, MESH), []),
    (glb(SCENE), []),
    (b'', ['empty file']),
    (b'glTF\x02\x00\x00\x00', ['truncated header']),
    (glb(SCENE, magic=b'gltf'), ['bad magic']),
    (glb(SCENE, version=1), ['unsupported version 1']),
    (glb(SCENE, length=10_000), ['length mismatch']),
    (glb(SCENE, magic=b'PK\x03\x04', version=3, length=1), ['bad magic', 'unsupported version 3', 'length mismatch']),
    (glb(MESH, SCENE), ['first chunk is not JSON']),
    (glb(), ['missing first chunk']),
    (glb(chunk(CHUNK_JSON, b'{}  ', declared=400)), ['chunk at byte 12 overruns the file']),
    (glb(SCENE, b'\x01\x02'), ['truncated chunk header at byte 48']),
])
def test_validate_glb_header(data, messages):
    assert validate_glb_header(data).messages == messages


def test_summary():
    data = glb(SCENE, MESH)
    assert glb_summary(data) == {
        'version': 2,
        'length': len(data),
        'chunks': [{'type': 'JSON', 'length': 28}, {'type': 'BIN', 'length': 16}],
    }
