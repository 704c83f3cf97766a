"""Binary glTF container checks (header and chunk framing only)"""

import struct
from typing import Dict, List

from app.utils.validators import ValidationReport

GLB_MAGIC = b'glTF'
GLB_VERSION = 2
HEADER_SIZE = 12
CHUNK_HEADER_SIZE = 8
CHUNK_TYPES = {
    0x4E4F534A: 'JSON',
    0x004E4942: 'BIN',
}
CHUNK_JSON = 0x4E4F534A


def validate_glb_header(data: bytes) -> ValidationReport:
    """
    Check a GLB container: magic, version 2, declared length equal to the
    actual length, and a structured-content (JSON) first chunk

    Header problems are reported together; chunks are only inspected once
    the header is sound.
    """
    if not data:
        return ValidationReport.from_messages(['empty file'])
    if len(data) < HEADER_SIZE:
        return ValidationReport.from_messages(['truncated header'])

    magic, version, length = struct.unpack_from('<4sII', data, 0)
    messages = []
    if magic != GLB_MAGIC:
        messages.append('bad magic')
    if version != GLB_VERSION:
        messages.append(f'unsupported version {version}')
    if length != len(data):
        messages.append('length mismatch')
    if messages:
        return ValidationReport.from_messages(messages)

    chunks = _walk_chunks(data)
    if not chunks:
        return ValidationReport.from_messages(['missing first chunk'])
    messages = [problem for _, _, problem in chunks if problem]
    if chunks[0][0] != CHUNK_JSON:
        messages.insert(0, 'first chunk is not JSON')
    return ValidationReport.from_messages(messages)


def _walk_chunks(data: bytes) -> List[tuple]:
    """(type, length, problem) per chunk; framing stops at the first overflow"""
    chunks = []
    offset = HEADER_SIZE
    while offset < len(data):
        if offset + CHUNK_HEADER_SIZE > len(data):
            chunks.append((None, 0, f'truncated chunk header at byte {offset}'))
            break
        chunk_length, chunk_type = struct.unpack_from('<II', data, offset)
        end = offset + CHUNK_HEADER_SIZE + chunk_length
        if end > len(data):
            chunks.append((chunk_type, chunk_length, f'chunk at byte {offset} overruns the file'))
            break
        chunks.append((chunk_type, chunk_length, None))
        offset = end
    return chunks


def glb_summary(data: bytes) -> Dict:
    """Header fields and chunk list of a container that passed validation"""
    _, version, length = struct.unpack_from('<4sII', data, 0)
    return {
        'version': version,
        'length': length,
        'chunks': [
            {'type': CHUNK_TYPES.get(chunk_type, hex(chunk_type or 0)), 'length': chunk_length}
            for chunk_type, chunk_length, _ in _walk_chunks(data)
        ],
    }
