"""Provenance export: per-entity update-text blocks and full-store N-Quads dumps"""

import logging
import re
from dataclasses import dataclass
from datetime import datetime
from typing import Dict, List, Optional, Tuple

from dateutil.parser import isoparse
from rdflib import Dataset, Graph, Literal, URIRef
from rdflib.namespace import DCTERMS, PROV, RDF, XSD
from rdflib.term import Node

from app.exceptions import TwinError
from app.exceptions.store_exceptions import ProvenanceFormatError
from app.schemas.rdf_schema import (
    CommitMeta, Delta, Quad, Snapshot, format_timestamp, nt_term, prov_graph_iri,
)
from app.services.query_service import parse_term
from app.services.version_store import VersionedStore
from app.utils.constants import DEFAULT_BASE_IRI, OCO

logger = logging.getLogger(__name__)

SNAPSHOT_ID = re.compile(r'(?P<entity>.+)/prov/se/(?P<ordinal>[1-9][0-9]*)')
HEADER_FIELDS = ('snapshot', 'valid', 'agent', 'source', 'description', 'prev')


def _escape(text: str) -> str:
    return text.replace('\\', '\\\\').replace('\n', '\\n').replace('\r', '\\r')


def _unescape(text: str) -> str:
    return re.sub(r'\\(.)', lambda m: {'n': '\n', 'r': '\r'}.get(m.group(1), m.group(1)), text)


def _data_block(keyword: str, quads) -> List[str]:
    by_graph: Dict[URIRef, List[str]] = {}
    for quad in quads:
        by_graph.setdefault(quad.graph, []).append(quad.triple.nt())
    lines = []
    for graph in sorted(by_graph):
        lines.append(f'{keyword} DATA {{ GRAPH {nt_term(graph)} {{')
        lines.extend(sorted(by_graph[graph]))
        lines.append('} };')
    return lines


def update_text(delta: Delta) -> str:
    """The delta as update-language text, deletions first"""
    lines = _data_block('DELETE', delta.deletions) + _data_block('INSERT', delta.insertions)
    return ''.join(line + '\n' for line in lines)


def _snapshot_block(snapshot: Snapshot) -> str:
    valid_to = format_timestamp(snapshot.valid_to) if snapshot.valid_to else '-'
    header = [
        f'# snapshot {nt_term(snapshot.id)}',
        f'# valid {format_timestamp(snapshot.valid_from)}/{valid_to}',
        f'# agent {nt_term(snapshot.agent)}',
        f'# source {nt_term(snapshot.primary_source) if snapshot.primary_source else "-"}',
        f'# description {_escape(snapshot.description)}',
        f'# prev {nt_term(snapshot.prev) if snapshot.prev else "-"}',
    ]
    return ''.join(line + '\n' for line in header) + update_text(snapshot.delta)


def serialize_prov(store: VersionedStore, entity) -> str:
    """
    Export an entity's snapshot chain, one block per snapshot in ordinal order

    Raises:
        UnknownEntityError: If the entity has no chain
    """
    return '\n'.join(_snapshot_block(s) for s in store.chain(entity))


@dataclass(frozen=True)
class ParsedSnapshot:
    id: URIRef
    entity: URIRef
    ordinal: int
    meta: CommitMeta
    delta: Delta


def _parse_triples(lines: List[str], graph: URIRef, line: int) -> frozenset:
    parsed = Graph()
    try:
        parsed.parse(data=''.join(text + '\n' for text in lines), format='nt')
    except Exception as e:
        raise ProvenanceFormatError(f'bad triple data: {e}', line)
    return frozenset(Quad(s, p, o, graph) for s, p, o in parsed)


def parse_update(text: str, first_line: int = 1) -> Delta:
    """
    Parse ``DELETE DATA``/``INSERT DATA`` blocks back into a delta

    Raises:
        ProvenanceFormatError: On lines outside the block grammar
    """
    sides = {'DELETE': set(), 'INSERT': set()}
    opening = re.compile(r'(DELETE|INSERT) DATA \{ GRAPH <([^>]+)> \{')
    current = None
    for number, raw in enumerate(text.splitlines(), start=first_line):
        if current is None:
            if not raw.strip():
                continue
            match = opening.fullmatch(raw)
            if not match:
                raise ProvenanceFormatError(f'expected DELETE DATA or INSERT DATA, got {raw!r}', number)
            current = (match.group(1), URIRef(match.group(2)), [], number)
        elif raw == '} };':
            keyword, graph, lines, start = current
            sides[keyword].update(_parse_triples(lines, graph, start))
            current = None
        else:
            current[2].append(raw)
    if current is not None:
        raise ProvenanceFormatError('unterminated data block', current[3])
    try:
        return Delta(insertions=sides['INSERT'], deletions=sides['DELETE'])
    except ValueError as e:
        raise ProvenanceFormatError(str(e))


def _split_snapshot_id(sid: str, line: int) -> Tuple[URIRef, int]:
    match = SNAPSHOT_ID.fullmatch(sid)
    if not match:
        raise ProvenanceFormatError(f'not a snapshot IRI: {sid}', line)
    return URIRef(match.group('entity')), int(match.group('ordinal'))


def _term(text: str, line: int) -> Optional[Node]:
    if text == '-':
        return None
    try:
        return parse_term(text)
    except TwinError as e:
        raise ProvenanceFormatError(e.message, line)


def parse_prov(text: str) -> List[ParsedSnapshot]:
    """
    Parse provenance text (one or more entities' blocks) in file order

    Raises:
        ProvenanceFormatError: With the offending line number
    """
    lines = text.splitlines()
    blocks: List[Tuple[int, List[str]]] = []
    for number, raw in enumerate(lines, start=1):
        if raw.startswith('# snapshot '):
            blocks.append((number, []))
        elif not blocks:
            if raw.strip():
                raise ProvenanceFormatError('content before the first snapshot header', number)
            continue
        blocks[-1][1].append(raw)

    parsed = []
    for start, block in blocks:
        header: Dict[str, str] = {}
        for offset, field in enumerate(HEADER_FIELDS):
            raw = block[offset] if offset < len(block) else ''
            prefix = f'# {field} '
            if not raw.startswith(prefix):
                raise ProvenanceFormatError(f'expected "# {field}" header', start + offset)
            header[field] = raw[len(prefix):]

        sid = _term(header['snapshot'], start)
        entity, ordinal = _split_snapshot_id(str(sid), start)
        try:
            valid_from = isoparse(header['valid'].split('/', 1)[0])
        except ValueError:
            raise ProvenanceFormatError('bad validity interval', start + 1)
        source = _term(header['source'], start + 3)
        meta = CommitMeta(
            agent=_term(header['agent'], start + 2),
            description=_unescape(header['description']),
            at=valid_from,
            source=source,
        )
        body = '\n'.join(block[len(HEADER_FIELDS):])
        delta = parse_update(body, start + len(HEADER_FIELDS))
        parsed.append(ParsedSnapshot(sid, entity, ordinal, meta, delta))
    return parsed


def replay_prov(text: str, store: VersionedStore = None) -> VersionedStore:
    """Replay parsed provenance blocks into a store (a new empty one by default)"""
    store = store if store is not None else VersionedStore()
    for snap in parse_prov(text):
        store.append(snap.entity, snap.ordinal, snap.delta, snap.meta)
    return store


def _prov_quads(snapshot: Snapshot) -> List[Quad]:
    g = prov_graph_iri(snapshot.entity)
    se = snapshot.id
    quads = [
        Quad(se, RDF.type, PROV.Entity, g),
        Quad(se, PROV.specializationOf, snapshot.entity, g),
        Quad(se, PROV.generatedAtTime,
             Literal(format_timestamp(snapshot.valid_from), datatype=XSD.dateTime), g),
        Quad(se, PROV.wasAttributedTo, snapshot.agent, g),
        Quad(se, DCTERMS.description, Literal(snapshot.description), g),
        Quad(se, OCO.hasUpdateQuery, Literal(update_text(snapshot.delta)), g),
    ]
    if snapshot.valid_to:
        quads.append(Quad(se, PROV.invalidatedAtTime,
                          Literal(format_timestamp(snapshot.valid_to), datatype=XSD.dateTime), g))
    if snapshot.primary_source:
        quads.append(Quad(se, PROV.hadPrimarySource, snapshot.primary_source, g))
    if snapshot.prev:
        quads.append(Quad(se, PROV.wasDerivedFrom, snapshot.prev, g))
    return quads


def dump_nquads(store: VersionedStore) -> str:
    """Sorted N-Quads: every entity's head data graph plus its provenance graph"""
    lines = [quad.nq() for entity in store.entities for quad in store.head(entity)]
    lines.extend(quad.nq() for entity in store.entities
                 for snapshot in store.chain(entity) for quad in _prov_quads(snapshot))
    return ''.join(line + '\n' for line in sorted(lines))


def load_dump(text: str, base_iri: str = DEFAULT_BASE_IRI) -> VersionedStore:
    """
    Rebuild a store from a dump by replaying each snapshot's update query

    Raises:
        ProvenanceFormatError: If the dump is unreadable or its data graphs
            disagree with the replayed history
    """
    dataset = Dataset()
    try:
        dataset.parse(data=text, format='nquads')
    except Exception as e:
        raise ProvenanceFormatError(f'bad N-Quads: {e}')

    snapshots: Dict[URIRef, Dict[URIRef, Node]] = {}
    data: Dict[URIRef, set] = {}
    for s, p, o, context in dataset.quads((None, None, None, None)):
        graph = URIRef(getattr(context, 'identifier', context))
        if str(graph).endswith('/prov/'):
            snapshots.setdefault(s, {})[p] = o
        else:
            data.setdefault(graph, set()).add(Quad(s, p, o, graph))

    ordered = []
    for sid, props in snapshots.items():
        entity, ordinal = _split_snapshot_id(str(sid), None)
        try:
            at: datetime = isoparse(str(props[PROV.generatedAtTime]))
            meta = CommitMeta(
                agent=props[PROV.wasAttributedTo],
                description=str(props.get(DCTERMS.description, '')),
                at=at,
                source=props.get(PROV.hadPrimarySource),
            )
            delta = parse_update(str(props[OCO.hasUpdateQuery]))
        except KeyError as e:
            raise ProvenanceFormatError(f'snapshot {sid} lacks {e.args[0]}')
        ordered.append((str(entity), ordinal, entity, delta, meta))

    store = VersionedStore(base_iri)
    for _, ordinal, entity, delta, meta in sorted(ordered, key=lambda item: item[:2]):
        store.append(entity, ordinal, delta, meta)

    replayed = {quad for entity in store.entities for quad in store.head(entity)}
    if replayed != set().union(*data.values()):
        raise ProvenanceFormatError('data graphs disagree with the replayed history')
    logger.info('Dump loaded', extra={'entities': len(store), 'snapshots': store.snapshot_count})
    return store
