"""Graph statements, deltas and snapshots"""

from dataclasses import dataclass, field
from datetime import datetime, timezone
from enum import Enum
from typing import FrozenSet, Iterable, NamedTuple, Optional, Tuple, Union

from rdflib import BNode, Literal, URIRef, Variable
from rdflib.term import Node

from app.utils.constants import TIMESTAMP_FORMAT
from app.utils.validators import is_valid_iri

_ESCAPES = str.maketrans({"\\": "\\\\", "\"": "\\\"", "\n": "\\n", "\r": "\\r"})


def nt_term(node: Node) -> str:
    """N-Triples form of a term; literals always stay on one line"""
    if isinstance(node, URIRef):
        return f'<{node}>'
    if isinstance(node, Literal):
        text = '"' + str(node).translate(_ESCAPES) + '"'
        if node.language:
            return f'{text}@{node.language}'
        if node.datatype is not None:
            return f'{text}^^<{node.datatype}>'
        return text
    if isinstance(node, Variable):
        return f'?{node}'
    if isinstance(node, BNode):
        return f'_:{node}'
    raise TypeError(f'not an RDF term: {node!r}')


class Triple(NamedTuple):
    subject: URIRef
    predicate: URIRef
    object: Node

    def nt(self) -> str:
        """N-Triples line without the trailing newline"""
        return f'{nt_term(self.subject)} {nt_term(self.predicate)} {nt_term(self.object)} .'


class Quad(NamedTuple):
    subject: URIRef
    predicate: URIRef
    object: Node
    graph: URIRef

    @property
    def triple(self) -> Triple:
        return Triple(self.subject, self.predicate, self.object)

    def nq(self) -> str:
        return (f'{nt_term(self.subject)} {nt_term(self.predicate)} '
                f'{nt_term(self.object)} {nt_term(self.graph)} .')


def make_triple(subject: str, predicate: str, obj: Node) -> Triple:
    """
    Build a triple, checking that subject and predicate are absolute IRIs

    Raises:
        ValueError: If subject, predicate or an object IRI is not absolute
    """
    for label, value in (('subject', subject), ('predicate', predicate)):
        if not is_valid_iri(str(value)):
            raise ValueError(f'{label} is not an absolute IRI: {value!r}')
    if isinstance(obj, URIRef) and not is_valid_iri(str(obj)):
        raise ValueError(f'object is not an absolute IRI: {obj!r}')
    return Triple(URIRef(subject), URIRef(predicate), obj)


def graph_iri(entity: Union[str, URIRef]) -> URIRef:
    """Data graph of an entity"""
    return URIRef(f'{entity}/graph')


def prov_graph_iri(entity: Union[str, URIRef]) -> URIRef:
    return URIRef(f'{entity}/prov/')


def snapshot_iri(entity: Union[str, URIRef], ordinal: int) -> URIRef:
    return URIRef(f'{entity}/prov/se/{ordinal}')


def lift(triples: Iterable[Triple], entity) -> FrozenSet[Quad]:
    """Place triples into the entity's data graph"""
    g = graph_iri(entity)
    return frozenset(Quad(t[0], t[1], t[2], g) for t in triples)


def canonical_lines(statements: Iterable) -> list:
    """Sorted N-Triples/N-Quads lines for triples or quads"""
    return sorted(s.nq() if isinstance(s, Quad) else Triple(*s).nt() for s in statements)


def canonical_text(statements: Iterable) -> str:
    lines = canonical_lines(statements)
    return ''.join(line + '\n' for line in lines)


def to_utc(at: datetime) -> datetime:
    """Timezone-aware UTC at second resolution; naive values are taken as UTC"""
    if at.tzinfo is None:
        at = at.replace(tzinfo=timezone.utc)
    return at.astimezone(timezone.utc).replace(microsecond=0)


def format_timestamp(at: datetime) -> str:
    return to_utc(at).strftime(TIMESTAMP_FORMAT)


@dataclass(frozen=True)
class Delta:
    insertions: FrozenSet[Quad] = field(default_factory=frozenset)
    deletions: FrozenSet[Quad] = field(default_factory=frozenset)

    def __post_init__(self):
        object.__setattr__(self, 'insertions', frozenset(self.insertions))
        object.__setattr__(self, 'deletions', frozenset(self.deletions))
        if self.insertions & self.deletions:
            raise ValueError('a delta cannot insert and delete the same quad')

    @property
    def is_empty(self) -> bool:
        return not self.insertions and not self.deletions

    def apply(self, graph: FrozenSet[Quad]) -> FrozenSet[Quad]:
        return (frozenset(graph) - self.deletions) | self.insertions


def invert_delta(d: Delta) -> Delta:
    """Swap insertions and deletions"""
    return Delta(insertions=d.deletions, deletions=d.insertions)


@dataclass(frozen=True)
class CommitMeta:
    """Provenance of a commit; ``at`` is supplied by the caller (UTC, seconds)"""
    agent: Node
    description: str
    at: datetime
    source: Optional[URIRef] = None

    def __post_init__(self):
        object.__setattr__(self, 'at', to_utc(self.at))

    @classmethod
    def of(cls, agent: str, description: str, at: datetime, source: str = None) -> 'CommitMeta':
        """Agents that parse as IRIs become IRIs, anything else a literal"""
        agent_term = URIRef(agent) if is_valid_iri(agent) else Literal(agent)
        return cls(agent_term, description, at, URIRef(source) if source else None)


@dataclass(frozen=True)
class Snapshot:
    id: URIRef
    entity: URIRef
    ordinal: int
    valid_from: datetime
    agent: Node
    description: str
    delta: Delta
    valid_to: Optional[datetime] = None
    primary_source: Optional[URIRef] = None
    prev: Optional[URIRef] = None

    def contains(self, at: datetime) -> bool:
        return self.valid_from <= at and (self.valid_to is None or at < self.valid_to)


class DeltaSide(str, Enum):
    INSERTIONS = 'insertions'
    DELETIONS = 'deletions'

    def of(self, delta: Delta) -> FrozenSet[Quad]:
        return delta.insertions if self is DeltaSide.INSERTIONS else delta.deletions


TriplePattern = Tuple[Node, Node, Node]


@dataclass(frozen=True)
class BgpQuery:
    """Conjunction of triple patterns; positions are rdflib terms or Variables"""
    patterns: Tuple[TriplePattern, ...]

    def __post_init__(self):
        object.__setattr__(self, 'patterns', tuple(tuple(p) for p in self.patterns))
        if not self.patterns:
            raise ValueError('a query needs at least one triple pattern')
        for pattern in self.patterns:
            if len(pattern) != 3:
                raise ValueError(f'triple pattern must have three positions: {pattern!r}')

    @property
    def variables(self) -> Tuple[Variable, ...]:
        """Variables in order of first appearance"""
        seen = []
        for pattern in self.patterns:
            for term in pattern:
                if isinstance(term, Variable) and term not in seen:
                    seen.append(term)
        return tuple(seen)


@dataclass(frozen=True)
class VersionInterval:
    """Half-open run of dataset versions ``[start, end)``; open end when ``end`` is None"""
    start: datetime
    end: Optional[datetime] = None

    def render(self) -> Tuple[str, str]:
        return format_timestamp(self.start), format_timestamp(self.end) if self.end else '-'
