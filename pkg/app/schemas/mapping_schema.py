"""Tables, table schemas and the row-oriented mapping document"""

from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, Iterator, Optional, Tuple, Union

from rdflib import URIRef

from app.schemas.catalog_schema import Authority


@dataclass(frozen=True)
class Table:
    header: Tuple[str, ...]
    rows: Tuple[Tuple[str, ...], ...] = field(default_factory=tuple)

    def __post_init__(self):
        if any(not name for name in self.header):
            raise ValueError('column names must be non-empty')
        if len(set(self.header)) != len(self.header):
            raise ValueError('column names must be unique')
        for index, row in enumerate(self.rows, start=1):
            if len(row) != len(self.header):
                raise ValueError(f'row {index} has {len(row)} cells, header has {len(self.header)}')

    def records(self) -> Iterator[Dict[str, str]]:
        for row in self.rows:
            yield dict(zip(self.header, row))

    def __len__(self) -> int:
        return len(self.rows)


class ConstraintKind(str, Enum):
    TEXT = 'text'
    VOCAB = 'vocab'
    AUTHORITY = 'authority'
    DATE = 'date'
    INTEGER = 'integer'
    AGENTS = 'agents'


@dataclass(frozen=True)
class ColumnConstraint:
    kind: ConstraintKind = ConstraintKind.TEXT
    vocabulary: Optional[str] = None
    authority: Optional[Authority] = None
    minimum: Optional[int] = None
    maximum: Optional[int] = None
    multivalued: bool = False

    @classmethod
    def text(cls, multivalued=False):
        return cls(ConstraintKind.TEXT, multivalued=multivalued)

    @classmethod
    def vocab(cls, name: str, multivalued=False):
        return cls(ConstraintKind.VOCAB, vocabulary=name, multivalued=multivalued)

    @classmethod
    def authority_of(cls, authority: Authority, multivalued=False):
        return cls(ConstraintKind.AUTHORITY, authority=authority, multivalued=multivalued)

    @classmethod
    def integer(cls, minimum=None, maximum=None):
        return cls(ConstraintKind.INTEGER, minimum=minimum, maximum=maximum)

    @classmethod
    def date(cls):
        return cls(ConstraintKind.DATE)

    @classmethod
    def agents(cls):
        return cls(ConstraintKind.AGENTS, multivalued=True)


@dataclass(frozen=True)
class TableSchema:
    name: str
    columns: Tuple[Tuple[str, ColumnConstraint], ...]
    required: Tuple[str, ...] = field(default_factory=tuple)

    @property
    def column_names(self) -> Tuple[str, ...]:
        return tuple(name for name, _ in self.columns)

    def constraint(self, column: str) -> Optional[ColumnConstraint]:
        return dict(self.columns).get(column)

    def is_multivalued(self, column: str) -> bool:
        constraint = self.constraint(column)
        return bool(constraint and constraint.multivalued)


C = ColumnConstraint

BIBLIOGRAPHIC_SCHEMA = TableSchema(
    name='bibliographic',
    columns=(
        ('id', C.text()),
        ('title', C.text()),
        ('object_type', C.vocab('object_type')),
        ('room', C.integer(1, 6)),
        ('creators', C.agents()),
        ('holder', C.authority_of(Authority.WIKIDATA)),
        ('holder_name', C.text()),
        ('place', C.authority_of(Authority.GEONAMES)),
        ('notes', C.text()),
        ('parts', C.integer(1)),
        ('licence', C.vocab('licence')),
    ),
    required=('id', 'title', 'object_type', 'room'),
)

DIGITISATION_SCHEMA = TableSchema(
    name='digitisation',
    columns=(
        ('object_id', C.text()),
        ('stage', C.integer(1, 7)),
        ('institution', C.text()),
        ('people', C.text(multivalued=True)),
        ('technique', C.vocab('technique')),
        ('tools', C.text(multivalued=True)),
        ('start_date', C.date()),
        ('end_date', C.date()),
        ('output_level', C.integer(0, 2)),
    ),
    required=('object_id', 'stage', 'institution', 'people', 'start_date'),
)

del C

SCHEMAS = {schema.name: schema for schema in (BIBLIOGRAPHIC_SCHEMA, DIGITISATION_SCHEMA)}


@dataclass(frozen=True)
class LiteralSpec:
    column: str
    language: Optional[str] = None
    datatype: Optional[URIRef] = None


@dataclass(frozen=True)
class IriSpec:
    template: str


@dataclass(frozen=True)
class VocabSpec:
    column: str
    vocabulary: str


@dataclass(frozen=True)
class AuthoritySpec:
    column: str
    authority: Authority


ObjectSpec = Union[LiteralSpec, IriSpec, VocabSpec, AuthoritySpec]


@dataclass(frozen=True)
class MappingRule:
    map_name: str
    subject_template: Optional[str]
    predicate: URIRef
    object_spec: ObjectSpec
    line: int = 0
    condition: Optional[Tuple[str, str]] = None

    def applies_to(self, record: Dict[str, str]) -> bool:
        if self.condition is None:
            return True
        column, value = self.condition
        return record.get(column, '').strip() == value


@dataclass(frozen=True)
class MappingDoc:
    prefixes: Tuple[Tuple[str, str], ...]
    base: str
    rules: Tuple[MappingRule, ...]

    @property
    def prefix_map(self) -> Dict[str, str]:
        return dict(self.prefixes)

    @property
    def maps(self) -> Tuple[str, ...]:
        names = []
        for rule in self.rules:
            if rule.map_name not in names:
                names.append(rule.map_name)
        return tuple(names)

    @property
    def predicates(self) -> frozenset:
        return frozenset(rule.predicate for rule in self.rules)
