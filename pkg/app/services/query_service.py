"""Basic graph pattern queries: text parser, evaluator, selector dispatch and TSV output"""

import logging
import re
from dataclasses import dataclass
from datetime import datetime
from typing import Dict, Iterable, List, Optional, Set, Tuple

from rdflib import Graph, Literal, URIRef, Variable

from app.exceptions.query_exceptions import QueryParseError, SelectorError
from app.schemas.rdf_schema import BgpQuery, DeltaSide, format_timestamp, nt_term, to_utc
from app.utils.validators import is_valid_iri

logger = logging.getLogger(__name__)

Binding = Tuple

VARIABLE_NAME = re.compile(r'[A-Za-z_][A-Za-z0-9_]*')
LANGUAGE_TAG = re.compile(r'[A-Za-z]+(-[A-Za-z0-9]+)*')
STRING_ESCAPES = {'t': '\t', 'n': '\n', 'r': '\r', '"': '"', '\\': '\\', "'": "'", 'b': '\b', 'f': '\f'}


class _PatternReader:
    """Reads whitespace-separated, ``.``-terminated triple patterns"""

    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def error(self, message: str, offset: int = None):
        raise QueryParseError(message, self.pos if offset is None else offset)

    def skip_space(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def at_end(self) -> bool:
        self.skip_space()
        return self.pos >= len(self.text)

    def read_iri(self) -> URIRef:
        start = self.pos
        end = self.text.find('>', start + 1)
        if end < 0:
            self.error('unterminated IRI', start)
        value = self.text[start + 1:end]
        if not is_valid_iri(value):
            self.error(f'not an absolute IRI: <{value}>', start)
        self.pos = end + 1
        return URIRef(value)

    def read_variable(self) -> Variable:
        start = self.pos
        match = VARIABLE_NAME.match(self.text, start + 1)
        if not match:
            self.error('bad variable name', start)
        self.pos = match.end()
        return Variable(match.group(0))

    def read_literal(self) -> Literal:
        start = self.pos
        self.pos += 1
        chars = []
        while True:
            if self.pos >= len(self.text):
                self.error('unterminated literal', start)
            ch = self.text[self.pos]
            if ch == '"':
                self.pos += 1
                break
            if ch == '\\':
                escaped = self.text[self.pos + 1:self.pos + 2]
                if escaped not in STRING_ESCAPES:
                    self.error('bad escape in literal')
                chars.append(STRING_ESCAPES[escaped])
                self.pos += 2
                continue
            chars.append(ch)
            self.pos += 1
        lexical = ''.join(chars)

        if self.text.startswith('@', self.pos):
            match = LANGUAGE_TAG.match(self.text, self.pos + 1)
            if not match:
                self.error('bad language tag')
            self.pos = match.end()
            return Literal(lexical, lang=match.group(0))
        if self.text.startswith('^^', self.pos):
            self.pos += 2
            if not self.text.startswith('<', self.pos):
                self.error('datatype must be an IRI')
            return Literal(lexical, datatype=self.read_iri())
        return Literal(lexical)

    def read_term(self):
        self.skip_space()
        if self.pos >= len(self.text):
            self.error('unexpected end of pattern')
        ch = self.text[self.pos]
        if ch == '<':
            return self.read_iri()
        if ch == '?':
            return self.read_variable()
        if ch == '"':
            return self.read_literal()
        self.error(f'unexpected character {ch!r}')

    def read_pattern(self):
        start = self.pos
        subject, predicate, obj = self.read_term(), self.read_term(), self.read_term()
        if isinstance(subject, Literal):
            self.error('literal in subject position', start)
        if isinstance(predicate, Literal):
            self.error('literal in predicate position', start)
        self.skip_space()
        if self.pos < len(self.text):
            if self.text[self.pos] != '.':
                self.error("expected '.'")
            self.pos += 1
        return subject, predicate, obj


def parse_term(text: str):
    """Parse a single IRI or literal in N-Triples form"""
    reader = _PatternReader(text)
    term = reader.read_term()
    if not reader.at_end():
        reader.error('trailing characters after term')
    return term


def parse_query(text: str) -> BgpQuery:
    """
    Parse the text form of a basic graph pattern

    Terms are ``?var``, ``<iri>`` or quoted literals with an optional
    ``@lang`` or ``^^<datatype>``; each pattern ends with ``.`` (optional
    after the last one).

    Raises:
        QueryParseError: With the character offset of the problem
    """
    reader = _PatternReader(text)
    patterns = []
    while not reader.at_end():
        patterns.append(reader.read_pattern())
    if not patterns:
        raise QueryParseError('empty pattern', 0)
    return BgpQuery(tuple(patterns))


def graph_of(triples: Iterable) -> Graph:
    graph = Graph()
    for s, p, o, *_ in triples:
        graph.add((s, p, o))
    return graph


def evaluate_bgp(query: BgpQuery, graph: Graph) -> Set[Binding]:
    """
    Nested-loop evaluation of a conjunctive pattern over an rdflib graph

    Returns:
        Set of bindings, each a tuple aligned with ``query.variables``
    """
    variables = query.variables
    patterns = query.patterns
    results: Set[Binding] = set()

    def extend(index: int, binding: Dict[Variable, object]):
        if index == len(patterns):
            results.add(tuple(binding[v] for v in variables))
            return
        resolved = tuple(binding.get(t, t) if isinstance(t, Variable) else t
                         for t in patterns[index])
        lookup = tuple(None if isinstance(t, Variable) else t for t in resolved)
        for match in graph.triples(lookup):
            candidate = dict(binding)
            for term, value in zip(resolved, match):
                if isinstance(term, Variable):
                    if candidate.get(term, value) != value:
                        break
                    candidate[term] = value
            else:
                extend(index + 1, candidate)

    extend(0, {})
    return results


class QueryMode:
    AT = 'at'
    CROSS_VERSION = 'cross-version'
    DELTA = 'delta'
    CROSS_DELTA = 'cross-delta'

    ALL = (AT, CROSS_VERSION, DELTA, CROSS_DELTA)


@dataclass(frozen=True)
class QuerySelector:
    """Which of the store's query functionalities to run; ``at`` defaults to latest"""
    mode: str = QueryMode.AT
    at: Optional[datetime] = None
    entity: Optional[str] = None
    k: Optional[int] = None
    side: DeltaSide = DeltaSide.INSERTIONS

    def __post_init__(self):
        if self.mode not in QueryMode.ALL:
            raise SelectorError(f'unknown query mode {self.mode!r}')
        if self.mode == QueryMode.DELTA and (self.entity is None or self.k is None):
            raise SelectorError('delta queries need an entity and a snapshot ordinal')
        if self.mode != QueryMode.AT and self.at is not None:
            raise SelectorError('--at only applies to single-version queries')
        if self.at is not None:
            object.__setattr__(self, 'at', to_utc(self.at))
        try:
            object.__setattr__(self, 'side', DeltaSide(self.side))
        except ValueError:
            raise SelectorError(f'unknown delta side {self.side!r}')
        if self.k is not None and (isinstance(self.k, bool) or not isinstance(self.k, int)):
            raise SelectorError(f'snapshot ordinal must be an integer, got {self.k!r}')


def render_tsv(columns: List[str], rows: Iterable[Iterable[str]]) -> str:
    lines = sorted('\t'.join(row) for row in rows)
    return '\t'.join(columns) + '\n' + ''.join(line + '\n' for line in lines)


def run_query(store, text: str, selector: QuerySelector = None) -> str:
    """
    Parse a pattern, dispatch to the selected store functionality and
    render the answer as TSV (header row, N-Triples terms, sorted rows)

    Raises:
        QueryParseError: If the pattern does not parse
        SelectorError: If the selector flags are inconsistent
        UnknownEntityError, UnknownSnapshotError: For delta selectors
    """
    selector = selector or QuerySelector()
    query = parse_query(text)
    names = [str(v) for v in query.variables]

    if selector.mode == QueryMode.AT:
        bindings = store.query_at(query, selector.at)
        output = render_tsv(names, ([nt_term(t) for t in b] for b in bindings))
    elif selector.mode == QueryMode.CROSS_VERSION:
        hits = store.query_cross_version(query)
        output = render_tsv(['from', 'to'] + names,
                            ([*interval.render(), *(nt_term(t) for t in b)] for interval, b in hits))
    elif selector.mode == QueryMode.DELTA:
        bindings = store.query_delta(query, store.resolve(selector.entity), selector.k, selector.side)
        output = render_tsv(names, ([nt_term(t) for t in b] for b in bindings))
    else:
        hits = store.query_cross_delta(query)
        output = render_tsv(['snapshot', 'side'] + names,
                            ([nt_term(sid), side.value, *(nt_term(t) for t in b)]
                             for sid, side, b in hits))

    logger.info('Query evaluated', extra={
        'mode': selector.mode,
        'at': format_timestamp(selector.at) if selector.at else None,
        'rows': output.count('\n') - 1,
    })
    return output
