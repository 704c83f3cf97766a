"""Tabular ingest and row-oriented crosswalk into CRM-profile triples"""

import csv
import io
import itertools
import logging
import re
from dataclasses import dataclass, field
from datetime import datetime
from pathlib import Path
from typing import Dict, Iterable, List, Optional, Tuple
from urllib.parse import quote

import pandas as pd
from rdflib import Literal, URIRef

from app.exceptions.mapping_exceptions import CsvFormatError, MappingBindError, MappingSyntaxError
from app.schemas.catalog_schema import (
    Authority, AuthorityRef, LicenceVocab, ObjectTypeVocab, slugify,
)
from app.schemas.mapping_schema import (
    AuthoritySpec, ConstraintKind, IriSpec, LiteralSpec, MappingDoc, MappingRule,
    Table, TableSchema, VocabSpec,
)
from app.schemas.rdf_schema import Triple
from app.services.catalog_service import (
    expand_authority, parse_creators, validate_agent, validate_authority_ref,
)
from app.services.process_service import technique_vocabulary
from app.utils.constants import CRMDIG, LIST_SEPARATOR, STAGE_NAMES, VOCAB_BASE
from app.utils.validators import ValidationReport, Violation, is_valid_iri

logger = logging.getLogger(__name__)

PROFILE_DIR = Path(__file__).resolve().parent.parent / 'profiles'

PLACEHOLDER = re.compile(r'\{([^{}]*)\}')
PREFIX_NAME = re.compile(r'[A-Za-z][\w\-]*')
CURIE = re.compile(r'([A-Za-z][\w\-]*):([^/].*)?')
SCHEME = re.compile(r'^[A-Za-z][A-Za-z0-9+.\-]*:')


class Vocabularies:
    """
    Named controlled vocabularies available to ``vocab:`` rules and
    ``vocab`` column constraints. Each resolves a cell label to a term IRI.
    """

    def __init__(self, extra_techniques: Iterable[str] = ()):
        self.techniques = technique_vocabulary(extra_techniques)
        self.object_types = ObjectTypeVocab()
        self._resolvers = {
            'object_type': self.object_types.term_iri,
            'technique': self._technique_iri,
            'licence': LicenceVocab.term_iri,
            'stage': self._stage_iri,
            'stage_class': self._stage_class_iri,
        }

    @property
    def names(self) -> Tuple[str, ...]:
        return tuple(self._resolvers)

    def __contains__(self, name: str) -> bool:
        return name in self._resolvers

    def resolve(self, name: str, label: str) -> Optional[str]:
        return self._resolvers[name](label)

    def _technique_iri(self, label: str) -> Optional[str]:
        label = label.strip()
        if label not in self.techniques:
            return None
        return VOCAB_BASE + 'technique/' + slugify(label)

    @staticmethod
    def _stage_number(label: str) -> Optional[int]:
        label = label.strip()
        if not label.isdigit() or int(label) not in STAGE_NAMES:
            return None
        return int(label)

    def _stage_iri(self, label: str) -> Optional[str]:
        number = self._stage_number(label)
        if number is None:
            return None
        return VOCAB_BASE + 'stage/' + slugify(STAGE_NAMES[number])

    def _stage_class_iri(self, label: str) -> Optional[str]:
        number = self._stage_number(label)
        if number is None:
            return None
        return str(CRMDIG.D2_Digitization_Process if number == 1 else CRMDIG.D10_Software_Execution)


def split_cell(cell: str, multivalued: bool) -> List[str]:
    if not multivalued:
        value = cell.strip()
        return [value] if value else []
    return [item.strip() for item in cell.split(LIST_SEPARATOR) if item.strip()]


def find_unbalanced_quote(data: bytes) -> Optional[int]:
    """Byte offset of a quote that opens a field and is never closed"""
    in_quotes = False
    field_start = True
    opened_at = None
    i, n = 0, len(data)
    while i < n:
        ch = data[i:i + 1]
        if in_quotes:
            if ch == b'"':
                if data[i + 1:i + 2] == b'"':
                    i += 1
                else:
                    in_quotes = False
        elif ch == b'"' and field_start:
            in_quotes = True
            opened_at = i
        field_start = not in_quotes and ch in (b',', b'\n', b'\r')
        i += 1
    return opened_at if in_quotes else None


def read_csv(data: bytes) -> Table:
    """
    Read RFC-4180 CSV bytes into a Table

    Raises:
        CsvFormatError: On unbalanced quotes, invalid UTF-8, a missing
            header, ragged rows or duplicate/empty column names
    """
    offset = find_unbalanced_quote(data)
    if offset is not None:
        raise CsvFormatError('unbalanced quote', offset)
    try:
        text = data.decode('utf-8')
    except UnicodeDecodeError as e:
        raise CsvFormatError('invalid UTF-8', e.start)
    text = text.lstrip('\ufeff')

    try:
        frame = pd.read_csv(io.StringIO(text), header=None, dtype=str,
                            keep_default_na=False, skip_blank_lines=True)
    except pd.errors.EmptyDataError:
        raise CsvFormatError('missing header row', 0)
    except pd.errors.ParserError as e:
        raise CsvFormatError(f'malformed CSV: {e}')

    # pandas pads short rows with empty cells, so widths come from the tokenizer
    widths = pd.Series([len(row) for row in csv.reader(io.StringIO(text)) if row])
    short = widths < frame.shape[1]
    if short.any():
        first = int(short.to_numpy().nonzero()[0][0])
        if first == 0:
            raise CsvFormatError('header is shorter than the data rows')
        raise CsvFormatError(f'row {first} has fewer cells than the header')

    values = frame.values.tolist()
    header = tuple(str(name).strip() for name in values[0])
    try:
        return Table(header=header, rows=tuple(tuple(row) for row in values[1:]))
    except ValueError as e:
        raise CsvFormatError(str(e))


def _check_cell(value: str, constraint, vocabularies: Vocabularies) -> List[str]:
    kind = constraint.kind
    if kind is ConstraintKind.TEXT:
        return []
    if kind is ConstraintKind.AGENTS:
        messages = []
        try:
            creators = parse_creators(value)
        except ValueError as e:
            return [str(e)]
        for creator in creators:
            messages.extend(f'{creator.role}: {m}' for m in validate_agent(creator.agent))
        return messages

    messages = []
    for item in split_cell(value, constraint.multivalued):
        if kind is ConstraintKind.VOCAB:
            if vocabularies.resolve(constraint.vocabulary, item) is None:
                messages.append(f'unknown {constraint.vocabulary} term {item!r}')
        elif kind is ConstraintKind.AUTHORITY:
            report = validate_authority_ref(AuthorityRef(constraint.authority, item))
            messages.extend(report.messages)
        elif kind is ConstraintKind.DATE:
            try:
                datetime.strptime(item, '%Y-%m-%d')
            except ValueError:
                messages.append(f'bad date {item!r}')
        elif kind is ConstraintKind.INTEGER:
            try:
                number = int(item)
            except ValueError:
                messages.append(f'not an integer: {item!r}')
                continue
            low, high = constraint.minimum, constraint.maximum
            if (low is not None and number < low) or (high is not None and number > high):
                bounds = f'{low}–{high}' if high is not None else f'≥ {low}'
                messages.append(f'value out of range {bounds}')
    return messages


def validate_table(table: Table, schema: TableSchema,
                   vocabularies: Vocabularies = None) -> ValidationReport:
    vocabularies = vocabularies or Vocabularies()
    violations = []
    for column in schema.required:
        if column not in table.header:
            violations.append(Violation('missing required column', column=column))

    checked = [(name, schema.constraint(name)) for name in table.header if schema.constraint(name)]
    for index, record in enumerate(table.records(), start=1):
        for name, constraint in checked:
            value = record[name]
            if not value.strip():
                if name in schema.required:
                    violations.append(Violation('empty required cell', row=index, column=name))
                continue
            for message in _check_cell(value, constraint, vocabularies):
                violations.append(Violation(message, row=index, column=name))
    return ValidationReport.of(violations)


def parse_table(data: bytes, schema: TableSchema,
                vocabularies: Vocabularies = None) -> Tuple[Table, ValidationReport]:
    """
    Parse a CSV export and validate it against a table schema

    Args:
        data: UTF-8 CSV bytes, first row is the header
        schema: Table schema (required columns and cell constraints)
        vocabularies: Vocabularies for ``vocab`` constraints

    Returns:
        (table, report); report violations carry 1-based data row numbers

    Raises:
        CsvFormatError: If the CSV itself is malformed
    """
    table = read_csv(data)
    report = validate_table(table, schema, vocabularies)
    logger.debug('Table parsed', extra={
        'schema': schema.name, 'rows': len(table), 'violations': len(report.violations),
    })
    return table, report


def _strip_comment(line: str) -> str:
    for i, ch in enumerate(line):
        if ch == '#' and (i == 0 or line[i - 1].isspace()):
            return line[:i]
    return line


def _expand(token: str, prefixes: Dict[str, str], line: int, allow_relative: bool) -> str:
    """Expand ``<iri>``, a CURIE, or (for templates) a base-relative path"""
    if token.startswith('<'):
        if not token.endswith('>'):
            raise MappingSyntaxError(f'unterminated IRI {token!r}', line)
        return token[1:-1]
    match = CURIE.fullmatch(token)
    if match:
        prefix, local = match.group(1), match.group(2) or ''
        if prefix not in prefixes:
            raise MappingSyntaxError(f'unknown prefix {prefix}', line)
        return prefixes[prefix] + local
    if allow_relative:
        return token
    raise MappingSyntaxError(f'expected an IRI or CURIE, got {token!r}', line)


def _parse_object_spec(tokens: List[str], prefixes: Dict[str, str], line: int):
    kind, sep, rest = tokens[0].partition(':')
    if not sep or not rest:
        raise MappingSyntaxError(f'bad object spec {tokens[0]!r}', line)
    options = tokens[1:]

    if kind == 'literal':
        language = datatype = None
        for option in options:
            key, eq, value = option.partition('=')
            if key == 'lang' and eq and value:
                language = value
            elif key == 'dt' and eq and value:
                datatype = URIRef(_expand(value, prefixes, line, allow_relative=False))
            else:
                raise MappingSyntaxError(f'bad literal option {option!r}', line)
        if language and datatype:
            raise MappingSyntaxError('literal cannot have both lang and dt', line)
        return LiteralSpec(rest, language, datatype)

    if kind == 'iri':
        if options:
            raise MappingSyntaxError('iri spec takes no options', line)
        return IriSpec(_expand(rest, prefixes, line, allow_relative=True))

    if kind == 'vocab':
        if len(options) != 1:
            raise MappingSyntaxError('vocab spec needs exactly one vocabulary name', line)
        return VocabSpec(rest, options[0])

    if kind == 'authority':
        if len(options) != 1:
            raise MappingSyntaxError('authority spec needs exactly one authority kind', line)
        try:
            return AuthoritySpec(rest, Authority.parse(options[0]))
        except ValueError:
            raise MappingSyntaxError(f'unknown authority {options[0]}', line)

    raise MappingSyntaxError(f'unknown object spec kind {kind!r}', line)


def parse_mapping(text: str) -> MappingDoc:
    """
    Parse a mapping document

    Grammar (one statement per line, ``#`` starts a comment):
        @prefix <name>: <IRI>
        @base <IRI>
        map <name>
        subject <template>
        po <predicate> <objectspec> [when <column>=<value>]

    Raises:
        MappingSyntaxError: On unknown or duplicate prefixes and malformed lines
    """
    prefixes: Dict[str, str] = {}
    base = ''
    rules: List[MappingRule] = []
    map_name, subject = 'default', None

    for number, raw in enumerate(text.splitlines(), start=1):
        tokens = _strip_comment(raw).split()
        if not tokens:
            continue
        keyword = tokens[0]

        if keyword == '@prefix':
            if len(tokens) not in (3, 4) or not tokens[1].endswith(':'):
                raise MappingSyntaxError('expected @prefix <name>: <IRI>', number)
            name = tokens[1][:-1]
            if not PREFIX_NAME.fullmatch(name):
                raise MappingSyntaxError(f'bad prefix name {name!r}', number)
            if name in prefixes:
                raise MappingSyntaxError(f'duplicate prefix {name}', number)
            iri = tokens[2]
            if not (iri.startswith('<') and iri.endswith('>')) or not is_valid_iri(iri[1:-1]):
                raise MappingSyntaxError(f'bad prefix IRI {iri}', number)
            prefixes[name] = iri[1:-1]
        elif keyword == '@base':
            if len(tokens) not in (2, 3) or not tokens[1].startswith('<'):
                raise MappingSyntaxError('expected @base <IRI>', number)
            base = _expand(tokens[1], prefixes, number, allow_relative=False)
            if not is_valid_iri(base):
                raise MappingSyntaxError(f'bad base IRI {base!r}', number)
        elif keyword == 'map':
            if len(tokens) != 2:
                raise MappingSyntaxError('expected map <name>', number)
            map_name, subject = tokens[1], None
        elif keyword == 'subject':
            if len(tokens) != 2:
                raise MappingSyntaxError('expected subject <template>', number)
            subject = _expand(tokens[1], prefixes, number, allow_relative=True)
        elif keyword == 'po':
            condition = None
            if 'when' in tokens:
                at = tokens.index('when')
                guard = tokens[at + 1:]
                column, eq, value = guard[0].partition('=') if len(guard) == 1 else ('', '', '')
                if not (column and eq and value):
                    raise MappingSyntaxError('expected when <column>=<value>', number)
                condition, tokens = (column, value), tokens[:at]
            if len(tokens) < 3:
                raise MappingSyntaxError('expected po <predicate> <objectspec>', number)
            predicate = _expand(tokens[1], prefixes, number, allow_relative=False)
            if not is_valid_iri(predicate):
                raise MappingSyntaxError(f'predicate is not an IRI: {predicate!r}', number)
            spec = _parse_object_spec(tokens[2:], prefixes, number)
            rules.append(MappingRule(map_name, subject, URIRef(predicate), spec, number, condition))
        else:
            raise MappingSyntaxError(f'unknown statement {keyword!r}', number)

    return MappingDoc(prefixes=tuple(prefixes.items()), base=base, rules=tuple(rules))


def template_columns(template: str) -> List[str]:
    return PLACEHOLDER.findall(template)


def _spec_columns(spec) -> List[str]:
    if isinstance(spec, IriSpec):
        return template_columns(spec.template)
    return [spec.column]


def _condition_columns(rule: MappingRule) -> List[str]:
    return [rule.condition[0]] if rule.condition else []


def bind_mapping(doc: MappingDoc, schema: TableSchema, vocabularies: Vocabularies = None) -> MappingDoc:
    """
    Check that every rule resolves against a table schema

    Raises:
        MappingBindError: Naming the rule's line on the first unbound column,
            unknown vocabulary or missing subject
    """
    vocabularies = vocabularies or Vocabularies()
    columns = set(schema.column_names)
    for rule in doc.rules:
        if rule.subject_template is None:
            raise MappingBindError(f'rule in map {rule.map_name!r} has no subject', rule.line)
        used = template_columns(rule.subject_template) + _spec_columns(rule.object_spec) + _condition_columns(rule)
        for column in used:
            if column not in columns:
                raise MappingBindError(f'unbound placeholder column {column!r}', rule.line)
        if isinstance(rule.object_spec, VocabSpec) and rule.object_spec.vocabulary not in vocabularies:
            raise MappingBindError(f'unknown vocabulary {rule.object_spec.vocabulary!r}', rule.line)
    return doc


@dataclass(frozen=True)
class RowTriples:
    row: int
    entity: Optional[URIRef]
    triples: frozenset = field(default_factory=frozenset)


@dataclass(frozen=True)
class MappingResult:
    rows: Tuple[RowTriples, ...]
    report: ValidationReport

    @property
    def triples(self) -> frozenset:
        """The emitted triple set (duplicates collapse)"""
        return frozenset().union(*(r.triples for r in self.rows))

    def by_entity(self) -> Dict[URIRef, frozenset]:
        grouped: Dict[URIRef, set] = {}
        for r in self.rows:
            if r.entity is not None:
                grouped.setdefault(r.entity, set()).update(r.triples)
        return {entity: frozenset(triples) for entity, triples in grouped.items()}


class _RowMapper:

    def __init__(self, doc: MappingDoc, schema: TableSchema, vocabularies: Vocabularies, base: str):
        self.doc = doc
        self.schema = schema
        self.vocabularies = vocabularies
        self.base = base

    def values(self, record: Dict[str, str], column: str) -> List[str]:
        return split_cell(record.get(column, ''), self.schema.is_multivalued(column))

    def instantiate(self, template: str, record: Dict[str, str]) -> List[str]:
        """All expansions of a template; empty when a placeholder cell is empty"""
        columns = template_columns(template)
        choices = [self.values(record, column) for column in columns]
        if any(not options for options in choices):
            return []
        parts = PLACEHOLDER.split(template)
        results = []
        for combo in itertools.product(*choices):
            pieces = list(parts)
            for slot, value in enumerate(combo):
                pieces[2 * slot + 1] = quote(value, safe='')
            iri = ''.join(pieces)
            results.append(iri if SCHEME.match(iri) else self.base + iri)
        return results

    def objects(self, spec, record: Dict[str, str], row: int, violations: list):
        if isinstance(spec, IriSpec):
            return [URIRef(iri) for iri in self.instantiate(spec.template, record)]

        items = self.values(record, spec.column)
        if isinstance(spec, LiteralSpec):
            return [Literal(item, lang=spec.language, datatype=spec.datatype) for item in items]

        nodes = []
        for item in items:
            if isinstance(spec, VocabSpec):
                iri = self.vocabularies.resolve(spec.vocabulary, item)
                if iri is None:
                    violations.append(Violation(
                        f'unknown {spec.vocabulary} term {item!r}', row=row, column=spec.column))
                    continue
                nodes.append(URIRef(iri))
            else:
                ref = AuthorityRef(spec.authority, item)
                report = validate_authority_ref(ref)
                if not report.ok:
                    violations.extend(report.located(row, spec.column).violations)
                    continue
                nodes.append(URIRef(str(expand_authority(ref))))
        return nodes

    def map_row(self, record: Dict[str, str], row: int, violations: list) -> RowTriples:
        primary = self.doc.rules[0].subject_template
        entities = self.instantiate(primary, record)
        if not entities:
            violations.append(Violation('row has no subject', row=row))
            return RowTriples(row, None)

        triples = set()
        for rule in self.doc.rules:
            if not rule.applies_to(record):
                continue
            subjects = self.instantiate(rule.subject_template, record)
            if not subjects:
                continue
            for obj in self.objects(rule.object_spec, record, row, violations):
                for subject in subjects:
                    if not is_valid_iri(subject) or (isinstance(obj, URIRef) and not is_valid_iri(obj)):
                        violations.append(Violation('not an absolute IRI', row=row))
                        continue
                    triples.add(Triple(URIRef(subject), rule.predicate, obj))
        return RowTriples(row, URIRef(entities[0]), frozenset(triples))


def apply_mapping(table: Table, doc: MappingDoc, schema: TableSchema,
                  vocabularies: Vocabularies = None, base: str = None) -> MappingResult:
    """
    Map every row of a table through a mapping document

    An empty object cell skips the rule for that row; an empty subject
    placeholder skips the whole map for that row. Vocabulary misses and
    invalid authority identifiers are collected in the report while the
    row's other rules still apply.

    Args:
        table: Parsed table
        doc: Mapping document
        schema: Schema the document is bound against
        vocabularies: Vocabularies for ``vocab:`` rules
        base: Overrides the document's ``@base``

    Returns:
        MappingResult; ``triples`` is the emitted set, ``rows`` keeps the
        per-row grouping under each row's entity (first map's subject)

    Raises:
        MappingBindError: If the document does not bind to the schema
    """
    vocabularies = vocabularies or Vocabularies()
    bind_mapping(doc, schema, vocabularies)
    if not doc.rules:
        return MappingResult((), ValidationReport())

    mapper = _RowMapper(doc, schema, vocabularies, base if base is not None else doc.base)
    violations: List[Violation] = []
    rows = tuple(
        mapper.map_row(record, index, violations)
        for index, record in enumerate(table.records(), start=1)
    )
    return MappingResult(rows, ValidationReport.of(violations))


def load_profile(name: str) -> MappingDoc:
    return parse_mapping((PROFILE_DIR / f'{name}.map').read_text(encoding='utf-8'))


def load_mapping(profile: str) -> MappingDoc:
    """A builtin profile name or a path to a mapping document"""
    if (PROFILE_DIR / f'{profile}.map').is_file():
        return load_profile(profile)
    return parse_mapping(Path(profile).read_text(encoding='utf-8'))


def crm_profiles() -> Tuple[MappingDoc, MappingDoc]:
    """The shipped bibliographic and digitisation profiles"""
    return load_profile('bibliographic'), load_profile('digitisation')
