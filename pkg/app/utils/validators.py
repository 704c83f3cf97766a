"""Validation reports and syntactic validators shared across modules"""

import re
from dataclasses import dataclass, field
from typing import Iterable, Optional, Tuple

IRI_PATTERN = re.compile(r'[A-Za-z][A-Za-z0-9+.\-]*:[^\s<>"{}|\\^`]+')


@dataclass(frozen=True)
class Violation:
    """A single failed rule, optionally located at a (row, column) coordinate"""
    message: str
    row: Optional[int] = None
    column: Optional[str] = None

    def __str__(self) -> str:
        if self.row is None and self.column is None:
            return self.message
        where = f'row {self.row}' if self.row is not None else ''
        if self.column:
            where = f'{where}, column {self.column!r}' if where else f'column {self.column!r}'
        return f'{where}: {self.message}'


@dataclass(frozen=True)
class ValidationReport:
    """Outcome of a validation; ok iff no violations were collected"""
    violations: Tuple[Violation, ...] = field(default_factory=tuple)

    @property
    def ok(self) -> bool:
        return not self.violations

    @property
    def messages(self) -> list:
        return [v.message for v in self.violations]

    @classmethod
    def of(cls, violations: Iterable[Violation]) -> 'ValidationReport':
        return cls(tuple(violations))

    @classmethod
    def from_messages(cls, messages: Iterable[str], row=None, column=None) -> 'ValidationReport':
        return cls(tuple(Violation(m, row, column) for m in messages))

    def located(self, row=None, column=None) -> 'ValidationReport':
        """Return a copy whose unlocated violations carry the given coordinates"""
        return ValidationReport(tuple(
            Violation(v.message,
                      v.row if v.row is not None else row,
                      v.column if v.column is not None else column)
            for v in self.violations
        ))


OK = ValidationReport()


def is_valid_iri(value: str) -> bool:
    """Absolute IRI: scheme, colon, no whitespace or N-Triples-forbidden characters"""
    return bool(value) and IRI_PATTERN.fullmatch(value) is not None


def is_digit_string(value: str, min_len: int, max_len: int) -> bool:
    return value.isascii() and value.isdigit() and min_len <= len(value) <= max_len
