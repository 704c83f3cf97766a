"""Bibliographic value types: IRIs, authority references, vocabularies, catalog records"""

import re
from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, Optional, Tuple, Union

from app.utils.constants import (
    OBJECT_TYPES, LICENCES, CUSTOM_LICENCE_PREFIX, VOCAB_BASE,
)
from app.utils.validators import is_valid_iri


@dataclass(frozen=True, order=True)
class Iri:
    value: str

    def __post_init__(self):
        if not is_valid_iri(self.value):
            raise ValueError(f'Not an absolute IRI: {self.value!r}')

    def __str__(self) -> str:
        return self.value


class Authority(str, Enum):
    VIAF = 'VIAF'
    ULAN = 'ULAN'
    WIKIDATA = 'Wikidata'
    GEONAMES = 'GeoNames'

    @classmethod
    def parse(cls, name: str) -> 'Authority':
        """Case-insensitive lookup by authority name"""
        for member in cls:
            if member.value.lower() == name.strip().lower():
                return member
        raise ValueError(f'Unknown authority {name!r}')


@dataclass(frozen=True)
class AuthorityRef:
    authority: Authority
    identifier: str

    @classmethod
    def parse(cls, text: str) -> 'AuthorityRef':
        """Parse the ``Authority:identifier`` cell form, e.g. ``VIAF:7392797``"""
        name, sep, identifier = text.partition(':')
        if not sep:
            raise ValueError(f'Authority reference needs the Authority:id form: {text!r}')
        return cls(Authority.parse(name), identifier.strip())

    def __str__(self) -> str:
        return f'{self.authority.value}:{self.identifier}'


def slugify(label: str) -> str:
    return re.sub(r'[^a-z0-9]+', '-', label.lower()).strip('-')


@dataclass(frozen=True)
class ObjectTypeVocab:
    """Ordered object-type labels, each resolving to a term IRI"""
    terms: Tuple[str, ...] = OBJECT_TYPES
    base: str = VOCAB_BASE + 'object-type/'

    @staticmethod
    def normalize(label: str) -> str:
        return label.strip()

    def __contains__(self, label: str) -> bool:
        return self.normalize(label) in self.terms

    def __len__(self) -> int:
        return len(self.terms)

    def term_iri(self, label: str) -> Optional[str]:
        label = self.normalize(label)
        if label not in self.terms:
            return None
        return self.base + slugify(label)

    def label_for(self, iri: str) -> Optional[str]:
        for label in self.terms:
            if self.base + slugify(label) == iri:
                return label
        return None


@dataclass(frozen=True)
class Licence:
    """A licence term: one of the Creative Commons codes or a custom label"""
    code: str
    label: Optional[str] = None

    @property
    def is_custom(self) -> bool:
        return self.code == 'custom'

    @property
    def iri(self) -> str:
        if self.is_custom:
            return VOCAB_BASE + 'licence/custom/' + slugify(self.label)
        return LICENCES[self.code]

    def __str__(self) -> str:
        return f'{CUSTOM_LICENCE_PREFIX}{self.label}' if self.is_custom else self.code


class LicenceVocab:
    """Licence vocabulary; ``custom:<label>`` admits any non-empty label"""

    terms = tuple(LICENCES)

    @staticmethod
    def parse(text: str) -> Licence:
        text = text.strip()
        if text.startswith(CUSTOM_LICENCE_PREFIX):
            label = text[len(CUSTOM_LICENCE_PREFIX):].strip()
            if not label:
                raise ValueError('custom licence needs a label')
            return Licence('custom', label)
        if text not in LICENCES:
            raise ValueError(f'Unknown licence {text!r}')
        return Licence(text)

    @classmethod
    def term_iri(cls, text: str) -> Optional[str]:
        try:
            return cls.parse(text).iri
        except ValueError:
            return None


Agent = Union[AuthorityRef, str]


@dataclass(frozen=True)
class Creator:
    role: str
    agent: Agent

    def to_dict(self) -> Dict:
        return {'role': self.role, 'agent': str(self.agent)}


@dataclass(frozen=True)
class CatalogRecord:
    id: str
    title: str
    object_type: str
    room: int
    licence: Licence
    holder: Agent
    creators: Tuple[Creator, ...] = field(default_factory=tuple)
    place: Optional[AuthorityRef] = None
    notes: Optional[str] = None
    parts: Optional[int] = None

    def to_dict(self) -> Dict:
        return {
            'id': self.id,
            'title': self.title,
            'type': self.object_type,
            'room': self.room,
            'creators': [c.to_dict() for c in self.creators],
            'holder': str(self.holder),
            'place': str(self.place) if self.place else None,
            'notes': self.notes,
            'parts': self.parts,
            'licence': str(self.licence),
        }
