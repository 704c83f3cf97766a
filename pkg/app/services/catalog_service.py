"""Catalog service: authority validation and expansion, catalog record validation"""

import logging
import re
from typing import Dict, List

from app.exceptions.catalog_exceptions import InvalidAuthorityError
from app.schemas.catalog_schema import (
    Authority, AuthorityRef, CatalogRecord, Creator, Iri, LicenceVocab, ObjectTypeVocab,
)
from app.utils.constants import AUTHORITY_BASES, LIST_SEPARATOR, ROOMS
from app.utils.validators import ValidationReport, Violation, is_digit_string

logger = logging.getLogger(__name__)

WIKIDATA_PATTERN = re.compile(r'Q[0-9]+')

# authority -> (min digits, max digits) for purely numeric identifiers
DIGIT_RULES = {
    Authority.VIAF: (1, 22),
    Authority.GEONAMES: (1, 22),
    Authority.ULAN: (1, 12),
}


def validate_authority_ref(ref: AuthorityRef) -> ValidationReport:
    """
    Check an authority identifier against its authority's syntax

    Args:
        ref: Authority reference to check

    Returns:
        Report whose violations name the failed rule
    """
    identifier = ref.identifier
    if not identifier:
        return ValidationReport.from_messages(['empty identifier'])

    if ref.authority is Authority.WIKIDATA:
        if not WIKIDATA_PATTERN.fullmatch(identifier):
            return ValidationReport.from_messages(['Wikidata id must match Q+digits'])
        return ValidationReport()

    low, high = DIGIT_RULES[ref.authority]
    if not is_digit_string(identifier, low, high):
        return ValidationReport.from_messages(
            [f'{ref.authority.value} id must be {low}-{high} decimal digits'])
    return ValidationReport()


def expand_authority(ref: AuthorityRef) -> Iri:
    """
    Expand a valid authority reference to its canonical IRI

    Raises:
        InvalidAuthorityError: If the reference does not validate
    """
    report = validate_authority_ref(ref)
    if not report.ok:
        raise InvalidAuthorityError(ref, report)
    return Iri(AUTHORITY_BASES[ref.authority.value].format(id=ref.identifier))


def validate_agent(agent) -> List[str]:
    if isinstance(agent, AuthorityRef):
        return validate_authority_ref(agent).messages
    if not str(agent).strip():
        return ['empty agent name']
    return []


def validate_record(rec: CatalogRecord, vocab: ObjectTypeVocab = None) -> ValidationReport:
    """
    Validate a catalog record against the object-type vocabulary and its
    own invariants, including every authority reference it carries
    """
    vocab = vocab or ObjectTypeVocab()
    violations = []

    if not rec.id or not rec.id.strip():
        violations.append(Violation('empty record id', column='id'))
    if rec.object_type not in vocab:
        violations.append(Violation('unknown object type', column='object_type'))
    if rec.room not in ROOMS:
        violations.append(Violation('room out of range 1–6', column='room'))

    for message in validate_agent(rec.holder):
        violations.append(Violation(f'holder: {message}', column='holder'))
    for creator in rec.creators:
        for message in validate_agent(creator.agent):
            violations.append(Violation(f'creator {creator.role}: {message}', column='creators'))
    if rec.place is not None:
        if rec.place.authority is not Authority.GEONAMES:
            violations.append(Violation('place must be a GeoNames reference', column='place'))
        for message in validate_authority_ref(rec.place).messages:
            violations.append(Violation(f'place: {message}', column='place'))
    if rec.parts is not None and rec.parts < 1:
        violations.append(Violation('parts must be at least 1', column='parts'))

    return ValidationReport.of(violations)


def validate_unique_ids(records: List[CatalogRecord]) -> ValidationReport:
    seen = set()
    violations = []
    for index, rec in enumerate(records, start=1):
        if rec.id in seen:
            violations.append(Violation(f'duplicate record id {rec.id!r}', row=index, column='id'))
        seen.add(rec.id)
    if violations:
        logger.debug('Duplicate record ids', extra={'count': len(violations)})
    return ValidationReport.of(violations)


def parse_agent(text: str):
    """``VIAF:123``-style cells become authority references, anything else a literal name"""
    name, sep, _ = text.partition(':')
    if sep:
        try:
            Authority.parse(name)
        except ValueError:
            return text.strip()
        return AuthorityRef.parse(text)
    return text.strip()


def parse_creators(cell: str) -> List[Creator]:
    """
    Parse a creators cell: ``role=agent`` entries separated by ``|``

    Example:
        "author=VIAF:7392797|illustrator=Jacopo Ligozzi"
    """
    creators = []
    for entry in filter(None, (e.strip() for e in cell.split(LIST_SEPARATOR))):
        role, sep, agent = entry.partition('=')
        if not sep:
            role, agent = 'creator', entry
        creators.append(Creator(role.strip(), parse_agent(agent)))
    return creators


def record_from_row(row: Dict[str, str]) -> CatalogRecord:
    """
    Build a catalog record from one bibliographic table row

    Raises:
        ValueError: If a cell cannot be converted (room, licence, place, parts)
    """
    holder = row.get('holder', '').strip()
    place = row.get('place', '').strip()
    parts = row.get('parts', '').strip()
    return CatalogRecord(
        id=row['id'].strip(),
        title=row.get('title', '').strip(),
        object_type=ObjectTypeVocab.normalize(row.get('object_type', '')),
        room=int(row['room']),
        licence=LicenceVocab.parse(row.get('licence', '') or 'CC-BY'),
        holder=AuthorityRef(Authority.WIKIDATA, holder) if holder else row.get('holder_name', '').strip(),
        creators=tuple(parse_creators(row.get('creators', ''))),
        place=AuthorityRef(Authority.GEONAMES, place) if place else None,
        notes=row.get('notes', '').strip() or None,
        parts=int(parts) if parts else None,
    )

