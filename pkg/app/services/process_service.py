"""Digitisation workflow service: stage recording, process validation, summaries"""

import logging
from collections import Counter
from dataclasses import dataclass, field
from datetime import date, datetime
from typing import Dict, Iterable, List, Optional, Sequence

from app.exceptions.process_exceptions import DuplicateStageError, InvalidStageError
from app.schemas.process_schema import (
    EQUIPMENT, DateInterval, EquipmentSpec, ProcessRecord, StageRecord, WorkflowStage,
)
from app.utils.constants import LIST_SEPARATOR, REUSE_TECHNIQUE, TECHNIQUES
from app.utils.validators import ValidationReport, Violation

logger = logging.getLogger(__name__)


def technique_vocabulary(extra: Iterable[str] = ()) -> tuple:
    """Fixed techniques plus any configured extensions, order preserved"""
    terms = list(TECHNIQUES)
    for term in extra:
        term = term.strip()
        if term and term not in terms:
            terms.append(term)
    return tuple(terms)


def validate_stage(sr: StageRecord, techniques: Sequence[str] = TECHNIQUES) -> ValidationReport:
    violations = []
    if not sr.institution.strip():
        violations.append(Violation('institution must not be empty', column='institution'))
    if not [p for p in sr.people if p.strip()]:
        violations.append(Violation('people must not be empty', column='people'))
    if sr.dates.start > sr.dates.end:
        violations.append(Violation('start date after end date', column='start_date'))
    if sr.stage == WorkflowStage.ACQUISITION and not sr.technique:
        violations.append(Violation('acquisition requires a technique', column='technique'))
    if sr.technique and sr.technique not in techniques:
        violations.append(Violation(f'unknown technique {sr.technique!r}', column='technique'))
    return ValidationReport.of(violations)


def cross_reference_equipment(sr: StageRecord) -> List[EquipmentSpec]:
    """Resolve a stage's tools against the equipment catalogue (exact name match)"""
    by_name = {spec.name.lower(): spec for spec in EQUIPMENT}
    return [by_name[tool.strip().lower()] for tool in sr.tools if tool.strip().lower() in by_name]


def record_stage(proc: ProcessRecord, sr: StageRecord,
                 techniques: Sequence[str] = TECHNIQUES) -> ProcessRecord:
    """
    Add a stage record to a process record

    Args:
        proc: Current process record (left unmodified)
        sr: Stage record to add
        techniques: Technique vocabulary in force

    Returns:
        New process record with the stage inserted in ordinal order

    Raises:
        DuplicateStageError: If the stage is already recorded
        InvalidStageError: If the stage record breaks its invariants
    """
    if proc.stage(sr.stage) is not None:
        raise DuplicateStageError(proc.object_id, sr.stage)

    report = validate_stage(sr, techniques)
    if not report.ok:
        raise InvalidStageError(report)

    equipment = cross_reference_equipment(sr)
    if equipment:
        logger.info('Stage equipment cross-referenced', extra={
            'object_id': proc.object_id,
            'stage': int(sr.stage),
            'equipment': [spec.name for spec in equipment],
        })

    stages = tuple(sorted(proc.stages + (sr,), key=lambda s: s.stage))
    return ProcessRecord(proc.object_id, stages)


def validate_process(proc: ProcessRecord, techniques: Sequence[str] = TECHNIQUES) -> ValidationReport:
    """
    Validate a whole process record

    Rules:
        - every stage record is valid and appears once
        - start dates never decrease along the stage order
        - an Upload needs an Export
        - stages after acquisition need an Acquisition, unless the model was reused
    """
    violations = []
    seen = Counter(sr.stage for sr in proc.stages)
    for stage, count in sorted(seen.items()):
        if count > 1:
            violations.append(Violation(f'duplicate stage {int(stage)}'))

    for sr in proc.stages:
        for v in validate_stage(sr, techniques).violations:
            violations.append(Violation(f'stage {int(sr.stage)}: {v.message}', column=v.column))

    ordered = sorted(proc.stages, key=lambda s: s.stage)
    for i, later in enumerate(ordered):
        for earlier in ordered[:i]:
            if later.stage > earlier.stage and later.dates.start < earlier.dates.start:
                violations.append(Violation(
                    f'stage {int(later.stage)} starts before stage {int(earlier.stage)}'))

    present = set(seen)
    if WorkflowStage.UPLOAD in present and WorkflowStage.EXPORT not in present:
        violations.append(Violation('Upload without Export'))
    if (any(stage >= WorkflowStage.PROCESSING for stage in present)
            and WorkflowStage.ACQUISITION not in present
            and proc.technique != REUSE_TECHNIQUE):
        violations.append(Violation('missing Acquisition'))

    return ValidationReport.of(violations)


@dataclass(frozen=True)
class WorkflowSummary:
    stage_counts: Dict[int, int]
    technique_counts: Dict[str, int]
    span: Optional[DateInterval] = None
    records: int = 0
    total_stages: int = field(default=0)

    def to_dict(self) -> Dict:
        return {
            'records': self.records,
            'total_stages': self.total_stages,
            'stages': {WorkflowStage(k).label: v for k, v in sorted(self.stage_counts.items())},
            'techniques': dict(sorted(self.technique_counts.items())),
            'span': self.span.to_dict() if self.span else None,
        }


def summarize_workflow(dataset: Sequence[ProcessRecord]) -> WorkflowSummary:
    """Per-stage and per-technique counts plus the overall date span"""
    stage_counts = {int(stage): 0 for stage in WorkflowStage}
    technique_counts = Counter()
    starts, ends = [], []

    for proc in dataset:
        for sr in proc.stages:
            stage_counts[int(sr.stage)] += 1
            if sr.technique:
                technique_counts[sr.technique] += 1
            starts.append(sr.dates.start)
            ends.append(sr.dates.end)

    span = DateInterval(min(starts), max(ends)) if starts else None
    return WorkflowSummary(
        stage_counts=stage_counts,
        technique_counts=dict(technique_counts),
        span=span,
        records=len(dataset),
        total_stages=sum(stage_counts.values()),
    )


def _parse_date(value: str) -> date:
    return datetime.strptime(value.strip(), '%Y-%m-%d').date()


def _split_list(cell: str) -> tuple:
    return tuple(item.strip() for item in cell.split(LIST_SEPARATOR) if item.strip())


def stage_from_row(row: Dict[str, str]) -> StageRecord:
    """
    Build a stage record from one digitisation table row

    Raises:
        ValueError: If stage or dates cannot be converted
    """
    start = _parse_date(row['start_date'])
    end = _parse_date(row['end_date']) if row.get('end_date', '').strip() else start
    return StageRecord(
        stage=WorkflowStage(int(row['stage'])),
        institution=row.get('institution', '').strip(),
        people=_split_list(row.get('people', '')),
        tools=_split_list(row.get('tools', '')),
        technique=row.get('technique', '').strip() or None,
        dates=DateInterval(start, end),
    )


def build_process_records(rows: Iterable[Dict[str, str]],
                          techniques: Sequence[str] = TECHNIQUES):
    """
    Fold digitisation rows into process records, one per object

    Returns:
        (records by object id, report of rows that could not be recorded)
    """
    records: Dict[str, ProcessRecord] = {}
    violations = []
    for index, row in enumerate(rows, start=1):
        object_id = row.get('object_id', '').strip()
        try:
            sr = stage_from_row(row)
            proc = records.get(object_id, ProcessRecord(object_id))
            records[object_id] = record_stage(proc, sr, techniques)
        except (ValueError, KeyError) as e:
            violations.append(Violation(f'cannot read stage: {e}', row=index))
        except (DuplicateStageError, InvalidStageError) as e:
            violations.append(Violation(e.message, row=index))
    return records, ValidationReport.of(violations)


def process_from_document(document: Dict) -> ProcessRecord:
    """Rebuild a process record from its stored JSON projection"""
    stages = tuple(
        StageRecord(
            stage=WorkflowStage(entry['stage']),
            institution=entry['institution'],
            people=tuple(entry['people']),
            tools=tuple(entry.get('tools', ())),
            technique=entry.get('technique'),
            dates=DateInterval(date.fromisoformat(entry['start']), date.fromisoformat(entry['end'])),
        )
        for entry in document.get('stages', ())
    )
    return ProcessRecord(document['object_id'], stages)
