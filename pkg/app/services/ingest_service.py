"""Ingest service: CSV exports -> validated tables -> CRM triples -> entity snapshots"""

import json
import logging
import os
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path
from typing import Dict, List, Optional, Set, Tuple

from rdflib import URIRef

from app.exceptions import TwinError
from app.exceptions.mapping_exceptions import InputFileError
from app.repositories.base_repository import BaseRepository
from app.repositories.catalog_repository import CatalogEntryRepository, ProcessEntryRepository
from app.schemas.catalog_schema import CatalogRecord
from app.schemas.mapping_schema import BIBLIOGRAPHIC_SCHEMA, DIGITISATION_SCHEMA, MappingDoc, TableSchema
from app.schemas.process_schema import ProcessRecord
from app.schemas.rdf_schema import CommitMeta, Delta, Snapshot, lift
from app.services.catalog_service import record_from_row, validate_record, validate_unique_ids
from app.services.mapping_service import (
    MappingResult, Vocabularies, apply_mapping, bind_mapping, load_mapping, parse_table,
)
from app.services.process_service import (
    build_process_records, cross_reference_equipment, validate_process,
)
from app.services.store_service import StoreService
from app.services.version_store import VersionedStore
from app.utils.validators import Violation

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class IngestConfig:
    """
    What to ingest and how to attribute it

    Profiles are builtin profile names or paths to mapping documents.
    """
    bibliographic_csv: Path
    digitisation_csv: Optional[Path] = None
    bibliographic_profile: str = 'bibliographic'
    digitisation_profile: str = 'digitisation'
    base_iri: Optional[str] = None
    agent: str = 'https://example.org/aldrovandi/agent/ingest'
    at: Optional[datetime] = None
    source: Optional[str] = None
    extra_techniques: Tuple[str, ...] = ()

    @property
    def inputs(self) -> List[Path]:
        return [Path(p) for p in (self.bibliographic_csv, self.digitisation_csv) if p is not None]

    def check(self):
        """
        Raises:
            InputFileError: If an input is missing or unreadable
        """
        for path in self.inputs:
            if not path.is_file():
                raise InputFileError(path, 'no such file')
            if not os.access(path, os.R_OK):
                raise InputFileError(path)


@dataclass
class IngestReport:
    created: int = 0
    updated: int = 0
    unchanged: int = 0
    rejected_rows: int = 0
    errors: List[str] = field(default_factory=list)
    warnings: List[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.errors

    @property
    def committed(self) -> int:
        return self.created + self.updated

    def render(self) -> str:
        lines = [f'error: {m}' for m in self.errors]
        lines.extend(f'warning: {m}' for m in self.warnings)
        lines.append(f'created {self.created}, updated {self.updated}, '
                     f'unchanged {self.unchanged}, rejected rows {self.rejected_rows}')
        return ''.join(line + '\n' for line in lines)


def _read(path: Path) -> bytes:
    try:
        return path.read_bytes()
    except OSError as e:
        raise InputFileError(path, e.strerror or 'cannot read file')


def _dump(document: dict) -> str:
    return json.dumps(document, sort_keys=True, ensure_ascii=False)


@dataclass
class _Dataset:
    """One parsed, validated and mapped input table"""
    schema: TableSchema
    records: List[Tuple[int, Dict[str, str]]]
    mapping: Optional[MappingResult] = None
    bad_rows: Set[int] = field(default_factory=set)

    def reject(self, report: IngestReport, violation: Violation):
        report.errors.append(f'{self.schema.name} {violation}')
        if violation.row is not None:
            self.bad_rows.add(violation.row)

    @property
    def good_records(self) -> List[Tuple[int, Dict[str, str]]]:
        return [(row, record) for row, record in self.records if row not in self.bad_rows]


class IngestService:
    """Runs one ingest against a loaded store and persists what it commits"""

    def __init__(self, store_service: StoreService = None):
        self.store_service = store_service or StoreService()
        self.catalog_repo = CatalogEntryRepository()
        self.process_repo = ProcessEntryRepository()

    def _load(self, path: Path, schema: TableSchema, doc: MappingDoc, vocabularies: Vocabularies,
              base: Optional[str], report: IngestReport) -> _Dataset:
        table, table_report = parse_table(_read(path), schema, vocabularies)
        dataset = _Dataset(schema, list(enumerate(table.records(), start=1)))
        for violation in table_report.violations:
            dataset.reject(report, violation)
        if any(v.row is None for v in table_report.violations):
            # a structural problem (missing required column) rejects every row
            dataset.bad_rows.update(row for row, _ in dataset.records)
        dataset.mapping = apply_mapping(table, doc, schema, vocabularies, base)
        for violation in dataset.mapping.report.violations:
            if violation.row not in dataset.bad_rows:
                dataset.reject(report, violation)
        return dataset

    def _catalog_records(self, dataset: _Dataset, report: IngestReport) -> Dict[str, CatalogRecord]:
        pairs = []
        for row, record in dataset.good_records:
            try:
                rec = record_from_row(record)
            except ValueError as e:
                dataset.reject(report, Violation(f'cannot read record: {e}', row=row))
                continue
            for violation in validate_record(rec).located(row=row).violations:
                dataset.reject(report, violation)
            pairs.append((row, rec))
        for violation in validate_unique_ids([rec for _, rec in pairs]).violations:
            dataset.reject(report, Violation(violation.message, pairs[violation.row - 1][0], violation.column))
        return {rec.id: rec for row, rec in pairs if row not in dataset.bad_rows}

    def _process_records(self, dataset: _Dataset, techniques, report: IngestReport) -> Dict[str, ProcessRecord]:
        good = dataset.good_records
        records, proc_report = build_process_records([record for _, record in good], techniques)
        for violation in proc_report.violations:
            dataset.reject(report, Violation(violation.message, good[violation.row - 1][0], violation.column))
        for object_id, proc in sorted(records.items()):
            for violation in validate_process(proc, techniques).violations:
                report.warnings.append(f'digitisation object {object_id!r}: {violation.message}')
        return records

    def _collect(self, dataset: _Dataset, report: IngestReport, merged: Dict[URIRef, set]):
        for row_triples in dataset.mapping.rows:
            if row_triples.row in dataset.bad_rows or row_triples.entity is None:
                continue
            merged.setdefault(row_triples.entity, set()).update(row_triples.triples)
        report.rejected_rows += len(dataset.bad_rows)

    def _commit(self, store: VersionedStore, entity: URIRef, triples: set, cfg: IngestConfig,
                at: datetime, report: IngestReport) -> Optional[Snapshot]:
        if entity not in store:
            meta = CommitMeta.of(cfg.agent, f"The entity '{entity}' has been created.", at, cfg.source)
            snapshot = store.create_entity(entity, triples, meta)
            report.created += 1
            return snapshot

        head = store.head(entity)
        target = lift(triples, entity)
        delta = Delta(insertions=target - head, deletions=head - target)
        if delta.is_empty:
            report.unchanged += 1
            return None
        meta = CommitMeta.of(cfg.agent, f"The entity '{entity}' has been modified.", at, cfg.source)
        snapshot = store.update_entity(entity, delta, meta)
        report.updated += 1
        return snapshot

    def ingest(self, store: VersionedStore, cfg: IngestConfig) -> IngestReport:
        """
        Parse, validate, map and commit one ingest

        Rows with validation violations are rejected (hard errors) and the
        rest are still committed. Entities absent from this ingest are left
        untouched; an entity whose triples did not change is reported as
        unchanged.

        Args:
            store: Loaded store; commits are applied to it in memory
            cfg: Ingest configuration

        Returns:
            IngestReport with per-row errors, warnings and commit counts

        Raises:
            InputFileError: If an input cannot be read
            CsvFormatError: If an input is not well-formed CSV
            MappingSyntaxError, MappingBindError: If a profile is unusable
        """
        cfg.check()
        vocabularies = Vocabularies(cfg.extra_techniques)
        at = cfg.at or datetime.now(timezone.utc)
        report = IngestReport()

        bib_doc = bind_mapping(load_mapping(cfg.bibliographic_profile), BIBLIOGRAPHIC_SCHEMA, vocabularies)
        dig_doc = None
        if cfg.digitisation_csv is not None:
            dig_doc = bind_mapping(load_mapping(cfg.digitisation_profile), DIGITISATION_SCHEMA, vocabularies)

        bibliographic = self._load(Path(cfg.bibliographic_csv), BIBLIOGRAPHIC_SCHEMA, bib_doc,
                                   vocabularies, cfg.base_iri, report)
        catalog = self._catalog_records(bibliographic, report)
        merged: Dict[URIRef, set] = {}
        self._collect(bibliographic, report, merged)

        processes: Dict[str, ProcessRecord] = {}
        if dig_doc is not None:
            digitisation = self._load(Path(cfg.digitisation_csv), DIGITISATION_SCHEMA, dig_doc,
                                      vocabularies, cfg.base_iri, report)
            processes = self._process_records(digitisation, vocabularies.techniques, report)
            self._collect(digitisation, report, merged)

        snapshots = []
        for entity in sorted(merged):
            try:
                snapshot = self._commit(store, entity, merged[entity], cfg, at, report)
            except TwinError as e:
                report.errors.append(f'{entity}: {e.message}')
                logger.warning('Update rejected', extra={'entity': str(entity), 'reason': e.message})
                continue
            if snapshot is not None:
                snapshots.append(snapshot)

        try:
            for snapshot in snapshots:
                self.store_service.persist(snapshot, commit=False)
            for object_id, rec in catalog.items():
                self.catalog_repo.upsert(object_id, _dump(rec.to_dict()), commit=False)
            for object_id, proc in processes.items():
                self.process_repo.upsert(object_id, _dump(self._process_document(proc)), commit=False)
            BaseRepository.commit()
        except Exception:
            BaseRepository.rollback()
            raise

        logger.info('Ingest completed', extra={
            'created_count': report.created,
            'updated': report.updated,
            'unchanged': report.unchanged,
            'rejected_rows': report.rejected_rows,
            'warnings': len(report.warnings),
        })
        return report

    @staticmethod
    def _process_document(proc: ProcessRecord) -> dict:
        document = proc.to_dict()
        for stage, sr in zip(document['stages'], proc.stages):
            stage['equipment'] = [spec.to_dict() for spec in cross_reference_equipment(sr)]
        return document
