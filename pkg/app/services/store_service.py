"""Store service: loads the versioned store from the database and persists commits"""

import logging
from datetime import datetime
from typing import List, Tuple

from rdflib import URIRef

from app.exceptions.store_exceptions import OrdinalRangeError
from app.models.snapshot import SnapshotRow
from app.repositories.snapshot_repository import SnapshotRepository
from app.schemas.rdf_schema import CommitMeta, Delta, DeltaSide, Quad, Snapshot, nt_term, to_utc
from app.services.query_service import parse_term
from app.services.version_store import VersionedStore
from app.utils.constants import DEFAULT_BASE_IRI

logger = logging.getLogger(__name__)


def _naive_utc(at: datetime) -> datetime:
    return to_utc(at).replace(tzinfo=None)


def snapshot_to_row(snapshot: Snapshot) -> Tuple[dict, List[dict]]:
    """
    Column values for a snapshot row and its delta quads

    Returns:
        (snapshot data, quad data sorted by side then N-Quads line)
    """
    data = {
        'entity': str(snapshot.entity),
        'ordinal': snapshot.ordinal,
        'valid_from': _naive_utc(snapshot.valid_from),
        'agent': nt_term(snapshot.agent),
        'primary_source': str(snapshot.primary_source) if snapshot.primary_source else None,
        'description': snapshot.description,
    }
    quads = [
        {
            'side': side.value,
            'subject': str(quad.subject),
            'predicate': str(quad.predicate),
            'object': nt_term(quad.object),
            'graph': str(quad.graph),
        }
        for side in DeltaSide
        for quad in sorted(side.of(snapshot.delta), key=Quad.nq)
    ]
    return data, quads


def row_to_commit(row: SnapshotRow) -> Tuple[Delta, CommitMeta]:
    sides = {side: set() for side in DeltaSide}
    for q in row.quads:
        sides[DeltaSide(q.side)].add(
            Quad(URIRef(q.subject), URIRef(q.predicate), parse_term(q.object), URIRef(q.graph)))
    delta = Delta(insertions=sides[DeltaSide.INSERTIONS], deletions=sides[DeltaSide.DELETIONS])
    meta = CommitMeta(
        agent=parse_term(row.agent),
        description=row.description or '',
        at=row.valid_from,
        source=URIRef(row.primary_source) if row.primary_source else None,
    )
    return delta, meta


class StoreService:
    """
    Bridges the in-memory versioned store and the snapshot tables.
    Engine checks run first; a snapshot is persisted only once the
    in-memory commit has succeeded.
    """

    def __init__(self, base_iri: str = DEFAULT_BASE_IRI):
        self.base_iri = base_iri
        self.snapshot_repo = SnapshotRepository()

    def fingerprint(self) -> int:
        return self.snapshot_repo.count()

    def load(self) -> VersionedStore:
        """
        Replay every persisted snapshot into a fresh store

        Returns:
            VersionedStore holding every committed chain
        """
        store = VersionedStore(self.base_iri)
        for row in self.snapshot_repo.find_in_replay_order():
            delta, meta = row_to_commit(row)
            store.append(row.entity, row.ordinal, delta, meta)
        logger.debug('Store loaded', extra={
            'entities': len(store), 'snapshots': store.snapshot_count,
        })
        return store

    def persist(self, snapshot: Snapshot, commit: bool = True) -> SnapshotRow:
        """
        Append a committed snapshot after the entity's last persisted one

        Raises:
            OrdinalRangeError: If the tables hold a different chain length
        """
        persisted = self.snapshot_repo.get_max_ordinal(str(snapshot.entity))
        if persisted != snapshot.ordinal - 1:
            raise OrdinalRangeError(snapshot.entity,
                                    f'snapshot {snapshot.ordinal} does not follow persisted {persisted}')
        data, quads = snapshot_to_row(snapshot)
        return self.snapshot_repo.append(data, quads, commit=commit)

    def create_entity(self, store: VersionedStore, entity, triples, meta: CommitMeta) -> Snapshot:
        snapshot = store.create_entity(store.resolve(entity), triples, meta)
        self.persist(snapshot)
        return snapshot

    def update_entity(self, store: VersionedStore, entity, delta: Delta, meta: CommitMeta) -> Snapshot:
        snapshot = store.update_entity(store.resolve(entity), delta, meta)
        self.persist(snapshot)
        return snapshot

    def restore(self, store: VersionedStore, entity, k: int, meta: CommitMeta) -> Snapshot:
        """
        Commit and persist a revert snapshot

        Raises:
            UnknownEntityError, UnknownSnapshotError, NoOpUpdateError,
            StaleTimestampError
        """
        snapshot = store.restore(store.resolve(entity), k, meta)
        self.persist(snapshot)
        return snapshot
