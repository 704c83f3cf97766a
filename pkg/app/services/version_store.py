"""
In-memory versioned store: per-entity snapshot chains with invertible deltas
and the six time-traversal retrieval functionalities.

Commits are serialized through one writer lock. Chains are immutable tuples
replaced on commit, so readers always see a consistent committed state.
"""

import dataclasses
import logging
import threading
from collections import Counter
from datetime import datetime
from typing import Dict, FrozenSet, Iterable, List, Optional, Set, Tuple, Union

from rdflib import Graph, URIRef

from app.exceptions.store_exceptions import (
    EmptyEntityError, EntityExistsError, EntityNotYetCreatedError, InapplicableDeltaError,
    NoOpUpdateError, OrdinalRangeError, StaleTimestampError, UnknownEntityError,
    UnknownSnapshotError,
)
from app.schemas.rdf_schema import (
    BgpQuery, CommitMeta, Delta, DeltaSide, Quad, Snapshot, Triple, VersionInterval,
    format_timestamp, graph_iri, invert_delta, lift, snapshot_iri, to_utc,
)
from app.services.query_service import Binding, evaluate_bgp, graph_of
from app.utils.constants import DEFAULT_BASE_IRI
from app.utils.validators import is_valid_iri

logger = logging.getLogger(__name__)

Selector = Union[int, datetime]


class VersionedStore:

    def __init__(self, base_iri: str = DEFAULT_BASE_IRI):
        self.base_iri = base_iri
        self._chains: Dict[URIRef, Tuple[Snapshot, ...]] = {}
        self._heads: Dict[URIRef, FrozenSet[Quad]] = {}
        self._write_lock = threading.Lock()

    def resolve(self, entity: str) -> URIRef:
        """Absolute IRIs pass through; anything else is taken relative to the base"""
        entity = str(entity)
        return URIRef(entity if is_valid_iri(entity) else self.base_iri + entity.lstrip('/'))

    @property
    def entities(self) -> List[URIRef]:
        return sorted(self._chains)

    def __contains__(self, entity) -> bool:
        return URIRef(entity) in self._chains

    def __len__(self) -> int:
        return len(self._chains)

    @property
    def snapshot_count(self) -> int:
        return sum(len(chain) for chain in self._chains.values())

    def chain(self, entity) -> Tuple[Snapshot, ...]:
        try:
            return self._chains[URIRef(entity)]
        except KeyError:
            raise UnknownEntityError(entity)

    def snapshots(self) -> Iterable[Snapshot]:
        """Every snapshot, in commit-time then entity then ordinal order"""
        every = [s for chain in self._chains.values() for s in chain]
        return sorted(every, key=lambda s: (s.valid_from, str(s.entity), s.ordinal))

    def head(self, entity) -> FrozenSet[Quad]:
        self.chain(entity)
        return self._heads[URIRef(entity)]

    def snapshot(self, entity, k: int) -> Snapshot:
        chain = self.chain(entity)
        if not 1 <= k <= len(chain):
            raise UnknownSnapshotError(entity, k)
        return chain[k - 1]

    def _commit(self, entity: URIRef, delta: Delta, meta: CommitMeta) -> Snapshot:
        chain = self._chains.get(entity, ())
        head = self._heads.get(entity, frozenset())
        at = to_utc(meta.at)

        if chain:
            previous = chain[-1]
            if at <= previous.valid_from:
                raise StaleTimestampError(entity, format_timestamp(at),
                                          format_timestamp(previous.valid_from))
            if delta.is_empty:
                raise NoOpUpdateError(entity)
        own = graph_iri(entity)
        foreign = {q.nq() for q in delta.insertions | delta.deletions if q.graph != own}
        if foreign:
            raise InapplicableDeltaError(entity, foreign=foreign)
        missing = {q.nq() for q in delta.deletions - head}
        present = {q.nq() for q in delta.insertions & head}
        if missing or present:
            raise InapplicableDeltaError(entity, missing=missing, present=present)

        ordinal = len(chain) + 1
        snapshot = Snapshot(
            id=snapshot_iri(entity, ordinal),
            entity=entity,
            ordinal=ordinal,
            valid_from=at,
            agent=meta.agent,
            description=meta.description,
            delta=delta,
            primary_source=meta.source,
            prev=chain[-1].id if chain else None,
        )
        closed = chain[:-1] + (dataclasses.replace(chain[-1], valid_to=at),) if chain else ()
        self._chains[entity] = closed + (snapshot,)
        self._heads[entity] = delta.apply(head)

        logger.info('Snapshot committed', extra={
            'entity': str(entity),
            'snapshot': str(snapshot.id),
            'insertions': len(delta.insertions),
            'deletions': len(delta.deletions),
            'valid_from': format_timestamp(at),
        })
        return snapshot

    def create_entity(self, entity, triples: Iterable[Triple], meta: CommitMeta) -> Snapshot:
        """
        Commit the creation snapshot of a new entity

        Raises:
            EntityExistsError: If the entity already has a chain
            EmptyEntityError: If no triples are given
        """
        entity = URIRef(entity)
        quads = lift(triples, entity)
        with self._write_lock:
            if entity in self._chains:
                raise EntityExistsError(entity)
            if not quads:
                raise EmptyEntityError(entity)
            return self._commit(entity, Delta(insertions=quads), meta)

    def update_entity(self, entity, delta: Delta, meta: CommitMeta) -> Snapshot:
        """
        Commit a modification snapshot

        Raises:
            UnknownEntityError: If the entity was never created
            StaleTimestampError: If ``meta.at`` does not follow the head's valid_from
            NoOpUpdateError: For an empty delta
            InapplicableDeltaError: Naming deletions absent from, or insertions
                already in, the head graph
        """
        entity = URIRef(entity)
        with self._write_lock:
            if entity not in self._chains:
                raise UnknownEntityError(entity)
            return self._commit(entity, delta, meta)

    def append(self, entity, ordinal: int, delta: Delta, meta: CommitMeta) -> Snapshot:
        """Replay a persisted snapshot, checking it continues the chain"""
        entity = URIRef(entity)
        with self._write_lock:
            expected = len(self._chains.get(entity, ())) + 1
            if ordinal != expected:
                raise OrdinalRangeError(entity, f'expected snapshot {expected}, got {ordinal}')
            if ordinal == 1 and (delta.deletions or not delta.insertions):
                raise EmptyEntityError(entity)
            return self._commit(entity, delta, meta)

    def ordinal_at(self, entity, at: datetime) -> int:
        """
        Ordinal of the snapshot whose validity interval contains ``at``

        Raises:
            EntityNotYetCreatedError: If ``at`` precedes the creation snapshot
        """
        chain = self.chain(entity)
        at = to_utc(at)
        if at < chain[0].valid_from:
            raise EntityNotYetCreatedError(entity, format_timestamp(at))
        for snapshot in reversed(chain):
            if snapshot.valid_from <= at:
                return snapshot.ordinal
        raise EntityNotYetCreatedError(entity, format_timestamp(at))

    def materialize(self, entity, at: Selector) -> FrozenSet[Quad]:
        """
        Version materialisation: the graph of a snapshot, by ordinal or instant

        Walks inverted deltas back from the head to the target snapshot.

        Raises:
            UnknownEntityError, UnknownSnapshotError, EntityNotYetCreatedError
        """
        entity = URIRef(entity)
        chain = self.chain(entity)
        target = at if isinstance(at, int) else self.ordinal_at(entity, at)
        if not 1 <= target <= len(chain):
            raise UnknownSnapshotError(entity, target)
        state = self._heads[entity]
        for snapshot in reversed(chain[target:]):
            state = invert_delta(snapshot.delta).apply(state)
        return state

    def replay(self, entity, k: int) -> FrozenSet[Quad]:
        """Forward fold of deltas from the creation snapshot up to ``k``"""
        state: FrozenSet[Quad] = frozenset()
        for snapshot in self.chain(entity)[:k]:
            state = snapshot.delta.apply(state)
        return state

    def delta_between(self, entity, i: int, j: int) -> Delta:
        """
        Delta materialisation: net change from snapshot i to snapshot j

        Raises:
            OrdinalRangeError: Unless 1 <= i <= j <= head ordinal
        """
        chain = self.chain(entity)
        if not 1 <= i <= j <= len(chain):
            raise OrdinalRangeError(entity, f'ordinals must satisfy 1 <= {i} <= {j} <= {len(chain)}')
        if i == j:
            return Delta()
        before, after = self.materialize(entity, i), self.materialize(entity, j)
        return Delta(insertions=after - before, deletions=before - after)

    def dataset_versions(self) -> List[datetime]:
        """Every distinct valid_from across all entities, ascending"""
        return sorted({s.valid_from for chain in self._chains.values() for s in chain})

    def materialize_dataset(self, at: Optional[datetime] = None) -> FrozenSet[Quad]:
        """Union of every entity's graph at ``at`` (latest when None)"""
        if at is None:
            return frozenset().union(*self._heads.values())
        at = to_utc(at)
        graphs = [self.materialize(entity, at) for entity, chain in self._chains.items()
                  if chain[0].valid_from <= at]
        return frozenset().union(*graphs)

    def query_at(self, q: BgpQuery, at: Optional[datetime] = None) -> Set[Binding]:
        """Single-version query over the dataset at ``at``; entities not yet created contribute nothing"""
        return evaluate_bgp(q, graph_of(self.materialize_dataset(at)))

    def query_cross_version(self, q: BgpQuery) -> Set[Tuple[VersionInterval, Binding]]:
        """
        Cross-version query: each binding with every maximal run of
        consecutive dataset versions in which it holds
        """
        commits: Dict[datetime, List[Snapshot]] = {}
        for chain in self._chains.values():
            for snapshot in chain:
                commits.setdefault(snapshot.valid_from, []).append(snapshot)

        counts: Counter = Counter()
        graph = Graph()
        open_runs: Dict[Binding, datetime] = {}
        results: Set[Tuple[VersionInterval, Binding]] = set()

        for version in sorted(commits):
            for snapshot in commits[version]:
                for quad in snapshot.delta.deletions:
                    counts[quad.triple] -= 1
                    if counts[quad.triple] == 0:
                        del counts[quad.triple]
                        graph.remove(quad.triple)
                for quad in snapshot.delta.insertions:
                    counts[quad.triple] += 1
                    if counts[quad.triple] == 1:
                        graph.add(quad.triple)

            current = evaluate_bgp(q, graph)
            for binding in list(open_runs):
                if binding not in current:
                    results.add((VersionInterval(open_runs.pop(binding), version), binding))
            for binding in current:
                open_runs.setdefault(binding, version)

        for binding, start in open_runs.items():
            results.add((VersionInterval(start, None), binding))
        return results

    def query_delta(self, q: BgpQuery, entity, k: int, side: DeltaSide) -> Set[Binding]:
        """
        Single-delta query over one side of snapshot k's delta

        Raises:
            UnknownEntityError, UnknownSnapshotError
        """
        snapshot = self.snapshot(entity, k)
        return evaluate_bgp(q, graph_of(DeltaSide(side).of(snapshot.delta)))

    def query_cross_delta(self, q: BgpQuery) -> Set[Tuple[URIRef, DeltaSide, Binding]]:
        """Cross-delta query: the single-delta query over every snapshot and side"""
        hits = set()
        for chain in self._chains.values():
            for snapshot in chain:
                for side in DeltaSide:
                    quads = side.of(snapshot.delta)
                    if not quads:
                        continue
                    for binding in evaluate_bgp(q, graph_of(quads)):
                        hits.add((snapshot.id, side, binding))
        return hits

    def restore(self, entity, k: int, meta: CommitMeta) -> Snapshot:
        """
        Commit a new head whose graph equals snapshot k's graph; history is kept

        Raises:
            UnknownSnapshotError: If k is not an ordinal of the chain
            NoOpUpdateError: If k is the head, or the head already equals state k
        """
        entity = URIRef(entity)
        chain = self.chain(entity)
        if not 1 <= k <= len(chain):
            raise UnknownSnapshotError(entity, k)
        if k == len(chain):
            raise NoOpUpdateError(entity, f'already at {k}')
        target = self.materialize(entity, k)
        head = self._heads[entity]
        delta = Delta(insertions=target - head, deletions=head - target)
        if delta.is_empty:
            raise NoOpUpdateError(entity, f'already at {k}')
        snapshot = self.update_entity(entity, delta, meta)
        logger.info('Entity restored', extra={
            'entity': str(entity), 'restored_to': k, 'snapshot': str(snapshot.id),
        })
        return snapshot
