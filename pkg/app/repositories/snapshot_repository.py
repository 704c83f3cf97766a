"""Snapshot repository: append-only persistence of snapshot chains"""

from typing import List

from sqlalchemy import func

from app.extensions import db
from app.models.snapshot import DeltaQuadRow, SnapshotRow
from app.repositories.base_repository import BaseRepository


class SnapshotRepository(BaseRepository[SnapshotRow]):
    """Repository for snapshots and their delta quads"""

    def __init__(self):
        super().__init__(SnapshotRow)

    def find_in_replay_order(self) -> List[SnapshotRow]:
        """
        All snapshots ordered so that every chain replays from its first ordinal

        Returns:
            Snapshot rows with their quads loaded
        """
        return self.model.query.order_by(SnapshotRow.entity, SnapshotRow.ordinal).all()

    def get_max_ordinal(self, entity: str) -> int:
        """
        Highest committed ordinal of an entity

        Args:
            entity: Entity IRI

        Returns:
            Max ordinal (0 if the entity has no snapshots)
        """
        max_ordinal = db.session.query(func.max(SnapshotRow.ordinal)).filter(
            SnapshotRow.entity == entity
        ).scalar()
        return max_ordinal or 0

    def append(self, data: dict, quads: List[dict], commit: bool = True) -> SnapshotRow:
        """
        Append one snapshot row and its delta quads

        Args:
            data: Snapshot column values
            quads: Delta quad column values (side, subject, predicate, object, graph)
            commit: Commit immediately, or leave it to the caller's unit of work

        Returns:
            Created snapshot row
        """
        row = self.create(data, commit=False)
        db.session.add_all(DeltaQuadRow(snapshot_id=row.id, **quad) for quad in quads)
        if commit:
            db.session.commit()
        return row
