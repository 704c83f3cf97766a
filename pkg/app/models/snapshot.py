from app.extensions import db
from app.models.base import CreatedAtMixin


class SnapshotRow(db.Model, CreatedAtMixin):
    """One committed snapshot of an entity; valid_to is implied by the next ordinal"""
    __tablename__ = 'snapshots'
    __table_args__ = (db.UniqueConstraint('entity', 'ordinal', name='uq_snapshot_entity_ordinal'),)

    id = db.Column(db.Integer, primary_key=True)
    entity = db.Column(db.String(500), nullable=False, index=True)
    ordinal = db.Column(db.Integer, nullable=False)
    valid_from = db.Column(db.DateTime, nullable=False, index=True)
    agent = db.Column(db.Text, nullable=False)  # N-Triples term
    primary_source = db.Column(db.String(500))
    description = db.Column(db.Text, nullable=False, default='')

    quads = db.relationship('DeltaQuadRow', backref='snapshot', lazy='selectin',
                            order_by='DeltaQuadRow.id')

    def __repr__(self):
        return f'<Snapshot {self.entity} se/{self.ordinal}>'


class DeltaQuadRow(db.Model):
    __tablename__ = 'delta_quads'

    id = db.Column(db.Integer, primary_key=True)
    snapshot_id = db.Column(db.Integer, db.ForeignKey('snapshots.id'), nullable=False, index=True)
    side = db.Column(db.String(10), nullable=False)  # insertions | deletions
    subject = db.Column(db.String(500), nullable=False)
    predicate = db.Column(db.String(500), nullable=False)
    object = db.Column(db.Text, nullable=False)  # N-Triples term
    graph = db.Column(db.String(500), nullable=False)

    def __repr__(self):
        return f'<DeltaQuad {self.side} {self.subject} {self.predicate}>'
