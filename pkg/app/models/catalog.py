from app.extensions import db
from app.models.base import CreatedAtMixin, utcnow


class CatalogEntry(db.Model, CreatedAtMixin):
    """Latest ingested bibliographic row of an object, as record JSON"""
    __tablename__ = 'catalog_entries'

    object_id = db.Column(db.String(200), primary_key=True)
    document = db.Column(db.Text, nullable=False)
    updated_at = db.Column(db.DateTime, default=utcnow, onupdate=utcnow)

    def __repr__(self):
        return f'<CatalogEntry {self.object_id}>'


class ProcessEntry(db.Model, CreatedAtMixin):
    """Latest ingested digitisation stages of an object"""
    __tablename__ = 'process_entries'

    object_id = db.Column(db.String(200), primary_key=True)
    document = db.Column(db.Text, nullable=False)
    updated_at = db.Column(db.DateTime, default=utcnow, onupdate=utcnow)

    def __repr__(self):
        return f'<ProcessEntry {self.object_id}>'
