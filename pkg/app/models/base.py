from datetime import datetime, timezone
from app.extensions import db


def utcnow():
    return datetime.now(timezone.utc).replace(tzinfo=None)


class CreatedAtMixin:
    """Rows are append-only, so only the insertion time is kept"""
    created_at = db.Column(db.DateTime, nullable=False, default=utcnow)
