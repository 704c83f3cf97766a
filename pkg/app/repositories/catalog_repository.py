"""Catalogue and process projections used by record export"""

from typing import Dict, Optional

from app.extensions import db
from app.models.catalog import CatalogEntry, ProcessEntry
from app.repositories.base_repository import BaseRepository


class _ProjectionRepository(BaseRepository):

    def upsert(self, object_id: str, document: str, commit: bool = True):
        """
        Insert or replace the projection of one object

        Args:
            object_id: Catalogue id
            document: JSON document
            commit: Commit immediately
        """
        row = self.find_by_id(object_id)
        if row is None:
            row = self.model(object_id=object_id, document=document)
            db.session.add(row)
        elif row.document != document:
            row.document = document
        if commit:
            db.session.commit()
        return row

    def find_document(self, object_id: str) -> Optional[str]:
        row = self.find_by_id(object_id)
        return row.document if row else None

    def documents(self) -> Dict[str, str]:
        return {row.object_id: row.document for row in self.model.query.all()}


class CatalogEntryRepository(_ProjectionRepository):

    def __init__(self):
        super().__init__(CatalogEntry)


class ProcessEntryRepository(_ProjectionRepository):

    def __init__(self):
        super().__init__(ProcessEntry)
