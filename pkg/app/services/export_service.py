"""Export service: record and scene JSON, provenance text, full-store dumps"""

import json
from typing import Any, Dict
from urllib.parse import quote

from app.exceptions.catalog_exceptions import UnknownRecordError
from app.repositories.catalog_repository import CatalogEntryRepository, ProcessEntryRepository
from app.services.asset_registry import AssetRegistry
from app.services.prov_service import dump_nquads, serialize_prov
from app.services.version_store import VersionedStore


def render_json(document: Any) -> str:
    return json.dumps(document, indent=2, sort_keys=True, ensure_ascii=False) + '\n'


class ExportKind:
    RECORD = 'record'
    SCENE = 'scene'
    PROV = 'prov'
    DUMP = 'dump'

    ALL = (RECORD, SCENE, PROV, DUMP)


class ExportService:
    """Deterministic exports shared by the CLI and the HTTP service"""

    def __init__(self, store: VersionedStore, registry: AssetRegistry):
        self.store = store
        self.registry = registry
        self.catalog_repo = CatalogEntryRepository()
        self.process_repo = ProcessEntryRepository()

    def record_document(self, object_id: str) -> Dict:
        """
        Assemble the record of one catalogued object

        Args:
            object_id: Catalogue id

        Returns:
            Catalogue fields plus its entity IRI, process stages, asset
            levels and the ids of scenes showing it

        Raises:
            UnknownRecordError: If no bibliographic row was ever ingested for the id
        """
        catalog = self.catalog_repo.find_document(object_id)
        if catalog is None:
            raise UnknownRecordError(object_id)
        document = json.loads(catalog)
        process = self.process_repo.find_document(object_id)
        document['iri'] = str(self.store.resolve('obj/' + quote(object_id, safe='')))
        document['process'] = json.loads(process)['stages'] if process else []
        document['assets'] = [rec.to_dict() for rec in self.registry.assets_of(object_id)]
        document['asset_levels'] = [int(rec.level) for rec in self.registry.assets_of(object_id)]
        document['scenes'] = self.registry.scenes_for(object_id)
        return document

    def record(self, object_id: str) -> str:
        return render_json(self.record_document(object_id))

    def scene(self, scene_id: str) -> str:
        """
        Raises:
            UnknownSceneError: If the scene id is not registered
        """
        return render_json(self.registry.scene(scene_id).to_dict())

    def prov(self, entity: str) -> str:
        """
        Raises:
            UnknownEntityError: If the entity has no chain
        """
        return serialize_prov(self.store, self.store.resolve(entity))

    def dump(self) -> str:
        return dump_nquads(self.store)

    def export(self, kind: str, identifier: str = None) -> str:
        if kind == ExportKind.DUMP:
            return self.dump()
        if identifier is None:
            raise ValueError(f'{kind} export needs an id')
        return {
            ExportKind.RECORD: self.record,
            ExportKind.SCENE: self.scene,
            ExportKind.PROV: self.prov,
        }[kind](identifier)
