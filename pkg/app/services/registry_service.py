"""Registry service: loads the asset registry from the database and persists its mutations"""

import logging
from typing import Iterable, Optional, Tuple

from app.exceptions.asset_exceptions import UnknownAssetError
from app.models.asset import AssetRow
from app.repositories.asset_repository import AssetRepository, SceneRepository
from app.schemas.asset_schema import AssetFormat, AssetRecord, AssetRef, ParadataEntry, SceneDescriptor
from app.schemas.catalog_schema import LicenceVocab
from app.schemas.process_schema import ModelLevel
from app.services.asset_registry import AssetRegistry

logger = logging.getLogger(__name__)


def row_to_record(row: AssetRow) -> AssetRecord:
    return AssetRecord(
        object_id=row.object_id,
        level=ModelLevel(row.level),
        format=AssetFormat(row.format),
        path=row.path,
        size_bytes=row.size_bytes,
        licence=LicenceVocab.parse(row.licence),
        texture_max_px=row.texture_max_px,
        paradata=tuple(ParadataEntry(p.region, p.method) for p in row.paradata),
    )


class RegistryService:
    """Asset registry persistence"""

    def __init__(self):
        self.asset_repo = AssetRepository()
        self.scene_repo = SceneRepository()

    def fingerprint(self) -> Tuple[int, int, int]:
        return self.asset_repo.count(), self.asset_repo.paradata_count(), self.scene_repo.count()

    def load(self, seed: Optional[int] = None) -> AssetRegistry:
        """
        Rebuild the registry: assets with their paradata, then scenes

        Args:
            seed: Seeds the registry's scene-id generator

        Returns:
            AssetRegistry holding every persisted asset and scene
        """
        registry = AssetRegistry(seed)
        for row in self.asset_repo.find_in_order():
            registry.register_asset(row_to_record(row))
        for row in self.scene_repo.find_in_order():
            items = tuple(AssetRef(item.asset.object_id, ModelLevel(item.asset.level)) for item in row.items)
            registry.add_scene(SceneDescriptor(row.scene_id, items, row.title, row.metadata_link))
        return registry

    def _asset_row(self, object_id: str, level) -> AssetRow:
        row = self.asset_repo.find_by_key(object_id, int(level))
        if row is None:
            raise UnknownAssetError(object_id, level)
        return row

    def register_asset(self, registry: AssetRegistry, rec: AssetRecord) -> AssetRecord:
        """
        Register an asset in memory, then persist it with its paradata

        Raises:
            DuplicateAssetError, InvalidAssetError
        """
        rec = registry.register_asset(rec)
        row = self.asset_repo.create({
            'object_id': rec.object_id,
            'level': int(rec.level),
            'format': rec.format.value,
            'path': rec.path,
            'size_bytes': rec.size_bytes,
            'texture_max_px': rec.texture_max_px,
            'licence': str(rec.licence),
        })
        for entry in rec.paradata:
            self.asset_repo.add_paradata(row, entry.region, entry.method)
        return rec

    def attach_paradata(self, registry: AssetRegistry, object_id: str, level,
                        region: str, method: str) -> AssetRecord:
        """
        Raises:
            UnknownAssetError, DuplicateParadataError, InvalidAssetError
        """
        rec = registry.attach_paradata(object_id, level, region, method)
        entry = rec.paradata[-1]
        self.asset_repo.add_paradata(self._asset_row(object_id, level), entry.region, entry.method)
        logger.info('Paradata attached', extra={
            'asset': str(rec.ref), 'region': entry.region, 'method': entry.method,
        })
        return rec

    def create_scene(self, registry: AssetRegistry, items: Iterable[AssetRef], title: str,
                     seed: Optional[int] = None, metadata_link: Optional[str] = None) -> SceneDescriptor:
        """
        Raises:
            SceneError: For empty, unregistered or non level 2 items
        """
        scene = registry.create_scene(items, title, seed=seed, metadata_link=metadata_link)
        assets = [self._asset_row(ref.object_id, ref.level) for ref in scene.items]
        link = str(scene.metadata_link) if scene.metadata_link else None
        self.scene_repo.add_scene(scene.scene_id, scene.title, link, assets)
        return scene
