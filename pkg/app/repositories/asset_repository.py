"""Asset registry persistence: assets, paradata, scenes"""

from typing import List, Optional

from app.extensions import db
from app.models.asset import AssetRow, ParadataRow, SceneItemRow, SceneRow
from app.repositories.base_repository import BaseRepository


class AssetRepository(BaseRepository[AssetRow]):

    def __init__(self):
        super().__init__(AssetRow)

    def find_by_key(self, object_id: str, level: int) -> Optional[AssetRow]:
        return self.find_one(object_id=object_id, level=level)

    def find_in_order(self) -> List[AssetRow]:
        return self.model.query.order_by(AssetRow.id).all()

    def add_paradata(self, asset: AssetRow, region: str, method: str) -> ParadataRow:
        row = ParadataRow(asset_id=asset.id, region=region, method=method)
        db.session.add(row)
        db.session.commit()
        return row

    def paradata_count(self) -> int:
        return ParadataRow.query.count()


class SceneRepository(BaseRepository[SceneRow]):

    def __init__(self):
        super().__init__(SceneRow)

    def find_in_order(self) -> List[SceneRow]:
        return self.model.query.order_by(SceneRow.created_at, SceneRow.scene_id).all()

    def add_scene(self, scene_id: str, title: str, metadata_link: Optional[str],
                  assets: List[AssetRow]) -> SceneRow:
        """
        Persist a scene with its ordered items

        Args:
            scene_id: Fresh scene id
            title: Scene title
            metadata_link: Optional catalogue IRI
            assets: Item asset rows, in scene order

        Returns:
            Created scene row
        """
        row = SceneRow(scene_id=scene_id, title=title, metadata_link=metadata_link)
        db.session.add(row)
        db.session.add_all(
            SceneItemRow(scene_id=scene_id, position=position, asset_id=asset.id)
            for position, asset in enumerate(assets)
        )
        db.session.commit()
        return row
