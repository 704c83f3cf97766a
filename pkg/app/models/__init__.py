from app.models.snapshot import SnapshotRow, DeltaQuadRow
from app.models.catalog import CatalogEntry, ProcessEntry
from app.models.asset import AssetRow, ParadataRow, SceneRow, SceneItemRow

__all__ = [
    'SnapshotRow',
    'DeltaQuadRow',
    'CatalogEntry',
    'ProcessEntry',
    'AssetRow',
    'ParadataRow',
    'SceneRow',
    'SceneItemRow',
]
