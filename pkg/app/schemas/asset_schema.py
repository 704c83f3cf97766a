"""Digital assets, paradata and scene descriptors"""

from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, Optional, Tuple

from app.schemas.catalog_schema import Iri, Licence
from app.schemas.process_schema import ModelLevel


class AssetFormat(str, Enum):
    GLTF = 'glTF'
    GLB = 'GLB'
    OBJ = 'OBJ+MTL+texture'
    E57 = 'E57'
    TIFF = 'TIFF'
    PNG = 'PNG'
    JPG = 'JPG'
    MP4 = 'MP4'
    MP3 = 'MP3'

    @classmethod
    def parse(cls, text: str) -> 'AssetFormat':
        """Case-insensitive; ``obj`` names the OBJ+MTL+texture bundle"""
        wanted = text.strip().lower()
        if wanted == 'obj':
            return cls.OBJ
        for member in cls:
            if member.value.lower() == wanted:
                return member
        raise ValueError(f'Unknown asset format {text!r}')

    @property
    def is_web(self) -> bool:
        return self in (AssetFormat.GLTF, AssetFormat.GLB)


@dataclass(frozen=True)
class ParadataEntry:
    """How one region of a model was produced"""
    region: str
    method: str

    def to_dict(self) -> Dict:
        return {'region': self.region, 'method': self.method}


@dataclass(frozen=True, order=True)
class AssetRef:
    object_id: str
    level: ModelLevel

    def __str__(self) -> str:
        return f'{self.object_id}/l{int(self.level)}'


@dataclass(frozen=True)
class AssetRecord:
    object_id: str
    level: ModelLevel
    format: AssetFormat
    path: str
    size_bytes: int
    licence: Licence
    texture_max_px: Optional[int] = None
    paradata: Tuple[ParadataEntry, ...] = field(default_factory=tuple)

    @property
    def ref(self) -> AssetRef:
        return AssetRef(self.object_id, self.level)

    def to_dict(self) -> Dict:
        return {
            'object_id': self.object_id,
            'level': int(self.level),
            'format': self.format.value,
            'path': self.path,
            'size_bytes': self.size_bytes,
            'texture_max_px': self.texture_max_px,
            'licence': str(self.licence),
            'paradata': [entry.to_dict() for entry in self.paradata],
        }


@dataclass(frozen=True)
class SceneDescriptor:
    scene_id: str
    items: Tuple[AssetRef, ...]
    title: str
    metadata_link: Optional[Iri] = None

    def __post_init__(self):
        if isinstance(self.metadata_link, str):
            object.__setattr__(self, 'metadata_link', Iri(self.metadata_link))

    def to_dict(self) -> Dict:
        return {
            'scene_id': self.scene_id,
            'title': self.title,
            'metadata_link': str(self.metadata_link) if self.metadata_link else None,
            'items': [{'object_id': ref.object_id, 'level': int(ref.level)} for ref in self.items],
        }
