"""In-memory, append-only registry of model assets, paradata and scenes"""

import dataclasses
import logging
import random
import re
import threading
from typing import Dict, Iterable, List, Optional, Sequence

from app.exceptions.asset_exceptions import (
    DuplicateAssetError, DuplicateParadataError, InvalidAssetError, SceneError,
    UnknownAssetError, UnknownSceneError,
)
from app.schemas.asset_schema import AssetRecord, AssetRef, ParadataEntry, SceneDescriptor
from app.schemas.process_schema import ModelLevel
from app.utils.constants import (
    MAX_TEXTURE_PX, OBSERVED_MAX_MODEL_BYTES, PARADATA_METHODS, SCENE_ID_ALPHABET, SCENE_ID_LENGTH,
)
from app.utils.validators import ValidationReport, Violation, is_valid_iri

logger = logging.getLogger(__name__)

SCENE_ID_PATTERN = re.compile(r'[A-Za-z0-9]{8,32}')


def validate_asset(rec: AssetRecord) -> ValidationReport:
    violations = []
    if not rec.object_id.strip():
        violations.append(Violation('empty object id', column='object_id'))
    if not rec.path.strip():
        violations.append(Violation('empty path', column='path'))
    if rec.size_bytes <= 0:
        violations.append(Violation('size must be positive', column='size_bytes'))
    if rec.texture_max_px is not None and not 0 < rec.texture_max_px <= MAX_TEXTURE_PX:
        violations.append(Violation(f'texture exceeds {MAX_TEXTURE_PX} px', column='texture_max_px'))
    if rec.level == ModelLevel.LEVEL2 and not rec.format.is_web:
        violations.append(Violation('level 2 must be glTF/GLB', column='format'))
    seen = set()
    for entry in rec.paradata:
        if entry.method not in PARADATA_METHODS:
            violations.append(Violation(f'unknown paradata method {entry.method!r}', column='paradata'))
        pair = (entry.region.strip(), entry.method)
        if pair in seen:
            violations.append(Violation(f'duplicate paradata {pair[0]}={pair[1]}', column='paradata'))
        seen.add(pair)
    return ValidationReport.of(violations)


class AssetRegistry:
    """
    Partial map (object id, level) -> asset, plus scenes over level 2 assets.
    Nothing is ever removed; mutations go through one writer lock.
    """

    def __init__(self, seed: Optional[int] = None):
        self._assets: Dict[AssetRef, AssetRecord] = {}
        self._scenes: Dict[str, SceneDescriptor] = {}
        self._rng = random.Random(seed) if seed is not None else random.SystemRandom()
        self._write_lock = threading.Lock()

    def __len__(self) -> int:
        return len(self._assets)

    @property
    def scene_count(self) -> int:
        return len(self._scenes)

    def register_asset(self, rec: AssetRecord) -> AssetRecord:
        """
        Register an asset for one level of one object

        Raises:
            DuplicateAssetError: If the (object id, level) slot is taken
            InvalidAssetError: If the record breaks an asset invariant
        """
        report = validate_asset(rec)
        with self._write_lock:
            if rec.ref in self._assets:
                raise DuplicateAssetError(rec.object_id, rec.level)
            if not report.ok:
                raise InvalidAssetError(report)
            self._assets[rec.ref] = rec

        if rec.size_bytes > OBSERVED_MAX_MODEL_BYTES:
            logger.warning('Asset larger than any model observed so far', extra={
                'asset': str(rec.ref), 'size_bytes': rec.size_bytes,
            })
        logger.info('Asset registered', extra={'asset': str(rec.ref), 'format': rec.format.value})
        return rec

    def asset(self, object_id: str, level) -> AssetRecord:
        try:
            return self._assets[AssetRef(object_id, ModelLevel(level))]
        except (KeyError, ValueError):
            raise UnknownAssetError(object_id, level)

    def assets(self) -> List[AssetRecord]:
        return [self._assets[ref] for ref in sorted(self._assets)]

    def assets_of(self, object_id: str) -> List[AssetRecord]:
        return [rec for ref, rec in sorted(self._assets.items()) if ref.object_id == object_id]

    def attach_paradata(self, object_id: str, level, region: str, method: str) -> AssetRecord:
        """
        Append a (region, method) entry to an asset's paradata

        Raises:
            UnknownAssetError: If the asset is not registered
            DuplicateParadataError: If the pair is already recorded
            InvalidAssetError: If the method is not a paradata method
        """
        entry = ParadataEntry(region.strip(), method)
        if entry.method not in PARADATA_METHODS:
            raise InvalidAssetError(ValidationReport.from_messages(
                [f'unknown paradata method {method!r}'], column='paradata'))
        with self._write_lock:
            rec = self.asset(object_id, level)
            if entry in rec.paradata:
                raise DuplicateParadataError(entry.region, entry.method)
            updated = dataclasses.replace(rec, paradata=rec.paradata + (entry,))
            self._assets[rec.ref] = updated
        return updated

    def _new_scene_id(self, rng) -> str:
        while True:
            candidate = ''.join(rng.choice(SCENE_ID_ALPHABET) for _ in range(SCENE_ID_LENGTH))
            if candidate not in self._scenes:
                return candidate

    def _check_items(self, items: Sequence[AssetRef]):
        if not items:
            raise SceneError('a scene needs at least one item')
        for ref in items:
            if ref not in self._assets:
                raise SceneError(f'unregistered asset {ref}')
            if ref.level != ModelLevel.LEVEL2:
                raise SceneError(f'scene items must be level 2 assets: {ref}')

    def create_scene(self, items: Iterable[AssetRef], title: str, seed: Optional[int] = None,
                     metadata_link: Optional[str] = None) -> SceneDescriptor:
        """
        Publish a scene over registered level 2 assets under a fresh scene id

        Args:
            items: Asset references, at least one
            title: Scene title
            seed: Seeds this call's id generator; the registry's own
                generator is used otherwise
            metadata_link: Optional IRI into the catalogue graph

        Raises:
            SceneError: For empty, unregistered or non level 2 items, or a
                metadata link that is not an absolute IRI
        """
        items = tuple(items)
        if metadata_link is not None and not is_valid_iri(str(metadata_link)):
            raise SceneError(f'metadata link is not an absolute IRI: {metadata_link!r}')
        rng = random.Random(seed) if seed is not None else self._rng
        with self._write_lock:
            self._check_items(items)
            scene = SceneDescriptor(self._new_scene_id(rng), items, title, metadata_link)
            self._scenes[scene.scene_id] = scene
        logger.info('Scene created', extra={'scene_id': scene.scene_id, 'items': len(items)})
        return scene

    def add_scene(self, scene: SceneDescriptor) -> SceneDescriptor:
        """Re-admit a persisted scene, checking its id and items"""
        with self._write_lock:
            if not SCENE_ID_PATTERN.fullmatch(scene.scene_id):
                raise SceneError(f'bad scene id {scene.scene_id!r}')
            if scene.scene_id in self._scenes:
                raise SceneError(f'scene id already used: {scene.scene_id}')
            self._check_items(scene.items)
            self._scenes[scene.scene_id] = scene
        return scene

    def scene(self, scene_id: str) -> SceneDescriptor:
        try:
            return self._scenes[scene_id]
        except KeyError:
            raise UnknownSceneError(scene_id)

    def scenes(self) -> List[SceneDescriptor]:
        return [self._scenes[key] for key in sorted(self._scenes)]

    def scenes_for(self, object_id: str) -> List[str]:
        return sorted(sid for sid, scene in self._scenes.items()
                      if any(ref.object_id == object_id for ref in scene.items))
