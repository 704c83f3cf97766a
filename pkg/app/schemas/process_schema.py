"""Digitisation workflow value types"""

from dataclasses import dataclass, field
from datetime import date
from enum import Enum, IntEnum
from typing import Dict, Optional, Tuple

from app.utils.constants import STAGE_NAMES


class WorkflowStage(IntEnum):
    ACQUISITION = 1
    PROCESSING = 2
    MODELLING = 3
    OPTIMISATION = 4
    EXPORT = 5
    METADATA_CREATION = 6
    UPLOAD = 7

    @property
    def label(self) -> str:
        return STAGE_NAMES[int(self)]


class ModelLevel(IntEnum):
    LEVEL0 = 0
    LEVEL1 = 1
    LEVEL2 = 2


@dataclass(frozen=True)
class DateInterval:
    start: date
    end: date

    def to_dict(self) -> Dict:
        return {'start': self.start.isoformat(), 'end': self.end.isoformat()}


@dataclass(frozen=True)
class StageRecord:
    """One digitisation step; fields a-e for acquisition, f-i for software activities"""
    stage: WorkflowStage
    institution: str
    people: Tuple[str, ...]
    dates: DateInterval
    tools: Tuple[str, ...] = field(default_factory=tuple)
    technique: Optional[str] = None

    def to_dict(self) -> Dict:
        return {
            'stage': int(self.stage),
            'name': self.stage.label,
            'institution': self.institution,
            'people': list(self.people),
            'technique': self.technique,
            'tools': list(self.tools),
            **self.dates.to_dict(),
        }


@dataclass(frozen=True)
class ProcessRecord:
    """Per-object chain of stage records, kept in stage order"""
    object_id: str
    stages: Tuple[StageRecord, ...] = field(default_factory=tuple)

    def stage(self, stage: WorkflowStage) -> Optional[StageRecord]:
        for sr in self.stages:
            if sr.stage == stage:
                return sr
        return None

    @property
    def technique(self) -> Optional[str]:
        """Technique of record: the acquisition technique, else any stated technique"""
        acquisition = self.stage(WorkflowStage.ACQUISITION)
        if acquisition is not None and acquisition.technique:
            return acquisition.technique
        for sr in self.stages:
            if sr.technique:
                return sr.technique
        return None

    def to_dict(self) -> Dict:
        return {
            'object_id': self.object_id,
            'stages': [sr.to_dict() for sr in self.stages],
        }


class EquipmentKind(str, Enum):
    SCANNER = 'scanner'
    CAMERA = 'camera'


@dataclass(frozen=True)
class Measure:
    value: float
    unit: str


@dataclass(frozen=True)
class EquipmentSpec:
    name: str
    kind: EquipmentKind
    attributes: Tuple[Tuple[str, Tuple[Measure, ...]], ...]
    owner: Optional[str] = None

    def __post_init__(self):
        for key, measures in self.attributes:
            if any(m.value <= 0 for m in measures):
                raise ValueError(f'{self.name}: {key} must be strictly positive')

    def attribute(self, name: str) -> Tuple[Measure, ...]:
        return dict(self.attributes)[name]

    def to_dict(self) -> Dict:
        return {
            'name': self.name,
            'kind': self.kind.value,
            'owner': self.owner,
            'attributes': {
                key: [{'value': m.value, 'unit': m.unit} for m in measures]
                for key, measures in self.attributes
            },
        }


def _spec(name, kind, owner=None, **attributes) -> EquipmentSpec:
    def as_measures(value):
        if isinstance(value, Measure):
            return (value,)
        return tuple(value)
    return EquipmentSpec(
        name=name,
        kind=kind,
        owner=owner,
        attributes=tuple((key, as_measures(value)) for key, value in attributes.items()),
    )


M = Measure

# Structured-light scanners and photogrammetry cameras used in the campaign
EQUIPMENT = (
    _spec('Artec Space Spider', EquipmentKind.SCANNER,
          point_precision=M(0.05, 'mm'), resolution_3d=M(0.1, 'mm'),
          texture_resolution=M(1.3, 'MP'),
          acquisition_surface=(M(90, 'mm'), M(70, 'mm'), M(180, 'mm'), M(140, 'mm')),
          acquisition_distance=(M(20, 'cm'), M(30, 'cm'))),
    _spec('Artec Eva', EquipmentKind.SCANNER,
          point_precision=M(0.1, 'mm'), resolution_3d=M(0.2, 'mm'),
          texture_resolution=M(1.3, 'MP'),
          acquisition_surface=(M(214, 'mm'), M(148, 'mm'), M(536, 'mm'), M(371, 'mm')),
          acquisition_distance=(M(40, 'cm'), M(100, 'cm'))),
    _spec('Panasonic DMC-LX100', EquipmentKind.CAMERA, owner='FICLIT',
          sensor_size=(M(17.3, 'mm'), M(13, 'mm')),
          image_resolution=(M(4112, 'px'), M(3088, 'px')),
          pixel_size=M(4.19, 'µm'), focal_length=(M(24, 'mm'), M(75, 'mm'))),
    _spec('Nikon D7200', EquipmentKind.CAMERA, owner='FICLIT',
          sensor_size=(M(23.5, 'mm'), M(15.6, 'mm')),
          image_resolution=(M(6000, 'px'), M(4000, 'px')),
          pixel_size=M(3.89, 'µm'), focal_length=M(50, 'mm')),
    _spec('Canon EOS 6D', EquipmentKind.CAMERA, owner='CNR ISPC',
          sensor_size=(M(36, 'mm'), M(24, 'mm')),
          image_resolution=(M(5472, 'px'), M(3648, 'px')),
          pixel_size=M(6.54, 'µm'), focal_length=M(50, 'mm')),
    _spec('Nikon D750', EquipmentKind.CAMERA, owner='DBC',
          sensor_size=(M(36, 'mm'), M(24, 'mm')),
          image_resolution=(M(6016, 'px'), M(4016, 'px')),
          pixel_size=M(5.95, 'µm'), focal_length=(M(40, 'mm'), M(70, 'mm'))),
    _spec('Sony A7 I', EquipmentKind.CAMERA, owner='DA',
          sensor_size=(M(36, 'mm'), M(24, 'mm')),
          image_resolution=(M(6000, 'px'), M(4000, 'px')),
          pixel_size=M(5.93, 'µm'), focal_length=(M(28, 'mm'), M(70, 'mm'))),
)
