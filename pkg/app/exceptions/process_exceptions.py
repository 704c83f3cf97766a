"""Digitisation workflow errors"""

from app.exceptions.base_exception import TwinError


class DuplicateStageError(TwinError):
    """A process record already holds a record for the stage"""
    status_code = 409

    def __init__(self, object_id: str, stage):
        super().__init__(f'duplicate stage {int(stage)} for {object_id}')
        self.object_id = object_id
        self.stage = stage


class InvalidStageError(TwinError):
    """A stage record breaks its own invariants"""

    def __init__(self, report):
        super().__init__('invalid stage record: ' + '; '.join(report.messages))
        self.report = report
