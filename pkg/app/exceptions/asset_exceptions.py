"""Asset registry and scene errors"""

from app.exceptions.base_exception import TwinError, NotFoundError


class DuplicateAssetError(TwinError):
    status_code = 409

    def __init__(self, object_id: str, level):
        super().__init__(f'duplicate level {int(level)} for {object_id}')


class InvalidAssetError(TwinError):

    def __init__(self, report):
        super().__init__('; '.join(report.messages))
        self.report = report


class UnknownAssetError(NotFoundError):

    def __init__(self, object_id: str, level):
        super().__init__(f'unknown asset: level {int(level)} of {object_id}')


class DuplicateParadataError(TwinError):
    status_code = 409

    def __init__(self, region: str, method: str):
        super().__init__(f'duplicate paradata ({region!r}, {method})')


class SceneError(TwinError):
    """Scene creation rejected (empty, unregistered or non-web items)"""


class UnknownSceneError(NotFoundError):

    def __init__(self, scene_id: str):
        super().__init__(f'unknown scene: {scene_id}')
