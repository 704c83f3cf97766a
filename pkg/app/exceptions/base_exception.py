"""Base exception for the knowledge-graph engine"""


class TwinError(Exception):
    """Root of every domain error; carries an HTTP status for the API layer"""

    status_code = 400

    def __init__(self, message: str, status_code: int = None):
        super().__init__(message)
        self.message = message
        if status_code is not None:
            self.status_code = status_code

    def to_dict(self) -> dict:
        return {
            'success': False,
            'error': self.message,
            'type': type(self).__name__,
        }


class NotFoundError(TwinError):
    """Unknown identifier (record, scene, entity, snapshot)"""
    status_code = 404
