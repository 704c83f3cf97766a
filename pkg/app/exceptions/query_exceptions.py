"""Basic graph pattern query errors"""

from app.exceptions.base_exception import TwinError


class QueryParseError(TwinError):

    def __init__(self, message: str, offset: int):
        super().__init__(f'{message} at offset {offset}')
        self.offset = offset


class SelectorError(TwinError):
    """Invalid combination of query selector flags"""
