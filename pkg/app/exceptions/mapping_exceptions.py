"""Tabular ingest and mapping-document errors"""

from app.exceptions.base_exception import TwinError


class CsvFormatError(TwinError):
    """Malformed CSV input (unbalanced quote, ragged row, missing header)"""

    def __init__(self, message: str, offset: int = None):
        if offset is not None:
            message = f'{message} at byte {offset}'
        super().__init__(message)
        self.offset = offset


class MappingSyntaxError(TwinError):
    """The mapping document does not follow the line grammar"""

    def __init__(self, message: str, line: int):
        super().__init__(f'{message} at line {line}')
        self.line = line


class MappingBindError(TwinError):
    """A mapping rule refers to a column or vocabulary the table schema lacks"""

    def __init__(self, message: str, line: int):
        super().__init__(f'{message} at line {line}')
        self.line = line


class InputFileError(TwinError):
    """An ingest input is missing or unreadable"""

    def __init__(self, path, reason: str = 'cannot read file'):
        super().__init__(f'{reason}: {path}')
        self.path = path
