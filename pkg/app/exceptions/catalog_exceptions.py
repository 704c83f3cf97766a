"""Catalog (bibliographic) errors"""

from app.exceptions.base_exception import TwinError, NotFoundError


class InvalidAuthorityError(TwinError):
    """An authority reference failed syntactic validation"""

    def __init__(self, ref, report):
        super().__init__(f'Invalid {ref.authority} identifier {ref.identifier!r}: '
                         + '; '.join(report.messages))
        self.ref = ref
        self.report = report


class UnknownVocabularyTermError(TwinError):
    """A label is not part of a controlled vocabulary"""

    def __init__(self, vocabulary: str, label: str):
        super().__init__(f'Unknown {vocabulary} term {label!r}')
        self.vocabulary = vocabulary
        self.label = label


class UnknownRecordError(NotFoundError):

    def __init__(self, object_id: str):
        super().__init__(f'unknown record: {object_id}')
        self.object_id = object_id
