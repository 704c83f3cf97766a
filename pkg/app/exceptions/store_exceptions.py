"""Versioned store errors"""

from app.exceptions.base_exception import TwinError, NotFoundError


class EntityExistsError(TwinError):
    status_code = 409

    def __init__(self, entity):
        super().__init__(f'entity exists: {entity}')
        self.entity = entity


class UnknownEntityError(NotFoundError):

    def __init__(self, entity):
        super().__init__(f'unknown entity: {entity}')
        self.entity = entity


class UnknownSnapshotError(NotFoundError):

    def __init__(self, entity, ordinal):
        super().__init__(f'unknown snapshot {ordinal} of {entity}')
        self.entity = entity
        self.ordinal = ordinal


class EmptyEntityError(TwinError):
    """Creation with no triples"""

    def __init__(self, entity):
        super().__init__(f'entity {entity} must assert at least one triple')


class InapplicableDeltaError(TwinError):
    """Delta deletes quads absent from the head or inserts quads already present"""
    status_code = 409

    def __init__(self, entity, missing=(), present=(), overlapping=(), foreign=()):
        parts = []
        if foreign:
            parts.append('quads outside the entity graph: ' + ', '.join(sorted(foreign)))
        if missing:
            parts.append('deletions not in graph: ' + ', '.join(sorted(missing)))
        if present:
            parts.append('insertions already in graph: ' + ', '.join(sorted(present)))
        if overlapping:
            parts.append('quads both inserted and deleted: ' + ', '.join(sorted(overlapping)))
        super().__init__(f'inapplicable delta for {entity}: ' + '; '.join(parts))
        self.entity = entity
        self.missing = tuple(sorted(missing))
        self.present = tuple(sorted(present))
        self.overlapping = tuple(sorted(overlapping))
        self.foreign = tuple(sorted(foreign))


class StaleTimestampError(TwinError):
    status_code = 409

    def __init__(self, entity, at, head_from):
        super().__init__(f'stale timestamp {at} for {entity}: head valid from {head_from}')


class NoOpUpdateError(TwinError):
    """Every snapshot must witness a change"""
    status_code = 409

    def __init__(self, entity, reason: str = 'no-op update'):
        super().__init__(f'{reason}: {entity}')
        self.entity = entity


class EntityNotYetCreatedError(TwinError):

    def __init__(self, entity, at):
        super().__init__(f'entity did not exist at {at}: {entity}')


class OrdinalRangeError(TwinError):

    def __init__(self, entity, message):
        super().__init__(f'{message} for {entity}')


class ProvenanceFormatError(TwinError):
    """Provenance text or dump could not be parsed"""

    def __init__(self, message: str, line: int = None):
        if line is not None:
            message = f'{message} at line {line}'
        super().__init__(message)
