"""Domain exceptions"""

from app.exceptions.base_exception import TwinError, NotFoundError

__all__ = ['TwinError', 'NotFoundError']
