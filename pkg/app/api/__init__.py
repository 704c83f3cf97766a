"""HTTP read surface"""

from app.api.v1 import api_v1

__all__ = ['api_v1']
