"""Advisory writer lock on the store root"""

import fcntl
import os
from contextlib import contextmanager

from app.exceptions import TwinError

LOCK_NAME = '.lock'


class StoreLockedError(TwinError):
    status_code = 423

    def __init__(self, path: str):
        super().__init__(f'store is locked by another writer: {path}')


@contextmanager
def store_lock(root: str):
    """
    Hold the exclusive writer lock of a store root for the duration of a block

    Raises:
        StoreLockedError: If another process holds the lock
    """
    os.makedirs(root, exist_ok=True)
    path = os.path.join(root, LOCK_NAME)
    with open(path, 'a') as handle:
        try:
            fcntl.flock(handle.fileno(), fcntl.LOCK_EX | fcntl.LOCK_NB)
        except BlockingIOError:
            raise StoreLockedError(path)
        try:
            yield path
        finally:
            fcntl.flock(handle.fileno(), fcntl.LOCK_UN)
