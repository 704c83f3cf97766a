"""Read-side cache of the loaded store and registry for the HTTP service"""

import threading
from typing import Optional, Tuple

from flask import current_app

from app.services.asset_registry import AssetRegistry
from app.services.registry_service import RegistryService
from app.services.store_service import StoreService
from app.services.version_store import VersionedStore

EXTENSION_KEY = 'twin_reader'


class ReaderCache:
    """
    Holds one loaded (store, registry) pair and reloads it whenever the
    persisted row counts move. Both tables are append-only, so equal
    counts mean equal contents.
    """

    def __init__(self):
        self._lock = threading.Lock()
        self._fingerprint: Optional[tuple] = None
        self._state: Optional[Tuple[VersionedStore, AssetRegistry]] = None

    def get(self, base_iri: str) -> Tuple[VersionedStore, AssetRegistry]:
        store_service = StoreService(base_iri)
        registry_service = RegistryService()
        fingerprint = (store_service.fingerprint(), registry_service.fingerprint())
        with self._lock:
            if self._state is None or fingerprint != self._fingerprint:
                self._state = (store_service.load(), registry_service.load())
                self._fingerprint = fingerprint
                current_app.logger.info('Reader state reloaded', extra={
                    'snapshots': fingerprint[0], 'assets': fingerprint[1][0],
                })
            return self._state


def reader_state() -> Tuple[VersionedStore, AssetRegistry]:
    """The current app's cached (store, registry)"""
    cache = current_app.extensions.setdefault(EXTENSION_KEY, ReaderCache())
    return cache.get(current_app.config['TWIN_BASE_IRI'])
