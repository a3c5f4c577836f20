#!/usr/bin/env python3
"""
Cache en memoria para espectros y sistemas propios ya calculados
"""
import logging
import threading
import time
from collections import OrderedDict
from typing import Any, Dict, Optional

from sftcalc.config import get_settings

logger = logging.getLogger(__name__)


class InMemoryCache:
    """Cache LRU acotado y seguro entre hilos"""

    def __init__(self, max_entries: int = 256):
        self.cache: "OrderedDict[str, Dict[str, Any]]" = OrderedDict()
        self.max_entries = max_entries
        self.hits = 0
        self.misses = 0
        self._lock = threading.Lock()

    def get(self, key: str) -> Optional[Any]:
        """Obtener valor del cache"""
        with self._lock:
            item = self.cache.get(key)
            if item is None:
                self.misses += 1
                return None
            self.cache.move_to_end(key)
            self.hits += 1
            return item['value']

    def set(self, key: str, value: Any) -> None:
        """Guardar valor en el cache"""
        with self._lock:
            self.cache[key] = {'value': value, 'created_at': time.time()}
            self.cache.move_to_end(key)
            while len(self.cache) > self.max_entries:
                evicted, _ = self.cache.popitem(last=False)
                logger.debug("cache eviction: %s", evicted)

    def clear(self) -> None:
        """Limpiar todo el cache"""
        with self._lock:
            self.cache.clear()
            self.hits = 0
            self.misses = 0


class CacheManager:
    """Gestor de cache con claves específicas para datos espectrales"""

    def __init__(self, cache: Optional[InMemoryCache] = None):
        self.cache = cache or InMemoryCache(get_settings().cache_size)

    def _generate_key(self, kind: str, namespace: str, orbit_id: str, k: int, grid: int,
                      window: Optional[float] = None) -> str:
        """Clave kind|namespace|orbit|k|grid[|w]"""
        key = f"{kind}|{namespace}|{orbit_id}|k={k}|n={grid}"
        if window is not None:
            key += f"|w={window!r}"
        return key

    def get_eigensystem(self, namespace: str, orbit_id: str, k: int, grid: int) -> Optional[Any]:
        """Obtener descomposición espectral completa (autovalores, autovectores)"""
        return self.cache.get(self._generate_key("eigensystem", namespace, orbit_id, k, grid))

    def set_eigensystem(self, namespace: str, orbit_id: str, k: int, grid: int, value: Any) -> None:
        self.cache.set(self._generate_key("eigensystem", namespace, orbit_id, k, grid), value)

    def get_table(self, namespace: str, orbit_id: str, k: int, window: float, grid: int) -> Optional[Any]:
        """Obtener tabla espectral recortada a una ventana"""
        return self.cache.get(self._generate_key("table", namespace, orbit_id, k, grid, window))

    def set_table(self, namespace: str, orbit_id: str, k: int, window: float, grid: int, value: Any) -> None:
        self.cache.set(self._generate_key("table", namespace, orbit_id, k, grid, window), value)

    def get_cache_stats(self) -> Dict[str, Any]:
        """Obtener estadísticas del cache"""
        return {
            'size': len(self.cache.cache),
            'max_entries': self.cache.max_entries,
            'hits': self.cache.hits,
            'misses': self.cache.misses,
        }


# Instancia global del cache manager
cache_manager = CacheManager()
