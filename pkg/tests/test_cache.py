from sftcalc.cache import CacheManager, InMemoryCache


def test_lru_eviction_keeps_recent_entries():
    cache = InMemoryCache(max_entries=2)
    cache.set("a", 1)
    cache.set("b", 2)
    assert cache.get("a") == 1
    cache.set("c", 3)
    assert cache.get("b") is None
    assert cache.get("a") == 1
    assert cache.get("c") == 3


def test_tables_are_keyed_by_window():
    manager = CacheManager(InMemoryCache(max_entries=8))
    manager.set_table("flow", "abc", 1, 10.0, 201, "t10")
    assert manager.get_table("flow", "abc", 1, 10.0, 201) == "t10"
    assert manager.get_table("flow", "abc", 1, 20.0, 201) is None
    manager.set_eigensystem("flow", "abc", 1, 201, "eig")
    assert manager.get_eigensystem("flow", "abc", 1, 201) == "eig"
    assert manager.get_eigensystem("flow", "abc", 2, 201) is None

    stats = manager.get_cache_stats()
    assert stats["size"] == 2
    assert (stats["hits"], stats["misses"]) == (2, 2)

    manager.cache.clear()
    assert manager.get_cache_stats()["size"] == 0
