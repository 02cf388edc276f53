from concurrent.futures import ThreadPoolExecutor

import pytest

from src.algebra.field import element_order_is
from src.storage.parameter_cache import ParameterCache, get_parameter_cache
from src.utils.config import get_settings
from src.utils.errors import CapacityError, ParameterError


@pytest.fixture
def cache(tmp_path):
    return ParameterCache(tmp_path / "params")


class TestParameterCache:

    def test_cold_then_warm(self, cache, fields):
        fld, beta = cache.get_or_create(5)
        assert cache.path_for(5).exists()
        assert (fld, beta) == fields[5]
        assert cache.load(5) == (fld, beta)

    def test_file_contents(self, cache):
        fld, beta = cache.get_or_create(3)
        lines = cache.path_for(3).read_text(encoding="ascii").splitlines()
        assert lines == [
            "p=3",
            "m=6",
            f"modulus={fld.modulus.to_text()}",
            f"beta={beta.to_text()}",
        ]

    def test_missing_entry(self, cache):
        assert cache.load(7) is None

    def test_corrupt_entry_is_rebuilt(self, cache):
        fld, beta = cache.get_or_create(3)
        cache.path_for(3).write_text("p=3\nm=6\nmodulus=gf2x:1\nbeta=gf2x:1\n", encoding="ascii")
        assert cache.load(3) is None
        assert cache.get_or_create(3) == (fld, beta)
        assert cache.load(3) == (fld, beta)

    def test_wrong_prime_in_file(self, cache):
        cache.get_or_create(3)
        cache.path_for(5).parent.mkdir(parents=True, exist_ok=True)
        cache.path_for(5).write_text(cache.path_for(3).read_text(encoding="ascii"), encoding="ascii")
        assert cache.load(5) is None

    def test_beta_has_order_p_squared(self, cache):
        fld, beta = cache.get_or_create(7)
        assert element_order_is(fld, beta, 49)

    def test_list_and_clear(self, cache):
        cache.get_or_create(3)
        cache.get_or_create(5)
        assert [row["p"] for row in cache.list_cached()] == ["3", "5"]
        assert cache.clear() == 2
        assert cache.list_cached() == []

    def test_capacity(self, cache):
        with pytest.raises(CapacityError):
            cache.get_or_create(29)

    def test_rejects_composite(self, cache):
        with pytest.raises(ParameterError):
            cache.get_or_create(15)

    def test_global_instance_follows_settings(self):
        assert get_parameter_cache().cache_dir == get_settings().cache_dir
        assert get_parameter_cache() is get_parameter_cache()

    def test_concurrent_stores_of_same_prime(self, cache, fields):
        fld, beta = fields[5]
        with ThreadPoolExecutor(max_workers=8) as pool:
            paths = list(pool.map(lambda _: cache.store(fld, beta), range(16)))
        assert set(paths) == {cache.path_for(5)}
        assert cache.load(5) == (fld, beta)
        assert list(cache.path_for(5).parent.glob("*.tmp")) == []

    def test_stale_temp_file_is_ignored(self, cache, fields):
        fld, beta = fields[3]
        cache.path_for(3).parent.mkdir(parents=True, exist_ok=True)
        stale = cache.path_for(3).with_name("p3.params.tmp")
        stale.write_text("garbage", encoding="ascii")
        cache.store(fld, beta)
        assert cache.load(3) == (fld, beta)
        assert [row["p"] for row in cache.list_cached()] == ["3"]
