"""
Shared fixtures: contexts, fields and roots for the small primes
"""
import pytest

from src.algebra.field import make_field, root_of_unity
from src.number_theory.fermat import build_context
from src.storage import parameter_cache
from src.utils import config

SMALL_PRIMES = (3, 5, 7, 11, 13)


@pytest.fixture(scope="session")
def contexts():
    return {p: build_context(p) for p in SMALL_PRIMES}


@pytest.fixture(scope="session")
def fields():
    """p -> (field, beta of order p^2)"""
    out = {}
    for p in SMALL_PRIMES:
        fld = make_field(p)
        out[p] = (fld, root_of_unity(fld, p * p))
    return out


@pytest.fixture(autouse=True)
def isolated_settings(tmp_path, monkeypatch):
    """Point the parameter cache at a temporary directory for every test"""
    monkeypatch.setenv("FERMATSEQ_CACHE_DIR", str(tmp_path / "cache"))
    monkeypatch.delenv("FERMATSEQ_MAX_PRIME", raising=False)
    monkeypatch.delenv("FERMATSEQ_MAX_FIELD_DEGREE", raising=False)
    monkeypatch.delenv("FERMATSEQ_WORKERS", raising=False)
    config.reset_settings()
    parameter_cache.reset_parameter_cache()
    yield
    config.reset_settings()
    parameter_cache.reset_parameter_cache()
