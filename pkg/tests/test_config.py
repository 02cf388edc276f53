from pathlib import Path

import pytest

from src.utils.config import DEFAULT_MAX_FIELD_DEGREE, Settings, get_settings, reset_settings
from src.utils.errors import ParameterError


class TestSettings:

    def test_defaults(self, monkeypatch):
        monkeypatch.delenv("FERMATSEQ_LOG_LEVEL", raising=False)
        settings = Settings.from_env()
        assert settings.max_field_degree == DEFAULT_MAX_FIELD_DEGREE
        assert settings.max_prime == 101
        assert settings.workers == 1

    def test_environment_overrides(self, monkeypatch, tmp_path):
        monkeypatch.setenv("FERMATSEQ_CACHE_DIR", str(tmp_path / "elsewhere"))
        monkeypatch.setenv("FERMATSEQ_MAX_PRIME", "13")
        monkeypatch.setenv("FERMATSEQ_LOG_LEVEL", "debug")
        settings = Settings.from_env()
        assert settings.cache_dir == Path(tmp_path / "elsewhere")
        assert settings.max_prime == 13
        assert settings.log_level == "DEBUG"

    @pytest.mark.parametrize("value", ["lots", "0", "-4"])
    def test_bad_numbers(self, monkeypatch, value):
        monkeypatch.setenv("FERMATSEQ_MAX_FIELD_DEGREE", value)
        with pytest.raises(ParameterError) as excinfo:
            Settings.from_env()
        assert "FERMATSEQ_MAX_FIELD_DEGREE" in str(excinfo.value)

    def test_singleton_reset(self, monkeypatch):
        first = get_settings()
        assert get_settings() is first
        monkeypatch.setenv("FERMATSEQ_WORKERS", "3")
        reset_settings()
        assert get_settings().workers == 3
