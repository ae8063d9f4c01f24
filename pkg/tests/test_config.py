from unittest.mock import patch

import pytest

from bigraded_formality.config import Settings, get_settings, worker_count
from bigraded_formality.parallel import parallel_map


@pytest.fixture(autouse=True)
def _fresh_settings():
    get_settings.cache_clear()
    yield
    get_settings.cache_clear()


def test_settings_from_environment(monkeypatch):
    monkeypatch.setenv("FORMALITY_THREADS", "3")
    monkeypatch.setenv("FORMALITY_DEFAULT_TRUNCATION", "11")
    settings = get_settings()
    assert settings.threads == 3
    assert settings.default_truncation == 11
    assert worker_count(settings) == 3


def test_zero_threads_means_one_per_cpu():
    with patch("bigraded_formality.config.os.cpu_count", return_value=6):
        assert worker_count(Settings(threads=0)) == 6


@pytest.mark.parametrize("threads", [1, 4])
def test_parallel_map_keeps_input_order(threads):
    with patch("bigraded_formality.parallel.get_settings", return_value=Settings(threads=threads)):
        assert parallel_map(lambda x: x * x, range(20)) == [x * x for x in range(20)]
