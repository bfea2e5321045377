import pytest

from hibicone.config import PARALLEL, SEARCH, load_settings
from hibicone.errors import ConfigError


@pytest.fixture(autouse=True)
def clean_environment(monkeypatch, tmp_path):
    monkeypatch.chdir(tmp_path)
    monkeypatch.delenv("HIBI_JOBS", raising=False)
    monkeypatch.delenv("HIBI_GRAPH_CAP", raising=False)


def test_defaults():
    search, parallel = load_settings()
    assert search == SEARCH
    assert parallel == PARALLEL
    assert (search.graph_cap, parallel.jobs) == (10_000, 1)


def test_environment_overrides(monkeypatch):
    monkeypatch.setenv("HIBI_JOBS", "3")
    monkeypatch.setenv("HIBI_GRAPH_CAP", " 250 ")
    search, parallel = load_settings()
    assert parallel.jobs == 3
    assert search.graph_cap == 250
    assert search.oracle_margin == SEARCH.oracle_margin


def test_dotenv_file(tmp_path):
    (tmp_path / ".env").write_text("HIBI_GRAPH_CAP=42\n", encoding="utf-8")
    search, _ = load_settings()
    assert search.graph_cap == 42


@pytest.mark.parametrize("raw", ["0", "-2", "many", "1.5"])
def test_malformed(monkeypatch, raw):
    monkeypatch.setenv("HIBI_JOBS", raw)
    with pytest.raises(ConfigError, match="HIBI_JOBS"):
        load_settings()
