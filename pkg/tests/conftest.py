import pytest


@pytest.fixture(autouse=True)
def isolated_cache(tmp_path, monkeypatch):
    """Keep every test away from the user's class-number cache."""
    monkeypatch.setenv("FERMAT_CATALAN_CACHE", str(tmp_path / "h_minus.jsonl"))
