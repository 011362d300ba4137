import pytest

from src.app.core.config import Settings, get_settings
from src.app.core.dependencies import get_operad, get_run_settings
from src.app.core.exceptions import OperadAxiomError
from src.app.services.operads import AssInvOperad


def test_defaults():
    """Test the default budgets."""
    config = Settings()
    assert config.SSOK_THREADS == 1
    assert config.ARITY_BOUND == 4
    assert config.KAN_DIM_BOUND == 2
    assert config.REPORT_PATH is None


def test_threads_from_environment(monkeypatch):
    """Test that SSOK_THREADS is read from the environment."""
    monkeypatch.setenv("SSOK_THREADS", "4")
    assert Settings().SSOK_THREADS == 4


def test_run_flags_override_settings():
    """Test that command line flags replace the matching settings."""
    config = get_run_settings({"budget": 50, "dim_bound": 3, "threads": 2, "arity_bound": None})
    assert config.SEARCH_NODE_BUDGET == 50
    assert config.KAN_DIM_BOUND == 3
    assert config.NERVE_DIM_DEFAULT == 3
    assert config.SSOK_THREADS == 2
    assert config.ARITY_BOUND == get_settings().ARITY_BOUND


def test_run_flags_leave_cached_settings_alone():
    """Test that overrides produce a copy."""
    get_run_settings({"budget": 7})
    assert get_settings().SEARCH_NODE_BUDGET != 7


def test_get_operad_by_name():
    """Test resolving builtin operads by name."""
    assert isinstance(get_operad("AssInv"), AssInvOperad)
    with pytest.raises(OperadAxiomError):
        get_operad("Lie")


def test_settings_are_case_sensitive(monkeypatch):
    """Test that only the upper case variable names are read."""
    monkeypatch.delenv("SSOK_THREADS", raising=False)
    monkeypatch.setenv("ssok_threads", "3")
    assert Settings.model_config["env_file"] == ".env"
    assert Settings().SSOK_THREADS == 1
