from pathlib import Path

import pytest
from pydantic import ValidationError

from config import DEFAULT_BUDGETS, TARGET_GROUPS, Budgets, RunConfig, parse_backend


def test_parse_backend():
    """Test the accepted backend selectors."""
    assert parse_backend("two-term") == ("two-term", None)
    assert parse_backend("tabulated") == ("tabulated", None)
    assert parse_backend("interval:3") == ("interval", 3)


@pytest.mark.parametrize("selector", ["bogus", "interval", "interval:0", "interval:x", "two-term:2"])
def test_parse_backend_rejects(selector):
    """Test unknown selectors and bad interval sizes are rejected."""
    with pytest.raises(ValueError):
        parse_backend(selector)


def test_defaults():
    """Test the defaults of RunConfig."""
    config = RunConfig(input_path=Path("algebra.alg"))
    assert config.backend_kind == "two-term"
    assert config.interval_size is None
    assert config.budgets == DEFAULT_BUDGETS
    assert config.targets == TARGET_GROUPS
    assert config.deterministic


def test_interval_backend():
    """Test the interval size is read from the selector."""
    config = RunConfig(backend="interval:4")
    assert config.backend_kind == "interval"
    assert config.interval_size == 4


@pytest.mark.parametrize("kwargs", [
    {"backend": "interval:2", "input_path": Path("lambda.tab")},
    {"backend": "tabulated"},
    {"backend": "two-term"},
    {"backend": "interval:2", "output_format": "svg"},
    {"backend": "interval:2", "targets": ("Z2", "A5")},
    {"backend": "interval:2", "threads": 0},
    {"backend": "interval:2", "deterministic": False},
])
def test_invalid_run_configs(kwargs):
    """Test invalid combinations fail validation."""
    with pytest.raises(ValidationError):
        RunConfig(**kwargs)


@pytest.mark.parametrize("field", ["poset_nodes", "search_multiplicity", "hom_count", "tietze_steps"])
def test_budgets_are_positive(field):
    """Test every budget must be positive."""
    with pytest.raises(ValidationError):
        Budgets(**{field: 0})


def test_budgets_are_frozen():
    budgets = Budgets(poset_nodes=10)
    with pytest.raises(ValidationError):
        budgets.poset_nodes = 20
    assert budgets.poset_nodes == 10
