import pytest

import app_constants
from app.core.errors import InputError
from app.core.feature_manager import FeatureManager, apply_defaults, apply_overrides


def test_defaults_and_overrides():
    config = apply_defaults({}, app_constants.DEFAULTS)
    config = apply_overrides(config, {"display_name": "X", "unknown": 1})
    assert config["display_name"] == "X"
    assert "unknown" not in config
    assert config["version"] == "v1_0"


def test_every_feature_loads_and_passes_self_test():
    manager = FeatureManager(app_constants.DEFAULTS, app_constants.APP_FEATURES)
    try:
        assert manager.failed == []
        assert set(manager.features) == set(app_constants.APP_FEATURES)
        assert manager.default_format("acceptance") == "text"
        assert manager.default_format("psi") == "json"
    finally:
        manager.shutdown()


def test_only_filters_features():
    manager = FeatureManager(app_constants.DEFAULTS, app_constants.APP_FEATURES, only=["relations"])
    assert list(manager.features) == ["relations"]
    info = manager.get_available_features()["relations"]
    assert info["display_name"] == "Relation lattice"
    with pytest.raises(InputError):
        FeatureManager(app_constants.DEFAULTS, app_constants.APP_FEATURES, only=["steganography"])


def test_disabled_and_missing_features():
    definitions = {
        "relations": {"enabled": False},
        "no_such_feature": {},
    }
    manager = FeatureManager(app_constants.DEFAULTS, definitions)
    assert manager.features == {}
    assert manager.failed == ["no_such_feature"]


def test_invoke_default_and_named_actions():
    manager = FeatureManager(app_constants.DEFAULTS, app_constants.APP_FEATURES, only=["relations"])
    result = manager.invoke_feature("relations", None, {"n": 3})
    assert result.ok and result.action == "basis"
    result = manager.invoke_feature("relations", "verify", {"n": 3, "trials": 5, "seed": 1})
    assert result.ok and result.action == "verify"
    assert "relations --action verify" in manager.render_actions("relations")
    with pytest.raises(InputError):
        manager.invoke_feature("relations", "nope", {"n": 3})
    with pytest.raises(InputError):
        manager.invoke_feature("psi", None, {})
