import importlib
from pathlib import Path

import pytest

import app_constants

ROOT = Path(__file__).resolve().parent.parent
KERNELS = sorted(p.stem for p in (ROOT / "app" / "kernels").glob("*.py") if p.stem != "__init__")


def _resolve(ref):
    module_name, name = ref.split(":")
    return getattr(importlib.import_module(module_name), name)


@pytest.mark.parametrize("feature", sorted(app_constants.FEATURE_OPERATIONS))
def test_feature_operations_exist_and_are_used(feature):
    version = app_constants.DEFAULTS["version"]
    source = (ROOT / "features" / feature / version / f"{feature}.py").read_text(encoding="utf-8")
    for ref in app_constants.FEATURE_OPERATIONS[feature]:
        assert callable(_resolve(ref)), ref
        assert ref.split(":")[1] in source, f"{feature} never calls {ref}"


def test_every_feature_is_listed():
    assert set(app_constants.FEATURE_OPERATIONS) == set(app_constants.APP_FEATURES)


def test_every_kernel_is_reached_by_a_feature():
    reached = {ref.split(":")[0].rsplit(".", 1)[1] for refs in app_constants.FEATURE_OPERATIONS.values()
               for ref in refs if ref.startswith("app.kernels.")}
    assert set(KERNELS) - {"scalars"} <= reached


def test_every_kernel_has_tests():
    tested = {p.stem[len("test_"):] for p in (ROOT / "tests").glob("test_*.py")}
    assert set(KERNELS) <= tested
