import importlib
import logging
import time
from typing import Dict, Iterable, Optional, Tuple

from app.core.contracts.action_menu_interface import BaseActionMenu
from app.core.contracts.feature_interface import BaseFeature
from app.core.errors import InputError

logger = logging.getLogger("FeatureManager")


# HELPER METHODS
def apply_defaults(config, defaults):
    for key, value in defaults.items():
        config.setdefault(key, value)
    return config


def apply_overrides(config, overrides):
    for key, value in overrides.items():
        if key in config:
            config[key] = value
    return config
# ==================================


class FeatureManager:
    def __init__(self, defaults, feature_definitions, only: Optional[Iterable[str]] = None, run_self_tests=True):
        self.run_self_tests = run_self_tests
        if only is not None:
            wanted = set(only)
            unknown = wanted - set(feature_definitions)
            if unknown:
                raise InputError(f"unknown feature(s): {', '.join(sorted(unknown))}")
            feature_definitions = {k: v for k, v in feature_definitions.items() if k in wanted}
        self.failed = []
        self.features = self.load_features(defaults, feature_definitions)

    def shutdown(self):
        logger.debug("Shutting down features...")
        for feature in self.features.values():
            shutdown_fn = feature.get("shutdown")
            if callable(shutdown_fn):
                logger.debug("Shutting down %s...", feature["display_name"])
                shutdown_fn()

    def load_features(self, defaults, feature_definitions):
        loaded_features = {}
        scanned = 0
        disabled = 0

        logger.debug("Loading features...")
        logger.debug("%d feature(s) defined.", len(feature_definitions))

        for feature_name, overrides in feature_definitions.items():
            scanned += 1

            feature_config = apply_defaults({}, defaults)
            feature_config = apply_overrides(feature_config, overrides)

            feature_version = feature_config["version"]
            module_path = f"features.{feature_name}.{feature_version}.{feature_name}"

            logger.debug("  -> [%s] Loading %d/%d from %s...", feature_name, scanned, len(feature_definitions), module_path)

            # 1. Check if feature is enabled
            if not feature_config["enabled"]:
                logger.debug("    -> Feature is disabled. Skipping...")
                disabled += 1
                continue

            start_time = time.time()

            # 2. Dynamically import the feature module using the configured path
            try:
                module = importlib.import_module(module_path)
            except ModuleNotFoundError:
                logger.error("    -> Failed: Module not found: %s", module_path)
                self.failed.append(feature_name)
                continue

            # 3. Verify module exposes registration method
            if not hasattr(module, "register"):
                logger.error("    -> Failed: Feature module missing register(): %s", module_path)
                self.failed.append(feature_name)
                continue

            # 4. Call registration method and hold instance data
            try:
                module_instance_data = module.register()
            except Exception:
                logger.exception("    -> Failed during register() of %s", module_path)
                self.failed.append(feature_name)
                continue

            if not isinstance(module_instance_data, dict):
                logger.error("    -> Bad registration: required dict, got %s instead.", type(module_instance_data))
                self.failed.append(feature_name)
                continue

            # 5. Verify that module is an instance of contract
            instance = module_instance_data.get("instance")
            if not isinstance(instance, BaseFeature):
                logger.error("    -> Failed: register() did not return BaseFeature: %s", module_path)
                self.failed.append(feature_name)
                continue

            # 6. Optional self-test
            self_test = module_instance_data.get("self_test")
            if callable(self_test) and self.run_self_tests:
                try:
                    passed = self_test()
                except Exception:
                    logger.exception("    -> Self-test of %s raised", feature_name)
                    passed = False
                if passed:
                    logger.debug("    -> Self-test passed!")
                else:
                    logger.error("    -> Self-test of %s failed! Skipping feature...", feature_name)
                    self.failed.append(feature_name)
                    continue
            elif not callable(self_test):
                logger.debug("    -> No self-test defined.")

            action_menu = module_instance_data.get("action_menu")
            if isinstance(action_menu, BaseActionMenu):
                action_menu.set_feature_name(feature_name)
                logger.debug("    -> ActionMenu loaded (%s).", ", ".join(action_menu.action_ids()))

            elapsed = time.time() - start_time
            logger.debug("    -> Done (%.2fs)", elapsed)

            loaded_features[feature_name] = {
                "instance": instance,
                "action_menu": action_menu,
                "shutdown": module_instance_data.get("shutdown"),
                "version": feature_version,
                "display_name": feature_config["display_name"],
                "description": feature_config["description"],
                "default_format": feature_config["default_format"],
            }

        logger.debug("Scanned:\t%d feature(s).", scanned)
        logger.debug("Disabled:\t%d feature(s).", disabled)
        logger.debug("Failed:\t%d feature(s).", len(self.failed))
        logger.debug("Loaded:\t%d feature(s).", len(loaded_features))
        return loaded_features

    def __get_feature_and_actions(self, feature_name: str) -> Tuple[BaseFeature, Optional[BaseActionMenu]]:
        feature = self.features.get(feature_name)
        if not feature:
            raise InputError(f"Feature '{feature_name}' not loaded")
        return feature["instance"], feature["action_menu"]

    def get_available_features(self) -> Dict[str, Dict]:
        return {
            name: {
                "version": data["version"],
                "display_name": data["display_name"],
                "description": data["description"],
            }
            for name, data in self.features.items()
        }

    def default_format(self, feature_name: str) -> str:
        return self.features[feature_name]["default_format"]

    def render_actions(self, feature_name: str) -> str:
        _, menu = self.__get_feature_and_actions(feature_name)
        if menu is None:
            return f"{feature_name} has no actions besides the default run.\n"
        return menu.render()

    def invoke_feature(self, feature_name: str, action_id: Optional[str], params: dict):
        feature, menu = self.__get_feature_and_actions(feature_name)
        if action_id is not None:
            if menu is None:
                raise InputError(f"{feature_name} has no action '{action_id}'")
            return menu.get_action_callable(action_id)(params)
        return feature.run_default(params)
