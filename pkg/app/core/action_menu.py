from typing import Callable, List

import jinja2

from app.core.contracts.action_menu_interface import BaseActionMenu
from app.core.errors import InputError

_MENU_TEMPLATE = jinja2.Template(
    "{% if message %}{{ message }}\n{% endif %}"
    "{% for act in actions %}"
    "  {{ feature_name }} --action {{ act.id }}{{ ' ' * (width - act.id|length) }}  {{ act.label }}\n"
    "{% endfor %}"
)


class ActionMenu(BaseActionMenu):
    def __init__(self, message: str = ""):
        self.message = message
        self.feature_name = None
        self.actions = {}

    def add_action(self, action_id: str, action_label: str, action_callable: Callable) -> None:
        if action_id in self.actions:
            raise ValueError(f"action '{action_id}' already registered")
        self.actions[action_id] = {
            "id": action_id,
            "label": action_label,
            "callable": action_callable,
        }

    def set_feature_name(self, feature_name: str) -> None:
        self.feature_name = feature_name

    def render(self) -> str:
        if not self.feature_name:
            raise ValueError("Feature name not set for ActionMenu rendering.")
        if not self.actions:
            return "No actions available.\n"
        width = max(len(a) for a in self.actions)
        command = self.feature_name.replace("_", "-")
        return _MENU_TEMPLATE.render(message=self.message, feature_name=command,
                                     actions=self.actions.values(), width=width)

    def get_action_callable(self, action_id: str) -> Callable:
        if action_id not in self.actions:
            raise InputError(f"unknown action '{action_id}' for {self.feature_name}; "
                             f"choose one of {', '.join(self.actions)}")
        return self.actions[action_id]["callable"]

    def action_ids(self) -> List[str]:
        return list(self.actions)
