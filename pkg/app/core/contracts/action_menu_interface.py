from abc import ABC, abstractmethod
from typing import Callable, List


class BaseActionMenu(ABC):
    @abstractmethod
    def __init__(self, message: str):
        pass

    @abstractmethod
    def add_action(self, action_id: str, action_label: str, action_callable: Callable) -> None:
        pass

    @abstractmethod
    def set_feature_name(self, feature_name: str) -> None:
        pass

    @abstractmethod
    def render(self) -> str:
        pass

    @abstractmethod
    def get_action_callable(self, action_id: str) -> Callable:
        pass

    @abstractmethod
    def action_ids(self) -> List[str]:
        pass
