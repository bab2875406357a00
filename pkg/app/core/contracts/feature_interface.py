from abc import ABC, abstractmethod


class BaseFeature(ABC):
    # ***** REQUIRED *****
    # returns a result object exposing ``ok`` and ``to_dict()``
    @abstractmethod
    def run_default(self, params: dict):
        pass

    # ***** OPTIONAL *****
    def self_test(self) -> bool:
        return True

    # ***** OPTIONAL *****
    def shutdown(self) -> None:
        pass
