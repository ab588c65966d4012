from collections import OrderedDict
from typing import Callable, List, Optional


class Registry:
    """
    Maps names to callables, filled with the `register` decorator.
    """

    def __init__(self, name: str) -> None:
        self._name = name
        self._obj_map: "OrderedDict[str, Callable]" = OrderedDict()

    def __contains__(self, item) -> bool:
        return item in self._obj_map

    def register(self, name: Optional[str] = None):
        """
        Decorator registering a function or class under `name`, or under its `__name__` when omitted.
        """

        def deco(obj: Callable) -> Callable:
            key = name or obj.__name__
            if key in self._obj_map:
                raise ValueError(f"An object named '{key}' was already registered in '{self._name}' registry!")
            self._obj_map[key] = obj
            return obj

        return deco

    def get(self, name: str) -> Callable:
        if name not in self._obj_map:
            raise KeyError(f"No object named '{name}' found in '{self._name}' registry! Known: {self.list_keys()}")
        return self._obj_map[name]

    def list_keys(self) -> List[str]:
        return list(self._obj_map.keys())

    def __repr__(self) -> str:
        return f"{self._name}(keys={self.list_keys()})"
