"""
services/lanes.py
Worker lanes for evaluating the children of one search iteration.
Results always come back in submission order, whatever the lane count.
"""
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Iterable, Iterator, Optional, TypeVar

from core.exceptions import ConfigurationError

T = TypeVar("T")
R = TypeVar("R")


class LanePool:
    """
    Ordered map over child slots using up to `lanes` named worker threads.
    With one lane the map is lazy and runs inline, so a caller that stops
    consuming early never evaluates the remaining slots.
    """
    def __init__(self, lanes: int):
        if lanes < 1:
            raise ConfigurationError(f"lanes must be >= 1, got {lanes}")
        self.lanes = lanes
        self._executor: Optional[ThreadPoolExecutor] = None

    def __enter__(self) -> "LanePool":
        if self.lanes > 1:
            self._executor = ThreadPoolExecutor(max_workers=self.lanes, thread_name_prefix="SearchLane")
        return self

    def __exit__(self, *exc) -> None:
        if self._executor is not None:
            self._executor.shutdown(wait=True, cancel_futures=True)
            self._executor = None

    def map(self, fn: Callable[[T], R], items: Iterable[T]) -> Iterator[R]:
        if self._executor is None:
            return map(fn, items)
        return self._executor.map(fn, items)
