from __future__ import annotations

import concurrent.futures
import threading
from typing import Callable, Iterable, Sequence, TypeVar

T = TypeVar("T")
R = TypeVar("R")


class SweepPool:
    """Ordered fan-out of independent computations over a thread pool.

    Results always come back in input order, so a report never depends on
    the thread count. With ``max_workers == 1`` everything runs inline.
    """

    def __init__(self, max_workers: int = 1) -> None:
        self.max_workers = max(1, int(max_workers))
        self.executor: concurrent.futures.ThreadPoolExecutor | None = None
        if self.max_workers > 1:
            self.executor = concurrent.futures.ThreadPoolExecutor(max_workers=self.max_workers)
        self.stop_event = threading.Event()

    def map(self, fn: Callable[[T], R], items: Iterable[T]) -> list[R]:
        items = list(items)
        if self.executor is None:
            return [fn(item) for item in items]
        return list(self.executor.map(fn, items))

    def scan_until(
        self,
        fn: Callable[[T], R],
        items: Sequence[T],
        stop: Callable[[R], bool],
    ) -> tuple[list[R], int | None]:
        """Evaluate ``fn`` in order until ``stop`` holds.

        Returns the results up to and including the stopping item, plus its
        position (``None`` when the whole sequence was scanned).
        """
        results: list[R] = []
        step = self.max_workers
        for start in range(0, len(items), step):
            if self.stop_event.is_set():
                break
            for offset, result in enumerate(self.map(fn, items[start:start + step])):
                results.append(result)
                if stop(result):
                    return results, start + offset
        return results, None

    def close(self) -> None:
        self.stop_event.set()
        if self.executor is not None:
            self.executor.shutdown(wait=True)
            self.executor = None

    def __enter__(self) -> "SweepPool":
        return self

    def __exit__(self, *exc_info: object) -> None:
        self.close()


def run_sweep(
    fn: Callable[[T], R],
    items: Iterable[T],
    pool: SweepPool | None = None,
) -> list[R]:
    if pool is None:
        return [fn(item) for item in items]
    return pool.map(fn, items)


__all__ = ["SweepPool", "run_sweep"]
