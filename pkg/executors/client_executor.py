"""
Client Executor
Runs independent per-client tasks serially or on a thread pool.
"""

from concurrent.futures import ThreadPoolExecutor
from typing import Callable, List, Sequence, TypeVar

from silantui import ModernLogger

T = TypeVar('T')
R = TypeVar('R')


class ClientExecutor(ModernLogger):
    """
    Maps a task over clients and returns results in input order.
    Results never depend on the worker count: each task owns its random
    stream and the caller reduces in a fixed order.
    """

    def __init__(self, workers: int = 1):
        """
        Initialize the executor.

        Args:
            workers: Number of worker threads; 1 runs everything inline
        """
        super().__init__("ClientExecutor")
        if workers < 1:
            raise ValueError(f"workers must be >= 1, got {workers}")
        self.workers = workers
        self._pool = ThreadPoolExecutor(max_workers=workers, thread_name_prefix="client") if workers > 1 else None

    def map(self, task: Callable[[T], R], items: Sequence[T]) -> List[R]:
        """
        Run ``task`` on every item.

        Returns:
            Results in the order of ``items``

        Raises:
            The first exception raised by a task, in item order
        """
        if self._pool is None or len(items) < 2:
            return [task(item) for item in items]
        self.debug(f"[ClientExecutor] Dispatching {len(items)} tasks to {self.workers} workers")
        futures = [self._pool.submit(task, item) for item in items]
        return [future.result() for future in futures]

    def shutdown(self) -> None:
        if self._pool is not None:
            self._pool.shutdown(wait=True)
            self._pool = None

    def __enter__(self) -> 'ClientExecutor':
        return self

    def __exit__(self, exc_type, exc, tb) -> None:
        self.shutdown()
