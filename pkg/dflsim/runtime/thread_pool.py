import queue
import threading
import time
import typing as t

from dflsim.defaults import DEFAULT_WORKERS

R = t.TypeVar("R")

# a worker re-checks the stop flag at this interval while the queue is empty
POLL_INTERVAL: float = 0.5


class _Failure:
    def __init__(self, error: Exception) -> None:
        self.error = error


class ReplicaPool(t.Generic[R]):
    """
    Daemon workers running one function over integer keys (replica run ids).

    Every key is run exactly once; its result, or the exception it raised, is parked until
    the caller collects it. Workers never touch the filesystem on behalf of the caller.
    """

    def __init__(self, func: t.Callable[[int], R], num_workers: int | None = None) -> None:
        self.func = func
        self.num_workers = max(1, num_workers or DEFAULT_WORKERS)
        self.pending: queue.Queue[int] = queue.Queue()
        self.done: dict[int, R | _Failure] = {}
        self.ready = threading.Condition()
        self.stop = threading.Event()

        self.workers = [threading.Thread(target=self._work, daemon=True) for _ in range(self.num_workers)]
        for worker in self.workers:
            worker.start()

    def __enter__(self) -> "ReplicaPool[R]":
        return self

    def __exit__(self, *_: t.Any) -> None:
        self.shutdown()

    def _work(self) -> None:
        while not self.stop.is_set():
            try:
                key = self.pending.get(timeout=POLL_INTERVAL)
            except queue.Empty:
                continue

            outcome: R | _Failure
            try:
                outcome = self.func(key)
            except Exception as e:
                outcome = _Failure(e)

            with self.ready:
                self.done[key] = outcome
                self.ready.notify_all()

    def submit(self, key: int) -> None:
        with self.ready:
            if key in self.done:
                raise ValueError(f"key {key} was already run and not collected")
        self.pending.put(key)

    def collect(self, key: int, timeout: float | None = None) -> R:
        """Block until key is done, then return its result or re-raise its exception."""
        deadline = None if timeout is None else time.monotonic() + timeout
        with self.ready:
            while key not in self.done:
                remaining = None if deadline is None else deadline - time.monotonic()
                if remaining is not None and remaining <= 0:
                    raise TimeoutError(f"key {key} did not complete within {timeout}s")
                self.ready.wait(remaining)
            outcome = self.done.pop(key)

        if isinstance(outcome, _Failure):
            raise outcome.error
        return outcome

    def map_ordered(self, keys: t.Iterable[int]) -> t.Iterator[tuple[int, R]]:
        """Run every key in parallel and yield (key, result) in the order of keys."""
        keys = list(keys)
        for key in keys:
            self.submit(key)
        for key in keys:
            yield key, self.collect(key)

    def shutdown(self) -> None:
        self.stop.set()
        for worker in self.workers:
            worker.join()


__all__ = ["ReplicaPool"]
