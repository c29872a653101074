"""
Worker Pool

Fixed set of worker threads fed by a thread-safe queue. Results are stored by task
index and handed back in index order, so any reduction done by the caller is
independent of the number of workers.

Author: Mohammed Ismail AbdElmageid
"""
import logging
import queue
import threading
from typing import Any, Callable, Dict, List, Sequence

logger = logging.getLogger(__name__)

_STOP = object()


class WorkerPool:
    """
    Runs independent tasks on worker threads

    Tasks are (index, callable, args) triples placed on a queue.Queue; each worker
    pulls tasks until it sees the stop marker. Results and errors are collected in
    dictionaries guarded by a lock.
    """

    def __init__(self, workers: int = 1, name: str = "pool"):
        if workers < 1:
            raise ValueError(f"workers must be >= 1, got {workers}")
        self.workers = workers
        self.name = name
        self.task_queue: queue.Queue = queue.Queue()
        self.results: Dict[int, Any] = {}
        self.errors: Dict[int, BaseException] = {}
        self.lock = threading.Lock()

    def _worker_loop(self):
        """Worker thread loop - pulls tasks until the stop marker"""
        while True:
            item = self.task_queue.get()
            try:
                if item is _STOP:
                    return
                index, function, args = item
                try:
                    result = function(*args)
                except BaseException as e:  # re-raised in the calling thread
                    with self.lock:
                        self.errors[index] = e
                    continue
                with self.lock:
                    self.results[index] = result
            finally:
                self.task_queue.task_done()

    def map(self, function: Callable, arguments: Sequence[tuple]) -> List[Any]:
        """Apply function to every argument tuple; results come back in input order"""
        self.results = {}
        self.errors = {}
        if not arguments:
            return []
        if self.workers == 1:
            return [function(*args) for args in arguments]

        threads = []
        for _ in range(min(self.workers, len(arguments))):
            thread = threading.Thread(target=self._worker_loop, daemon=True)
            thread.start()
            threads.append(thread)
        for index, args in enumerate(arguments):
            self.task_queue.put((index, function, tuple(args)))
        for _ in threads:
            self.task_queue.put(_STOP)
        for thread in threads:
            thread.join()

        if self.errors:
            first = min(self.errors)
            logger.debug("%s: %d task(s) failed, first at index %d", self.name, len(self.errors), first)
            raise self.errors[first]
        logger.debug("%s: %d tasks finished on %d workers", self.name, len(arguments), len(threads))
        return [self.results[index] for index in range(len(arguments))]


def chunk_ranges(total: int, chunk_size: int) -> List[tuple]:
    """Static partition of range(total) into half-open (start, stop) chunks"""
    return [(start, min(start + chunk_size, total)) for start in range(0, total, chunk_size)]
