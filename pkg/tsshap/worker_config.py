import concurrent.futures
from typing import Callable, Iterable, List, Optional, TypeVar
from typing_extensions import ParamSpec

import logging
logger = logging.getLogger(__name__)

_P = ParamSpec('_P')
_T = TypeVar('_T')
_I = TypeVar('_I')

class SequencialExecutor(concurrent.futures.Executor):

    def submit(self, __fn: Callable[_P, _T], *args: _P.args, **kwargs: _P.kwargs) -> concurrent.futures.Future[_T]:

        future = concurrent.futures.Future()
        try:
            future.set_result(__fn(*args, **kwargs))
        except BaseException as e:
            future.set_exception(e)
        return future

class WorkerPoolConfig:
    """ Execution configuration for independent units of work - backtest splits and perturbed pipeline refits

    Args:
        executor: An externally managed executor to submit work to
        max_workers: 0 runs work sequentially in the calling thread (the default), None or a positive count uses
            the shared tsshap thread pool
    """

    __WORKER_POOL: Optional[concurrent.futures.ThreadPoolExecutor] = None
    @classmethod
    def _workerPool(cls, max_workers: Optional[int] = None) -> concurrent.futures.ThreadPoolExecutor:
        if cls.__WORKER_POOL is None:
            logger.debug('Initialising tsshap worker pool executor with %s workers', max_workers)
            cls.__WORKER_POOL = concurrent.futures.ThreadPoolExecutor(max_workers=max_workers)
        return cls.__WORKER_POOL

    @classmethod
    def shutdown(cls):
        """ Shut down the shared worker pool if one was created """
        if cls.__WORKER_POOL is not None:
            logger.debug('Shutting down tsshap worker pool executor')
            cls.__WORKER_POOL.shutdown(wait=True)
            cls.__WORKER_POOL = None

    def __init__(
        self,
        executor: Optional[concurrent.futures.Executor] = None,
        max_workers: Optional[int] = 0
    ):
        if executor is None:
            self._executor = SequencialExecutor() if max_workers == 0 else None
        else:
            self._executor = executor

        self.max_workers = max_workers
        self.futures: List[concurrent.futures.Future] = []

    @property
    def executor(self) -> concurrent.futures.Executor:
        if self._executor is None:
            self._executor = self._workerPool(self.max_workers)
        return self._executor

    @property
    def sequential(self) -> bool:
        return isinstance(self._executor, SequencialExecutor)

    def submit(self, *args, **kwargs) -> concurrent.futures.Future:
        future = self.executor.submit(*args, **kwargs)
        self.futures.append(future)
        return future

    def map(self, fn: Callable[[_I], _T], items: Iterable[_I], callback: Optional[Callable[[int], None]] = None) -> List[_T]:
        """ Apply `fn` to every item and return the results in submission order

        Any exception raised by a unit of work cancels the remaining units and is re-raised.

        Args:
            fn: The unit of work
            items: The inputs, one unit of work each
            callback: Called with the item index as each unit completes
        """
        futures = [self.submit(fn, item) for item in items]

        try:
            results = []
            for index, future in enumerate(futures):
                results.append(future.result())
                if callback is not None:
                    callback(index)
            return results

        except Exception:
            logger.exception('Exception in worker pool - cancelling remaining work')
            for future in futures:
                future.cancel()
            raise

        finally:
            self.futures = [future for future in self.futures if not future.done()]
