import abc
import queue
import typing
import weakref
from typing import Union, Optional, Any, Callable

import tqdm
import tqdm.notebook

import logging
log = logging.getLogger(__name__)

class AbstractCallback(abc.ABC): # pragma: no cover
    """ The base interface for callbacks passed to the long running tsshap operations. Called as backtest splits
    are evaluated, boosting rounds complete, perturbed pipelines are refit and datasets are downloaded.
    """

    @abc.abstractmethod
    def backtesting(self, count: int):
        ...

    @abc.abstractmethod
    def backtested(self, splitOrCount: Union[int, str]):
        ...

    @abc.abstractmethod
    def boosting(self, count: int):
        ...

    @abc.abstractmethod
    def boosted(self, count: int):
        ...

    @abc.abstractmethod
    def perturbing(self, count: int):
        ...

    @abc.abstractmethod
    def perturbed(self, sampleOrCount: Union[int, str]):
        ...

    @abc.abstractmethod
    def get_bytes_transfer(self, path: str, bytes: Optional[int] = None) -> Callable[[int], None]:
        pass

class NoneImplementedCallback(AbstractCallback):
    def backtesting(self, count: int): return super().backtesting(count)
    def backtested(self, splitOrCount: Union[int, str]): return super().backtested(splitOrCount)
    def boosting(self, count: int): return super().boosting(count)
    def boosted(self, count: int): return super().boosted(count)
    def perturbing(self, count: int): return super().perturbing(count)
    def perturbed(self, sampleOrCount: Union[int, str]): return super().perturbed(sampleOrCount)
    def get_bytes_transfer(self, path: str, bytes: Optional[int] = None): return super().get_bytes_transfer(path, bytes)

class DefaultCallback(NoneImplementedCallback): # pragma: no cover

    _target: Optional[AbstractCallback] = None

    @classmethod
    def become(cls, target: Optional[AbstractCallback]):
        cls._target = target

    def __getattribute__(self, attr):
        if attr == 'become':
            return super().__getattribute__(attr)
        if attr == 'get_bytes_transfer':
            target = super().__getattribute__('_target')
            if target is None:
                return lambda *args, **kwargs: (lambda *args, **kwargs: None)
            return target.get_bytes_transfer
        return getattr(super().__getattribute__('_target'), attr, lambda *args, **kwargs: None)

class ProgressCallback(AbstractCallback):
    """ Render tqdm progress bars for backtesting, boosting, perturbation refits and downloads

    Args:
        notebook: Use the notebook flavour of tqdm
        leave: Keep completed bars on screen
    """

    def __init__(self, notebook: bool = False, leave: bool = True):

        self._notebook = notebook
        self._leave = leave
        self._tqdm = tqdm.notebook.tqdm if notebook else tqdm.tqdm
        self._bars = {}

        self._positionPool = queue.Queue()
        self._positionOffset = -1

    def _getNextPositionOffset(self) -> int:
        try:
            return self._positionPool.get_nowait()
        except queue.Empty:
            self._positionOffset += 1
            return self._positionOffset

    def _pbar(self, desc: str, total: int, unit: str):
        return self._tqdm(
            desc=desc,
            total=total,
            unit=unit,
            leave=self._leave,
            position=self._getNextPositionOffset()
        )

    def _open(self, key: str, count: int, unit: str):
        if not count:
            return
        if key not in self._bars:
            self._bars[key] = self._pbar(key, count, unit)
        else:
            self._bars[key].total += count

    def _update(self, key: str, stepOrCount: Union[int, str]):
        pbar = self._bars.get(key)
        if pbar is None:
            return
        if isinstance(stepOrCount, int):
            pbar.update(stepOrCount)
        else:
            pbar.set_postfix_str(stepOrCount, refresh=False)
            pbar.update()
        pbar.display()

    def backtesting(self, count: int):
        self._open('Backtesting', count, ' splits')

    def backtested(self, splitOrCount: Union[int, str]):
        self._update('Backtesting', splitOrCount)

    def boosting(self, count: int):
        self._open('Boosting', count, ' trees')

    def boosted(self, count: int):
        self._update('Boosting', count)

    def perturbing(self, count: int):
        self._open('Perturbing', count, ' samples')

    def perturbed(self, sampleOrCount: Union[int, str]):
        self._update('Perturbing', sampleOrCount)

    def get_bytes_transfer(self, path: str, total_bytes_transfer: Optional[int] = None):
        log.debug('Initialising transfer for path=%s', path)

        if self._notebook:
            return lambda *args, **kwargs: None

        position = self._getNextPositionOffset()
        pbar = self._tqdm(
            desc=f'Downloading {path}',
            total=total_bytes_transfer,
            unit='bytes',
            leave=self._leave,
            position=position
        )

        transfer = pbar.update
        weakref.finalize(transfer, lambda: self._positionPool.put(position))
        return transfer

    def close(self):
        for pbar in self._bars.values():
            pbar.close()
        self._bars = {}

def composeCallback(callbacks: typing.Iterable[AbstractCallback]):
    """ Compile an iterable of callback methods together into a single Callback class object """

    callbacks = list(callbacks)

    class ComposedCallback(NoneImplementedCallback):
        """ Composed callback object """

        def __getattribute__(self, __name: str) -> Any:

            if __name == 'get_bytes_transfer':
                def transfer(*args, **kwargs):
                    transfers = [callback.get_bytes_transfer(*args, **kwargs) for callback in callbacks]
                    return lambda count: [fn(count) for fn in transfers]
                return transfer

            def apply(*args, **kwargs):
                for callback in callbacks:
                    getattr(callback, __name)(*args, **kwargs)

            return apply

    return ComposedCallback() # type: ignore
