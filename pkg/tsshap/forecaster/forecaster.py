import abc
import copy
import dataclasses
from importlib import metadata
from typing import Dict, Iterator, Mapping, Optional, Sequence, Type
from typing_extensions import Self

import numpy as np

from ..series import TimeSeries, validate_horizon
from .. import exceptions

import logging
log = logging.getLogger(__name__)

ENTRY_POINT_GROUP = 'tsshap_forecasters'

@dataclasses.dataclass(frozen=True)
class ForecastPath:
    """ The H step forecast f(T+h|T), h = 1..H, produced from a history ending at `origin` """
    origin: int
    values: Sequence[float]

    def __post_init__(self):
        array = np.array(self.values, dtype=np.float64)
        array.setflags(write=False)
        object.__setattr__(self, 'values', array)

    def __len__(self) -> int:
        return len(self.values)

    def __iter__(self) -> Iterator[float]:
        return iter(self.values.tolist())

    def __getitem__(self, step: int) -> float:
        return float(self.values[step])

    @property
    def horizon(self) -> int:
        return len(self.values)

    def tolist(self):
        return self.values.tolist()

class Forecaster(abc.ABC):
    """ The black-box forecaster interface

    The explainer only ever calls `fit` and `predict`. Implementations provide `_fit` and `_predict`; this class
    enforces the fit-before-predict contract and that exactly H finite values are returned.

    Class attributes:
        supports_regressors: The forecaster consumes future regressor values in predict
        requires_refit_per_window: The backtester must refit the forecaster on every training partition. When False
            the forecaster is fit once and predicts each split from the history passed to `predict`
    """

    supports_regressors: bool = False
    requires_refit_per_window: bool = True

    __BUILTINS: Dict[str, Type["Forecaster"]] = {}

    def __init__(self):
        self._history: Optional[TimeSeries] = None

    def __repr__(self):
        return f"<tsshap.{self.__class__.__name__}: {self.params}>"

    @property
    def params(self) -> Dict[str, object]:
        """ The forecaster's hyperparameters - used in reports """
        return {}

    @property
    def fitted(self) -> bool:
        return self._history is not None

    @classmethod
    def register(cls, name: str):
        """ Class decorator registering a built-in forecaster under `name` """
        def wrapper(forecasterClass: Type["Forecaster"]) -> Type["Forecaster"]:
            cls.__BUILTINS[name] = forecasterClass
            return forecasterClass
        return wrapper

    @classmethod
    def available(cls) -> Dict[str, Type["Forecaster"]]:
        """ All forecasters known by name - built-ins and those published on the entry point group """
        found = dict(cls.__BUILTINS)
        for entry_point in metadata.entry_points(group=ENTRY_POINT_GROUP):
            if entry_point.name in found:
                continue
            try:
                found[entry_point.name] = entry_point.load()
            except Exception:
                log.warning('Forecaster %s could not be loaded', entry_point.name)
        return found

    @classmethod
    def find(cls, name: str) -> Type["Forecaster"]:
        """ Fetch the `Forecaster` class registered under `name`

        Args:
            name: The forecaster name e.g. 'naive', 'seasonal-naive'

        Returns:
            Type[Forecaster]: The forecaster class

        Raises:
            UnknownForecaster: In the event that no forecaster with the provided name could be found
        """
        lname = name.lower()
        if lname in cls.__BUILTINS:
            return cls.__BUILTINS[lname]

        available = cls.available()
        if lname not in available:
            raise exceptions.UnknownForecaster(
                f"Couldn't find a forecaster called '{name}' - found {len(available)} forecasters: {sorted(available)}"
            )
        return available[lname]

    @classmethod
    def create(cls, name: str, params: Optional[Mapping[str, object]] = None) -> "Forecaster":
        """ Find and initialise a forecaster with the given hyperparameters """
        return cls.find(name)(**dict(params or {}))

    def clone(self) -> Self:
        """ An unfitted copy of the forecaster with the same hyperparameters """
        duplicate = copy.deepcopy(self)
        duplicate._history = None
        duplicate._reset()
        return duplicate

    def fit(self, history: TimeSeries) -> Self:
        """ Fit the forecaster on a history

        Args:
            history: The observed series up to the forecast origin

        Returns:
            Self: The fitted forecaster
        """
        self._fit(history)
        self._history = history
        return self

    def predict(
        self,
        horizon: int,
        future_regressors: Optional[Mapping[str, Sequence[float]]] = None,
        history: Optional[TimeSeries] = None,
        ) -> ForecastPath:
        """ Forecast H steps beyond a history

        Args:
            horizon: The number of steps H
            future_regressors: Regressor values for the H forecast steps (ignored unless supports_regressors)
            history: The history to forecast from - defaults to the history the forecaster was fit on

        Returns:
            ForecastPath: Exactly H finite values

        Raises:
            NotFitted: predict called before fit
            NonFiniteForecast: The implementation produced a non finite value or the wrong number of values
        """
        if not self.fitted:
            raise exceptions.NotFitted(f"{self.__class__.__name__}.predict called before fit")

        horizon = validate_horizon(horizon)
        context = self._history if history is None else history
        regressors = dict(future_regressors or {}) if self.supports_regressors else {}

        values = np.asarray(self._predict(context, horizon, regressors), dtype=np.float64)
        if values.shape != (horizon,):
            raise exceptions.NonFiniteForecast(
                f"{self.__class__.__name__} returned {values.size} values for a horizon of {horizon}"
            )
        if not np.all(np.isfinite(values)):
            raise exceptions.NonFiniteForecast(f"{self.__class__.__name__} returned non finite values {values}")

        return ForecastPath(origin=len(context), values=values)

    def _reset(self):
        """ Discard any fitted state - called on clones """
        pass

    @abc.abstractmethod
    def _fit(self, history: TimeSeries):
        """ Learn from the history - classical forecasters may simply validate it """
        pass

    @abc.abstractmethod
    def _predict(self, history: TimeSeries, horizon: int, future_regressors: Mapping[str, Sequence[float]]) -> Sequence[float]:
        """ Produce `horizon` forecasts following `history`

        Args:
            history: The context to forecast from
            horizon: The number of steps
            future_regressors: Regressor values for the forecast steps (empty unless supports_regressors)

        Returns:
            Sequence[float]: The forecasts
        """
        pass
