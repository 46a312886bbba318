""" Interpretable baseline forecasters - Naive, SeasonalNaive, MovingAverage and SimpleExponentialSmoothing """

import math
from typing import Mapping, Sequence, Union

import numpy as np

from ..forecaster import Forecaster, ForecastPath
from ..series import TimeSeries, validate_horizon
from .. import exceptions

HistoryLike = Union[TimeSeries, Sequence[float]]

def _values(history: HistoryLike) -> np.ndarray:
    if isinstance(history, TimeSeries):
        return history.values
    return np.asarray(history, dtype=np.float64)

def naive_predict(history: HistoryLike, horizon: int) -> ForecastPath:
    """ Every step equals the last observation y(T) """
    values = _values(history)
    horizon = validate_horizon(horizon)
    if len(values) == 0:
        raise exceptions.EmptyHistory("Naive forecast requires at least one observation")
    return ForecastPath(len(values), np.full(horizon, values[-1]))

def seasonal_naive_predict(history: HistoryLike, horizon: int, m: int) -> ForecastPath:
    """ The forecast at T+h is the last observation from the same season, y(T + h - m * ceil(h / m)) """
    values = _values(history)
    horizon = validate_horizon(horizon)
    if m < 1:
        raise ValueError(f"Season length must be at least 1 - got {m}")
    if len(values) < m:
        raise exceptions.SeasonTooLong(f"Season length {m} exceeds history length {len(values)}")

    last = len(values) - 1
    return ForecastPath(
        len(values),
        [values[last + h - m * math.ceil(h / m)] for h in range(1, horizon + 1)]
    )

def moving_average_predict(history: HistoryLike, horizon: int, k: int) -> ForecastPath:
    """ Mean of the last k values, applied recursively over the observations extended with prior forecasts """
    values = _values(history)
    horizon = validate_horizon(horizon)
    if k < 1:
        raise ValueError(f"Moving average order must be at least 1 - got {k}")
    if len(values) < k:
        raise exceptions.OrderTooLong(f"Moving average order {k} exceeds history length {len(values)}")

    window = list(values[-k:])
    forecasts = []
    for _ in range(horizon):
        forecast = float(np.mean(window[-k:]))
        forecasts.append(forecast)
        window.append(forecast)
    return ForecastPath(len(values), forecasts)

def ses_predict(history: HistoryLike, horizon: int, alpha: float) -> ForecastPath:
    """ Flat forecast at the final level of l(t) = alpha * y(t) + (1 - alpha) * l(t-1), l(1) = y(1) """
    values = _values(history)
    horizon = validate_horizon(horizon)
    if not 0 < alpha <= 1:
        raise exceptions.AlphaOutOfRange(f"Smoothing parameter must be within (0, 1] - got {alpha}")
    if len(values) == 0:
        raise exceptions.EmptyHistory("Exponential smoothing requires at least one observation")

    level = float(values[0])
    for value in values[1:]:
        level = alpha * float(value) + (1 - alpha) * level
    return ForecastPath(len(values), np.full(horizon, level))

@Forecaster.register('naive')
class Naive(Forecaster):
    """ The forecast is the value of the last observation """

    def _fit(self, history: TimeSeries):
        if len(history) == 0:
            raise exceptions.EmptyHistory("Naive forecaster requires at least one observation")

    def _predict(self, history: TimeSeries, horizon: int, future_regressors: Mapping[str, Sequence[float]]):
        return naive_predict(history, horizon).values

@Forecaster.register('seasonal-naive')
class SeasonalNaive(Forecaster):
    """ The forecast is the last observation from the same season

    Args:
        m: The season length in periods
    """

    def __init__(self, m: int):
        super().__init__()
        if m < 1:
            raise ValueError(f"Season length must be at least 1 - got {m}")
        self.m = m

    @property
    def params(self):
        return {'m': self.m}

    def _fit(self, history: TimeSeries):
        if len(history) < self.m:
            raise exceptions.SeasonTooLong(f"Season length {self.m} exceeds history length {len(history)}")

    def _predict(self, history: TimeSeries, horizon: int, future_regressors: Mapping[str, Sequence[float]]):
        return seasonal_naive_predict(history, horizon, self.m).values

@Forecaster.register('moving-average')
class MovingAverage(Forecaster):
    """ The forecast is the mean of the last k observations

    Args:
        k: The order of the moving average
    """

    def __init__(self, k: int):
        super().__init__()
        if k < 1:
            raise ValueError(f"Moving average order must be at least 1 - got {k}")
        self.k = k

    @property
    def params(self):
        return {'k': self.k}

    def _fit(self, history: TimeSeries):
        if len(history) < self.k:
            raise exceptions.OrderTooLong(f"Moving average order {self.k} exceeds history length {len(history)}")

    def _predict(self, history: TimeSeries, horizon: int, future_regressors: Mapping[str, Sequence[float]]):
        return moving_average_predict(history, horizon, self.k).values

@Forecaster.register('ses')
class SimpleExponentialSmoothing(Forecaster):
    """ The forecast is an exponentially weighted average of the past observations

    Args:
        alpha: The smoothing parameter within (0, 1]
    """

    def __init__(self, alpha: float = 0.5):
        super().__init__()
        if not 0 < alpha <= 1:
            raise exceptions.AlphaOutOfRange(f"Smoothing parameter must be within (0, 1] - got {alpha}")
        self.alpha = alpha

    @property
    def params(self):
        return {'alpha': self.alpha}

    def _fit(self, history: TimeSeries):
        if len(history) == 0:
            raise exceptions.EmptyHistory("Exponential smoothing requires at least one observation")

    def _predict(self, history: TimeSeries, horizon: int, future_regressors: Mapping[str, Sequence[float]]):
        return ses_predict(history, horizon, self.alpha).values
