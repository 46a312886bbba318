""" Backtested historical forecasts over expanding windows and the fidelity metrics comparing two forecasts """

import dataclasses
from typing import Dict, Optional, Sequence, Tuple

import numpy as np
import pandas as pd

from .callbacks import AbstractCallback, DefaultCallback
from .forecaster import Forecaster, ForecastPath
from .series import TimeSeries, ExpandingWindowSplit, SplitterConfig, validate_horizon
from .types import StrOrPathLike
from .worker_config import WorkerPoolConfig
from . import exceptions

import logging
log = logging.getLogger(__name__)

@dataclasses.dataclass(frozen=True, eq=False)
class BacktestResult:
    """ The forecaster's predictions over every expanding window split

    The step-h series holds split i's h-th prediction f(T_i + h | T_i) at (0-based) time index T_i + h - 1, and is
    undefined (NaN) elsewhere.

    Args:
        splits: The splits in train_end order
        paths: The forecast path of each split
        length: The length T of the backtested series
    """
    splits: Tuple[ExpandingWindowSplit, ...]
    paths: Tuple[ForecastPath, ...]
    length: int

    def __post_init__(self):
        object.__setattr__(self, "splits", tuple(self.splits))
        object.__setattr__(self, "paths", tuple(self.paths))
        if len(self.splits) != len(self.paths):
            raise exceptions.LengthMismatch(f"{len(self.splits)} splits were given for {len(self.paths)} paths")

        values = np.full((self.horizon, self.length), np.nan)
        for split, path in zip(self.splits, self.paths):
            values[np.arange(self.horizon), np.arange(split.train_end, split.train_end + self.horizon)] = path.values
        values.setflags(write=False)
        object.__setattr__(self, "_values", values)

    def __repr__(self) -> str:
        return f"<tsshap.BacktestResult: {len(self.splits)} splits H={self.horizon} coverage({self.coverage})>"

    @property
    def horizon(self) -> int:
        return self.splits[0].horizon if self.splits else 0

    @property
    def coverage(self) -> range:
        """ The time indices covered by the test windows """
        if not self.splits:
            return range(0)
        return range(self.splits[0].train_end, self.splits[-1].train_end + self.horizon)

    @property
    def per_step_series(self) -> np.ndarray:
        """ An (H, T) array - row h - 1 holds the step-h backtest series """
        return self._values

    def step(self, h: int) -> pd.Series:
        """ The defined values of the step-h backtest series indexed by time index """
        if not 1 <= h <= self.horizon:
            raise exceptions.HorizonOutOfRange(f"Step {h} is outside 1..{self.horizon}")
        series = pd.Series(self._values[h - 1], name=f"step-{h}")
        return series.dropna()

    def to_frame(self) -> pd.DataFrame:
        """ One column per horizon step indexed by the covered time indices """
        frame = pd.DataFrame(
            {f"step-{h}": self._values[h - 1] for h in range(1, self.horizon + 1)},
        )
        frame.index.name = "t"
        return frame.loc[list(self.coverage)]

    def to_csv(self, path: StrOrPathLike):
        self.to_frame().to_csv(path)

def run_backtest(
    series: TimeSeries,
    forecaster: Forecaster,
    horizon: int,
    splitter_config: Optional[SplitterConfig] = None,
    max_lag: int = 0,
    workers: Optional[WorkerPoolConfig] = None,
    callback: AbstractCallback = DefaultCallback(),
    ) -> BacktestResult:
    """ Run the forecaster over expanding window splits of the series

    Forecasters that require refitting are cloned and fit on every split's training partition (so no split sees
    the values it forecasts) and the splits are evaluated on the worker pool. Other forecasters are fit once on the
    first training partition and predict every split from that split's history. Future regressor values of the
    test window are passed to forecasters that support them.

    Args:
        series: The series to backtest on
        forecaster: The black-box forecaster - it is cloned, never fit in place
        horizon: The test window length H
        splitter_config: The expanding window settings
        max_lag: The longest feature lag, used for the default initial training window
        workers: The pool the splits of refitting forecasters are evaluated on
        callback: Progress callback notified per split

    Returns:
        BacktestResult: The predictions of every split

    Raises:
        SplitExhausted: No split fits the series
    """
    horizon = validate_horizon(horizon)
    splitter_config = splitter_config or SplitterConfig()
    workers = workers or WorkerPoolConfig()

    try:
        splits = splitter_config.resolve(len(series), horizon, max_lag)
    except exceptions.InsufficientHistory as e:
        raise exceptions.SplitExhausted(f"No backtest split fits a series of length {len(series)}: {e}") from e
    if not splits:
        raise exceptions.SplitExhausted(f"No backtest split fits a series of length {len(series)}")

    log.debug("Backtesting %s over %s splits", forecaster, len(splits))
    callback.backtesting(len(splits))

    if forecaster.requires_refit_per_window:

        def evaluate(split: ExpandingWindowSplit) -> ForecastPath:
            model = forecaster.clone().fit(series.head(split.train_end))
            return model.predict(horizon, series.future_regressors(split.train_end, horizon))

        paths = workers.map(evaluate, splits, callback=lambda _: callback.backtested(1))

    else:
        model = forecaster.clone().fit(series.head(splits[0].train_end))
        paths = []
        for split in splits:
            paths.append(model.predict(
                horizon,
                series.future_regressors(split.train_end, horizon),
                history=series.head(split.train_end, future=horizon),
            ))
            callback.backtested(1)

    return BacktestResult(splits=splits, paths=paths, length=len(series))

@dataclasses.dataclass(frozen=True)
class FidelityReport:
    """ Errors of a forecast measured against a reference forecast

    MAPE skips zero reference values; MASE is None when the in-sample naive error is zero.
    """
    mae: float
    rmse: float
    mape: float
    mase: Optional[float]

    def to_dict(self) -> Dict[str, Optional[float]]:
        return {"MAE": self.mae, "RMSE": self.rmse, "MAPE": self.mape, "MASE": self.mase}

def naive_scale(insample: Sequence[float]) -> float:
    """ The in-sample mean absolute error of the one-step naive forecast """
    values = insample.values if isinstance(insample, TimeSeries) else np.asarray(insample, dtype=np.float64)
    if len(values) < 2:
        raise exceptions.InsufficientHistory(f"The naive scale needs at least two in-sample values - got {len(values)}")
    return float(np.mean(np.abs(np.diff(values))))

def fidelity_metrics(
    forecaster_path: Sequence[float],
    surrogate_path: Sequence[float],
    insample: TimeSeries,
    ) -> FidelityReport:
    """ MAE, RMSE, MAPE and MASE of the surrogate's forecasts against the forecaster's

    Args:
        forecaster_path: The reference values a
        surrogate_path: The compared values b
        insample: The series whose one-step naive error scales MASE

    Raises:
        LengthMismatch: The paths differ in length or are empty
        AllReferenceZero: Every reference value is zero
    """
    a = np.asarray(forecaster_path, dtype=np.float64)
    b = np.asarray(surrogate_path, dtype=np.float64)
    if len(a) != len(b) or len(a) == 0:
        raise exceptions.LengthMismatch(f"Cannot compare paths of lengths {len(a)} and {len(b)}")

    errors = np.abs(a - b)
    mae = float(errors.mean())
    rmse = float(np.sqrt(np.mean(errors ** 2)))

    nonzero = a != 0
    if not nonzero.any():
        raise exceptions.AllReferenceZero("Every reference value is zero - MAPE is undefined")
    mape = float(np.mean(errors[nonzero] / np.abs(a[nonzero])))

    scale = naive_scale(insample)
    mase = mae / scale if scale > 0 else None

    return FidelityReport(mae=mae, rmse=rmse, mape=mape, mase=mase)
