import dataclasses
import functools
from typing import List, Sequence

import numpy as np
import pandas as pd

from ..series import TimeSeries
from ..types import StrOrPathLike
from .calendar import HolidayCalendar, encode_index
from .config import FeatureConfig, HolidayConfig
from .. import exceptions

import logging
log = logging.getLogger(__name__)

@dataclasses.dataclass(frozen=True, eq=False)
class FeatureMatrix:
    """ Interpretable feature rows x(t) aligned to the time indices they describe

    Args:
        names: The d feature names, in column order
        rows: A (n, d) array - row i is x(row_index[i])
        row_index: The n time indices covered
    """
    names: Sequence[str]
    rows: np.ndarray
    row_index: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "names", tuple(self.names))
        rows = np.array(self.rows, dtype=np.float64).reshape(-1, len(self.names))
        index = np.array(self.row_index, dtype=np.int64)
        rows.setflags(write=False)
        index.setflags(write=False)
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "row_index", index)

        if len(rows) != len(index):
            raise exceptions.LengthMismatch(f"{len(rows)} feature rows were given for {len(index)} time indices")

    def __len__(self) -> int:
        return len(self.row_index)

    def __repr__(self) -> str:
        return f"<tsshap.FeatureMatrix: {len(self)} rows x {len(self.names)} features>"

    @property
    def d(self) -> int:
        return len(self.names)

    def position(self, name: str) -> int:
        """ Column position of a feature name """
        try:
            return self.names.index(name)
        except ValueError:
            raise exceptions.UnknownFeature(f"No feature called '{name}' - features are {list(self.names)}") from None

    def column(self, name: str) -> np.ndarray:
        return self.rows[:, self.position(name)]

    def row(self, t: int) -> np.ndarray:
        """ The feature vector x(t) for time index t """
        positions = np.flatnonzero(self.row_index == t)
        if not len(positions):
            raise exceptions.InsufficientHistory(f"No feature row for time index {t}")
        return self.rows[positions[0]]

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame(self.rows, columns=list(self.names), index=pd.Index(self.row_index, name="t"))

    def to_csv(self, path: StrOrPathLike):
        """ Write the matrix with a header row of feature names """
        self.to_frame().to_csv(path)

@functools.lru_cache(maxsize=None)
def _calendar(holidays: HolidayConfig) -> HolidayCalendar:
    return holidays.load()

def _check_regressors(series: TimeSeries, config: FeatureConfig):
    unknown = [column for column in config.regressor_columns if column not in series.regressors]
    if unknown:
        raise exceptions.UnknownRegressor(
            f"Regressor columns {unknown} are not present in the series - found {list(series.regressors)}"
        )

def build_features(series: TimeSeries, config: FeatureConfig) -> FeatureMatrix:
    """ Build the interpretable feature matrix of a series

    Row t only reads observations y(0)..y(t-1) so rows never leak the value they are used to predict. Rows are
    produced for every t from `config.lookback` to T - 1; earlier rows with unsatisfiable lookbacks are dropped.

    Args:
        series: The observed (or forecast extended) series
        config: The feature selection

    Returns:
        FeatureMatrix: The feature rows

    Raises:
        InsufficientHistory: The series is no longer than the configured lookback
        UnknownRegressor: A configured regressor column is missing from the series
        HolidayCalendarUnreadable: The holiday calendar could not be read
    """
    lookback = config.lookback
    if len(series) <= lookback:
        raise exceptions.InsufficientHistory(
            f"Series of length {len(series)} does not exceed the feature lookback of {lookback}"
        )
    _check_regressors(series, config)

    y = pd.Series(series.values)
    past = y.shift(1)
    t = np.arange(len(series), dtype=np.float64)
    columns = {}

    for lag in config.lags:
        columns[config.lag_name(lag)] = y.shift(lag)
    if config.seasonal_lags is not None:
        count, m = config.seasonal_lags
        for j in range(1, count + 1):
            columns[config.seasonal_lag_name(j, m)] = y.shift(j * m)
    for window in config.rolling_windows:
        rolling = past.rolling(window, min_periods=window)
        for statistic in config.rolling_statistics:
            columns[config.rolling_name(statistic, window)] = rolling.agg(statistic)
    if config.expanding:
        expanding = past.expanding(min_periods=1)
        for statistic in config.expanding_statistics:
            columns[config.expanding_name(statistic)] = expanding.agg(statistic)
    for power in range(1, config.trend_degree + 1):
        columns[config.trend_name(power)] = t ** power

    frame = pd.DataFrame(columns, index=range(len(series)))

    if config.date_names or config.time_names or config.holidays is not None:
        index = pd.DatetimeIndex(list(series.timestamps))
        encoded = encode_index(index, config.date_features, config.time_features)
        for name in encoded.columns:
            frame[name] = encoded[name].to_numpy()
        if config.holidays is not None:
            frame[config.holidays.feature_name] = _calendar(config.holidays).indicate(index)

    for column in config.regressor_columns:
        frame[config.regressor_name(column)] = series.regressors[column][:len(series)]

    frame = frame.iloc[lookback:]
    names = config.feature_names()
    rows = frame[names].to_numpy(dtype=np.float64) if names else np.empty((len(frame), 0))

    if not np.all(np.isfinite(rows)):
        raise exceptions.NonFiniteFeature("Feature construction produced non finite values")

    log.debug("Built %s feature rows of %s features from %s", len(frame), len(names), series)
    return FeatureMatrix(names=names, rows=rows, row_index=frame.index.to_numpy())

def forecast_row(series: TimeSeries, config: FeatureConfig) -> np.ndarray:
    """ The feature vector x(T) for the step immediately after the series

    Produces the same values `build_features` would give row T of the series extended by one (any) value.

    Raises:
        InsufficientHistory: The series is shorter than the configured lookback
        MissingFutureRegressor: A configured regressor has no value for index T
    """
    T = len(series)
    if T < max(config.lookback, 1):
        raise exceptions.InsufficientHistory(
            f"Series of length {T} is shorter than the feature lookback of {config.lookback}"
        )
    _check_regressors(series, config)

    y = series.values
    row: List[float] = [y[T - lag] for lag in config.lags]
    if config.seasonal_lags is not None:
        count, m = config.seasonal_lags
        row.extend(y[T - j * m] for j in range(1, count + 1))
    for window in config.rolling_windows:
        rolling = pd.Series(y[T - window:])
        row.extend(rolling.agg(statistic) for statistic in config.rolling_statistics)
    if config.expanding:
        expanding = pd.Series(y)
        row.extend(expanding.agg(statistic) for statistic in config.expanding_statistics)
    row.extend(float(T) ** power for power in range(1, config.trend_degree + 1))

    if config.date_names or config.time_names or config.holidays is not None:
        index = pd.DatetimeIndex([series.next_timestamp()])
        encoded = encode_index(index, config.date_features, config.time_features)
        row.extend(encoded.iloc[0].tolist())
        if config.holidays is not None:
            row.append(_calendar(config.holidays).indicate(index)[0])

    for column in config.regressor_columns:
        values = series.regressors[column]
        if len(values) <= T:
            raise exceptions.MissingFutureRegressor(
                f"Regressor '{column}' has no value for time index {T} - supply future regressor values"
            )
        row.append(values[T])

    vector = np.array(row, dtype=np.float64)
    if not np.all(np.isfinite(vector)):
        raise exceptions.NonFiniteFeature("Feature construction produced non finite values")
    return vector

def extend_with_prediction(series: TimeSeries, predicted: float) -> TimeSeries:
    """ The series extended by a predicted value at the next timestamp

    Raises:
        NonFiniteValue: The prediction is not finite
    """
    return series.append(predicted)
