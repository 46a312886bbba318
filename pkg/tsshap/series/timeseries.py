import datetime
import dataclasses
from typing import Dict, Iterable, List, Mapping, NamedTuple, Optional, Sequence, Tuple, Union

import numpy as np
import pandas as pd

from ..types import Periodicity, RegressorColumns
from .. import utils
from .. import exceptions

import logging
log = logging.getLogger(__name__)

Horizon = int

def validate_horizon(horizon: Horizon) -> int:
    """ Check that a horizon is a positive integer number of steps """
    if isinstance(horizon, bool) or int(horizon) != horizon or horizon < 1:
        raise exceptions.HorizonOutOfRange(f"Horizon must be a positive integer - got {horizon}")
    return int(horizon)

def _monthEnd(timestamps: Sequence[datetime.datetime], periodicity: Periodicity) -> bool:
    return periodicity is Periodicity.MONTHLY and utils.isMonthEndAnchored(timestamps)

def _frozen(values: Iterable[float]) -> np.ndarray:
    array = np.array(values, dtype=np.float64)
    array.setflags(write=False)
    return array

class TimePoint(NamedTuple):
    """ A discrete time index paired with its UTC timestamp """
    index: int
    timestamp: datetime.datetime

@dataclasses.dataclass(frozen=True, eq=False)
class TimeSeries:
    """ Timestamped univariate observations with optional named external regressor columns

    Regressor columns either cover the observed range (length T) or additionally carry `horizon` future values
    (length T + horizon). Instances are immutable - use `make_series` to build a validated series.

    Args:
        timestamps: UTC timestamps of the observed values
        values: The observations y(t)
        periodicity: The spacing of the timestamps
        regressors: Named regressor columns z_k(t)
        horizon: Number of future regressor values carried beyond the observed range
    """

    timestamps: Tuple[datetime.datetime, ...]
    values: np.ndarray
    periodicity: Periodicity
    regressors: Mapping[str, np.ndarray] = dataclasses.field(default_factory=dict)
    horizon: int = 0

    def __post_init__(self):
        if len(self.timestamps) != len(self.values):
            raise exceptions.LengthMismatch(
                f"{len(self.timestamps)} timestamps were given for {len(self.values)} values"
            )
        for name, column in self.regressors.items():
            if len(column) not in (len(self.values), len(self.values) + self.horizon):
                raise exceptions.LengthMismatch(
                    f"Regressor '{name}' has length {len(column)} - expected {len(self.values)}"
                    f" or {len(self.values) + self.horizon}"
                )

    def __len__(self) -> int:
        return len(self.values)

    def __repr__(self) -> str:
        start = self.timestamps[0].isoformat() if self.timestamps else None
        return (
            f"<tsshap.TimeSeries: {self.periodicity.value} T={len(self)} start({start})"
            f" regressors({list(self.regressors)})>"
        )

    @property
    def points(self) -> List[TimePoint]:
        return [TimePoint(index, timestamp) for index, timestamp in enumerate(self.timestamps)]

    def timestamp_at(self, index: int) -> datetime.datetime:
        """ Timestamp of a time index, stepping forward by the periodicity beyond the observed range """
        if index < len(self.timestamps):
            return self.timestamps[index]
        if not self.timestamps:
            raise exceptions.EmptyHistory("An empty series has no timestamps to step from")
        return utils.advance(self.timestamps[0], self.periodicity, index, _monthEnd(self.timestamps, self.periodicity))

    def next_timestamp(self) -> datetime.datetime:
        return self.timestamp_at(len(self))

    def head(self, n: int, future: int = 0) -> "TimeSeries":
        """ The first `n` observations (a training partition) keeping up to `future` regressor values beyond them """
        n = max(0, min(n, len(self)))
        available = min((len(column) - n for column in self.regressors.values()), default=0)
        available = max(0, min(future, available))

        return TimeSeries(
            timestamps=self.timestamps[:n],
            values=_frozen(self.values[:n]),
            periodicity=self.periodicity,
            regressors={name: _frozen(column[:n + available]) for name, column in self.regressors.items()},
            horizon=available,
        )

    def future_regressors(self, start: int, length: int) -> Dict[str, np.ndarray]:
        """ Regressor values for the time indices start..start+length (exclusive) where they are available """
        return {
            name: _frozen(column[start:start + length])
            for name, column in self.regressors.items()
            if len(column) >= start + length
        }

    def with_values(self, values: Sequence[float]) -> "TimeSeries":
        """ A copy of the series with replaced observations (same timestamps and regressors) """
        if len(values) != len(self):
            raise exceptions.LengthMismatch(f"Expected {len(self)} values - got {len(values)}")
        array = _frozen(values)
        if not np.all(np.isfinite(array)):
            raise exceptions.NonFiniteValue("Replacement values must be finite")
        return dataclasses.replace(self, values=array)

    def append(self, value: float) -> "TimeSeries":
        """ Extend the series by one observation at the next timestamp

        Regressor columns carrying a value for the new time index are kept; columns without future values are
        dropped as they can no longer cover the series.
        """
        if not np.isfinite(value):
            raise exceptions.NonFiniteValue(f"Cannot append non finite value {value}")

        size = len(self) + 1
        regressors = {}
        for name, column in self.regressors.items():
            if len(column) >= size:
                regressors[name] = column
            else:
                log.debug("Dropping regressor '%s' on extension - no value for index %s", name, size - 1)

        horizon = max(0, self.horizon - 1) if regressors else 0
        regressors = {name: column[:size + horizon] for name, column in regressors.items()}

        return TimeSeries(
            timestamps=self.timestamps + (self.next_timestamp(),),
            values=_frozen(np.append(self.values, float(value))),
            periodicity=self.periodicity,
            regressors=regressors,
            horizon=horizon,
        )

    def to_frame(self) -> pd.DataFrame:
        """ Observed range as a DataFrame with `timestamp`, `value` and regressor columns """
        frame = pd.DataFrame({
            "timestamp": [timestamp.isoformat() for timestamp in self.timestamps],
            "value": self.values,
        })
        for name, column in self.regressors.items():
            frame[name] = column[:len(self)]
        return frame

def make_series(
    timestamps: Sequence[utils.TimestampLike],
    values: Sequence[float],
    periodicity: Union[Periodicity, str],
    regressors: Optional[RegressorColumns] = None,
    horizon: int = 0,
    ) -> TimeSeries:
    """ Validate and construct a `TimeSeries`

    Args:
        timestamps: Strictly increasing timestamps, one per value
        values: Observations - must be finite
        periodicity: hourly, daily, weekly or monthly
        regressors: Named regressor columns of length T, or T + horizon when future values are supplied
        horizon: The number of future regressor values supplied

    Returns:
        TimeSeries: The validated series

    Raises:
        LengthMismatch: Inconsistent lengths
        NonMonotonicTimestamps: Timestamps not strictly increasing
        PeriodicityViolation: A gap between timestamps is not one period
        MissingValues: Values or regressors contain NaN
    """
    periodicity = Periodicity.convert(periodicity)
    if horizon < 0:
        raise exceptions.LengthMismatch(f"Declared horizon must be non-negative - got {horizon}")

    if len(timestamps) != len(values):
        raise exceptions.LengthMismatch(f"{len(timestamps)} timestamps were given for {len(values)} values")

    stamps = tuple(utils.timestampToDatetime(timestamp) for timestamp in timestamps)
    array = np.array(values, dtype=np.float64)

    if np.isnan(array).any():
        raise exceptions.MissingValues(f"Series contains {int(np.isnan(array).sum())} missing values")
    if not np.all(np.isfinite(array)):
        raise exceptions.NonFiniteValue("Series contains infinite values")

    for previous, current in zip(stamps, stamps[1:]):
        if current <= previous:
            raise exceptions.NonMonotonicTimestamps(f"Timestamp {current} does not follow {previous}")

    # Every timestamp is stepped from the first so that clipped month days do not drift
    monthEnd = _monthEnd(stamps, periodicity)
    for index, (previous, current) in enumerate(zip(stamps, stamps[1:]), start=1):
        if utils.advance(stamps[0], periodicity, index, monthEnd) != current:
            raise exceptions.PeriodicityViolation(
                f"Gap between {previous} and {current} is not one {periodicity.value} period"
            )

    columns = {}
    for name, column in (regressors or {}).items():
        columnArray = np.array(column, dtype=np.float64)
        if len(columnArray) not in (len(array), len(array) + horizon):
            raise exceptions.LengthMismatch(
                f"Regressor '{name}' has length {len(columnArray)} - expected {len(array)}"
                f" or {len(array) + horizon}"
            )
        if np.isnan(columnArray).any():
            raise exceptions.MissingValues(f"Regressor '{name}' contains missing values")
        columns[name] = _frozen(columnArray)

    effectiveHorizon = horizon if any(len(column) > len(array) for column in columns.values()) else 0

    return TimeSeries(
        timestamps=stamps,
        values=_frozen(array),
        periodicity=periodicity,
        regressors=columns,
        horizon=effectiveHorizon,
    )
