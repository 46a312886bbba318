import dataclasses
import os
from typing import Any, Dict, Mapping, Optional, Tuple

from .calendar import DATE_FEATURES, TIME_FEATURES, FeatureSelection, HolidayCalendar, select

STATISTICS = ("mean", "max", "min")

@dataclasses.dataclass(frozen=True)
class HolidayConfig:
    """ Holiday calendar file (one ISO date per line) and the days either side also flagged """
    path: str
    buffer: int = 0
    name: Optional[str] = None

    def __post_init__(self):
        if self.buffer < 0:
            raise ValueError(f"Holiday buffer must be non-negative - got {self.buffer}")

    def load(self) -> HolidayCalendar:
        return HolidayCalendar.read(self.path, buffer=self.buffer, name=self.name)

    @property
    def feature_name(self) -> str:
        name = self.name or os.path.splitext(os.path.basename(self.path))[0]
        return f"holiday-{name}"

@dataclasses.dataclass(frozen=True)
class FeatureConfig:
    """ Which interpretable features to build for the surrogate

    Args:
        target_name: Name of the target used in feature names e.g. `sales(t-3)`
        lags: Lag features y(t - l)
        seasonal_lags: (count, m) - seasonal lag features y(t - j * m) for j = 1..count
        rolling_windows: Rolling window sizes w - statistics over y(t-w)..y(t-1)
        rolling_statistics: Statistics computed for every rolling window
        expanding: Whether to build expanding window statistics over y(0)..y(t-1)
        expanding_statistics: Statistics computed over the expanding window
        trend_degree: Polynomial trend features t, t2 .. t^degree
        date_features: True for every date feature, or a selection of names
        time_features: True for every time feature, or a selection of names
        holidays: Optional holiday calendar
        regressor_columns: Regressor columns passed through as `<name>(t)`
    """

    target_name: str = "value"
    lags: Tuple[int, ...] = (1, 2, 3)
    seasonal_lags: Optional[Tuple[int, int]] = None
    rolling_windows: Tuple[int, ...] = ()
    rolling_statistics: Tuple[str, ...] = STATISTICS
    expanding: bool = False
    expanding_statistics: Tuple[str, ...] = STATISTICS
    trend_degree: int = 0
    date_features: FeatureSelection = False
    time_features: FeatureSelection = False
    holidays: Optional[HolidayConfig] = None
    regressor_columns: Tuple[str, ...] = ()

    def __post_init__(self):
        # Normalise sequences so configs hash and compare by value
        for field in ("lags", "rolling_windows", "rolling_statistics", "expanding_statistics", "regressor_columns"):
            object.__setattr__(self, field, tuple(getattr(self, field)))
        for field in ("date_features", "time_features"):
            value = getattr(self, field)
            if not isinstance(value, bool):
                object.__setattr__(self, field, tuple(value))
        if self.seasonal_lags is not None:
            object.__setattr__(self, "seasonal_lags", tuple(self.seasonal_lags))
        if isinstance(self.holidays, Mapping):
            object.__setattr__(self, "holidays", HolidayConfig(**self.holidays))

        if any(lag < 1 for lag in self.lags):
            raise ValueError(f"Lags must be positive - got {self.lags}")
        if self.seasonal_lags is not None:
            if len(self.seasonal_lags) != 2 or min(self.seasonal_lags) < 1:
                raise ValueError(f"Seasonal lags must be a positive (count, m) pair - got {self.seasonal_lags}")
        if any(window < 1 for window in self.rolling_windows):
            raise ValueError(f"Rolling windows must be positive - got {self.rolling_windows}")
        for statistics in (self.rolling_statistics, self.expanding_statistics):
            unknown = set(statistics).difference(STATISTICS)
            if unknown:
                raise ValueError(f"Unknown statistics {sorted(unknown)} - expected a subset of {STATISTICS}")
        if self.trend_degree < 0:
            raise ValueError(f"Trend degree must be non-negative - got {self.trend_degree}")
        select(self.date_features, DATE_FEATURES)
        select(self.time_features, TIME_FEATURES)

        names = self.feature_names()
        duplicates = sorted({name for name in names if names.count(name) > 1})
        if duplicates:
            raise ValueError(f"Feature names must be unique - duplicated {duplicates}")

    @classmethod
    def from_dict(cls, config: Mapping[str, Any]) -> "FeatureConfig":
        return cls(**dict(config))

    def to_dict(self) -> Dict[str, Any]:
        return dataclasses.asdict(self)

    @property
    def lookback(self) -> int:
        """ The number of observations needed before the first feature row """
        lookbacks = [0, *self.lags, *self.rolling_windows]
        if self.seasonal_lags is not None:
            count, m = self.seasonal_lags
            lookbacks.append(count * m)
        if self.expanding:
            lookbacks.append(1)
        return max(lookbacks)

    @property
    def max_lag(self) -> int:
        """ The longest requested lag - used for the default initial training window """
        lags = [0, *self.lags]
        if self.seasonal_lags is not None:
            lags.append(self.seasonal_lags[0] * self.seasonal_lags[1])
        return max(lags)

    @property
    def date_names(self) -> Tuple[str, ...]:
        return select(self.date_features, DATE_FEATURES)

    @property
    def time_names(self) -> Tuple[str, ...]:
        return select(self.time_features, TIME_FEATURES)

    def lag_name(self, lag: int) -> str:
        return f"{self.target_name}(t-{lag})"

    def seasonal_lag_name(self, j: int, m: int) -> str:
        return f"{self.target_name}(t-{j}*{m})"

    def rolling_name(self, statistic: str, window: int) -> str:
        return f"{self.target_name}-{statistic}(t-1,t-{window})"

    def expanding_name(self, statistic: str) -> str:
        return f"{self.target_name}-{statistic}(0,t-1)"

    @staticmethod
    def trend_name(power: int) -> str:
        return "t" if power == 1 else f"t{power}"

    @staticmethod
    def regressor_name(column: str) -> str:
        return f"{column}(t)"

    def feature_names(self) -> list:
        """ The ordered feature names this configuration produces """
        names = [self.lag_name(lag) for lag in self.lags]
        if self.seasonal_lags is not None:
            count, m = self.seasonal_lags
            names.extend(self.seasonal_lag_name(j, m) for j in range(1, count + 1))
        for window in self.rolling_windows:
            names.extend(self.rolling_name(statistic, window) for statistic in self.rolling_statistics)
        if self.expanding:
            names.extend(self.expanding_name(statistic) for statistic in self.expanding_statistics)
        names.extend(self.trend_name(power) for power in range(1, self.trend_degree + 1))
        names.extend(self.date_names)
        names.extend(self.time_names)
        if self.holidays is not None:
            names.append(self.holidays.feature_name)
        names.extend(self.regressor_name(column) for column in self.regressor_columns)
        return names

    def categorical_names(self) -> set:
        """ Ordinal encoded calendar features - dependence curves use their distinct values as the grid """
        names = set(self.date_names) | set(self.time_names)
        if self.holidays is not None:
            names.add(self.holidays.feature_name)
        return names
