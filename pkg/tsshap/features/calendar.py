""" Date, time and holiday encodings - every categorical is an ordinal number so trees split it natively """

import datetime
import os
from typing import Dict, Iterable, Optional, Sequence, Tuple, Union

import numpy as np
import pandas as pd

from ..types import StrOrPathLike
from .. import utils
from .. import exceptions

DATE_FEATURES = (
    "month",
    "day-of-year",
    "day-of-month",
    "week-of-year",
    "week-of-month",
    "day-of-week",
    "is-weekend",
    "quarter",
    "season",
    "fashion-season",
    "is-month-start",
    "is-month-end",
    "is-quarter-start",
    "is-quarter-end",
    "is-year-start",
    "is-year-end",
    "is-leap-year",
    "year",
)

TIME_FEATURES = ("hour", "minute", "second")

# Meteorological seasons (Northern Hemisphere)
WINTER, SPRING, SUMMER, FALL = range(4)
SPRING_SUMMER, FALL_WINTER = range(2)

FeatureSelection = Union[bool, Sequence[str]]

def select(selection: FeatureSelection, available: Tuple[str, ...]) -> Tuple[str, ...]:
    """ Resolve a boolean or explicit selection of calendar features into an ordered tuple of names """
    if selection is True:
        return available
    if not selection:
        return ()
    unknown = set(selection).difference(available)
    if unknown:
        raise ValueError(f"Unknown calendar features {sorted(unknown)} - expected a subset of {list(available)}")
    return tuple(name for name in available if name in selection)

def encode_index(index: pd.DatetimeIndex, date_features: FeatureSelection = True, time_features: FeatureSelection = True) -> pd.DataFrame:
    """ Encode every timestamp of a DatetimeIndex as ordinal calendar features """
    months = index.month.to_numpy()
    days = index.day.to_numpy()

    encoders = {
        "month": lambda: months,
        "day-of-year": lambda: index.dayofyear.to_numpy(),
        "day-of-month": lambda: days,
        "week-of-year": lambda: index.isocalendar().week.to_numpy(dtype=np.int64),
        "week-of-month": lambda: np.ceil(days / 7),
        "day-of-week": lambda: index.dayofweek.to_numpy(),
        "is-weekend": lambda: index.dayofweek.to_numpy() >= 5,
        "quarter": lambda: index.quarter.to_numpy(),
        "season": lambda: (months % 12) // 3,
        "fashion-season": lambda: np.where(months <= 6, SPRING_SUMMER, FALL_WINTER),
        "is-month-start": lambda: index.is_month_start,
        "is-month-end": lambda: index.is_month_end,
        "is-quarter-start": lambda: index.is_quarter_start,
        "is-quarter-end": lambda: index.is_quarter_end,
        "is-year-start": lambda: index.is_year_start,
        "is-year-end": lambda: index.is_year_end,
        "is-leap-year": lambda: index.is_leap_year,
        "year": lambda: index.year.to_numpy(),
        "hour": lambda: index.hour.to_numpy(),
        "minute": lambda: index.minute.to_numpy(),
        "second": lambda: index.second.to_numpy(),
    }

    names = select(date_features, DATE_FEATURES) + select(time_features, TIME_FEATURES)
    return pd.DataFrame(
        {name: np.asarray(encoders[name](), dtype=np.float64) for name in names},
        index=index,
    )

def encode_timestamp(timestamp: utils.TimestampLike, date_features: FeatureSelection = True, time_features: FeatureSelection = True) -> Dict[str, float]:
    """ Encode a single timestamp as named ordinal calendar features

    month 1-12, day-of-year 1-366, day-of-month 1-31, ISO week-of-year 1-53, week-of-month ceil(day / 7),
    day-of-week 0 (Monday) - 6 (Sunday), quarter 1-4, season 0-3 (Winter, Spring, Summer, Fall),
    fashion-season 0 (January - June) or 1 (July - December), booleans as 0/1, and hour/minute/second.
    """
    index = pd.DatetimeIndex([utils.timestampToDatetime(timestamp)])
    row = encode_index(index, date_features, time_features).iloc[0]
    return {name: float(value) for name, value in row.items()}

class HolidayCalendar:
    """ A user supplied list of holiday dates with a +/- buffer window

    Args:
        dates: The holiday dates
        buffer: Days either side of a holiday also flagged
        name: Suffix of the feature name `holiday-<name>`
    """

    def __init__(self, dates: Iterable[datetime.date], buffer: int = 0, name: str = "calendar"):
        if buffer < 0:
            raise ValueError(f"Holiday buffer must be non-negative - got {buffer}")
        self.dates = np.array(sorted(set(dates)), dtype="datetime64[D]")
        self.buffer = buffer
        self.name = name

    @property
    def feature_name(self) -> str:
        return f"holiday-{self.name}"

    @classmethod
    def read(cls, path: StrOrPathLike, buffer: int = 0, name: Optional[str] = None) -> "HolidayCalendar":
        """ Read a calendar file of one ISO date per line (blank lines and # comments ignored) """
        try:
            with open(path, "r", encoding="utf-8") as handle:
                lines = [line.split("#", 1)[0].strip() for line in handle]
            dates = [datetime.date.fromisoformat(line) for line in lines if line]
        except (OSError, UnicodeDecodeError, ValueError) as e:
            raise exceptions.HolidayCalendarUnreadable(f"Could not read holiday calendar '{path}': {e}") from e

        if name is None:
            name = os.path.splitext(os.path.basename(os.fspath(path)))[0]
        return cls(dates, buffer=buffer, name=name)

    def indicate(self, index: pd.DatetimeIndex) -> np.ndarray:
        """ 1.0 where a timestamp falls within the buffer of a holiday else 0.0 """
        if not len(self.dates):
            return np.zeros(len(index))
        if index.tz is not None:
            index = index.tz_convert(None)
        days = index.normalize().to_numpy().astype("datetime64[D]")
        positions = np.searchsorted(self.dates, days)
        distance = np.full(len(days), np.iinfo(np.int64).max)
        for candidate in (positions - 1, positions):
            valid = (candidate >= 0) & (candidate < len(self.dates))
            gap = np.abs((self.dates[np.clip(candidate, 0, len(self.dates) - 1)] - days).astype(np.int64))
            distance = np.where(valid, np.minimum(distance, gap), distance)
        return (distance <= self.buffer).astype(np.float64)
