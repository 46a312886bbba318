""" Calendar utilities shared by series construction, feature encoding and ingestion """

import datetime
from typing import Optional, Sequence, Union

import pandas as pd

from .types import Periodicity

TimestampLike = Union[datetime.datetime, datetime.date, pd.Timestamp, str, float, int]

_FIXED_PERIODS = {
    Periodicity.HOURLY: datetime.timedelta(hours=1),
    Periodicity.DAILY: datetime.timedelta(days=1),
    Periodicity.WEEKLY: datetime.timedelta(days=7),
}

def timestampToDatetime(timestamp: TimestampLike) -> datetime.datetime:
    """ Normalise a timestamp like value to a UTC datetime at second resolution

    Naive datetimes are interpreted as UTC, aware datetimes are converted to UTC, numbers are POSIX seconds and
    strings are parsed as ISO-8601.
    """
    if isinstance(timestamp, (int, float)) and not isinstance(timestamp, bool):
        value = datetime.datetime.fromtimestamp(float(timestamp), tz=datetime.timezone.utc)

    else:
        value = pd.Timestamp(timestamp).to_pydatetime()
        if value.tzinfo is None:
            value = value.replace(tzinfo=datetime.timezone.utc)
        else:
            value = value.astimezone(datetime.timezone.utc)

    return value.replace(microsecond=0)

def isMonthEnd(timestamp: TimestampLike) -> bool:
    return bool(pd.Timestamp(timestamp).is_month_end)

def isMonthEndAnchored(timestamps: Sequence[TimestampLike]) -> bool:
    """ Whether monthly timestamps follow the month end - true only when every timestamp is the last of its month """
    return bool(timestamps) and all(isMonthEnd(timestamp) for timestamp in timestamps)

def monthOffset(months: int, monthEnd: bool = False) -> pd.DateOffset:
    """ The offset of a number of months - `MonthEnd` keeps month end anchored timestamps on the month end while
    `DateOffset` keeps the day of the month, clipped to the length of the target month """
    return pd.offsets.MonthEnd(months) if monthEnd else pd.DateOffset(months=months)

def addMonths(timestamp: TimestampLike, months: int, monthEnd: Optional[bool] = None) -> datetime.datetime:
    """ Step a timestamp by whole months

    Args:
        timestamp: The anchor of the stepping
        months: The number of months to step
        monthEnd: Anchor to the month end - defaults to whether the timestamp is a month end
    """
    if monthEnd is None:
        monthEnd = isMonthEnd(timestamp)
    return (pd.Timestamp(timestamp) + monthOffset(months, monthEnd)).to_pydatetime()

def advance(
    anchor: datetime.datetime,
    periodicity: Periodicity,
    steps: int = 1,
    monthEnd: Optional[bool] = None
    ) -> datetime.datetime:
    """ The timestamp a number of periods after the anchor

    Monthly steps are taken from the anchor in one offset (`anchor + steps months`) so that days clipped in short
    months are restored in the following ones.
    """
    if periodicity is Periodicity.MONTHLY:
        return addMonths(anchor, steps, monthEnd)
    return anchor + steps * _FIXED_PERIODS[periodicity]

def inferPeriodicity(first: datetime.datetime, second: datetime.datetime) -> Optional[Periodicity]:
    """ Guess the periodicity of a series from the delta between two consecutive timestamps """
    for periodicity in Periodicity:
        if periodicity is Periodicity.MONTHLY:
            if any(advance(first, periodicity, monthEnd=monthEnd) == second for monthEnd in (False, True)):
                return periodicity
        elif advance(first, periodicity) == second:
            return periodicity
    return None
