""" CSV ingestion - first column `timestamp` (ISO-8601), second column `value`, remaining columns regressors """

from typing import Optional, Union

import numpy as np
import pandas as pd

from ..types import Periodicity, StrOrPathLike
from .timeseries import TimeSeries, make_series
from .. import utils
from .. import exceptions

import logging
log = logging.getLogger(__name__)

def read_csv(
    path: StrOrPathLike,
    periodicity: Optional[Union[Periodicity, str]] = None,
    impute: bool = False,
    ) -> TimeSeries:
    """ Read a series from a UTF-8 CSV file with a mandatory header row

    Trailing rows with an empty value but populated regressor columns are future regressor values and set the
    declared horizon of the series.

    Args:
        path: The CSV file
        periodicity: The series periodicity - inferred from the first two timestamps when not given
        impute: Forward fill interior missing values rather than rejecting them

    Raises:
        InputUnreadable: The file is missing, unparsable or does not have the expected columns
        MissingValues: Missing values present and imputation not enabled
    """
    try:
        frame = pd.read_csv(path, encoding="utf-8")
    except (OSError, UnicodeDecodeError, pd.errors.ParserError, pd.errors.EmptyDataError) as e:
        raise exceptions.InputUnreadable(f"Could not read '{path}': {e}") from e

    if len(frame.columns) < 2 or list(frame.columns[:2]) != ["timestamp", "value"]:
        raise exceptions.InputUnreadable(
            f"'{path}' must start with the columns 'timestamp' and 'value' - found {list(frame.columns)}"
        )

    try:
        timestamps = [utils.timestampToDatetime(stamp) for stamp in frame["timestamp"]]
        values = pd.to_numeric(frame["value"]).to_numpy(dtype=np.float64)
        regressors = {
            str(name): pd.to_numeric(frame[name]).to_numpy(dtype=np.float64)
            for name in frame.columns[2:]
        }
    except (ValueError, TypeError) as e:
        raise exceptions.InputUnreadable(f"Could not parse '{path}': {e}") from e

    # Trailing rows without an observation carry future regressor values
    horizon = 0
    if regressors:
        while horizon < len(values) and np.isnan(values[len(values) - 1 - horizon]):
            horizon += 1
        if horizon:
            log.debug("'%s' carries %s future regressor rows", path, horizon)

    observed = len(values) - horizon
    values = values[:observed]
    observedStamps = timestamps[:observed]

    missing = np.isnan(values)
    if missing.any():
        if not impute:
            raise exceptions.MissingValues(
                f"'{path}' has {int(missing.sum())} missing values - enable imputation to forward fill them"
            )
        if missing[0]:
            raise exceptions.MissingValues(f"'{path}' starts with a missing value which cannot be forward filled")
        log.warning("Forward filling %s missing values in '%s'", int(missing.sum()), path)
        values = pd.Series(values).ffill().to_numpy()

    if periodicity is None:
        if len(observedStamps) < 2:
            raise exceptions.InputUnreadable(f"Cannot infer the periodicity of '{path}' from fewer than two rows")
        periodicity = utils.inferPeriodicity(observedStamps[0], observedStamps[1])
        if periodicity is None:
            raise exceptions.PeriodicityViolation(
                f"Cannot infer a periodicity from {observedStamps[0]} -> {observedStamps[1]}"
            )
        log.debug("Inferred %s periodicity for '%s'", periodicity.value, path)

    return make_series(observedStamps, values, periodicity, regressors, horizon=horizon)
