import os
import datetime

import numpy as np

import tsshap
import tsshap.utils

ETC_DIR = os.path.join(os.path.dirname(os.path.dirname(__file__)), 'etc')

START = datetime.datetime(2020, 1, 1, tzinfo=datetime.timezone.utc)

def daily(values, start: datetime.datetime = START, regressors=None, horizon: int = 0) -> tsshap.TimeSeries:
    """ A daily series of the values """
    timestamps = [start + datetime.timedelta(days=i) for i in range(len(values))]
    return tsshap.make_series(timestamps, values, 'daily', regressors, horizon=horizon)

def monthly(values, start: datetime.datetime = START) -> tsshap.TimeSeries:
    """ A month start series of the values """
    timestamps = [tsshap.utils.addMonths(start, i) for i in range(len(values))]
    return tsshap.make_series(timestamps, values, 'monthly')

def seasonal(length: int = 240, period: int = 12, noise: float = 0.5, seed: int = 0) -> np.ndarray:
    """ A sinusoid of the period with a slight trend and gaussian noise """
    rng = np.random.default_rng(seed)
    t = np.arange(length)
    return 10 + 3 * np.sin(2 * np.pi * t / period) + 0.01 * t + rng.normal(0, noise, length)

def write_csv(path: str, series: tsshap.TimeSeries):
    series.to_frame().to_csv(path, index=False)
