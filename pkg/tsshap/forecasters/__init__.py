from .baselines import (
    Naive,
    SeasonalNaive,
    MovingAverage,
    SimpleExponentialSmoothing,
    naive_predict,
    seasonal_naive_predict,
    moving_average_predict,
    ses_predict,
)
from .reduction import GbtReduction, gbt_reduction_forecaster, recursive_forecast, with_future_regressors
