from .timeseries import TimeSeries, TimePoint, Horizon, make_series, validate_horizon
from .splits import ExpandingWindowSplit, SplitterConfig, expanding_window_splits, default_initial_train
from .ingestion import read_csv
