import math
import dataclasses
from typing import List, Optional

from .timeseries import validate_horizon
from .. import exceptions

@dataclasses.dataclass(frozen=True)
class ExpandingWindowSplit:
    """ One expanding window partition - train on indices [0, train_end), test on [train_end, train_end + H) """
    train_end: int
    horizon: int

    @property
    def test_indices(self) -> range:
        return range(self.train_end, self.train_end + self.horizon)

@dataclasses.dataclass(frozen=True)
class SplitterConfig:
    """ Expanding window splitter settings

    Args:
        initial_train: Size of the first training window - defaults to max(2 x longest lag, ceil(T / 2))
        step: Advance of the training window between splits - defaults to the horizon (tiled test windows)
    """
    initial_train: Optional[int] = None
    step: Optional[int] = None

    def __post_init__(self):
        if self.initial_train is not None and self.initial_train < 1:
            raise ValueError(f"initial_train must be at least 1 - got {self.initial_train}")
        if self.step is not None and self.step < 1:
            raise ValueError(f"step must be at least 1 - got {self.step}")

    def resolve(self, length: int, horizon: int, max_lag: int = 0) -> List[ExpandingWindowSplit]:
        """ Produce the splits for a series of `length` points, filling in the defaults """
        initialTrain = self.initial_train
        if initialTrain is None:
            initialTrain = default_initial_train(length, max_lag)
        return expanding_window_splits(length, initialTrain, horizon, self.step)

def default_initial_train(length: int, max_lag: int = 0) -> int:
    return max(2 * max_lag, math.ceil(0.5 * length), 1)

def expanding_window_splits(
    length: int,
    initial_train: int,
    horizon: int,
    step: Optional[int] = None
    ) -> List[ExpandingWindowSplit]:
    """ Partition a series of `length` points into expanding train windows each followed by a test window

    Args:
        length: The series length T
        initial_train: The first training window size
        horizon: The test window length H
        step: The advance between successive train ends - defaults to H

    Returns:
        List[ExpandingWindowSplit]: Splits with strictly increasing train ends; a final split whose test window
            would run past the series is dropped

    Raises:
        InsufficientHistory: When initial_train + H > T
    """
    horizon = validate_horizon(horizon)
    step = horizon if step is None else step

    if initial_train < 1:
        raise ValueError(f"initial_train must be at least 1 - got {initial_train}")
    if step < 1:
        raise ValueError(f"step must be at least 1 - got {step}")
    if initial_train + horizon > length:
        raise exceptions.InsufficientHistory(
            f"Initial training window {initial_train} plus horizon {horizon} exceeds series length {length}"
        )

    return [
        ExpandingWindowSplit(trainEnd, horizon)
        for trainEnd in range(initial_train, length - horizon + 1, step)
    ]
