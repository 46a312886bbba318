class TsShapError(Exception):
    """ Base class of every error raised by tsshap """
    pass

# Series construction and ingestion

class SeriesError(TsShapError, ValueError):
    """ A time series failed validation """
    pass

class LengthMismatch(SeriesError):
    """ Timestamps, values or regressor columns do not have consistent lengths """
    pass

class NonMonotonicTimestamps(SeriesError):
    """ Timestamps are not strictly increasing """
    pass

class PeriodicityViolation(SeriesError):
    """ The gap between two timestamps is not the declared period """
    pass

class MissingValues(SeriesError):
    """ The series contains missing (NaN) observations """
    pass

class NonFiniteValue(SeriesError):
    """ A value appended to a series is not finite """
    pass

class InputUnreadable(TsShapError, OSError):
    """ The input file could not be read or parsed """
    pass

# History and horizons

class InsufficientHistory(TsShapError, ValueError):
    """ There is not enough history to satisfy the requested lookback or split """
    pass

class HorizonOutOfRange(TsShapError, ValueError):
    """ A horizon step is outside 1..H """
    pass

class EmptyInterval(TsShapError, ValueError):
    """ The requested horizon interval contains no steps """
    pass

# Forecasters

class ForecasterError(TsShapError):
    """ A forecaster could not fit or predict """
    pass

class EmptyHistory(ForecasterError, ValueError):
    """ The forecaster was given an empty history """
    pass

class SeasonTooLong(ForecasterError, ValueError):
    """ The season length exceeds the history length """
    pass

class OrderTooLong(ForecasterError, ValueError):
    """ The moving average (or trend-cycle) order exceeds the history length """
    pass

class AlphaOutOfRange(ForecasterError, ValueError):
    """ The smoothing parameter is not within (0, 1] """
    pass

class NotFitted(ForecasterError, RuntimeError):
    """ predict was called before fit """
    pass

class NonFiniteForecast(ForecasterError, ValueError):
    """ A forecaster produced a non finite value or the wrong number of values """
    pass

class UnknownForecaster(ForecasterError, LookupError):
    """ No forecaster is registered under the requested name """
    pass

# Backtesting

class SplitExhausted(TsShapError, ValueError):
    """ No expanding window split fits the series """
    pass

class AllReferenceZero(TsShapError, ValueError):
    """ Every reference value is zero so the percentage error is undefined """
    pass

# Features

class UnknownRegressor(TsShapError, LookupError):
    """ A configured regressor column is not present on the series """
    pass

class MissingFutureRegressor(UnknownRegressor):
    """ A regressor has no value at the time index being forecast """
    pass

class HolidayCalendarUnreadable(TsShapError, OSError):
    """ The holiday calendar file could not be read """
    pass

# Trees and SHAP

class EmptyTraining(TsShapError, ValueError):
    """ Training data has fewer than two rows or mismatched lengths """
    pass

class DimensionMismatch(TsShapError, ValueError):
    """ A feature vector does not have the ensemble's feature count """
    pass

class NonFiniteFeature(TsShapError, ValueError):
    """ A feature vector contains a non finite value """
    pass

class MissingCover(TsShapError, ValueError):
    """ A tree node does not carry a positive training cover """
    pass

class TooManyFeatures(TsShapError, ValueError):
    """ Exhaustive Shapley enumeration was requested for too many features """
    pass

# Explanations

class SurrogateUnderdetermined(TsShapError, ValueError):
    """ Too few backtested targets to train the surrogate """
    pass

class UnknownFeature(TsShapError, LookupError):
    """ The feature name is not in the surrogate's feature registry """
    pass

class DegenerateRange(TsShapError, ValueError):
    """ The feature is constant over the training rows so no grid can be spanned """
    pass

class LocalAccuracyViolation(TsShapError, AssertionError):
    """ base value plus attributions does not reproduce the surrogate prediction """
    pass

# Robustness

class EvenOrder(TsShapError, ValueError):
    """ The trend-cycle moving average order must be odd """
    pass

class BlockTooLong(TsShapError, ValueError):
    """ The bootstrap block length exceeds the residual length """
    pass

class ZeroVariance(TsShapError, ValueError):
    """ A correlation is undefined because one sequence is constant """
    pass

class AllZeroImportance(TsShapError, ValueError):
    """ Every importance is zero so the entropy is undefined """
    pass

# Command line

class ConfigInvalid(TsShapError, ValueError):
    """ The run configuration is malformed or references unknown names """
    pass

class EmptyData(TsShapError, ValueError):
    """ There is nothing to plot """
    pass

class UnknownDataset(TsShapError, LookupError):
    """ No public dataset is registered under the requested name """
    pass

class ChecksumMismatch(TsShapError, OSError):
    """ A downloaded dataset does not match its pinned checksum """
    pass
