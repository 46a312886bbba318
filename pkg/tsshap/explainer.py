""" The surrogate explainer - backtest a forecaster, train a tree ensemble to mimic its one-step forecasts and
attribute the surrogate's recursive forecasts to the interpretable features """

import dataclasses
from typing import Any, Dict, List, Optional, Sequence, Tuple, Union

import numpy as np

from .backtest import BacktestResult, FidelityReport, fidelity_metrics, run_backtest
from .callbacks import AbstractCallback, DefaultCallback
from .features import FeatureConfig, FeatureMatrix, build_features
from .forecaster import Forecaster, ForecastPath
from .forecasters.reduction import recursive_forecast
from .series import SplitterConfig, TimeSeries, validate_horizon
from .surrogate import GbtParams, ShapVector, TreeEnsemble, check_local_accuracy, gbt_fit, shap_values
from .types import Scope
from .worker_config import WorkerPoolConfig
from . import exceptions

import logging
log = logging.getLogger(__name__)

MINIMUM_TRAINING_ROWS = 10
DEFAULT_GRID_SIZE = 20

Interval = Tuple[int, int]

@dataclasses.dataclass(frozen=True, eq=False)
class SurrogateModel:
    """ A tree ensemble trained to mimic a forecaster's one-step backtested forecasts

    Args:
        ensemble: The fitted surrogate g
        feature_config: The features g reads
        features: The training feature rows x(t)
        targets: The step-1 backtested forecasts the rows were trained on
        horizon: The horizon H the forecaster was backtested with
        backtest: The forecaster's backtest
    """
    ensemble: TreeEnsemble
    feature_config: FeatureConfig
    features: FeatureMatrix
    targets: np.ndarray
    horizon: int
    backtest: BacktestResult

    def __repr__(self) -> str:
        return f"<tsshap.SurrogateModel: {len(self.features)} rows H={self.horizon} coverage({self.training_coverage})>"

    @property
    def feature_names(self) -> Tuple[str, ...]:
        return self.features.names

    @property
    def training_coverage(self) -> range:
        """ The time indices of the backtested targets the surrogate was trained on """
        if not len(self.features):
            return range(0)
        return range(int(self.features.row_index[0]), int(self.features.row_index[-1]) + 1)

@dataclasses.dataclass(frozen=True)
class Explanation:
    """ Feature attributions of the surrogate at one scope

    Local explanations hold the SHAP values of one horizon step. Semi-local explanations hold the signed mean of
    the per-step SHAP values over an interval of steps. Global explanations hold the mean absolute SHAP value over
    every training row.

    Args:
        scope: local, semi_local or global
        feature_names: The features the values belong to
        values: One attribution per feature
        base_value: The surrogate expectation the attributions are measured from
        prediction: The explained surrogate output (the mean output for semi-local explanations)
        step: The horizon step of a local explanation
        interval: The (first, last) horizon steps of a semi-local explanation
        coverage: The time indices of the rows a global explanation averages
    """
    scope: Scope
    feature_names: Tuple[str, ...]
    values: np.ndarray
    base_value: float
    prediction: Optional[float] = None
    step: Optional[int] = None
    interval: Optional[Interval] = None
    coverage: Optional[range] = None

    def __post_init__(self):
        values = np.array(self.values, dtype=np.float64)
        values.setflags(write=False)
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "feature_names", tuple(self.feature_names))
        if not np.all(np.isfinite(values)):
            raise exceptions.NonFiniteFeature("Explanation attributions must be finite")

    @property
    def shap(self) -> ShapVector:
        return ShapVector(self.values, self.base_value)

    def importance(self, feature: str) -> float:
        try:
            return float(self.values[self.feature_names.index(feature)])
        except ValueError:
            raise exceptions.UnknownFeature(f"No feature called '{feature}'") from None

    def ranked(self) -> List[Tuple[str, float]]:
        """ (feature, value) pairs by decreasing absolute value - ties keep feature order """
        order = sorted(range(len(self.values)), key=lambda index: -abs(self.values[index]))
        return [(self.feature_names[index], float(self.values[index])) for index in order]

    def to_dict(self) -> Dict[str, Any]:
        document: Dict[str, Any] = {
            "scope": self.scope.value,
            "base_value": self.base_value,
            "features": list(self.feature_names),
            "values": self.values.tolist(),
        }
        if self.prediction is not None:
            document["prediction"] = self.prediction
        if self.step is not None:
            document["step"] = self.step
        if self.interval is not None:
            document["interval"] = list(self.interval)
        if self.coverage is not None:
            document["coverage"] = [self.coverage.start, self.coverage.stop]
        return document

@dataclasses.dataclass(frozen=True)
class CurveSet:
    """ Partial dependence (surrogate output) and SHAP dependence (the feature's attribution) over a grid of the
    feature's values """
    feature: str
    grid: np.ndarray
    pdp: np.ndarray
    sdp: np.ndarray
    scope: Scope
    step: Optional[int] = None
    interval: Optional[Interval] = None

    def __post_init__(self):
        for field in ("grid", "pdp", "sdp"):
            array = np.array(getattr(self, field), dtype=np.float64)
            array.setflags(write=False)
            object.__setattr__(self, field, array)
        if not (len(self.grid) == len(self.pdp) == len(self.sdp)):
            raise exceptions.LengthMismatch("Dependence curves must have one value per grid point")
        if np.any(np.diff(self.grid) <= 0):
            raise ValueError("Dependence grids must be strictly increasing")

    def to_dict(self) -> Dict[str, Any]:
        document: Dict[str, Any] = {
            "feature": self.feature,
            "scope": self.scope.value,
            "grid": self.grid.tolist(),
            "pdp": self.pdp.tolist(),
            "sdp": self.sdp.tolist(),
        }
        if self.step is not None:
            document["step"] = self.step
        if self.interval is not None:
            document["interval"] = list(self.interval)
        return document

def fit_explainer(
    series: TimeSeries,
    forecaster: Forecaster,
    horizon: int,
    feature_config: Optional[FeatureConfig] = None,
    gbt_params: Optional[GbtParams] = None,
    splitter_config: Optional[SplitterConfig] = None,
    workers: Optional[WorkerPoolConfig] = None,
    callback: AbstractCallback = DefaultCallback(),
    ) -> SurrogateModel:
    """ Train the surrogate of a forecaster

    The forecaster is backtested over expanding windows (advancing one step at a time unless configured otherwise),
    and the ensemble is trained on x(t) -> f(t | t - 1), the step-1 backtested forecast at every covered index.
    Row x(t) only reads observations before t.

    Args:
        series: The observed series
        forecaster: The black-box forecaster to explain
        horizon: The forecast horizon H
        feature_config: The interpretable features
        gbt_params: The surrogate's boosting hyperparameters
        splitter_config: The backtest splitter settings - the step defaults to 1
        workers: The pool backtest splits are evaluated on
        callback: Progress callback

    Returns:
        SurrogateModel: The trained surrogate

    Raises:
        SurrogateUnderdetermined: Fewer than ten backtested targets have feature rows
    """
    horizon = validate_horizon(horizon)
    feature_config = feature_config or FeatureConfig()
    splitter_config = splitter_config or SplitterConfig()
    if splitter_config.step is None:
        splitter_config = dataclasses.replace(splitter_config, step=1)

    backtest = run_backtest(
        series,
        forecaster,
        horizon,
        splitter_config,
        max_lag=feature_config.max_lag,
        workers=workers,
        callback=callback,
    )
    targets = backtest.per_step_series[0]

    features = build_features(series, feature_config)
    covered = np.isfinite(targets[features.row_index])
    if covered.sum() < MINIMUM_TRAINING_ROWS:
        raise exceptions.SurrogateUnderdetermined(
            f"Only {int(covered.sum())} backtested targets have feature rows - at least {MINIMUM_TRAINING_ROWS}"
            " are required to train the surrogate"
        )

    training = FeatureMatrix(
        names=features.names,
        rows=features.rows[covered],
        row_index=features.row_index[covered],
    )
    trainingTargets = targets[training.row_index]
    trainingTargets.setflags(write=False)

    ensemble = gbt_fit(training, trainingTargets, gbt_params, callback=callback)
    log.debug("Trained surrogate on %s backtested targets", len(training))

    return SurrogateModel(
        ensemble=ensemble,
        feature_config=feature_config,
        features=training,
        targets=trainingTargets,
        horizon=horizon,
        backtest=backtest,
    )

def _forecast(model: SurrogateModel, series: TimeSeries, horizon: Optional[int] = None) -> Tuple[np.ndarray, np.ndarray]:
    return recursive_forecast(model.ensemble, model.feature_config, series, horizon or model.horizon)

def surrogate_forecast(model: SurrogateModel, series: TimeSeries, horizon: Optional[int] = None) -> ForecastPath:
    """ The surrogate's recursive forecast g(T+h|T), h = 1..H, beyond the end of the series

    Args:
        model: The surrogate
        series: The observed series to forecast from
        horizon: The number of steps - defaults to the horizon the surrogate was backtested with
    """
    predictions, _ = _forecast(model, series, horizon)
    return ForecastPath(origin=len(series), values=predictions)

def _check_steps(model: SurrogateModel, first: int, last: int):
    for step in (first, last):
        if not 1 <= step <= model.horizon:
            raise exceptions.HorizonOutOfRange(f"Step {step} is outside 1..{model.horizon}")

def step_attributions(model: SurrogateModel, series: TimeSeries, last: int) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """ The predictions, feature rows and SHAP values of steps 1..last, each checked for local accuracy """
    predictions, rows = _forecast(model, series, last)
    phi = shap_values(model.ensemble, rows)
    base = model.ensemble.expected_value()
    for prediction, attributions in zip(predictions, phi):
        check_local_accuracy(ShapVector(attributions, base), prediction)
    return predictions, rows, phi

def explain_local(model: SurrogateModel, series: TimeSeries, step: int) -> Explanation:
    """ The SHAP values of the feature row that produced horizon step `step` of the surrogate forecast

    Raises:
        HorizonOutOfRange: The step is outside 1..H
        LocalAccuracyViolation: The attributions do not reproduce the surrogate prediction
    """
    _check_steps(model, step, step)
    predictions, _, phi = step_attributions(model, series, step)
    return Explanation(
        scope=Scope.LOCAL,
        feature_names=model.feature_names,
        values=phi[step - 1],
        base_value=model.ensemble.expected_value(),
        prediction=float(predictions[step - 1]),
        step=step,
    )

def explain_semi_local(model: SurrogateModel, series: TimeSeries, interval: Interval) -> Explanation:
    """ The signed mean of the per-step SHAP values over the horizon steps first..last

    Raises:
        EmptyInterval: The interval is reversed or outside 1..H
    """
    first, last = interval
    if first > last:
        raise exceptions.EmptyInterval(f"The interval {first}..{last} contains no steps")
    try:
        _check_steps(model, first, last)
    except exceptions.HorizonOutOfRange as e:
        raise exceptions.EmptyInterval(str(e)) from e

    predictions, _, phi = step_attributions(model, series, last)
    window = slice(first - 1, last)
    return Explanation(
        scope=Scope.SEMI_LOCAL,
        feature_names=model.feature_names,
        values=phi[window].mean(axis=0),
        base_value=model.ensemble.expected_value(),
        prediction=float(predictions[window].mean()),
        interval=(first, last),
    )

def explain_global(model: SurrogateModel, series: Optional[TimeSeries] = None) -> Explanation:
    """ The mean absolute SHAP value of every feature over the surrogate's training rows

    Raises:
        LocalAccuracyViolation: The attributions of a training row do not reproduce its prediction
    """
    rows = model.features.rows
    phi = shap_values(model.ensemble, rows)
    base = model.ensemble.expected_value()

    predictions = model.ensemble.predict_matrix(rows)
    errors = np.abs(base + phi.sum(axis=1) - predictions)
    if np.any(errors > 1e-6 * np.maximum(1.0, np.abs(predictions))):
        raise exceptions.LocalAccuracyViolation(
            f"Training row attributions miss their predictions by up to {float(errors.max())}"
        )

    return Explanation(
        scope=Scope.GLOBAL,
        feature_names=model.feature_names,
        values=np.abs(phi).mean(axis=0),
        base_value=base,
        coverage=model.training_coverage,
    )

@dataclasses.dataclass(frozen=True)
class ExplanationRequest:
    """ A request for one explanation

    Args:
        scope: local, semi_local or global
        step: The horizon step of a local explanation
        interval: The (first, last) steps of a semi-local explanation - defaults to the whole horizon
    """
    scope: Union[Scope, str] = Scope.GLOBAL
    step: int = 1
    interval: Optional[Interval] = None

    def __post_init__(self):
        object.__setattr__(self, "scope", Scope.convert(self.scope))
        if self.interval is not None:
            object.__setattr__(self, "interval", tuple(self.interval))

    def explain(self, model: SurrogateModel, series: TimeSeries) -> Explanation:
        if self.scope is Scope.LOCAL:
            return explain_local(model, series, self.step)
        if self.scope is Scope.SEMI_LOCAL:
            return explain_semi_local(model, series, self.interval or (1, model.horizon))
        return explain_global(model, series)

def dependence_curves(
    model: SurrogateModel,
    series: TimeSeries,
    feature: str,
    scope: Union[Scope, str] = Scope.GLOBAL,
    grid_size: int = DEFAULT_GRID_SIZE,
    step: int = 1,
    interval: Optional[Interval] = None,
    ) -> CurveSet:
    """ Partial dependence and SHAP dependence curves of one feature

    The grid spans the feature's training range in `grid_size` equal steps; ordinal calendar features use their
    distinct training values instead. Every grid value is substituted into the scope's rows - the step-h row
    (local), the rows of the interval's steps (semi-local) or every training row (global) - and the surrogate
    output and the feature's SHAP value are averaged over them.

    Raises:
        UnknownFeature: The feature is not in the surrogate's registry
        DegenerateRange: The feature is constant over the training rows
    """
    scope = Scope.convert(scope)
    if grid_size < 2:
        raise ValueError(f"grid_size must be at least 2 - got {grid_size}")

    position = model.features.position(feature)
    column = model.features.rows[:, position]
    low, high = float(column.min()), float(column.max())
    if low == high:
        raise exceptions.DegenerateRange(f"Feature '{feature}' is constant ({low}) over the training rows")

    if feature in model.feature_config.categorical_names():
        grid = np.unique(column)
    else:
        grid = np.linspace(low, high, grid_size)

    if scope is Scope.LOCAL:
        _check_steps(model, step, step)
        _, rows, _ = step_attributions(model, series, step)
        rows = rows[step - 1:step]
    elif scope is Scope.SEMI_LOCAL:
        first, last = interval or (1, model.horizon)
        if first > last:
            raise exceptions.EmptyInterval(f"The interval {first}..{last} contains no steps")
        _check_steps(model, first, last)
        _, rows, _ = step_attributions(model, series, last)
        rows = rows[first - 1:last]
    else:
        rows = model.features.rows

    substituted = np.repeat(rows[np.newaxis, :, :], len(grid), axis=0)
    substituted[:, :, position] = grid[:, np.newaxis]
    flat = substituted.reshape(-1, rows.shape[1])

    pdp = model.ensemble.predict_matrix(flat).reshape(len(grid), len(rows)).mean(axis=1)
    sdp = shap_values(model.ensemble, flat)[:, position].reshape(len(grid), len(rows)).mean(axis=1)

    return CurveSet(
        feature=feature,
        grid=grid,
        pdp=pdp,
        sdp=sdp,
        scope=scope,
        step=step if scope is Scope.LOCAL else None,
        interval=(interval or (1, model.horizon)) if scope is Scope.SEMI_LOCAL else None,
    )

def backtest_fidelity(model: SurrogateModel, series: TimeSeries) -> FidelityReport:
    """ Errors of the surrogate's recursive forecasts against the forecaster's backtested forecasts

    Every backtest split's training partition is forecast by the surrogate and compared with the forecaster's path
    for that split; the errors are pooled over all splits and steps. MASE is scaled by the series' one-step naive
    error.
    """
    reference, surrogate = [], []
    lookback = model.feature_config.lookback
    for split, path in zip(model.backtest.splits, model.backtest.paths):
        if split.train_end < max(lookback, 1):
            continue
        history = series.head(split.train_end, future=split.horizon)
        predictions, _ = recursive_forecast(model.ensemble, model.feature_config, history, split.horizon)
        reference.extend(path.values)
        surrogate.extend(predictions)

    if not reference:
        raise exceptions.SplitExhausted("No backtest split has enough history for the surrogate's features")
    return fidelity_metrics(reference, surrogate, series)
