""" Robustness evaluation of explanations - trend-cycle preserving block bootstrap perturbations and the
faithfulness, sensitivity and complexity metrics """

import dataclasses
import math
from typing import Any, Dict, Iterable, List, Optional, Sequence, Union

import numpy as np

from .callbacks import AbstractCallback, DefaultCallback
from .explainer import SurrogateModel, explain_global, explain_semi_local, fit_explainer, step_attributions
from .features import FeatureConfig
from .forecaster import Forecaster, ForecastPath
from .series import SplitterConfig, TimeSeries
from .surrogate import GbtParams
from .types import Periodicity, Scope
from .worker_config import WorkerPoolConfig
from . import exceptions

import logging
log = logging.getLogger(__name__)

DEFAULT_ORDERS = {
    Periodicity.HOURLY: 25,
    Periodicity.DAILY: 7,
    Periodicity.WEEKLY: 5,
    Periodicity.MONTHLY: 5,
}

@dataclasses.dataclass(frozen=True, eq=False)
class Decomposition:
    """ A centred moving average trend-cycle and the residual about it

    Both are NaN at the k = (order - 1) / 2 boundary points at either end where the window is incomplete.
    """
    trend_cycle: np.ndarray
    residual: np.ndarray
    order: int

    @property
    def k(self) -> int:
        return (self.order - 1) // 2

    @property
    def interior(self) -> slice:
        """ The time indices where the trend-cycle is defined """
        return slice(self.k, len(self.trend_cycle) - self.k)

def default_order(periodicity: Periodicity) -> int:
    return DEFAULT_ORDERS[Periodicity.convert(periodicity)]

def decompose(series: Union[TimeSeries, Sequence[float]], order: int) -> Decomposition:
    """ Split a series into a centred moving average of odd order m = 2k + 1 and the residual

    Raises:
        EvenOrder: The order is even
        OrderTooLong: The order exceeds the series length
    """
    values = series.values if isinstance(series, TimeSeries) else np.asarray(series, dtype=np.float64)
    if order < 1:
        raise ValueError(f"Trend-cycle order must be positive - got {order}")
    if order % 2 == 0:
        raise exceptions.EvenOrder(f"Trend-cycle order must be odd - got {order}")
    if order > len(values):
        raise exceptions.OrderTooLong(f"Trend-cycle order {order} exceeds series length {len(values)}")

    k = (order - 1) // 2
    trend = np.full(len(values), np.nan)
    trend[k:len(values) - k] = np.lib.stride_tricks.sliding_window_view(values, order).mean(axis=1)
    residual = values - trend

    return Decomposition(trend_cycle=trend, residual=residual, order=order)

@dataclasses.dataclass(frozen=True, eq=False)
class PerturbedSample:
    """ A block bootstrap perturbation of a series

    Args:
        series: The perturbed series - trend-cycle plus the bootstrapped residual on the interior, the original
            values at the boundaries
        residual: The bootstrapped interior residual
        block_length: The residual block length
        seed: The seed the perturbations were drawn from
        index: The position of the sample in its draw
    """
    series: TimeSeries
    residual: np.ndarray
    block_length: int
    seed: int
    index: int

def bootstrap_residual(residual: np.ndarray, block_length: int, rng: np.random.Generator) -> np.ndarray:
    """ Concatenate ceil(N / L) residual blocks with uniformly drawn start indices and truncate to N """
    N = len(residual)
    blocks = math.ceil(N / block_length)
    starts = rng.integers(0, N - block_length + 1, size=blocks)
    return np.concatenate([residual[start:start + block_length] for start in starts])[:N]

def block_bootstrap(
    series: TimeSeries,
    block_length: Optional[int] = None,
    n_samples: int = 20,
    seed: int = 0,
    order: Optional[int] = None,
    ) -> List[PerturbedSample]:
    """ Perturb a series by block bootstrapping its residual about the trend-cycle

    Every sample keeps the trend-cycle of the series and replaces the interior residual with a bootstrapped one,
    ỹ = trend-cycle + bootstrapped residual; the boundary points without a trend-cycle are copied from y.

    Args:
        series: The series to perturb
        block_length: The block length L - defaults to max(N // 10, 2) for the interior residual length N
        n_samples: The number of perturbed series
        seed: The seed - every sample draws from an independent child of it
        order: The trend-cycle order - defaults by periodicity (7 daily, 5 weekly and monthly)

    Raises:
        BlockTooLong: The block length exceeds the interior residual length
    """
    if n_samples < 1:
        raise ValueError(f"n_samples must be at least 1 - got {n_samples}")

    decomposition = decompose(series, order or default_order(series.periodicity))
    interior = decomposition.interior
    residual = decomposition.residual[interior]
    N = len(residual)

    block_length = max(N // 10, 2) if block_length is None else block_length
    if block_length < 1:
        raise ValueError(f"Block length must be at least 1 - got {block_length}")
    if block_length > N:
        raise exceptions.BlockTooLong(f"Block length {block_length} exceeds the residual length {N}")

    samples = []
    for index, child in enumerate(np.random.SeedSequence(seed).spawn(n_samples)):
        bootstrapped = bootstrap_residual(residual, block_length, np.random.default_rng(child))

        values = np.array(series.values)
        values[interior] = decomposition.trend_cycle[interior] + bootstrapped
        bootstrapped.setflags(write=False)

        samples.append(PerturbedSample(
            series=series.with_values(values),
            residual=bootstrapped,
            block_length=block_length,
            seed=seed,
            index=index,
        ))

    log.debug("Drew %s block bootstrap samples with block length %s", n_samples, block_length)
    return samples

def complexity(phi: Sequence[float]) -> float:
    """ The entropy of the distribution p_i = |phi_i| / sum_j |phi_j|, with 0 ln 0 taken as 0

    Raises:
        AllZeroImportance: Every attribution is zero
    """
    magnitude = np.abs(np.asarray(phi, dtype=np.float64))
    total = magnitude.sum()
    if not total > 0:
        raise exceptions.AllZeroImportance("Complexity is undefined when every attribution is zero")
    p = magnitude[magnitude > 0] / total
    return float(-np.sum(p * np.log(p)))

def correlation(deltaF: Sequence[float], deltaPhi: Sequence[float]) -> float:
    """ The Pearson correlation of prediction changes and attribution changes

    Raises:
        ZeroVariance: Either sequence is constant
    """
    deltaF = np.asarray(deltaF, dtype=np.float64)
    deltaPhi = np.asarray(deltaPhi, dtype=np.float64)
    if len(deltaF) != len(deltaPhi) or len(deltaF) < 2:
        raise ValueError("Correlation requires two equal length sequences of at least two values")
    if np.ptp(deltaF) == 0 or np.ptp(deltaPhi) == 0:
        raise exceptions.ZeroVariance("Faithfulness is undefined when the prediction or attribution changes are constant")
    return float(np.clip(np.corrcoef(deltaF, deltaPhi)[0, 1], -1.0, 1.0))

@dataclasses.dataclass(frozen=True)
class PipelineRun:
    """ The forecaster's forecast from a series and the surrogate trained on it """
    forecast: ForecastPath
    model: SurrogateModel
    series: TimeSeries
    _explanations: Dict[Scope, np.ndarray] = dataclasses.field(default_factory=dict, repr=False, compare=False)

    def explanations(self, scope: Scope) -> np.ndarray:
        """ The explanation vectors of a scope - one per horizon step for local, a single row otherwise """
        if scope not in self._explanations:
            if scope is Scope.LOCAL:
                _, _, phi = step_attributions(self.model, self.series, self.model.horizon)
            elif scope is Scope.SEMI_LOCAL:
                phi = explain_semi_local(self.model, self.series, (1, self.model.horizon)).values[np.newaxis, :]
            else:
                phi = explain_global(self.model, self.series).values[np.newaxis, :]
            self._explanations[scope] = phi
        return self._explanations[scope]

    def forecasts(self, scope: Scope) -> np.ndarray:
        """ The forecaster outputs paired with the scope's explanations """
        if scope is Scope.SEMI_LOCAL:
            return np.array([self.forecast.values.mean()])
        return self.forecast.values

@dataclasses.dataclass(frozen=True)
class Pipeline:
    """ Everything that is refit on a perturbed series - the forecaster, its backtest and the surrogate

    Args:
        forecaster: The black-box forecaster
        horizon: The forecast horizon H
        feature_config: The surrogate's features
        gbt_params: The surrogate's boosting hyperparameters
        splitter_config: The backtest splitter settings
    """
    forecaster: Forecaster
    horizon: int
    feature_config: FeatureConfig = dataclasses.field(default_factory=FeatureConfig)
    gbt_params: GbtParams = dataclasses.field(default_factory=GbtParams)
    splitter_config: SplitterConfig = dataclasses.field(default_factory=SplitterConfig)

    def fit(self, series: TimeSeries, workers: Optional[WorkerPoolConfig] = None, callback: AbstractCallback = DefaultCallback()) -> SurrogateModel:
        return fit_explainer(
            series,
            self.forecaster,
            self.horizon,
            self.feature_config,
            self.gbt_params,
            self.splitter_config,
            workers=workers,
            callback=callback,
        )

    def forecast(self, series: TimeSeries) -> ForecastPath:
        """ The forecaster's H step forecast from the whole series """
        model = self.forecaster.clone().fit(series)
        return model.predict(self.horizon, series.future_regressors(len(series), self.horizon))

    def run(self, series: TimeSeries) -> PipelineRun:
        return PipelineRun(forecast=self.forecast(series), model=self.fit(series), series=series)

def _runs(pipeline: Pipeline, perturbations: Sequence[PerturbedSample], workers: Optional[WorkerPoolConfig], callback: AbstractCallback) -> List[PipelineRun]:
    workers = workers or WorkerPoolConfig()
    callback.perturbing(len(perturbations))
    return workers.map(
        pipeline.run,
        [sample.series for sample in perturbations],
        callback=lambda _: callback.perturbed(1),
    )

def _faithfulness(reference: PipelineRun, runs: Sequence[PipelineRun], scope: Scope) -> float:
    deltaF, deltaPhi = [], []
    referenceF = reference.forecasts(scope)
    referencePhi = reference.explanations(scope).sum(axis=1)
    for run in runs:
        phi = run.explanations(scope).sum(axis=1)
        deltaF.extend(referenceF - run.forecasts(scope))
        deltaPhi.extend(np.broadcast_to(referencePhi - phi, referenceF.shape))
    return correlation(deltaF, deltaPhi)

def _sensitivity(reference: PipelineRun, runs: Sequence[PipelineRun], scope: Scope) -> float:
    referencePhi = reference.explanations(scope)
    distances = [np.linalg.norm(referencePhi - run.explanations(scope), axis=1).mean() for run in runs]
    return float(np.mean(distances))

def _complexity(reference: PipelineRun, scope: Scope) -> float:
    return float(np.mean([complexity(phi) for phi in reference.explanations(scope)]))

def faithfulness(
    pipeline: Pipeline,
    series: TimeSeries,
    perturbations: Sequence[PerturbedSample],
    scope: Union[Scope, str],
    workers: Optional[WorkerPoolConfig] = None,
    callback: AbstractCallback = DefaultCallback(),
    ) -> float:
    """ Correlation of the forecast changes with the attribution changes under perturbation

    The pipeline is refit on every perturbed series. For every perturbation the change of the forecaster's
    forecast at each step is paired with the change of the summed attributions explaining it: per step for local
    explanations, the interval mean for semi-local explanations and the global importance for global explanations.
    The pairs of every perturbation are pooled into one Pearson correlation.

    Raises:
        ZeroVariance: The forecast or attribution changes are constant
    """
    scope = Scope.convert(scope)
    if len(perturbations) < 2:
        raise ValueError(f"Faithfulness requires at least two perturbations - got {len(perturbations)}")
    return _faithfulness(pipeline.run(series), _runs(pipeline, perturbations, workers, callback), scope)

def sensitivity(
    pipeline: Pipeline,
    series: TimeSeries,
    perturbations: Sequence[PerturbedSample],
    scope: Union[Scope, str],
    workers: Optional[WorkerPoolConfig] = None,
    callback: AbstractCallback = DefaultCallback(),
    ) -> float:
    """ The mean Euclidean distance between the explanation of the series and the explanations of its
    perturbations (local distances are averaged over the horizon) """
    scope = Scope.convert(scope)
    if len(perturbations) < 1:
        raise ValueError("Sensitivity requires at least one perturbation")
    return _sensitivity(pipeline.run(series), _runs(pipeline, perturbations, workers, callback), scope)

@dataclasses.dataclass(frozen=True)
class RobustnessConfig:
    """ Perturbation settings

    Args:
        order: The trend-cycle moving average order - defaults by periodicity
        block_length: The bootstrap block length - defaults to max(N // 10, 2)
        n_perturbations: The number of perturbed series
        seed: The bootstrap seed
    """
    order: Optional[int] = None
    block_length: Optional[int] = None
    n_perturbations: int = 20
    seed: int = 0

    def __post_init__(self):
        if self.order is not None and (self.order < 1 or self.order % 2 == 0):
            raise exceptions.EvenOrder(f"Trend-cycle order must be a positive odd number - got {self.order}")
        if self.block_length is not None and self.block_length < 1:
            raise ValueError(f"block_length must be at least 1 - got {self.block_length}")
        if self.n_perturbations < 1:
            raise ValueError(f"n_perturbations must be at least 1 - got {self.n_perturbations}")

    @classmethod
    def from_dict(cls, config: Dict[str, Any]) -> "RobustnessConfig":
        return cls(**dict(config))

    def to_dict(self) -> Dict[str, Any]:
        return dataclasses.asdict(self)

    def perturb(self, series: TimeSeries) -> List[PerturbedSample]:
        return block_bootstrap(series, self.block_length, self.n_perturbations, self.seed, self.order)

@dataclasses.dataclass(frozen=True)
class MetricReport:
    """ Robustness metrics of the explanations at one scope - faithfulness and complexity are None when
    undefined """
    scope: Scope
    faithfulness: Optional[float]
    sensitivity: float
    complexity: Optional[float]
    n_perturbations: int

    def to_dict(self) -> Dict[str, Any]:
        return {
            "scope": self.scope.value,
            "faithfulness": self.faithfulness,
            "sensitivity": self.sensitivity,
            "complexity": self.complexity,
            "n_perturbations": self.n_perturbations,
        }

def evaluate(
    pipeline: Pipeline,
    series: TimeSeries,
    config: Optional[RobustnessConfig] = None,
    scopes: Iterable[Union[Scope, str]] = tuple(Scope),
    workers: Optional[WorkerPoolConfig] = None,
    callback: AbstractCallback = DefaultCallback(),
    ) -> Dict[Scope, MetricReport]:
    """ Faithfulness, sensitivity and complexity of the pipeline's explanations at every requested scope

    The series is perturbed once and every perturbed pipeline is refit once; all scopes share the refits.
    """
    config = config or RobustnessConfig()
    scopes = [Scope.convert(scope) for scope in scopes]

    perturbations = config.perturb(series)
    reference = pipeline.run(series)
    runs = _runs(pipeline, perturbations, workers, callback)

    reports = {}
    for scope in scopes:
        try:
            faithful = _faithfulness(reference, runs, scope) if len(runs) >= 2 else None
        except exceptions.ZeroVariance:
            log.warning("Faithfulness of %s explanations is undefined - constant changes under perturbation", scope.value)
            faithful = None

        try:
            complex_ = _complexity(reference, scope)
        except exceptions.AllZeroImportance:
            log.warning("Complexity of %s explanations is undefined - every attribution is zero", scope.value)
            complex_ = None

        reports[scope] = MetricReport(
            scope=scope,
            faithfulness=faithful,
            sensitivity=_sensitivity(reference, runs, scope),
            complexity=complex_,
            n_perturbations=len(runs),
        )
    return reports
