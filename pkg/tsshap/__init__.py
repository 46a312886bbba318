__version__ = "0.1.0"

from .types import Periodicity, Scope, StrOrPathLike
from .series import TimeSeries, TimePoint, make_series, read_csv, SplitterConfig, ExpandingWindowSplit, expanding_window_splits
from .forecaster import Forecaster, ForecastPath
from .forecasters import Naive, SeasonalNaive, MovingAverage, SimpleExponentialSmoothing, GbtReduction
from .backtest import BacktestResult, FidelityReport, run_backtest, fidelity_metrics
from .features import FeatureConfig, HolidayConfig, FeatureMatrix, build_features
from .surrogate import GbtParams, TreeEnsemble, ShapVector, gbt_fit, gbt_predict, tree_shap, brute_shapley
from .explainer import (
    SurrogateModel,
    Explanation,
    ExplanationRequest,
    CurveSet,
    fit_explainer,
    surrogate_forecast,
    explain_local,
    explain_semi_local,
    explain_global,
    dependence_curves,
    backtest_fidelity,
)
from .robustness import Pipeline, RobustnessConfig, MetricReport, decompose, block_bootstrap, faithfulness, sensitivity, complexity, evaluate
from .config import RunConfig, ForecasterSpec
from .worker_config import WorkerPoolConfig
from . import callbacks
from . import exceptions
