""" End to end runs - ingest, backtest, fit the surrogate, explain, evaluate and write the report and plots """

import dataclasses
import datetime
import json
import os
import re
from typing import Any, Dict, List, Mapping, Optional, Tuple

import numpy as np

from .backtest import FidelityReport
from .callbacks import AbstractCallback, DefaultCallback
from .config import RunConfig
from .explainer import (
    CurveSet,
    Explanation,
    SurrogateModel,
    backtest_fidelity,
    dependence_curves,
    explain_global,
    explain_local,
    explain_semi_local,
    fit_explainer,
    surrogate_forecast,
)
from .forecaster import Forecaster, ForecastPath
from .plotting import Line, PlotSpec, render_svg
from .robustness import MetricReport, Pipeline, evaluate
from .series import TimeSeries, read_csv
from .types import Scope, StrOrPathLike
from .worker_config import WorkerPoolConfig
from . import __version__
from . import exceptions

import logging
log = logging.getLogger(__name__)

REPORT_FILE = "report.json"

@dataclasses.dataclass(frozen=True)
class Fitted:
    """ The ingested series, the configured forecaster and the surrogate trained to mimic it """
    series: TimeSeries
    forecaster: Forecaster
    model: SurrogateModel

@dataclasses.dataclass(frozen=True)
class ExplanationReport:
    """ Everything a run produced

    Args:
        metadata: The dataset, forecaster, config hash, tool version and run timestamp
        fidelity: The surrogate's errors against the forecaster's backtested forecasts
        forecaster_forecast: The forecaster's forecast beyond the series
        surrogate_forecast: The surrogate's recursive forecast beyond the series
        explanations: The requested explanations
        curves: The requested dependence curves
        metrics: The robustness metrics by scope - empty when robustness is disabled
        plots: The plots to render, by file name
    """
    metadata: Mapping[str, Any]
    fidelity: FidelityReport
    forecaster_forecast: ForecastPath
    surrogate_forecast: ForecastPath
    explanations: Tuple[Explanation, ...] = ()
    curves: Tuple[CurveSet, ...] = ()
    metrics: Mapping[Scope, MetricReport] = dataclasses.field(default_factory=dict)
    plots: Mapping[str, PlotSpec] = dataclasses.field(default_factory=dict, repr=False, compare=False)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "metadata": dict(self.metadata),
            "fidelity": self.fidelity.to_dict(),
            "forecast": {
                "origin": self.forecaster_forecast.origin,
                "forecaster": self.forecaster_forecast.tolist(),
                "surrogate": self.surrogate_forecast.tolist(),
            },
            "explanations": [explanation.to_dict() for explanation in self.explanations],
            "curves": [curve.to_dict() for curve in self.curves],
            "metrics": {scope.value: report.to_dict() for scope, report in self.metrics.items()},
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=2, allow_nan=False)

    def write(self, directory: StrOrPathLike, plots: bool = True) -> List[str]:
        """ Write `report.json` and, optionally, one SVG per plot into the directory

        Returns:
            List[str]: The paths written
        """
        directory = os.fspath(directory)
        os.makedirs(directory, exist_ok=True)

        written = []
        path = os.path.join(directory, REPORT_FILE)
        with open(path, "w", encoding="utf-8") as handle:
            handle.write(self.to_json())
            handle.write("\n")
        written.append(path)

        if plots:
            for filename, spec in sorted(self.plots.items()):
                path = os.path.join(directory, filename)
                with open(path, "w", encoding="utf-8") as handle:
                    handle.write(render_svg(spec))
                written.append(path)

        log.debug("Wrote %s files to %s", len(written), directory)
        return written

def slug(name: str) -> str:
    """ A file name safe form of a feature name - `value(t-1)` becomes `value-t-1` """
    return re.sub(r"[^A-Za-z0-9]+", "-", name).strip("-").lower()

def ingest(config: RunConfig) -> TimeSeries:
    """ Read the configured series and check the configured regressor columns are present

    Raises:
        InputUnreadable: The input could not be read
        ConfigInvalid: A configured regressor column is not in the input
    """
    series = read_csv(config.input, config.periodicity, config.impute)
    missing = [name for name in config.features.regressor_columns if name not in series.regressors]
    if missing:
        raise exceptions.ConfigInvalid(
            f"Regressor columns {missing} are not in '{config.input}' - found {sorted(series.regressors)}"
        )
    return series

def fit(config: RunConfig, callback: AbstractCallback = DefaultCallback()) -> Fitted:
    """ Ingest the series and train the surrogate of the configured forecaster """
    series = ingest(config)
    forecaster = config.forecaster.create(config.features, config.gbt)
    log.debug("Explaining %s on %s", forecaster, series)

    model = fit_explainer(
        series,
        forecaster,
        config.horizon,
        config.features,
        config.gbt,
        config.splitter,
        workers=WorkerPoolConfig(max_workers=config.workers),
        callback=callback,
    )
    return Fitted(series=series, forecaster=forecaster, model=model)

def _explanations(config: RunConfig, fitted: Fitted) -> List[Explanation]:
    explanations = []
    for scope in config.scopes:
        if scope is Scope.LOCAL:
            explanations.extend(explain_local(fitted.model, fitted.series, step) for step in config.local_steps)
        elif scope is Scope.SEMI_LOCAL:
            explanations.append(explain_semi_local(fitted.model, fitted.series, config.semi_local_interval))
        else:
            explanations.append(explain_global(fitted.model, fitted.series))
    return explanations

def _curves(config: RunConfig, fitted: Fitted) -> List[CurveSet]:
    return [
        dependence_curves(
            fitted.model,
            fitted.series,
            feature,
            scope,
            grid_size=config.grid_size,
            step=config.local_steps[0],
            interval=config.semi_local_interval,
        )
        for feature in config.curve_features
        for scope in config.curve_scopes
    ]

def _forecast_plot(fitted: Fitted, forecasterPath: ForecastPath, surrogatePath: ForecastPath) -> PlotSpec:
    series, model = fitted.series, fitted.model
    observed = np.arange(len(series))
    backtested = model.backtest.step(1)
    future = np.arange(len(series), len(series) + forecasterPath.horizon)

    return PlotSpec(
        kind="lines",
        title="Forecaster and surrogate",
        xlabel="t",
        ylabel="value",
        lines=(
            Line("observed", observed, series.values),
            Line("forecaster (step 1 backtest)", backtested.index.to_numpy(), backtested.to_numpy()),
            Line("surrogate (training rows)", model.features.row_index, model.ensemble.predict_matrix(model.features.rows)),
            Line("forecaster forecast", future, forecasterPath.values),
            Line("surrogate forecast", future, surrogatePath.values),
        ),
        marker=len(series) - 0.5,
    )

def _importance_plot(explanation: Explanation) -> Tuple[str, PlotSpec]:
    if explanation.scope is Scope.LOCAL:
        filename = f"importance-local-step-{explanation.step}.svg"
        title = f"Local explanation of step {explanation.step}"
    elif explanation.scope is Scope.SEMI_LOCAL:
        first, last = explanation.interval
        filename = "importance-semi_local.svg"
        title = f"Semi-local explanation of steps {first}-{last}"
    else:
        filename = "importance-global.svg"
        title = "Global feature importance"

    ranked = explanation.ranked()
    return filename, PlotSpec(
        kind="bars",
        title=title,
        xlabel="feature",
        ylabel="mean |SHAP|" if explanation.scope is Scope.GLOBAL else "SHAP",
        labels=tuple(name for name, _ in ranked),
        values=tuple(value for _, value in ranked),
    )

def _curve_plots(curve: CurveSet) -> Dict[str, PlotSpec]:
    name = f"{slug(curve.feature)}-{curve.scope.value}"
    return {
        f"pdp-{name}.svg": PlotSpec(
            kind="lines",
            title=f"Partial dependence on {curve.feature} ({curve.scope.value})",
            xlabel=curve.feature,
            ylabel="surrogate output",
            lines=(Line("pdp", curve.grid, curve.pdp),),
        ),
        f"sdp-{name}.svg": PlotSpec(
            kind="lines",
            title=f"SHAP dependence on {curve.feature} ({curve.scope.value})",
            xlabel=curve.feature,
            ylabel=f"SHAP value of {curve.feature}",
            lines=(Line("sdp", curve.grid, curve.sdp),),
        ),
    }

def build_report(config: RunConfig, callback: AbstractCallback = DefaultCallback()) -> ExplanationReport:
    """ Run the configured pipeline without writing anything

    Raises:
        ConfigInvalid: The configuration does not fit the input
        InputUnreadable: The input could not be read
        TsShapError: Any pipeline error
    """
    fitted = fit(config, callback)
    series, model = fitted.series, fitted.model

    fidelity = backtest_fidelity(model, series)
    log.debug("Surrogate fidelity %s", fidelity.to_dict())

    pipeline = Pipeline(fitted.forecaster, config.horizon, config.features, config.gbt, config.splitter)
    forecasterPath = pipeline.forecast(series)
    surrogatePath = surrogate_forecast(model, series)

    explanations = _explanations(config, fitted)
    curves = _curves(config, fitted)

    metrics = {}
    if config.robustness_enabled and config.scopes:
        metrics = evaluate(
            pipeline,
            series,
            config.robustness,
            config.scopes,
            workers=WorkerPoolConfig(max_workers=config.workers),
            callback=callback,
        )

    plots = {"forecast.svg": _forecast_plot(fitted, forecasterPath, surrogatePath)}
    plots.update(_importance_plot(explanation) for explanation in explanations)
    for curve in curves:
        plots.update(_curve_plots(curve))

    metadata = {
        "dataset": os.path.basename(config.input),
        "forecaster": {"name": config.forecaster.name, "params": config.to_dict()["forecaster"]["params"]},
        "config_hash": config.hash(),
        "version": __version__,
        "timestamp": datetime.datetime.now(datetime.timezone.utc).isoformat(),
        "periodicity": series.periodicity.value,
        "horizon": config.horizon,
        "n_observations": len(series),
        "feature_names": list(model.feature_names),
        "training_rows": len(model.features),
    }

    return ExplanationReport(
        metadata=metadata,
        fidelity=fidelity,
        forecaster_forecast=forecasterPath,
        surrogate_forecast=surrogatePath,
        explanations=tuple(explanations),
        curves=tuple(curves),
        metrics=metrics,
        plots=plots,
    )

def run(config: RunConfig, callback: AbstractCallback = DefaultCallback()) -> ExplanationReport:
    """ Run the configured pipeline and write `report.json` and the plots into the output directory

    The shared worker pool is shut down once the run completes.
    """
    try:
        report = build_report(config, callback)
    finally:
        WorkerPoolConfig.shutdown()
    report.write(config.output, plots=config.plots)
    return report
