""" The forecasting to regression reduction forecaster - one boosted one-step regressor applied recursively """

import dataclasses
from typing import Any, Mapping, Optional, Sequence, Tuple, Union

import numpy as np

from ..forecaster import Forecaster
from ..features import FeatureConfig, build_features, forecast_row, extend_with_prediction
from ..series import TimeSeries, validate_horizon
from ..surrogate import GbtParams, TreeEnsemble, gbt_fit
from .. import exceptions

import logging
log = logging.getLogger(__name__)

def recursive_forecast(
    ensemble: TreeEnsemble,
    config: FeatureConfig,
    series: TimeSeries,
    horizon: int,
    ) -> Tuple[np.ndarray, np.ndarray]:
    """ Forecast H steps with a one-step regressor, feeding every prediction back as an observation

    Step 1 is predicted from the features of the observed series; step h >= 2 from the features of the series
    extended by the h - 1 prior predictions.

    Returns:
        Tuple[np.ndarray, np.ndarray]: The H predictions and the (H, d) feature rows that produced them
    """
    horizon = validate_horizon(horizon)

    predictions, rows = [], []
    current = series
    for step in range(horizon):
        row = forecast_row(current, config)
        prediction = ensemble.predict(row)
        predictions.append(prediction)
        rows.append(row)
        if step + 1 < horizon:
            current = extend_with_prediction(current, prediction)

    return np.array(predictions), np.array(rows).reshape(horizon, len(config.feature_names()))

def with_future_regressors(series: TimeSeries, future_regressors: Mapping[str, Sequence[float]]) -> TimeSeries:
    """ Attach future regressor values to the columns of a series that do not already extend past it """
    if not future_regressors:
        return series

    T = len(series)
    regressors = {}
    for name, column in series.regressors.items():
        future = future_regressors.get(name)
        if len(column) <= T and future is not None:
            column = np.concatenate([column[:T], np.asarray(future, dtype=np.float64)])
            column.setflags(write=False)
        regressors[name] = column

    horizon = min(len(column) - T for column in regressors.values()) if regressors else 0
    regressors = {name: column[:T + horizon] for name, column in regressors.items()}
    return dataclasses.replace(series, regressors=regressors, horizon=max(0, horizon))

@Forecaster.register('gbt-reduction')
class GbtReduction(Forecaster):
    """ Reduces forecasting to tabular regression: a boosted tree ensemble learns y(t) from the interpretable
    features x(t) and forecasts recursively

    The regressor is trained once, so the backtester fits it a single time and predicts every split from that
    split's history.

    Args:
        feature_config: The features the regressor is trained on
        gbt_params: The boosting hyperparameters
    """

    supports_regressors = True
    requires_refit_per_window = False

    def __init__(
        self,
        feature_config: Optional[Union[FeatureConfig, Mapping[str, Any]]] = None,
        gbt_params: Optional[Union[GbtParams, Mapping[str, Any]]] = None,
        ):
        super().__init__()

        if isinstance(feature_config, Mapping):
            feature_config = FeatureConfig.from_dict(feature_config)
        if isinstance(gbt_params, Mapping):
            gbt_params = GbtParams.from_dict(gbt_params)

        self.feature_config = feature_config or FeatureConfig()
        self.gbt_params = gbt_params or GbtParams()
        self._ensemble: Optional[TreeEnsemble] = None

    @property
    def params(self):
        return {'feature_config': self.feature_config.to_dict(), 'gbt_params': self.gbt_params.to_dict()}

    @property
    def ensemble(self) -> TreeEnsemble:
        if self._ensemble is None:
            raise exceptions.NotFitted("The reduction forecaster has not been fit")
        return self._ensemble

    def _reset(self):
        self._ensemble = None

    def _fit(self, history: TimeSeries):
        features = build_features(history, self.feature_config)
        targets = history.values[features.row_index]
        self._ensemble = gbt_fit(features, targets, self.gbt_params)
        log.debug("Fit reduction forecaster on %s rows", len(features))

    def _predict(self, history: TimeSeries, horizon: int, future_regressors: Mapping[str, Sequence[float]]):
        history = with_future_regressors(history, future_regressors)
        predictions, _ = recursive_forecast(self.ensemble, self.feature_config, history, horizon)
        return predictions

def gbt_reduction_forecaster(
    history: TimeSeries,
    horizon: int,
    feature_config: Optional[FeatureConfig] = None,
    gbt_params: Optional[GbtParams] = None,
    ) -> GbtReduction:
    """ A reduction forecaster fit on `history`, ready to forecast `horizon` steps

    Raises:
        InsufficientHistory: The history is no longer than the feature lookback
    """
    validate_horizon(horizon)
    return GbtReduction(feature_config, gbt_params).fit(history)
