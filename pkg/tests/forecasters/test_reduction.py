import unittest

import numpy as np

import tsshap
from tsshap import exceptions
from tsshap.forecasters import gbt_reduction_forecaster, recursive_forecast

from .. import daily, seasonal

class Test_GbtReduction(unittest.TestCase):

    def test_constant_series(self):

        series = daily(np.full(40, 3.25))
        forecaster = gbt_reduction_forecaster(series, 5, tsshap.FeatureConfig(lags=(1, 2)))

        np.testing.assert_allclose(forecaster.predict(5).values, 3.25, atol=1e-6)

    def test_history_shorter_than_lookback(self):

        with self.assertRaises(exceptions.InsufficientHistory):
            gbt_reduction_forecaster(daily([1.0, 2.0, 3.0]), 1, tsshap.FeatureConfig(lags=(1, 5)))

    def test_accepts_dictionaries(self):

        forecaster = tsshap.Forecaster.create(
            'gbt-reduction',
            {'feature_config': {'lags': [1, 2]}, 'gbt_params': {'n_trees': 5}}
        )

        self.assertEqual(forecaster.feature_config.lags, (1, 2))
        self.assertEqual(forecaster.gbt_params.n_trees, 5)
        self.assertFalse(forecaster.requires_refit_per_window)

    def test_forecast_with_future_regressors(self):

        values = seasonal(60, period=7)
        regressor = np.arange(63, dtype=float) % 7
        series = daily(values, regressors={'weekday': regressor}, horizon=3)

        config = tsshap.FeatureConfig(lags=(1,), regressor_columns=('weekday',))
        forecaster = gbt_reduction_forecaster(series, 3, config, tsshap.GbtParams(n_trees=10))

        path = forecaster.predict(3)
        self.assertEqual(len(path), 3)
        self.assertTrue(np.all(np.isfinite(path.values)))

    def test_missing_future_regressor(self):

        series = daily(seasonal(40, period=7), regressors={'weekday': np.arange(40.0) % 7})
        config = tsshap.FeatureConfig(lags=(1,), regressor_columns=('weekday',))
        forecaster = gbt_reduction_forecaster(series, 2, config, tsshap.GbtParams(n_trees=5))

        with self.assertRaises(exceptions.MissingFutureRegressor):
            forecaster.predict(2)

    def test_recursive_rows(self):

        series = daily(seasonal(50))
        config = tsshap.FeatureConfig(lags=(1, 2))
        forecaster = gbt_reduction_forecaster(series, 3, config, tsshap.GbtParams(n_trees=20))

        predictions, rows = recursive_forecast(forecaster.ensemble, config, series, 3)

        self.assertEqual(rows.shape, (3, 2))
        # Step 2 reads the step 1 prediction as its lag one value
        self.assertEqual(rows[1, 0], predictions[0])
        self.assertEqual(rows[2, 1], predictions[0])
        np.testing.assert_array_equal(predictions, forecaster.predict(3).values)
