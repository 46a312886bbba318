import unittest

import numpy as np

import tsshap
from tsshap import exceptions
from tsshap.surrogate import TreeNode

from . import daily, seasonal

ACCEPTANCE_FEATURES = tsshap.FeatureConfig(lags=(1, 2, 3), seasonal_lags=(1, 12), rolling_windows=(6,))

def stump_surrogate(second_column=None) -> tsshap.SurrogateModel:
    """ A surrogate whose output steps from 0 to 1 where value(t-1) reaches 0.5 """
    second = np.linspace(5, 6, 10) if second_column is None else second_column
    features = tsshap.FeatureMatrix(
        ['value(t-1)', 'value(t-2)'],
        np.column_stack([np.linspace(0, 1, 10), second]),
        np.arange(2, 12),
    )
    tree = TreeNode(cover=10, feature=0, threshold=0.5, left=TreeNode(cover=5, value=0.0), right=TreeNode(cover=5, value=1.0))
    return tsshap.SurrogateModel(
        ensemble=tsshap.TreeEnsemble([tree], 1.0, 0.0, features.names),
        feature_config=tsshap.FeatureConfig(lags=(1, 2)),
        features=features,
        targets=np.zeros(10),
        horizon=2,
        backtest=tsshap.BacktestResult((), (), 0),
    )

class Test_FitExplainer(unittest.TestCase):

    def test_constant_series(self):

        series = daily(np.full(60, 5.0))
        model = tsshap.fit_explainer(series, tsshap.Naive(), 20)

        self.assertEqual(model.ensemble.trees, ())
        self.assertEqual(tsshap.surrogate_forecast(model, series).tolist(), [5.0] * 20)

        for step in (1, 20):
            explanation = tsshap.explain_local(model, series, step)
            np.testing.assert_array_equal(explanation.values, np.zeros(3))
            self.assertEqual(explanation.prediction, 5.0)

    def test_training_rows(self):

        series = daily(seasonal(100))
        model = tsshap.fit_explainer(series, tsshap.Naive(), 3, tsshap.FeatureConfig(lags=(1, 2)))

        # Default splitter starts at ceil(T / 2) and advances one step
        self.assertEqual(model.training_coverage, range(50, 98))
        np.testing.assert_allclose(model.targets, series.values[49:97])
        self.assertEqual(len(model.features), 48)
        self.assertEqual(model.feature_names, ('value(t-1)', 'value(t-2)'))

    def test_default_initial_train_follows_the_longest_lag(self):

        series = daily(seasonal(60))
        model = tsshap.fit_explainer(series, tsshap.Naive(), 2, tsshap.FeatureConfig(lags=(1,), rolling_windows=(40,)))

        self.assertEqual(model.backtest.splits[0].train_end, 30)
        self.assertEqual(model.training_coverage, range(40, 59))

    def test_naive_targets_are_the_first_lag(self):

        series = daily(seasonal(100))
        model = tsshap.fit_explainer(series, tsshap.Naive(), 3, tsshap.FeatureConfig(lags=(1, 2)))

        np.testing.assert_array_equal(model.targets, model.features.column('value(t-1)'))

    def test_underdetermined(self):

        with self.assertRaises(exceptions.SurrogateUnderdetermined):
            tsshap.fit_explainer(daily(seasonal(20)), tsshap.Naive(), 2, tsshap.FeatureConfig(lags=(1,)))

    def test_fidelity_of_seasonal_naive(self):

        series = daily(seasonal(120, noise=0))
        model = tsshap.fit_explainer(
            series,
            tsshap.SeasonalNaive(12),
            6,
            tsshap.FeatureConfig(lags=(1,), seasonal_lags=(1, 12)),
            tsshap.GbtParams(min_samples_leaf=1),
        )

        report = tsshap.backtest_fidelity(model, series)
        self.assertLessEqual(report.mase, 0.25)

class Test_Explanations(unittest.TestCase):

    @classmethod
    def setUpClass(cls):
        cls.series = daily(seasonal(120))
        cls.model = tsshap.fit_explainer(
            cls.series,
            tsshap.MovingAverage(3),
            4,
            tsshap.FeatureConfig(lags=(1, 2, 3), rolling_windows=(3,), date_features=('day-of-week',)),
            tsshap.GbtParams(n_trees=50),
        )

    def test_local_accuracy(self):

        forecast = tsshap.surrogate_forecast(self.model, self.series)

        for step in range(1, 5):
            explanation = tsshap.explain_local(self.model, self.series, step)
            self.assertEqual(explanation.step, step)
            self.assertAlmostEqual(explanation.base_value + explanation.values.sum(), forecast.values[step - 1], places=6)
            self.assertAlmostEqual(explanation.prediction, forecast.values[step - 1])

    def test_semi_local_of_one_step_is_local(self):

        local = tsshap.explain_local(self.model, self.series, 3)
        semiLocal = tsshap.explain_semi_local(self.model, self.series, (3, 3))

        np.testing.assert_allclose(semiLocal.values, local.values)
        self.assertEqual(semiLocal.interval, (3, 3))

    def test_semi_local_is_the_mean_of_local(self):

        locals_ = [tsshap.explain_local(self.model, self.series, step).values for step in range(2, 5)]
        semiLocal = tsshap.explain_semi_local(self.model, self.series, (2, 4))

        np.testing.assert_allclose(semiLocal.values, np.mean(locals_, axis=0))

    def test_global(self):

        explanation = tsshap.explain_global(self.model, self.series)

        self.assertTrue(np.all(explanation.values >= 0))
        self.assertEqual(explanation.coverage, self.model.training_coverage)
        self.assertEqual(explanation.to_dict()['scope'], 'global')
        self.assertEqual(explanation.ranked()[0][1], explanation.values.max())

    def test_steps_out_of_range(self):

        with self.assertRaises(exceptions.HorizonOutOfRange):
            tsshap.explain_local(self.model, self.series, 5)

        with self.assertRaises(exceptions.HorizonOutOfRange):
            tsshap.explain_local(self.model, self.series, 0)

        with self.assertRaises(exceptions.EmptyInterval):
            tsshap.explain_semi_local(self.model, self.series, (3, 2))

        with self.assertRaises(exceptions.EmptyInterval):
            tsshap.explain_semi_local(self.model, self.series, (1, 5))

    def test_requests(self):

        whole = tsshap.ExplanationRequest('semilocal').explain(self.model, self.series)
        self.assertEqual(whole.scope, tsshap.Scope.SEMI_LOCAL)
        self.assertEqual(whole.interval, (1, 4))

        local = tsshap.ExplanationRequest('local', step=2).explain(self.model, self.series)
        self.assertEqual(local.to_dict()['step'], 2)

        self.assertEqual(tsshap.ExplanationRequest().explain(self.model, self.series).scope, tsshap.Scope.GLOBAL)

    def test_categorical_curve(self):

        curve = tsshap.dependence_curves(self.model, self.series, 'day-of-week')

        self.assertEqual(curve.grid.tolist(), [0, 1, 2, 3, 4, 5, 6])

    def test_curves_at_every_scope(self):

        for scope, expected in (('local', 2), ('semi_local', (1, 4)), ('global', None)):
            with self.subTest(scope=scope):
                curve = tsshap.dependence_curves(self.model, self.series, 'value(t-1)', scope, grid_size=7, step=2)

                self.assertEqual(len(curve.grid), 7)
                self.assertTrue(np.all(np.diff(curve.grid) > 0))
                self.assertEqual(curve.step if scope == 'local' else curve.interval, expected)

class Test_QualitativeExplanations(unittest.TestCase):
    """ The surrogate of an interpretable forecaster attributes its forecasts to the feature it computes """

    def top_feature(self, forecaster: tsshap.Forecaster) -> str:
        series = daily(seasonal(240))
        model = tsshap.fit_explainer(series, forecaster, 3, ACCEPTANCE_FEATURES)
        return tsshap.explain_global(model, series).ranked()[0][0]

    def test_naive(self):
        self.assertEqual(self.top_feature(tsshap.Naive()), 'value(t-1)')

    def test_seasonal_naive(self):
        self.assertEqual(self.top_feature(tsshap.SeasonalNaive(12)), 'value(t-1*12)')

    def test_moving_average(self):
        self.assertEqual(self.top_feature(tsshap.MovingAverage(6)), 'value-mean(t-1,t-6)')

class Test_SurrogateForecast(unittest.TestCase):

    def test_predictions_feed_later_steps(self):

        # g = 1 where value(t-2) reaches 0.5 so step 3 reads the prediction of step 1
        features = tsshap.FeatureMatrix(['value(t-1)', 'value(t-2)'], np.zeros((4, 2)), np.arange(2, 6))
        tree = TreeNode(cover=4, feature=1, threshold=0.5, left=TreeNode(cover=2, value=0.0), right=TreeNode(cover=2, value=1.0))
        model = tsshap.SurrogateModel(
            ensemble=tsshap.TreeEnsemble([tree], 1.0, 0.0, features.names),
            feature_config=tsshap.FeatureConfig(lags=(1, 2)),
            features=features,
            targets=np.zeros(4),
            horizon=3,
            backtest=tsshap.BacktestResult((), (), 0),
        )

        low = tsshap.surrogate_forecast(model, daily([0.0, 0.0, 0.0, 1.0]))
        high = tsshap.surrogate_forecast(model, daily([0.0, 0.0, 1.0, 1.0]))

        self.assertEqual(low.tolist(), [0.0, 1.0, 0.0])
        self.assertEqual(high.tolist(), [1.0, 1.0, 1.0])

class Test_DependenceCurves(unittest.TestCase):

    def test_step_surrogate(self):

        model = stump_surrogate()
        series = daily(np.arange(12.0))

        curve = tsshap.dependence_curves(model, series, 'value(t-1)', 'global', grid_size=11)

        np.testing.assert_allclose(curve.grid, np.linspace(0, 1, 11))
        np.testing.assert_array_equal(curve.pdp, [0.0] * 5 + [1.0] * 6)
        np.testing.assert_allclose(curve.sdp, [-0.5] * 5 + [0.5] * 6)

    def test_unused_feature(self):

        curve = tsshap.dependence_curves(stump_surrogate(), daily(np.arange(12.0)), 'value(t-2)', 'global', grid_size=11)

        np.testing.assert_array_equal(curve.sdp, np.zeros(11))

    def test_local_scope(self):

        curve = tsshap.dependence_curves(stump_surrogate(), daily(np.arange(12.0)), 'value(t-1)', 'local', grid_size=11, step=1)

        np.testing.assert_array_equal(curve.pdp, [0.0] * 5 + [1.0] * 6)
        self.assertEqual(curve.to_dict()['step'], 1)

    def test_degenerate_range(self):

        model = stump_surrogate(second_column=np.full(10, 3.0))

        with self.assertRaises(exceptions.DegenerateRange):
            tsshap.dependence_curves(model, daily(np.arange(12.0)), 'value(t-2)')

    def test_unknown_feature(self):

        with self.assertRaises(exceptions.UnknownFeature):
            tsshap.dependence_curves(stump_surrogate(), daily(np.arange(12.0)), 'temp(t)')
