import unittest

import numpy as np

import tsshap
from tsshap import exceptions
from tsshap.forecasters import naive_predict, seasonal_naive_predict, moving_average_predict, ses_predict

from .. import daily

class Test_BaselinePredictions(unittest.TestCase):

    def test_naive(self):

        self.assertEqual(naive_predict([3, 7, 5], 2).tolist(), [5, 5])
        self.assertEqual(naive_predict([42], 1).tolist(), [42])

        with self.assertRaises(exceptions.EmptyHistory):
            naive_predict([], 1)

    def test_seasonal_naive(self):

        self.assertEqual(seasonal_naive_predict([1, 2, 3, 4], 2, m=2).tolist(), [3, 4])
        self.assertEqual(seasonal_naive_predict([1, 2, 3, 4], 3, m=2).tolist(), [3, 4, 3])

        with self.assertRaises(exceptions.SeasonTooLong):
            seasonal_naive_predict([1, 2], 1, m=4)

    def test_moving_average(self):

        self.assertEqual(moving_average_predict([1, 2, 3], 1, k=3).tolist(), [2.0])
        self.assertEqual(moving_average_predict([1, 2, 3], 2, k=2).tolist(), [2.5, 2.75])

        with self.assertRaises(exceptions.OrderTooLong):
            moving_average_predict([5], 1, k=2)

    def test_ses(self):

        self.assertEqual(ses_predict([0, 2], 2, alpha=0.5).tolist(), [1.0, 1.0])
        self.assertEqual(ses_predict([3, 7], 1, alpha=1).tolist(), [7])

        with self.assertRaises(exceptions.AlphaOutOfRange):
            ses_predict([3, 7], 1, alpha=1.5)

    def test_horizon_out_of_range(self):

        with self.assertRaises(exceptions.HorizonOutOfRange):
            naive_predict([1, 2], 0)

class Test_Forecasters(unittest.TestCase):

    def test_registry(self):

        self.assertIs(tsshap.Forecaster.find('naive'), tsshap.Naive)
        self.assertIs(tsshap.Forecaster.find('Seasonal-Naive'), tsshap.SeasonalNaive)
        self.assertIn('gbt-reduction', tsshap.Forecaster.available())

        forecaster = tsshap.Forecaster.create('moving-average', {'k': 2})
        self.assertIsInstance(forecaster, tsshap.MovingAverage)
        self.assertEqual(forecaster.params, {'k': 2})

    def test_unknown_forecaster(self):

        with self.assertRaises(exceptions.UnknownForecaster):
            tsshap.Forecaster.find('prophet-but-not-really')

    def test_fit_predict(self):

        series = daily([1.0, 2.0, 3.0, 4.0])

        path = tsshap.SeasonalNaive(m=2).fit(series).predict(3)

        self.assertEqual(path.origin, 4)
        self.assertEqual(path.tolist(), [3.0, 4.0, 3.0])

    def test_predict_from_history(self):

        series = daily([1.0, 2.0, 3.0, 4.0])
        forecaster = tsshap.Naive().fit(series.head(2))

        self.assertEqual(forecaster.predict(1).tolist(), [2.0])
        self.assertEqual(forecaster.predict(1, history=series).tolist(), [4.0])

    def test_not_fitted(self):

        with self.assertRaises(exceptions.NotFitted):
            tsshap.Naive().predict(1)

    def test_clone_is_unfitted(self):

        forecaster = tsshap.SimpleExponentialSmoothing(alpha=0.3).fit(daily([1.0, 2.0]))
        clone = forecaster.clone()

        self.assertTrue(forecaster.fitted)
        self.assertFalse(clone.fitted)
        self.assertEqual(clone.params, {'alpha': 0.3})

    def test_fit_validates_history(self):

        with self.assertRaises(exceptions.SeasonTooLong):
            tsshap.SeasonalNaive(m=12).fit(daily(np.arange(5.0)))

    def test_non_finite_forecast(self):

        class Broken(tsshap.Forecaster):
            def _fit(self, history):
                pass

            def _predict(self, history, horizon, future_regressors):
                return [float('nan')] * horizon

        with self.assertRaises(exceptions.NonFiniteForecast):
            Broken().fit(daily([1.0])).predict(2)
