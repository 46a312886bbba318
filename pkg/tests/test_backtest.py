import unittest

import os
import tempfile

import numpy as np
import pandas as pd

import tsshap
from tsshap import exceptions

from . import daily, seasonal

class Test_Backtest(unittest.TestCase):

    def setUp(self):
        self.series = daily(np.arange(1.0, 11.0))

    def test_naive_two_splits(self):

        result = tsshap.run_backtest(
            self.series,
            tsshap.Naive(),
            2,
            tsshap.SplitterConfig(initial_train=6, step=2)
        )

        self.assertEqual(result.step(1).to_dict(), {6: 6.0, 8: 8.0})
        self.assertEqual(result.step(2).to_dict(), {7: 6.0, 9: 8.0})
        self.assertEqual(result.coverage, range(6, 10))

    def test_per_step_series_is_undefined_outside_tests(self):

        result = tsshap.run_backtest(self.series, tsshap.Naive(), 2, tsshap.SplitterConfig(initial_train=6, step=2))
        values = result.per_step_series

        self.assertEqual(values.shape, (2, 10))
        self.assertTrue(np.isnan(values[0, :6]).all())
        self.assertTrue(np.isnan(values[0, 7]))

    def test_frame(self):

        result = tsshap.run_backtest(self.series, tsshap.Naive(), 2, tsshap.SplitterConfig(initial_train=6, step=2))
        frame = result.to_frame()

        self.assertEqual(list(frame.columns), ['step-1', 'step-2'])
        self.assertEqual(list(frame.index), [6, 7, 8, 9])

        with tempfile.TemporaryDirectory() as directory:
            path = os.path.join(directory, 'backtest.csv')
            result.to_csv(path)
            loaded = pd.read_csv(path, index_col='t')

        self.assertEqual(loaded.loc[8, 'step-1'], 8.0)

    def test_horizon_too_long(self):

        with self.assertRaises(exceptions.SplitExhausted):
            tsshap.run_backtest(self.series, tsshap.Naive(), 20)

    def test_step_out_of_range(self):

        result = tsshap.run_backtest(self.series, tsshap.Naive(), 2)
        with self.assertRaises(exceptions.HorizonOutOfRange):
            result.step(3)

    def test_forecaster_is_not_fit_in_place(self):

        forecaster = tsshap.Naive()
        tsshap.run_backtest(self.series, forecaster, 2)
        self.assertFalse(forecaster.fitted)

    def test_worker_pool_matches_sequential(self):

        series = daily(seasonal(60))
        config = tsshap.SplitterConfig(step=1)

        sequential = tsshap.run_backtest(series, tsshap.MovingAverage(k=3), 3, config)
        pooled = tsshap.run_backtest(
            series, tsshap.MovingAverage(k=3), 3, config, workers=tsshap.WorkerPoolConfig(max_workers=2)
        )

        np.testing.assert_array_equal(sequential.per_step_series, pooled.per_step_series)

    def test_splits_do_not_read_their_test_windows(self):

        series = daily(seasonal(60))
        config = tsshap.SplitterConfig(initial_train=30, step=3)
        forecasters = {
            'refit': tsshap.SimpleExponentialSmoothing(alpha=0.5),
            'fit-once': tsshap.GbtReduction(tsshap.FeatureConfig(lags=(1, 2)), tsshap.GbtParams(n_trees=5, min_samples_leaf=2)),
        }

        for name, forecaster in forecasters.items():
            with self.subTest(name):
                result = tsshap.run_backtest(series, forecaster, 2, config)
                self.assertFalse(forecaster.fitted)

                for i, split in enumerate(result.splits):
                    values = series.values.copy()
                    values[split.train_end:] += 100.0
                    altered = tsshap.run_backtest(series.with_values(values), forecaster, 2, config)

                    for before, after in zip(result.paths[:i + 1], altered.paths[:i + 1]):
                        self.assertEqual(before.values.tobytes(), after.values.tobytes())

class Test_Fidelity(unittest.TestCase):

    def test_identical(self):

        report = tsshap.fidelity_metrics([2, 4], [2, 4], [1, 2, 3])

        self.assertEqual(report.to_dict(), {'MAE': 0.0, 'RMSE': 0.0, 'MAPE': 0.0, 'MASE': 0.0})

    def test_hand_computed(self):

        report = tsshap.fidelity_metrics([2, 4], [3, 3], [1, 2, 3])

        self.assertAlmostEqual(report.mae, 1.0)
        self.assertAlmostEqual(report.rmse, 1.0)
        self.assertAlmostEqual(report.mape, 0.375)

    def test_mase(self):

        report = tsshap.fidelity_metrics([4], [6], daily([1.0, 2.0, 3.0]))

        self.assertAlmostEqual(report.mase, 2.0)

    def test_mase_undefined_for_flat_insample(self):

        report = tsshap.fidelity_metrics([4], [6], [3, 3, 3])
        self.assertIsNone(report.mase)

    def test_all_reference_zero(self):

        with self.assertRaises(exceptions.AllReferenceZero):
            tsshap.fidelity_metrics([0, 0], [1, 1], [1, 2, 3])

    def test_length_mismatch(self):

        with self.assertRaises(exceptions.LengthMismatch):
            tsshap.fidelity_metrics([1, 2], [1], [1, 2, 3])
