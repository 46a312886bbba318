import unittest

import os
import tempfile

import tsshap
from tsshap import exceptions

from . import ETC_DIR

MINIMAL = {
    'input': 'series.csv',
    'forecaster': 'naive',
    'horizon': 3,
}

def config(**changes) -> tsshap.RunConfig:
    return tsshap.RunConfig.from_dict({**MINIMAL, **changes})

class Test_RunConfig(unittest.TestCase):

    def test_example(self):

        example = tsshap.RunConfig.load(os.path.join(ETC_DIR, 'example.yaml'))

        self.assertEqual(
            os.path.normpath(example.input),
            os.path.normpath(os.path.join(os.path.abspath(ETC_DIR), '..', 'data', 'us-unemployment.csv')),
        )
        self.assertEqual(example.forecaster, tsshap.ForecasterSpec('seasonal-naive', {'m': 12}))
        self.assertEqual(example.periodicity, tsshap.Periodicity.MONTHLY)
        self.assertEqual(example.features.seasonal_lags, (1, 12))
        self.assertEqual(example.local_steps, (1, 6))
        self.assertEqual(example.semi_local_interval, (1, 6))
        self.assertEqual(example.curve_scopes, (tsshap.Scope.GLOBAL, tsshap.Scope.LOCAL))
        self.assertTrue(example.robustness_enabled)
        self.assertEqual(example.workers, 0)

    def test_defaults(self):

        minimal = config()

        self.assertEqual(minimal.forecaster.name, 'naive')
        self.assertIsNone(minimal.periodicity)
        self.assertEqual(minimal.scopes, tuple(tsshap.Scope))
        self.assertEqual(minimal.local_steps, (1, 2, 3))
        self.assertEqual(minimal.semi_local_interval, (1, 3))
        self.assertEqual(minimal.features, tsshap.FeatureConfig())
        self.assertEqual(minimal.output, 'tsshap-output')

    def test_sections(self):

        parsed = config(
            robustness={'enabled': False, 'n_perturbations': 5},
            explanations={'scopes': ['semilocal'], 'interval': [2, 3]},
            splitter={'initial_train': 40},
            gbt={'n_trees': 10},
        )

        self.assertFalse(parsed.robustness_enabled)
        self.assertEqual(parsed.robustness.n_perturbations, 5)
        self.assertEqual(parsed.scopes, (tsshap.Scope.SEMI_LOCAL,))
        self.assertEqual(parsed.interval, (2, 3))
        self.assertEqual(parsed.splitter.initial_train, 40)
        self.assertEqual(parsed.gbt.n_trees, 10)

    def test_invalid(self):

        invalid = [
            {'unknown': 1},
            {'explanations': {'scope': ['local']}},
            {'horizon': 0},
            {'horizon': 'three'},
            {'forecaster': 'prophet'},
            {'explanations': {'steps': [4]}},
            {'explanations': {'interval': [3, 1]}},
            {'curves': {'features': ['value(t-9)']}},
            {'curves': {'grid_size': 1}},
            {'gbt': {'n_trees': 0}},
            {'gbt': {'trees': 10}},
            {'features': {'lags': [0]}},
            {'periodicity': 'yearly'},
            {'workers': -1},
        ]

        for changes in invalid:
            with self.subTest(**changes):
                with self.assertRaises(exceptions.ConfigInvalid):
                    config(**changes)

        with self.assertRaises(exceptions.ConfigInvalid):
            tsshap.RunConfig.from_dict({'forecaster': 'naive', 'horizon': 3})

        with self.assertRaises(exceptions.ConfigInvalid):
            tsshap.RunConfig.from_dict(['input', 'series.csv'])

    def test_load(self):

        with tempfile.TemporaryDirectory() as directory:
            path = os.path.join(directory, 'config.yaml')

            with open(path, 'w') as handle:
                handle.write('input: series.csv\nforecaster: {name: moving-average, params: {k: 3}}\nhorizon: 2\n')
            loaded = tsshap.RunConfig.load(path)
            self.assertEqual(loaded.input, os.path.join(directory, 'series.csv'))
            self.assertEqual(loaded.forecaster.params, {'k': 3})

            with open(path, 'w') as handle:
                handle.write('input: [unclosed\n')
            with self.assertRaises(exceptions.ConfigInvalid):
                tsshap.RunConfig.load(path)

        with self.assertRaises(exceptions.InputUnreadable):
            tsshap.RunConfig.load('/does/not/exist.yaml')

    def test_override(self):

        overridden = config().override(seed=7, output='elsewhere', workers=None)

        self.assertEqual(overridden.gbt.seed, 7)
        self.assertEqual(overridden.robustness.seed, 7)
        self.assertEqual(overridden.output, 'elsewhere')
        self.assertEqual(overridden.workers, 0)

    def test_hash(self):

        original = config()

        self.assertEqual(original.hash(), config().override(output='other', workers=4).hash())
        self.assertNotEqual(original.hash(), original.override(seed=1).hash())
        self.assertEqual(tsshap.RunConfig.from_dict(original.to_dict()).hash(), original.hash())

    def test_reduction_takes_the_run_features(self):

        parsed = config(forecaster={'name': 'gbt-reduction'}, features={'lags': [1, 2]}, gbt={'n_trees': 5})

        forecaster = parsed.forecaster.create(parsed.features, parsed.gbt)

        self.assertIsInstance(forecaster, tsshap.GbtReduction)
        self.assertEqual(forecaster.feature_config.lags, (1, 2))
        self.assertEqual(forecaster.gbt_params.n_trees, 5)
