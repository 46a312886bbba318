import unittest

import io
import json
import os
import tempfile
import zipfile

import tsshap
from tsshap import datasets
from tsshap import exceptions
from tsshap import report
from tsshap.config import ForecasterSpec

UNEMPLOYMENT = b"observation_date,UNRATE\n2020-01-01,3.5\n2020-02-01,3.6\n2020-03-01,4.4\n"

def bike_sharing() -> bytes:
    buffer = io.BytesIO()
    with zipfile.ZipFile(buffer, 'w') as archive:
        archive.writestr('day.csv', (
            "instant,dteday,temp,hum,windspeed,cnt\n"
            "1,2011-01-01,0.34,0.80,0.16,985\n"
            "2,2011-01-02,0.36,0.69,0.25,801\n"
        ))
    return buffer.getvalue()

class Test_Datasets(unittest.TestCase):

    def test_find(self):

        self.assertEqual(datasets.find('US-Unemployment').periodicity, 'monthly')
        self.assertEqual(set(datasets.DATASETS), {'us-unemployment', 'bike-sharing', 'peyton-manning'})

        with self.assertRaises(exceptions.UnknownDataset):
            datasets.find('airline-passengers')

    def test_fetch_pins_the_checksum(self):

        with tempfile.TemporaryDirectory() as directory:
            path = datasets.fetch('us-unemployment', directory, fetcher=lambda url: UNEMPLOYMENT)

            self.assertEqual(path, os.path.join(directory, 'us-unemployment.csv'))
            series = tsshap.read_csv(path)
            self.assertEqual(series.values.tolist(), [3.5, 3.6, 4.4])
            self.assertEqual(series.periodicity, tsshap.Periodicity.MONTHLY)

            with open(os.path.join(directory, datasets.CHECKSUMS_FILE)) as handle:
                pinned = json.load(handle)
            self.assertEqual(list(pinned), ['us-unemployment'])

            datasets.fetch('us-unemployment', directory, fetcher=lambda url: UNEMPLOYMENT)
            with self.assertRaises(exceptions.ChecksumMismatch):
                datasets.fetch('us-unemployment', directory, fetcher=lambda url: UNEMPLOYMENT + b"2020-04-01,14.8\n")

    def test_bike_sharing_regressors(self):

        with tempfile.TemporaryDirectory() as directory:
            series = tsshap.read_csv(datasets.fetch('bike-sharing', directory, fetcher=lambda url: bike_sharing()))

        self.assertEqual(series.values.tolist(), [985.0, 801.0])
        self.assertEqual(list(series.regressors), ['temp', 'hum', 'windspeed'])
        self.assertEqual(series.periodicity, tsshap.Periodicity.DAILY)

    def test_peyton_manning_missing_days(self):

        raw = b'"ds","y"\n"2008-01-01",7.5\n"2008-01-03",8.0\n'

        with tempfile.TemporaryDirectory() as directory:
            series = tsshap.read_csv(datasets.fetch('peyton-manning', directory, fetcher=lambda url: raw))

        self.assertEqual(series.values.tolist(), [7.5, 7.5, 8.0])

    def test_download_failure(self):

        with self.assertRaises(exceptions.InputUnreadable):
            datasets.download('file:///does/not/exist.csv')

@unittest.skipUnless(os.environ.get('TSSHAP_NETWORK_TESTS'), 'Set TSSHAP_NETWORK_TESTS to download the public datasets')
class Test_PublicDatasetFidelity(unittest.TestCase):
    """ The surrogate mimics the interpretable forecasters on the public datasets with MASE at most 0.5 """

    CASES = {
        'us-unemployment': (12, 6),
        'bike-sharing': (7, 7),
    }

    @classmethod
    def setUpClass(cls):
        cls.directory = tempfile.TemporaryDirectory()
        cls.paths = {name: datasets.fetch(name, cls.directory.name) for name in cls.CASES}

    @classmethod
    def tearDownClass(cls):
        cls.directory.cleanup()

    def test_interpretable_forecasters(self):

        for name, (m, horizon) in self.CASES.items():
            forecasters = {
                'naive': {},
                'seasonal-naive': {'m': m},
                'moving-average': {'k': 6},
            }

            for forecaster, params in forecasters.items():
                with self.subTest(dataset=name, forecaster=forecaster):
                    config = tsshap.RunConfig(
                        input=self.paths[name],
                        forecaster=ForecasterSpec(forecaster, params),
                        horizon=horizon,
                        features=tsshap.FeatureConfig(lags=(1, 2, 3), seasonal_lags=(1, m), rolling_windows=(6,)),
                        robustness_enabled=False,
                        scopes=(),
                        plots=False,
                    )

                    fidelity = report.build_report(config).fidelity

                    self.assertIsNotNone(fidelity.mase)
                    self.assertLessEqual(fidelity.mase, 0.5)
