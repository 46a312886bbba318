import unittest
import unittest.mock

import datetime

import tsshap
import tsshap.utils
from tsshap import exceptions
from tsshap.forecaster import ENTRY_POINT_GROUP

UTC = datetime.timezone.utc

class Drift(tsshap.Forecaster):

    def _fit(self, history):
        pass

    def _predict(self, history, horizon, future_regressors):
        return [history.values[-1] + step for step in range(1, horizon + 1)]

class Resource:

    def __init__(self, name: str, target=Drift):
        self.name = name
        self._target = target

    def load(self):
        if isinstance(self._target, Exception):
            raise self._target
        return self._target

class Test_UtilFunctions(unittest.TestCase):

    def test_timestamps(self):

        self.assertEqual(tsshap.utils.timestampToDatetime('2020-01-01'), datetime.datetime(2020, 1, 1, tzinfo=UTC))
        self.assertEqual(tsshap.utils.timestampToDatetime(0), datetime.datetime(1970, 1, 1, tzinfo=UTC))
        self.assertEqual(
            tsshap.utils.timestampToDatetime('2020-01-01T05:00:00.250+05:00'),
            datetime.datetime(2020, 1, 1, tzinfo=UTC),
        )

    def test_add_months(self):

        self.assertEqual(tsshap.utils.addMonths(datetime.datetime(2020, 1, 31), 1), datetime.datetime(2020, 2, 29))
        self.assertEqual(tsshap.utils.addMonths(datetime.datetime(2020, 2, 29), 1), datetime.datetime(2020, 3, 31))
        self.assertEqual(tsshap.utils.addMonths(datetime.datetime(2020, 1, 15), 13), datetime.datetime(2021, 2, 15))
        self.assertEqual(tsshap.utils.addMonths(datetime.datetime(2020, 1, 30), 1), datetime.datetime(2020, 2, 29))
        self.assertEqual(tsshap.utils.addMonths(datetime.datetime(2020, 1, 30), 2), datetime.datetime(2020, 3, 30))
        self.assertEqual(
            tsshap.utils.addMonths(datetime.datetime(2019, 2, 28), 1, monthEnd=False),
            datetime.datetime(2019, 3, 28)
        )

    def test_advance_steps_from_the_anchor(self):

        anchor = datetime.datetime(2019, 1, 30, tzinfo=UTC)
        stepped = [tsshap.utils.advance(anchor, tsshap.Periodicity.MONTHLY, i) for i in range(4)]
        self.assertEqual([stamp.day for stamp in stepped], [30, 28, 30, 30])

    def test_infer_periodicity(self):

        start = datetime.datetime(2020, 1, 1, tzinfo=UTC)

        self.assertEqual(tsshap.utils.inferPeriodicity(start, start + datetime.timedelta(hours=1)), tsshap.Periodicity.HOURLY)
        self.assertEqual(tsshap.utils.inferPeriodicity(start, start + datetime.timedelta(days=7)), tsshap.Periodicity.WEEKLY)
        self.assertEqual(tsshap.utils.inferPeriodicity(start, datetime.datetime(2020, 2, 1, tzinfo=UTC)), tsshap.Periodicity.MONTHLY)
        self.assertIsNone(tsshap.utils.inferPeriodicity(start, start + datetime.timedelta(days=3)))
        self.assertEqual(
            tsshap.utils.inferPeriodicity(datetime.datetime(2019, 4, 30, tzinfo=UTC), datetime.datetime(2019, 5, 30, tzinfo=UTC)),
            tsshap.Periodicity.MONTHLY
        )
        self.assertEqual(
            tsshap.utils.inferPeriodicity(datetime.datetime(2019, 4, 30, tzinfo=UTC), datetime.datetime(2019, 5, 31, tzinfo=UTC)),
            tsshap.Periodicity.MONTHLY
        )

class Test_ForecasterPlugins(unittest.TestCase):

    def setUp(self) -> None:
        self.patcher = unittest.mock.patch('tsshap.forecaster.forecaster.metadata.entry_points')
        self.entry_points = self.patcher.start()
        self.entry_points.side_effect = lambda group: [Resource('drift'), Resource('broken', ImportError('missing'))]

    def tearDown(self) -> None:
        self.patcher.stop()

    def test_find_plugin(self):

        self.assertIs(tsshap.Forecaster.find('Drift'), Drift)
        self.entry_points.assert_called_with(group=ENTRY_POINT_GROUP)

        forecaster = tsshap.Forecaster.create('drift').fit(tsshap.make_series(['2020-01-01', '2020-01-02'], [1.0, 2.0], 'daily'))
        self.assertEqual(forecaster.predict(2).tolist(), [3.0, 4.0])

    def test_builtins_do_not_load_plugins(self):

        self.assertIs(tsshap.Forecaster.find('naive'), tsshap.Naive)
        self.assertEqual(self.entry_points.call_count, 0)

    def test_broken_plugin_is_skipped(self):

        available = tsshap.Forecaster.available()

        self.assertIn('drift', available)
        self.assertNotIn('broken', available)

        with self.assertRaises(exceptions.UnknownForecaster):
            tsshap.Forecaster.find('broken')
