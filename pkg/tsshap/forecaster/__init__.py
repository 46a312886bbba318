from .forecaster import Forecaster, ForecastPath, ENTRY_POINT_GROUP
