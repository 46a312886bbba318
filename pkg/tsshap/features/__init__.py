from .calendar import DATE_FEATURES, TIME_FEATURES, HolidayCalendar, encode_index, encode_timestamp
from .config import FeatureConfig, HolidayConfig
from .builder import FeatureMatrix, build_features, forecast_row, extend_with_prediction
