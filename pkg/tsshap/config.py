""" The YAML run configuration driving `tsshap run` and `tsshap explain` """

import dataclasses
import hashlib
import json
import os
from typing import Any, Dict, Mapping, Optional, Tuple

import yaml

from .features import FeatureConfig
from .forecaster import Forecaster
from .forecasters import GbtReduction
from .robustness import RobustnessConfig
from .series import SplitterConfig
from .surrogate import GbtParams
from .types import Periodicity, Scope, StrOrPathLike
from . import exceptions

import logging
log = logging.getLogger(__name__)

# Fields that do not change what is computed and are excluded from the config hash
NON_SEMANTIC_FIELDS = ("output", "workers")

@dataclasses.dataclass(frozen=True)
class ForecasterSpec:
    """ A forecaster name and its hyperparameters """
    name: str
    params: Mapping[str, Any] = dataclasses.field(default_factory=dict)

    def create(self, features: FeatureConfig, gbt: GbtParams) -> Forecaster:
        """ Initialise the forecaster - the reduction forecaster defaults to the run's features and gbt settings """
        params = dict(self.params)
        if issubclass(Forecaster.find(self.name), GbtReduction):
            params.setdefault("feature_config", features)
            params.setdefault("gbt_params", gbt)
        return Forecaster.create(self.name, params)

@dataclasses.dataclass(frozen=True)
class RunConfig:
    """ Everything a run needs - see docs/cli.md for the YAML schema

    Args:
        input: The ingestion CSV
        forecaster: The forecaster to explain
        horizon: The forecast horizon H
        periodicity: The series periodicity - inferred from the timestamps when omitted
        impute: Forward fill missing values instead of rejecting them
        features: The surrogate's interpretable features
        gbt: The surrogate's boosting hyperparameters
        splitter: The backtest splitter settings
        robustness: The perturbation settings
        robustness_enabled: Evaluate the robustness metrics
        scopes: The explanation scopes to report
        steps: The horizon steps of the local explanations - defaults to every step
        interval: The steps of the semi-local explanation - defaults to the whole horizon
        curve_features: Features to compute dependence curves for
        curve_scopes: The scopes of the dependence curves
        grid_size: The number of points of a dependence curve grid
        plots: Render SVG plots next to the report
        output: The output directory
        workers: 0 to run sequentially, otherwise the worker pool size
    """
    input: str
    forecaster: ForecasterSpec
    horizon: int
    periodicity: Optional[Periodicity] = None
    impute: bool = False
    features: FeatureConfig = dataclasses.field(default_factory=FeatureConfig)
    gbt: GbtParams = dataclasses.field(default_factory=GbtParams)
    splitter: SplitterConfig = dataclasses.field(default_factory=SplitterConfig)
    robustness: RobustnessConfig = dataclasses.field(default_factory=RobustnessConfig)
    robustness_enabled: bool = True
    scopes: Tuple[Scope, ...] = tuple(Scope)
    steps: Optional[Tuple[int, ...]] = None
    interval: Optional[Tuple[int, int]] = None
    curve_features: Tuple[str, ...] = ()
    curve_scopes: Tuple[Scope, ...] = (Scope.GLOBAL,)
    grid_size: int = 20
    plots: bool = True
    output: str = "tsshap-output"
    workers: int = 0

    def __post_init__(self):
        if isinstance(self.horizon, bool) or not isinstance(self.horizon, int) or self.horizon < 1:
            raise exceptions.ConfigInvalid(f"horizon must be a positive integer - got {self.horizon!r}")
        if self.grid_size < 2:
            raise exceptions.ConfigInvalid(f"grid_size must be at least 2 - got {self.grid_size}")
        if self.workers is not None and self.workers < 0:
            raise exceptions.ConfigInvalid(f"workers must be non-negative - got {self.workers}")

        for step in self.steps or ():
            if not 1 <= step <= self.horizon:
                raise exceptions.ConfigInvalid(f"Explanation step {step} is outside 1..{self.horizon}")
        if self.interval is not None:
            first, last = self.interval
            if not 1 <= first <= last <= self.horizon:
                raise exceptions.ConfigInvalid(f"Explanation interval {first}..{last} is not within 1..{self.horizon}")

        names = self.features.feature_names()
        unknown = [feature for feature in self.curve_features if feature not in names]
        if unknown:
            raise exceptions.ConfigInvalid(
                f"Dependence curves were requested for unknown features {unknown} - the features are {names}"
            )

        try:
            Forecaster.find(self.forecaster.name)
        except exceptions.UnknownForecaster as e:
            raise exceptions.ConfigInvalid(str(e)) from e

    @property
    def local_steps(self) -> Tuple[int, ...]:
        return self.steps or tuple(range(1, self.horizon + 1))

    @property
    def semi_local_interval(self) -> Tuple[int, int]:
        return self.interval or (1, self.horizon)

    @classmethod
    def from_dict(cls, document: Mapping[str, Any], base: Optional[StrOrPathLike] = None) -> "RunConfig":
        """ Parse a configuration document

        Args:
            document: The parsed YAML document
            base: Directory relative input paths are resolved against

        Raises:
            ConfigInvalid: Unknown keys, missing keys or invalid values
        """
        if not isinstance(document, Mapping):
            raise exceptions.ConfigInvalid("The configuration must be a mapping")
        document = dict(document)

        try:
            forecaster = document.pop("forecaster")
            if isinstance(forecaster, str):
                forecaster = {"name": forecaster}
            forecaster = ForecasterSpec(**forecaster)

            features = document.pop("features", {}) or {}
            holidays = features.get("holidays")
            if holidays and base is not None and not os.path.isabs(holidays["path"]):
                features = {**features, "holidays": {**holidays, "path": os.path.join(base, holidays["path"])}}

            robustness = dict(document.pop("robustness", {}) or {})
            enabled = robustness.pop("enabled", True)

            explanations = dict(document.pop("explanations", {}) or {})
            curves = dict(document.pop("curves", {}) or {})

            kwargs = {
                "input": document.pop("input"),
                "horizon": document.pop("horizon"),
                "forecaster": forecaster,
                "features": FeatureConfig.from_dict(features),
                "gbt": GbtParams.from_dict(document.pop("gbt", {}) or {}),
                "splitter": SplitterConfig(**(document.pop("splitter", {}) or {})),
                "robustness": RobustnessConfig.from_dict(robustness),
                "robustness_enabled": bool(enabled),
                "scopes": tuple(Scope.convert(scope) for scope in explanations.pop("scopes", list(Scope))),
                "steps": tuple(explanations.pop("steps", None) or ()) or None,
                "interval": tuple(explanations.pop("interval", None) or ()) or None,
                "curve_features": tuple(curves.pop("features", ()) or ()),
                "curve_scopes": tuple(Scope.convert(scope) for scope in curves.pop("scopes", [Scope.GLOBAL])),
                "grid_size": curves.pop("grid_size", 20),
            }
            if document.get("periodicity") is not None:
                kwargs["periodicity"] = Periodicity.convert(document.pop("periodicity"))
            document.pop("periodicity", None)
            for key in ("impute", "plots", "output", "workers"):
                if key in document:
                    kwargs[key] = document.pop(key)

            leftovers = {
                **{key: value for key, value in document.items()},
                **{f"explanations.{key}": value for key, value in explanations.items()},
                **{f"curves.{key}": value for key, value in curves.items()},
            }
            if leftovers:
                raise exceptions.ConfigInvalid(f"Unknown configuration keys {sorted(leftovers)}")

            if base is not None and not os.path.isabs(kwargs["input"]):
                kwargs["input"] = os.path.join(base, kwargs["input"])

            return cls(**kwargs)

        except exceptions.ConfigInvalid:
            raise
        except KeyError as e:
            raise exceptions.ConfigInvalid(f"Missing configuration key {e}") from e
        except (TypeError, ValueError, AttributeError) as e:
            raise exceptions.ConfigInvalid(f"Invalid configuration: {e}") from e

    @classmethod
    def load(cls, path: StrOrPathLike) -> "RunConfig":
        """ Read a YAML configuration file - relative paths inside it are relative to the file

        Raises:
            InputUnreadable: The file could not be read
            ConfigInvalid: The file is not valid YAML or not a valid configuration
        """
        try:
            with open(path, "r", encoding="utf-8") as handle:
                document = yaml.safe_load(handle)
        except OSError as e:
            raise exceptions.InputUnreadable(f"Could not read configuration '{path}': {e}") from e
        except yaml.YAMLError as e:
            raise exceptions.ConfigInvalid(f"Configuration '{path}' is not valid YAML: {e}") from e

        log.debug("Loaded configuration %s", path)
        return cls.from_dict(document or {}, base=os.path.dirname(os.path.abspath(path)))

    def override(self, **overrides) -> "RunConfig":
        """ A copy with command line overrides applied - None values are ignored """
        changes = {key: value for key, value in overrides.items() if value is not None}
        if "seed" in changes:
            seed = changes.pop("seed")
            changes["robustness"] = dataclasses.replace(self.robustness, seed=seed)
            changes["gbt"] = dataclasses.replace(self.gbt, seed=seed)
        try:
            return dataclasses.replace(self, **changes)
        except (TypeError, ValueError) as e:
            raise exceptions.ConfigInvalid(f"Invalid override: {e}") from e

    def to_dict(self) -> Dict[str, Any]:
        return {
            "input": self.input,
            "forecaster": {"name": self.forecaster.name, "params": _plain(self.forecaster.params)},
            "horizon": self.horizon,
            "periodicity": self.periodicity.value if self.periodicity else None,
            "impute": self.impute,
            "features": self.features.to_dict(),
            "gbt": self.gbt.to_dict(),
            "splitter": dataclasses.asdict(self.splitter),
            "robustness": {"enabled": self.robustness_enabled, **self.robustness.to_dict()},
            "explanations": {
                "scopes": [scope.value for scope in self.scopes],
                "steps": list(self.local_steps),
                "interval": list(self.semi_local_interval),
            },
            "curves": {
                "features": list(self.curve_features),
                "scopes": [scope.value for scope in self.curve_scopes],
                "grid_size": self.grid_size,
            },
            "plots": self.plots,
            "output": self.output,
            "workers": self.workers,
        }

    def hash(self) -> str:
        """ SHA-256 of the canonical JSON of every semantic field """
        semantic = {key: value for key, value in self.to_dict().items() if key not in NON_SEMANTIC_FIELDS}
        canonical = json.dumps(semantic, sort_keys=True, separators=(",", ":"), default=str)
        return hashlib.sha256(canonical.encode("utf-8")).hexdigest()

def _plain(value: Any) -> Any:
    """ Convert configuration objects nested in forecaster parameters to JSON compatible values """
    if dataclasses.is_dataclass(value) and not isinstance(value, type):
        return _plain(dataclasses.asdict(value))
    if isinstance(value, Mapping):
        return {str(key): _plain(item) for key, item in value.items()}
    if isinstance(value, (list, tuple)):
        return [_plain(item) for item in value]
    return value
