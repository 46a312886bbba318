import os
import enum
import typing

StrOrPathLike = typing.Union[str, os.PathLike[str]]
RegressorColumns = typing.Mapping[str, typing.Sequence[float]]

class Periodicity(enum.Enum):
    HOURLY = "hourly"
    DAILY = "daily"
    WEEKLY = "weekly"
    MONTHLY = "monthly"

    @classmethod
    def convert(cls, value: typing.Union["Periodicity", str]) -> "Periodicity":
        if isinstance(value, cls):
            return value
        try:
            return cls(str(value).lower())
        except ValueError:
            raise ValueError(f"Unknown periodicity '{value}' - expected one of {[p.value for p in cls]}")

class Scope(enum.Enum):
    LOCAL = "local"
    SEMI_LOCAL = "semi_local"
    GLOBAL = "global"

    @classmethod
    def convert(cls, value: typing.Union["Scope", str]) -> "Scope":
        if isinstance(value, cls):
            return value
        normalised = str(value).lower().replace("-", "_")
        if normalised == "semilocal":
            normalised = "semi_local"
        try:
            return cls(normalised)
        except ValueError:
            raise ValueError(f"Unknown scope '{value}' - expected local, semi_local or global")
