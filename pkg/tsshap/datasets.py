""" The public datasets - downloaded, converted to the ingestion CSV format and pinned by checksum """

import dataclasses
import hashlib
import io
import json
import os
import urllib.request
import zipfile
from typing import Callable, Dict, Optional

import pandas as pd

from .callbacks import AbstractCallback, DefaultCallback
from .types import StrOrPathLike
from . import exceptions

import logging
log = logging.getLogger(__name__)

CHECKSUMS_FILE = "checksums.json"
CHUNK_SIZE = 64 * 1024

@dataclasses.dataclass(frozen=True)
class Dataset:
    """ A public dataset

    Args:
        name: The name used on the command line
        url: Where the raw data is downloaded from
        description: One line summary
        periodicity: The periodicity of the converted series
        convert: Converts the raw download into a frame with `timestamp`, `value` and regressor columns
    """
    name: str
    url: str
    description: str
    periodicity: str
    convert: Callable[[bytes], pd.DataFrame]

def _convert_unemployment(raw: bytes) -> pd.DataFrame:
    frame = pd.read_csv(io.BytesIO(raw))
    frame.columns = ["timestamp", "value"]
    frame["value"] = pd.to_numeric(frame["value"], errors="coerce")
    return frame.dropna()

def _convert_bike_sharing(raw: bytes) -> pd.DataFrame:
    with zipfile.ZipFile(io.BytesIO(raw)) as archive:
        with archive.open("day.csv") as handle:
            frame = pd.read_csv(handle)
    return pd.DataFrame({
        "timestamp": frame["dteday"],
        "value": frame["cnt"].astype(float),
        "temp": frame["temp"],
        "hum": frame["hum"],
        "windspeed": frame["windspeed"],
    })

def _convert_peyton_manning(raw: bytes) -> pd.DataFrame:
    frame = pd.read_csv(io.BytesIO(raw), parse_dates=["ds"])
    series = frame.set_index("ds")["y"]
    # The page view log has missing days - reindex daily and carry the last observation forward
    series = series.reindex(pd.date_range(series.index.min(), series.index.max(), freq="D")).ffill()
    return pd.DataFrame({"timestamp": series.index.strftime("%Y-%m-%d"), "value": series.to_numpy()})

DATASETS: Dict[str, Dataset] = {
    dataset.name: dataset
    for dataset in (
        Dataset(
            name="us-unemployment",
            url="https://fred.stlouisfed.org/graph/fredgraph.csv?id=UNRATE",
            description="Monthly US civilian unemployment rate",
            periodicity="monthly",
            convert=_convert_unemployment,
        ),
        Dataset(
            name="bike-sharing",
            url="https://archive.ics.uci.edu/static/public/275/bike+sharing+dataset.zip",
            description="Daily bike rentals in Washington D.C. with temperature, humidity and wind speed regressors",
            periodicity="daily",
            convert=_convert_bike_sharing,
        ),
        Dataset(
            name="peyton-manning",
            url="https://raw.githubusercontent.com/facebook/prophet/main/examples/example_wp_log_peyton_manning.csv",
            description="Daily log page views of the Wikipedia article on Peyton Manning",
            periodicity="daily",
            convert=_convert_peyton_manning,
        ),
    )
}

def find(name: str) -> Dataset:
    """ Raises UnknownDataset when no dataset has the name """
    try:
        return DATASETS[name.lower()]
    except KeyError:
        raise exceptions.UnknownDataset(f"No dataset called '{name}' - available datasets are {sorted(DATASETS)}") from None

def download(url: str, callback: AbstractCallback = DefaultCallback()) -> bytes:
    """ Download a url into memory reporting the bytes transferred """
    try:
        with urllib.request.urlopen(url, timeout=60) as response:
            length = response.headers.get("Content-Length")
            transfer = callback.get_bytes_transfer(url, int(length) if length else None)
            buffer = io.BytesIO()
            while True:
                chunk = response.read(CHUNK_SIZE)
                if not chunk:
                    break
                buffer.write(chunk)
                transfer(len(chunk))
    except OSError as e:
        raise exceptions.InputUnreadable(f"Could not download {url}: {e}") from e
    return buffer.getvalue()

def _read_checksums(directory: str) -> Dict[str, str]:
    path = os.path.join(directory, CHECKSUMS_FILE)
    if not os.path.exists(path):
        return {}
    with open(path, "r", encoding="utf-8") as handle:
        return json.load(handle)

def _write_checksums(directory: str, checksums: Dict[str, str]):
    with open(os.path.join(directory, CHECKSUMS_FILE), "w", encoding="utf-8") as handle:
        json.dump(checksums, handle, indent=2, sort_keys=True)

def fetch(
    name: str,
    destination: StrOrPathLike = ".",
    callback: AbstractCallback = DefaultCallback(),
    fetcher: Optional[Callable[[str], bytes]] = None,
    ) -> str:
    """ Download a public dataset and write it as `<destination>/<name>.csv`

    The SHA-256 of the raw download is pinned in `<destination>/checksums.json` the first time the dataset is fetched;
    later fetches must match it.

    Args:
        name: The dataset name
        destination: The directory to write to
        callback: Progress callback for the download
        fetcher: Replaces the network download - takes the url and returns the raw bytes

    Returns:
        str: The path of the converted CSV

    Raises:
        UnknownDataset: No dataset has the name
        ChecksumMismatch: The download does not match the pinned checksum
    """
    dataset = find(name)
    directory = os.fspath(destination)
    os.makedirs(directory, exist_ok=True)

    log.debug("Fetching dataset %s from %s", dataset.name, dataset.url)
    raw = fetcher(dataset.url) if fetcher is not None else download(dataset.url, callback)
    digest = hashlib.sha256(raw).hexdigest()

    checksums = _read_checksums(directory)
    pinned = checksums.get(dataset.name)
    if pinned is None:
        log.debug("Pinning dataset %s checksum %s", dataset.name, digest)
        checksums[dataset.name] = digest
        _write_checksums(directory, checksums)
    elif pinned != digest:
        raise exceptions.ChecksumMismatch(
            f"Dataset '{dataset.name}' has checksum {digest} but {pinned} was pinned on first fetch"
        )

    path = os.path.join(directory, f"{dataset.name}.csv")
    dataset.convert(raw).to_csv(path, index=False)
    return path
