import json
import sys
from typing import Optional, Tuple

import click
from click_option_group import optgroup

import logging

from .callbacks import DefaultCallback, ProgressCallback
from .config import RunConfig
from .explainer import ExplanationRequest
from .types import Scope
from .worker_config import WorkerPoolConfig
from . import datasets as datasets_
from . import report
from . import exceptions

log = logging.getLogger(__name__)

# Exit codes by error family - the first matching family wins
EXIT_CODES = (
    (exceptions.ConfigInvalid, 2),
    (exceptions.InputUnreadable, 3),
    (exceptions.SeriesError, 4),
    (exceptions.UnknownDataset, 6),
    (exceptions.ChecksumMismatch, 6),
    (exceptions.TsShapError, 5),
)

def exit_code(error: BaseException) -> int:
    for family, code in EXIT_CODES:
        if isinstance(error, family):
            return code
    return 1

def fail(error: BaseException, code: Optional[int] = None):
    """ Report an error on stderr and exit with the code of its family """
    code = exit_code(error) if code is None else code
    log.debug("Exiting with code %s", code, exc_info=error)
    click.echo(f"Error: {error}", err=True)
    sys.exit(code)

def load_config(path: str, **overrides) -> RunConfig:
    try:
        return RunConfig.load(path).override(**overrides)
    except exceptions.TsShapError as e:
        fail(e)

SCOPE_CHOICE = click.Choice(['local', 'semilocal', 'semi_local', 'global'], case_sensitive=False)

@click.group()
@click.option('--debug/--no-debug', default=False)
@click.pass_context
def cli(ctx: click.Context, debug: bool):
    """Explain black-box time series forecasts.

    A surrogate tree ensemble is trained on the forecaster's backtested forecasts and its recursive forecasts are
    attributed to interpretable features (lags, rolling statistics, calendar encodings, holidays and trend terms)
    with exact TreeSHAP values at local, semi-local and global scope.

    \b
    Examples:
        >>> tsshap datasets fetch us-unemployment --dest data
        >>> tsshap run --config etc/example.yaml --out results --seed 7
        >>> tsshap explain --config etc/example.yaml --scope local --step 3
    """

    if debug:
        tsshap_logger = logging.getLogger('tsshap')
        tsshap_handler = logging.StreamHandler()
        tsshap_handler.setFormatter(logging.Formatter("%(name)s::%(levelname)s::%(message)s"))
        tsshap_handler.setLevel(logging.DEBUG)
        tsshap_logger.setLevel(logging.DEBUG)
        tsshap_logger.addHandler(tsshap_handler)

    # Route every default callback to progress bars
    DefaultCallback.become(ProgressCallback())

    ctx.obj = {'debug': debug}

@cli.command()
@click.option('-c', '--config', 'configPath', required=True, type=click.Path(dir_okay=False), help='The YAML run configuration')
@optgroup.group('Overrides', help='Replace values of the run configuration')
@optgroup.option('-o', '--out', default=None, help='The output directory')
@optgroup.option('-s', '--seed', type=int, default=None, help='Seed of the surrogate and the perturbations')
@optgroup.option('--no-robustness', is_flag=True, default=False, help='Skip the robustness metrics')
@optgroup.option('--impute/--no-impute', default=None, help='Forward fill missing values in the input')
@optgroup.option('-w', '--workers', type=int, default=None, help='Worker pool size - 0 runs sequentially')
def run(configPath: str, out: Optional[str], seed: Optional[int], no_robustness: bool, impute: Optional[bool], workers: Optional[int]):
    """ Run the configured pipeline and write report.json and the SVG plots """
    config = load_config(
        configPath,
        output=out,
        seed=seed,
        impute=impute,
        workers=workers,
        robustness_enabled=False if no_robustness else None,
    )

    try:
        result = report.run(config)
    except exceptions.TsShapError as e:
        fail(e)
    except Exception as e:
        fail(e, 1)

    fidelity = result.fidelity.to_dict()
    click.echo(f"Wrote {config.output}/{report.REPORT_FILE} (config {result.metadata['config_hash'][:12]})")
    click.echo("Surrogate fidelity: " + " ".join(f"{key}={value:.4g}" for key, value in fidelity.items() if value is not None))

@cli.command()
@click.option('-c', '--config', 'configPath', required=True, type=click.Path(dir_okay=False), help='The YAML run configuration')
@click.option('--scope', type=SCOPE_CHOICE, default='global', help='The explanation scope')
@click.option('--step', type=int, default=1, help='The horizon step of a local explanation')
@click.option('--interval', type=(int, int), default=None, help='The first and last steps of a semi-local explanation')
@click.option('-s', '--seed', type=int, default=None, help='Seed of the surrogate')
def explain(configPath: str, scope: str, step: int, interval: Optional[Tuple[int, int]], seed: Optional[int]):
    """ Print one explanation as JSON """
    config = load_config(configPath, seed=seed)

    try:
        fitted = report.fit(config)
        explanation = ExplanationRequest(Scope.convert(scope), step, interval).explain(fitted.model, fitted.series)
    except exceptions.TsShapError as e:
        fail(e)
    except Exception as e:
        fail(e, 1)
    finally:
        WorkerPoolConfig.shutdown()

    click.echo(json.dumps(explanation.to_dict(), sort_keys=True, indent=2))

@cli.group()
def datasets():
    """ The public datasets """
    pass

@datasets.command('list')
def list_():
    """ List the public datasets """
    for dataset in datasets_.DATASETS.values():
        click.echo(f"{dataset.name:<18}{dataset.periodicity:<9}{dataset.description}")

@datasets.command()
@click.argument('name')
@click.option('-d', '--dest', default='.', type=click.Path(file_okay=False), help='The directory to write the dataset to')
def fetch(name: str, dest: str):
    """ Download a public dataset as an ingestion CSV """
    try:
        path = datasets_.fetch(name, dest)
    except (exceptions.UnknownDataset, exceptions.ChecksumMismatch, exceptions.InputUnreadable) as e:
        fail(e, 6)
    click.echo(path)

if __name__ == '__main__':
    cli()
