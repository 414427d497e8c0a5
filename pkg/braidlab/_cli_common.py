import sys
from typing import Any, Dict, Optional

import click

from ._text import load_config_document
from .config import OUTPUT_FORMATS, ConfigError, ExperimentConfig

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_CONFIG_ERROR = 2


class ConfigException(click.ClickException):
    """Configuration problems exit with the same status as usage errors."""

    exit_code = EXIT_CONFIG_ERROR


def click_yaml_cfg(*args, **kw):
    """
    @click_yaml_cfg("--custom-flag", help="Whatever help")
    """

    def _parse(ctx, param, value):
        if value is not None:
            try:
                return load_config_document(value)
            except Exception as e:
                raise ConfigException(str(e)) from None

    return click.option(*args, callback=_parse, **kw)


def setup_logging(level: int = -1):
    """
    Setup logging to print to stderr with default logging level being INFO.
    """
    import logging

    if level < 0:
        level = logging.INFO

    logging.basicConfig(
        level=level,
        format="[%(asctime)s] {%(filename)s:%(lineno)d} %(levelname)s - %(message)s",
        stream=sys.stderr,
    )


def experiment_options(f):
    """Options shared by every experiment command."""
    options = [
        click_yaml_cfg("--config", help="Experiment config, YAML/JSON file, URL or inline text"),
        click.option("--seed", type=click.IntRange(min=0), help="Random seed for sampled estimates"),
        click.option("--out", type=str, help="Output location, '-' for stdout (default)"),
        click.option("--format", "fmt", type=click.Choice(OUTPUT_FORMATS), help="Report format"),
        click.option(
            "--no-header-timestamp",
            "no_header_timestamp",
            is_flag=True,
            default=False,
            help="Do not write the generated_at header",
        ),
        click.option("--threads", type=int, help="Number of worker threads"),
        click.option("--verbose", "-v", is_flag=True, default=False, help="Debug logging"),
    ]
    for opt in reversed(options):
        f = opt(f)
    return f


def load_config(
    operation: str,
    config: Optional[Dict[str, Any]],
    overrides: Dict[str, Any],
) -> ExperimentConfig:
    """
    Config file values, then command line values on top. Options left unset
    never override.
    """
    import logging

    _log = logging.getLogger(__name__)

    cfg_from_cli = {k: v for k, v in overrides.items() if v is not None and v != ""}
    _log.info(f"Config overrides: {cfg_from_cli}")

    try:
        cfg = ExperimentConfig.from_dict(dict(config or {}))
        return cfg.updated({"operation": operation, **cfg_from_cli})
    except ConfigError as e:
        raise ConfigException(str(e)) from None


def common_overrides(seed, out, fmt, no_header_timestamp, threads) -> Dict[str, Any]:
    return {
        "seed": seed,
        "threads": threads,
        "output.path": out,
        "output.format": fmt,
        "output.header_timestamp": False if no_header_timestamp else None,
    }


def emit(report, cfg: ExperimentConfig):
    """Write the report and exit with 0 on success, 1 when a check failed."""
    import logging

    from .io import write_report

    _log = logging.getLogger(__name__)
    try:
        write_report(report, cfg.output.path, cfg.output.format, cfg.output.header_timestamp)
    except ValueError as e:
        raise ConfigException(str(e)) from None

    if report.ok:
        _log.info("Calling sys.exit(0)")
        sys.exit(EXIT_OK)
    _log.error("Some checks failed, calling sys.exit(1)")
    sys.exit(EXIT_CHECK_FAILED)


def run_guarded(fn, *args, **kw):
    """Bad arguments exit as configuration errors, numerical failures with status 1."""
    try:
        return fn(*args, **kw)
    except (ConfigError, ValueError) as e:
        raise ConfigException(str(e)) from None
    except RuntimeError as e:
        raise click.ClickException(str(e)) from None


# pylint: disable=import-outside-toplevel,inconsistent-return-statements


@click.version_option(package_name="braidlab")
@click.group(help="Majorana braiding laboratory")
def main():
    pass
