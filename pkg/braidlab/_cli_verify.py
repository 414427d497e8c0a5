import click
import pandas as pd

from ._cli_common import common_overrides, emit, experiment_options, load_config, main, run_guarded, setup_logging
from .config import ExperimentConfig
from .io import Report


def run_verify(cfg: ExperimentConfig) -> Report:
    """Every configured invariant suite, one row per check."""
    from .checks import run_checks

    spec = cfg.system.to_spec()
    results = run_checks(
        spec,
        cfg.verify.suites,
        samples=cfg.verify.angle_samples,
        tol=cfg.verify.tolerance,
        holonomy_steps=cfg.holonomy.steps,
        holonomy_targets=cfg.holonomy.targets,
        force_conserved=cfg.verify.force_conserved,
        seed=cfg.seed,
    )
    rows = [r.to_dict() for r in results]
    ok = all(r.passed for r in results)
    table = pd.DataFrame(rows, columns=["suite", "name", "passed", "residual", "tolerance", "detail"])
    return Report({"system": spec.kind.value, "passed": ok, "checks": rows}, table, ok)


@main.command("verify")
@experiment_options
@click.option("--suite", "suites", multiple=True, help="Run only these suites (repeatable)")
@click.option("--force-conserved", multiple=True, help="Also require these operators to commute with H")
def verify(config, seed, out, fmt, no_header_timestamp, threads, verbose, suites, force_conserved):
    """
    Check the Hamiltonian algebra, effective Hamiltonians, gauge fields,
    holonomies, the Majorana mapping and the initialization circuits.
    """
    import logging

    setup_logging(logging.DEBUG if verbose else -1)

    overrides = common_overrides(seed, out, fmt, no_header_timestamp, threads)
    if suites:
        overrides["verify.suites"] = list(suites)
    if force_conserved:
        overrides["verify.force_conserved"] = list(force_conserved)

    cfg = load_config("verify", config, overrides)
    emit(run_guarded(run_verify, cfg), cfg)
