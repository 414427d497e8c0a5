import click

from ._cli_common import common_overrides, emit, experiment_options, load_config, main, run_guarded, setup_logging
from .config import ExperimentConfig
from .io import Report


def run_sweep(cfg: ExperimentConfig, with_timings: bool = False, progress: bool = False) -> Report:
    """Process fidelity over the gate x n_equator x delta_tilde grid, rows in grid order."""
    import logging

    from .proc import SweepRunner, sweep_grid

    _log = logging.getLogger(__name__)
    points = sweep_grid(cfg.sweep.gates, cfg.sweep.delta_grid(), cfg.sweep.n_equator)
    _log.info(f"Sweeping {len(points):,d} grid points")

    runner = SweepRunner(cfg.threads, cfg.noise.to_model(), cfg.shots, cfg.seed, progress)
    try:
        table = runner.table(points, with_timings)
    finally:
        runner.close()

    best = table.loc[table.groupby(["gate", "n_equator"])["process_fidelity"].idxmax()]
    for row in best.itertuples():
        _log.info(f"{row.gate} N={row.n_equator}: best F={row.process_fidelity:.4f} at |D~|={row.delta_tilde:g}")
    return Report({"rows": table}, table, True)


@main.command("sweep")
@experiment_options
@click.option("--gate", "gates", multiple=True, help="Gate preset to sweep (repeatable)")
@click.option("--delta-tilde", type=str, help="Grid 'start:stop:step' or 'a,b,c'")
@click.option("--n-equator", "n_equator", type=int, multiple=True, help="Equator step count (repeatable)")
@click.option("--shots", type=click.IntRange(min=1), help="Shots per Pauli expectation, exact if unset")
@click.option("--depolarizing", type=click.FloatRange(0, 1), help="Two-qubit depolarizing probability")
@click.option("--with-timings", is_flag=True, default=False, help="Add a wall_time column")
def sweep(
    config,
    seed,
    out,
    fmt,
    no_header_timestamp,
    threads,
    verbose,
    gates,
    delta_tilde,
    n_equator,
    shots,
    depolarizing,
    with_timings,
):
    """
    Process fidelity against |D~| and Trotter step count.

    Rows come out in grid order whatever the scheduling, so noiseless runs
    are byte-identical with --no-header-timestamp.
    """
    import logging
    import sys

    setup_logging(logging.DEBUG if verbose else -1)

    overrides = common_overrides(seed, out, fmt, no_header_timestamp, threads)
    overrides.update({"sweep.delta_tilde": delta_tilde, "shots": shots, "noise.depolarizing": depolarizing})
    if gates:
        overrides["sweep.gates"] = list(gates)
    if n_equator:
        overrides["sweep.n_equator"] = list(n_equator)
    cfg = load_config("sweep", config, overrides)
    emit(run_guarded(run_sweep, cfg, with_timings, sys.stderr.isatty()), cfg)
