import click
import pandas as pd

from ._cli_common import common_overrides, emit, experiment_options, load_config, main, run_guarded, setup_logging
from .config import ExperimentConfig
from .io import Report


def run_braid_tomography(cfg: ExperimentConfig, progress: bool = False) -> Report:
    """
    Process tomography of every gate in ``tomography.gates`` under the
    configured noise and shot budget.
    """
    import logging

    from ._cli_braid import braid_setup
    from .protocol import initialization_circuit
    from .tomography import input_labels, process_tomography

    _log = logging.getLogger(__name__)
    noise = cfg.noise.to_model()
    records = []
    for name in cfg.tomography.gates:
        setup = braid_setup(cfg, name)
        spec, plan = setup.spec, setup.plan
        _log.info(f"Tomography of {name}: {plan.n_total} steps, {plan.gate_count} rotations")
        rep = process_tomography(
            plan,
            spec,
            setup.ideal,
            noise,
            cfg.shots,
            cfg.seed,
            project_positive=cfg.tomography.project_positive,
            progress=progress,
        )
        init = max(len(initialization_circuit(spec, lab)) for lab in input_labels(1 << spec.n_logical))
        records.append(
            {
                "gate": name,
                "delta_tilde": plan.delta_tilde,
                "n_equator": plan.n_equator,
                "n_total": plan.n_total,
                "gate_count": plan.gate_count,
                "init_gate_count": init,
                "process_fidelity": rep.process_fidelity,
                "state_fidelities": [{"input": list(lab), "fidelity": f} for lab, f in rep.state_fidelities],
                "min_state_fidelity": min(f for _, f in rep.state_fidelities),
                "clipped": rep.clipped,
                "choi_min_eigenvalue": rep.choi.min_eigenvalue(),
                "choi": rep.choi.matrix,
            }
        )
    columns = [
        "gate",
        "delta_tilde",
        "n_equator",
        "n_total",
        "gate_count",
        "init_gate_count",
        "process_fidelity",
        "min_state_fidelity",
        "clipped",
    ]
    table = pd.DataFrame([{k: r[k] for k in columns} for r in records], columns=columns)
    doc = {
        "noise": {"depolarizing": cfg.noise.depolarizing},
        "shots": cfg.shots,
        "seed": cfg.seed,
        "gates": records,
    }
    return Report(doc, table, True)


@main.command("tomography")
@experiment_options
@click.option("--gate", "gates", multiple=True, help="Gate preset to tomograph (repeatable)")
@click.option("--delta-tilde", type=float, help="Exchange constant |D~|")
@click.option("--n-equator", type=int, help="Trotter steps on the equator leg")
@click.option("--shots", type=click.IntRange(min=1), help="Shots per Pauli expectation, exact if unset")
@click.option("--depolarizing", type=click.FloatRange(0, 1), help="Two-qubit depolarizing probability")
@click.option("--project-positive", is_flag=True, default=None, help="Clip negative Choi eigenvalues")
def tomography(
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
    project_positive,
):
    """
    Choi-matrix process tomography of braid gates over the logical input set.
    """
    import logging
    import sys

    setup_logging(logging.DEBUG if verbose else -1)

    overrides = common_overrides(seed, out, fmt, no_header_timestamp, threads)
    overrides.update(
        {
            "braid.delta_tilde": delta_tilde,
            "braid.n_equator": n_equator,
            "shots": shots,
            "noise.depolarizing": depolarizing,
            "tomography.project_positive": project_positive,
        }
    )
    if gates:
        overrides["tomography.gates"] = list(gates)
    cfg = load_config("tomography", config, overrides)
    emit(run_guarded(run_braid_tomography, cfg, progress=sys.stderr.isatty()), cfg)
