import click
import numpy as np
import pandas as pd

from ._cli_common import common_overrides, emit, experiment_options, load_config, main, run_guarded, setup_logging
from .config import ExperimentConfig
from .io import Report

HOLONOMY_TOLERANCE = 1e-3


def run_holonomy(cfg: ExperimentConfig) -> Report:
    """Wilson loop eigenphases of clock loops against their enclosed solid angle."""
    from .holonomy import analytic_holonomy, arm_holonomy
    from .protocol import clock_path, realized_rotation

    spec = cfg.system.to_spec()
    arm = cfg.holonomy.arm
    rows = []
    loops = []
    for phi in cfg.holonomy.targets:
        path = clock_path(phi, cfg.holonomy.steps, arm)
        hol = arm_holonomy(spec, arm, path)
        phases = hol.eigenphases
        analytic = np.sort(np.angle(np.linalg.eigvals(analytic_holonomy(arm, path))))
        error = float(np.abs(np.sort(np.abs(phases)) - abs(phi) / 2).max())
        kind, angle = realized_rotation(arm, phi)
        rows.append(
            {
                "arm": arm,
                "target_phi": phi,
                "solid_angle": hol.solid_angle,
                "eigenphase_min": float(phases.min()),
                "eigenphase_max": float(phases.max()),
                "phase_error": error,
                "analytic_error": float(np.abs(analytic - phases).max()),
            }
        )
        loops.append(
            {
                "target_phi": phi,
                "rotation": kind,
                "rotation_angle": angle,
                "eigenphases": phases,
                "unitary": hol.unitary,
                "logical_indices": list(hol.logical_indices),
            }
        )
    table = pd.DataFrame(rows)
    ok = bool(
        (table["phase_error"] <= HOLONOMY_TOLERANCE).all()
        and (table["analytic_error"] <= HOLONOMY_TOLERANCE).all()
    )
    return Report({"system": spec.kind.value, "rows": table, "loops": loops}, table, ok)


@main.command("holonomy")
@experiment_options
@click.option("--arm", type=click.Choice(["left", "right", "middle"]), help="Moving clock arm")
@click.option("--target", "targets", type=float, multiple=True, help="Loop azimuth in radians (repeatable)")
@click.option("--steps", type=int, help="Samples per path segment")
def holonomy(config, seed, out, fmt, no_header_timestamp, threads, verbose, arm, targets, steps):
    """
    Numerical holonomy of clock loops, eigenphases against solid angle.
    """
    import logging

    setup_logging(logging.DEBUG if verbose else -1)

    overrides = common_overrides(seed, out, fmt, no_header_timestamp, threads)
    overrides.update({"holonomy.arm": arm, "holonomy.steps": steps})
    if targets:
        overrides["holonomy.targets"] = [float(t) for t in targets]
    cfg = load_config("holonomy", config, overrides)
    if cfg.holonomy.arm != "left" and cfg.system.kind != "ten_qubit":
        cfg = cfg.updated({"system.kind": "ten_qubit"})
        logging.getLogger(__name__).info(f"Arm '{cfg.holonomy.arm}' needs the ten-qubit system, switching")
    emit(run_guarded(run_holonomy, cfg), cfg)
