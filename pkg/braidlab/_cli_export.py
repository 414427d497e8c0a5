import click

from ._cli_common import (
    ConfigException,
    common_overrides,
    experiment_options,
    load_config,
    main,
    run_guarded,
    setup_logging,
)


@main.command("export")
@experiment_options
@click.option("--gate", type=str, help="Gate preset: S, Sdg, T, Tdg, Rxx, Rxxdg")
@click.option("--delta-tilde", type=float, help="Exchange constant |D~|")
@click.option("--n-equator", type=int, help="Trotter steps on the equator leg")
@click.option("--circuit-format", type=str, help="Circuit format: native, qasm or a registered exporter")
def export(config, seed, out, fmt, no_header_timestamp, threads, verbose, gate, delta_tilde, n_equator, circuit_format):
    """
    Write the gate list of a braid plan.
    """
    import logging
    import sys

    from ._cli_braid import braid_setup
    from .io import write_text
    from .protocol import export_circuit

    setup_logging(logging.DEBUG if verbose else -1)
    _log = logging.getLogger(__name__)

    if fmt is not None:
        raise ConfigException("export writes a circuit, choose it with --circuit-format instead of --format")

    overrides = common_overrides(seed, out, fmt, no_header_timestamp, threads)
    overrides.update(
        {
            "braid.gate": gate,
            "braid.delta_tilde": delta_tilde,
            "braid.n_equator": n_equator,
            "output.circuit_format": circuit_format,
        }
    )
    cfg = load_config("export", config, overrides)

    setup = run_guarded(braid_setup, cfg)
    text = run_guarded(export_circuit, setup.plan, cfg.output.circuit_format)
    _log.info(f"Exporting {setup.name}: {setup.plan.gate_count} rotations as {cfg.output.circuit_format}")
    write_text(text, cfg.output.path)
    sys.exit(0)
