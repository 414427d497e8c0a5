import logging
import math
import os
import time
from dataclasses import dataclass
from typing import Any, Dict, Iterable, List, Optional

import numpy as np
import pandas as pd
import psutil
from dask.distributed import Client
from tqdm.auto import tqdm

from ._text import read_sysfs_int
from .engine import NoiseModel
from .protocol import extract_logical_gate, gate_preset, plan_for_gate
from .tomography import process_tomography

THREADS_ENV = "BRAIDLAB_THREADS"

SWEEP_COLUMNS = ("gate", "delta_tilde", "n_equator", "n_total", "gate_count", "process_fidelity", "leakage")


@dataclass(frozen=True)
class SweepPoint:
    gate: str
    delta_tilde: float
    n_equator: int


def sweep_grid(gates: Iterable[str], deltas: Iterable[float], n_equator: Iterable[int]) -> List[SweepPoint]:
    """Grid order: gate, then n_equator, then delta_tilde fastest."""
    deltas = list(deltas)
    return [SweepPoint(g, float(d), int(n)) for g in gates for n in n_equator for d in deltas]


def unitary_fidelity(ideal: np.ndarray, actual: np.ndarray) -> float:
    """``|Tr(U^+ M)|^2 / d^2``, the process fidelity of the map ``rho -> M rho M^+``."""
    d = ideal.shape[0]
    return float(abs(np.trace(ideal.conj().T @ actual)) ** 2 / d ** 2)


def evaluate_point(
    point: SweepPoint, noise: Optional[NoiseModel] = None, shots: Optional[int] = None, seed: int = 0
) -> Dict[str, Any]:
    """
    Process fidelity of one preset gate. Noiseless points project the
    circuit on the code space directly, noisy or sampled ones go through
    process tomography.
    """
    t0 = time.perf_counter()
    preset = gate_preset(point.gate)
    spec = preset.default_spec()
    plan = plan_for_gate(point.gate, point.delta_tilde, point.n_equator, spec.n_qubits)
    gate = extract_logical_gate(plan, spec, strict=False)
    if (noise is None or noise.is_noiseless) and shots is None:
        fidelity = unitary_fidelity(preset.ideal, gate.raw)
    else:
        fidelity = process_tomography(plan, spec, preset.ideal, noise, shots, seed).process_fidelity
    return {
        "gate": point.gate,
        "delta_tilde": point.delta_tilde,
        "n_equator": point.n_equator,
        "n_total": plan.n_total,
        "gate_count": plan.gate_count,
        "process_fidelity": fidelity,
        "leakage": gate.leakage,
        "wall_time": time.perf_counter() - t0,
    }


class SweepRunner:
    def __init__(
        self,
        threads: int = -1,
        noise: Optional[NoiseModel] = None,
        shots: Optional[int] = None,
        seed: int = 0,
        progress: bool = False,
    ):
        self._log = logging.getLogger(__name__)
        self._threads = apply_thread_cap(threads) if threads > 0 else get_max_cpu()
        self._noise = noise
        self._shots = shots
        self._seed = seed
        self._progress = progress
        self._client: Optional[Client] = None

    @property
    def threads(self) -> int:
        return self._threads

    def _init_dask(self) -> Client:
        client = Client(processes=False, n_workers=1, threads_per_worker=self._threads, dashboard_address=None)
        self._log.info(f"Started local Dask {client}")
        return client

    def client(self) -> Client:
        if self._client is None:
            self._client = self._init_dask()
        return self._client

    def close(self):
        if self._client is not None:
            self._log.info("Shutting down Dask cluster")
            self._client.close()
            self._client = None

    def run(self, points: List[SweepPoint]) -> List[Dict[str, Any]]:
        """Evaluate every grid point, results in grid order."""
        if not points:
            raise ValueError("Sweep grid is empty")
        kw = dict(noise=self._noise, shots=self._shots, seed=self._seed)
        bar = tqdm(total=len(points), desc="sweep", disable=not self._progress)

        if self._threads == 1:
            out = []
            for p in points:
                out.append(evaluate_point(p, **kw))
                bar.update(1)
            bar.close()
            return out

        client = self.client()
        futures = client.map(evaluate_point, points, pure=False, **kw)
        out = []
        for f in futures:
            out.append(f.result())
            bar.update(1)
        bar.close()
        return out

    def table(self, points: List[SweepPoint], with_timings: bool = False) -> pd.DataFrame:
        columns = list(SWEEP_COLUMNS) + (["wall_time"] if with_timings else [])
        return pd.DataFrame(self.run(points))[columns]


def get_max_cpu() -> int:
    """
    Max available CPU (rounded up if fractional), takes into account pod
    resource allocation and the ``BRAIDLAB_THREADS`` cap
    """
    ncpu = get_cpu_quota()
    n = int(math.ceil(ncpu)) if ncpu is not None else (psutil.cpu_count() or 1)
    return apply_thread_cap(n)


def apply_thread_cap(n: int) -> int:
    cap = os.environ.get(THREADS_ENV, "")
    if cap.strip():
        try:
            n = min(n, max(1, int(cap)))
        except ValueError:
            logging.getLogger(__name__).warning(f"Ignoring {THREADS_ENV}={cap!r}, not an integer")
    return max(1, n)


def get_cpu_quota() -> Optional[float]:
    """
    :returns: ``None`` if unconstrained or there is an error
    :returns: maximum amount of CPU this pod is allowed to use
    """
    quota = read_sysfs_int("/sys/fs/cgroup/cpu/cpu.cfs_quota_us")
    if quota is None or quota <= 0:
        return None
    period = read_sysfs_int("/sys/fs/cgroup/cpu/cpu.cfs_period_us")
    if period is None:
        return None
    return quota / period
