"""Seeded trial runner and aggregate statistics of Maxwell decoder runs."""

from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from ..poly import DDPair
from .decoder import MaxwellRun, maxwell_decode
from .graph import sample_graph

THREADS_ENV = "MAXWELL_THREADS"


def max_workers() -> int:
    cap = os.environ.get(THREADS_ENV)
    cpus = os.cpu_count() or 1
    if cap:
        try:
            return max(1, min(cpus, int(cap)))
        except ValueError:
            raise ValueError(f"{THREADS_ENV} must be a positive integer") from None
    return cpus


def trial_streams(seed: int, index: int):
    """(graph, channel, strategy) generators for one trial."""
    ss = np.random.SeedSequence(int(seed) ^ int(index))
    return [np.random.default_rng(s) for s in ss.spawn(3)]


def one_trial(pair: DDPair, n: int, epsilon: float, seed: int, index: int,
              strategy: str = "sequential", delta_gamma: float = 0.01,
              record_events: bool = False) -> MaxwellRun:
    g_rng, c_rng, s_rng = trial_streams(seed, index)
    graph = sample_graph(pair, n, g_rng)
    erased = c_rng.random(n) < epsilon
    return maxwell_decode(graph, erased, strategy, s_rng, delta_gamma, record_events)


def _job(args):
    return one_trial(*args)


def run_trials(pair: DDPair, n: int, epsilon: float, trials: int, seed: int,
               strategy: str = "sequential", delta_gamma: float = 0.01,
               record_events: bool = False, workers: int | None = None) -> list:
    """Independent code and channel realizations; results ordered by trial index."""
    jobs = [(pair, n, epsilon, seed, i, strategy, delta_gamma, record_events) for i in range(trials)]
    workers = workers or max_workers()
    if workers <= 1 or trials <= 1:
        return [_job(j) for j in jobs]
    with ProcessPoolExecutor(max_workers=min(workers, trials)) as ex:
        return list(ex.map(_job, jobs, chunksize=max(1, trials // (4 * workers))))


@dataclass(frozen=True)
class TrajectoryStats:
    centers: np.ndarray  # determined fraction
    mean: np.ndarray  # entropy / n, nan where no run has data
    q05: np.ndarray
    q95: np.ndarray
    support: np.ndarray  # runs contributing per bin


def _step_values(run: MaxwellRun, grid: np.ndarray) -> np.ndarray:
    """Entropy/n of one run at each determined fraction (last value at or
    before it); nan before the run's first point."""
    traj = np.array(run.trajectory, dtype=float)
    det = traj[:, 0] / run.n
    ent = traj[:, 1] / run.n
    idx = np.searchsorted(det, grid, side="right") - 1
    out = np.where(idx >= 0, ent[np.clip(idx, 0, None)], np.nan)
    return out


def trajectory_stats(runs: list, bins: int = 200) -> TrajectoryStats:
    if len(runs) < 2:
        raise ValueError("need at least two runs")
    edges = np.linspace(0.0, 1.0, bins + 1)
    centers = 0.5 * (edges[:-1] + edges[1:])
    vals = np.array([_step_values(r, centers) for r in runs])
    have = ~np.isnan(vals)
    support = have.sum(axis=0)
    mean = np.full(bins, np.nan)
    q05 = np.full(bins, np.nan)
    q95 = np.full(bins, np.nan)
    for b in np.nonzero(support)[0]:
        col = vals[have[:, b], b]
        mean[b] = col.mean()
        q05[b], q95[b] = np.quantile(col, [0.05, 0.95])
    return TrajectoryStats(centers, mean, q05, q95, support)


def entropy_concentration(pair: DDPair, n: int, epsilon: float, trials: int, seed: int,
                          workers: int | None = None) -> tuple[float, float]:
    if trials < 30:
        raise ValueError("at least 30 trials are required")
    runs = run_trials(pair, n, epsilon, trials, seed, workers=workers)
    vals = np.array([r.final_entropy / n for r in runs])
    return float(vals.mean()), float(vals.std(ddof=1))
