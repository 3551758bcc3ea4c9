"""Ensemble execution, aggregation and parameter sweeps.

Per-trial randomness: trial ``i`` of a run with master seed ``s`` draws
from a fresh generator seeded by the 128-bit output of
``numpy.random.SeedSequence((s, i))`` -- a splittable hash of the pair.
The model and the policy are deliberately not part of the seed, so runs
that differ only in those fields see identical generation streams trial
by trial (common random numbers), which makes waiting times comparable
exactly and model differences low-variance.

Results are bit-identical for a given (config, trials, master_seed)
regardless of the worker count: trials are cut into fixed-size blocks,
per-trial observables do not depend on scheduling, and the reduction runs
over the assembled arrays in trial order.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from random import Random
from typing import NamedTuple, Optional

import numpy as np

from .chain import ChainConfig, Model, Policy, run_trial
from .errors import ConfigurationError, InvalidParameterError

#: Trials per work unit; fixed so that results cannot depend on workers.
_BLOCK = 4096

#: Mean concurrences at or below this are treated as true zeros when
#: classifying improvement factors (distinguishes max{0, .} clamps from
#: floating dust).
ZERO_CONCURRENCE = 1e-9


def trial_rng(master_seed: int, trial_index: int) -> Random:
    """Independent, reproducible stream for one trial (see module docstring)."""
    words = np.random.SeedSequence((master_seed, trial_index)).generate_state(4)
    return Random(int.from_bytes(words.tobytes(), "little"))


class TrialArrays(NamedTuple):
    """Per-trial observables of one ensemble, indexed by trial."""

    fidelity: np.ndarray
    concurrence: np.ndarray
    wait: np.ndarray


def _trial_block(args: tuple[ChainConfig, int, int, int]) -> tuple[np.ndarray, ...]:
    config, master_seed, start, stop = args
    n = stop - start
    fid = np.empty(n)
    conc = np.empty(n)
    wait = np.empty(n)
    for k in range(n):
        out = run_trial(config, trial_rng(master_seed, start + k))
        fid[k] = out.final_fidelity
        conc[k] = out.final_concurrence
        wait[k] = out.wait_steps
    return fid, conc, wait


def run_trials(
    config: ChainConfig, trials: int, master_seed: int, workers: int = 1
) -> TrialArrays:
    """Per-trial observable arrays for ``trials`` independent evolutions."""
    if trials < 1:
        raise InvalidParameterError(f"trials must be >= 1, got {trials!r}")
    tasks = [
        (config, master_seed, start, min(start + _BLOCK, trials))
        for start in range(0, trials, _BLOCK)
    ]
    if workers > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=min(workers, len(tasks))) as pool:
            parts = list(pool.map(_trial_block, tasks))
    else:
        parts = [_trial_block(task) for task in tasks]
    return TrialArrays(
        np.concatenate([p[0] for p in parts]),
        np.concatenate([p[1] for p in parts]),
        np.concatenate([p[2] for p in parts]),
    )


@dataclass(frozen=True)
class AggregateStats:
    """Ensemble means and spreads for one configuration.

    ``std_*`` are population standard deviations over trials; ``sem_*``
    are the corresponding standard errors of the mean (std / sqrt(trials)).
    """

    model: Model
    policy: Policy
    nodes: int
    p_link: float
    m_star: float
    trials: int
    seed: int
    mean_fidelity: float
    std_fidelity: float
    sem_fidelity: float
    mean_concurrence: float
    std_concurrence: float
    sem_concurrence: float
    mean_wait: float
    std_wait: float
    sem_wait: float


def aggregate(config: ChainConfig, trials: int, master_seed: int, arrays: TrialArrays) -> AggregateStats:
    """Deterministic reduction of per-trial arrays into AggregateStats."""
    root = math.sqrt(trials)

    def stats(values: np.ndarray) -> tuple[float, float, float]:
        std = float(np.std(values))
        return float(np.mean(values)), std, std / root

    mean_f, std_f, sem_f = stats(arrays.fidelity)
    mean_c, std_c, sem_c = stats(arrays.concurrence)
    mean_w, std_w, sem_w = stats(arrays.wait)
    return AggregateStats(
        model=config.model,
        policy=config.policy,
        nodes=config.num_nodes,
        p_link=config.p_link,
        m_star=config.noise.m_star,
        trials=trials,
        seed=master_seed,
        mean_fidelity=mean_f,
        std_fidelity=std_f,
        sem_fidelity=sem_f,
        mean_concurrence=mean_c,
        std_concurrence=std_c,
        sem_concurrence=sem_c,
        mean_wait=mean_w,
        std_wait=std_w,
        sem_wait=sem_w,
    )


def run_ensemble(
    config: ChainConfig, trials: int, master_seed: int, workers: int = 1
) -> AggregateStats:
    """Aggregate ``trials`` independent evolutions of one configuration."""
    arrays = run_trials(config, trials, master_seed, workers=workers)
    return aggregate(config, trials, master_seed, arrays)


def improvement_factor(c_aqn: float, c_taqn: float) -> Optional[float]:
    """Relative concurrence gain of the exact model over the twirled one.

    Returned in percent.  None ("n/a") when the exact model distributes no
    entanglement either; exactly 100 when only the twirled model fails.
    """
    if c_aqn < 0.0 or c_taqn < 0.0:
        raise InvalidParameterError(
            f"concurrences must be non-negative, got {c_aqn!r}, {c_taqn!r}"
        )
    if c_aqn <= ZERO_CONCURRENCE:
        return None
    if c_taqn <= ZERO_CONCURRENCE:
        return 100.0
    return (c_aqn - c_taqn) / c_aqn * 100.0


@dataclass(frozen=True)
class SweepGrid:
    """Axes of a heatmap-style sweep at fixed chain length and policy."""

    p_link_values: tuple[float, ...]
    m_star_values: tuple[float, ...]
    nodes: int
    policy: Policy
    models: tuple[Model, ...]

    def __post_init__(self) -> None:
        if not self.p_link_values or not self.m_star_values:
            raise ConfigurationError("sweep axes must be non-empty")
        if not self.models:
            raise ConfigurationError("at least one model is required")
        if len(set(self.models)) != len(self.models):
            raise ConfigurationError("duplicate models in sweep")
        for name, axis in (("p_link", self.p_link_values), ("m_star", self.m_star_values)):
            if any(b <= a for a, b in zip(axis, axis[1:])):
                raise ConfigurationError(f"{name} values must be strictly ascending: {axis}")
        # delegate per-cell validation (bounds, nesting node count) to ChainConfig
        self.cell_config(self.p_link_values[0], self.m_star_values[0], self.models[0])

    def cell_config(self, p_link: float, m_star: float, model: Model) -> ChainConfig:
        from .bell_algebra import NoiseParams

        return ChainConfig(
            num_nodes=self.nodes,
            p_link=p_link,
            noise=NoiseParams.from_m_star(m_star),
            policy=self.policy,
            model=model,
        )


class SweepRow(NamedTuple):
    """One ensemble result plus the improvement factor of its cell."""

    stats: AggregateStats
    improvement_pct: Optional[float]


def _ensemble_task(args: tuple[ChainConfig, int, int]) -> AggregateStats:
    config, trials, master_seed = args
    return run_ensemble(config, trials, master_seed, workers=1)


def run_sweep(
    grid: SweepGrid, trials: int, master_seed: int, workers: int = 1
) -> list[SweepRow]:
    """Run every (p_link, m_star) cell of the grid for every model.

    Cells share the master seed, so the two models of one cell are paired
    trial by trial.  The improvement factor is computed from the mean
    concurrences of a cell and attached to each of its rows; it is None
    when the grid carries a single model.
    """
    cells = [(m_star, p_link) for m_star in grid.m_star_values for p_link in grid.p_link_values]
    tasks = [
        (grid.cell_config(p_link, m_star, model), trials, master_seed)
        for (m_star, p_link) in cells
        for model in grid.models
    ]
    if workers > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=min(workers, len(tasks))) as pool:
            results = list(pool.map(_ensemble_task, tasks))
    elif workers > 1:
        results = [run_ensemble(tasks[0][0], trials, master_seed, workers=workers)]
    else:
        results = [_ensemble_task(task) for task in tasks]

    rows: list[SweepRow] = []
    per_cell = len(grid.models)
    for cell_index in range(len(cells)):
        cell_stats = results[cell_index * per_cell : (cell_index + 1) * per_cell]
        by_model = {stats.model: stats for stats in cell_stats}
        if Model.AQN in by_model and Model.TAQN in by_model:
            improvement = improvement_factor(
                by_model[Model.AQN].mean_concurrence, by_model[Model.TAQN].mean_concurrence
            )
        else:
            improvement = None
        rows.extend(SweepRow(stats, improvement) for stats in cell_stats)
    return rows
