import logging
from dataclasses import dataclass, replace
from itertools import groupby
from multiprocessing import Pool

import numpy as np

from poolz._dynamics import equilibrium_frequency, run
from poolz._game import SimConfig
from poolz._graph import GraphSpec, Network, build_network

logger = logging.getLogger(__name__)

# Network shared read-only with every task of a pool (lattice sweeps only)
_shared_network: Network | None = None


@dataclass(frozen=True)
class SweepTask:
    alpha_index: int
    alpha: float
    r_index: int
    r: float
    realization: int


@dataclass(frozen=True)
class RealizationResult:
    task: SweepTask
    rho_c: float
    absorbed: str | None


@dataclass(frozen=True)
class SweepRow:
    alpha: float
    r: float
    mean_rho_c: float
    stderr: float
    realizations: int
    absorbed_C_count: int
    absorbed_D_count: int


def task_streams(
    master_seed: int, alpha_index: int, r_index: int, realization: int
) -> tuple[np.random.Generator, np.random.Generator]:
    """Independent (graph, dynamics) random streams for one realization."""
    sequence = np.random.SeedSequence([master_seed, alpha_index, r_index, realization])
    graph_seed, dynamics_seed = sequence.spawn(2)
    return np.random.default_rng(graph_seed), np.random.default_rng(dynamics_seed)


def run_realization(
    graph_spec: GraphSpec,
    sim_config: SimConfig,
    task: SweepTask,
    network: Network | None = None,
) -> RealizationResult:
    graph_rng, dynamics_rng = task_streams(
        sim_config.seed, task.alpha_index, task.r_index, task.realization
    )
    net = network if network is not None else build_network(graph_spec, graph_rng)
    config = replace(sim_config, r=task.r, alpha=task.alpha)
    trajectory, _ = run(net, config, dynamics_rng)
    rho_c = equilibrium_frequency(trajectory, config.transient)
    logger.debug(
        "alpha=%g r=%g realization=%d rho_c=%.4f",
        task.alpha,
        task.r,
        task.realization,
        rho_c,
    )
    absorbed = trajectory.absorbed.state if trajectory.absorbed else None
    return RealizationResult(task, rho_c, absorbed)


def _init_worker(network: Network | None):
    global _shared_network
    _shared_network = network


def _run_task(payload: tuple[GraphSpec, SimConfig, SweepTask]) -> RealizationResult:
    graph_spec, sim_config, task = payload
    return run_realization(graph_spec, sim_config, task, _shared_network)


def run_tasks(
    graph_spec: GraphSpec,
    sim_config: SimConfig,
    tasks: list[SweepTask],
    workers: int = 1,
) -> list[RealizationResult]:
    """
    Run every task and return the results in task order, whatever the
    number of workers.
    """
    shared = build_network(graph_spec) if graph_spec.kind == "lattice" else None
    payloads = [(graph_spec, sim_config, task) for task in tasks]

    if workers <= 1:
        _init_worker(shared)
        try:
            return [_run_task(payload) for payload in payloads]
        finally:
            _init_worker(None)

    with Pool(processes=workers, initializer=_init_worker, initargs=(shared,)) as pool:
        return list(pool.imap(_run_task, payloads, chunksize=1))


def make_tasks(alphas, rs, realizations: int, r_offset: int = 0) -> list[SweepTask]:
    return [
        SweepTask(alpha_index, float(alpha), r_offset + r_index, float(r), realization)
        for alpha_index, alpha in enumerate(alphas)
        for r_index, r in enumerate(rs)
        for realization in range(realizations)
    ]


def summarize(results: list[RealizationResult]) -> list[SweepRow]:
    rows = list()
    by_point = sorted(
        results, key=lambda result: (result.task.alpha, result.task.r, result.task.realization)
    )
    for (alpha, r), group in groupby(by_point, key=lambda result: (result.task.alpha, result.task.r)):
        group = list(group)
        values = np.array([result.rho_c for result in group])
        stderr = float(values.std(ddof=1) / np.sqrt(len(values))) if len(values) > 1 else 0.0
        rows.append(
            SweepRow(
                alpha,
                r,
                float(values.mean()),
                stderr,
                len(values),
                sum(result.absorbed == "all_C" for result in group),
                sum(result.absorbed == "all_D" for result in group),
            )
        )
    return rows


def sweep(
    graph_spec: GraphSpec,
    sim_config: SimConfig,
    alphas,
    rs,
    realizations: int,
    workers: int = 1,
) -> list[SweepRow]:
    tasks = make_tasks(alphas, rs, realizations)
    logger.info(
        "Sweeping %d alpha x %d r x %d realizations on %d worker(s)",
        len(alphas),
        len(rs),
        realizations,
        workers,
    )
    rows = summarize(run_tasks(graph_spec, sim_config, tasks, workers))
    for row in rows:
        logger.info(
            "alpha=%g r=%g mean_rho_c=%.4f stderr=%.4f",
            row.alpha,
            row.r,
            row.mean_rho_c,
            row.stderr,
        )
    return rows
