import logging
from dataclasses import replace
from pathlib import Path

import numpy as np
import pandas as pd

from poolz._analysis import (
    degree_resolved_states,
    effective_group_size,
    fraction_pii_above_one,
    neighbor_degree_breakdown,
    pii_by_degree,
    pii_distribution,
    render_glyphs,
    snapshot_lattice,
    update_frequency_by_degree,
)
from poolz._config import ExperimentSpec, format_float, validate_experiment_spec
from poolz._dynamics import run
from poolz._graph import Network, build_network
from poolz._outputs import (
    prepare_directory,
    read_state_table,
    write_config,
    write_pgm,
    write_table,
)
from poolz._sweeps import sweep, task_streams
from poolz._thresholds import find_thresholds
from poolz.errors import InvalidExperimentError, InvalidSpecError, UndefinedRecipeError

logger = logging.getLogger(__name__)

NOT_IN_RANGE = "not in range"

# Parameter sets of the reference experiments, as config-file overrides
__recipe_registry: dict[str, dict[str, str]] = {
    "fig1": {
        "net": "lattice",
        "side": "30",
        "r": "1:7:0.25",
        "alpha": "0",
        "realizations": "40",
    },
    "fig2": {
        "net": "ba",
        "n": "4000",
        "m0": "5",
        "m": "2",
        "r": "0.5:3:0.1",
        "alpha": "-2,-1,0,1",
        "realizations": "20",
    },
    "fig3": {"net": "ba", "n": "100000", "m0": "5", "m": "2", "alpha": "-2,1", "r": "1", "pii_r": "1"},
    "fig4": {
        "net": "ba",
        "n": "100000",
        "m0": "5",
        "m": "2",
        "alpha": "-2,-1,0,1",
        "r": "0:10:0.25",
        "pii_r": "1",
    },
    "fig5": {"net": "ba", "n": "1000", "m0": "5", "m": "2", "r": "1.6", "alpha": "0"},
}


def get_recipe(name: str) -> dict[str, str]:
    recipe = __recipe_registry.get(name)
    if recipe is None:
        raise UndefinedRecipeError(name)
    return dict(recipe)


def list_recipes() -> list[str]:
    return list(__recipe_registry.keys())


def validate_experiment(spec: ExperimentSpec) -> InvalidExperimentError | None:
    if errors := validate_experiment_spec(spec):
        return InvalidExperimentError(errors)


def _start(spec: ExperimentSpec) -> Path:
    if error := validate_experiment(spec):
        raise error
    directory = prepare_directory(spec.out)
    write_config(spec, directory)
    return directory


def _first_network(spec: ExperimentSpec) -> Network:
    graph_rng, _ = task_streams(spec.sim.seed, 0, 0, 0)
    return build_network(spec.graph, graph_rng)


def cmd_run(spec: ExperimentSpec) -> Path:
    """
    Single run at the first (alpha, r) of the spec. Uses the same random
    streams as realization 0 of a sweep.
    """
    directory = _start(spec)
    graph_rng, dynamics_rng = task_streams(spec.sim.seed, 0, 0, 0)
    net = build_network(spec.graph, graph_rng)
    config = replace(spec.sim, r=spec.rs[0], alpha=spec.alphas[0])
    trajectory, stats = run(net, config, dynamics_rng)

    write_table(
        pd.DataFrame(
            {
                "generation": np.arange(len(trajectory.rho_c)),
                "rho_c": trajectory.rho_c,
            }
        ),
        directory,
        "trajectory",
        spec.gnuplot,
    )
    agents = np.arange(net.n)
    write_table(
        pd.DataFrame(
            {
                "agent": agents,
                "degree": net.degrees,
                "state": trajectory.final_state,
            }
        ),
        directory,
        "final_state",
    )
    write_table(
        pd.DataFrame(
            {
                "agent": agents,
                "degree": net.degrees,
                "change_count": stats.change_count,
                "frequency": stats.frequency,
            }
        ),
        directory,
        "update_stats",
    )

    states = degree_resolved_states(net, trajectory.final_state)
    updates = update_frequency_by_degree(net, stats)
    write_table(
        pd.DataFrame(
            {
                "degree": states.degrees,
                "count": states.counts,
                "cooperator_share": states.mean,
                "update_frequency": updates.mean,
            }
        ),
        directory,
        "degree_states",
        spec.gnuplot,
    )

    logger.info(
        "Run finished: final rho_c=%.4f absorbed=%s",
        trajectory.rho_c[-1],
        trajectory.absorbed,
    )
    return directory


def cmd_sweep(spec: ExperimentSpec) -> Path:
    directory = _start(spec)
    rows = sweep(
        spec.graph, spec.sim, spec.alphas, spec.rs, spec.realizations, spec.workers
    )
    write_table(pd.DataFrame(rows), directory, "sweep", spec.gnuplot)
    return directory


def cmd_pii(spec: ExperimentSpec) -> Path:
    directory = _start(spec)
    net = _first_network(spec)
    r_grid = sorted(spec.rs)

    pii, by_degree, group_size, fraction, histogram, neighbors = ([] for _ in range(6))
    for alpha in spec.alphas:
        profile = pii_by_degree(net, alpha, spec.pii_r)
        pii.append(pd.DataFrame(profile.records).assign(alpha=alpha))
        by_degree.append(
            pd.DataFrame(
                {
                    "alpha": alpha,
                    "degree": profile.degrees,
                    "count": profile.counts,
                    "mean_p_ii": profile.mean,
                }
            )
        )
        group_size.append({"alpha": alpha, "effective_group_size": effective_group_size(net, alpha)})
        fraction.append(
            pd.DataFrame(
                {
                    "alpha": alpha,
                    "r": r_grid,
                    "fraction": fraction_pii_above_one(net, alpha, r_grid),
                }
            )
        )
        edges, density = pii_distribution(net, alpha, spec.pii_r, spec.bins)
        histogram.append(
            pd.DataFrame(
                {"alpha": alpha, "bin_lo": edges[:-1], "bin_hi": edges[1:], "density": density}
            )
        )
        neighbors.extend(
            {
                "alpha": alpha,
                "agent": row.agent,
                "p_ii": row.p_ii,
                "k1": row.neighbor_degrees[0],
                "k2": row.neighbor_degrees[1],
                "k3": row.neighbor_degrees[2],
                "k_min": row.k_min,
            }
            for row in neighbor_degree_breakdown(net, alpha, spec.pii_r, degree=3)
        )
        logger.info("alpha=%g: effective group size %.6g", alpha, group_size[-1]["effective_group_size"])

    pii_table = pd.concat(pii, ignore_index=True)
    write_table(
        pii_table[["alpha", "agent", "degree", "l_alpha", "p_ii"]], directory, "pii"
    )
    write_table(pd.concat(by_degree, ignore_index=True), directory, "pii_by_degree", spec.gnuplot)
    write_table(pd.DataFrame(group_size), directory, "group_size", spec.gnuplot)
    write_table(pd.concat(fraction, ignore_index=True), directory, "pii_fraction", spec.gnuplot)
    write_table(pd.concat(histogram, ignore_index=True), directory, "pii_histogram", spec.gnuplot)
    write_table(
        pd.DataFrame(
            neighbors, columns=["alpha", "agent", "p_ii", "k1", "k2", "k3", "k_min"]
        ),
        directory,
        "pii_neighbors",
    )
    return directory


def cmd_thresholds(spec: ExperimentSpec) -> Path:
    if len(spec.rs) < 2:
        raise InvalidExperimentError(
            [InvalidSpecError("sweep.r", "threshold search needs at least two values")]
        )
    # The search regrids [min, max] evenly, so only evenly spaced lists are taken.
    gaps = np.diff(np.sort(spec.rs))
    if not np.allclose(gaps, gaps[0], rtol=0, atol=1e-9):
        raise InvalidExperimentError(
            [InvalidSpecError("sweep.r", "threshold search needs an evenly spaced range lo:hi:step")]
        )
    directory = _start(spec)
    r_lo, r_hi = min(spec.rs), max(spec.rs)

    bounds, grids = [], []
    for alpha in spec.alphas:
        result = find_thresholds(
            spec.graph,
            alpha,
            spec.sim,
            r_lo,
            r_hi,
            spec.realizations,
            points=len(spec.rs),
            workers=spec.workers,
        )
        bounds.append(
            {
                "alpha": format_float(alpha),
                "r_c": NOT_IN_RANGE if result.r_c is None else format_float(result.r_c),
                "r_d": NOT_IN_RANGE if result.r_d is None else format_float(result.r_d),
            }
        )
        grids.append(
            pd.DataFrame(
                {
                    "alpha": alpha,
                    "r": result.grid,
                    "mean_rho_c": result.mean,
                    "stderr": result.stderr,
                }
            )
        )

    write_table(pd.DataFrame(bounds), directory, "thresholds")
    write_table(pd.concat(grids, ignore_index=True), directory, "thresholds_grid", spec.gnuplot)
    return directory


def cmd_snapshot(state_file: str | Path, spec: ExperimentSpec) -> Path:
    """
    Render a saved lattice state as a binary graymap: cooperators black,
    defectors white, row-major.
    """
    grid = snapshot_lattice(read_state_table(state_file), spec.graph.side)
    logger.debug("Snapshot:\n%s", render_glyphs(grid))
    directory = prepare_directory(spec.out)
    # Keep the echo of the run that produced the state file.
    if not (directory / "config.txt").exists():
        write_config(spec, directory)
    return write_pgm(grid, directory / "snapshot.pgm")
