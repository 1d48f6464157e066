import math
from dataclasses import dataclass, field

import numpy as np
from scipy.stats import spearmanr

from poolz._dynamics import UpdateStats
from poolz._graph import Network, closed_neighborhood, degree_histogram
from poolz._payoffs import validate_state
from poolz.errors import InvalidInputError

COOPERATOR_PIXEL = 0
DEFECTOR_PIXEL = 255


@dataclass(frozen=True)
class SelfReturnRecord:
    agent: int
    degree: int
    l_alpha: float
    p_ii: float


@dataclass(frozen=True, eq=False)
class DegreeProfile:
    """A per-agent quantity averaged over the agents of each degree."""

    degrees: np.ndarray
    counts: np.ndarray
    mean: np.ndarray
    records: list[SelfReturnRecord] = field(default_factory=list, repr=False)

    def at(self, degree: int) -> float:
        (index,) = np.flatnonzero(self.degrees == degree)
        return float(self.mean[index])


@dataclass(frozen=True)
class NeighborBreakdown:
    agent: int
    p_ii: float
    neighbor_degrees: tuple[int, ...]

    @property
    def k_min(self) -> int:
        return min(self.neighbor_degrees)


def _per_degree_mean(net: Network, values: np.ndarray) -> tuple[np.ndarray, ...]:
    degrees, counts = degree_histogram(net)
    inverse = np.searchsorted(degrees, net.degrees)
    totals = np.bincount(inverse, weights=values, minlength=len(degrees))
    return degrees, counts, totals / counts


def l_alpha(net: Network, alpha: float, i: int) -> float:
    """
    Attractiveness-weighted average of 1/(k_j + 1) over the closed
    neighborhood of `i`.
    """
    portfolio = closed_neighborhood(net, i)
    log_appeal = [alpha * math.log(net.degree(j) + 1.0) for j in portfolio]
    top = max(log_appeal)
    appeal = [math.exp(value - top) for value in log_appeal]
    inverse_sizes = [1.0 / (net.degree(j) + 1.0) for j in portfolio]
    return sum(w * x for w, x in zip(appeal, inverse_sizes)) / sum(appeal)


def l_alpha_all(net: Network, alpha: float) -> np.ndarray:
    rows = net.closed_indices
    starts = net.closed_indptr[:-1]
    log_sizes = np.log(net.degrees[rows] + 1.0)

    # Weights are rescaled per neighborhood so extreme alpha cannot underflow.
    log_weights = alpha * log_sizes
    log_weights -= np.repeat(np.maximum.reduceat(log_weights, starts), net.degrees + 1)
    weights = np.exp(log_weights)

    numerator = np.add.reduceat(weights / (net.degrees[rows] + 1.0), starts)
    return numerator / np.add.reduceat(weights, starts)


def effective_group_size(net: Network, alpha: float) -> float:
    return float(np.mean(1.0 / l_alpha_all(net, alpha)))


def effective_group_size_curve(net: Network, alphas) -> np.ndarray:
    return np.array([effective_group_size(net, alpha) for alpha in alphas])


def pii_records(net: Network, alpha: float, r: float = 1.0) -> list[SelfReturnRecord]:
    levels = l_alpha_all(net, alpha)
    return [
        SelfReturnRecord(i, int(k), float(level), float(r * level))
        for i, (k, level) in enumerate(zip(net.degrees, levels))
    ]


def pii_by_degree(net: Network, alpha: float, r: float = 1.0) -> DegreeProfile:
    """
    Self-return of every agent in the all-cooperate state, and its mean over
    the agents of each degree.
    """
    records = pii_records(net, alpha, r)
    p_ii = np.array([record.p_ii for record in records])
    degrees, counts, mean = _per_degree_mean(net, p_ii)
    return DegreeProfile(degrees, counts, mean, records)


def degree_rank_correlation(profile: DegreeProfile) -> float:
    rho, _ = spearmanr(profile.degrees, profile.mean)
    return float(rho)


def fraction_pii_above_one(net: Network, alpha: float, r_grid) -> np.ndarray:
    r_grid = np.asarray(r_grid, dtype=np.float64)
    if np.any(np.diff(r_grid) < 0):
        raise InvalidInputError("The interest-rate grid must be ascending.")
    levels = l_alpha_all(net, alpha)
    return np.array([float(np.mean(r * levels > 1.0)) for r in r_grid])


def pii_distribution(
    net: Network, alpha: float, r: float = 1.0, bins: int = 50
) -> tuple[np.ndarray, np.ndarray]:
    """Histogram of P_ii as a probability density; returns (edges, density)."""
    density, edges = np.histogram(r * l_alpha_all(net, alpha), bins=bins, density=True)
    return edges, density


def neighbor_degree_breakdown(
    net: Network, alpha: float, r: float = 1.0, degree: int = 3
) -> list[NeighborBreakdown]:
    levels = l_alpha_all(net, alpha)
    return [
        NeighborBreakdown(
            int(i),
            float(r * levels[i]),
            tuple(sorted(int(net.degrees[j]) for j in net.neighbors(int(i)))),
        )
        for i in np.flatnonzero(net.degrees == degree)
    ]


def degree_resolved_states(net: Network, final_state) -> DegreeProfile:
    state = validate_state(final_state, net.n)
    degrees, counts, share = _per_degree_mean(net, state.astype(np.float64))
    return DegreeProfile(degrees, counts, share)


def update_frequency_by_degree(net: Network, stats: UpdateStats) -> DegreeProfile:
    degrees, counts, frequency = _per_degree_mean(net, stats.frequency)
    return DegreeProfile(degrees, counts, frequency)


def hub_cooperation(net: Network, state, top: int = 20) -> float:
    state = validate_state(state, net.n)
    hubs = np.lexsort((np.arange(net.n), -net.degrees))[:top]
    return float(state[hubs].mean())


def same_state_edge_fraction(net: Network, state) -> float:
    state = validate_state(state, net.n)
    sources = np.repeat(np.arange(net.n), net.degrees)
    return float(np.mean(state[sources] == state[net.indices]))


def random_mixing_baseline(rho: float) -> float:
    return rho * rho + (1.0 - rho) * (1.0 - rho)


def snapshot_lattice(state, side: int) -> np.ndarray:
    state = np.asarray(state)
    if state.shape != (side * side,):
        raise InvalidInputError(
            f"A {side}x{side} snapshot needs {side * side} states, got {state.size}."
        )
    state = validate_state(state, side * side)
    grid = np.where(state == 1, COOPERATOR_PIXEL, DEFECTOR_PIXEL).astype(np.uint8)
    return grid.reshape(side, side)


def render_glyphs(grid: np.ndarray) -> str:
    return "\n".join(
        "".join("#" if pixel == COOPERATOR_PIXEL else "." for pixel in row)
        for row in grid
    )
