import logging
from dataclasses import dataclass, field

import numpy as np

from poolz._game import SimConfig
from poolz._graph import GraphSpec
from poolz._sweeps import make_tasks, run_tasks, summarize
from poolz.errors import InvalidInputError

logger = logging.getLogger(__name__)

# Mean cooperator frequency below EPSILON counts as extinct cooperation,
# above 1 - EPSILON as extinct defection
EPSILON = 0.01
REFINEMENT = 8


@dataclass(frozen=True, eq=False)
class ThresholdResult:
    alpha: float
    r_c: float | None
    r_d: float | None
    grid: np.ndarray = field(repr=False)
    mean: np.ndarray = field(repr=False)
    stderr: np.ndarray = field(repr=False)


def _last_crossing(mean: np.ndarray, level: float) -> int | None:
    crossings = np.flatnonzero((mean[:-1] <= level) & (mean[1:] > level))
    return int(crossings[-1]) if crossings.size else None


def find_thresholds(
    net_spec: GraphSpec,
    alpha: float,
    dyn_defaults: SimConfig,
    r_lo: float,
    r_hi: float,
    realizations: int,
    points: int = 25,
    workers: int = 1,
    epsilon: float = EPSILON,
) -> ThresholdResult:
    """
    Locate the interest rates where cooperators (r_c) and defectors (r_d)
    die out.

    A uniform grid of `points` rates is swept first; the last grid cell in
    which the mean cooperator frequency rises above `epsilon` (respectively
    `1 - epsilon`) is then bisected down to an eighth of the grid step. A
    bound with no crossing in `[r_lo, r_hi]` is reported as None.
    """
    if not r_lo < r_hi:
        raise InvalidInputError(f"Need r_lo < r_hi, got {r_lo} and {r_hi}.")
    if realizations < 1:
        raise InvalidInputError("Need at least one realization.")
    if points < 2:
        raise InvalidInputError("The threshold grid needs at least two points.")

    grid = np.linspace(r_lo, r_hi, points)
    step = grid[1] - grid[0]
    rows = summarize(
        run_tasks(net_spec, dyn_defaults, make_tasks([alpha], grid, realizations), workers)
    )
    mean = np.array([row.mean_rho_c for row in rows])
    stderr = np.array([row.stderr for row in rows])
    probes = iter(range(points, points + 1000))

    def mean_at(r: float) -> float:
        tasks = make_tasks([alpha], [r], realizations, r_offset=next(probes))
        (row,) = summarize(run_tasks(net_spec, dyn_defaults, tasks, workers))
        logger.debug("alpha=%g probe r=%g mean_rho_c=%.4f", alpha, r, row.mean_rho_c)
        return row.mean_rho_c

    def refine(level: float) -> float | None:
        cell = _last_crossing(mean, level)
        if cell is None:
            return None
        lo, hi = grid[cell], grid[cell + 1]
        while hi - lo > step / REFINEMENT * (1 + 1e-9):
            mid = 0.5 * (lo + hi)
            if mean_at(mid) > level:
                hi = mid
            else:
                lo = mid
        return float(0.5 * (lo + hi))

    r_c = refine(epsilon)
    r_d = refine(1.0 - epsilon)
    if r_c is not None and r_d is not None and r_c > r_d:
        logger.warning("alpha=%g: r_c=%g exceeds r_d=%g; noisy sweep", alpha, r_c, r_d)
    logger.info("alpha=%g r_c=%s r_d=%s", alpha, r_c, r_d)
    return ThresholdResult(float(alpha), r_c, r_d, grid, mean, stderr)
