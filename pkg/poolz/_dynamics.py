import logging
import math
from dataclasses import dataclass, field
from typing import Literal

import numpy as np

from poolz._game import Game, SimConfig, random_state
from poolz._graph import Network
from poolz._schedulers import get_scheduler, list_schedulers
from poolz.errors import InvalidInputError, InvalidSpecError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Absorption:
    state: Literal["all_C", "all_D"]
    generation: int

    @property
    def value(self) -> float:
        return 1.0 if self.state == "all_C" else 0.0


@dataclass(frozen=True, eq=False)
class Trajectory:
    """Cooperator frequency per generation; index 0 is the initial state."""

    rho_c: np.ndarray
    final_state: np.ndarray = field(repr=False)
    absorbed: Absorption | None = None


@dataclass(frozen=True, eq=False)
class UpdateStats:
    change_count: np.ndarray
    generations_observed: int

    @property
    def frequency(self) -> np.ndarray:
        if self.generations_observed == 0:
            return np.zeros(len(self.change_count))
        return self.change_count / self.generations_observed


def validate_sim_config(config: SimConfig) -> list[InvalidSpecError]:
    validation_errors = list()
    if not config.r >= 0:
        validation_errors.append(InvalidSpecError("sim.r", "must be nonnegative"))
    if not math.isfinite(config.alpha):
        validation_errors.append(InvalidSpecError("sim.alpha", "must be finite"))
    if not config.tau > 0:
        validation_errors.append(InvalidSpecError("sim.tau", "must be positive"))
    if not config.kappa >= 0:
        validation_errors.append(InvalidSpecError("sim.kappa", "must be nonnegative"))
    if config.generations < 1:
        validation_errors.append(
            InvalidSpecError("sim.generations", "must be at least 1")
        )
    if not 0 <= config.transient < config.generations:
        validation_errors.append(
            InvalidSpecError("sim.transient", "must lie in [0, generations)")
        )
    if not 0 <= config.init_coop_density <= 1:
        validation_errors.append(
            InvalidSpecError("sim.init_coop_density", "must lie in [0, 1]")
        )
    if config.update_mode not in list_schedulers():
        validation_errors.append(
            InvalidSpecError(
                "sim.update_mode",
                f"must be one of {', '.join(list_schedulers())}",
            )
        )
    return validation_errors


def _absorption(state: np.ndarray, generation: int) -> Absorption | None:
    if state.all():
        return Absorption("all_C", generation)
    if not state.any():
        return Absorption("all_D", generation)
    return None


def run_game(
    game: Game, rng: np.random.Generator | int | None = None
) -> tuple[Trajectory, UpdateStats]:
    """
    Evolve a random initial arrangement for `config.generations` generations.

    Stepping stops as soon as the population is all cooperators or all
    defectors; the rest of the trajectory is filled with that constant.
    """
    config = game.config
    rng = np.random.default_rng(config.seed if rng is None else rng)
    step = get_scheduler(config.update_mode)
    n = game.network.n

    state = random_state(n, config.init_coop_density, rng)
    rho_c = np.empty(config.generations + 1)
    rho_c[0] = state.mean()
    change_count = np.zeros(n, dtype=np.int64)

    absorbed = _absorption(state, 0)
    t = 0
    while t < config.generations and absorbed is None:
        t += 1
        result = step(game, state, rng)
        state = result.state
        change_count += result.changed
        rho_c[t] = state.mean()
        absorbed = _absorption(state, t)

    if absorbed is not None:
        rho_c[t:] = absorbed.value
        logger.debug(
            "Absorbed into %s at generation %d (r=%g, alpha=%g)",
            absorbed.state,
            absorbed.generation,
            config.r,
            config.alpha,
        )

    return (
        Trajectory(rho_c, state, absorbed),
        UpdateStats(change_count, config.generations),
    )


def run(
    net: Network, config: SimConfig, rng: np.random.Generator | int | None = None
) -> tuple[Trajectory, UpdateStats]:
    if errors := validate_sim_config(config):
        raise errors[0]
    return run_game(Game.build(net, config), rng)


def equilibrium_frequency(traj: Trajectory, transient: int) -> float:
    generations = len(traj.rho_c) - 1
    if not 0 <= transient < generations:
        raise InvalidInputError(
            f"Transient {transient} must be shorter than the {generations} generations recorded."
        )
    if traj.absorbed is not None and traj.absorbed.generation <= transient:
        return traj.absorbed.value
    return float(traj.rho_c[transient + 1 :].mean())
