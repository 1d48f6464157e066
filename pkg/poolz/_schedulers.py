import logging
from functools import wraps
from typing import Callable

import numpy as np

from poolz._game import Game, StepResult, fermi_prob, fermi_probs
from poolz._graph import Network
from poolz._payoffs import PayoffResult, ensure_capital_conserved
from poolz.errors import InvalidInputError, UndefinedSchedulerError

logger = logging.getLogger(__name__)

# Type alias for a scheduler: advances the population by one generation
Scheduler = Callable[[Game, np.ndarray, np.random.Generator], StepResult]

# Registry to store scheduler functions
__scheduler_registry: dict[str, Scheduler] = {}


def __validate_state(func: Scheduler):
    """
    Guard an update rule: the incoming state must match the network size
    and the outgoing one may only hold 0 and 1.
    """
    name = func.__name__

    @wraps(func)
    def wrapper(game: Game, state: np.ndarray, rng: np.random.Generator) -> StepResult:
        if state.shape != (game.network.n,):
            raise InvalidInputError(
                f"Scheduler '{name}' got a state of shape {state.shape} "
                f"for a network of {game.network.n} agents."
            )
        result = func(game, state, rng)
        if not np.isin(result.state, (0, 1)).all():
            raise InvalidInputError(f"Scheduler '{name}' produced a non-binary state.")
        return result

    return wrapper


def get_scheduler(name: str) -> Scheduler:
    """
    Look up the update rule behind a `SimConfig.update_mode` value.

    Args:
        name (str): An update mode such as "synchronous".

    Returns:
        Scheduler: The state-checked scheduler that advances one generation.

    Raises:
        UndefinedSchedulerError: If no update rule goes by that name.
    """
    scheduler = __scheduler_registry.get(name)
    if scheduler is None:
        raise UndefinedSchedulerError(name)
    return scheduler


def register_scheduler(name: str, scheduler_func: Scheduler):
    """
    Make an update rule available as a `SimConfig.update_mode`.

    The rule is wrapped so that states of the wrong length are refused and
    non-binary results are caught before they reach the trajectory.

    Args:
        name (str): The update mode it answers to.
        scheduler_func (Scheduler): Takes a game, a state and a random stream
            and returns one generation's `StepResult`.

    Raises:
        ValueError: If the update mode is already taken.
    """
    if name in __scheduler_registry:
        raise ValueError(f"The '{name}' scheduler has already been registered.")
    __scheduler_registry[name] = __validate_state(scheduler_func)


def list_schedulers() -> list[str]:
    """Update modes accepted by `validate_sim_config`, built-ins first."""
    return list(__scheduler_registry.keys())


def step_synchronous(
    net: Network,
    state: np.ndarray,
    payoff_result: PayoffResult,
    tau: float,
    kappa: float,
    rng: np.random.Generator,
) -> StepResult:
    """
    Let every agent imitate one uniformly chosen neighbor at once.

    All adoption decisions read the state and the returns from before the
    step. An agent is flagged as changed only when the adopted state differs
    from its old one.
    """
    has_neighbors = net.degrees > 0
    offsets = (rng.random(net.n) * net.degrees).astype(np.int64)
    models = np.arange(net.n)
    models[has_neighbors] = net.indices[
        net.indptr[:-1][has_neighbors] + offsets[has_neighbors]
    ]

    returns = payoff_result.ret
    probs = fermi_probs(returns, returns[models], tau, kappa)
    adopt = (rng.random(net.n) < probs) & has_neighbors

    new_state = np.where(adopt, state[models], state).astype(np.int8)
    return StepResult(new_state, new_state != state)


def step_asynchronous(game: Game, state: np.ndarray, rng: np.random.Generator) -> StepResult:
    """
    One Monte Carlo sweep of random sequential updates.

    `n` times a random agent picks a random neighbor and applies the Fermi
    rule to returns recomputed from the current state. Pool capital is kept
    up to date incrementally, one investor column at a time.
    """
    net = game.network
    config = game.config
    investment = game.investment.matrix
    shares = 1.0 / (net.degrees + 1.0)

    state = state.astype(np.int8, copy=True)
    capital = investment @ state.astype(np.float64)
    changed = np.zeros(net.n, dtype=bool)

    agents = rng.integers(net.n, size=net.n)
    picks = rng.random(net.n)
    coins = rng.random(net.n)

    def current_return(i: int) -> float:
        pools = net.closed_indices[net.closed_indptr[i] : net.closed_indptr[i + 1]]
        return config.r * float(capital[pools] @ shares[pools]) - state[i]

    for i, pick, coin in zip(agents, picks, coins):
        if net.degrees[i] == 0:
            continue
        j = net.indices[net.indptr[i] + int(pick * net.degrees[i])]
        if state[i] == state[j]:
            continue
        if coin < fermi_prob(current_return(i), current_return(j), config.tau, config.kappa):
            delta = float(state[j] - state[i])
            column = slice(investment.indptr[i], investment.indptr[i + 1])
            capital[investment.indices[column]] += delta * investment.data[column]
            state[i] = state[j]
            changed[i] = True

    ensure_capital_conserved(capital, state)
    return StepResult(state, changed)


def __register(cls):
    """Load the update rules of `cls` into the registry at import time."""
    if hasattr(cls, "register_builtins"):
        cls.register_builtins()
    return cls


@__register
class _Schedulers:
    """The two update modes every simulation can pick from."""

    @staticmethod
    def synchronous(game: Game, state: np.ndarray, rng: np.random.Generator) -> StepResult:
        """
        Evaluate the whole round, then let every agent update simultaneously.

        Args:
            game (Game): Network, operators and parameters.
            state (np.ndarray): Current strategies.
            rng (np.random.Generator): Random stream of the run.

        Returns:
            StepResult: The next state and the per-agent change flags.
        """
        config = game.config
        return step_synchronous(
            game.network, state, game.payoffs(state), config.tau, config.kappa, rng
        )

    @staticmethod
    def asynchronous(game: Game, state: np.ndarray, rng: np.random.Generator) -> StepResult:
        """
        Random sequential updates, `n` of them per generation.

        Args:
            game (Game): Network, operators and parameters.
            state (np.ndarray): Current strategies.
            rng (np.random.Generator): Random stream of the run.

        Returns:
            StepResult: The state after the sweep and the agents that changed.
        """
        return step_asynchronous(game, state, rng)

    @classmethod
    def register_builtins(cls):
        """Each static method becomes an update mode under its own name."""
        for name, method in cls.__dict__.items():
            if isinstance(method, staticmethod):
                register_scheduler(name, method.__func__)
