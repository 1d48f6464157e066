from dataclasses import dataclass

import numpy as np
from scipy.special import expit

from poolz._graph import Network
from poolz._payoffs import (
    InvestmentOperator,
    PayoffResult,
    SharingOperator,
    attractiveness,
    build_investment_operator,
    build_sharing_operator,
    ensure_conservation,
    evaluate,
)
from poolz.errors import InvalidInputError

# Beyond this |(R_i - R_j + tau) / kappa| the adoption probability is exactly 0 or 1
SATURATION = 700.0


@dataclass(frozen=True)
class SimConfig:
    r: float = 1.0
    alpha: float = 0.0
    tau: float = 0.1
    kappa: float = 0.1
    generations: int = 25000
    transient: int = 20000
    init_coop_density: float = 0.5
    update_mode: str = "synchronous"
    seed: int = 0


@dataclass(frozen=True, eq=False)
class StepResult:
    state: np.ndarray
    changed: np.ndarray


@dataclass(frozen=True, eq=False)
class Game:
    """Everything a scheduler needs for one (network, alpha, r) setting."""

    network: Network
    investment: InvestmentOperator
    sharing: SharingOperator
    config: SimConfig

    @classmethod
    def build(cls, net: Network, config: SimConfig) -> "Game":
        profile = attractiveness(net, config.alpha)
        return cls(
            net,
            build_investment_operator(net, profile),
            build_sharing_operator(net),
            config,
        )

    def payoffs(self, state) -> PayoffResult:
        result = evaluate(self.investment, self.sharing, state, self.config.r)
        ensure_conservation(result, state, self.config.r)
        return result


def fermi_probs(r_i, r_j, tau: float, kappa: float) -> np.ndarray:
    """
    Probability that an agent with return `r_i` adopts the state of a
    neighbor with return `r_j`, given a cost of change `tau` and noise `kappa`.

    `kappa == 0` is the deterministic limit: adopt when the neighbor is ahead
    by more than `tau`, toss a fair coin on a tie.
    """
    if kappa < 0:
        raise InvalidInputError(f"Noise kappa must be nonnegative, got {kappa}.")
    r_i = np.asarray(r_i, dtype=np.float64)
    r_j = np.asarray(r_j, dtype=np.float64)

    if kappa == 0:
        gap = r_j - r_i
        return np.where(gap > tau, 1.0, np.where(gap == tau, 0.5, 0.0))

    x = (r_i - r_j + tau) / kappa
    probs = expit(-np.clip(x, -SATURATION, SATURATION))
    probs = np.where(x > SATURATION, 0.0, np.where(x < -SATURATION, 1.0, probs))
    return np.clip(probs, 0.0, 1.0)


def fermi_prob(r_i: float, r_j: float, tau: float, kappa: float) -> float:
    return float(fermi_probs(r_i, r_j, tau, kappa))


def random_state(n: int, density: float, rng: np.random.Generator) -> np.ndarray:
    return (rng.random(n) < density).astype(np.int8)
