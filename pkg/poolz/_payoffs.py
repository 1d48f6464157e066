import math
from dataclasses import dataclass, field

import numpy as np
from scipy.sparse import csc_array

from poolz._graph import Network, closed_neighborhood
from poolz.errors import ConservationError, InvalidInputError

# Relative tolerance for the capital and payoff conservation checks
CONSERVATION_RTOL = 1e-9


@dataclass(frozen=True, eq=False)
class AttractivenessProfile:
    alpha: float
    log_values: np.ndarray = field(repr=False)

    def __post_init__(self):
        self.log_values.flags.writeable = False

    def __len__(self):
        return len(self.log_values)

    @property
    def values(self) -> np.ndarray:
        # May overflow to inf for large |alpha|; operators work from log_values.
        with np.errstate(over="ignore"):
            return np.exp(self.log_values)


@dataclass(frozen=True, eq=False)
class InvestmentOperator:
    """Column-stochastic a_ij: the share of investor j's capital sent to pool i."""

    matrix: csc_array = field(repr=False)

    def __post_init__(self):
        _freeze(self.matrix)

    @property
    def n(self) -> int:
        return self.matrix.shape[0]


@dataclass(frozen=True, eq=False)
class SharingOperator:
    """Column-stochastic b_ij = 1/(k_j + 1): agent i's share of pool j's profit."""

    matrix: csc_array = field(repr=False)

    def __post_init__(self):
        _freeze(self.matrix)

    @property
    def n(self) -> int:
        return self.matrix.shape[0]


@dataclass(frozen=True, eq=False)
class PayoffResult:
    capital: np.ndarray
    payoff: np.ndarray
    ret: np.ndarray


def _freeze(matrix: csc_array):
    for array in (matrix.data, matrix.indices, matrix.indptr):
        array.flags.writeable = False


def validate_state(s, n: int) -> np.ndarray:
    state = np.asarray(s)
    if state.shape != (n,):
        raise InvalidInputError(f"State vector must have length {n}, got {state.shape}.")
    if not np.isin(state, (0, 1)).all():
        raise InvalidInputError("State vector may only hold 0 (defect) or 1 (cooperate).")
    return state.astype(np.int8)


def attractiveness(net: Network, alpha: float) -> AttractivenessProfile:
    if not math.isfinite(alpha):
        raise InvalidInputError(f"Investment strategy alpha must be finite, got {alpha}.")
    return AttractivenessProfile(float(alpha), alpha * np.log(net.degrees + 1.0))


def build_investment_operator(
    net: Network, prof: AttractivenessProfile
) -> InvestmentOperator:
    if len(prof) != net.n:
        raise InvalidInputError(
            f"Attractiveness profile has {len(prof)} pools but the network has {net.n} agents."
        )

    # Closed neighborhoods are symmetric, so column j's rows are N(j).
    rows = net.closed_indices
    starts = net.closed_indptr[:-1]
    columns = np.repeat(np.arange(net.n), net.degrees + 1)
    # Shifted by the column maximum in log space: the largest pool gets weight
    # exactly 1 and equal pools stay equal.
    log_weights = prof.log_values[rows]
    weights = np.exp(log_weights - np.maximum.reduceat(log_weights, starts)[columns])
    totals = np.add.reduceat(weights, starts)
    return InvestmentOperator(_sorted_csc(weights / totals[columns], net))


def build_sharing_operator(net: Network) -> SharingOperator:
    columns = np.repeat(np.arange(net.n), net.degrees + 1)
    shares = 1.0 / (net.degrees[columns] + 1.0)
    return SharingOperator(_sorted_csc(shares, net))


def _sorted_csc(data: np.ndarray, net: Network) -> csc_array:
    # The network's index arrays are read-only and list self first;
    # sort_indices works in place, so the matrix gets its own copies.
    matrix = csc_array(
        (data, net.closed_indices.copy(), net.closed_indptr.copy()),
        shape=(net.n, net.n),
    )
    matrix.sort_indices()
    return matrix


def evaluate(
    inv: InvestmentOperator, share: SharingOperator, s, r: float
) -> PayoffResult:
    if inv.n != share.n:
        raise InvalidInputError(
            f"Operator dimensions differ: investment {inv.n}, sharing {share.n}."
        )
    if r < 0:
        raise InvalidInputError(f"Interest rate must be nonnegative, got {r}.")
    state = validate_state(s, inv.n)

    capital = inv.matrix @ state.astype(np.float64)
    payoff = r * (share.matrix @ capital)
    return PayoffResult(capital, payoff, payoff - state)


def _conserved(total: float, expected: float) -> bool:
    return math.isclose(total, expected, rel_tol=CONSERVATION_RTOL, abs_tol=1e-12)


def check_conservation(result: PayoffResult, s, r: float) -> bool:
    total_capital = float(result.capital.sum())
    return _conserved(total_capital, float(np.sum(s))) and _conserved(
        float(result.payoff.sum()), r * total_capital
    )


def ensure_capital_conserved(capital: np.ndarray, s):
    total, expected = float(capital.sum()), float(np.sum(s))
    if not _conserved(total, expected):
        raise ConservationError("capital", total, expected)


def ensure_conservation(result: PayoffResult, s, r: float):
    ensure_capital_conserved(result.capital, s)
    total, expected = float(result.payoff.sum()), r * float(result.capital.sum())
    if not _conserved(total, expected):
        raise ConservationError("payoff", total, expected)


def brute_force_payoffs(net: Network, alpha: float, s, r: float) -> PayoffResult:
    """
    Evaluate capital, payoff and return agent by agent, without matrices.

    Follows the model definition literally: investor j sends
    A_i * s_j / sum_{l in N(j)} A_l to every pool i in its closed
    neighborhood, pool i collects those amounts, and agent i receives
    r * C_j / (k_j + 1) from every pool j it belongs to.
    """
    state = validate_state(s, net.n)
    degrees = [int(k) for k in net.degrees]
    appeal = [math.exp(alpha * math.log(k + 1.0)) for k in degrees]
    portfolios = [closed_neighborhood(net, i) for i in range(net.n)]

    capital = [0.0] * net.n
    for j in range(net.n):
        if not state[j]:
            continue
        total = sum(appeal[l] for l in portfolios[j])
        for i in portfolios[j]:
            capital[i] += appeal[i] / total

    payoff = [
        sum(r * capital[j] / (degrees[j] + 1) for j in portfolios[i])
        for i in range(net.n)
    ]
    capital = np.array(capital)
    payoff = np.array(payoff)
    return PayoffResult(capital, payoff, payoff - state)


def own_share(net: Network, alpha: float, i: int, r: float) -> float:
    """Payoff a cooperator `i` earns back from its own unit investment."""
    portfolio = closed_neighborhood(net, i)
    log_appeal = {j: alpha * math.log(net.degree(j) + 1.0) for j in portfolio}
    top = max(log_appeal.values())
    appeal = {j: math.exp(v - top) for j, v in log_appeal.items()}
    total = sum(appeal.values())
    return sum(r * (appeal[j] / total) / (net.degree(j) + 1) for j in portfolio)
