import logging
from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations
from typing import Iterator, Literal

import numpy as np
from scipy.sparse import csr_array
from scipy.sparse.csgraph import connected_components

from poolz.errors import InvalidInputError, InvalidSpecError

logger = logging.getLogger(__name__)

GraphKind = Literal["lattice", "ba"]
GRAPH_KINDS: tuple[str, ...] = ("lattice", "ba")

RngLike = np.random.Generator | int | None


@dataclass(frozen=True)
class GraphSpec:
    """
    Recipe for one underlying network of contacts.

    `side` is used by the periodic lattice; `n`, `m0` and `m` by the
    Barabasi-Albert generator. `seed` feeds the generator when no explicit
    random stream is supplied.
    """

    kind: GraphKind = "lattice"
    side: int = 30
    n: int = 4000
    m0: int = 5
    m: int = 2
    seed: int = 0

    @property
    def size(self) -> int:
        return self.side * self.side if self.kind == "lattice" else self.n


@dataclass(frozen=True, eq=False)
class Network:
    """
    Immutable undirected simple graph in compressed neighbor-list form.

    The neighbors of agent `i` are `indices[indptr[i]:indptr[i + 1]]`, sorted
    ascending.
    """

    n: int
    indptr: np.ndarray = field(repr=False)
    indices: np.ndarray = field(repr=False)
    degrees: np.ndarray = field(repr=False)

    def __post_init__(self):
        for array in (self.indptr, self.indices, self.degrees):
            array.flags.writeable = False

    @classmethod
    def from_edges(cls, n: int, edges) -> "Network":
        edges = np.asarray(edges, dtype=np.int64).reshape(-1, 2)
        if n < 1:
            raise InvalidInputError("A network needs at least one agent.")
        if edges.size and (edges.min() < 0 or edges.max() >= n):
            raise InvalidInputError(f"Edge endpoint out of range for n={n}.")
        if np.any(edges[:, 0] == edges[:, 1]):
            raise InvalidInputError("Self-edges are not allowed.")

        lo = np.minimum(edges[:, 0], edges[:, 1])
        hi = np.maximum(edges[:, 0], edges[:, 1])
        if np.unique(lo * n + hi).size != len(edges):
            raise InvalidInputError("Duplicate edges are not allowed.")

        src = np.concatenate([lo, hi])
        dst = np.concatenate([hi, lo])
        order = np.lexsort((dst, src))
        degrees = np.bincount(src, minlength=n).astype(np.int64)
        indptr = np.concatenate([[0], np.cumsum(degrees)]).astype(np.int64)
        return cls(n, indptr, dst[order].astype(np.int64), degrees)

    @property
    def n_edges(self) -> int:
        return len(self.indices) // 2

    def neighbors(self, i: int) -> np.ndarray:
        self._check_agent(i)
        return self.indices[self.indptr[i] : self.indptr[i + 1]]

    def degree(self, i: int) -> int:
        self._check_agent(i)
        return int(self.degrees[i])

    def edges(self) -> Iterator[tuple[int, int]]:
        for i in range(self.n):
            for j in self.indices[self.indptr[i] : self.indptr[i + 1]]:
                if i < j:
                    yield i, int(j)

    @cached_property
    def closed_indptr(self) -> np.ndarray:
        closed = np.concatenate([[0], np.cumsum(self.degrees + 1)]).astype(np.int64)
        closed.flags.writeable = False
        return closed

    @cached_property
    def closed_indices(self) -> np.ndarray:
        """Closed neighborhoods laid out back to back, each self first."""
        closed = np.empty(len(self.indices) + self.n, dtype=np.int64)
        starts = self.closed_indptr[:-1]
        closed[starts] = np.arange(self.n)
        mask = np.ones(len(closed), dtype=bool)
        mask[starts] = False
        closed[mask] = self.indices
        closed.flags.writeable = False
        return closed

    def adjacency(self) -> csr_array:
        data = np.ones(len(self.indices), dtype=np.int8)
        return csr_array((data, self.indices.copy(), self.indptr.copy()), shape=(self.n, self.n))

    def is_connected(self) -> bool:
        count, _ = connected_components(self.adjacency(), directed=False)
        return count == 1

    def _check_agent(self, i: int):
        if not 0 <= i < self.n:
            raise IndexError(f"Agent {i} is out of range for a network of {self.n}.")


def closed_neighborhood(net: Network, i: int) -> list[int]:
    return [i, *(int(j) for j in net.neighbors(i))]


def validate_graph_spec(spec: GraphSpec) -> list[InvalidSpecError]:
    validation_errors = list()
    if spec.kind not in GRAPH_KINDS:
        return [
            InvalidSpecError(
                "graph.kind", f"must be one of {', '.join(GRAPH_KINDS)}"
            )
        ]

    if spec.kind == "lattice":
        if spec.side < 3:
            validation_errors.append(
                InvalidSpecError("graph.side", "lattice side must be at least 3")
            )
        return validation_errors

    if spec.m < 1:
        validation_errors.append(InvalidSpecError("graph.m", "must be at least 1"))
    if spec.m0 < 2:
        validation_errors.append(
            InvalidSpecError("graph.m0", "seed graph needs at least 2 vertices")
        )
    if spec.m > spec.m0:
        validation_errors.append(InvalidSpecError("graph.m", "must not exceed m0"))
    if spec.n < spec.m0:
        validation_errors.append(InvalidSpecError("graph.n", "must be at least m0"))
    return validation_errors


def build_lattice(side: int) -> Network:
    if errors := validate_graph_spec(GraphSpec(kind="lattice", side=side)):
        raise errors[0]

    grid = np.arange(side * side).reshape(side, side)
    right = np.roll(grid, -1, axis=1)
    down = np.roll(grid, -1, axis=0)
    edges = np.concatenate(
        [
            np.stack([grid.ravel(), right.ravel()], axis=1),
            np.stack([grid.ravel(), down.ravel()], axis=1),
        ]
    )
    return Network.from_edges(side * side, edges)


def build_ba(n: int, m0: int, m: int, rng: RngLike = None) -> Network:
    """
    Grow a Barabasi-Albert graph from a complete seed graph on `m0` vertices.

    Every new vertex attaches `m` distinct edges. Targets are drawn uniformly
    from the list of edge endpoints, so a vertex is hit with probability
    proportional to its degree; repeated targets within one step are
    redrawn. Endpoints of the new edges only join the list after the step.
    """
    if errors := validate_graph_spec(GraphSpec(kind="ba", n=n, m0=m0, m=m)):
        raise errors[0]
    rng = np.random.default_rng(rng)

    seed_edges = list(combinations(range(m0), 2))
    n_edges = len(seed_edges) + (n - m0) * m
    edges = np.empty((n_edges, 2), dtype=np.int64)
    endpoints = np.empty(2 * n_edges, dtype=np.int64)

    edges[: len(seed_edges)] = seed_edges
    endpoints[: 2 * len(seed_edges)] = edges[: len(seed_edges)].ravel()
    filled = 2 * len(seed_edges)
    e = len(seed_edges)

    for vertex in range(m0, n):
        targets: list[int] = []
        while len(targets) < m:
            target = int(endpoints[rng.integers(filled)])
            if target not in targets:
                targets.append(target)
        for target in targets:
            edges[e] = (target, vertex)
            endpoints[filled] = target
            endpoints[filled + 1] = vertex
            filled += 2
            e += 1

    logger.debug("Built BA network n=%d m0=%d m=%d edges=%d", n, m0, m, n_edges)
    return Network.from_edges(n, edges)


def build_network(spec: GraphSpec, rng: RngLike = None) -> Network:
    if errors := validate_graph_spec(spec):
        raise errors[0]
    if spec.kind == "lattice":
        return build_lattice(spec.side)
    return build_ba(spec.n, spec.m0, spec.m, spec.seed if rng is None else rng)


def degree_histogram(net: Network) -> tuple[np.ndarray, np.ndarray]:
    return np.unique(net.degrees, return_counts=True)


def dump_edge_list(net: Network) -> str:
    lines = [f"{net.n} {net.n_edges}"]
    lines.extend(f"{i} {j}" for i, j in net.edges())
    return "\n".join(lines) + "\n"


def load_edge_list(text: str) -> Network:
    rows = [line.split() for line in text.splitlines() if line.strip()]
    if not rows or len(rows[0]) != 2:
        raise InvalidInputError("Edge list must start with a 'n m_edges' header.")

    try:
        n, n_edges = int(rows[0][0]), int(rows[0][1])
        edges = [(int(i), int(j)) for i, j in rows[1:]]
    except ValueError as e:
        raise InvalidInputError(f"Malformed edge list: {e}") from e

    if len(edges) != n_edges:
        raise InvalidInputError(
            f"Edge list header announces {n_edges} edges but {len(edges)} follow."
        )
    return Network.from_edges(n, edges)
