import numpy as np
import pytest

from poolz import (
    Network,
    UpdateStats,
    build_ba,
    build_lattice,
    degree_rank_correlation,
    degree_resolved_states,
    effective_group_size,
    effective_group_size_curve,
    fraction_pii_above_one,
    hub_cooperation,
    l_alpha,
    l_alpha_all,
    neighbor_degree_breakdown,
    own_share,
    pii_by_degree,
    pii_distribution,
    pii_records,
    random_mixing_baseline,
    render_glyphs,
    same_state_edge_fraction,
    snapshot_lattice,
    update_frequency_by_degree,
)
from poolz.errors import InvalidInputError


@pytest.fixture(scope="module")
def ba() -> Network:
    return build_ba(20_000, 5, 2, rng=12)


def star(leaves: int) -> Network:
    return Network.from_edges(leaves + 1, [(0, leaf) for leaf in range(1, leaves + 1)])


def small_agent_between_hubs() -> Network:
    # Agent 0 has degree 2; both of its neighbors have degree 4.
    return Network.from_edges(
        9, [(0, 1), (0, 2), (1, 3), (1, 4), (1, 5), (2, 6), (2, 7), (2, 8)]
    )


def checkerboard(side: int) -> np.ndarray:
    x, y = np.divmod(np.arange(side * side), side)
    return ((x + y) % 2 == 0).astype(np.int8)


def test_l_alpha_on_lattice():
    net = build_lattice(5)
    for alpha in (-3, -1, 0, 0.5, 2):
        assert l_alpha(net, alpha, 7) == pytest.approx(0.2, abs=1e-15)
        assert l_alpha_all(net, alpha) == pytest.approx(np.full(25, 0.2), abs=1e-15)


def test_l_alpha_on_star():
    net = star(3)
    assert l_alpha(net, 1, 0) == pytest.approx(0.4, abs=1e-15)
    assert l_alpha(net, 1, 2) == pytest.approx(1 / 3, abs=1e-15)
    assert l_alpha_all(net, 1) == pytest.approx([0.4, 1 / 3, 1 / 3, 1 / 3], abs=1e-15)


def test_l_alpha_approaches_one_third_for_very_negative_alpha():
    net = small_agent_between_hubs()
    assert l_alpha(net, -30, 0) == pytest.approx(1 / 3, abs=1e-5)
    assert l_alpha(net, -800, 0) == pytest.approx(1 / 3, abs=1e-12)
    assert l_alpha_all(net, -800)[0] == pytest.approx(1 / 3, abs=1e-12)
    assert np.all(np.isfinite(l_alpha_all(net, 800)))


def test_l_alpha_scalar_matches_vectorized(ba):
    for alpha in (-2, -1, 0, 1):
        levels = l_alpha_all(ba, alpha)
        for i in (0, 1, 10, 500, 19_999):
            assert l_alpha(ba, alpha, i) == pytest.approx(levels[i], abs=1e-12)


def test_l_alpha_is_bounded_by_neighborhood_pool_sizes():
    net = build_ba(500, 5, 2, rng=9)
    inverse_sizes = 1.0 / (net.degrees[net.closed_indices] + 1.0)
    starts = net.closed_indptr[:-1]
    lower = np.minimum.reduceat(inverse_sizes, starts)
    upper = np.maximum.reduceat(inverse_sizes, starts)
    for alpha in np.linspace(-3, 3, 13):
        levels = l_alpha_all(net, alpha)
        assert np.all(levels >= lower - 1e-15)
        assert np.all(levels <= upper + 1e-15)
        assert np.all((levels > 0) & (levels < 1))


def test_self_return_matches_own_share():
    net = build_ba(200, 5, 2, rng=3)
    for alpha in (-2, 0, 1):
        records = pii_records(net, alpha, r=2.5)
        for record in records[::17]:
            assert record.p_ii == pytest.approx(
                own_share(net, alpha, record.agent, 2.5), abs=1e-12
            )
            assert record.p_ii == pytest.approx(2.5 * record.l_alpha, abs=1e-15)
            assert record.degree == net.degree(record.agent)


def test_effective_group_size_on_lattice():
    net = build_lattice(30)
    for alpha in (-2, 0, 1):
        assert effective_group_size(net, alpha) == pytest.approx(5.0, abs=1e-12)


def test_effective_group_size_straddles_lattice_value(ba):
    assert effective_group_size(ba, -2) < 5.0
    assert effective_group_size(ba, 1) > 5.0


def test_effective_group_size_grows_with_alpha(ba):
    curve = effective_group_size_curve(ba, np.linspace(-3, 2, 21))
    assert np.all(np.diff(curve) >= -1e-12)


def test_pii_by_degree(ba):
    profile = pii_by_degree(ba, -2)
    assert profile.counts.sum() == ba.n
    assert profile.degrees[0] == 2
    assert profile.at(2) > profile.at(3)
    assert len(profile.records) == ba.n

    assert degree_rank_correlation(pii_by_degree(ba, 1)) < 0


def test_pii_by_degree_scales_with_interest_rate():
    net = build_lattice(4)
    profile = pii_by_degree(net, 0, r=3.0)
    assert profile.degrees.tolist() == [4]
    assert profile.at(4) == pytest.approx(0.6, abs=1e-15)


def test_fraction_pii_above_one_on_lattice():
    net = build_lattice(10)
    grid = [0.0, 2.0, 4.9, 5.1, 8.0]
    assert fraction_pii_above_one(net, 0, grid).tolist() == [0.0, 0.0, 0.0, 1.0, 1.0]


def test_fraction_pii_above_one_properties(ba):
    grid = np.linspace(0, 10, 41)
    low = fraction_pii_above_one(ba, -2, grid)
    high = fraction_pii_above_one(ba, 1, grid)
    assert low[0] == 0.0
    assert np.all(np.diff(low) >= 0)
    assert np.all(np.diff(high) >= 0)
    assert np.all(low >= high)


def test_fraction_pii_above_one_rejects_descending_grid():
    with pytest.raises(InvalidInputError):
        fraction_pii_above_one(build_lattice(3), 0, [2.0, 1.0])


def test_pii_distribution_is_a_density():
    net = build_ba(2000, 5, 2, rng=1)
    edges, density = pii_distribution(net, -1, bins=30)
    assert len(edges) == 31
    assert len(density) == 30
    assert np.sum(density * np.diff(edges)) == pytest.approx(1.0, abs=1e-12)


def test_neighbor_degree_breakdown(ba):
    breakdown = neighbor_degree_breakdown(ba, -2, degree=3)
    assert len(breakdown) == np.sum(ba.degrees == 3)
    for entry in breakdown:
        assert len(entry.neighbor_degrees) == 3
        if entry.k_min >= 3:
            assert entry.p_ii <= 0.25 + 1e-15
    assert any(entry.k_min == 2 for entry in breakdown)
    assert max(entry.p_ii for entry in breakdown) > 0.25


def test_degree_resolved_states():
    net = build_ba(300, 5, 2, rng=2)
    cooperate = degree_resolved_states(net, np.ones(net.n, dtype=np.int8))
    assert np.all(cooperate.mean == 1.0)
    assert cooperate.counts.sum() == net.n
    defect = degree_resolved_states(net, np.zeros(net.n, dtype=np.int8))
    assert np.all(defect.mean == 0.0)

    only_hub = np.zeros(net.n, dtype=np.int8)
    only_hub[np.argmax(net.degrees)] = 1
    profile = degree_resolved_states(net, only_hub)
    assert profile.mean[-1] > 0
    assert profile.mean[0] == 0


def test_update_frequency_by_degree():
    net = star(3)
    stats = UpdateStats(np.array([0, 2, 4, 6]), 10)
    profile = update_frequency_by_degree(net, stats)
    assert profile.degrees.tolist() == [1, 3]
    assert profile.mean.tolist() == pytest.approx([0.4, 0.0])


def test_hub_cooperation():
    net = star(3)
    assert hub_cooperation(net, [1, 0, 0, 0], top=1) == 1.0
    assert hub_cooperation(net, [0, 1, 1, 1], top=1) == 0.0
    # Equal degrees break ties by agent id.
    assert hub_cooperation(net, [0, 1, 0, 0], top=2) == 0.5
    assert hub_cooperation(net, [0, 0, 1, 1], top=2) == 0.0


def test_same_state_edge_fraction():
    net = build_lattice(4)
    assert same_state_edge_fraction(net, checkerboard(4)) == 0.0
    assert same_state_edge_fraction(net, np.ones(16, dtype=np.int8)) == 1.0
    stripes = np.repeat([1, 0, 1, 0], 4)
    assert same_state_edge_fraction(net, stripes) == 0.5
    assert random_mixing_baseline(0.5) == 0.5
    assert random_mixing_baseline(1.0) == 1.0


def test_snapshot_lattice():
    assert np.all(snapshot_lattice(np.ones(9, dtype=np.int8), 3) == 0)
    grid = snapshot_lattice(checkerboard(4), 4)
    assert grid.dtype == np.uint8
    assert grid.shape == (4, 4)
    assert grid[0].tolist() == [0, 255, 0, 255]
    assert grid[1].tolist() == [255, 0, 255, 0]
    assert render_glyphs(grid[:2]) == "#.#.\n.#.#"


def test_snapshot_lattice_rejects_bad_state():
    with pytest.raises(InvalidInputError):
        snapshot_lattice(np.ones(10, dtype=np.int8), 3)
    with pytest.raises(InvalidInputError):
        snapshot_lattice(np.full(9, 2), 3)


def test_l_alpha_all_benchmark(benchmark):
    net = build_ba(100_000, 5, 2, rng=0)
    levels = benchmark(l_alpha_all, net, -2)
    assert levels.shape == (100_000,)
