import numpy as np
import pytest

from poolz import (
    Game,
    SimConfig,
    StepResult,
    build_lattice,
    get_scheduler,
    list_schedulers,
    register_scheduler,
)
from poolz.errors import InvalidInputError, UndefinedSchedulerError


def test_get_scheduler_undefined():
    with pytest.raises(UndefinedSchedulerError):
        get_scheduler("undefined_scheduler")


def test_register_scheduler_already_registered():
    synchronous = get_scheduler("synchronous")
    with pytest.raises(ValueError):
        register_scheduler("synchronous", synchronous)


def test_list_schedulers():
    assert list_schedulers()[:2] == ["synchronous", "asynchronous"]


def test_register_custom_scheduler():
    def frozen(game, state, rng):
        return StepResult(state.copy(), np.zeros(game.network.n, dtype=bool))

    register_scheduler("frozen", frozen)
    assert "frozen" in list_schedulers()

    game = Game.build(build_lattice(3), SimConfig())
    state = np.array([1, 0, 1, 0, 1, 0, 1, 0, 1], dtype=np.int8)
    result = get_scheduler("frozen")(game, state, np.random.default_rng(0))
    assert np.array_equal(result.state, state)


def test_scheduler_rejects_state_of_wrong_size():
    game = Game.build(build_lattice(3), SimConfig())
    step = get_scheduler("synchronous")
    with pytest.raises(InvalidInputError):
        step(game, np.ones(4, dtype=np.int8), np.random.default_rng(0))


def test_scheduler_rejects_non_binary_output():
    def broken(game, state, rng):
        return StepResult(state + 2, np.ones(game.network.n, dtype=bool))

    register_scheduler("broken", broken)
    game = Game.build(build_lattice(3), SimConfig())
    with pytest.raises(InvalidInputError):
        get_scheduler("broken")(game, np.ones(9, dtype=np.int8), np.random.default_rng(0))


@pytest.mark.parametrize("name", ["synchronous", "asynchronous"])
def test_builtin_schedulers_produce_binary_states(name):
    game = Game.build(build_lattice(6), SimConfig(r=3.8))
    rng = np.random.default_rng(4)
    state = rng.integers(0, 2, size=36).astype(np.int8)
    step = get_scheduler(name)
    for _ in range(10):
        result = step(game, state, rng)
        assert result.state.dtype == np.int8
        assert result.changed.shape == (36,)
        state = result.state


def test_synchronous_change_flags_match_state_difference():
    game = Game.build(build_lattice(6), SimConfig(r=3.8))
    rng = np.random.default_rng(5)
    state = rng.integers(0, 2, size=36).astype(np.int8)
    result = get_scheduler("synchronous")(game, state, rng)
    assert np.array_equal(result.changed, result.state != state)


def test_asynchronous_flags_every_net_change():
    game = Game.build(build_lattice(6), SimConfig(r=3.8, update_mode="asynchronous"))
    rng = np.random.default_rng(6)
    state = rng.integers(0, 2, size=36).astype(np.int8)
    result = get_scheduler("asynchronous")(game, state, rng)
    assert np.all(result.changed[result.state != state])
