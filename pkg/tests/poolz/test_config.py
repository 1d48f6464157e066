import pytest

from poolz import ExperimentSpec, GraphSpec, get_recipe, list_recipes, render_config, resolve_spec
from poolz._config import apply_overrides, parse_config_text, parse_values
from poolz.errors import InvalidExperimentError, InvalidSpecError, UndefinedRecipeError


def test_parse_values_list():
    assert parse_values("-2,-1,0,1") == (-2.0, -1.0, 0.0, 1.0)
    assert parse_values("3.8") == (3.8,)
    assert parse_values(" 1, 2 ,") == (1.0, 2.0)


def test_parse_values_range_is_inclusive():
    assert parse_values("1:2:0.25") == (1.0, 1.25, 1.5, 1.75, 2.0)
    assert parse_values("0.5:3:0.1")[-1] == 3.0
    assert len(parse_values("0.5:3:0.1")) == 26
    assert len(parse_values("1:7:0.25")) == 25
    assert parse_values("0.5:3:0.1")[2] == 0.7


def test_parse_values_rejects_bad_input():
    with pytest.raises(ValueError):
        parse_values("1:0:0.1")
    with pytest.raises(ValueError):
        parse_values("0:1:0")
    with pytest.raises(ValueError):
        parse_values("a,b")


def test_parse_config_text():
    text = "# desk-scale lattice\nnet = lattice\nside=10   # small\n\nr = 1:2:0.5\n"
    assert parse_config_text(text) == {"net": "lattice", "side": "10", "r": "1:2:0.5"}


def test_parse_config_text_rejects_bare_words():
    with pytest.raises(InvalidExperimentError) as e:
        parse_config_text("net = ba\nlattice\n")
    assert e.value == InvalidExperimentError(
        [InvalidSpecError("config:2", "expected 'key = value'")]
    )


def test_resolve_spec_defaults():
    spec = resolve_spec()
    assert spec == ExperimentSpec()
    assert spec.graph == GraphSpec()
    assert spec.sim.update_mode == "synchronous"
    assert spec.sim.generations == 25000
    assert spec.sim.transient == 20000


def test_resolve_spec_later_layers_win():
    spec = resolve_spec({"r": "1", "net": "ba", "n": "100"}, {"r": "2,3"})
    assert spec.rs == (2.0, 3.0)
    assert spec.graph.kind == "ba"
    assert spec.graph.n == 100


def test_resolve_spec_maps_flags_to_fields():
    spec = resolve_spec(
        {
            "update": "async",
            "density": "0.25",
            "seed": "11",
            "gnuplot": "yes",
            "pii_r": "2",
            "workers": "3",
        }
    )
    assert spec.sim.update_mode == "asynchronous"
    assert spec.sim.init_coop_density == 0.25
    assert spec.sim.seed == 11
    assert spec.graph.seed == 11
    assert spec.gnuplot is True
    assert spec.pii_r == 2.0
    assert spec.workers == 3


def test_resolve_spec_collects_every_error():
    with pytest.raises(InvalidExperimentError) as e:
        resolve_spec({"side": "2", "realizations": "0", "r": "1,-1", "color": "red"})
    assert e.value.errors == [
        InvalidSpecError("color", "unknown key"),
        InvalidSpecError("graph.side", "lattice side must be at least 3"),
        InvalidSpecError("sweep.r[1]", "must be nonnegative"),
        InvalidSpecError("sweep.realizations", "must be at least 1"),
    ]


def test_apply_overrides_reports_unparsable_values():
    spec, errors = apply_overrides(ExperimentSpec(), {"generations": "many", "update": "random"})
    assert spec == ExperimentSpec()
    assert [error.path for error in errors] == ["generations", "update"]


def test_resolve_spec_ignores_sim_defaults_for_the_swept_axes():
    spec = resolve_spec({"r": "0,5", "alpha": "-3,2", "generations": "10", "transient": "5"})
    assert spec.sim.r == 1.0
    assert spec.alphas == (-3.0, 2.0)


def test_render_config_round_trip():
    spec = resolve_spec(
        {"net": "ba", "n": "1000", "r": "1.2,1.6", "alpha": "-2,1", "update": "async", "out": "x"}
    )
    text = render_config(spec)
    assert "alpha = -2,1\n" in text
    assert "update = asynchronous\n" in text
    assert text.splitlines() == sorted(text.splitlines())
    assert resolve_spec(parse_config_text(text)) == spec


def test_recipes():
    assert list_recipes() == ["fig1", "fig2", "fig3", "fig4", "fig5"]

    fig1 = resolve_spec(get_recipe("fig1"))
    assert fig1.graph.kind == "lattice"
    assert fig1.graph.side == 30
    assert fig1.realizations == 40
    assert len(fig1.rs) == 25

    fig2 = resolve_spec(get_recipe("fig2"))
    assert fig2.alphas == (-2.0, -1.0, 0.0, 1.0)
    assert fig2.graph.n == 4000

    fig5 = resolve_spec(get_recipe("fig5"), {"generations": "100", "transient": "50"})
    assert fig5.rs == (1.6,)
    assert fig5.graph.n == 1000


def test_get_recipe_returns_a_copy():
    recipe = get_recipe("fig1")
    recipe["side"] = "3"
    assert get_recipe("fig1")["side"] == "30"


def test_get_recipe_undefined():
    with pytest.raises(UndefinedRecipeError):
        get_recipe("fig6")
