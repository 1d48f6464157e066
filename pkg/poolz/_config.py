import math
from dataclasses import dataclass, field, replace
from typing import Callable

from poolz._dynamics import validate_sim_config
from poolz._game import SimConfig
from poolz._graph import GraphSpec, validate_graph_spec
from poolz.errors import InvalidExperimentError, InvalidSpecError

UPDATE_MODES = {
    "sync": "synchronous",
    "synchronous": "synchronous",
    "async": "asynchronous",
    "asynchronous": "asynchronous",
}


@dataclass(frozen=True)
class ExperimentSpec:
    graph: GraphSpec = field(default_factory=GraphSpec)
    sim: SimConfig = field(default_factory=SimConfig)
    alphas: tuple[float, ...] = (0.0,)
    rs: tuple[float, ...] = (1.0,)
    realizations: int = 1
    out: str = "results"
    workers: int = 1
    pii_r: float = 1.0
    bins: int = 50
    gnuplot: bool = False


def format_float(value: float) -> str:
    return f"{value:.12g}"


def parse_values(text: str) -> tuple[float, ...]:
    """
    Parse a comma list (`-2,-1,0`) or an inclusive `lo:hi:step` range.
    """
    text = text.strip()
    if ":" in text:
        lo, hi, step = (float(part) for part in text.split(":"))
        if step <= 0 or hi < lo:
            raise ValueError(f"bad range '{text}'")
        count = int(math.floor((hi - lo) / step + 1e-9)) + 1
        return tuple(float(format_float(lo + k * step)) for k in range(count))
    return tuple(float(part) for part in text.split(",") if part.strip())


def _parse_bool(text: str) -> bool:
    if text.lower() in ("1", "true", "yes", "on"):
        return True
    if text.lower() in ("0", "false", "no", "off"):
        return False
    raise ValueError(f"expected a boolean, got '{text}'")


def _parse_update(text: str) -> str:
    if text not in UPDATE_MODES:
        raise ValueError(f"expected one of {', '.join(UPDATE_MODES)}, got '{text}'")
    return UPDATE_MODES[text]


# key -> (section, field, parser)
_KEYS: dict[str, tuple[str, str, Callable[[str], object]]] = {
    "net": ("graph", "kind", str),
    "side": ("graph", "side", int),
    "n": ("graph", "n", int),
    "m0": ("graph", "m0", int),
    "m": ("graph", "m", int),
    "r": ("spec", "rs", parse_values),
    "alpha": ("spec", "alphas", parse_values),
    "tau": ("sim", "tau", float),
    "kappa": ("sim", "kappa", float),
    "generations": ("sim", "generations", int),
    "transient": ("sim", "transient", int),
    "density": ("sim", "init_coop_density", float),
    "update": ("sim", "update_mode", _parse_update),
    "seed": ("sim", "seed", int),
    "realizations": ("spec", "realizations", int),
    "workers": ("spec", "workers", int),
    "out": ("spec", "out", str),
    "pii_r": ("spec", "pii_r", float),
    "bins": ("spec", "bins", int),
    "gnuplot": ("spec", "gnuplot", _parse_bool),
}


def parse_config_text(text: str) -> dict[str, str]:
    """Read `key = value` lines; `#` starts a comment."""
    mapping = dict()
    for number, line in enumerate(text.splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        if not sep:
            raise InvalidExperimentError(
                [InvalidSpecError(f"config:{number}", "expected 'key = value'")]
            )
        mapping[key.strip()] = value.strip()
    return mapping


def apply_overrides(
    spec: ExperimentSpec, overrides: dict[str, str]
) -> tuple[ExperimentSpec, list[InvalidSpecError]]:
    """
    Apply string overrides to a spec, collecting every problem instead of
    stopping at the first one.
    """
    validation_errors = list()
    sections: dict[str, dict[str, object]] = {"graph": {}, "sim": {}, "spec": {}}
    for key, text in overrides.items():
        if key not in _KEYS:
            validation_errors.append(InvalidSpecError(key, "unknown key"))
            continue
        section, name, parser = _KEYS[key]
        try:
            sections[section][name] = parser(text)
        except ValueError as e:
            validation_errors.append(InvalidSpecError(key, str(e)))

    spec = replace(
        spec,
        graph=replace(spec.graph, **sections["graph"]),
        sim=replace(spec.sim, **sections["sim"]),
        **sections["spec"],
    )
    spec = replace(spec, graph=replace(spec.graph, seed=spec.sim.seed))
    return spec, validation_errors


def resolve_spec(*layers: dict[str, str]) -> ExperimentSpec:
    """
    Fold override layers onto the defaults, later layers winning, and
    validate the result.
    """
    spec = ExperimentSpec()
    validation_errors = list()
    for layer in layers:
        spec, errors = apply_overrides(spec, layer)
        validation_errors.extend(errors)
    validation_errors.extend(validate_experiment_spec(spec))
    if validation_errors:
        raise InvalidExperimentError(validation_errors)
    return spec


def validate_experiment_spec(spec: ExperimentSpec) -> list[InvalidSpecError]:
    validation_errors = list()
    validation_errors.extend(validate_graph_spec(spec.graph))
    # r and alpha come from the sweep axes; the sim defaults only need to be sane.
    validation_errors.extend(
        error
        for error in validate_sim_config(spec.sim)
        if error.path not in ("sim.r", "sim.alpha")
    )
    validation_errors.extend(_validate_axis(spec.rs, "sweep.r", nonnegative=True))
    validation_errors.extend(_validate_axis(spec.alphas, "sweep.alpha"))

    if spec.realizations < 1:
        validation_errors.append(
            InvalidSpecError("sweep.realizations", "must be at least 1")
        )
    if spec.workers < 1:
        validation_errors.append(InvalidSpecError("sweep.workers", "must be at least 1"))
    if spec.pii_r < 0:
        validation_errors.append(InvalidSpecError("pii.r", "must be nonnegative"))
    if spec.bins < 1:
        validation_errors.append(InvalidSpecError("pii.bins", "must be at least 1"))
    return validation_errors


def _validate_axis(
    values: tuple[float, ...], path: str, nonnegative: bool = False
) -> list[InvalidSpecError]:
    if not values:
        return [InvalidSpecError(path, "must hold at least one value")]

    validation_errors = list()
    for i, value in enumerate(values):
        if not math.isfinite(value):
            validation_errors.append(InvalidSpecError(f"{path}[{i}]", "must be finite"))
        elif nonnegative and value < 0:
            validation_errors.append(
                InvalidSpecError(f"{path}[{i}]", "must be nonnegative")
            )
    return validation_errors


def render_config(spec: ExperimentSpec) -> str:
    """Render every resolved field in the format `parse_config_text` reads."""
    values = {
        "net": spec.graph.kind,
        "side": str(spec.graph.side),
        "n": str(spec.graph.n),
        "m0": str(spec.graph.m0),
        "m": str(spec.graph.m),
        "r": ",".join(format_float(r) for r in spec.rs),
        "alpha": ",".join(format_float(alpha) for alpha in spec.alphas),
        "tau": format_float(spec.sim.tau),
        "kappa": format_float(spec.sim.kappa),
        "generations": str(spec.sim.generations),
        "transient": str(spec.sim.transient),
        "density": format_float(spec.sim.init_coop_density),
        "update": spec.sim.update_mode,
        "seed": str(spec.sim.seed),
        "realizations": str(spec.realizations),
        "workers": str(spec.workers),
        "out": spec.out,
        "pii_r": format_float(spec.pii_r),
        "bins": str(spec.bins),
        "gnuplot": "true" if spec.gnuplot else "false",
    }
    return "".join(f"{key} = {values[key]}\n" for key in sorted(values))
