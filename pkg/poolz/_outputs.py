import logging
from pathlib import Path

import numpy as np
import pandas as pd

from poolz._config import ExperimentSpec, render_config
from poolz.errors import InvalidInputError

logger = logging.getLogger(__name__)

FLOAT_FORMAT = "%.12g"


def prepare_directory(out: str | Path) -> Path:
    path = Path(out)
    path.mkdir(parents=True, exist_ok=True)
    return path


def write_config(spec: ExperimentSpec, directory: Path) -> Path:
    path = directory / "config.txt"
    path.write_text(render_config(spec))
    return path


def write_table(
    table: pd.DataFrame, directory: Path, name: str, gnuplot: bool = False
) -> Path:
    path = directory / f"{name}.csv"
    table.to_csv(path, index=False, float_format=FLOAT_FORMAT, lineterminator="\n")
    logger.info("Wrote %s (%d rows)", path, len(table))
    if gnuplot:
        write_gnuplot(table, directory, name)
    return path


def write_gnuplot(table: pd.DataFrame, directory: Path, name: str) -> Path:
    """
    Emit a minimal script plotting every other column against the first.
    """
    columns = list(table.columns)
    plots = ", ".join(
        f"'{name}.csv' using 1:{i + 1} with linespoints title '{column}'"
        for i, column in enumerate(columns[1:], start=1)
    )
    script = (
        "set datafile separator ','\n"
        "set key autotitle columnhead\n"
        f"set xlabel '{columns[0]}'\n"
        "set terminal pngcairo size 800,600\n"
        f"set output '{name}.png'\n"
        f"plot {plots}\n"
    )
    path = directory / f"{name}.gp"
    path.write_text(script)
    return path


def write_pgm(grid: np.ndarray, path: Path) -> Path:
    rows, columns = grid.shape
    header = f"P5\n{columns} {rows}\n255\n".encode("ascii")
    path.write_bytes(header + np.ascontiguousarray(grid, dtype=np.uint8).tobytes())
    logger.info("Wrote %s", path)
    return path


def read_state_table(path: str | Path) -> np.ndarray:
    table = pd.read_csv(path)
    if "state" not in table.columns:
        raise InvalidInputError(f"{path} has no 'state' column.")
    return table["state"].to_numpy()
