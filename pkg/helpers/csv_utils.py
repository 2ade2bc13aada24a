"""
CSV emission for sweeps and validation reports.

Every float is written with 17 significant digits so that a sweep re-read
from disk compares exactly with the in-memory values.
"""

from pathlib import Path
from typing import Iterable, Optional, TextIO, Union

import pandas as pd

from core_logic.types import PressureResult


SWEEP_COLUMNS = ["variable", "pressure_N_per_m2", "est_error", "tail_fraction"]
FLOAT_FORMAT = "%.17g"
ABORT_MARKER = "# ABORTED"


def sweep_frame(values: Iterable[float], results: Iterable[PressureResult], magnitude: bool = False) -> pd.DataFrame:
    """One row per completed sweep point, in sweep order."""
    rows = [
        {
            "variable": float(value),
            "pressure_N_per_m2": result.magnitude if magnitude else result.pressure,
            "est_error": result.est_error,
            "tail_fraction": result.tail_fraction,
        }
        for value, result in zip(values, results)
    ]
    return pd.DataFrame(rows, columns=SWEEP_COLUMNS)


def write_sweep_csv(
    frame: pd.DataFrame,
    destination: Union[str, Path, TextIO],
    aborted: Optional[str] = None,
) -> None:
    """
    Write a sweep table; when `aborted` is given the rows are the partial
    output and a trailing `# ABORTED ...` line says why the sweep stopped.
    """
    text = frame.to_csv(index=False, float_format=FLOAT_FORMAT, lineterminator="\n")
    if aborted is not None:
        text += f"{ABORT_MARKER} {aborted}\n"
    if isinstance(destination, (str, Path)):
        Path(destination).write_text(text, encoding="utf-8")
    else:
        destination.write(text)


def read_sweep_csv(path: Union[str, Path]) -> pd.DataFrame:
    """Read a sweep CSV back, skipping the abort marker if present."""
    return pd.read_csv(path, comment="#")


def write_frame_csv(frame: pd.DataFrame, destination: Union[str, Path, TextIO]) -> None:
    frame.to_csv(destination, index=False, float_format=FLOAT_FORMAT, lineterminator="\n")
