"""Flat-file output of eigenvalue tables (CSV and JSON).

Floats are written with repr(), the shortest round-trip form, so output
files are byte-stable across runs of the same inputs.
"""

from __future__ import annotations

import io
import json
import math

from .harmonics import ModeEigenvalue

MODE_COLUMNS = (
    "eps",
    "j",
    "k",
    "q",
    "family",
    "multiplicity",
    "sigma",
    "eps_sigma",
    "eps_logeps_sigma",
)


def mode_rows(eps: float, modes: list[ModeEigenvalue]) -> list[dict]:
    rows = []
    for m in modes:
        rows.append(
            {
                "eps": eps,
                "j": m.j,
                "k": m.k,
                "q": m.q,
                "family": m.family,
                "multiplicity": m.multiplicity,
                "sigma": m.value,
                "eps_sigma": eps * m.value,
                "eps_logeps_sigma": eps * abs(math.log(eps)) * m.value,
            }
        )
    return rows


def _cell(value) -> str:
    if isinstance(value, float):
        return repr(value)
    return str(value)


def write_csv(rows: list[dict], columns: tuple[str, ...], out: io.TextIOBase) -> None:
    out.write(",".join(columns) + "\n")
    for row in rows:
        out.write(",".join(_cell(row[c]) for c in columns) + "\n")


def write_json(obj, out: io.TextIOBase) -> None:
    json.dump(obj, out, indent=2, sort_keys=True)
    out.write("\n")
