"""Frozen golden integral values (brute-force pre-build run, committed CSV).

The engine must reproduce each value within 1e-9; tests enforce this.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from importlib import resources


@dataclass(frozen=True)
class Golden:
    key: str
    value: complex
    bound: float


def load() -> dict:
    out = {}
    path = resources.files("oscint").joinpath("data/golden_values.csv")
    with path.open("r") as fh:
        for row in csv.DictReader(fh):
            out[row["key"]] = Golden(
                row["key"],
                complex(float(row["re"]), float(row["im"])),
                float(row["bound"]),
            )
    return out


GOLDEN = load()

G1 = GOLDEN["g1"].value        # ray rho=-2,   sigma=0, e^{+it}, a=1
G2 = GOLDEN["g2"].value        # ray rho=-3/2, sigma=0, e^{+it}, a=1
G3 = GOLDEN["g3"].value        # ray rho=-2,   sigma=1, e^{+it}, a=1
G4 = GOLDEN["g4"].value        # ray rho=-3/2, sigma=1, e^{-it}, a=1
FRESNEL = GOLDEN["fresnel"].value  # lim_T integral_0^T e^{i t^2} dt
SI20 = GOLDEN["si20"].value.real   # Si(20)
