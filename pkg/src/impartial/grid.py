"""Tables of the exact worst-case guarantee over parameter ranges."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

from .assignment import assignment_guarantee
from .errors import ParameterError
from .selection import selection_guarantee

GRID_MODES = ("select", "assign")


@dataclass(frozen=True)
class GridCell:
    n: int
    k: int
    m: int | None
    alpha: Fraction | None

    def to_json_dict(self) -> dict:
        doc: dict = {"n": self.n, "k": self.k}
        if self.m is not None:
            doc["m"] = self.m
        if self.alpha is None:
            doc["alpha"] = None
        else:
            doc["alpha"] = str(self.alpha)
            doc["alpha_decimal"] = float(self.alpha)
        return doc


@dataclass(frozen=True)
class GuaranteeGrid:
    mode: str
    cells: tuple[GridCell, ...]

    def to_tsv(self) -> str:
        with_m = self.mode == "assign"
        header = ["n", "k"] + (["m"] if with_m else []) + [
            "alpha_num",
            "alpha_den",
            "alpha_decimal",
        ]
        lines = ["\t".join(header)]
        for cell in self.cells:
            row = [str(cell.n), str(cell.k)]
            if with_m:
                row.append(str(cell.m))
            if cell.alpha is None:
                row.extend(["n/a", "n/a", "n/a"])
            else:
                row.extend(
                    [
                        str(cell.alpha.numerator),
                        str(cell.alpha.denominator),
                        f"{float(cell.alpha):.6f}",
                    ]
                )
            lines.append("\t".join(row))
        return "\n".join(lines) + "\n"

    def to_json_dict(self) -> dict:
        return {"mode": self.mode, "cells": [cell.to_json_dict() for cell in self.cells]}


def alpha_grid(
    n_values: Iterable[int],
    k_values: Iterable[int],
    mode: str = "select",
    m: int = 1,
) -> GuaranteeGrid:
    """Evaluate the guarantee on every (n, k) pair; cells outside the covered
    parameter range carry no value."""
    if mode not in GRID_MODES:
        raise ParameterError(f"mode must be one of {', '.join(GRID_MODES)}, got {mode!r}")
    cells = []
    for n in n_values:
        for k in k_values:
            try:
                if mode == "select":
                    alpha = selection_guarantee(n, k)
                else:
                    alpha = assignment_guarantee(n, m, k)
            except ParameterError:
                alpha = None
            cells.append(GridCell(n, k, m if mode == "assign" else None, alpha))
    return GuaranteeGrid(mode, tuple(cells))
