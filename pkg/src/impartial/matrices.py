"""Weighted vote profiles: square matrices with a zero diagonal, and per-job tuples."""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence

from .errors import InstanceFormatError

Weight = int | float


@dataclass(frozen=True)
class WeightMatrix:
    """An n-by-n profile of non-negative vote weights.

    Entry (i, j) is the weight agent i casts for agent j.  Agents are
    labeled 1..n and nobody votes for themselves: the diagonal is zero.
    """

    rows: tuple[tuple[Weight, ...], ...]

    def __post_init__(self) -> None:
        rows = tuple(tuple(row) for row in self.rows)
        object.__setattr__(self, "rows", rows)
        n = len(rows)
        if n == 0:
            raise InstanceFormatError("a weight matrix needs at least one agent")
        for i, row in enumerate(rows, start=1):
            if len(row) != n:
                raise InstanceFormatError(
                    f"row {i} has {len(row)} entries, expected {n}"
                )
            for j, w in enumerate(row, start=1):
                if w < 0:
                    raise InstanceFormatError(f"negative weight {w!r} at ({i}, {j})")
            if row[i - 1] != 0:
                raise InstanceFormatError(
                    f"diagonal entry ({i}, {i}) must be zero, got {row[i - 1]!r}"
                )

    @property
    def n(self) -> int:
        return len(self.rows)

    @classmethod
    def zeros(cls, n: int) -> WeightMatrix:
        if n < 1:
            raise InstanceFormatError(f"agent count must be positive, got {n}")
        return cls(((0,) * n,) * n)

    @classmethod
    def from_votes(cls, n: int, votes: Iterable[tuple[int, int, Weight]]) -> WeightMatrix:
        """Build a profile from sparse (voter, target, weight) triples.

        Repeated triples for the same cell accumulate.
        """
        if n < 1:
            raise InstanceFormatError(f"agent count must be positive, got {n}")
        grid = [[0] * n for _ in range(n)]
        for i, j, w in votes:
            if not (1 <= i <= n and 1 <= j <= n):
                raise InstanceFormatError(
                    f"vote ({i}, {j}, {w!r}) is outside the label range 1..{n}"
                )
            if i == j:
                raise InstanceFormatError(
                    f"vote ({i}, {j}, {w!r}): diagonal votes are not allowed"
                )
            grid[i - 1][j - 1] += w
        return cls(tuple(tuple(row) for row in grid))

    def weight(self, i: int, j: int) -> Weight:
        """Weight of agent i's vote for agent j (labels are 1-based)."""
        return self.rows[i - 1][j - 1]

    @cached_property
    def column_totals(self) -> tuple[Weight, ...]:
        """Full score of every agent: the sum of its column."""
        return tuple(sum(col) for col in zip(*self.rows))

    def column_score(self, j: int) -> Weight:
        return self.column_totals[j - 1]

    @cached_property
    def is_integral(self) -> bool:
        return all(isinstance(w, int) for row in self.rows for w in row)

    def padded(self, size: int) -> WeightMatrix:
        """Extend the profile with silent agents up to the given count."""
        if size < self.n:
            raise InstanceFormatError(
                f"cannot pad an {self.n}-agent profile down to {size}"
            )
        if size == self.n:
            return self
        extra = size - self.n
        rows = tuple(row + (0,) * extra for row in self.rows)
        rows += ((0,) * size,) * extra
        return WeightMatrix(rows)

    def with_row(self, i: int, row: Sequence[Weight]) -> WeightMatrix:
        """Replace agent i's outgoing votes; all validation re-runs."""
        if not 1 <= i <= self.n:
            raise InstanceFormatError(f"agent {i} is outside the label range 1..{self.n}")
        rows = list(self.rows)
        rows[i - 1] = tuple(row)
        return WeightMatrix(tuple(rows))

    def nonzero_votes(self) -> tuple[tuple[int, int, Weight], ...]:
        return tuple(
            (i, j, w)
            for i, row in enumerate(self.rows, start=1)
            for j, w in enumerate(row, start=1)
            if w != 0
        )


@dataclass(frozen=True)
class InstanceTuple:
    """One weight matrix per job, all over the same agents."""

    matrices: tuple[WeightMatrix, ...]

    def __post_init__(self) -> None:
        matrices = tuple(self.matrices)
        object.__setattr__(self, "matrices", matrices)
        if not matrices:
            raise InstanceFormatError("an instance tuple needs at least one job")
        n = matrices[0].n
        for ell, mat in enumerate(matrices, start=1):
            if mat.n != n:
                raise InstanceFormatError(
                    f"job {ell} has {mat.n} agents, expected {n}"
                )

    @property
    def n(self) -> int:
        return self.matrices[0].n

    @property
    def m(self) -> int:
        return len(self.matrices)

    def job(self, ell: int) -> WeightMatrix:
        """Profile of job ell (1-based)."""
        return self.matrices[ell - 1]

    @classmethod
    def zeros(cls, n: int, m: int) -> InstanceTuple:
        if m < 1:
            raise InstanceFormatError(f"job count must be positive, got {m}")
        return cls((WeightMatrix.zeros(n),) * m)

    def padded(self, size: int) -> InstanceTuple:
        return InstanceTuple(tuple(mat.padded(size) for mat in self.matrices))

    def with_agent_rows(self, i: int, rows: Sequence[Sequence[Weight]]) -> InstanceTuple:
        """Replace agent i's outgoing votes in every job at once."""
        if len(rows) != self.m:
            raise InstanceFormatError(
                f"expected one replacement row per job ({self.m}), got {len(rows)}"
            )
        return InstanceTuple(
            tuple(mat.with_row(i, row) for mat, row in zip(self.matrices, rows))
        )

    @cached_property
    def is_integral(self) -> bool:
        return all(mat.is_integral for mat in self.matrices)
