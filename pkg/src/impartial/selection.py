"""Deterministic impartial selection of at most k agents from weighted votes.

The core mechanism scores every agent twice, once per candidacy, so that no
agent's own votes can influence its membership in the output.  A zero-padding
reduction extends it to every (n, k) with k - k mod 2 at least 2*sqrt(n).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

from .errors import ApplicabilityError, ParameterError
from .matrices import Weight, WeightMatrix
from .partitions import PartitionSystem, build_partition_system


def total_score(A: WeightMatrix, voters: Iterable[int], targets: Iterable[int]) -> Weight:
    """Sum of the votes cast by `voters` for `targets`."""
    rows = A.rows
    n = A.n
    voters = tuple(voters)
    targets = tuple(targets)
    for label in (*voters, *targets):
        if not 1 <= label <= n:
            raise ParameterError(f"agent {label} is outside the label range 1..{n}")
    return sum(rows[i - 1][j - 1] for i in voters for j in targets)


@dataclass(frozen=True)
class ScoreTable:
    """Per-agent modified scores, one value for each of the two candidacies.

    The left slot counts the votes of the left partition's voters; the right
    slot only the votes of the agent's co-candidates from the left set, so the
    two slots together always account for the agent's full score exactly once.
    """

    left_scores: tuple[Weight, ...]
    right_scores: tuple[Weight, ...]
    left_slot: tuple[int, ...]
    right_slot: tuple[int, ...]

    def score(self, j: int, p: int) -> Weight:
        """Modified score of agent j in partition p (one of its two slots)."""
        if self.left_slot[j - 1] == p:
            return self.left_scores[j - 1]
        if self.right_slot[j - 1] == p:
            return self.right_scores[j - 1]
        raise ParameterError(f"agent {j} is not a candidate in partition {p}")


def modified_scores(A: WeightMatrix, system: PartitionSystem) -> ScoreTable:
    """Split every agent's score across its two candidacies."""
    if A.n != system.n:
        raise ParameterError(
            f"profile has {A.n} agents but the partition system expects {system.n}"
        )
    rows = A.rows
    left_scores = []
    right_scores = []
    for j in range(1, system.n + 1):
        col = j - 1
        p = system.left[j - 1]
        left_scores.append(sum(rows[i - 1][col] for i in system.voters(p)))
        # voters unique to the right slot are the left set's other candidates:
        # the agent's two candidate sets overlap in j alone
        right_scores.append(sum(rows[i - 1][col] for i in system.candidates(p) if i != j))
    return ScoreTable(tuple(left_scores), tuple(right_scores), system.left, system.right)


@dataclass(frozen=True)
class ReductionParams:
    """Parameters of the zero-padding reduction for arbitrary (n, k)."""

    k_even: int
    n_padded: int
    b: int
    alpha: Fraction

    def to_json_dict(self) -> dict:
        return {
            "k_even": self.k_even,
            "n_padded": self.n_padded,
            "b": self.b,
            "alpha": str(self.alpha),
        }


@dataclass(frozen=True)
class SelectionResult:
    """Outcome of a selection run.

    `selected` is the chosen set (sorted, at most k agents); `winners` lists
    the per-partition argmax in partition order and may repeat agents or, for
    the padded mechanism, name padding agents that were stripped from
    `selected`.  `alpha` is the worst-case guarantee for these parameters.
    """

    selected: tuple[int, ...]
    winners: tuple[int, ...]
    score: Weight
    alpha: Fraction
    params: ReductionParams | None = None

    def to_json_dict(self) -> dict:
        doc = {
            "selected": list(self.selected),
            "winners": list(self.winners),
            "score": self.score,
            "alpha": str(self.alpha),
        }
        if self.params is not None:
            doc["params"] = self.params.to_json_dict()
        return doc


def select(A: WeightMatrix, k: int, system: PartitionSystem | None = None) -> SelectionResult:
    """Pick the top modified-score candidate of every partition.

    Ties go to the larger agent index.  Without an explicit system the
    canonical one for (n, k) is used, so n and k must admit it.
    """
    if system is None:
        system = build_partition_system(A.n, k)
    if system.n != A.n:
        raise ParameterError(
            f"partition system covers {system.n} agents, profile has {A.n}"
        )
    if system.k != k:
        raise ParameterError(f"partition system has k={system.k}, requested k={k}")
    table = modified_scores(A, system)
    winners = tuple(
        max(system.candidates(p), key=lambda j: (table.score(j, p), j))
        for p in range(1, k + 1)
    )
    selected = tuple(sorted(set(winners)))
    score = sum(A.column_score(j) for j in selected)
    return SelectionResult(selected, winners, score, Fraction(1, system.b))


def reduction_params(n: int, k: int) -> ReductionParams:
    """Round k down to even and pad n so the candidate sets divide evenly.

    Applicable when 1 < k < n and k - k mod 2 >= 2*sqrt(n); the root
    comparison is done in exact integer arithmetic.
    """
    if k <= 1:
        raise ApplicabilityError(f"k must exceed 1, got k = {k}")
    if k >= n:
        raise ApplicabilityError(f"k must be smaller than n, got k = {k}, n = {n}")
    k_even = k - k % 2
    if k_even * k_even < 4 * n:
        raise ApplicabilityError(
            f"k - k mod 2 must be at least 2*sqrt(n): "
            f"({k_even})^2 = {k_even * k_even} < 4n = {4 * n}"
        )
    b = -((-2 * n) // k_even)  # ceil(2n / k_even)
    n_padded = (k_even // 2) * b
    return ReductionParams(k_even, n_padded, b, Fraction(k_even, k * b))


def selection_guarantee(n: int, k: int) -> Fraction:
    """Exact worst-case fraction of the optimum the mechanism always reaches."""
    return reduction_params(n, k).alpha


def select_general(A: WeightMatrix, k: int) -> SelectionResult:
    """Selection for arbitrary applicable (n, k).

    Pads the profile with silent agents, selects with the canonical system
    for the padded parameters, and drops padding agents from the output.
    """
    params = reduction_params(A.n, k)
    system = build_partition_system(params.n_padded, params.k_even)
    inner = select(A.padded(params.n_padded), params.k_even, system)
    selected = tuple(j for j in inner.selected if j <= A.n)
    score = sum(A.column_score(j) for j in selected)
    return SelectionResult(selected, inner.winners, score, params.alpha, params)
