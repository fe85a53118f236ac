"""Impartial assignment of agents to several size-capped jobs at once.

Every partition contributes one candidate per job via a lexicographic argmax
over injective tuples; agents picked for two jobs keep the one where they
score higher (larger job index on ties), which never depends on their own
votes.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import permutations

from .errors import ParameterError
from .matrices import InstanceTuple, Weight
from .partitions import PartitionSystem, build_partition_system
from .selection import ReductionParams, ScoreTable, modified_scores, reduction_params


@dataclass(frozen=True)
class AssignmentResult:
    """Outcome of an assignment run.

    `jobs` holds one sorted agent tuple per job; the tuples are pairwise
    disjoint and each has at most k members.  `partial` records the raw
    per-partition winner tuples before duplicate agents were resolved.
    """

    jobs: tuple[tuple[int, ...], ...]
    score: Weight
    alpha: Fraction
    params: ReductionParams | None = None
    partial: tuple[tuple[int, ...], ...] = ()

    def to_json_dict(self) -> dict:
        doc = {
            "jobs": [list(job) for job in self.jobs],
            "score": self.score,
            "alpha": str(self.alpha),
        }
        if self.params is not None:
            doc["params"] = self.params.to_json_dict()
        return doc


def best_partial_assignment(
    p: int,
    system: PartitionSystem,
    tables: tuple[ScoreTable, ...],
    m: int,
) -> tuple[int, ...]:
    """The injective m-tuple of partition p's candidates maximizing the summed
    modified scores; ties are broken toward the lexicographically largest
    tuple of agent labels."""
    candidates = system.candidates(p)
    if not 1 <= m <= len(candidates):
        raise ParameterError(
            f"job count m must lie in [1, b] = [1, {len(candidates)}], got {m}"
        )
    return max(
        permutations(candidates, m),
        key=lambda tup: (sum(tables[ell].score(tup[ell], p) for ell in range(m)), *tup),
    )


def resolve_double_assignments(
    jobs: list[set[int]], instance: InstanceTuple
) -> list[set[int]]:
    """Drop each doubly-assigned agent from the job where it scores less.

    On equal scores the smaller job index loses.  Each agent sits in at most
    two jobs (one per candidacy), so the resolution order cannot matter.
    """
    for j in range(1, instance.n + 1):
        holding = [ell for ell in range(len(jobs)) if j in jobs[ell]]
        if len(holding) > 2:
            raise ParameterError(f"agent {j} appears in {len(holding)} jobs")
        if len(holding) == 2:
            drop = min(
                holding, key=lambda ell: (instance.matrices[ell].column_score(j), ell)
            )
            jobs[drop].discard(j)
    return jobs


def assign(
    instance: InstanceTuple, k: int, system: PartitionSystem | None = None
) -> AssignmentResult:
    """Assign each agent to at most one job, at most k agents per job."""
    n, m = instance.n, instance.m
    if system is None:
        system = build_partition_system(n, k)
    if system.n != n:
        raise ParameterError(
            f"partition system covers {system.n} agents, instance has {n}"
        )
    if system.k != k:
        raise ParameterError(f"partition system has k={system.k}, requested k={k}")
    if m * k > n:
        raise ParameterError(f"m*k must not exceed n, got {m}*{k} = {m * k} > {n}")
    if m > system.b:
        raise ParameterError(f"job count m must not exceed b, got {m} > {system.b}")
    tables = tuple(modified_scores(mat, system) for mat in instance.matrices)
    partial = tuple(
        best_partial_assignment(p, system, tables, m) for p in range(1, k + 1)
    )
    jobs: list[set[int]] = [set() for _ in range(m)]
    for tup in partial:
        for ell, agent in enumerate(tup):
            jobs[ell].add(agent)
    resolve_double_assignments(jobs, instance)
    final = tuple(tuple(sorted(job)) for job in jobs)
    score = sum(
        instance.matrices[ell].column_score(j)
        for ell in range(m)
        for j in final[ell]
    )
    return AssignmentResult(final, score, Fraction(1, 2 * system.b), None, partial)


def assignment_guarantee(n: int, m: int, k: int) -> Fraction:
    """Exact worst-case guarantee of the padded assignment mechanism."""
    if m < 1:
        raise ParameterError(f"job count m must be positive, got {m}")
    if m * k > n:
        raise ParameterError(f"m*k must not exceed n, got {m}*{k} = {m * k} > {n}")
    return reduction_params(n, k).alpha / 2


def assign_general(instance: InstanceTuple, k: int) -> AssignmentResult:
    """Assignment for arbitrary applicable (n, m, k) via zero padding."""
    n, m = instance.n, instance.m
    if m * k > n:
        raise ParameterError(f"m*k must not exceed n, got {m}*{k} = {m * k} > {n}")
    params = reduction_params(n, k)
    system = build_partition_system(params.n_padded, params.k_even)
    inner = assign(instance.padded(params.n_padded), params.k_even, system)
    jobs = tuple(tuple(j for j in job if j <= n) for job in inner.jobs)
    score = sum(
        instance.matrices[ell].column_score(j)
        for ell in range(m)
        for j in jobs[ell]
    )
    return AssignmentResult(jobs, score, params.alpha / 2, params, inner.partial)
