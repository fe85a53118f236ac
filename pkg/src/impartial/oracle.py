"""Ground truth and certification: exact optima, impartiality checks, and
profiles on which the selection guarantee is attained exactly."""

from __future__ import annotations

import os
import random
from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Callable, Iterator, Sequence

from .assignment import AssignmentResult
from .errors import BudgetExceededError, ParameterError
from .matrices import InstanceTuple, Weight, WeightMatrix
from .partitions import PartitionSystem, build_partition_system
from .selection import SelectionResult

NODE_BUDGET_ENV = "IMPARTIAL_OPT_BUDGET"
DEFAULT_NODE_BUDGET = 10_000_000
DEFAULT_CHECK_BUDGET = 10_000_000


def opt_selection(A: WeightMatrix, k: int) -> tuple[tuple[int, ...], Weight]:
    """The k agents with the largest scores and their total.

    Scores are additive over agents, so the optimum is the k largest column
    sums; ties go to the smaller index.
    """
    if not 0 <= k <= A.n:
        raise ParameterError(f"k must lie in [0, n] = [0, {A.n}], got {k}")
    ranked = sorted(range(1, A.n + 1), key=lambda j: (-A.column_score(j), j))
    chosen = tuple(sorted(ranked[:k]))
    return chosen, sum(A.column_score(j) for j in chosen)


def top_score_selection(A: WeightMatrix, k: int) -> tuple[int, ...]:
    """Naive baseline mechanism: just take the k largest column sums.

    Deliberately not impartial; an agent can vote its rivals down the ranking.
    """
    return opt_selection(A, k)[0]


def _node_budget(explicit: int | None) -> int:
    if explicit is not None:
        return explicit
    raw = os.environ.get(NODE_BUDGET_ENV)
    return int(raw) if raw else DEFAULT_NODE_BUDGET


def opt_assignment(
    instance: InstanceTuple, k: int, node_budget: int | None = None
) -> tuple[tuple[tuple[int, ...], ...], Weight]:
    """Best feasible assignment and its score, by exhaustive search.

    Walks every agent -> job-or-none labeling with per-job cap k, merging
    identical residual subproblems (same next agent, same remaining caps).
    Raises when the configured node budget is exceeded; the default comes
    from the IMPARTIAL_OPT_BUDGET environment variable.
    """
    n, m = instance.n, instance.m
    if not 0 <= k <= n:
        raise ParameterError(f"k must lie in [0, n] = [0, {n}], got {k}")
    budget = _node_budget(node_budget)
    contrib = [
        tuple(instance.matrices[ell].column_score(j) for ell in range(m))
        for j in range(1, n + 1)
    ]
    memo: dict[tuple[int, tuple[int, ...]], Weight] = {}
    nodes = 0

    def best(idx: int, caps: tuple[int, ...]) -> Weight:
        nonlocal nodes
        nodes += 1
        if nodes > budget:
            raise BudgetExceededError(
                f"assignment search exceeded {budget} nodes "
                f"(set {NODE_BUDGET_ENV} to raise the limit)"
            )
        if idx == n:
            return 0
        key = (idx, caps)
        cached = memo.get(key)
        if cached is not None:
            return cached
        value = best(idx + 1, caps)
        for ell in range(m):
            if caps[ell]:
                reduced = caps[:ell] + (caps[ell] - 1,) + caps[ell + 1 :]
                value = max(value, contrib[idx][ell] + best(idx + 1, reduced))
        memo[key] = value
        return value

    total = best(0, (k,) * m)
    # forward reconstruction; prefer jobs in ascending order, then none, so
    # the answer is deterministic and matches the selection oracle for m = 1
    jobs: list[list[int]] = [[] for _ in range(m)]
    caps = (k,) * m
    for idx in range(n):
        target = memo[(idx, caps)]
        for ell in range(m):
            if caps[ell]:
                reduced = caps[:ell] + (caps[ell] - 1,) + caps[ell + 1 :]
                child = 0 if idx + 1 == n else memo[(idx + 1, reduced)]
                if contrib[idx][ell] + child == target:
                    jobs[ell].append(idx + 1)
                    caps = reduced
                    break
    return tuple(tuple(job) for job in jobs), total


def tightness_instance(
    n: int, k: int, system: PartitionSystem | None = None
) -> WeightMatrix:
    """A profile on which selection earns exactly 1/b of the optimum.

    Gives each of the first b agents one unit vote from a voter chosen so the
    vote is visible only in the first partition; the mechanism then banks a
    single unit while the optimum collects all b.
    """
    if system is None:
        system = build_partition_system(n, k)
    if system.n != n or system.k != k:
        raise ParameterError("partition system does not match the requested (n, k)")
    b = system.b
    if not system.is_normalized:
        raise ParameterError(
            "tightness construction needs the normalized system whose first "
            f"candidate set is {{1, .., {b}}}"
        )
    votes = []
    for j in range(1, b + 1):
        other = system.right[j - 1]
        voter = min(a for a in system.candidates(other) if a > b)
        votes.append((voter, j, 1))
    return WeightMatrix.from_votes(n, votes)


@dataclass(frozen=True)
class RatioReport:
    """A mechanism score against the exact optimum, checked for the guarantee."""

    mechanism: str
    mechanism_score: Weight
    opt_score: Weight
    ratio: Fraction | float | None
    alpha: Fraction
    passed: bool

    def to_json_dict(self) -> dict:
        return {
            "mechanism": self.mechanism,
            "mechanism_score": self.mechanism_score,
            "opt_score": self.opt_score,
            "ratio": None if self.ratio is None else str(self.ratio),
            "alpha": str(self.alpha),
            "passed": self.passed,
        }


def ratio_report(
    mechanism: str, mechanism_score: Weight, opt_score: Weight, alpha: Fraction
) -> RatioReport:
    """Compare a score against alpha times the optimum, exactly when integral."""
    if opt_score == 0:
        # nothing to collect; the bound holds trivially
        return RatioReport(mechanism, mechanism_score, opt_score, None, alpha, True)
    if isinstance(mechanism_score, int) and isinstance(opt_score, int):
        ratio: Fraction | float = Fraction(mechanism_score, opt_score)
    else:
        ratio = mechanism_score / opt_score
    return RatioReport(mechanism, mechanism_score, opt_score, ratio, alpha, ratio >= alpha)


# ---------------------------------------------------------------------------
# impartiality certification


@dataclass(frozen=True)
class Violation:
    """One observed impartiality breach: agent i changed its own membership."""

    agent: int
    base_votes: tuple
    deviation_votes: tuple
    before: tuple[bool, ...]
    after: tuple[bool, ...]

    def to_json_dict(self) -> dict:
        return {
            "agent": self.agent,
            "base_votes": [list(v) for v in self.base_votes],
            "deviation_votes": [list(v) for v in self.deviation_votes],
            "before": list(self.before),
            "after": list(self.after),
        }


@dataclass(frozen=True)
class ImpartialityReport:
    mechanism: str
    trials: int
    violations: tuple[Violation, ...]
    exhausted: bool = False

    @property
    def certified(self) -> bool:
        """True when the whole space was checked and nothing was found."""
        return not self.violations and not self.exhausted

    def to_json_dict(self) -> dict:
        return {
            "mechanism": self.mechanism,
            "trials": self.trials,
            "violations": [v.to_json_dict() for v in self.violations],
            "exhausted": self.exhausted,
            "certified": self.certified,
        }


@dataclass(frozen=True)
class ExhaustiveSpace:
    """Every instance over a fixed support with entries from a small grid.

    `support` lists the cells that may be nonzero: (i, j) pairs for a single
    profile, (job, i, j) triples for tuples.  Deviations for agent i range
    over all level choices on the support cells in i's rows.
    """

    n: int
    support: tuple[tuple[int, ...], ...]
    m: int = 1
    levels: tuple[int, ...] = (0, 1, 2)

    def _cells(self) -> tuple[tuple[int, int, int], ...]:
        cells = []
        for cell in self.support:
            job, i, j = (1, *cell) if self.m == 1 and len(cell) == 2 else cell
            if i == j:
                raise ParameterError(f"support cell ({i}, {j}) sits on the diagonal")
            if not (1 <= job <= self.m and 1 <= i <= self.n and 1 <= j <= self.n):
                raise ParameterError(f"support cell {cell} is out of range")
            cells.append((job, i, j))
        return tuple(cells)

    def _build(self, values: Sequence[int], cells) -> WeightMatrix | InstanceTuple:
        grids = [[[0] * self.n for _ in range(self.n)] for _ in range(self.m)]
        for (job, i, j), w in zip(cells, values):
            grids[job - 1][i - 1][j - 1] = w
        matrices = tuple(
            WeightMatrix(tuple(tuple(row) for row in grid)) for grid in grids
        )
        return matrices[0] if self.m == 1 else InstanceTuple(matrices)

    def instances(self) -> Iterator[WeightMatrix | InstanceTuple]:
        cells = self._cells()
        for values in product(self.levels, repeat=len(cells)):
            yield self._build(values, cells)

    def agents(self) -> tuple[int, ...]:
        return tuple(range(1, self.n + 1))

    def deviations(self, agent: int):
        """All replacement rows for this agent reachable inside the support."""
        cells = tuple(c for c in self._cells() if c[1] == agent)
        for values in product(self.levels, repeat=len(cells)):
            rows = [[0] * self.n for _ in range(self.m)]
            for (job, _, j), w in zip(cells, values):
                rows[job - 1][j - 1] = w
            yield tuple(tuple(row) for row in rows)


@dataclass(frozen=True)
class RandomSpace:
    """Seeded random instances with a few random deviation rows per agent."""

    n: int
    m: int = 1
    pair_target: int = 10_000
    deviations_per_agent: int = 3
    max_weight: int = 10
    seed: int = 0

    def instances(self) -> Iterator[WeightMatrix | InstanceTuple]:
        rng = random.Random(self.seed)
        count = max(1, -(-self.pair_target // self.n))
        for _ in range(count):
            matrices = tuple(
                _random_matrix(rng, self.n, self.max_weight) for _ in range(self.m)
            )
            yield matrices[0] if self.m == 1 else InstanceTuple(matrices)

    def agents(self) -> tuple[int, ...]:
        return tuple(range(1, self.n + 1))

    def deviations(self, agent: int):
        rng = random.Random(self.seed * 1_000_003 + agent)
        for _ in range(self.deviations_per_agent):
            rows = []
            for _ in range(self.m):
                row = rng.choices(range(self.max_weight + 1), k=self.n)
                row[agent - 1] = 0
                rows.append(tuple(row))
            yield tuple(rows)


def _random_matrix(rng: random.Random, n: int, max_weight: int) -> WeightMatrix:
    rows = []
    for i in range(n):
        row = rng.choices(range(max_weight + 1), k=n)
        row[i] = 0
        rows.append(tuple(row))
    return WeightMatrix(tuple(rows))


def _membership(output, agent: int) -> tuple[bool, ...]:
    if isinstance(output, SelectionResult):
        return (agent in output.selected,)
    if isinstance(output, AssignmentResult):
        return tuple(agent in job for job in output.jobs)
    if isinstance(output, (set, frozenset, tuple, list)):
        if output and isinstance(next(iter(output)), (tuple, list, set, frozenset)):
            return tuple(agent in job for job in output)
        return (agent in output,)
    raise ParameterError(f"cannot read a membership footprint from {type(output)!r}")


def _apply_deviation(instance, agent: int, rows):
    if isinstance(instance, WeightMatrix):
        return instance.with_row(agent, rows[0])
    return instance.with_agent_rows(agent, rows)


def _votes_of(instance) -> tuple:
    if isinstance(instance, WeightMatrix):
        return instance.nonzero_votes()
    return tuple(
        (ell, i, j, w)
        for ell, mat in enumerate(instance.matrices, start=1)
        for (i, j, w) in mat.nonzero_votes()
    )


def check_impartial(
    mechanism: Callable,
    space: ExhaustiveSpace | RandomSpace,
    name: str | None = None,
    budget: int | None = None,
) -> ImpartialityReport:
    """Probe a mechanism for agents whose own votes change their membership.

    Runs the mechanism on every instance of the space and on every row
    deviation of every agent, comparing the agent's membership footprint
    before and after.  The report is certified only when the space was
    covered in full within the trial budget.
    """
    label = name or getattr(mechanism, "__name__", "mechanism")
    limit = budget if budget is not None else DEFAULT_CHECK_BUDGET
    trials = 0
    violations: list[Violation] = []
    for base in space.instances():
        base_output = mechanism(base)
        for agent in space.agents():
            before = _membership(base_output, agent)
            for rows in space.deviations(agent):
                deviated = _apply_deviation(base, agent, rows)
                if deviated == base:
                    continue
                if trials >= limit:
                    return ImpartialityReport(
                        label, trials, tuple(violations), exhausted=True
                    )
                trials += 1
                after = _membership(mechanism(deviated), agent)
                if before != after:
                    violations.append(
                        Violation(
                            agent,
                            _votes_of(base),
                            _votes_of(deviated),
                            before,
                            after,
                        )
                    )
    return ImpartialityReport(label, trials, tuple(violations))


def default_space(
    n: int,
    m: int = 1,
    seed: int = 0,
    support_cells: int = 6,
    pair_target: int = 10_000,
    max_weight: int = 10,
) -> ExhaustiveSpace | RandomSpace:
    """The standard deviation space for a given size.

    Small instances (n <= 9) get an exhaustive {0, 1, 2} grid over a seeded
    support that always contains the mutual pair (1, 2)/(2, 1); larger ones
    get seeded random profiles.
    """
    if n <= 9:
        rng = random.Random(seed)
        pool = [
            (ell, i, j)
            for ell in range(1, m + 1)
            for i in range(1, n + 1)
            for j in range(1, n + 1)
            if i != j and not (ell == 1 and (i, j) in ((1, 2), (2, 1)))
        ]
        extra = rng.sample(pool, max(0, support_cells - 2))
        support = ((1, 1, 2), (1, 2, 1), *extra)
        if m == 1:
            support = tuple((i, j) for (_, i, j) in support)
        return ExhaustiveSpace(n=n, support=support, m=m)
    return RandomSpace(n=n, m=m, pair_target=pair_target, max_weight=max_weight, seed=seed)
