"""Balanced, robust partition systems built from regular bipartite graphs.

The construction runs in three steps: an explicit b-regular bipartite graph
on k vertices, its hypergraph dual (agents become edges, candidate sets the
per-vertex incidence lists), and a proper edge coloring whose color classes
certify that any set of agents splits into b groups of pairwise
non-contenders.  Everything is deterministic for fixed (n, k).
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from functools import cached_property, lru_cache
from typing import Iterable, Sequence

from .errors import InstanceFormatError, ParameterError


@dataclass(frozen=True)
class BipartiteGraph:
    """A simple b-regular bipartite graph.

    Vertices are 0..order-1 with the left side first; every edge (u, v)
    satisfies u < left_size <= v.
    """

    left_size: int
    right_size: int
    degree: int
    edges: tuple[tuple[int, int], ...]

    def __post_init__(self) -> None:
        edges = tuple((int(u), int(v)) for u, v in self.edges)
        object.__setattr__(self, "edges", edges)
        counts = [0] * self.order
        seen = set()
        for u, v in edges:
            if not (0 <= u < self.left_size <= v < self.order):
                raise ParameterError(f"edge ({u}, {v}) does not cross the bipartition")
            if (u, v) in seen:
                raise ParameterError(f"repeated edge ({u}, {v}); the graph must be simple")
            seen.add((u, v))
            counts[u] += 1
            counts[v] += 1
        for vertex, count in enumerate(counts):
            if count != self.degree:
                raise ParameterError(
                    f"vertex {vertex} has degree {count}, expected {self.degree}"
                )

    @property
    def order(self) -> int:
        return self.left_size + self.right_size

    @property
    def size(self) -> int:
        return len(self.edges)

    def as_hypergraph(self) -> Hypergraph:
        return Hypergraph(self.order, tuple(tuple(e) for e in self.edges))


def build_regular_bipartite_graph(k: int, b: int) -> BipartiteGraph:
    """The canonical b-regular bipartite graph on k vertices.

    Left vertex i is joined to right vertices k/2 + ((i + offset) mod k/2)
    for offset in range(b); edges are stored in lexicographic (i, offset)
    order.  b = 1 gives k/2 disjoint edges, b = 2 a single cycle, and
    b = k/2 the complete bipartite graph.
    """
    if k < 2 or k % 2:
        raise ParameterError(f"vertex count k must be a positive even number, got {k}")
    half = k // 2
    if not 1 <= b <= half:
        raise ParameterError(f"degree b must lie in [1, k/2] = [1, {half}], got {b}")
    edges = tuple(
        (i, half + (i + offset) % half) for i in range(half) for offset in range(b)
    )
    return BipartiteGraph(half, half, b, edges)


@dataclass(frozen=True)
class Hypergraph:
    """Vertices 0..vertex_count-1 and an ordered sequence of hyperedges.

    The sequence may repeat hyperedges, so it is a multiset with positions.
    """

    vertex_count: int
    hyperedges: tuple[tuple[int, ...], ...]

    def __post_init__(self) -> None:
        edges = tuple(tuple(sorted(set(e))) for e in self.hyperedges)
        object.__setattr__(self, "hyperedges", edges)
        for e in edges:
            for v in e:
                if not 0 <= v < self.vertex_count:
                    raise ParameterError(f"hyperedge vertex {v} is out of range")

    def degrees(self) -> tuple[int, ...]:
        counts = [0] * self.vertex_count
        for e in self.hyperedges:
            for v in e:
                counts[v] += 1
        return tuple(counts)

    def is_regular(self, d: int) -> bool:
        return all(count == d for count in self.degrees())

    def is_uniform(self, size: int) -> bool:
        return all(len(e) == size for e in self.hyperedges)

    def has_repeated_hyperedges(self) -> bool:
        return len(set(self.hyperedges)) < len(self.hyperedges)

    def is_linear(self) -> bool:
        """No two hyperedges share more than one vertex.

        Two positions holding the same hyperedge count as sharing all of it,
        so a repeated hyperedge is never linear here; this keeps candidate
        sets distinguishable and only matters for degree-1 graphs.
        """
        edges = self.hyperedges
        for a in range(len(edges)):
            set_a = set(edges[a])
            for c in range(a + 1, len(edges)):
                if edges[a] == edges[c] or len(set_a.intersection(edges[c])) > 1:
                    return False
        return True


def dual(obj: BipartiteGraph | Hypergraph) -> Hypergraph:
    """Transpose the incidence structure.

    Vertex t of the dual stands for hyperedge t of the input (for a graph,
    edge t in stored order); dual hyperedge v collects the input hyperedges
    incident to input vertex v, in vertex order.
    """
    h = obj.as_hypergraph() if isinstance(obj, BipartiteGraph) else obj
    incident: list[list[int]] = [[] for _ in range(h.vertex_count)]
    for index, edge in enumerate(h.hyperedges):
        for v in edge:
            incident[v].append(index)
    return Hypergraph(len(h.hyperedges), tuple(tuple(member) for member in incident))


@dataclass(frozen=True)
class EdgeColoring:
    """A proper edge coloring; colors[e] is the 1-based color of edge e."""

    colors: tuple[int, ...]
    num_colors: int

    def color_of(self, edge_index: int) -> int:
        return self.colors[edge_index]


def coloring_is_feasible(g: BipartiteGraph, coloring: EdgeColoring) -> bool:
    """True when no two edges at a common vertex share a color."""
    if len(coloring.colors) != g.size:
        return False
    seen: set[tuple[int, int]] = set()
    for (u, v), c in zip(g.edges, coloring.colors):
        if not 1 <= c <= coloring.num_colors:
            return False
        if (u, c) in seen or (v, c) in seen:
            return False
        seen.add((u, c))
        seen.add((v, c))
    return True


def edge_color(g: BipartiteGraph) -> EdgeColoring:
    """Properly color the edges of a bipartite graph with its degree many colors.

    Edges are processed in stored order and take the smallest color free at
    both endpoints.  When the free colors differ, the two-colored alternating
    path leaving the right endpoint is swapped first; in a bipartite graph
    that path can never reach the left endpoint, which frees a common color.
    The result is deterministic for a fixed edge order.
    """
    b = g.degree
    # slot[v][c] = edge currently colored c at vertex v (colors are 1-based)
    slot: list[list[int | None]] = [[None] * (b + 1) for _ in range(g.order)]
    colors = [0] * g.size

    def first_free(vertex: int) -> int:
        for c in range(1, b + 1):
            if slot[vertex][c] is None:
                return c
        raise AssertionError("vertex saturated beyond the graph degree")

    for e, (u, v) in enumerate(g.edges):
        shared = None
        for c in range(1, b + 1):
            if slot[u][c] is None and slot[v][c] is None:
                shared = c
                break
        if shared is None:
            a = first_free(u)
            c2 = first_free(v)
            path = []
            x, want = v, a
            while slot[x][want] is not None:
                step = slot[x][want]
                path.append(step)
                p2, q2 = g.edges[step]
                x = q2 if x == p2 else p2
                want = c2 if want == a else a
            for step in path:
                p2, q2 = g.edges[step]
                slot[p2][colors[step]] = None
                slot[q2][colors[step]] = None
            for step in path:
                p2, q2 = g.edges[step]
                new = c2 if colors[step] == a else a
                colors[step] = new
                slot[p2][new] = step
                slot[q2][new] = step
            shared = a
        colors[e] = shared
        slot[u][shared] = e
        slot[v][shared] = e
    return EdgeColoring(tuple(colors), b)


@dataclass(frozen=True)
class PartitionSystem:
    """k two-way partitions of agents 1..n into voters and candidates.

    Every agent is a candidate in exactly two partitions (its left and right
    slot, in increasing partition order), candidate sets have size b and
    pairwise share at most one agent, and the stored coloring assigns
    distinct colors to the candidates of every set.
    """

    n: int
    k: int
    b: int
    candidate_sets: tuple[tuple[int, ...], ...]
    colors: tuple[int, ...]
    left: tuple[int, ...]
    right: tuple[int, ...]

    @cached_property
    def _member_sets(self) -> tuple[frozenset[int], ...]:
        return tuple(frozenset(s) for s in self.candidate_sets)

    @cached_property
    def _voter_sets(self) -> tuple[tuple[int, ...], ...]:
        everyone = range(1, self.n + 1)
        return tuple(
            tuple(i for i in everyone if i not in members) for members in self._member_sets
        )

    def candidates(self, p: int) -> tuple[int, ...]:
        """Candidate set of partition p (1-based), sorted."""
        return self.candidate_sets[p - 1]

    def voters(self, p: int) -> tuple[int, ...]:
        """Voter set of partition p: everyone who is not a candidate there."""
        return self._voter_sets[p - 1]

    def slots(self, j: int) -> tuple[int, int]:
        """The two partitions in which agent j is a candidate, ascending."""
        return self.left[j - 1], self.right[j - 1]

    def color(self, j: int) -> int:
        return self.colors[j - 1]

    @property
    def is_normalized(self) -> bool:
        """True when the first candidate set is exactly {1, .., b}."""
        return self.candidate_sets[0] == tuple(range(1, self.b + 1))

    def color_classes(self, agents: Iterable[int]) -> tuple[tuple[int, ...], ...]:
        """Split the given agents into b classes of pairwise non-contenders.

        Two agents in the same class never appear in a common candidate set,
        because within every set the stored colors are pairwise distinct.
        """
        members = sorted(set(agents))
        for a in members:
            if not 1 <= a <= self.n:
                raise ParameterError(f"agent {a} is outside the label range 1..{self.n}")
        classes: list[list[int]] = [[] for _ in range(self.b)]
        for a in members:
            classes[self.colors[a - 1] - 1].append(a)
        return tuple(tuple(cls) for cls in classes)

    def validate(self) -> None:
        """Check every structural property; raise naming the first failure."""
        n, k, b = self.n, self.k, self.b
        if 2 * n != k * b:
            raise InstanceFormatError(f"need 2n = k*b, got 2*{n} != {k}*{b}")
        if len(self.candidate_sets) != k:
            raise InstanceFormatError(
                f"expected {k} candidate sets, got {len(self.candidate_sets)}"
            )
        if len(self.colors) != n or len(self.left) != n or len(self.right) != n:
            raise InstanceFormatError("colors and slots must cover every agent")
        for p, members in enumerate(self.candidate_sets, start=1):
            if len(members) != b or len(set(members)) != b:
                raise InstanceFormatError(
                    f"candidate set {p} must hold {b} distinct agents, got {members}"
                )
            if tuple(sorted(members)) != members:
                raise InstanceFormatError(f"candidate set {p} is not sorted")
            for a in members:
                if not 1 <= a <= n:
                    raise InstanceFormatError(
                        f"candidate set {p} contains out-of-range agent {a}"
                    )
        sets = self._member_sets
        for p in range(k):
            for q in range(p + 1, k):
                common = sets[p] & sets[q]
                if len(common) > 1:
                    raise InstanceFormatError(
                        f"candidate sets {p + 1} and {q + 1} share {sorted(common)}; "
                        "at most one common agent is allowed"
                    )
        for j in range(1, n + 1):
            holding = [p + 1 for p in range(k) if j in sets[p]]
            if len(holding) != 2:
                raise InstanceFormatError(
                    f"agent {j} is a candidate in partitions {holding}; exactly two are required"
                )
            if (self.left[j - 1], self.right[j - 1]) != (holding[0], holding[1]):
                raise InstanceFormatError(
                    f"agent {j} slots {self.slots(j)} disagree with its candidate sets {holding}"
                )
        for j in range(1, n + 1):
            if not 1 <= self.colors[j - 1] <= b:
                raise InstanceFormatError(
                    f"agent {j} has color {self.colors[j - 1]}, expected 1..{b}"
                )
        for p, members in enumerate(self.candidate_sets, start=1):
            used = [self.colors[a - 1] for a in members]
            if len(set(used)) != len(used):
                raise InstanceFormatError(
                    f"candidate set {p} repeats a color: {used}"
                )

    def to_json_dict(self) -> dict:
        return {
            "n": self.n,
            "k": self.k,
            "b": self.b,
            "candidate_sets": [list(s) for s in self.candidate_sets],
            "colors": list(self.colors),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict(), indent=2)


def system_from_candidate_sets(
    n: int,
    k: int,
    candidate_sets: Sequence[Sequence[int]],
    colors: Sequence[int],
) -> PartitionSystem:
    """Assemble and fully validate a partition system from raw pieces."""
    sets = tuple(tuple(sorted(int(a) for a in s)) for s in candidate_sets)
    held: dict[int, list[int]] = {}
    for p, members in enumerate(sets, start=1):
        for a in members:
            held.setdefault(a, []).append(p)
    left = []
    right = []
    for j in range(1, n + 1):
        slots = held.get(j, [])
        if len(slots) != 2:
            raise InstanceFormatError(
                f"agent {j} is a candidate in partitions {slots}; exactly two are required"
            )
        left.append(slots[0])
        right.append(slots[1])
    b = len(sets[0]) if sets else 0
    system = PartitionSystem(
        n=n,
        k=k,
        b=b,
        candidate_sets=sets,
        colors=tuple(int(c) for c in colors),
        left=tuple(left),
        right=tuple(right),
    )
    system.validate()
    return system


def system_from_json_dict(doc: dict) -> PartitionSystem:
    try:
        n = int(doc["n"])
        k = int(doc["k"])
        b = int(doc["b"])
        candidate_sets = doc["candidate_sets"]
        colors = doc["colors"]
    except (KeyError, TypeError, ValueError) as exc:
        raise InstanceFormatError(f"partition document is missing or corrupts a field: {exc}")
    system = system_from_candidate_sets(n, k, candidate_sets, colors)
    if system.b != b:
        raise InstanceFormatError(
            f"declared b={b} but candidate sets have size {system.b}"
        )
    return system


def load_partition_file(path) -> PartitionSystem:
    with open(path, "r", encoding="utf-8") as handle:
        try:
            doc = json.load(handle)
        except json.JSONDecodeError as exc:
            raise InstanceFormatError(f"{path}: invalid JSON: {exc}")
    return system_from_json_dict(doc)


@lru_cache(maxsize=256)
def build_partition_system(n: int, k: int) -> PartitionSystem:
    """The canonical partition system for n agents and k partitions.

    Requires k even and b = 2n/k an integer with 2 <= b <= k/2 (these are
    exactly the parameters for which the bipartite construction exists).
    Agents are numbered so that the first candidate set is {1, .., b}.
    """
    if n < 1:
        raise ParameterError(f"agent count n must be positive, got {n}")
    if k < 2 or k % 2:
        raise ParameterError(f"partition count k must be a positive even number, got {k}")
    if (2 * n) % k:
        raise ParameterError(
            f"candidate-set size b = 2n/k must be an integer, got 2n/k = {2 * n}/{k}"
        )
    b = 2 * n // k
    if b < 2:
        raise ParameterError(f"candidate-set size b must be at least 2, got b = {b}")
    if 2 * b > k:
        raise ParameterError(
            f"candidate-set size b must not exceed k/2, got b = {b} > {k}/2"
        )
    base = build_regular_bipartite_graph(k, b)
    # agent labels follow edge order with vertex 0's edges first, so the
    # first candidate set comes out as {1, .., b}
    front = [e for e in base.edges if e[0] == 0]
    rest = [e for e in base.edges if e[0] != 0]
    graph = BipartiteGraph(base.left_size, base.right_size, b, tuple(front + rest))
    coloring = edge_color(graph)
    incident: list[list[int]] = [[] for _ in range(k)]
    for index, (u, v) in enumerate(graph.edges):
        incident[u].append(index + 1)
        incident[v].append(index + 1)
    candidate_sets = tuple(tuple(sorted(members)) for members in incident)
    left = tuple(u + 1 for u, _ in graph.edges)
    right = tuple(v + 1 for _, v in graph.edges)
    system = PartitionSystem(
        n=n,
        k=k,
        b=b,
        candidate_sets=candidate_sets,
        colors=coloring.colors,
        left=left,
        right=right,
    )
    if not system.is_normalized:
        raise AssertionError("construction failed to place agents 1..b in the first set")
    return system


def color_classes(system: PartitionSystem, agents: Iterable[int]) -> tuple[tuple[int, ...], ...]:
    """Split agents into b classes with no two members sharing a candidate set."""
    return system.color_classes(agents)
