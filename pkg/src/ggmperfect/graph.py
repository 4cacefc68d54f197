"""Undirected and directed graphs, separation, path/cycle enumeration and couples.

All public interfaces use 1-indexed nodes ``1..d``.  A couple ``(ij|K)`` is
stored with ``i < j`` and ``K`` as a frozenset; a relation is simply a
frozenset of couples.
"""

from __future__ import annotations

import itertools
import json
from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Iterator

import numpy as np

__all__ = [
    "Graph",
    "DiGraph",
    "Couple",
    "Relation",
    "separates",
    "enumerate_paths",
    "enumerate_cycles",
    "quotient_graph",
    "enumerate_couples",
    "dual",
    "separation_relation",
    "path_graph",
    "cycle_graph",
    "complete_graph",
    "star_graph",
    "empty_graph",
    "random_graph",
]

# Exhaustive enumeration beyond this is impractical (2^(d-2) couples per pair).
MAX_ENUM_NODES = 12


def _normalize_edge(i: int, j: int) -> tuple[int, int]:
    return (i, j) if i < j else (j, i)


@dataclass(frozen=True)
class Graph:
    """Simple undirected graph on nodes ``1..d``, identified with its edge set."""

    d: int
    edges: frozenset[tuple[int, int]] = field(default_factory=frozenset)

    def __post_init__(self):
        if not isinstance(self.d, (int, np.integer)) or self.d < 1:
            raise ValueError(f"node count must be a positive integer, got {self.d!r}")
        normalized = set()
        for e in self.edges:
            i, j = (int(v) for v in e)
            if i == j:
                raise ValueError(f"self-loop ({i},{i}) not allowed in a simple graph")
            if not (1 <= i <= self.d and 1 <= j <= self.d):
                raise ValueError(f"edge ({i},{j}) out of range 1..{self.d}")
            normalized.add(_normalize_edge(i, j))
        object.__setattr__(self, "d", int(self.d))
        object.__setattr__(self, "edges", frozenset(normalized))

    @classmethod
    def from_edges(cls, d: int, edges: Iterable[tuple[int, int]]) -> "Graph":
        edges = list(edges)
        seen = set()
        for e in edges:
            key = _normalize_edge(*e)
            if key in seen:
                raise ValueError(f"duplicate edge {e}")
            seen.add(key)
        return cls(d, frozenset(edges))

    @property
    def nodes(self) -> range:
        return range(1, self.d + 1)

    @property
    def g(self) -> int:
        return len(self.edges)

    def sorted_edges(self) -> list[tuple[int, int]]:
        return sorted(self.edges)

    def has_edge(self, i: int, j: int) -> bool:
        return _normalize_edge(i, j) in self.edges

    def neighbors(self, i: int) -> list[int]:
        return sorted(b if a == i else a for a, b in self.edges if i in (a, b))

    def adjacency(self) -> dict[int, set[int]]:
        adj: dict[int, set[int]] = {v: set() for v in self.nodes}
        for a, b in self.edges:
            adj[a].add(b)
            adj[b].add(a)
        return adj

    def relabel(self, perm: dict[int, int]) -> "Graph":
        """Image of the graph under the node bijection ``perm``."""
        return Graph(self.d, frozenset((perm[a], perm[b]) for a, b in self.edges))

    def to_json(self) -> dict:
        return {"d": self.d, "edges": [list(e) for e in self.sorted_edges()]}

    @classmethod
    def from_json(cls, obj) -> "Graph":
        """Parse ``{"d": int, "edges": [[i, j], ...]}`` with ``i < j``.

        Raises ValueError on malformed, duplicated or out-of-range input.
        """
        if isinstance(obj, (str, bytes)):
            obj = json.loads(obj)
        if not isinstance(obj, dict) or "d" not in obj or "edges" not in obj:
            raise ValueError("graph JSON must be an object with keys 'd' and 'edges'")
        d = obj["d"]
        if isinstance(d, bool) or not isinstance(d, int):
            raise ValueError("'d' must be an integer")
        edges = obj["edges"]
        if not isinstance(edges, list):
            raise ValueError("'edges' must be a list")
        parsed = []
        for e in edges:
            if (
                not isinstance(e, list)
                or len(e) != 2
                or not all(isinstance(v, int) and not isinstance(v, bool) for v in e)
            ):
                raise ValueError(f"malformed edge {e!r}")
            if e[0] >= e[1]:
                raise ValueError(f"edge {e!r} must satisfy i < j")
            parsed.append((e[0], e[1]))
        return cls.from_edges(d, parsed)


@dataclass(frozen=True)
class DiGraph:
    """Directed graph on nodes ``1..r``; a self-loop is allowed only at node 1."""

    r: int
    arcs: frozenset[tuple[int, int]] = field(default_factory=frozenset)

    def __post_init__(self):
        if self.r < 1:
            raise ValueError(f"node count must be positive, got {self.r}")
        arcs = frozenset((int(a), int(b)) for a, b in self.arcs)
        for a, b in arcs:
            if not (1 <= a <= self.r and 1 <= b <= self.r):
                raise ValueError(f"arc ({a},{b}) out of range 1..{self.r}")
            if a == b and a != 1:
                raise ValueError(f"self-loop allowed only at node 1, got ({a},{a})")
        object.__setattr__(self, "arcs", arcs)

    @property
    def nodes(self) -> range:
        return range(1, self.r + 1)

    def has_arc(self, a: int, b: int) -> bool:
        return (a, b) in self.arcs

    def successors(self, a: int) -> list[int]:
        return sorted(b for x, b in self.arcs if x == a)

    def to_json(self) -> dict:
        return {"r": self.r, "arcs": [list(a) for a in sorted(self.arcs)]}

    @classmethod
    def from_json(cls, obj) -> "DiGraph":
        if isinstance(obj, (str, bytes)):
            obj = json.loads(obj)
        if not isinstance(obj, dict) or "r" not in obj or "arcs" not in obj:
            raise ValueError("digraph JSON must be an object with keys 'r' and 'arcs'")
        r = obj["r"]
        if isinstance(r, bool) or not isinstance(r, int):
            raise ValueError("'r' must be an integer")
        arcs = []
        for a in obj["arcs"]:
            if not isinstance(a, list) or len(a) != 2 or not all(isinstance(v, int) for v in a):
                raise ValueError(f"malformed arc {a!r}")
            arcs.append(tuple(a))
        if len(set(arcs)) != len(arcs):
            raise ValueError("duplicate arcs")
        return cls(r, frozenset(arcs))


@dataclass(frozen=True)
class Couple:
    """The query ``(ij|K)``: is ``i`` independent of ``j`` given ``K``."""

    i: int
    j: int
    K: frozenset[int] = frozenset()

    def __post_init__(self):
        i, j = int(self.i), int(self.j)
        if i == j:
            raise ValueError(f"couple needs distinct nodes, got i = j = {i}")
        K = frozenset(int(k) for k in self.K)
        if i in K or j in K:
            raise ValueError(f"K={set(K)} must not contain {i} or {j}")
        if i > j:
            i, j = j, i
        object.__setattr__(self, "i", i)
        object.__setattr__(self, "j", j)
        object.__setattr__(self, "K", K)

    def check(self, d: int) -> None:
        if not (1 <= self.i <= d and 1 <= self.j <= d and all(1 <= k <= d for k in self.K)):
            raise ValueError(f"couple {self} out of range for d={d}")

    def dual(self, d: int) -> "Couple":
        rest = frozenset(range(1, d + 1)) - self.K - {self.i, self.j}
        return Couple(self.i, self.j, rest)

    def sort_key(self) -> tuple[int, int, int]:
        return (self.i, self.j, sum(1 << (k - 1) for k in self.K))

    def __str__(self) -> str:
        ks = ",".join(str(k) for k in sorted(self.K))
        return f"({self.i}{self.j}|{{{ks}}})"

    def to_json(self) -> dict:
        return {"i": self.i, "j": self.j, "K": sorted(self.K)}

    @classmethod
    def from_json(cls, obj) -> "Couple":
        return cls(obj["i"], obj["j"], frozenset(obj["K"]))


Relation = frozenset  # frozenset[Couple]


def sorted_relation(rel: Iterable[Couple]) -> list[Couple]:
    return sorted(rel, key=Couple.sort_key)


def _check_nodes(G: Graph, S, name: str) -> frozenset[int]:
    S = frozenset(int(v) for v in S)
    if any(not (1 <= v <= G.d) for v in S):
        raise ValueError(f"{name}={set(S)} has nodes outside 1..{G.d}")
    return S


def separates(G: Graph, A, C, B) -> bool:
    """True iff every path from ``A`` to ``B`` in ``G`` meets ``C``.

    Breadth-first search from ``A`` in the graph with ``C`` removed.
    """
    A = _check_nodes(G, A, "A")
    B = _check_nodes(G, B, "B")
    C = _check_nodes(G, C, "C")
    if not A or not B:
        raise ValueError("A and B must be nonempty")
    if A & B or A & C or B & C:
        raise ValueError("A, B, C must be pairwise disjoint")
    adj = G.adjacency()
    seen = set(A)
    queue = deque(A)
    while queue:
        v = queue.popleft()
        for w in adj[v]:
            if w in C or w in seen:
                continue
            if w in B:
                return False
            seen.add(w)
            queue.append(w)
    return True


def enumerate_paths(G: Graph, i: int, j: int, t: int, K=None) -> set[tuple[int, ...]]:
    """All ``ij``-paths in ``G`` of length ``t + 1`` with interior nodes in ``K``.

    A path is returned as the node tuple ``(i, i_1, ..., i_t, j)``.  ``K=None``
    means all nodes other than ``i`` and ``j``.  Returns the empty set when
    ``t >= d``.
    """
    if i == j:
        raise ValueError("endpoints must differ; use enumerate_cycles for cycles")
    _check_nodes(G, {i, j}, "endpoints")
    if K is None:
        K = frozenset(G.nodes) - {i, j}
    K = _check_nodes(G, K, "K")
    if i in K or j in K:
        raise ValueError("K must be disjoint from {i, j}")
    if t < 0:
        raise ValueError("t must be nonnegative")
    if t >= G.d or t > len(K):
        return set()
    adj = G.adjacency()
    out: set[tuple[int, ...]] = set()
    path = [i]
    on_path = {i}

    def extend(v: int, remaining: int) -> None:
        if remaining == 0:
            if j in adj[v]:
                out.add(tuple(path) + (j,))
            return
        for w in adj[v]:
            if w in K and w not in on_path:
                path.append(w)
                on_path.add(w)
                extend(w, remaining - 1)
                path.pop()
                on_path.discard(w)

    extend(i, t)
    return out


def enumerate_cycles(H: DiGraph, t: int) -> set[tuple[int, ...]]:
    """All 1-cycles of length ``t + 1`` in ``H``, as tuples ``(1, i_1, ..., i_t, 1)``."""
    if not 0 <= t < H.r:
        raise ValueError(f"t must lie in 0..{H.r - 1}, got {t}")
    if t == 0:
        return {(1, 1)} if H.has_arc(1, 1) else set()
    succ = {v: [w for w in H.successors(v) if w != 1] for v in H.nodes}
    out: set[tuple[int, ...]] = set()
    path = [1]

    def extend(v: int, remaining: int) -> None:
        if remaining == 0:
            if H.has_arc(v, 1):
                out.add(tuple(path) + (1,))
            return
        for w in succ[v]:
            if w not in path:
                path.append(w)
                extend(w, remaining - 1)
                path.pop()

    extend(1, t)
    return out


def quotient_graph(G: Graph, c: Couple) -> tuple[DiGraph, dict[int, int]]:
    """Induce ``G`` on ``ijK`` and merge ``i``, ``j`` into node 1.

    Arcs ``(1, k)`` come from edges ``ik``, arcs ``(k, 1)`` from edges ``kj``,
    edges inside ``K`` become arcs in both directions and an edge ``ij``
    becomes a self-loop at 1.  ``K`` is relabelled ``2, 3, ...`` in ascending
    order; the returned map sends original nodes to new labels.
    """
    c.check(G.d)
    relabel = {c.i: 1, c.j: 1}
    for pos, k in enumerate(sorted(c.K), start=2):
        relabel[k] = pos
    arcs = set()
    if G.has_edge(c.i, c.j):
        arcs.add((1, 1))
    for k in c.K:
        if G.has_edge(c.i, k):
            arcs.add((1, relabel[k]))
        if G.has_edge(k, c.j):
            arcs.add((relabel[k], 1))
    for k, l in itertools.combinations(sorted(c.K), 2):
        if G.has_edge(k, l):
            arcs.add((relabel[k], relabel[l]))
            arcs.add((relabel[l], relabel[k]))
    return DiGraph(1 + len(c.K), frozenset(arcs)), relabel


def enumerate_couples(d: int) -> Iterator[Couple]:
    """All ``d(d-1)/2 * 2^(d-2)`` couples, ordered by ``(i, j, K as bitmask)``."""
    if d < 2:
        raise ValueError("need at least two nodes")
    for i, j in itertools.combinations(range(1, d + 1), 2):
        rest = [k for k in range(1, d + 1) if k not in (i, j)]
        # Bit b of the mask selects rest[b]; rest is ascending, so the mask
        # order matches the node-bitmask order used by Couple.sort_key.
        for mask in range(1 << len(rest)):
            yield Couple(i, j, frozenset(rest[b] for b in range(len(rest)) if mask >> b & 1))


def dual(L: Iterable[Couple], d: int) -> frozenset[Couple]:
    """Replace every ``(ij|K)`` by ``(ij|[d] - ijK)``."""
    return frozenset(c.dual(d) for c in L)


def separation_relation(G: Graph) -> frozenset[Couple]:
    """The relation of all couples ``(ij|K)`` with ``K`` separating ``i`` from ``j``."""
    return frozenset(c for c in enumerate_couples(G.d) if separates(G, {c.i}, c.K, {c.j}))


def path_graph(d: int) -> Graph:
    return Graph(d, frozenset((k, k + 1) for k in range(1, d)))


def cycle_graph(d: int) -> Graph:
    if d < 3:
        raise ValueError("a cycle needs at least three nodes")
    return Graph(d, frozenset([(k, k + 1) for k in range(1, d)] + [(1, d)]))


def complete_graph(d: int) -> Graph:
    return Graph(d, frozenset(itertools.combinations(range(1, d + 1), 2)))


def star_graph(d: int) -> Graph:
    """Node 1 joined to every other node."""
    return Graph(d, frozenset((1, k) for k in range(2, d + 1)))


def empty_graph(d: int) -> Graph:
    return Graph(d)


def random_graph(d: int, p: float, rng: np.random.Generator) -> Graph:
    """Erdős–Rényi graph with edge probability ``p``."""
    pairs = list(itertools.combinations(range(1, d + 1), 2))
    keep = rng.random(len(pairs)) < p
    return Graph(d, frozenset(e for e, k in zip(pairs, keep) if k))
