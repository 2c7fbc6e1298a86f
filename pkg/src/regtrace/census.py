"""Exact counting and enumeration of closed paths and geodesics on a graph."""

from __future__ import annotations

import csv
from collections import Counter
from dataclasses import dataclass
from functools import lru_cache
from typing import Literal, Sequence

from .errors import BudgetExceeded
from .graph import Graph, directed_edges
from .series import homotopy_class_coefficients, tree_walk_counts

ClosedPath = tuple[int, ...]


@dataclass(frozen=True)
class OracleBudget:
    """Caps for exhaustive enumeration."""

    max_vertices: int = 16
    max_length: int = 12
    max_classes: int = 1_000_000

    def check(self, g: Graph, l: int) -> None:
        if g.vertex_count > self.max_vertices:
            raise BudgetExceeded(f"{g.vertex_count} vertices exceeds oracle cap {self.max_vertices}")
        if l > self.max_length:
            raise BudgetExceeded(f"length {l} exceeds oracle cap {self.max_length}")


DEFAULT_BUDGET = OracleBudget()


class _Contractible:
    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "CONTRACTIBLE"

    def __lt__(self, other) -> bool:
        return not isinstance(other, _Contractible)

    def __reduce__(self):
        return (_Contractible, ())


CONTRACTIBLE = _Contractible()


@dataclass(frozen=True)
class GeodesicClass:
    """Oriented closed geodesic trajectory, stored by its minimal rotation."""

    canonical_word: tuple[int, ...]

    @property
    def length(self) -> int:
        return len(self.canonical_word)

    @property
    def lam(self) -> int:
        return primitive_root_length(self.canonical_word)

    @property
    def is_primitive(self) -> bool:
        return self.lam == self.length

    def __lt__(self, other):
        if isinstance(other, _Contractible):
            return False
        return (self.length, self.canonical_word) < (other.length, other.canonical_word)


@dataclass(frozen=True)
class CensusTable:
    p: tuple[int, ...]
    gp: tuple[int, ...]

    def rows(self) -> list[tuple[int, int, int]]:
        return [(l, p, gp) for l, (p, gp) in enumerate(zip(self.p, self.gp))]

    def write_csv(self, fh) -> None:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["l", "p_l", "gp_l"])
        w.writerows(self.rows())


# ---------------------------------------------------------------------------
# transfer-operator counts
# ---------------------------------------------------------------------------

def count_closed_paths(g: Graph, l_max: int) -> list[int]:
    """p_l = tr A^l for l = 0..l_max, in exact integers."""
    if l_max < 0:
        raise ValueError("l_max must be nonnegative")
    p = [0] * (l_max + 1)
    nbrs = g.neighbors
    for v in range(g.vertex_count):
        vec = {v: 1}
        p[0] += 1
        for l in range(1, l_max + 1):
            nxt: dict[int, int] = {}
            for u, c in vec.items():
                for w in nbrs[u]:
                    nxt[w] = nxt.get(w, 0) + c
            vec = nxt
            p[l] += vec.get(v, 0)
    return p


def _successors(g: Graph) -> list[list[int]]:
    edges = directed_edges(g)
    by_tail: dict[int, list[int]] = {}
    for i, e in enumerate(edges):
        by_tail.setdefault(e.tail, []).append(i)
    return [[f for f in by_tail[e.head] if f != e.reverse_id] for e in edges]


def count_geodesic_paths(g: Graph, l_max: int) -> list[int]:
    """gp_l = tr B^l for the non-backtracking edge operator B, l = 0..l_max.

    gp_0 is reported as 0: a geodesic path has positive length.
    """
    if l_max < 0:
        raise ValueError("l_max must be nonnegative")
    succ = _successors(g)
    gp = [0] * (l_max + 1)
    for e in range(len(succ)):
        vec = {e: 1}
        for l in range(1, l_max + 1):
            nxt: dict[int, int] = {}
            for f, c in vec.items():
                for h in succ[f]:
                    nxt[h] = nxt.get(h, 0) + c
            vec = nxt
            gp[l] += vec.get(e, 0)
    return gp


def census_table(g: Graph, l_max: int) -> CensusTable:
    return CensusTable(tuple(count_closed_paths(g, l_max)), tuple(count_geodesic_paths(g, l_max)))


# ---------------------------------------------------------------------------
# brute-force oracles
# ---------------------------------------------------------------------------

def enumerate_closed_paths(g: Graph, l: int, budget: OracleBudget = DEFAULT_BUDGET) -> list[ClosedPath]:
    """Every closed path of length l as a vertex tuple (start point significant)."""
    budget.check(g, l)
    if l == 0:
        return [(v,) for v in range(g.vertex_count)]
    nbrs = g.neighbors
    out: list[ClosedPath] = []

    def extend(path: list[int]) -> None:
        if len(path) == l:
            if g.has_edge(path[-1], path[0]):
                out.append(tuple(path))
            return
        for w in nbrs[path[-1]]:
            path.append(w)
            extend(path)
            path.pop()

    for v in range(g.vertex_count):
        extend([v])
    return out


def primitive_root_length(word: Sequence[int]) -> int:
    n = len(word)
    if n == 0:
        raise ValueError("empty word")
    for d in range(1, n + 1):
        if n % d == 0 and all(word[i] == word[i % d] for i in range(d, n)):
            return d
    return n  # pragma: no cover


def minimal_rotation(word: Sequence[int]) -> tuple[int, ...]:
    w = tuple(word)
    return min(w[i:] + w[:i] for i in range(len(w)))


def _find_backtrack(w: list[int], strategy: str) -> int:
    n = len(w)
    indices = range(n) if strategy == "leftmost" else range(n - 1, -1, -1)
    for i in indices:
        if w[i] == w[(i + 2) % n]:
            return i
    return -1


def cyclic_reduce(path: Sequence[int], strategy: Literal["leftmost", "rightmost"] = "leftmost"):
    """Cancel cyclic backtracks v, x, v -> v until none remain.

    Returns :data:`CONTRACTIBLE` when nothing is left, else the
    :class:`GeodesicClass` of the reduced cyclic word.
    """
    w = list(path)
    while len(w) > 2:
        i = _find_backtrack(w, strategy)
        if i < 0:
            return GeodesicClass(minimal_rotation(w))
        n = len(w)
        drop = {(i + 1) % n, (i + 2) % n}
        w = [x for j, x in enumerate(w) if j not in drop]
    # a closed path of length <= 2 is a point or a single backtrack
    return CONTRACTIBLE


def enumerate_geodesics(g: Graph, l_max: int, budget: OracleBudget = DEFAULT_BUDGET) -> list[GeodesicClass]:
    """All oriented geodesic trajectories of length 3..l_max, each once."""
    if l_max < 3:
        raise ValueError("l_max must be at least 3")
    if g.vertex_count > budget.max_vertices:
        raise BudgetExceeded(f"{g.vertex_count} vertices exceeds oracle cap {budget.max_vertices}")
    nbrs = g.neighbors
    found: list[GeodesicClass] = []

    def extend(path: list[int]) -> None:
        start = path[0]
        n = len(path)
        if n >= 3 and g.has_edge(path[-1], start) and path[-2] != start and path[1] != path[-1]:
            w = tuple(path)
            if w == minimal_rotation(w):
                found.append(GeodesicClass(w))
                if len(found) > budget.max_classes:
                    raise BudgetExceeded(f"more than {budget.max_classes} geodesic classes")
        if n == l_max:
            return
        prev = path[-2] if n >= 2 else None
        for w in nbrs[path[-1]]:
            # the canonical rotation starts at its smallest vertex
            if w == prev or w < start:
                continue
            path.append(w)
            extend(path)
            path.pop()

    for v in range(g.vertex_count):
        extend([v])
    found.sort()
    return found


def geodesic_path_counts_by_enumeration(g: Graph, l_max: int, budget: OracleBudget = DEFAULT_BUDGET) -> list[int]:
    """gp_l recovered as the sum of Lambda over enumerated classes of length l."""
    gp = [0] * (l_max + 1)
    for c in enumerate_geodesics(g, l_max, budget):
        gp[c.length] += c.lam
    return gp


def homotopy_census(g: Graph, l: int, budget: OracleBudget = DEFAULT_BUDGET) -> Counter:
    """Tally closed paths of length l by their reduced class."""
    return Counter(cyclic_reduce(p) for p in enumerate_closed_paths(g, l, budget))


@lru_cache(maxsize=None)
def homotopy_table(q: int, l_max: int) -> dict[int, tuple[int, ...]]:
    """h(m, .) for every geodesic length 3 <= m <= l_max."""
    return {m: tuple(homotopy_class_coefficients(q, m, l_max)) for m in range(3, l_max + 1)}


def master_identity_terms(g: Graph, l_max: int) -> list[tuple[int, int, int]]:
    """(p_l, contractible part, geodesic part) for l = 0..l_max.

    The trace formula at coefficient level says p_l equals the sum of
    the other two entries.
    """
    p = count_closed_paths(g, l_max)
    gp = count_geodesic_paths(g, l_max)
    tree = tree_walk_counts(g.q, l_max).p_tree
    h = homotopy_table(g.q, l_max)
    rows = []
    for l in range(l_max + 1):
        geo = sum(gp[m] * h[m][l] for m in range(3, l + 1))
        rows.append((p[l], g.vertex_count * tree[l], geo))
    return rows
