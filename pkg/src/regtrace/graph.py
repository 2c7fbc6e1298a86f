"""Finite regular simple graphs: validation, generators and directed edges."""

from __future__ import annotations

import itertools
import json
import random
from collections import deque
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

from .errors import (
    DegreeTooSmall,
    DocumentError,
    GenerationFailed,
    InfeasibleParameters,
    NotConnected,
    NotRegular,
    NotSimple,
)

DEFAULT_REJECTION_BUDGET = 10_000

_DOCUMENT_KEYS = {"name", "vertex_count", "edges"}


@dataclass(frozen=True)
class GraphDocument:
    name: str
    vertex_count: int
    edges: tuple[tuple[int, int], ...]

    @classmethod
    def from_dict(cls, data: dict) -> "GraphDocument":
        if not isinstance(data, dict):
            raise DocumentError("graph document must be a JSON object")
        unknown = set(data) - _DOCUMENT_KEYS
        if unknown:
            raise DocumentError(f"unknown keys in graph document: {sorted(unknown)}")
        missing = _DOCUMENT_KEYS - set(data)
        if missing:
            raise DocumentError(f"missing keys in graph document: {sorted(missing)}")
        name, n, edges = data["name"], data["vertex_count"], data["edges"]
        if not isinstance(name, str):
            raise DocumentError("'name' must be a string")
        if not _is_int(n):
            raise DocumentError("'vertex_count' must be an integer")
        if not isinstance(edges, list):
            raise DocumentError("'edges' must be an array")
        pairs = []
        for e in edges:
            if not (isinstance(e, list) and len(e) == 2 and all(_is_int(x) for x in e)):
                raise DocumentError(f"edge {e!r} is not a pair of integers")
            pairs.append((e[0], e[1]))
        return cls(name, n, tuple(pairs))

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "vertex_count": self.vertex_count,
            "edges": [list(e) for e in self.edges],
        }

    @classmethod
    def loads(cls, text: str) -> "GraphDocument":
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise DocumentError(f"invalid JSON: {exc}") from exc
        return cls.from_dict(data)

    def dumps(self) -> str:
        return json.dumps(self.to_dict(), separators=(", ", ": ")) + "\n"


def _is_int(x) -> bool:
    return isinstance(x, int) and not isinstance(x, bool)


@dataclass(frozen=True)
class DirectedEdge:
    tail: int
    head: int
    reverse_id: int


@dataclass(frozen=True, eq=False)
class Graph:
    """A validated connected simple (q+1)-regular graph on vertices 0..n-1.

    Build instances with :func:`build_graph` or :func:`generate`; the
    constructor does not validate.
    """

    name: str
    vertex_count: int
    edges: tuple[tuple[int, int], ...]
    neighbors: tuple[tuple[int, ...], ...]
    q: int

    @property
    def degree(self) -> int:
        return self.q + 1

    @property
    def edge_count(self) -> int:
        return len(self.edges)

    def has_edge(self, u: int, v: int) -> bool:
        return v in self.neighbors[u]

    def adjacency_matrix(self):
        import numpy as np

        a = np.zeros((self.vertex_count, self.vertex_count))
        for u, v in self.edges:
            a[u, v] = a[v, u] = 1.0
        return a

    def to_document(self) -> GraphDocument:
        return GraphDocument(self.name, self.vertex_count, self.edges)

    def __repr__(self) -> str:
        return f"Graph(name={self.name!r}, vertex_count={self.vertex_count}, q={self.q})"


def build_graph(doc: GraphDocument) -> Graph:
    n = doc.vertex_count
    if n < 1:
        raise DocumentError("vertex_count must be positive")
    seen: set[frozenset[int]] = set()
    nbrs: list[list[int]] = [[] for _ in range(n)]
    for u, v in doc.edges:
        if not (0 <= u < n and 0 <= v < n):
            raise DocumentError(f"edge ({u}, {v}) references a vertex outside [0, {n})")
        if u == v:
            raise NotSimple(f"self-loop at vertex {u}")
        key = frozenset((u, v))
        if key in seen:
            raise NotSimple(f"duplicate edge ({u}, {v})")
        seen.add(key)
        nbrs[u].append(v)
        nbrs[v].append(u)

    degrees = {len(x) for x in nbrs}
    if len(degrees) != 1:
        raise NotRegular(f"vertex degrees differ: {sorted(degrees)}")
    (deg,) = degrees
    if deg < 2:
        raise DegreeTooSmall(f"valence {deg} < 2")
    neighbors = tuple(tuple(sorted(x)) for x in nbrs)
    if not _connected(neighbors):
        raise NotConnected("graph is not connected")
    return Graph(doc.name, n, tuple(doc.edges), neighbors, deg - 1)


def load_graph(path: str | Path) -> Graph:
    return build_graph(GraphDocument.loads(Path(path).read_text(encoding="utf-8")))


def _connected(neighbors: Sequence[Sequence[int]]) -> bool:
    seen = {0}
    queue = deque([0])
    while queue:
        v = queue.popleft()
        for w in neighbors[v]:
            if w not in seen:
                seen.add(w)
                queue.append(w)
    return len(seen) == len(neighbors)


def _from_edges(name: str, n: int, edges: Iterable[tuple[int, int]]) -> Graph:
    return build_graph(GraphDocument(name, n, tuple(edges)))


# ---------------------------------------------------------------------------
# generators
# ---------------------------------------------------------------------------

def cycle(length: int) -> Graph:
    if length < 3:
        raise InfeasibleParameters("a cycle needs at least 3 vertices")
    return _from_edges(f"cycle({length})", length, ((i, (i + 1) % length) for i in range(length)))


def complete(n: int) -> Graph:
    if n < 3:
        raise InfeasibleParameters("complete graph needs n >= 3 for valence >= 2")
    return _from_edges(f"complete({n})", n, itertools.combinations(range(n), 2))


def petersen() -> Graph:
    outer = [(i, (i + 1) % 5) for i in range(5)]
    spokes = [(i, i + 5) for i in range(5)]
    inner = [(5 + i, 5 + (i + 2) % 5) for i in range(5)]
    return _from_edges("petersen", 10, outer + spokes + inner)


def hypercube(d: int) -> Graph:
    if d < 2:
        raise InfeasibleParameters("hypercube needs dimension >= 2")
    n = 1 << d
    edges = [(v, v ^ (1 << b)) for v in range(n) for b in range(d) if v < v ^ (1 << b)]
    return _from_edges(f"hypercube({d})", n, edges)


def circulant(n: int, offsets: Sequence[int]) -> Graph:
    """Circulant graph joining i to i +/- k for each offset k."""
    if n < 3:
        raise InfeasibleParameters("circulant graph needs n >= 3")
    steps = set()
    for k in offsets:
        k %= n
        if k == 0:
            raise InfeasibleParameters("offset 0 would create loops")
        steps.add(min(k, n - k))
    edges = set()
    for i in range(n):
        for k in sorted(steps):
            edges.add(tuple(sorted((i, (i + k) % n))))
    name = f"circulant({n}, {sorted(steps)})"
    try:
        return _from_edges(name, n, sorted(edges))
    except (NotConnected, DegreeTooSmall) as exc:
        raise InfeasibleParameters(str(exc)) from exc


def random_regular(n: int, degree: int, seed: int, budget: int = DEFAULT_REJECTION_BUDGET) -> Graph:
    """Sample a connected simple ``degree``-regular graph by the pairing model.

    Each attempt shuffles the n*degree stubs and pairs them up; attempts with
    loops, repeated edges or more than one component are discarded whole.
    """
    if degree < 2 or degree >= n or (n * degree) % 2:
        raise InfeasibleParameters(f"no simple connected {degree}-regular graph on {n} vertices")
    if budget < 1:
        raise InfeasibleParameters("rejection budget must be positive")
    rng = random.Random(seed)
    stubs = [v for v in range(n) for _ in range(degree)]
    name = f"random_regular({n}, {degree}, seed={seed})"
    for _ in range(budget):
        rng.shuffle(stubs)
        edges = []
        seen = set()
        ok = True
        for a, b in zip(stubs[::2], stubs[1::2]):
            e = (min(a, b), max(a, b))
            if a == b or e in seen:
                ok = False
                break
            seen.add(e)
            edges.append(e)
        if not ok:
            continue
        edges.sort()
        try:
            return _from_edges(name, n, edges)
        except NotConnected:
            continue
    raise GenerationFailed(f"no valid pairing in {budget} attempts")


GENERATORS = ("cycle", "complete", "petersen", "hypercube", "circulant", "random_regular")


def generate(kind: str, *, n: int | None = None, degree: int | None = None, seed: int = 0,
             offsets: Sequence[int] = (), budget: int = DEFAULT_REJECTION_BUDGET) -> Graph:
    kind = kind.replace("-", "_")

    def need(value, label):
        if value is None:
            raise InfeasibleParameters(f"generator {kind!r} requires {label}")
        return value

    if kind == "cycle":
        return cycle(need(n, "n"))
    if kind == "complete":
        return complete(need(n, "n"))
    if kind == "petersen":
        return petersen()
    if kind == "hypercube":
        return hypercube(need(n, "n (the dimension)"))
    if kind == "circulant":
        return circulant(need(n, "n"), offsets)
    if kind == "random_regular":
        return random_regular(need(n, "n"), need(degree, "degree"), seed, budget)
    raise InfeasibleParameters(f"unknown generator {kind!r}; choose from {', '.join(GENERATORS)}")


# ---------------------------------------------------------------------------
# structure
# ---------------------------------------------------------------------------

def directed_edges(g: Graph) -> list[DirectedEdge]:
    """Both orientations of every edge; ids 2i and 2i+1 are mutual reverses."""
    out = []
    for i, (u, v) in enumerate(g.edges):
        out.append(DirectedEdge(u, v, 2 * i + 1))
        out.append(DirectedEdge(v, u, 2 * i))
    return out


def is_bipartite(g: Graph) -> bool:
    colour = [-1] * g.vertex_count
    colour[0] = 0
    queue = deque([0])
    while queue:
        v = queue.popleft()
        for w in g.neighbors[v]:
            if colour[w] < 0:
                colour[w] = 1 - colour[v]
                queue.append(w)
            elif colour[w] == colour[v]:
                return False
    return True
