"""Graphs with loops, the operations used on zero-divisor graphs, and ζ itself."""
from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass
from functools import cached_property
from typing import Any, Iterable, Sequence

import numpy as np

from . import _search
from .errors import NotZeroDivisorRelation, PreconditionError
from .relations import EQUALITY, EQUIANNIHILATED, EqRelation, relation_partition, zero_divisor_witness
from .ring import FiniteRing, nonzero_zero_divisors


@dataclass(frozen=True)
class Graph:
    """Undirected graph on vertices 0..n-1; loops are edges (i, i).

    ``payloads`` optionally carries per-vertex data (for ζ graphs, the
    representative ring element of the vertex's class).
    """

    labels: tuple[str, ...]
    edges: frozenset
    payloads: tuple[Any, ...] | None = None

    def __post_init__(self):
        n = len(self.labels)
        for i, j in self.edges:
            if not (0 <= i <= j < n):
                raise PreconditionError(f"bad edge ({i}, {j}) for {n} vertices")
        if self.payloads is not None and len(self.payloads) != n:
            raise PreconditionError("one payload per vertex")

    @classmethod
    def from_adjacency(cls, adj: np.ndarray, labels=None, payloads=None) -> "Graph":
        adj = np.asarray(adj, dtype=bool)
        n = len(adj)
        if not np.array_equal(adj, adj.T):
            raise PreconditionError("adjacency must be symmetric")
        i, j = np.nonzero(np.triu(adj))
        labels = tuple(labels) if labels is not None else tuple(str(k) for k in range(n))
        g = cls(labels, frozenset(zip(i.tolist(), j.tolist())),
                tuple(payloads) if payloads is not None else None)
        object.__setattr__(g, "adjacency", adj.copy())
        g.adjacency.setflags(write=False)
        return g

    @property
    def n(self) -> int:
        return len(self.labels)

    def __len__(self):
        return self.n

    @cached_property
    def adjacency(self) -> np.ndarray:
        m = np.zeros((self.n, self.n), dtype=bool)
        for i, j in self.edges:
            m[i, j] = m[j, i] = True
        m.setflags(write=False)
        return m

    def neighbors(self, v: int) -> frozenset:
        return frozenset(int(x) for x in np.flatnonzero(self.adjacency[v]))

    def degree(self, v: int) -> int:
        """|N(v)|; a loop counts once."""
        return int(self.adjacency[v].sum())

    @cached_property
    def degrees(self) -> tuple[int, ...]:
        return tuple(int(x) for x in self.adjacency.sum(axis=1))

    def has_loop(self, v: int) -> bool:
        return bool(self.adjacency[v, v])

    @property
    def looped(self) -> tuple[int, ...]:
        return tuple(int(v) for v in np.flatnonzero(np.diagonal(self.adjacency)))

    def sorted_edges(self) -> list[tuple[int, int]]:
        return sorted(self.edges)

    def __repr__(self):
        return f"Graph(n={self.n}, edges={len(self.edges)}, loops={len(self.looped)})"


def _pair(i, j):
    return (i, j) if i <= j else (j, i)


def empty_graph() -> Graph:
    return Graph((), frozenset())


def terminal_graph() -> Graph:
    """Single vertex with a loop."""
    return Graph(("*",), frozenset({(0, 0)}))


@dataclass(frozen=True, eq=False)
class GraphMap:
    source: Graph
    target: Graph
    map: tuple[int, ...]

    def __post_init__(self):
        if len(self.map) != self.source.n:
            raise PreconditionError("map must be total on source vertices")
        if any(not 0 <= w < self.target.n for w in self.map):
            raise PreconditionError("map leaves the target vertex set")

    @cached_property
    def _pulled(self) -> np.ndarray:
        idx = np.array(self.map, dtype=np.intp)
        return self.target.adjacency[np.ix_(idx, idx)]

    @cached_property
    def is_morphism(self) -> bool:
        return bool((~self.source.adjacency | self._pulled).all())

    @cached_property
    def is_comorphism(self) -> bool:
        return bool((self.source.adjacency | ~self._pulled).all())

    @property
    def is_strong(self) -> bool:
        return self.is_morphism and self.is_comorphism

    @cached_property
    def is_injective(self) -> bool:
        return len(set(self.map)) == len(self.map)

    @cached_property
    def is_surjective(self) -> bool:
        return len(set(self.map)) == self.target.n

    @property
    def is_bijective(self) -> bool:
        return self.is_injective and self.is_surjective

    @property
    def is_isomorphism(self) -> bool:
        return self.is_bijective and self.is_strong

    def then(self, other: "GraphMap") -> "GraphMap":
        if other.source is not self.target and other.source != self.target:
            raise PreconditionError("maps are not composable")
        return GraphMap(self.source, other.target, tuple(other.map[v] for v in self.map))

    def inverse(self) -> "GraphMap":
        if not self.is_bijective:
            raise PreconditionError("only bijections invert")
        inv = [0] * self.target.n
        for v, w in enumerate(self.map):
            inv[w] = v
        return GraphMap(self.target, self.source, tuple(inv))

    def flags(self) -> dict:
        return {
            "is_morphism": self.is_morphism,
            "is_comorphism": self.is_comorphism,
            "is_strong": self.is_strong,
            "is_bijective": self.is_bijective,
        }


def classify_map(phi: GraphMap) -> dict:
    return phi.flags()


def identity_map(G: Graph) -> GraphMap:
    return GraphMap(G, G, tuple(range(G.n)))


# --------------------------------------------------------------------------
# the zero-divisor graph


def zeta(A: FiniteRing, R: EqRelation, check: bool = True) -> Graph:
    """Zero-divisor graph: classes of R, [a] ~ [b] iff ab = 0, loops kept."""
    if R.ring is not A:
        raise PreconditionError("relation belongs to a different ring")
    if check:
        w = zero_divisor_witness(R)
        if w is not None:
            raise NotZeroDivisorRelation(w)
    reps = R.representatives
    adj = A.annihilates[np.ix_(reps, reps)]
    labels = [A.labels[r] if len(b) == 1 else f"[{A.labels[r]}]" for r, b in zip(reps, R.blocks)]
    return Graph.from_adjacency(adj, labels, [int(r) for r in reps])


def zeta_on(A: FiniteRing, R: EqRelation, subset: Iterable[int]) -> Graph:
    """Subgraph of ζ(A, R) induced by the classes meeting ``subset``."""
    G = zeta(A, R)
    keep = sorted({int(R.class_of[a]) for a in subset})
    return induced_subgraph(G, keep)


def zeta_star(A: FiniteRing, R: EqRelation) -> Graph:
    """ζ(D*(A), R)."""
    return zeta_on(A, R, nonzero_zero_divisors(A))


def class_vertex(R: EqRelation, a: int) -> int:
    """Vertex of ζ(A, R) holding element a."""
    return int(R.class_of[a])


# --------------------------------------------------------------------------
# operations


def induced_subgraph(G: Graph, keep) -> Graph:
    """Keep the listed vertex ids (or those satisfying a predicate), renumbered in order."""
    if callable(keep):
        keep = [v for v in range(G.n) if keep(v)]
    keep = sorted(set(int(v) for v in keep))
    for v in keep:
        if not 0 <= v < G.n:
            raise PreconditionError(f"unknown vertex {v}")
    idx = np.array(keep, dtype=np.intp)
    payloads = None if G.payloads is None else [G.payloads[v] for v in keep]
    return Graph.from_adjacency(G.adjacency[np.ix_(idx, idx)], [G.labels[v] for v in keep], payloads)


def strip_loops(G: Graph) -> Graph:
    adj = G.adjacency.copy()
    np.fill_diagonal(adj, False)
    return Graph.from_adjacency(adj, G.labels, G.payloads)


def _check_partition(P, n):
    flat = sorted(v for b in P for v in b)
    if flat != list(range(n)) or any(not b for b in P):
        raise PreconditionError("blocks must partition the vertex set")


def quotient_graph(G: Graph, P: Sequence[Sequence[int]]) -> tuple[Graph, GraphMap, bool]:
    """G/P with [x] ~ [y] iff some members are adjacent; also reports strongness."""
    P = sorted((sorted(b) for b in P), key=lambda b: b[0])
    _check_partition(P, G.n)
    cls = np.empty(G.n, dtype=np.intp)
    for i, b in enumerate(P):
        cls[b] = i
    k = len(P)
    onehot = np.zeros((G.n, k), dtype=np.int64)
    onehot[np.arange(G.n), cls] = 1
    adj = (onehot.T @ G.adjacency.astype(np.int64) @ onehot) > 0
    labels = [G.labels[b[0]] if len(b) == 1 else "{" + ",".join(G.labels[v] for v in b) + "}" for b in P]
    payloads = None if G.payloads is None else [G.payloads[b[0]] for b in P]
    Q = Graph.from_adjacency(adj, labels, payloads)
    proj = GraphMap(G, Q, tuple(int(c) for c in cls))
    return Q, proj, proj.is_strong


def kronecker_product(G: Graph, H: Graph) -> Graph:
    """Vertex (g, h) has id g * |H| + h; adjacent iff adjacent in both coordinates."""
    adj = np.kron(G.adjacency.astype(np.uint8), H.adjacency.astype(np.uint8)).astype(bool)
    labels = [f"({a},{b})" for a in G.labels for b in H.labels]
    payloads = None
    if G.payloads is not None and H.payloads is not None:
        payloads = [(p, q) for p in G.payloads for q in H.payloads]
    return Graph.from_adjacency(adj, labels, payloads)


def coproduct(G: Graph, H: Graph) -> Graph:
    n = G.n
    edges = set(G.edges) | {(i + n, j + n) for i, j in H.edges}
    payloads = None
    if G.payloads is not None and H.payloads is not None:
        payloads = tuple(G.payloads) + tuple(H.payloads)
    return Graph(G.labels + H.labels, frozenset(edges), payloads)


def equalizer_graph(phi: GraphMap, psi: GraphMap) -> tuple[Graph, list[int]]:
    """Induced subgraph on {v : phi(v) = psi(v)} and the kept source vertex ids."""
    if phi.source != psi.source or phi.target != psi.target:
        raise PreconditionError("equalizer of maps with different source or target")
    keep = [v for v in range(phi.source.n) if phi.map[v] == psi.map[v]]
    return induced_subgraph(phi.source, keep), keep


@dataclass(frozen=True)
class Connectivity:
    connected: bool
    diameter: float  # math.inf when disconnected
    empty: bool = False


def connectivity(G: Graph) -> Connectivity:
    """Connectedness and diameter of G with loops removed."""
    n = G.n
    if n == 0:
        return Connectivity(True, 0, empty=True)
    adj = G.adjacency.copy()
    np.fill_diagonal(adj, False)
    nbrs = [np.flatnonzero(adj[v]) for v in range(n)]
    diameter = 0
    for s in range(n):
        dist = [-1] * n
        dist[s] = 0
        queue = deque([s])
        while queue:
            v = queue.popleft()
            for w in nbrs[v]:
                if dist[w] < 0:
                    dist[w] = dist[v] + 1
                    queue.append(w)
        if min(dist) < 0:
            return Connectivity(False, float("inf"))
        diameter = max(diameter, max(dist))
    return Connectivity(True, diameter)


def are_isomorphic(G: Graph, H: Graph, node_cap: int = _search.DEFAULT_NODE_CAP) -> GraphMap | None:
    """Witness isomorphism G -> H, or None.

    Pruning uses vertex count, edge and loop counts, degrees (loops once) and
    iterated neighbour-colour multisets before backtracking.
    """
    m = _search.find_isomorphism(G.adjacency, H.adjacency, node_cap)
    if m is None:
        return None
    phi = GraphMap(G, H, tuple(m))
    assert phi.is_isomorphism
    return phi


def universal_vertices(G: Graph) -> list[int]:
    """Vertices adjacent to every vertex, themselves included."""
    return [int(v) for v in np.flatnonzero(G.adjacency.all(axis=1))]


# --------------------------------------------------------------------------
# export


def to_json(G: Graph) -> str:
    doc = {
        "vertices": [{"id": i, "label": G.labels[i]} for i in range(G.n)],
        "edges": [list(e) for e in G.sorted_edges()],
    }
    return json.dumps(doc, indent=1, ensure_ascii=False) + "\n"


def _dot_escape(s: str) -> str:
    return s.replace("\\", "\\\\").replace('"', '\\"')


def to_dot(G: Graph, name: str = "G") -> str:
    lines = [f"graph {name} {{"]
    lines += [f'  v{i} [label="{_dot_escape(G.labels[i])}"];' for i in range(G.n)]
    lines += [f"  v{i} -- v{j};" for i, j in G.sorted_edges()]
    lines.append("}")
    return "\n".join(lines) + "\n"


def export(G: Graph, format: str = "json") -> str:
    if format == "json":
        return to_json(G)
    if format == "dot":
        return to_dot(G)
    raise PreconditionError(f"unknown export format {format!r}")


# --------------------------------------------------------------------------
# the classical graphs


@dataclass(frozen=True)
class ClassicalViews:
    beck: Graph
    anderson_livingston: Graph
    mulay: Graph


def classical_views(A: FiniteRing) -> ClassicalViews:
    """Beck's G(A), Anderson-Livingston's Γ(A) and Mulay's compressed Γ_E(A), all loopless."""
    eq = relation_partition(A, EQUALITY)
    ea = relation_partition(A, EQUIANNIHILATED)
    return ClassicalViews(
        beck=strip_loops(zeta(A, eq)),
        anderson_livingston=strip_loops(zeta_star(A, eq)),
        mulay=strip_loops(zeta_star(A, ea)),
    )
