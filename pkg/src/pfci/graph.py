"""Graph types and structural queries.

Nodes are dense indices ``0..p-1``; names live in a side table and are only
used for I/O. Three graph types are provided:

* :class:`Dag` -- weighted directed acyclic graph (simulation ground truth).
* :class:`Skeleton` -- undirected adjacency.
* :class:`MixedGraph` -- edges with an endpoint mark at each end (PAG/MAG).

For a :class:`MixedGraph` the mark matrix follows the convention
``marks[u, v] == mark at v on the edge u *-* v`` and ``0`` means no edge.
The edge glyphs map to ``(mark_at_u, mark_at_v)`` pairs as::

    u --> v   (TAIL, ARROW)
    u <-> v   (ARROW, ARROW)
    u --o v   (TAIL, CIRCLE)
    u o-o v   (CIRCLE, CIRCLE)
    u o-> v   (CIRCLE, ARROW)
"""

from __future__ import annotations

import heapq
import json
from collections import deque
from dataclasses import dataclass
from enum import IntEnum
from functools import cached_property
from typing import Iterable, Iterator, Sequence

import numpy as np

from .exceptions import CycleDetected, NodeMismatch, UnknownNode


class Mark(IntEnum):
    CIRCLE = 1
    ARROW = 2
    TAIL = 3

    @property
    def label(self) -> str:
        return self.name.lower()


_MARK_FROM_LABEL = {m.label: m for m in Mark}
_DOT_ARROW = {Mark.TAIL: "none", Mark.ARROW: "normal", Mark.CIRCLE: "odot"}


def _default_names(p: int) -> list[str]:
    return [f"X{k}" for k in range(p)]


def _check_names(names, p):
    names = list(names) if names is not None else _default_names(p)
    if len(names) != p:
        raise ValueError(f"expected {p} node names, got {len(names)}")
    if len(set(names)) != p:
        raise ValueError("node names must be unique")
    return [str(n) for n in names]


class _Named:
    node_names: list[str]

    @property
    def n_nodes(self) -> int:
        return len(self.node_names)

    def index(self, node) -> int:
        """Resolve a node name or index to an index."""
        if isinstance(node, (int, np.integer)) and not isinstance(node, bool):
            if 0 <= node < self.n_nodes:
                return int(node)
            raise UnknownNode(node)
        try:
            return self.node_names.index(node)
        except ValueError:
            raise UnknownNode(node) from None

    def _check(self, *nodes):
        for v in nodes:
            if not (0 <= v < self.n_nodes):
                raise UnknownNode(v)


@dataclass(eq=False)
class Dag(_Named):
    """Weighted DAG. ``weights[u, v] != 0`` encodes the edge ``u -> v``.

    ``adjacency`` is kept separately so that an edge may carry a zero weight.
    Acyclicity is not checked at construction; :func:`topological_sort`
    raises :class:`CycleDetected` for cyclic input.
    """

    adjacency: np.ndarray
    weights: np.ndarray | None = None
    node_names: list[str] | None = None

    def __post_init__(self):
        A = np.asarray(self.adjacency, dtype=bool)
        if A.ndim != 2 or A.shape[0] != A.shape[1]:
            raise ValueError("adjacency must be square")
        if np.any(np.diag(A)):
            raise ValueError("self-loops are not allowed")
        if np.any(A & A.T):
            raise ValueError("a pair cannot carry edges in both directions")
        self.adjacency = A
        W = np.where(A, 1.0, 0.0) if self.weights is None else np.asarray(self.weights, float)
        if W.shape != A.shape:
            raise ValueError("weights must match adjacency shape")
        self.weights = np.where(A, W, 0.0)
        self.node_names = _check_names(self.node_names, A.shape[0])

    @classmethod
    def from_edges(cls, p, edges, weights=None, node_names=None) -> "Dag":
        """Build from ``(parent, child)`` pairs; ``weights`` aligns with ``edges``."""
        A = np.zeros((p, p), dtype=bool)
        W = np.zeros((p, p))
        edges = list(edges)
        weights = [1.0] * len(edges) if weights is None else list(weights)
        for (u, v), w in zip(edges, weights):
            if not (0 <= u < p and 0 <= v < p):
                raise UnknownNode((u, v))
            A[u, v] = True
            W[u, v] = w
        return cls(A, W, node_names)

    @property
    def edges(self) -> list[tuple[int, int]]:
        return [(int(u), int(v)) for u, v in zip(*np.nonzero(self.adjacency))]

    @property
    def n_edges(self) -> int:
        return int(self.adjacency.sum())

    @cached_property
    def parents(self) -> list[list[int]]:
        return [np.flatnonzero(self.adjacency[:, v]).tolist() for v in range(self.n_nodes)]

    @cached_property
    def children(self) -> list[list[int]]:
        return [np.flatnonzero(self.adjacency[u]).tolist() for u in range(self.n_nodes)]

    def skeleton(self) -> "Skeleton":
        return Skeleton(self.adjacency | self.adjacency.T, list(self.node_names))

    def to_mixed(self) -> "MixedGraph":
        M = np.zeros(self.adjacency.shape, dtype=np.int8)
        M[self.adjacency] = Mark.ARROW
        M[self.adjacency.T] = Mark.TAIL
        return MixedGraph(M, list(self.node_names))


@dataclass(eq=False)
class Skeleton(_Named):
    adjacency: np.ndarray
    node_names: list[str] | None = None

    def __post_init__(self):
        A = np.asarray(self.adjacency, dtype=bool).copy()
        if A.ndim != 2 or A.shape[0] != A.shape[1]:
            raise ValueError("adjacency must be square")
        if not np.array_equal(A, A.T):
            raise ValueError("skeleton adjacency must be symmetric")
        if np.any(np.diag(A)):
            raise ValueError("self-loops are not allowed")
        self.adjacency = A
        self.node_names = _check_names(self.node_names, A.shape[0])

    @classmethod
    def from_edges(cls, p, edges, node_names=None) -> "Skeleton":
        A = np.zeros((p, p), dtype=bool)
        for u, v in edges:
            A[u, v] = A[v, u] = True
        return cls(A, node_names)

    @classmethod
    def complete(cls, p, node_names=None) -> "Skeleton":
        return cls(~np.eye(p, dtype=bool), node_names)

    @property
    def edges(self) -> list[tuple[int, int]]:
        iu, ju = np.nonzero(np.triu(self.adjacency, 1))
        return list(zip(iu.tolist(), ju.tolist()))

    @property
    def n_edges(self) -> int:
        return int(np.triu(self.adjacency, 1).sum())

    def neighbors(self, v) -> list[int]:
        return np.flatnonzero(self.adjacency[v]).tolist()

    def skeleton(self) -> "Skeleton":
        return self


@dataclass(eq=False)
class MixedGraph(_Named):
    """Graph with endpoint marks; see the module docstring for the encoding."""

    marks: np.ndarray
    node_names: list[str] | None = None

    def __post_init__(self):
        M = np.asarray(self.marks, dtype=np.int8).copy()
        if M.ndim != 2 or M.shape[0] != M.shape[1]:
            raise ValueError("mark matrix must be square")
        if np.any(np.diag(M)):
            raise ValueError("self-loops are not allowed")
        if not np.all(np.isin(M, (0, 1, 2, 3))):
            raise ValueError("marks must be TAIL, ARROW or CIRCLE")
        if not np.array_equal(M != 0, (M != 0).T):
            raise ValueError("every edge needs a mark at both endpoints")
        self.marks = M
        self.node_names = _check_names(self.node_names, M.shape[0])

    @classmethod
    def from_edges(cls, p, edges, node_names=None) -> "MixedGraph":
        """``edges`` holds ``(u, v, mark_at_u, mark_at_v)`` tuples."""
        M = np.zeros((p, p), dtype=np.int8)
        for u, v, mu, mv in edges:
            M[v, u] = Mark(mu)
            M[u, v] = Mark(mv)
        return cls(M, node_names)

    @classmethod
    def from_skeleton(cls, sk: Skeleton, mark: Mark = Mark.CIRCLE) -> "MixedGraph":
        return cls(np.where(sk.adjacency, int(mark), 0), list(sk.node_names))

    def is_adjacent(self, u, v) -> bool:
        return bool(self.marks[u, v])

    def mark(self, u, v) -> Mark | None:
        """Mark at ``v`` on the edge ``u *-* v`` (``None`` without an edge)."""
        m = self.marks[u, v]
        return Mark(m) if m else None

    def edge(self, u, v) -> tuple[Mark, Mark] | None:
        """``(mark_at_u, mark_at_v)`` or ``None``."""
        if not self.marks[u, v]:
            return None
        return Mark(self.marks[v, u]), Mark(self.marks[u, v])

    def neighbors(self, v) -> list[int]:
        return np.flatnonzero(self.marks[v]).tolist()

    def iter_edges(self) -> Iterator[tuple[int, int, Mark, Mark]]:
        iu, ju = np.nonzero(np.triu(self.marks, 1))
        for u, v in zip(iu.tolist(), ju.tolist()):
            yield u, v, Mark(self.marks[v, u]), Mark(self.marks[u, v])

    @property
    def n_edges(self) -> int:
        return int(np.count_nonzero(np.triu(self.marks, 1)))

    def skeleton(self) -> Skeleton:
        return Skeleton(self.marks != 0, list(self.node_names))

    def copy(self) -> "MixedGraph":
        return MixedGraph(self.marks, list(self.node_names))

    def __eq__(self, other):
        if not isinstance(other, MixedGraph):
            return NotImplemented
        return self.node_names == other.node_names and np.array_equal(self.marks, other.marks)

    __hash__ = None


# ---------------------------------------------------------------------------
# Structural algorithms
# ---------------------------------------------------------------------------


def topological_sort(g: Dag) -> list[int]:
    """Kahn's algorithm; ties go to the smallest index."""
    indeg = g.adjacency.sum(axis=0).astype(int).tolist()
    heap = [v for v in range(g.n_nodes) if indeg[v] == 0]
    heapq.heapify(heap)
    order = []
    while heap:
        u = heapq.heappop(heap)
        order.append(u)
        for c in g.children[u]:
            indeg[c] -= 1
            if indeg[c] == 0:
                heapq.heappush(heap, c)
    if len(order) != g.n_nodes:
        raise CycleDetected("graph contains a directed cycle")
    return order


def _reach(start: Iterable[int], step: Sequence[Sequence[int]]) -> set[int]:
    seen: set[int] = set()
    stack = list(start)
    while stack:
        u = stack.pop()
        for w in step[u]:
            if w not in seen:
                seen.add(w)
                stack.append(w)
    return seen


def ancestors(g: Dag, v) -> frozenset[int]:
    """Nodes with a directed path into ``v`` (``v`` excluded)."""
    v = g.index(v)
    return frozenset(_reach([v], g.parents) - {v})


def descendants(g: Dag, v) -> frozenset[int]:
    v = g.index(v)
    return frozenset(_reach([v], g.children) - {v})


def d_separated(g: Dag, i, j, z: Iterable = ()) -> bool:
    """True iff every path between ``i`` and ``j`` is blocked by ``z``.

    Reachability ("Bayes-ball") search in O(p + |E|): a trail passes a
    non-collider only outside ``z`` and a collider only when the collider
    or one of its descendants is in ``z``.
    """
    i, j = g.index(i), g.index(j)
    z = {g.index(k) for k in z}
    if i == j:
        raise ValueError("i and j must differ")
    if i in z or j in z:
        raise ValueError("i and j must not be in the conditioning set")
    # colliders in this set are open
    opened = z | _reach(z, g.parents)
    parents, children = g.parents, g.children
    # direction 0: arrived from a child (moving up); 1: from a parent (moving down)
    seen = set()
    queue = deque([(i, 0)])
    while queue:
        v, d = queue.popleft()
        if (v, d) in seen:
            continue
        seen.add((v, d))
        if v == j:
            return False
        if d == 0:
            if v in z:
                continue
            for u in parents[v]:
                queue.append((u, 0))
            for c in children[v]:
                queue.append((c, 1))
        else:
            if v not in z:
                for c in children[v]:
                    queue.append((c, 1))
            if v in opened:
                for u in parents[v]:
                    queue.append((u, 0))
    return True


def possible_d_sep(g: MixedGraph, x) -> frozenset[int]:
    """Possible-D-SEP set of ``x``.

    All nodes reachable from ``x`` along a path whose every interior vertex
    is a collider on the path (arrowheads from both sides) or forms a
    triangle with its two path neighbours. Breadth-first search over
    (previous, current) vertex pairs, since the test at a vertex depends on
    the edge the path arrived through.
    """
    x = g.index(x)
    M = g.marks
    adj = [np.flatnonzero(M[v]).tolist() for v in range(g.n_nodes)]
    result = set(adj[x])
    seen = {(x, b) for b in adj[x]}
    queue = deque(seen)
    while queue:
        a, b = queue.popleft()
        for c in adj[b]:
            if c == a or (b, c) in seen:
                continue
            if (M[a, b] == Mark.ARROW and M[c, b] == Mark.ARROW) or M[a, c]:
                seen.add((b, c))
                result.add(c)
                queue.append((b, c))
    result.discard(x)
    return frozenset(result)


# ---------------------------------------------------------------------------
# Serialization
# ---------------------------------------------------------------------------


def to_json_dict(g: Dag | Skeleton | MixedGraph) -> dict:
    names = g.node_names
    edges = []
    if isinstance(g, Dag):
        for u, v in g.edges:
            edges.append({"u": names[u], "v": names[v], "mark_at_u": "tail",
                          "mark_at_v": "arrow", "weight": float(g.weights[u, v])})
    elif isinstance(g, Skeleton):
        for u, v in g.edges:
            edges.append({"u": names[u], "v": names[v], "mark_at_u": "tail", "mark_at_v": "tail"})
    else:
        for u, v, mu, mv in g.iter_edges():
            edges.append({"u": names[u], "v": names[v], "mark_at_u": mu.label, "mark_at_v": mv.label})
    return {"nodes": list(names), "edges": edges}


def to_json(g, path=None, indent=2) -> str:
    text = json.dumps(to_json_dict(g), indent=indent) + "\n"
    if path is not None:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
    return text


def from_json_dict(data: dict, as_dag: bool = False) -> Dag | MixedGraph:
    """Parse the graph JSON schema.

    With ``as_dag=True`` every edge must be ``tail -> arrow`` and the optional
    ``weight`` field is honoured.
    """
    names = [str(n) for n in data["nodes"]]
    pos = {n: k for k, n in enumerate(names)}
    p = len(names)
    try:
        triples = [(pos[e["u"]], pos[e["v"]], e) for e in data["edges"]]
    except KeyError as err:
        raise UnknownNode(err.args[0]) from None
    if as_dag:
        edges, weights = [], []
        for u, v, e in triples:
            if (e["mark_at_u"], e["mark_at_v"]) != ("tail", "arrow"):
                raise ValueError(f"edge {e['u']}-{e['v']} is not directed")
            edges.append((u, v))
            weights.append(float(e.get("weight", 1.0)))
        return Dag.from_edges(p, edges, weights, names)
    return MixedGraph.from_edges(
        p,
        [(u, v, _MARK_FROM_LABEL[e["mark_at_u"]], _MARK_FROM_LABEL[e["mark_at_v"]]) for u, v, e in triples],
        names,
    )


def from_json(path, as_dag: bool = False):
    with open(path, encoding="utf-8") as fh:
        return from_json_dict(json.load(fh), as_dag=as_dag)


def to_dot(g: MixedGraph | Dag) -> str:
    if isinstance(g, Dag):
        g = g.to_mixed()
    lines = ["digraph G {"]
    for name in g.node_names:
        lines.append(f'  "{name}";')
    for u, v, mu, mv in g.iter_edges():
        lines.append(
            f'  "{g.node_names[u]}" -> "{g.node_names[v]}" '
            f"[dir=both, arrowtail={_DOT_ARROW[mu]}, arrowhead={_DOT_ARROW[mv]}];"
        )
    lines.append("}")
    return "\n".join(lines) + "\n"


def check_same_nodes(a, b):
    if list(a.node_names) != list(b.node_names):
        raise NodeMismatch("graphs are defined over different node sets")
