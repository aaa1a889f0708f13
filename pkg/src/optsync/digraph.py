"""Labeled simple directed graphs, optionally with nonzero integer arc weights.

Vertices are labeled ``1..n``. Arcs are stored as a sorted tuple of
``(tail, head)`` pairs so every iteration order in the package is
deterministic. Graphs are immutable; all operations return new graphs.
"""

from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .errors import (
    DuplicateArc,
    EmptyKeepSet,
    EndpointOutOfRange,
    GraphError,
    SelfArc,
    WeightedUnsupported,
    ZeroWeight,
)

Arc = tuple[int, int]

MAX_VERTICES = 1 << 16


@dataclass(frozen=True)
class DiGraph:
    n: int
    arcs: tuple[Arc, ...]
    weights: tuple[int, ...] | None = None
    _index: dict = field(default=None, init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        object.__setattr__(self, "_index", {a: k for k, a in enumerate(self.arcs)})

    @property
    def m(self) -> int:
        return len(self.arcs)

    @property
    def weighted(self) -> bool:
        return self.weights is not None

    @property
    def net_weight(self) -> int:
        """Sum of arc weights (the arc count when unweighted)."""
        return sum(self.weights) if self.weights is not None else len(self.arcs)

    def has_arc(self, tail: int, head: int) -> bool:
        return (tail, head) in self._index

    def weight(self, tail: int, head: int) -> int:
        k = self._index.get((tail, head))
        if k is None:
            return 0
        return 1 if self.weights is None else self.weights[k]

    def weighted_arcs(self) -> list[tuple[int, int, int]]:
        ws = self.weights if self.weights is not None else (1,) * len(self.arcs)
        return [(i, j, w) for (i, j), w in zip(self.arcs, ws)]

    def in_degrees(self) -> list[int]:
        """(Weighted) in-degree of each vertex, listed by label."""
        deg = [0] * self.n
        for i, j, w in self.weighted_arcs():
            deg[j - 1] += w
        return deg

    def out_degrees(self) -> list[int]:
        deg = [0] * self.n
        for i, j, w in self.weighted_arcs():
            deg[i - 1] += w
        return deg

    def in_neighbors(self, v: int) -> set[int]:
        return {i for i, j in self.arcs if j == v}

    def out_neighbors(self, v: int) -> set[int]:
        return {j for i, j in self.arcs if i == v}

    def successors(self) -> list[list[int]]:
        """Adjacency lists indexed by label (index 0 unused)."""
        succ: list[list[int]] = [[] for _ in range(self.n + 1)]
        for i, j in self.arcs:
            succ[i].append(j)
        return succ


def make_digraph(n: int, arcs: Iterable[Sequence[int]], weights: Sequence[int] | None = None) -> DiGraph:
    """Validate and build a :class:`DiGraph`.

    Raises
    ------
    SelfArc, DuplicateArc, EndpointOutOfRange, ZeroWeight
        On the corresponding structural violation.
    """
    if not isinstance(n, int) or n < 1:
        raise GraphError(f"vertex count must be a positive integer, got {n!r}")
    if n > MAX_VERTICES:
        raise GraphError(f"at most {MAX_VERTICES} vertices are supported")
    arcs = [(int(a[0]), int(a[1])) for a in arcs]
    if weights is not None:
        weights = [int(w) for w in weights]
        if len(weights) != len(arcs):
            raise GraphError("weights must align with arcs")
    seen: dict[Arc, int] = {}
    for k, (i, j) in enumerate(arcs):
        if not (1 <= i <= n and 1 <= j <= n):
            raise EndpointOutOfRange(f"arc ({i}, {j}) has an endpoint outside 1..{n}")
        if i == j:
            raise SelfArc(i)
        if (i, j) in seen:
            raise DuplicateArc(i, j)
        if weights is not None and weights[k] == 0:
            raise ZeroWeight(f"arc ({i}, {j}) has weight 0")
        seen[(i, j)] = k
    order = sorted(seen)
    ws = tuple(weights[seen[a]] for a in order) if weights is not None else None
    return DiGraph(n, tuple(order), ws)


def empty_graph(n: int) -> DiGraph:
    return make_digraph(n, [])


def complete_graph(n: int) -> DiGraph:
    return make_digraph(n, [(i, j) for i in range(1, n + 1) for j in range(1, n + 1) if i != j])


def complement(g: DiGraph) -> DiGraph:
    if g.weighted:
        raise WeightedUnsupported("complement is defined for unweighted graphs only")
    arcs = [(i, j) for i in range(1, g.n + 1) for j in range(1, g.n + 1) if i != j and not g.has_arc(i, j)]
    return DiGraph(g.n, tuple(arcs))


def transpose(g: DiGraph) -> DiGraph:
    if g.weighted:
        return make_digraph(g.n, [(j, i) for i, j in g.arcs], g.weights)
    return make_digraph(g.n, [(j, i) for i, j in g.arcs])


def induced_subgraph(g: DiGraph, keep: Iterable[int]) -> DiGraph:
    """Subgraph induced by ``keep``, relabeled ``1..len(keep)`` in original order."""
    keep = sorted(set(keep))
    if not keep:
        raise EmptyKeepSet("keep set must be nonempty")
    if keep[0] < 1 or keep[-1] > g.n:
        raise EndpointOutOfRange(f"keep set must lie in 1..{g.n}")
    relabel = {v: k + 1 for k, v in enumerate(keep)}
    arcs, ws = [], []
    for i, j, w in g.weighted_arcs():
        if i in relabel and j in relabel:
            arcs.append((relabel[i], relabel[j]))
            ws.append(w)
    return make_digraph(len(keep), arcs, ws if g.weighted else None)


def reachable_from(g: DiGraph, source: int) -> set[int]:
    succ = g.successors()
    seen = {source}
    queue = deque([source])
    while queue:
        u = queue.popleft()
        for v in succ[u]:
            if v not in seen:
                seen.add(v)
                queue.append(v)
    return seen


def is_rooted(g: DiGraph) -> tuple[bool, set[int]]:
    """Return whether ``g`` has a root, and the set of all roots.

    A root reaches every other vertex along directed paths.
    """
    roots = {r for r in range(1, g.n + 1) if len(reachable_from(g, r)) == g.n}
    return bool(roots), roots


def topological_order(g: DiGraph) -> list[int] | None:
    """Kahn's algorithm; ``None`` when ``g`` has a directed cycle."""
    indeg = [0] * (g.n + 1)
    for _, j in g.arcs:
        indeg[j] += 1
    succ = g.successors()
    ready = deque(v for v in range(1, g.n + 1) if indeg[v] == 0)
    order = []
    while ready:
        u = ready.popleft()
        order.append(u)
        for v in succ[u]:
            indeg[v] -= 1
            if indeg[v] == 0:
                ready.append(v)
    return order if len(order) == g.n else None


def is_acyclic(g: DiGraph) -> bool:
    return topological_order(g) is not None


def in_degree_sequence(g: DiGraph) -> tuple[int, ...]:
    return tuple(sorted(g.in_degrees()))


def almost_regular_sequence(n: int, m: int) -> tuple[int, ...]:
    """The in-degree sequence of an almost regular graph with ``n`` vertices and ``m`` arcs."""
    nu = m // n
    return (nu,) * (n * (nu + 1) - m) + (nu + 1,) * (m - n * nu)


def is_almost_regular(g: DiGraph) -> bool:
    deg = g.in_degrees()
    return max(deg) - min(deg) <= 1


def strongly_connected_components(g: DiGraph) -> list[frozenset[int]]:
    """Tarjan's algorithm, iterative. Components are returned in discovery order."""
    succ = g.successors()
    index = [0] * (g.n + 1)
    low = [0] * (g.n + 1)
    on_stack = [False] * (g.n + 1)
    visited = [False] * (g.n + 1)
    stack: list[int] = []
    comps: list[frozenset[int]] = []
    counter = 1
    for root in range(1, g.n + 1):
        if visited[root]:
            continue
        work = [(root, 0)]
        while work:
            v, pos = work.pop()
            if pos == 0:
                visited[v] = True
                index[v] = low[v] = counter
                counter += 1
                stack.append(v)
                on_stack[v] = True
            recurse = False
            for k in range(pos, len(succ[v])):
                w = succ[v][k]
                if not visited[w]:
                    work.append((v, k + 1))
                    work.append((w, 0))
                    recurse = True
                    break
                if on_stack[w]:
                    low[v] = min(low[v], index[w])
            if recurse:
                continue
            if low[v] == index[v]:
                comp = []
                while True:
                    w = stack.pop()
                    on_stack[w] = False
                    comp.append(w)
                    if w == v:
                        break
                comps.append(frozenset(comp))
            if work:
                parent = work[-1][0]
                low[parent] = min(low[parent], low[v])
    return comps


def source_components(g: DiGraph) -> list[frozenset[int]]:
    """Strongly connected components that no arc enters from outside.

    Under ``x' = -Lx`` these components evolve independently of the rest
    of the graph; ``g`` is rooted iff there is exactly one.
    """
    comps = strongly_connected_components(g)
    owner = {v: k for k, c in enumerate(comps) for v in c}
    entered = {owner[j] for i, j in g.arcs if owner[i] != owner[j]}
    return sorted((c for k, c in enumerate(comps) if k not in entered), key=min)


# ---------------------------------------------------------------------------
# file formats


def format_edge_list(g: DiGraph) -> str:
    lines = [f"{g.n} {g.m}"]
    if g.weighted:
        lines += [f"{i} {j} {w}" for i, j, w in g.weighted_arcs()]
    else:
        lines += [f"{i} {j}" for i, j in g.arcs]
    return "\n".join(lines) + "\n"


def parse_edge_list(text: str) -> DiGraph:
    rows = [line.split() for line in text.splitlines() if line.strip()]
    if not rows or len(rows[0]) != 2:
        raise GraphError("edge list must start with a line 'n m'")
    try:
        n, m = int(rows[0][0]), int(rows[0][1])
        body = [[int(tok) for tok in row] for row in rows[1:]]
    except ValueError as exc:
        raise GraphError(f"non-integer token in edge list: {exc}") from None
    if len(body) != m:
        raise GraphError(f"header declares {m} arcs but {len(body)} follow")
    widths = {len(row) for row in body}
    if not widths <= {2} and not widths <= {3}:
        raise GraphError("arc lines must all be 'tail head' or all 'tail head weight'")
    arcs = [(row[0], row[1]) for row in body]
    weights = [row[2] for row in body] if widths == {3} else None
    return make_digraph(n, arcs, weights)


def to_json(g: DiGraph) -> str:
    obj: dict = {"n": g.n, "arcs": [list(a) for a in g.arcs]}
    if g.weighted:
        obj["weights"] = list(g.weights)
    return json.dumps(obj)


def from_json(text: str) -> DiGraph:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise GraphError(f"invalid JSON: {exc}") from None
    if not isinstance(obj, dict) or "n" not in obj or "arcs" not in obj:
        raise GraphError("JSON graph needs keys 'n' and 'arcs'")
    n, arcs, weights = obj["n"], obj["arcs"], obj.get("weights")
    if not isinstance(n, int) or isinstance(n, bool):
        raise GraphError("'n' must be an integer")
    if not isinstance(arcs, list) or not all(
        isinstance(a, list) and len(a) == 2 and all(isinstance(x, int) and not isinstance(x, bool) for x in a)
        for a in arcs
    ):
        raise GraphError("'arcs' must be a list of [tail, head] integer pairs")
    if weights is not None and (
        not isinstance(weights, list) or not all(isinstance(w, int) and not isinstance(w, bool) for w in weights)
    ):
        raise GraphError("'weights' must be a list of integers")
    return make_digraph(n, arcs, weights)


def parse_graph(text: str) -> DiGraph:
    """Parse either the JSON or the edge-list format, sniffing the first character."""
    if text.lstrip().startswith("{"):
        return from_json(text)
    return parse_edge_list(text)


def to_dot(g: DiGraph, name: str = "G") -> str:
    """Graphviz DOT; an opposite pair of unweighted arcs is drawn as one ``dir=both`` edge."""
    lines = [f"digraph {name} {{"]
    lines += [f"  {v};" for v in range(1, g.n + 1)]
    for i, j, w in g.weighted_arcs():
        label = f' label="{w}"' if g.weighted else ""
        if not g.weighted and g.has_arc(j, i):
            if i < j:
                lines.append(f"  {i} -> {j} [dir=both];")
            continue
        lines.append(f"  {i} -> {j}{' [' + label.strip() + ']' if label else ''};")
    lines.append("}")
    return "\n".join(lines) + "\n"
