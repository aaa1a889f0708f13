"""Inductive construction of almost regular optimal digraphs (Algorithm 1).

Starting from a directed tree on ``1..n`` whose arcs all point from a
smaller to a larger label, arcs are added one at a time. The arc added to
reach ``m`` arcs has head ``v = n - ((m - 1) mod n)`` and tail ``u``, the
smallest label other than ``v`` that is not yet an in-neighbor of ``v``.

Seed trees correspond one-to-one with parent lists ``(p_2, ..., p_n)``,
``1 <= p_k < k``, so there are ``(n - 1)!`` of them. Their canonical order
is the lexicographic order of the parent list.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from itertools import product
from typing import Iterator, Sequence

from .digraph import DiGraph, complement, make_digraph
from .errors import (
    DegreeInfeasible,
    InternalUNotFound,
    InvalidTreeArcs,
    MOutOfRange,
    NOutOfRange,
    RankOutOfRange,
    TraceMismatch,
)
from .rng import SplitMix64

TREE_KINDS = ("star", "path", "random", "explicit", "index")
MAX_ENUMERATION_N = 9


@dataclass(frozen=True)
class TreeSpec:
    kind: str
    n: int
    seed: int = 0
    arcs: tuple[tuple[int, int], ...] = ()
    rank: int = 0

    def label(self) -> str:
        if self.kind == "random":
            return f"random:{self.seed}"
        if self.kind == "index":
            return f"index:{self.rank}"
        if self.kind == "explicit":
            return "explicit"
        return self.kind


@dataclass(frozen=True)
class ConstructionTrace:
    n: int
    tree: tuple[tuple[int, int], ...]
    steps: tuple[tuple[int, int, int], ...] = field(default=())

    @property
    def m(self) -> int:
        return self.n - 1 + len(self.steps)


def parse_tree_flag(flag: str, n: int) -> TreeSpec:
    """Parse ``star``, ``path``, ``random:SEED``, ``index:RANK`` or ``explicit:1-2,1-3``."""
    kind, _, arg = flag.partition(":")
    if kind in ("star", "path") and not arg:
        return TreeSpec(kind, n)
    try:
        if kind == "random":
            return TreeSpec("random", n, seed=int(arg, 0))
        if kind == "index":
            return TreeSpec("index", n, rank=int(arg))
        if kind == "explicit":
            arcs = tuple(tuple(int(x) for x in pair.split("-")) for pair in arg.split(",") if pair)
            return TreeSpec("explicit", n, arcs=arcs)
    except ValueError:
        pass
    raise ValueError(f"bad tree flag {flag!r}; expected star, path, random:SEED, index:RANK or explicit:1-2,...")


def tree_from_parents(parents: Sequence[int]) -> DiGraph:
    """Tree with arcs ``(parents[k-2], k)`` for ``k = 2..n``."""
    n = len(parents) + 1
    return make_digraph(n, [(p, k) for k, p in enumerate(parents, start=2)])


def tree_parents(tree: DiGraph) -> list[int]:
    """Inverse of :func:`tree_from_parents`; validates the seed-tree shape."""
    n = tree.n
    if n < 2:
        raise InvalidTreeArcs("seed tree needs at least 2 vertices")
    if tree.weighted or tree.m != n - 1:
        raise InvalidTreeArcs(f"seed tree must have exactly {n - 1} unweighted arcs")
    parent = [0] * (n + 1)
    for i, j in tree.arcs:
        if i >= j:
            raise InvalidTreeArcs(f"arc ({i}, {j}) does not go from a smaller to a larger label")
        if parent[j]:
            raise InvalidTreeArcs(f"vertex {j} has two parents")
        parent[j] = i
    return parent[2:]


def _unrank_parents(n: int, rank: int) -> list[int]:
    total = math.factorial(n - 1)
    if not 0 <= rank < total:
        raise RankOutOfRange(f"rank {rank} outside 0..{total - 1}")
    parents = []
    # mixed radix, last vertex least significant
    for k in range(n, 1, -1):
        rank, digit = divmod(rank, k - 1)
        parents.append(digit + 1)
    return parents[::-1]


def rank_of_tree(tree: DiGraph) -> int:
    rank = 0
    for k, p in enumerate(tree_parents(tree), start=2):
        rank = rank * (k - 1) + (p - 1)
    return rank


def random_parents(n: int, seed: int) -> list[int]:
    rng = SplitMix64(seed)
    return [1 + rng.below(k - 1) for k in range(2, n + 1)]


def make_tree(spec: TreeSpec) -> DiGraph:
    n = spec.n
    if n < 2:
        raise NOutOfRange("seed trees need n >= 2")
    if spec.kind == "star":
        return tree_from_parents([1] * (n - 1))
    if spec.kind == "path":
        return tree_from_parents(list(range(1, n)))
    if spec.kind == "random":
        return tree_from_parents(random_parents(n, spec.seed))
    if spec.kind == "index":
        return tree_from_parents(_unrank_parents(n, spec.rank))
    if spec.kind == "explicit":
        try:
            tree = make_digraph(n, spec.arcs)
        except ValueError as exc:
            raise InvalidTreeArcs(str(exc)) from None
        tree_parents(tree)
        return tree
    raise ValueError(f"unknown tree kind {spec.kind!r}")


def count_trees(n: int) -> int:
    return math.factorial(n - 1)


def enumerate_trees(n: int) -> Iterator[DiGraph]:
    """All ``(n - 1)!`` seed trees in lexicographic parent-list order."""
    if not 2 <= n <= MAX_ENUMERATION_N:
        raise NOutOfRange(f"tree enumeration supports 2 <= n <= {MAX_ENUMERATION_N}")
    for parents in product(*(range(1, k) for k in range(2, n + 1))):
        yield tree_from_parents(parents)


def head_index(n: int, m: int) -> int:
    return n - ((m - 1) % n)


class _Builder:
    """Incremental Algorithm 1 state: one in-neighbor bitmask per vertex."""

    def __init__(self, tree: DiGraph):
        tree_parents(tree)
        self.n = tree.n
        self.tree = tree
        self.in_mask = [0] * (self.n + 1)
        for i, j in tree.arcs:
            self.in_mask[j] |= 1 << i
        self.m = self.n - 1
        self.steps: list[tuple[int, int, int]] = []
        self._full = ((1 << (self.n + 1)) - 1) & ~1  # bits 1..n

    def step(self) -> tuple[int, int, int]:
        m = self.m + 1
        v = head_index(self.n, m)
        free = self._full & ~self.in_mask[v] & ~(1 << v)
        if not free:
            raise InternalUNotFound(f"no tail available for head {v} at m={m}, n={self.n}")
        u = (free & -free).bit_length() - 1
        self.in_mask[v] |= 1 << u
        self.m = m
        self.steps.append((m, v, u))
        return m, v, u

    def graph(self) -> DiGraph:
        arcs = [(u, v) for v in range(1, self.n + 1) for u in range(1, self.n + 1) if self.in_mask[v] >> u & 1]
        return DiGraph(self.n, tuple(sorted(arcs)))


def _check_m(n: int, m: int) -> None:
    if n < 2:
        raise NOutOfRange("construction needs n >= 2")
    if not n - 1 <= m <= n * (n - 1):
        raise MOutOfRange(f"m must satisfy {n - 1} <= m <= {n * (n - 1)}, got {m}")


def _seed(n: int, tree: TreeSpec | DiGraph | None) -> DiGraph:
    if tree is None:
        return make_tree(TreeSpec("star", n))
    if isinstance(tree, TreeSpec):
        if tree.n != n:
            raise InvalidTreeArcs(f"tree spec is for n={tree.n}, not {n}")
        return make_tree(tree)
    if tree.n != n:
        raise InvalidTreeArcs(f"seed tree has {tree.n} vertices, not {n}")
    return tree


def build(n: int, m: int, tree: TreeSpec | DiGraph | None = None) -> tuple[DiGraph, ConstructionTrace]:
    """Run Algorithm 1 from the given seed (default: star) up to ``m`` arcs."""
    _check_m(n, m)
    b = _Builder(_seed(n, tree))
    while b.m < m:
        b.step()
    return b.graph(), ConstructionTrace(n, b.tree.arcs, tuple(b.steps))


def build_sequence(n: int, tree: TreeSpec | DiGraph | None = None) -> Iterator[tuple[int, DiGraph]]:
    """Yield ``(m, G(n, m))`` for every ``m`` from ``n - 1`` to ``n(n - 1)``."""
    _check_m(n, n - 1)
    b = _Builder(_seed(n, tree))
    yield b.m, b.graph()
    while b.m < n * (n - 1):
        b.step()
        yield b.m, b.graph()


def replay_trace(trace: ConstructionTrace) -> DiGraph:
    """Rebuild a graph from a trace, checking every recorded step against Algorithm 1."""
    b = _Builder(make_digraph(trace.n, trace.tree))
    for k, recorded in enumerate(trace.steps):
        actual = b.step()
        if tuple(recorded) != actual:
            raise TraceMismatch(f"step {k}: trace has {tuple(recorded)}, algorithm gives {actual}")
    return b.graph()


def format_trace(trace: ConstructionTrace) -> str:
    lines = [f"{trace.n} {trace.m}", " ".join(f"{i}:{j}" for i, j in trace.tree)]
    lines += [f"{m} {v} {u}" for m, v, u in trace.steps]
    return "\n".join(lines) + "\n"


def parse_trace(text: str) -> ConstructionTrace:
    lines = text.splitlines()
    if len(lines) < 2:
        raise TraceMismatch("trace needs a header line and a seed-arc line")
    try:
        n, m = (int(x) for x in lines[0].split())
        tree = tuple(tuple(int(x) for x in tok.split(":")) for tok in lines[1].split())
        steps = tuple(tuple(int(x) for x in line.split()) for line in lines[2:] if line.strip())
    except ValueError as exc:
        raise TraceMismatch(f"malformed trace: {exc}") from None
    if any(len(a) != 2 for a in tree) or any(len(s) != 3 for s in steps):
        raise TraceMismatch("malformed trace: bad arc or step arity")
    trace = ConstructionTrace(n, tree, steps)
    if trace.m != m:
        raise TraceMismatch(f"header says m={m} but trace reaches m={trace.m}")
    return trace


def expected_in_neighbors(tree: DiGraph, i: int, d: int) -> set[int]:
    """In-neighbors of vertex ``i`` once it has in-degree ``d`` in any ``G(n, m)`` grown from ``tree``."""
    n = tree.n
    if not 1 <= i <= n:
        raise DegreeInfeasible(f"vertex {i} outside 1..{n}")
    if not 0 <= d <= n - 1 or (i >= 2 and d < 1):
        raise DegreeInfeasible(f"in-degree {d} impossible for vertex {i}")
    if i == 1:
        return set(range(2, d + 2))
    parent = tree_parents(tree)[i - 2]
    others = [k for k in range(1, n + 1) if k not in (i, parent)]
    return {parent} | set(others[: d - 1])


def large_m_complement_form(n: int, m: int) -> DiGraph:
    """Closed form of ``G(n, m)`` for ``(n-1)**2 <= m <= n(n-1)``: complement of a star forest."""
    if n < 2 or not (n - 1) ** 2 <= m <= n * (n - 1):
        raise MOutOfRange(f"closed form needs {(n - 1) ** 2} <= m <= {n * (n - 1)}")
    forest = make_digraph(n, [(n, k) for k in range(1, n * (n - 1) - m + 1)])
    return complement(forest)
