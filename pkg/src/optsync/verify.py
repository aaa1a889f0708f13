"""Brute-force oracles for the spread bound, the root-spread inequality and Algorithm 1.

Exhaustive enumeration works on labeled graphs: an ``m``-arc graph on ``n``
vertices is an ``m``-subset of the ``n(n-1)`` ordered pairs ``(i, j)``,
``i != j``, taken in lexicographic order. Subsets are visited in the
lexicographic order of their sorted pair indices (``itertools.combinations``
order) and may be split into contiguous rank ranges for parallel workers.

Per-chunk results merge with min / sum / and, so reports do not depend on
chunking or on the worker count.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, islice
from typing import Iterator

import numpy as np

from . import construct
from .digraph import DiGraph, almost_regular_sequence, induced_subgraph, in_degree_sequence
from .errors import InstanceTooLarge, NOutOfRange
from .polynomial import IntPolynomial
from .rng import SplitMix64
from .spectral import (
    batch_char_poly,
    char_poly_exact,
    laplacian,
    sigma_squared,
    spectrum_from_polynomial,
    spread_parameters,
    theorem2_report,
)

DEFAULT_TOL = 1e-9
MAX_CHUNK = 200_000
LONG_RUN_LIMIT = 10**7


def ordered_pairs(n: int) -> list[tuple[int, int]]:
    return [(i, j) for i in range(1, n + 1) for j in range(1, n + 1) if i != j]


def count_digraphs(n: int, m: int) -> int:
    return math.comb(n * (n - 1), m)


def chunk_bounds(total: int, k: int) -> list[tuple[int, int]]:
    """Split ``range(total)`` into ``k`` contiguous, nearly equal pieces."""
    k = max(1, k)
    base, extra = divmod(total, k)
    bounds, start = [], 0
    for c in range(k):
        stop = start + base + (1 if c < extra else 0)
        bounds.append((start, stop))
        start = stop
    return bounds


def _check_enumerable(n: int, m: int) -> None:
    if not 2 <= n <= 6:
        raise NOutOfRange(f"digraph enumeration supports 2 <= n <= 6, got n={n}")
    if not 0 <= m <= n * (n - 1):
        raise NOutOfRange(f"m must lie in 0..{n * (n - 1)}")


def combination_block(n: int, m: int, start: int, stop: int) -> np.ndarray:
    """Pair-index subsets with ranks in ``[start, stop)``, shape ``(stop - start, m)``."""
    N = n * (n - 1)
    it = islice(combinations(range(N), m), start, stop)
    flat = np.fromiter((x for combo in it for x in combo), dtype=np.int64)
    return flat.reshape(-1, m) if m else np.zeros((max(0, min(stop, 1) - start), 0), dtype=np.int64)


def enumerate_digraphs(n: int, m: int, chunk: int = 0, chunks: int = 1) -> Iterator[DiGraph]:
    """Every ``m``-arc simple digraph on ``n`` labeled vertices (or one chunk of them)."""
    _check_enumerable(n, m)
    pairs = ordered_pairs(n)
    start, stop = chunk_bounds(count_digraphs(n, m), chunks)[chunk]
    for combo in islice(combinations(range(len(pairs)), m), start, stop):
        yield DiGraph(n, tuple(pairs[k] for k in combo))


def laplacian_batch(n: int, combos: np.ndarray) -> np.ndarray:
    pairs = np.array(ordered_pairs(n), dtype=np.int64) - 1
    batch = combos.shape[0]
    L = np.zeros((batch, n, n), dtype=np.int64)
    if combos.size:
        b = np.repeat(np.arange(batch), combos.shape[1])
        flat = combos.ravel()
        L[b, pairs[flat, 1], pairs[flat, 0]] = -1
    idx = np.arange(n)
    L[:, idx, idx] = -L.sum(axis=2)
    return L


def rooted_batch(L: np.ndarray) -> np.ndarray:
    """Whether each graph (given by its Laplacian) has a root, via boolean transitive closure."""
    batch, n, _ = L.shape
    # reach[b, i, j]: j reachable from i; arc (i, j) sits at L[j, i]
    reach = (np.swapaxes(L, 1, 2) < 0).astype(np.int64)
    reach[:, np.arange(n), np.arange(n)] = 1
    steps = max(1, math.ceil(math.log2(max(n, 2))))
    for _ in range(steps):
        reach = (np.matmul(reach, reach) > 0).astype(np.int64)
    return reach.all(axis=2).any(axis=1)


def _unique_polys(polys: np.ndarray):
    uniq, inverse = np.unique(polys, axis=0, return_inverse=True)
    return uniq, inverse.reshape(-1)


_SIGMA_CACHE: dict[tuple[int, ...], float] = {}
_CONNECTIVITY_CACHE: dict[tuple[int, ...], float] = {}


def sigma_squared_of_poly(coeffs: tuple[int, ...]) -> float:
    val = _SIGMA_CACHE.get(coeffs)
    if val is None:
        val = sigma_squared(spectrum_from_polynomial(IntPolynomial(coeffs)))
        _SIGMA_CACHE[coeffs] = val
    return val


def connectivity_of_poly(coeffs: tuple[int, ...]) -> float:
    """Second smallest real part among the roots of a characteristic polynomial."""
    val = _CONNECTIVITY_CACHE.get(coeffs)
    if val is None:
        spec = spectrum_from_polynomial(IntPolynomial(coeffs))
        val = sorted(z.real for z in spec.values)[1]
        _CONNECTIVITY_CACHE[coeffs] = val
    return val


def _sigma_eig_batch(L: np.ndarray) -> np.ndarray:
    """Spread from the dense eigensolver, used only as a cross-check."""
    vals = np.linalg.eigvals(L.astype(float))
    k0 = np.argmin(np.abs(vals), axis=1)
    mask = np.ones(vals.shape, dtype=bool)
    mask[np.arange(len(vals)), k0] = False
    rest = vals[mask].reshape(len(vals), -1)
    mean = rest.mean(axis=1, keepdims=True).real
    return (np.abs(rest - mean) ** 2).mean(axis=1)


# ---------------------------------------------------------------------------
# spread bound by exhaustive enumeration


@dataclass
class _ChunkResult:
    count: int
    min_sigma: float
    window: np.ndarray
    window_certified: np.ndarray
    certified: int
    min_uncertified: float
    eig_deviation: float


def _conjecture_chunk(args) -> _ChunkResult:
    n, m, start, stop, tol, cross_check = args
    combos = combination_block(n, m, start, stop)
    L = laplacian_batch(n, combos)
    polys = batch_char_poly(L)
    target = np.array(spread_parameters(n, m).polynomial().coeffs, dtype=np.int64)
    certified = np.all(polys == target, axis=1)
    uniq, inverse = _unique_polys(polys)
    sig_u = np.array([sigma_squared_of_poly(tuple(int(c) for c in row)) for row in uniq])
    sig = sig_u[inverse]
    if len(sig) == 0:
        return _ChunkResult(0, math.inf, np.empty(0), np.empty(0, bool), 0, math.inf, 0.0)
    cmin = float(sig.min())
    sel = sig <= cmin + tol
    unc = sig[~certified]
    dev = 0.0
    if cross_check and n > 1:
        dev = float(np.max(np.abs(_sigma_eig_batch(L) - sig)))
    return _ChunkResult(
        count=len(sig),
        min_sigma=cmin,
        window=sig[sel],
        window_certified=certified[sel],
        certified=int(certified.sum()),
        min_uncertified=float(unc.min()) if len(unc) else math.inf,
        eig_deviation=dev,
    )


@dataclass(frozen=True)
class ConjectureReport:
    n: int
    m: int
    graphs_checked: int
    min_sigma_sq: float
    sigma_min_sq: Fraction
    minimizer_count: int
    all_minimizers_optimal: bool
    any_nonoptimal_at_min: bool
    certified_count: int
    certified_above_min: int
    gap: float  # smallest spread among non-certified graphs minus the bound; inf if none
    eig_max_deviation: float
    tol: float

    @property
    def min_matches_bound(self) -> bool:
        return abs(self.min_sigma_sq - float(self.sigma_min_sq)) <= self.tol

    @property
    def passed(self) -> bool:
        return (
            self.min_matches_bound
            and self.all_minimizers_optimal
            and self.certified_above_min == 0
            and self.minimizer_count > 0
        )

    def csv_row(self) -> str:
        return (
            f"{self.n},{self.m},{self.graphs_checked},{self.min_sigma_sq:.17g},"
            f"{float(self.sigma_min_sq):.17g},{self.minimizer_count},{str(self.all_minimizers_optimal).lower()}"
        )


CONJECTURE_CSV_HEADER = "n,m,graphs_checked,min_sigma_sq,sigma_min_sq,minimizer_count,all_minimizers_optimal"


def conjecture_feasible(n: int, m: int, long_run: bool = False) -> bool:
    if not 2 <= n <= 6 or not 0 <= m <= n * (n - 1):
        return False
    if n <= 5:
        return True
    return long_run and (m <= 8 or m >= 22)


def verify_conjecture(
    n: int,
    m: int,
    tol: float = DEFAULT_TOL,
    jobs: int = 1,
    chunks: int | None = None,
    long_run: bool = False,
    cross_check: bool = True,
) -> ConjectureReport:
    """Exhaustively minimize the spread over all ``m``-arc digraphs on ``n`` vertices.

    Both directions of the optimality characterization are checked: every
    graph within ``tol`` of the minimum must pass the exact spectrum
    certificate, and every certified graph must sit at the minimum.
    """
    if not conjecture_feasible(n, m, long_run):
        raise InstanceTooLarge(
            f"(n={n}, m={m}) is outside the desk-scale range "
            "(2 <= n <= 5, or n = 6 with m <= 8 or m >= 22 under long_run)"
        )
    total = count_digraphs(n, m)
    k = max(chunks or jobs, math.ceil(total / MAX_CHUNK), 1)
    tasks = [(n, m, a, b, tol, cross_check) for a, b in chunk_bounds(total, k)]
    if jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            parts = list(pool.map(_conjecture_chunk, tasks))
    else:
        parts = [_conjecture_chunk(t) for t in tasks]
    return _merge(n, m, tol, parts)


def _merge(n: int, m: int, tol: float, parts: list[_ChunkResult]) -> ConjectureReport:
    gmin = min(p.min_sigma for p in parts)
    window = np.concatenate([p.window for p in parts])
    wcert = np.concatenate([p.window_certified for p in parts])
    at_min = window <= gmin + tol
    minimizers = int(at_min.sum())
    cert_at_min = int((wcert & at_min).sum())
    certified = sum(p.certified for p in parts)
    params = spread_parameters(n, m)
    min_unc = min(p.min_uncertified for p in parts)
    return ConjectureReport(
        n=n,
        m=m,
        graphs_checked=sum(p.count for p in parts),
        min_sigma_sq=gmin,
        sigma_min_sq=params.sigma_min_sq,
        minimizer_count=minimizers,
        all_minimizers_optimal=cert_at_min == minimizers,
        any_nonoptimal_at_min=cert_at_min != minimizers,
        certified_count=certified,
        certified_above_min=certified - cert_at_min,
        gap=min_unc - float(params.sigma_min_sq),
        eig_max_deviation=max(p.eig_deviation for p in parts),
        tol=tol,
    )


# ---------------------------------------------------------------------------
# sweeps


@dataclass(frozen=True)
class Failure:
    n: int | None
    m: int | None
    case: str
    description: str

    def __str__(self):
        return f"n={self.n} m={self.m} case={self.case}: {self.description}"


@dataclass
class SweepReport:
    name: str
    cases_run: int = 0
    failures: list[Failure] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures

    def csv_row(self) -> str:
        return f"{self.name},{self.cases_run},{len(self.failures)}"


SWEEP_CSV_HEADER = "check,cases_run,failures"


def random_monic(rng: SplitMix64, degree_max: int, coeff_bound: int) -> IntPolynomial:
    k = rng.integer(1, degree_max)
    return IntPolynomial([rng.integer(-coeff_bound, coeff_bound) for _ in range(k)] + [1])


def equality_cases(a_range: range, degree_max: int) -> Iterator[tuple[int, int, IntPolynomial]]:
    """Polynomials whose roots are ``j`` copies of ``a + 1`` and ``k - j`` copies of ``a``."""
    for a in a_range:
        for k in range(1, degree_max + 1):
            for j in range(k + 1):
                yield a, k, IntPolynomial.from_roots([a] * (k - j) + [a + 1] * j)


def verify_theorem2_random(
    degree_max: int = 8,
    coeff_bound: int = 5,
    trials: int = 100_000,
    seed: int = 0,
    equality_a: range = range(-2, 3),
    equality_degree: int = 6,
) -> SweepReport:
    if degree_max > 10 or coeff_bound > 10 or degree_max < 1 or coeff_bound < 0:
        raise ValueError("need 1 <= degree_max <= 10 and 0 <= coeff_bound <= 10")
    report = SweepReport("theorem2")
    rng = SplitMix64(seed)
    for t in range(trials):
        p = random_monic(rng, degree_max, coeff_bound)
        r = theorem2_report(p)
        report.cases_run += 1
        if not r.holds:
            report.failures.append(Failure(r.k, None, f"trial:{t}", f"{p}: lhs={r.lhs!r} < rhs={r.rhs!r}"))
        elif r.equality != r.roots_integral_adjacent:
            report.failures.append(
                Failure(r.k, None, f"trial:{t}", f"{p}: equality={r.equality} but adjacent={r.roots_integral_adjacent}")
            )
    for a, k, p in equality_cases(equality_a, equality_degree):
        r = theorem2_report(p)
        report.cases_run += 1
        if not (r.equality and r.roots_integral_adjacent):
            report.failures.append(Failure(k, None, f"equality:a={a}", f"{p}: lhs={r.lhs!r} rhs={r.rhs!r}"))
    return report


def theorem3_seeds(n: int, seeds_per_n: int, rng: SplitMix64) -> list[construct.TreeSpec]:
    """Star, path and ``seeds_per_n`` random seeds for ``n``, dropping duplicate trees."""
    specs = [construct.TreeSpec("star", n), construct.TreeSpec("path", n)]
    specs += [construct.TreeSpec("random", n, seed=rng.next_u64()) for _ in range(seeds_per_n)]
    seen, out = set(), []
    for s in specs:
        arcs = construct.make_tree(s).arcs
        if arcs not in seen:
            seen.add(arcs)
            out.append(s)
    return out


def _theorem3_task(spec: construct.TreeSpec) -> tuple[int, list[Failure]]:
    n = spec.n
    failures, cases = [], 0
    for m, g in construct.build_sequence(n, spec):
        cases += 1
        got = char_poly_exact(laplacian(g))
        want = spread_parameters(n, m).polynomial()
        if got != want:
            failures.append(Failure(n, m, spec.label(), f"char poly {got} != {want}"))
    return cases, failures


def verify_theorem3(n_max: int = 20, seeds_per_n: int = 3, rng_seed: int = 0, jobs: int = 1, n_min: int = 2) -> SweepReport:
    """Exact check of the Laplacian characteristic polynomial of every ``G(n, m)``."""
    if n_max > 25:
        raise InstanceTooLarge("theorem3 sweeps support n_max <= 25")
    rng = SplitMix64(rng_seed)
    tasks = []
    for n in range(2, n_max + 1):
        specs = theorem3_seeds(n, seeds_per_n, rng)
        if n >= n_min:
            tasks.extend(specs)
    report = SweepReport("theorem3")
    if jobs > 1:
        # largest first for load balance; results are re-ordered below
        order = sorted(range(len(tasks)), key=lambda k: -tasks[k].n)
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            done = dict(zip(order, pool.map(_theorem3_task, [tasks[k] for k in order])))
        results = [done[k] for k in range(len(tasks))]
    else:
        results = [_theorem3_task(t) for t in tasks]
    for cases, failures in results:
        report.cases_run += cases
        report.failures.extend(failures)
    return report


# ---------------------------------------------------------------------------
# structural lemmas about Algorithm 1 graphs


def _sequences_for_all_seeds(n: int) -> list[tuple[int, dict[int, DiGraph]]]:
    return [(rank, dict(construct.build_sequence(n, tree))) for rank, tree in enumerate(construct.enumerate_trees(n))]


def verify_structure(n_max_degree: int = 7, n_max_neighbors: int = 6, n_max_star: int = 8,
                     n_max_unique: int = 6, n_max_absorb: int = 5) -> SweepReport:
    """Exhaustive checks of the structural lemmas over every seed tree."""
    report = SweepReport("structure")
    fail = report.failures

    for n in range(2, n_max_degree + 1):
        for rank, seq in _sequences_for_all_seeds(n):
            tree = seq[n - 1]
            for m, g in seq.items():
                report.cases_run += 1
                deg = g.in_degrees()
                if in_degree_sequence(g) != almost_regular_sequence(n, m) or deg != sorted(deg):
                    fail.append(Failure(n, m, f"index:{rank}", f"in-degrees {deg}"))
                if m <= (n - 1) ** 2 and any(g.has_arc(n, k) for k in range(1, n)):
                    fail.append(Failure(n, m, f"index:{rank}", "vertex n has an outgoing arc"))
                for k in range(1, n):
                    if g.has_arc(n, k) and deg[k - 1] != n - 1:
                        fail.append(Failure(n, m, f"index:{rank}", f"arc (n,{k}) but d_{k}={deg[k - 1]}"))
                if n <= n_max_neighbors:
                    for i in range(1, n + 1):
                        if g.in_neighbors(i) != construct.expected_in_neighbors(tree, i, deg[i - 1]):
                            fail.append(Failure(n, m, f"index:{rank}", f"in-neighbors of {i}"))
                if n >= 3 and m <= (n - 1) ** 2:
                    sub = induced_subgraph(g, range(1, n))
                    subtree = induced_subgraph(tree, range(1, n))
                    want, _ = construct.build(n - 1, m - deg[n - 1], subtree)
                    if sub != want:
                        fail.append(Failure(n, m, f"index:{rank}", "induced subgraph differs from G(n-1, m-d_n)"))

    for n in range(2, n_max_star + 1):
        for m, g in construct.build_sequence(n, construct.TreeSpec("star", n)):
            report.cases_run += 1
            for i, d in enumerate(g.in_degrees(), start=1):
                want = set([k for k in range(1, n + 1) if k != i][:d])
                if g.in_neighbors(i) != want:
                    fail.append(Failure(n, m, "star", f"in-neighbors of {i}"))

    for n in range(2, n_max_unique + 1):
        seqs = _sequences_for_all_seeds(n)
        for m in range((n - 1) ** 2, n * (n - 1) + 1):
            if m < n - 1:
                continue
            report.cases_run += 1
            closed = construct.large_m_complement_form(n, m)
            bad = [rank for rank, seq in seqs if seq[m] != closed]
            if bad:
                fail.append(Failure(n, m, f"index:{bad[0]}", "differs from the complement closed form"))

    for n in range(2, n_max_absorb + 1):
        seqs = _sequences_for_all_seeds(n)
        for x in range(len(seqs)):
            for y in range(x + 1, len(seqs)):
                report.cases_run += 1
                sx, sy = seqs[x][1], seqs[y][1]
                merged = False
                for m in range(n - 1, n * (n - 1) + 1):
                    same = sx[m] == sy[m]
                    if merged and not same:
                        fail.append(Failure(n, m, f"index:{x}/index:{y}", "sequences diverged after coinciding"))
                        break
                    merged = merged or same
    return report
