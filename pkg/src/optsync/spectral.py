"""Laplacian spectra of directed graphs.

The in-degree Laplacian is ``L = D - A`` with ``A[i, j] = w`` when ``(j, i)``
is an arc of weight ``w``. Optimality is certified exactly: the integer
characteristic polynomial of ``L`` is compared coefficient by coefficient
with ``x (x - kappa)**a (x - kappa - 1)**b``. Floating point enters only
through :func:`spectrum_numeric` and the spread ``sigma_squared``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from . import polynomial as poly
from .digraph import DiGraph, is_acyclic
from .errors import ConvergenceFailure, NoZeroEigenvalue, NotAcyclic, SpectralError
from .polynomial import IntPolynomial

DEFAULT_TOL = 1e-8
ROOT_TOL = 1e-6

IntMatrix = np.ndarray  # object-dtype array of Python ints


def laplacian(g: DiGraph) -> IntMatrix:
    L = np.zeros((g.n, g.n), dtype=object)
    L[:, :] = 0
    for i, j, w in g.weighted_arcs():
        L[j - 1, i - 1] -= w
        L[j - 1, j - 1] += w
    return L


def laplacian_out(g: DiGraph) -> IntMatrix:
    """Out-degree Laplacian ``D_out - A'`` (row ``i`` carries the arcs leaving ``i``)."""
    L = np.zeros((g.n, g.n), dtype=object)
    L[:, :] = 0
    for i, j, w in g.weighted_arcs():
        L[i - 1, j - 1] -= w
        L[i - 1, i - 1] += w
    return L


def as_int_matrix(rows: Sequence[Sequence[int]]) -> IntMatrix:
    M = np.empty((len(rows), len(rows)), dtype=object)
    for i, row in enumerate(rows):
        if len(row) != len(rows):
            raise ValueError("matrix must be square")
        for j, x in enumerate(row):
            M[i, j] = int(x)
    return M


def char_poly_exact(M) -> IntPolynomial:
    """``det(xI - M)`` over the integers by the Faddeev-LeVerrier recurrence.

    Every division in the recurrence is exact for integer ``M``; this is
    asserted rather than assumed.
    """
    A = np.array(M, dtype=object)
    n = A.shape[0]
    if A.ndim != 2 or A.shape[1] != n:
        raise ValueError("matrix must be square")
    coeffs = [1]
    Mk = np.zeros((n, n), dtype=object)
    Mk[:, :] = 0
    for k in range(1, n + 1):
        Mk = A.dot(Mk)
        for i in range(n):
            Mk[i, i] += coeffs[-1]
        trace = sum(A[i, :].dot(Mk[:, i]) for i in range(n)) if n else 0
        c, rem = divmod(-trace, k)
        if rem:
            raise SpectralError("inexact division in Faddeev-LeVerrier; matrix is not integral")
        coeffs.append(c)
    return IntPolynomial(reversed(coeffs))


def _int64_safe(n: int, max_abs: int) -> bool:
    # crude bound on every intermediate: (n * max_abs + 1)**n * 2**n
    return (n * max_abs + 1) ** n * 2**n * n < 2**62


def batch_char_poly(Ls: np.ndarray) -> np.ndarray:
    """Characteristic polynomials of a stack of small integer matrices.

    ``Ls`` has shape ``(batch, n, n)``; the result has shape ``(batch, n + 1)``
    with the constant term first. Runs in int64 and refuses inputs whose
    intermediates could overflow.
    """
    Ls = np.asarray(Ls, dtype=np.int64)
    batch, n, _ = Ls.shape
    max_abs = int(np.abs(Ls).max()) if Ls.size else 0
    if not _int64_safe(n, max_abs):
        raise OverflowError("matrices too large for the int64 batch path; use char_poly_exact")
    out = np.zeros((batch, n + 1), dtype=np.int64)
    out[:, n] = 1
    Mk = np.zeros_like(Ls)
    eye = np.eye(n, dtype=np.int64)
    c_prev = np.ones(batch, dtype=np.int64)
    for k in range(1, n + 1):
        Mk = np.matmul(Ls, Mk) + c_prev[:, None, None] * eye
        trace = np.einsum("bij,bji->b", Ls, Mk)
        if np.any(trace % k):
            raise SpectralError("inexact division in batched Faddeev-LeVerrier")
        c_prev = -trace // k
        out[:, n - k] = c_prev
    return out


@dataclass(frozen=True)
class Spectrum:
    """Multiset of eigenvalues plus the tolerance used to cluster them."""

    values: tuple[complex, ...]
    tolerance: float = DEFAULT_TOL

    def __post_init__(self):
        vals = tuple(sorted((complex(v) for v in self.values), key=lambda z: (round(z.real, 9), z.imag)))
        object.__setattr__(self, "values", vals)

    def __len__(self):
        return len(self.values)

    def sorted_values(self) -> list[complex]:
        return sorted(self.values, key=lambda z: (z.real, z.imag))

    def multiplicities(self) -> list[tuple[complex, int]]:
        """Cluster eigenvalues closer than ``tolerance`` and count each cluster."""
        clusters: list[list[complex]] = []
        for z in self.sorted_values():
            for cl in clusters:
                if abs(cl[0] - z) <= self.tolerance:
                    cl.append(z)
                    break
            else:
                clusters.append([z])
        return [(sum(cl) / len(cl), len(cl)) for cl in clusters]

    def is_conjugate_closed(self) -> bool:
        remaining = list(self.values)
        while remaining:
            z = remaining.pop()
            if abs(z.imag) <= self.tolerance:
                continue
            k = min(range(len(remaining)), key=lambda t: abs(remaining[t] - z.conjugate()), default=None)
            if k is None or abs(remaining[k] - z.conjugate()) > self.tolerance:
                return False
            remaining.pop(k)
        return True

    def approx_equal(self, other: "Spectrum", tol: float) -> bool:
        """Multiset equality within ``tol`` (greedy nearest matching)."""
        if len(self) != len(other):
            return False
        remaining = list(other.values)
        for z in self.values:
            k = min(range(len(remaining)), key=lambda t: abs(remaining[t] - z))
            if abs(remaining[k] - z) > tol:
                return False
            remaining.pop(k)
        return True


def spectrum_from_polynomial(p: IntPolynomial, tol: float = DEFAULT_TOL) -> Spectrum:
    return Spectrum(tuple(poly.roots(p)), tol)


def spectrum_numeric(M, tol: float = DEFAULT_TOL, method: str = "poly") -> Spectrum:
    """Eigenvalues of an integer matrix.

    ``method="poly"`` (default) takes the roots of the exact characteristic
    polynomial after a squarefree split, so repeated eigenvalues of
    defective Laplacians come back sharp. ``method="eig"`` calls the dense
    LAPACK eigensolver directly.
    """
    if tol <= 0:
        raise ValueError("tolerance must be positive")
    if method == "poly":
        return spectrum_from_polynomial(char_poly_exact(M), tol)
    if method == "eig":
        try:
            vals = np.linalg.eigvals(np.array(M, dtype=float))
        except np.linalg.LinAlgError as exc:
            raise ConvergenceFailure(str(exc)) from None
        return Spectrum(tuple(complex(v) for v in vals), tol)
    raise ValueError(f"unknown method {method!r}")


def _drop_nearest_zero(values: Sequence[complex], tol: float) -> list[complex]:
    if not values:
        raise NoZeroEigenvalue("empty spectrum")
    k = min(range(len(values)), key=lambda t: abs(values[t]))
    if abs(values[k]) > tol:
        raise NoZeroEigenvalue(f"no eigenvalue within {tol} of 0 (closest {values[k]})")
    return list(values[:k]) + list(values[k + 1 :])


def sigma_squared(s: Spectrum) -> float:
    """Normalized spread of the eigenvalues left after removing one zero."""
    if len(s) < 2:
        raise ValueError("spread needs at least two eigenvalues")
    rest = _drop_nearest_zero(s.values, s.tolerance)
    mean = sum(rest) / len(rest)
    if abs(mean.imag) >= s.tolerance:
        raise SpectralError(f"mean of nonzero eigenvalues is not real: {mean}")
    centre = mean.real
    return math.fsum(abs(z - centre) ** 2 for z in rest) / len(rest)


@dataclass(frozen=True)
class SpreadParameters:
    n: int
    m: int
    kappa: int
    nu: int
    sigma_min_sq: Fraction
    low_multiplicity: int  # copies of kappa
    high_multiplicity: int  # copies of kappa + 1

    @property
    def optimal_multiset(self) -> list[int]:
        return [0] + [self.kappa] * self.low_multiplicity + [self.kappa + 1] * self.high_multiplicity

    def polynomial(self) -> IntPolynomial:
        return poly.optimal_polynomial(self.n, self.kappa, self.low_multiplicity, self.high_multiplicity)


def spread_parameters(n: int, m: int) -> SpreadParameters:
    """Minimal spread and optimal spectrum for ``n`` vertices and (net) ``m`` arcs."""
    if n < 2:
        raise ValueError("need n >= 2")
    kappa = m // (n - 1)
    low = (n - 1) * (kappa + 1) - m
    high = m - (n - 1) * kappa
    sigma_min = Fraction(high * low, (n - 1) ** 2)
    return SpreadParameters(n, m, kappa, m // n, sigma_min, low, high)


def matches_optimal_spectrum(g: DiGraph) -> bool:
    """Exact test that the Laplacian spectrum of ``g`` is the optimal multiset."""
    if g.n < 2:
        return True
    target = spread_parameters(g.n, g.net_weight).polynomial()
    return char_poly_exact(laplacian(g)) == target


@dataclass(frozen=True)
class Theorem2Report:
    lhs: float
    rhs: float
    holds: bool
    equality: bool
    roots_integral_adjacent: bool
    roots: tuple[complex, ...] = ()
    ell: int = 0
    k: int = 0


def theorem2_report(p: IntPolynomial, root_tol: float = ROOT_TOL) -> Theorem2Report:
    """Compare the root spread of a monic integer polynomial with its lower bound.

    ``ell`` (the root sum) is read exactly off the ``x**(k-1)`` coefficient.
    """
    if p.degree < 1 or not p.is_monic():
        raise ValueError("need a monic polynomial of positive degree")
    k = p.degree
    ell = -p.coeffs[k - 1]
    rs = poly.roots(p)
    centre = ell / k
    lhs = math.fsum(abs(r - centre) ** 2 for r in rs) / k
    mean = Fraction(ell, k)
    a = math.floor(mean)
    b = mean - a
    rhs = float(b * (1 - b))
    holds = lhs >= rhs - 1e-9
    equality = abs(lhs - rhs) <= 1e-6 * max(1.0, rhs)
    adjacent = all(min(abs(r - a), abs(r - (a + 1))) <= root_tol for r in rs)
    return Theorem2Report(lhs, rhs, holds, equality, adjacent, tuple(rs), ell, k)


def acyclic_spectrum(g: DiGraph) -> Spectrum:
    """Exact spectrum of an acyclic graph: its (weighted) in-degrees."""
    if not is_acyclic(g):
        raise NotAcyclic("graph has a directed cycle")
    return Spectrum(tuple(complex(d) for d in g.in_degrees()), DEFAULT_TOL)


def complement_spectrum(s: Spectrum, n: int) -> Spectrum:
    """Spectrum of the complement graph: keep one 0 and map every other value to ``n - value``."""
    if len(s) != n:
        raise ValueError(f"spectrum has {len(s)} values, expected {n}")
    rest = _drop_nearest_zero(s.values, s.tolerance)
    return Spectrum((0j,) + tuple(n - z for z in rest), s.tolerance)


def format_spectrum_csv(s: Spectrum) -> str:
    return "".join(f"{z.real:.17g},{z.imag:.17g}\n" for z in s.sorted_values())


def parse_spectrum_csv(text: str, tol: float = DEFAULT_TOL) -> Spectrum:
    vals = []
    for line in text.splitlines():
        if line.strip():
            re_, im = line.split(",")
            vals.append(complex(float(re_), float(im)))
    return Spectrum(tuple(vals), tol)


def sorted_real_parts(s: Iterable[complex]) -> list[float]:
    return sorted(z.real for z in s)
