"""Exact integer polynomials and their (numeric) roots.

Coefficients are Python ints stored constant term first. Root finding goes
through a squarefree decomposition so that repeated roots, which are the
rule for Laplacians of optimal graphs, come back with exact multiplicities
instead of the ``eps**(1/k)`` scatter a direct companion solve produces.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence

import numpy as np

from .errors import RootFindingFailure


def _trim(coeffs):
    coeffs = list(coeffs)
    while len(coeffs) > 1 and coeffs[-1] == 0:
        coeffs.pop()
    return coeffs


class IntPolynomial:
    """Polynomial with exact integer coefficients, ``coeffs[k]`` multiplying ``x**k``."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable[int]):
        cs = _trim(int(c) for c in coeffs)
        self.coeffs: tuple[int, ...] = tuple(cs) if cs else (0,)

    @classmethod
    def from_roots(cls, roots: Iterable[int]) -> "IntPolynomial":
        p = cls([1])
        for r in roots:
            p = p * cls([-r, 1])
        return p

    @classmethod
    def monomial(cls, k: int) -> "IntPolynomial":
        return cls([0] * k + [1])

    @property
    def degree(self) -> int:
        return -1 if self.coeffs == (0,) else len(self.coeffs) - 1

    @property
    def leading(self) -> int:
        return self.coeffs[-1]

    def is_monic(self) -> bool:
        return self.leading == 1

    def __eq__(self, other):
        if isinstance(other, IntPolynomial):
            return self.coeffs == other.coeffs
        return NotImplemented

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self):
        return f"IntPolynomial({list(self.coeffs)})"

    def __str__(self):
        terms = []
        for k in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[k]
            if c == 0:
                continue
            mag = abs(c)
            body = {0: f"{mag}", 1: "x"}.get(k, f"x^{k}")
            if k > 0 and mag != 1:
                body = f"{mag}{body}"
            sign = "-" if c < 0 else "+"
            terms.append((sign, body))
        if not terms:
            return "0"
        first_sign, first = terms[0]
        out = ("-" if first_sign == "-" else "") + first
        return out + "".join(f" {s} {b}" for s, b in terms[1:])

    def __add__(self, other):
        a, b = self.coeffs, other.coeffs
        size = max(len(a), len(b))
        return IntPolynomial((a[k] if k < len(a) else 0) + (b[k] if k < len(b) else 0) for k in range(size))

    def __neg__(self):
        return IntPolynomial(-c for c in self.coeffs)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, int):
            return IntPolynomial(c * other for c in self.coeffs)
        a, b = self.coeffs, other.coeffs
        out = [0] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    out[i + j] += x * y
        return IntPolynomial(out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative power")
        result, base = IntPolynomial([1]), self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __call__(self, x):
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def derivative(self) -> "IntPolynomial":
        return IntPolynomial(k * c for k, c in enumerate(self.coeffs) if k > 0)

    def deflate_zero(self) -> tuple[int, "IntPolynomial"]:
        """Split off ``x**k``: return ``(k, q)`` with ``p = x**k * q`` and ``q(0) != 0``."""
        k = 0
        while k < len(self.coeffs) - 1 and self.coeffs[k] == 0:
            k += 1
        return k, IntPolynomial(self.coeffs[k:])

    def to_text(self) -> str:
        return " ".join(str(c) for c in self.coeffs)

    @classmethod
    def from_text(cls, text: str) -> "IntPolynomial":
        toks = text.split()
        if not toks:
            raise ValueError("empty polynomial line")
        return cls(int(t) for t in toks)


# ---------------------------------------------------------------------------
# arithmetic over Q, used only for gcds in the squarefree decomposition


def _qtrim(p):
    while len(p) > 1 and p[-1] == 0:
        p.pop()
    return p


def _qdivmod(a: list, b: list):
    a = list(a)
    db = len(b) - 1
    if len(a) - 1 < db:
        return [Fraction(0)], a
    quot = [Fraction(0)] * (len(a) - db)
    lead = b[-1]
    for k in range(len(a) - 1 - db, -1, -1):
        c = a[k + db] / lead
        quot[k] = c
        if c:
            for j in range(db + 1):
                a[k + j] -= c * b[j]
    rem = _qtrim(a[:db] if db > 0 else [Fraction(0)])
    return _qtrim(quot), rem


def _qsub(a, b):
    size = max(len(a), len(b))
    a = a + [Fraction(0)] * (size - len(a))
    b = b + [Fraction(0)] * (size - len(b))
    return _qtrim([x - y for x, y in zip(a, b)])


def _qmonic(p):
    lead = p[-1]
    return [c / lead for c in p]


def _qgcd(a, b):
    a, b = _qtrim(list(a)), _qtrim(list(b))
    while not (len(b) == 1 and b[0] == 0):
        _, r = _qdivmod(a, b)
        a, b = b, r
    return _qmonic(a)


def _primitive(p) -> IntPolynomial:
    """Scale a rational polynomial to a primitive integer one with positive leading term."""
    from math import gcd, lcm

    den = 1
    for c in p:
        den = lcm(den, Fraction(c).denominator)
    ints = [int(Fraction(c) * den) for c in p]
    g = 0
    for c in ints:
        g = gcd(g, c)
    g = g or 1
    if ints[-1] < 0:
        g = -g
    return IntPolynomial(c // g for c in ints)


def squarefree_decomposition(p: IntPolynomial) -> list[tuple[IntPolynomial, int]]:
    """Yun's algorithm: ``p = lc * prod(f_i ** i)`` with each ``f_i`` squarefree.

    Returns the non-constant factors ``(f_i, i)``; factors are primitive
    integer polynomials with positive leading coefficient.
    """
    if p.degree < 1:
        return []
    f = [Fraction(c) for c in p.coeffs]
    df = [Fraction(c) for c in p.derivative().coeffs]
    a = _qgcd(f, df)
    b, _ = _qdivmod(f, a)
    c, _ = _qdivmod(df, a)
    out = []
    i = 1
    while len(b) > 1:
        db = [k * b[k] for k in range(1, len(b))] or [Fraction(0)]
        d = _qsub(c, db)
        a = _qgcd(b, d)
        if len(a) > 1:
            out.append((_primitive(a), i))
        b, _ = _qdivmod(b, a)
        c, _ = _qdivmod(d, a)
        i += 1
    return out


def _polish(coeffs_high_first: np.ndarray, z: np.ndarray, iterations: int = 3) -> np.ndarray:
    dp = np.polyder(coeffs_high_first)
    for _ in range(iterations):
        fz = np.polyval(coeffs_high_first, z)
        dz = np.polyval(dp, z)
        ok = dz != 0
        step = np.zeros_like(z)
        step[ok] = fz[ok] / dz[ok]
        candidate = z - step
        better = np.abs(np.polyval(coeffs_high_first, candidate)) <= np.abs(fz)
        z = np.where(better, candidate, z)
    return z


def _simple_roots(f: IntPolynomial) -> list[complex]:
    if f.degree == 1:
        return [complex(Fraction(-f.coeffs[0], f.coeffs[1]))]
    high_first = np.array([float(c) for c in reversed(f.coeffs)])
    try:
        z = np.roots(high_first).astype(complex)
    except np.linalg.LinAlgError as exc:
        raise RootFindingFailure(str(exc)) from None
    if len(z) != f.degree or not np.all(np.isfinite(z)):
        raise RootFindingFailure(f"companion eigensolver failed for {f}")
    z = _polish(high_first, z)
    out = []
    for r in z:
        k = round(r.real)
        # snap to an integer root when exact evaluation confirms it
        if abs(r - k) < 1e-6 and f(k) == 0:
            out.append(complex(k))
        else:
            out.append(complex(r))
    return out


@lru_cache(maxsize=65536)
def _roots_cached(coeffs: tuple[int, ...]) -> tuple[complex, ...]:
    p = IntPolynomial(coeffs)
    zeros, q = p.deflate_zero()
    roots = [0j] * zeros
    for factor, mult in squarefree_decomposition(q):
        rs = _simple_roots(factor)
        roots.extend(rs * mult)
    return tuple(roots)


def roots(p: IntPolynomial) -> list[complex]:
    """All complex roots of ``p`` with multiplicity (``degree`` values)."""
    if p.degree < 1:
        return []
    return list(_roots_cached(p.coeffs))


def optimal_polynomial(n: int, kappa: int, low_mult: int, high_mult: int) -> IntPolynomial:
    """``x (x - kappa)**low_mult (x - kappa - 1)**high_mult`` expanded exactly."""
    return IntPolynomial([0, 1]) * IntPolynomial([-kappa, 1]) ** low_mult * IntPolynomial([-kappa - 1, 1]) ** high_mult


def leibniz_char_poly(matrix: Sequence[Sequence[int]]) -> IntPolynomial:
    """``det(xI - M)`` by summing over all permutations. Only for small test oracles."""
    from itertools import permutations

    n = len(matrix)
    total = IntPolynomial([0])
    for perm in permutations(range(n)):
        inversions = sum(1 for a in range(n) for b in range(a + 1, n) if perm[a] > perm[b])
        term = IntPolynomial([-1 if inversions % 2 else 1])
        for i in range(n):
            j = perm[i]
            entry = IntPolynomial([-matrix[i][j], 1]) if i == j else IntPolynomial([-matrix[i][j]])
            term = term * entry
            if term.degree < 0:
                break
        total = total + term
    return total
