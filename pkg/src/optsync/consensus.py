"""Algebraic connectivity and the linear consensus process ``x' = -L x``."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .digraph import DiGraph, source_components
from .errors import ConvergenceFailure, RootFindingFailure, UnstableStepSize, WeightedUnsupported
from .spectral import char_poly_exact, laplacian, spectrum_from_polynomial, spread_parameters

ROOTED_THRESHOLD = 1e-8
STABILITY_MARGIN = 0.1


def algebraic_connectivity(g: DiGraph) -> float:
    """Second smallest real part among the Laplacian eigenvalues.

    When the spectrum is the optimal one this is ``floor(m / (n - 1))``,
    returned exactly.
    """
    if g.n < 2:
        raise ValueError("algebraic connectivity needs n >= 2")
    p = char_poly_exact(laplacian(g))
    params = spread_parameters(g.n, g.net_weight)
    if p == params.polynomial():
        return float(sorted(params.optimal_multiset)[1])
    try:
        spec = spectrum_from_polynomial(p)
    except RootFindingFailure as exc:
        raise ConvergenceFailure(str(exc)) from None
    return sorted(z.real for z in spec.values)[1]


def check_connectivity_bound(g: DiGraph) -> tuple[float, Fraction, bool]:
    if g.weighted:
        raise WeightedUnsupported("the bound is stated for unweighted graphs")
    a = algebraic_connectivity(g)
    bound = Fraction(g.m, g.n - 1)
    return a, bound, a <= float(bound) + 1e-8


def is_rooted_spectrally(g: DiGraph) -> bool:
    return algebraic_connectivity(g) > ROOTED_THRESHOLD


@dataclass(frozen=True)
class ConsensusRun:
    x0: tuple[float, ...]
    dt: float
    steps: int
    sample_stride: int
    times: np.ndarray
    trajectory: np.ndarray  # shape (samples, n)
    disagreement: np.ndarray

    @property
    def final_state(self) -> np.ndarray:
        return self.trajectory[-1]

    @property
    def final_disagreement(self) -> float:
        return float(self.disagreement[-1])

    def to_csv(self) -> str:
        n = self.trajectory.shape[1]
        lines = ["t," + ",".join(f"x{k}" for k in range(1, n + 1)) + ",disagreement"]
        for t, row, d in zip(self.times, self.trajectory, self.disagreement):
            lines.append(",".join(f"{v:.17g}" for v in (t, *row, d)))
        return "\n".join(lines) + "\n"


def _spread(x: np.ndarray) -> float:
    return float(x.max() - x.min()) if len(x) else 0.0


def simulate_consensus(
    g: DiGraph, x0: Sequence[float], dt: float, steps: int, sample_stride: int = 1
) -> ConsensusRun:
    """Integrate ``x' = -L x`` with the classical fourth-order Runge-Kutta method.

    Raises
    ------
    UnstableStepSize
        If ``dt * max_in_degree`` exceeds 0.1.
    """
    x = np.array(x0, dtype=float)
    if x.shape != (g.n,):
        raise ValueError(f"initial state must have {g.n} entries")
    if dt <= 0 or steps < 0 or sample_stride < 1:
        raise ValueError("need dt > 0, steps >= 0 and sample_stride >= 1")
    max_deg = max((abs(d) for d in g.in_degrees()), default=0)
    if dt * max_deg > STABILITY_MARGIN:
        raise UnstableStepSize(f"dt * max in-degree = {dt * max_deg:g} exceeds {STABILITY_MARGIN}")
    L = np.array(laplacian(g), dtype=float)

    def f(y):
        return -L @ y

    times, states = [0.0], [x.copy()]
    for k in range(1, steps + 1):
        k1 = f(x)
        k2 = f(x + 0.5 * dt * k1)
        k3 = f(x + 0.5 * dt * k2)
        k4 = f(x + dt * k3)
        x = x + dt / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4)
        if k % sample_stride == 0:
            times.append(k * dt)
            states.append(x.copy())
    traj = np.array(states)
    dis = np.array([_spread(row) for row in traj])
    return ConsensusRun(tuple(float(v) for v in x0), dt, steps, sample_stride, np.array(times), traj, dis)


def component_consensus_values(g: DiGraph, x0: Sequence[float]) -> list[float]:
    """Limit value of each source component, which evolves on its own.

    Each component's state converges to its initial state averaged with the
    left null vector of the component's own Laplacian.
    """
    x0 = np.asarray(x0, dtype=float)
    L = np.array(laplacian(g), dtype=float)
    values = []
    for comp in source_components(g):
        idx = sorted(v - 1 for v in comp)
        sub = L[np.ix_(idx, idx)]
        if len(idx) == 1:
            values.append(float(x0[idx[0]]))
            continue
        w, vecs = np.linalg.eig(sub.T)
        k = int(np.argmin(np.abs(w)))
        left = np.real(vecs[:, k])
        left = left / left.sum()
        values.append(float(left @ x0[idx]))
    return values


def disagreement_floor(g: DiGraph, x0: Sequence[float]) -> float:
    """Lower bound on ``max - min`` over the whole trajectory.

    Positive only when at least two source components start from different
    weighted averages.
    """
    vals = component_consensus_values(g, x0)
    return max(vals) - min(vals) if len(vals) > 1 else 0.0


def decay_envelope(run: ConsensusRun, a: float, safety: float = 0.8) -> float:
    """``disagreement(0) * exp(-safety * a * T)`` at the final time ``T``."""
    T = run.dt * run.steps
    return float(run.disagreement[0]) * math.exp(-safety * a * T)
