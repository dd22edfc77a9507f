"""
Independent numerical checks: residuals of the Schrodinger-type and coupled
first-order forms, boundary decay, density normalization and peak counting.

Residuals are relative to the largest term magnitude on the grid so that the
tails, where the solution itself vanishes, do not inflate the statistic.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .errors import DegenerateDensity, DegenerateInput, UnsortedInput, WronskianZero, ZeroKy
from .jetcalc import Jet, jet_variable

__all__ = [
    "ResidualReport",
    "PeakReport",
    "schrodinger_residual",
    "schrodinger_residual_fd",
    "dirac_system_residual",
    "decay_check",
    "normalize_density",
    "detect_peaks",
    "predicted_peak_count",
]

DEFAULT_RESIDUAL_TOL = 1e-8
DEFAULT_PROMINENCE = 0.2


@dataclass
class ResidualReport:
    max_abs: float
    max_rel: float
    grid: tuple
    passed: bool
    tolerance: float = DEFAULT_RESIDUAL_TOL
    excluded: list = field(default_factory=list)

    def as_dict(self):
        return {
            "max_abs": self.max_abs,
            "max_rel": self.max_rel,
            "passed": self.passed,
            "tolerance": self.tolerance,
            "excluded": list(self.excluded),
        }


@dataclass
class PeakReport:
    detected: int
    predicted: int | None
    locations: list
    prominences: list


def _grid_descriptor(grid):
    return (float(np.min(grid)), float(np.max(grid)), int(np.size(grid)))


def _eval_excluding(fn, grid, order):
    """Evaluate ``fn`` on the grid; if it raises WronskianZero, retry pointwise and drop bad points."""
    try:
        return fn(grid), grid, []
    except WronskianZero:
        keep, bad = [], []
        for x in grid:
            try:
                fn(np.array([x]))
                keep.append(x)
            except WronskianZero:
                bad.append(float(x))
        keep = np.array(keep)
        return fn(keep), keep, bad


def schrodinger_residual(
    solution: Callable[[np.ndarray], Jet],
    potential: Callable[[np.ndarray], np.ndarray],
    ky: float,
    grid,
    tolerance: float = DEFAULT_RESIDUAL_TOL,
) -> ResidualReport:
    """Residual of ``f'' + (W(x) - ky**2) f = 0`` with jet derivatives.

    ``solution`` maps grid points to a jet of order >= 2, ``potential`` to the
    complex Schrodinger potential ``W`` (``V**2 + i*V'`` for the initial system).
    """
    grid = np.asarray(grid, dtype=float)
    f, pts, excluded = _eval_excluding(solution, grid, 2)
    f0, f2 = f.value, f.deriv(2)
    if not np.any(np.abs(f0) > 0):
        raise DegenerateInput("solution vanishes identically on the grid")
    w = np.asarray(potential(pts))
    res = f2 + (w - ky**2) * f0
    scale = np.max(np.abs(f2) + np.abs(ky**2 * f0))
    max_abs = float(np.max(np.abs(res)))
    max_rel = max_abs / scale
    return ResidualReport(max_abs, max_rel, _grid_descriptor(grid), bool(max_rel < tolerance), tolerance, excluded)


def schrodinger_residual_fd(
    values: Callable[[np.ndarray], np.ndarray],
    potential: Callable[[np.ndarray], np.ndarray],
    ky: float,
    grid,
    step: float = 1e-4,
    tolerance: float = DEFAULT_RESIDUAL_TOL,
) -> ResidualReport:
    """Same residual with a 5-point central difference for ``f''`` (values only)."""
    grid = np.asarray(grid, dtype=float)
    h = step
    stencil = np.array([-2.0, -1.0, 0.0, 1.0, 2.0])
    pts = grid[None, :] + h * stencil[:, None]
    v = np.asarray(values(pts.reshape(-1))).reshape(pts.shape)
    f0 = v[2]
    if not np.any(np.abs(f0) > 0):
        raise DegenerateInput("solution vanishes identically on the grid")
    f2 = (-v[0] + 16 * v[1] - 30 * v[2] + 16 * v[3] - v[4]) / (12 * h * h)
    res = f2 + (np.asarray(potential(grid)) - ky**2) * f0
    scale = np.max(np.abs(f2) + np.abs(ky**2 * f0))
    max_abs = float(np.max(np.abs(res)))
    max_rel = max_abs / scale
    return ResidualReport(max_abs, max_rel, _grid_descriptor(grid), bool(max_rel < tolerance), tolerance)


def dirac_system_residual(
    psi1: Callable[[np.ndarray], Jet],
    psi2: Callable[[np.ndarray], Jet],
    potential: Callable[[np.ndarray], np.ndarray],
    ky: float,
    grid,
    tolerance: float = DEFAULT_RESIDUAL_TOL,
) -> ResidualReport:
    """Residual of the coupled pair

        -i psi1' + P psi1 + i ky psi2 = 0
         i psi2' + P psi2 - i ky psi1 = 0

    ``psi1``/``psi2`` return jets of order >= 1; ``P`` is the (possibly
    complex) Dirac potential. Each equation is normalized by its largest term
    magnitude over the grid; the report carries the worse of the two.
    """
    if abs(ky) <= 1e-12:
        raise ZeroKy("coupled-system residual needs ky != 0")
    grid = np.asarray(grid, dtype=float)
    a = psi1(grid)
    b = psi2(grid)
    pot = np.asarray(potential(grid))
    t1 = (-1j * a.deriv(1), pot * a.value, 1j * ky * b.value)
    t2 = (1j * b.deriv(1), pot * b.value, -1j * ky * a.value)
    max_abs, max_rel = 0.0, 0.0
    for terms in (t1, t2):
        res = np.abs(sum(terms))
        scale = np.max(sum(np.abs(t) for t in terms))
        if scale == 0:
            raise DegenerateInput("both components vanish identically")
        max_abs = max(max_abs, float(np.max(res)))
        max_rel = max(max_rel, float(np.max(res)) / scale)
    return ResidualReport(max_abs, max_rel, _grid_descriptor(grid), bool(max_rel < tolerance), tolerance)


def decay_check(x, density, L: float, threshold: float = 1e-4) -> bool:
    """True iff the density at ``-L`` and ``+L`` is below ``threshold * max``."""
    x = np.asarray(x, dtype=float)
    d = np.asarray(density, dtype=float)
    if x.min() > -L + 1e-12 or x.max() < L - 1e-12:
        raise ValueError(f"samples do not cover [-{L}, {L}]")
    peak = np.max(d)
    if peak <= 0:
        return False
    edges = np.interp([-L, L], x, d)
    return bool(np.all(edges < threshold * peak))


def normalize_density(x, density):
    """Scale a nonnegative density so its trapezoid integral over ``x`` is 1."""
    x = np.asarray(x, dtype=float)
    d = np.asarray(density, dtype=float)
    if d.shape != x.shape:
        raise DegenerateDensity("density and grid differ in shape")
    if not np.all(np.isfinite(d)) or np.any(d < 0):
        raise DegenerateDensity("density must be finite and nonnegative")
    total = np.trapezoid(d, x)
    if not total > 0:
        raise DegenerateDensity("density integrates to zero")
    return d / total


def _prominences(d, idx):
    """Height of each peak above the higher of its two bases.

    A base is the lowest point between the peak and the nearest strictly
    higher sample on that side (or the grid end).
    """
    out = []
    n = len(d)
    for i in idx:
        h = d[i]
        j = i
        left_min = h
        while j > 0 and d[j - 1] <= h:
            j -= 1
            left_min = min(left_min, d[j])
        j = i
        right_min = h
        while j < n - 1 and d[j + 1] <= h:
            j += 1
            right_min = min(right_min, d[j])
        out.append(h - max(left_min, right_min))
    return np.array(out)


def detect_peaks(x, u, v, prominence_frac: float = DEFAULT_PROMINENCE) -> PeakReport:
    """Count the peaks the transformation adds to the potential.

    A peak is a strict interior local maximum of ``U`` whose prominence
    exceeds ``prominence_frac * (max V - min V)``. The initial potential has
    no local maximum of its own (it is a single well), so every counted
    maximum is a feature of the partner potential.
    """
    x = np.asarray(x, dtype=float)
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    if u.shape != v.shape or u.shape != x.shape:
        raise ValueError("x, U and V samples must be aligned")
    if u.size < 3:
        return PeakReport(0, None, [], [])
    scale = float(np.max(v) - np.min(v))
    cand = np.nonzero((u[1:-1] > u[:-2]) & (u[1:-1] > u[2:]))[0] + 1
    prom = _prominences(u, cand)
    keep = prom > prominence_frac * scale
    return PeakReport(int(np.sum(keep)), None, [float(t) for t in x[cand[keep]]], [float(t) for t in prom[keep]])


def predicted_peak_count(regular_ns, n_nonregular: int) -> int:
    """Empirical peak-count rule for ``M`` regular (sorted ``n`` values) and ``N`` nonregular functions."""
    ns = [int(n) for n in regular_ns]
    if any(b < a for a, b in zip(ns, ns[1:])):
        raise UnsortedInput("regular quantum numbers must be ascending")
    M, N = len(ns), int(n_nonregular)
    if M % 2 == 0:
        return N - M // 2 + sum(ns[2 * j + 1] - ns[2 * j] for j in range(M // 2))
    return N + ns[0] - (M - 1) // 2 + sum(ns[2 * j + 2] - ns[2 * j + 1] for j in range((M - 1) // 2))
