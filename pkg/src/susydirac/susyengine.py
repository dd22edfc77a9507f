"""
Wronskian (Darboux) transformations of the initial system and the induced
Dirac partner potential.

For transformation functions ``u_1..u_m`` and a target solution ``psi1``::

    phi1 = W(u_1..u_m, psi1) / W(u_1..u_m)
    Vhat = V**2 + i*V' + 2 (log W(u_1..u_m))''
    U    = i * phihat' / phihat,  phihat = phi1 evaluated at ky = 0

``U`` is real exactly when ``|phihat|`` is constant in ``x``; the
:func:`reality_report` measures that. All evaluation is vectorized over the
grid through batched jets.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Sequence, Union

import numpy as np

from . import diracmodel as dm
from . import jetcalc as jc
from .diracmodel import ModeIndex, SystemParams
from .errors import InsufficientJetOrder, ModeOutOfRange, QuadratureUnderflow, SpecError, WronskianZero, ZeroKy
from .jetcalc import Jet

__all__ = [
    "Regular",
    "Nonregular",
    "General",
    "ZeroMode",
    "FunctionSelector",
    "selector_energy",
    "selector_energy_exact",
    "is_regular",
    "regular_index",
    "TransformationSpec",
    "RealityReport",
    "SusyEvaluation",
    "wronskian_jet",
    "evaluate",
    "phi1",
    "phi1_zero",
    "transformed_potential_u",
    "schrodinger_partner_potential",
    "riccati_solution_u",
    "reality_report",
    "reality_from_ratio",
    "phi2_from_phi1",
]

ENERGY_TOL = 1e-9
WRONSKIAN_ZERO_TOL = 1e-250
DEFAULT_REALITY_TOL = 1e-6


# selectors -----------------------------------------------------------------


@dataclass(frozen=True)
class Regular:
    """Bound state ``psi1_bound`` with quantum number ``n >= 0``."""

    n: int

    def ky(self, p: SystemParams) -> float:
        return dm.ky_mode(p, ModeIndex(self.n))

    def validate(self, p: SystemParams):
        if int(self.n) != self.n or self.n < 0 or self.n > p.lam - 0.5:
            raise ModeOutOfRange(f"Regular(n={self.n}) outside 0..{p.lam - 0.5}")

    def jet(self, x: Jet, p: SystemParams) -> Jet:
        return dm.psi1_bound(x, p, self.n)


@dataclass(frozen=True)
class Nonregular:
    """Lattice function ``n <= -1``: the ``c1`` branch at ``ky_mode(n)``, growing at infinity."""

    n: int

    def ky(self, p: SystemParams) -> float:
        return dm.ky_mode(p, ModeIndex(self.n))

    def validate(self, p: SystemParams):
        if int(self.n) != self.n or self.n > -1:
            raise ModeOutOfRange(f"Nonregular(n={self.n}) needs n <= -1")

    def jet(self, x: Jet, p: SystemParams) -> Jet:
        return dm.psi1_lattice(x, p, int(self.n))


@dataclass(frozen=True)
class General:
    """Arbitrary superposition ``c1*branch1 + c2*branch2`` at wave number ``ky``.

    Off the termination lattice the 2F1 factors are evaluated by analytic
    continuation (slow, but it lets reality violations be measured).
    ``ky_squared`` optionally records ``ky**2`` as an exact rational.
    """

    ky_value: float
    c1: complex = 1.0
    c2: complex = 0.0
    ky_squared: Fraction | None = None

    @classmethod
    def from_ky_squared(cls, ky_squared, c1=1.0, c2=0.0) -> General:
        q = Fraction(ky_squared)
        if q < 0:
            raise SpecError(f"ky_squared must be nonnegative, got {q}")
        return cls(math.sqrt(q), c1, c2, q)

    def ky(self, p: SystemParams) -> float:
        return float(self.ky_value)

    def validate(self, p: SystemParams):
        if self.c1 == 0 and self.c2 == 0:
            raise SpecError("General selector needs (c1, c2) != (0, 0)")
        if not math.isfinite(self.ky_value):
            raise SpecError("General selector needs a finite ky")

    def jet(self, x: Jet, p: SystemParams) -> Jet:
        q = SystemParams(p.lam, p.mu, self.c1, self.c2)
        return dm.psi1_general(x, q, self.ky_value, continuation=True)


@dataclass(frozen=True)
class ZeroMode:
    """The ``ky = 0`` solution obtained at complex ``n = lam - i*mu - 1/2``."""

    def ky(self, p: SystemParams) -> float:
        return 0.0

    def validate(self, p: SystemParams):
        pass

    def jet(self, x: Jet, p: SystemParams) -> Jet:
        return dm.psi1_zero_mode(x, p)


FunctionSelector = Union[Regular, Nonregular, General]


def selector_energy(sel, p: SystemParams) -> float:
    return -sel.ky(p) ** 2


def selector_energy_exact(sel, lam, mu) -> Fraction:
    """Factorization energy as a rational (``lam``, ``mu`` exact or binary floats)."""
    if isinstance(sel, (Regular, Nonregular)):
        return dm.factorization_energy_exact(lam, mu, int(sel.n))
    if isinstance(sel, General):
        if sel.ky_squared is not None:
            return -Fraction(sel.ky_squared)
        return -Fraction(sel.ky_value) ** 2
    if isinstance(sel, ZeroMode):
        return Fraction(0)
    raise TypeError(f"unknown selector {sel!r}")


def regular_index(sel, p: SystemParams) -> int | None:
    """Quantum number ``n`` if the selected function decays at both ends, else None.

    General selectors count as regular only when they coincide with a bound
    state: pure ``c1`` branch at an electron lattice wave number.
    """
    if isinstance(sel, Regular):
        return int(sel.n)
    if isinstance(sel, General) and sel.c2 == 0:
        for n in range(p.max_regular_n + 1):
            if abs(sel.ky_value - dm.ky_mode(p, ModeIndex(n))) <= 1e-12 * max(1.0, sel.ky_value):
                return n
    return None


def is_regular(sel, p: SystemParams) -> bool:
    return regular_index(sel, p) is not None


@dataclass(frozen=True)
class TransformationSpec:
    params: SystemParams
    functions: tuple
    target: object

    def __post_init__(self):
        object.__setattr__(self, "functions", tuple(self.functions))
        if not self.functions:
            raise SpecError("functions: at least one transformation function is required")
        for i, sel in enumerate(self.functions):
            try:
                sel.validate(self.params)
            except (ModeOutOfRange, SpecError) as exc:
                raise SpecError(f"functions[{i}]: {exc}") from exc
        try:
            self.target.validate(self.params)
        except (ModeOutOfRange, SpecError) as exc:
            raise SpecError(f"target: {exc}") from exc
        labelled = [(f"functions[{i}]", s) for i, s in enumerate(self.functions)] + [("target", self.target)]
        energies = [(name, selector_energy(s, self.params)) for name, s in labelled]
        for (na, ea), (nb, eb) in itertools.combinations(energies, 2):
            if abs(ea - eb) <= ENERGY_TOL * max(1.0, abs(ea)):
                raise SpecError(f"{nb}: factorization energy {eb} duplicates {na}; the set must be linearly independent")

    @property
    def order(self) -> int:
        return len(self.functions)

    @property
    def jet_order(self) -> int:
        """Derivative order every input function must carry."""
        return self.order + 2

    def energies(self):
        return [selector_energy(s, self.params) for s in self.functions]

    def target_ky(self) -> float:
        return self.target.ky(self.params)

    def with_target(self, target) -> TransformationSpec:
        return TransformationSpec(self.params, self.functions, target)


@dataclass
class RealityReport:
    r1: float
    max_rel_dev: float
    grid: tuple
    passed: bool
    tolerance: float = DEFAULT_REALITY_TOL

    def as_dict(self):
        return {"r1": self.r1, "max_rel_dev": self.max_rel_dev, "passed": self.passed, "grid": list(self.grid)}


# Wronskians ----------------------------------------------------------------


def _jet_det(A: np.ndarray) -> np.ndarray:
    """Determinant of a matrix of Taylor-coefficient arrays ``A[k, i, j, g]``.

    Gaussian elimination with per-point partial pivoting on the values; rows
    and columns are rescaled first to keep intermediates in range.
    """
    A = A.copy()
    K1, n, _, G = A.shape
    ar = np.arange(G)
    scale = np.ones(G)
    for axis in (1, 0):
        s = np.max(np.abs(A[0]), axis=axis)  # (n, G)
        s = np.where(s > 0, s, 1.0)
        if axis == 1:
            A /= s[None, :, None, :]
        else:
            A /= s[None, None, :, :]
        scale *= np.prod(s, axis=0)
    det = np.zeros((K1, G), dtype=complex)
    det[0] = 1.0
    sign = np.ones(G)
    for k in range(n):
        piv = np.argmax(np.abs(A[0, k:, k, :]), axis=0) + k
        swap = piv != k
        if np.any(swap):
            prow = A[:, piv, :, ar]  # (G, K1, n)
            A[:, piv, :, ar] = np.transpose(A[:, k, :, :], (2, 0, 1))
            A[:, k, :, :] = np.transpose(prow, (1, 2, 0))
            sign = np.where(swap, -sign, sign)
        pk = A[:, k, k, :]
        det = jc._mul_coeffs(det, pk)
        if k == n - 1:
            break
        safe = np.where(np.abs(pk[0]) > 0, pk[0], 1.0)
        pk = pk.copy()
        pk[0] = safe
        factor = jc._div_coeffs(A[:, k + 1 :, k, :], pk[:, None, :])
        A[:, k + 1 :, k + 1 :, :] -= jc._mul_coeffs(factor[:, :, None, :], A[:, k, None, k + 1 :, :])
    return det * (sign * scale)[None, :]


def wronskian_jet(fns: Sequence[Jet], out_order: int) -> Jet:
    """Wronskian of ``fns`` with ``out_order`` of its own derivatives."""
    fns = list(fns)
    n = len(fns)
    if n == 0:
        raise ValueError("Wronskian of an empty list")
    need = n - 1 + out_order
    for i, f in enumerate(fns):
        if f.order < need:
            raise InsufficientJetOrder(f"function {i} has order {f.order}, Wronskian needs {need}")
    batch = fns[0].batch_shape
    G = int(np.prod(batch)) if batch else 1
    K1 = out_order + 1
    A = np.empty((K1, n, n, G), dtype=complex)
    for j, f in enumerate(fns):
        d = np.broadcast_to(f.derivs, (f.order + 1,) + batch).reshape(f.order + 1, G)
        for i in range(n):
            A[:, i, j, :] = Jet(d[i : i + K1]).coeffs
    det = _jet_det(A)
    return Jet.from_coeffs(det.reshape((K1,) + batch))


# evaluation ----------------------------------------------------------------


def _as_variable(x, order: int) -> Jet:
    if isinstance(x, Jet):
        if x.order < order:
            raise InsufficientJetOrder(f"variable jet has order {x.order}, need {order}")
        return x.truncate(order)
    return jc.jet_variable(x, order)


def _check_nonzero(w: Jet, what: str, scale=1.0):
    mag = np.abs(w.value)
    if np.any(mag <= WRONSKIAN_ZERO_TOL * scale) or not np.all(np.isfinite(mag)):
        raise WronskianZero(f"{what} vanishes (or is not finite) on the grid")


@dataclass
class SusyEvaluation:
    """Everything the pipeline needs on one grid, all as order-2 (or order-1) jets."""

    x: np.ndarray
    v: Jet
    w_den: Jet
    w_num: Jet
    w_zero: Jet
    phi1: Jet
    phi_hat: Jet
    u: Jet  # order 1: U and U'
    v_hat: np.ndarray
    ky: float
    extras: dict = field(default_factory=dict)

    @property
    def modulus_ratio(self) -> np.ndarray:
        return np.abs(self.w_zero.value) / np.abs(self.w_den.value)


def evaluate(spec: TransformationSpec, x) -> SusyEvaluation:
    """Evaluate every transformed quantity of ``spec`` at the points ``x``."""
    K = spec.jet_order
    xv = _as_variable(x, K)
    p = spec.params
    us = [sel.jet(xv, p) for sel in spec.functions]
    target = spec.target.jet(xv, p)
    zero = dm.psi1_zero_mode(xv, p)
    w_den = wronskian_jet(us, 2)
    _check_nonzero(w_den, "denominator Wronskian")
    w_num = wronskian_jet(us + [target], 2)
    w_zero = wronskian_jet(us + [zero], 2)
    _check_nonzero(w_zero, "zero-mode Wronskian")
    phi = w_num / w_den
    phi_hat = w_zero / w_den
    u = 1j * phi_hat.shift(1) / phi_hat.truncate(1)
    v = dm.potential_v_jet(xv.truncate(2), p)
    log_w = w_den.shift(1) / w_den.truncate(1)
    v_hat = v.value**2 + 1j * v.deriv(1) + 2.0 * log_w.deriv(1)
    return SusyEvaluation(
        x=np.real(xv.value),
        v=v,
        w_den=w_den,
        w_num=w_num,
        w_zero=w_zero,
        phi1=phi,
        phi_hat=phi_hat,
        u=u,
        v_hat=v_hat,
        ky=spec.target_ky(),
        extras={"functions": us, "target": target},
    )


def phi1(spec: TransformationSpec, x) -> Jet:
    """SUSY-transformed first component ``W(u..., psi1)/W(u...)`` (order-2 jet)."""
    return evaluate(spec, x).phi1


def phi1_zero(spec: TransformationSpec, x) -> Jet:
    """``phi1`` with the target replaced by the zero mode (order-2 jet)."""
    return evaluate(spec, x).phi_hat


def transformed_potential_u(spec: TransformationSpec, x):
    """Dirac partner potential ``U = i*phihat'/phihat`` (complex values)."""
    return evaluate(spec, x).u.value


def schrodinger_partner_potential(spec: TransformationSpec, x):
    """``V**2 + i*V' + 2 (log W(u...))''`` (complex values)."""
    return evaluate(spec, x).v_hat


def phi2_from_phi1(phi1_jet: Jet, u_at_x, ky: float):
    """Second transformed component ``(phi1' + i*U*phi1)/ky``.

    ``u_at_x`` may be values or a jet; with a jet the result is a jet one order
    shorter than ``phi1_jet``.
    """
    if abs(ky) <= dm.ZERO_KY_TOL:
        raise ZeroKy("ky = 0: second transformed component undefined")
    if isinstance(u_at_x, Jet):
        return (phi1_jet.shift(1) + 1j * u_at_x * phi1_jet) / ky
    return (phi1_jet.deriv(1) + 1j * np.asarray(u_at_x) * phi1_jet.value) / ky


def reality_report(spec: TransformationSpec, grid, tolerance: float = DEFAULT_REALITY_TOL) -> RealityReport:
    """Constancy of ``|W(u..., psi_zero)| / |W(u...)|`` over ``grid``."""
    grid = np.asarray(grid, dtype=float)
    if grid.size == 0:
        raise ValueError("empty grid")
    xv = jc.jet_variable(grid, spec.order)
    p = spec.params
    us = [sel.jet(xv, p) for sel in spec.functions]
    w_den = wronskian_jet(us, 0)
    _check_nonzero(w_den, "denominator Wronskian")
    w_zero = wronskian_jet(us + [dm.psi1_zero_mode(xv, p)], 0)
    ratio = np.abs(w_zero.value) / np.abs(w_den.value)
    return reality_from_ratio(ratio, grid, tolerance)


def reality_from_ratio(ratio, grid, tolerance: float = DEFAULT_REALITY_TOL) -> RealityReport:
    """Summarize sampled ``|W(u..., psi_zero)| / |W(u...)|``: mean and worst relative deviation."""
    ratio = np.asarray(ratio, dtype=float)
    grid = np.asarray(grid, dtype=float)
    r1 = float(np.mean(ratio))
    dev = float(np.max(np.abs(ratio - r1)) / r1)
    return RealityReport(
        r1=r1,
        max_rel_dev=dev,
        grid=(float(grid.min()), float(grid.max()), int(grid.size)),
        passed=bool(dev < tolerance),
        tolerance=tolerance,
    )


def riccati_solution_u(
    phi_hat: Callable[[np.ndarray], Jet],
    K: int,
    C: complex,
    x,
    x_left: float,
    panels: int = 2000,
):
    """General Riccati solution ``i*phihat'/phihat + i*K / (C*phihat**2 + phihat**2 * int phihat**-2)``.

    ``phi_hat`` maps an array of points to a jet of order >= 1. The integral runs
    from ``x_left`` to each ``x`` by composite Simpson with ``panels`` panels.
    """
    if K not in (0, 1):
        raise ValueError("K must be 0 or 1")
    if panels % 2:
        panels += 1
    x = np.asarray(x, dtype=float)
    ph = phi_hat(x)
    f0 = ph.value
    if np.any(np.abs(f0) <= WRONSKIAN_ZERO_TOL):
        raise WronskianZero("phihat vanishes")
    first = 1j * ph.deriv(1) / f0
    if K == 0:
        return first
    s = np.linspace(0.0, 1.0, panels + 1)
    xf = x.reshape(-1)
    t = x_left + np.outer(s, xf - x_left)
    vals = phi_hat(t.reshape(-1)).value.reshape(t.shape)
    if np.any(np.abs(vals) <= WRONSKIAN_ZERO_TOL):
        raise WronskianZero("phihat vanishes along the quadrature path")
    integrand = vals**-2
    w = np.ones(panels + 1)
    w[1:-1:2] = 4.0
    w[2:-1:2] = 2.0
    h = (xf - x_left) / panels
    integral = (h / 3.0) * np.sum(w[:, None] * integrand, axis=0)
    denom = (C + integral.reshape(x.shape)) * f0**2
    if np.any(np.abs(denom) <= WRONSKIAN_ZERO_TOL):
        raise QuadratureUnderflow("Riccati denominator underflows")
    return first + 1j * K / denom
