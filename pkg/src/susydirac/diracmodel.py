"""
The solvable initial system: zero-energy massless Dirac equation with the
hyperbolic potential ``V(x) = -lam*sech(x) + mu*tanh(x)``.

After separating ``exp(i*ky*y)`` the first spinor component obeys the
Schrodinger-type equation

    psi1'' + (V**2 + i*V' - ky**2) psi1 = 0

whose general solution is a superposition of two hypergeometric branches.
Every constructor returns a :class:`~susydirac.jetcalc.Jet` so derivatives
needed downstream come for free. Overall constants are dropped; densities are
normalized numerically by the verifier.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import jetcalc as jc
from .errors import ModeOutOfRange, ZeroKy
from .jetcalc import HypergeometricParams, Jet

__all__ = [
    "SystemParams",
    "ModeIndex",
    "Spinor",
    "potential_v",
    "potential_v_jet",
    "ky_mode",
    "hole_ky_mode",
    "factorization_energy",
    "factorization_energy_exact",
    "psi1_general",
    "psi1_bound",
    "psi1_lattice",
    "psi1_hole_bound",
    "psi1_zero_mode",
    "psi2_from_psi1",
    "psi2_jet",
    "assemble_spinor",
    "zero_mode_index",
]

ZERO_KY_TOL = 1e-12


@dataclass(frozen=True)
class SystemParams:
    """Potential depth ``lam``, asymptotic step ``mu`` and branch weights ``c1``, ``c2``."""

    lam: float
    mu: float
    c1: complex = 1.0
    c2: complex = 0.0

    def __post_init__(self):
        if not (math.isfinite(self.lam) and math.isfinite(self.mu)):
            raise ValueError("lam and mu must be finite")

    @property
    def max_regular_n(self) -> int:
        """Largest electron quantum number with ``n <= lam - 1/2`` (-1 if none)."""
        return math.floor(self.lam - 0.5 + 1e-12)


@dataclass(frozen=True)
class ModeIndex:
    n: int
    sign: int = 1


@dataclass(frozen=True)
class Spinor:
    up: complex
    down: complex
    ky: float

    @property
    def density(self):
        return np.abs(self.up) ** 2 + np.abs(self.down) ** 2


def potential_v(x, p: SystemParams):
    x = np.asarray(x, dtype=float)
    return -p.lam / np.cosh(x) + p.mu * np.tanh(x)


def potential_v_jet(x: Jet, p: SystemParams) -> Jet:
    ch = jc.cosh(x)
    return (p.mu * jc.sinh(x) - p.lam) / ch


def ky_mode(p: SystemParams, m: ModeIndex) -> float:
    """``±sqrt(mu**2 + (lam - n - 1/2)**2)``; negative ``n`` gives the nonregular lattice."""
    k = math.sqrt(p.mu**2 + (p.lam - m.n - 0.5) ** 2)
    return k if m.sign >= 0 else -k


def hole_ky_mode(p: SystemParams, m: ModeIndex) -> float:
    k = math.sqrt(p.mu**2 + (p.lam + m.n + 0.5) ** 2)
    return k if m.sign >= 0 else -k


def factorization_energy(p: SystemParams, m: ModeIndex) -> float:
    return -ky_mode(p, m) ** 2


def factorization_energy_exact(lam, mu, n: int) -> Fraction:
    """Factorization energy as an exact rational; ``lam`` and ``mu`` must be rational."""
    lam, mu = Fraction(lam), Fraction(mu)
    return -(mu**2 + (lam - n - Fraction(1, 2)) ** 2)


def _sqrt_ky_shift(ky: float, mu: float) -> complex:
    d = ky * ky - mu * mu
    if d >= 0:
        return complex(math.sqrt(d))
    # below the threshold: +i*sqrt(mu**2 - ky**2)
    return complex(0.0, math.sqrt(-d))


def _hyp_parameters(p: SystemParams, ky: float):
    s = _sqrt_ky_shift(ky, p.mu)
    a = -1j * p.mu + s
    b = -1j * p.mu - s
    c = 0.5 - p.lam - 1j * p.mu
    return a, b, c


def _z_of(sh: Jet) -> Jet:
    return 0.5 - 0.5j * sh


def psi1_general(x: Jet, p: SystemParams, ky: float, continuation: bool = False) -> Jet:
    """General solution ``c1*branch1 + c2*branch2`` at wave number ``ky``.

    Each present branch must terminate (possibly after Euler's transformation),
    otherwise :class:`NonTerminatingSeries` is raised. With
    ``continuation=True`` non-terminating branches fall back to the analytically
    continued 2F1 (see :func:`susydirac.jetcalc.hyp2f1_jet`).
    """
    hyp = jc.hyp2f1_jet if continuation else jc.hyp2f1_closed_form
    a, b, c = _hyp_parameters(p, ky)
    sh = jc.sinh(x)
    log_ch = jc.log(jc.cosh(x))
    z = _z_of(sh)
    out = None
    if p.c1 != 0:
        pref = jc.exp((-p.lam - 1j * p.mu) * log_ch + p.lam * jc.log(1.0 + 1j * sh))
        term = p.c1 * pref * hyp(HypergeometricParams(a, b, c), z)
        out = term
    if p.c2 != 0:
        pref = jc.exp((-p.lam + 1j * p.mu + 1.0) * log_ch + p.lam * jc.log(1.0 - 1j * sh))
        term = p.c2 * pref * hyp(HypergeometricParams(1 - a, 1 - b, 2 - c), z)
        out = term if out is None else out + term
    if out is None:
        raise ValueError("c1 and c2 cannot both vanish")
    return out


def psi1_lattice(x: Jet, p: SystemParams, n) -> Jet:
    """Closed-form ``c1`` branch at quantum number ``n`` with no range check.

    Integer ``n >= 0`` gives the bound states, ``n <= -1`` the nonregular
    lattice functions, complex ``n`` is accepted as well.
    """
    C = -p.lam - 1j * p.mu + 0.5
    A = n - p.lam - 1j * p.mu + 0.5
    B = -n + p.lam - 1j * p.mu - 0.5
    sh = jc.sinh(x)
    logs = (-p.lam - 1j * p.mu) * jc.log(jc.cosh(x)) + p.lam * jc.log(1.0 + 1j * sh)
    return jc.exp(logs) * jc.hyp2f1_closed_form(HypergeometricParams(A, B, C), _z_of(sh))


def psi1_bound(x: Jet, p: SystemParams, n: int) -> Jet:
    """Electron bound state for ``0 <= n <= lam - 1/2`` (unnormalized)."""
    if p.lam <= 0.5:
        raise ModeOutOfRange(f"electron bound states need lam > 1/2, got {p.lam}")
    if int(n) != n or n < 0 or n > p.lam - 0.5:
        raise ModeOutOfRange(f"n={n} outside 0..{p.lam - 0.5}")
    return psi1_lattice(x, p, int(n))


def psi1_hole_bound(x: Jet, p: SystemParams, n: int) -> Jet:
    """Hole bound state for ``lam < -1/2`` and ``0 <= n <= -lam - 1/2``.

    The wave number follows the hole line of the quantization rule, which is the
    electron rule under ``n -> -n-1``. The decaying solution is the ``c2``
    branch; its series terminates at degree ``n`` after Euler's transformation.
    """
    if p.lam >= -0.5:
        raise ModeOutOfRange(f"hole bound states need lam < -1/2, got {p.lam}")
    if int(n) != n or n < 0 or n > -p.lam - 0.5:
        raise ModeOutOfRange(f"n={n} outside 0..{-p.lam - 0.5}")
    ky = hole_ky_mode(p, ModeIndex(int(n)))
    return psi1_general(x, SystemParams(p.lam, p.mu, 0.0, 1.0), ky)


def zero_mode_index(p: SystemParams) -> complex:
    """Complex quantum number ``lam - i*mu - 1/2`` at which ``ky`` vanishes."""
    return p.lam - 1j * p.mu - 0.5


def psi1_zero_mode(x: Jet, p: SystemParams) -> Jet:
    """Bound-state formula at ``n = lam - i*mu - 1/2``: the 2F1 factor is 1.

    Result is ``cosh(x)**(-lam - i*mu) * (1 + i*sinh(x))**lam`` with unit modulus.
    """
    sh = jc.sinh(x)
    return jc.exp((-p.lam - 1j * p.mu) * jc.log(jc.cosh(x)) + p.lam * jc.log(1.0 + 1j * sh))


def psi2_jet(psi1: Jet, v: Jet, ky: float) -> Jet:
    """Second component ``(psi1' + i*V*psi1)/ky`` as a jet one order shorter."""
    if abs(ky) <= ZERO_KY_TOL:
        raise ZeroKy("ky = 0 decouples the system; the second component is not defined by psi1")
    return (psi1.shift(1) + 1j * v * psi1) / ky


def psi2_from_psi1(psi1: Jet, v_at_x, ky: float):
    """Value of the second component from a jet of ``psi1`` (order >= 1)."""
    if abs(ky) <= ZERO_KY_TOL:
        raise ZeroKy("ky = 0 decouples the system; the second component is not defined by psi1")
    return (psi1.deriv(1) + 1j * np.asarray(v_at_x) * psi1.value) / ky


def assemble_spinor(psi1, psi2, ky: float, y) -> Spinor:
    phase = 0.5 * np.exp(1j * ky * np.asarray(y, dtype=float))
    return Spinor(phase * (psi1 + psi2), phase * (psi1 - psi2), ky)

