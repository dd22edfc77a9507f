"""
Truncated Taylor ("jet") arithmetic for complex functions of one real variable.

A :class:`Jet` of order ``K`` carries the value and the first ``K`` derivatives
of a function at an expansion point::

    J.derivs = [f(x0), f'(x0), f''(x0), ..., f^(K)(x0)]

The stored quantities are derivative values, not Taylor coefficients. The
convolution kernels below work on Taylor coefficients ``f^(k)/k!`` and convert
on the way in and out.

Every jet may be *batched*: ``derivs`` has shape ``(K+1,) + batch_shape`` so a
whole evaluation grid is propagated at once. ``jet_variable(np.linspace(...), K)``
is the usual entry point.

    >>> x = jet_variable(1.0, 3)
    >>> (x * x).derivs.real
    array([1., 2., 2., 0.])

The terminating Gauss hypergeometric evaluator :func:`hyp2f1_terminating` also
lives here, since it is a polynomial in jet arithmetic.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import factorial

import numpy as np

from .errors import BranchCutError, DivisionByZeroJet, InvalidC, NonTerminatingSeries

__all__ = [
    "Jet",
    "HypergeometricParams",
    "jet_variable",
    "jet_constant",
    "jet_arith",
    "jet_elementary",
    "jet_pow_complex",
    "hyp2f1_terminating",
    "hyp2f1_closed_form",
    "snap_nonpositive_integer",
    "hyp2f1_jet",
    "jet_compose",
]

SNAP_TOL = 1e-9
C_POLE_TOL = 1e-12
DIV_ZERO_TOL = 1e-300


def _factorials(order, ndim):
    f = np.array([float(factorial(k)) for k in range(order + 1)])
    return f.reshape((order + 1,) + (1,) * ndim)


class Jet:
    """Value and derivatives ``d_0 .. d_order`` of a complex function at a point."""

    __slots__ = ("derivs",)
    # keep ndarray operands from broadcasting over Jet objects
    __array_ufunc__ = None

    def __init__(self, derivs):
        d = np.array(derivs, dtype=complex)
        if d.ndim == 0:
            d = d.reshape(1)
        self.derivs = d

    @classmethod
    def from_coeffs(cls, coeffs):
        c = np.asarray(coeffs, dtype=complex)
        return cls(c * _factorials(c.shape[0] - 1, c.ndim - 1))

    @property
    def order(self) -> int:
        return self.derivs.shape[0] - 1

    @property
    def batch_shape(self):
        return self.derivs.shape[1:]

    @property
    def coeffs(self) -> np.ndarray:
        return self.derivs / _factorials(self.order, self.derivs.ndim - 1)

    @property
    def value(self):
        return self.derivs[0]

    def deriv(self, k: int):
        return self.derivs[k]

    def shift(self, k: int) -> Jet:
        """Jet of the ``k``-th derivative (order drops by ``k``)."""
        if k > self.order:
            raise ValueError(f"cannot shift a jet of order {self.order} by {k}")
        return Jet(self.derivs[k:])

    def truncate(self, order: int) -> Jet:
        return Jet(self.derivs[: order + 1])

    def __getitem__(self, idx):
        """Index into the batch dimensions."""
        if not isinstance(idx, tuple):
            idx = (idx,)
        return Jet(self.derivs[(slice(None),) + idx])

    def __repr__(self):
        return f"Jet(order={self.order}, derivs={self.derivs!r})"

    # arithmetic -----------------------------------------------------------
    def __add__(self, other):
        return jet_arith("add", self, other)

    def __radd__(self, other):
        return jet_arith("add", other, self)

    def __sub__(self, other):
        return jet_arith("sub", self, other)

    def __rsub__(self, other):
        return jet_arith("sub", other, self)

    def __mul__(self, other):
        return jet_arith("mul", self, other)

    def __rmul__(self, other):
        return jet_arith("mul", other, self)

    def __truediv__(self, other):
        return jet_arith("div", self, other)

    def __rtruediv__(self, other):
        return jet_arith("div", other, self)

    def __neg__(self):
        return Jet(-self.derivs)

    def __pos__(self):
        return self

    def __pow__(self, exponent):
        if isinstance(exponent, (int, np.integer)) and exponent >= 0:
            out = jet_constant(1.0, self.order, self.batch_shape)
            base = self
            e = int(exponent)
            while e:
                if e & 1:
                    out = out * base
                base = base * base
                e >>= 1
            return out
        return jet_pow_complex(self, exponent)

    def conj(self) -> Jet:
        """Complex conjugate; valid because the expansion variable is real."""
        return Jet(np.conj(self.derivs))


def jet_variable(x0, order: int) -> Jet:
    """Identity jet ``x`` at ``x0`` (scalar or array of expansion points)."""
    if order < 0:
        raise ValueError("order must be nonnegative")
    x0 = np.asarray(x0, dtype=float)
    d = np.zeros((order + 1,) + x0.shape, dtype=complex)
    d[0] = x0
    if order >= 1:
        d[1] = 1.0
    return Jet(d)


def jet_constant(value, order: int, batch_shape=()) -> Jet:
    value = np.broadcast_to(np.asarray(value, dtype=complex), batch_shape)
    d = np.zeros((order + 1,) + tuple(batch_shape), dtype=complex)
    d[0] = value
    return Jet(d)


def _as_jet(obj, like: Jet) -> Jet:
    if isinstance(obj, Jet):
        return obj
    return jet_constant(obj, like.order, np.broadcast_shapes(np.shape(obj), like.batch_shape))


def _align(lhs: Jet, rhs: Jet):
    k = min(lhs.order, rhs.order)
    return lhs.coeffs[: k + 1], rhs.coeffs[: k + 1]


def _mul_coeffs(a, b):
    k1 = a.shape[0]
    out = np.zeros(np.broadcast_shapes(a.shape, b.shape), dtype=complex)
    for k in range(k1):
        acc = a[0] * b[k]
        for j in range(1, k + 1):
            acc = acc + a[j] * b[k - j]
        out[k] = acc
    return out


def _div_coeffs(a, b):
    k1 = a.shape[0]
    out = np.zeros(np.broadcast_shapes(a.shape, b.shape), dtype=complex)
    for k in range(k1):
        acc = a[k]
        for j in range(k):
            acc = acc - out[j] * b[k - j]
        out[k] = acc / b[0]
    return out


def jet_arith(op: str, lhs, rhs) -> Jet:
    """Combine two jets (or a jet and a constant) with ``add``/``sub``/``mul``/``div``.

    The result has the smaller of the two orders.
    """
    if not isinstance(lhs, Jet) and not isinstance(rhs, Jet):
        raise TypeError("at least one operand must be a Jet")
    if not isinstance(lhs, Jet):
        lhs = _as_jet(lhs, rhs)
    if not isinstance(rhs, Jet):
        rhs = _as_jet(rhs, lhs)
    k = min(lhs.order, rhs.order)
    if op == "add":
        return Jet(lhs.derivs[: k + 1] + rhs.derivs[: k + 1])
    if op == "sub":
        return Jet(lhs.derivs[: k + 1] - rhs.derivs[: k + 1])
    if op == "mul":
        a, b = _align(lhs, rhs)
        return Jet.from_coeffs(_mul_coeffs(a, b))
    if op == "div":
        if np.any(np.abs(rhs.derivs[0]) < DIV_ZERO_TOL):
            raise DivisionByZeroJet("jet division by a value with |d0| < 1e-300")
        a, b = _align(lhs, rhs)
        return Jet.from_coeffs(_div_coeffs(a, b))
    raise ValueError(f"unknown jet operation {op!r}")


def _check_branch(arg: Jet, fn: str):
    d0 = arg.derivs[0]
    if np.any((d0.imag == 0.0) & (d0.real <= 0.0)):
        raise BranchCutError(f"{fn} argument lies on the principal branch cut (-inf, 0]")


def _exp_coeffs(g):
    out = np.zeros_like(g)
    out[0] = np.exp(g[0])
    for k in range(1, g.shape[0]):
        acc = 0.0
        for j in range(1, k + 1):
            acc = acc + j * g[j] * out[k - j]
        out[k] = acc / k
    return out


def _log_coeffs(f):
    out = np.zeros_like(f)
    out[0] = np.log(f[0])
    for k in range(1, f.shape[0]):
        acc = f[k]
        for j in range(1, k):
            acc = acc - j * out[j] * f[k - j] / k
        out[k] = acc / f[0]
    return out


def _sinhcosh_coeffs(g):
    s = np.zeros_like(g)
    c = np.zeros_like(g)
    s[0] = np.sinh(g[0])
    c[0] = np.cosh(g[0])
    for k in range(1, g.shape[0]):
        acc_s = 0.0
        acc_c = 0.0
        for j in range(1, k + 1):
            acc_s = acc_s + j * g[j] * c[k - j]
            acc_c = acc_c + j * g[j] * s[k - j]
        s[k] = acc_s / k
        c[k] = acc_c / k
    return s, c


def _sqrt_coeffs(f):
    out = np.zeros_like(f)
    out[0] = np.sqrt(f[0])
    for k in range(1, f.shape[0]):
        acc = f[k]
        for j in range(1, k):
            acc = acc - out[j] * out[k - j]
        out[k] = acc / (2.0 * out[0])
    return out


def jet_elementary(fn: str, arg: Jet) -> Jet:
    """Apply ``exp``, ``log``, ``sinh``, ``cosh`` or ``sqrt`` to a jet.

    ``log`` and ``sqrt`` use the principal branch and raise
    :class:`BranchCutError` when the value sits on the nonpositive real axis.
    """
    g = arg.coeffs
    if fn == "exp":
        return Jet.from_coeffs(_exp_coeffs(g))
    if fn == "log":
        _check_branch(arg, "log")
        return Jet.from_coeffs(_log_coeffs(g))
    if fn == "sinh":
        return Jet.from_coeffs(_sinhcosh_coeffs(g)[0])
    if fn == "cosh":
        return Jet.from_coeffs(_sinhcosh_coeffs(g)[1])
    if fn == "sqrt":
        _check_branch(arg, "sqrt")
        return Jet.from_coeffs(_sqrt_coeffs(g))
    raise ValueError(f"unknown elementary function {fn!r}")


def exp(j: Jet) -> Jet:
    return jet_elementary("exp", j)


def log(j: Jet) -> Jet:
    return jet_elementary("log", j)


def sinh(j: Jet) -> Jet:
    return jet_elementary("sinh", j)


def cosh(j: Jet) -> Jet:
    return jet_elementary("cosh", j)


def sqrt(j: Jet) -> Jet:
    return jet_elementary("sqrt", j)


def jet_pow_complex(base: Jet, exponent) -> Jet:
    """Principal-branch power ``base**exponent = exp(exponent * log(base))``."""
    return exp(log(base) * complex(exponent))


@dataclass(frozen=True)
class HypergeometricParams:
    a: complex
    b: complex
    c: complex

    def __post_init__(self):
        for name in ("a", "b", "c"):
            object.__setattr__(self, name, complex(getattr(self, name)))
        k = snap_nonpositive_integer(self.c, C_POLE_TOL)
        if k is not None:
            raise InvalidC(f"c = {self.c} is a nonpositive integer")


def snap_nonpositive_integer(value: complex, tol: float = SNAP_TOL):
    """Return ``m >= 0`` if ``value`` is within ``tol`` of ``-m`` (both parts), else None."""
    value = complex(value)
    m = round(-value.real)
    if m < 0:
        return None
    if abs(value.real + m) <= tol and abs(value.imag) <= tol:
        return int(m)
    return None


def _termination_degree(p: HypergeometricParams):
    degs = [m for m in (snap_nonpositive_integer(p.a), snap_nonpositive_integer(p.b)) if m is not None]
    if not degs:
        return None
    # when both snap the product (a)_k (b)_k vanishes beyond the smaller degree
    return min(degs)


def _series_coefficients(p: HypergeometricParams, degree: int):
    a, b, c = p.a, p.b, p.c
    ma, mb = snap_nonpositive_integer(a), snap_nonpositive_integer(b)
    if ma is not None:
        a = complex(-ma)
    if mb is not None:
        b = complex(-mb)
    coeffs = [1.0 + 0j]
    for k in range(1, degree + 1):
        denom = (c + k - 1) * k
        if abs(c + k - 1) < C_POLE_TOL:
            raise InvalidC(f"(c)_k vanishes at k={k} before termination")
        coeffs.append(coeffs[-1] * (a + k - 1) * (b + k - 1) / denom)
    return coeffs


def hyp2f1_terminating(p: HypergeometricParams, z: Jet) -> Jet:
    """Polynomial ``2F1(a, b; c; z)`` for ``a`` or ``b`` a nonpositive integer.

    The parameter is snapped to the integer when within 1e-9; the sum is
    evaluated by Horner's rule in jet arithmetic.
    """
    degree = _termination_degree(p)
    if degree is None:
        raise NonTerminatingSeries(f"neither a={p.a} nor b={p.b} is a nonpositive integer")
    coeffs = _series_coefficients(p, degree)
    out = jet_constant(coeffs[-1], z.order, z.batch_shape)
    for ck in reversed(coeffs[:-1]):
        out = out * z + ck
    return out


def hyp2f1_closed_form(p: HypergeometricParams, z: Jet) -> Jet:
    """Terminating ``2F1`` either directly or through Euler's transformation.

    Uses ``2F1(a,b;c;z) = (1-z)**(c-a-b) 2F1(c-a, c-b; c; z)`` when only
    ``c-a`` or ``c-b`` is a nonpositive integer. ``1 - z`` must stay off the
    branch cut.
    """
    if _termination_degree(p) is not None:
        return hyp2f1_terminating(p, z)
    euler = HypergeometricParams(p.c - p.a, p.c - p.b, p.c)
    if _termination_degree(euler) is None:
        raise NonTerminatingSeries(
            f"2F1({p.a}, {p.b}; {p.c}; z) does not terminate directly or after Euler's transformation"
        )
    return jet_pow_complex(1.0 - z, p.c - p.a - p.b) * hyp2f1_terminating(euler, z)


def jet_compose(outer_derivs, inner: Jet) -> Jet:
    """Jet of ``F(inner(x))`` given ``F^(k)`` at ``inner.value`` for ``k = 0..order``."""
    K = inner.order
    outer = np.asarray(outer_derivs, dtype=complex)
    if outer.shape[0] < K + 1:
        raise ValueError("need outer derivatives up to the inner jet's order")
    h = inner.coeffs.copy()
    h[0] = 0.0
    result = np.zeros_like(h)
    result[0] = outer[0]
    power = np.zeros_like(h)
    power[0] = 1.0
    for k in range(1, K + 1):
        power = _mul_coeffs(power, h)
        result = result + (outer[k] / factorial(k)) * power
    return Jet.from_coeffs(result)


def _hyp2f1_continued(p: HypergeometricParams, z: Jet) -> Jet:
    import mpmath

    K = z.order
    a, b, c = p.a, p.b, p.c
    z0 = np.asarray(z.value, dtype=complex)
    outer = np.zeros((K + 1,) + z0.shape, dtype=complex)
    for idx in np.ndindex(z0.shape):
        zz = complex(z0[idx])
        outer[(0,) + idx] = complex(mpmath.hyp2f1(a, b, c, zz))
        if K >= 1:
            outer[(1,) + idx] = (a * b / c) * complex(mpmath.hyp2f1(a + 1, b + 1, c + 1, zz))
    # higher derivatives from the k-th derivative of the hypergeometric equation
    # z(1-z) F'' + [c - (a+b+1) z] F' - ab F = 0
    zz = z0
    for k in range(K - 1):
        lead = k * (1 - 2 * zz) + c - (a + b + 1) * zz
        tail = k * (k - 1) + k * (a + b + 1) + a * b
        outer[k + 2] = (tail * outer[k] - lead * outer[k + 1]) / (zz * (1 - zz))
    return jet_compose(outer, z)


def hyp2f1_jet(p: HypergeometricParams, z: Jet) -> Jet:
    """``2F1`` in jet arithmetic: closed form when it terminates, else analytic continuation.

    The non-terminating path evaluates the principal branch (cut on
    ``[1, inf)``) with mpmath and chains the derivative identity
    ``d/dz 2F1(a,b;c;z) = (a*b/c) 2F1(a+1,b+1;c+1;z)``. It is slow and
    intended only for probing off-lattice wave numbers.
    """
    try:
        return hyp2f1_closed_form(p, z)
    except NonTerminatingSeries:
        return _hyp2f1_continued(p, z)
