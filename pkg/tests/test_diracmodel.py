import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from susydirac import diracmodel as dm
from susydirac import jetcalc as jc
from susydirac.diracmodel import ModeIndex, SystemParams
from susydirac.errors import ModeOutOfRange, NonTerminatingSeries, ZeroKy
from susydirac.verifier import dirac_system_residual, schrodinger_residual

from oracles import closed_form_n1, potential, potential_prime

X5 = np.linspace(-5, 5, 1001)
P56 = SystemParams(5, 6)


def initial_w(p):
    return lambda x: potential(x, p.lam, p.mu) ** 2 + 1j * potential_prime(x, p.lam, p.mu)


def jet_of(builder, order=2):
    return lambda x: builder(jc.jet_variable(x, order))


@pytest.mark.parametrize(
    "x, lam, mu, expected, tol",
    # sech(20) = 4.12e-9, so the asymptote is met only to lam * 4.2e-9
    [(0.0, 5, 6, -5.0, 1e-15), (20.0, 5, 6, 6.0, 5 * 4.2e-9), (-20.0, 2, 16, -16.0, 2 * 4.2e-9)],
)
def test_potential_values(x, lam, mu, expected, tol):
    assert abs(dm.potential_v(x, SystemParams(lam, mu)) - expected) < tol


def test_potential_jet_matches_array_form():
    xs = np.linspace(-4, 4, 9)
    j = dm.potential_v_jet(jc.jet_variable(xs, 1), P56)
    np.testing.assert_allclose(j.value.real, dm.potential_v(xs, P56), rtol=1e-14)
    np.testing.assert_allclose(j.deriv(1).real, potential_prime(xs, 5, 6), rtol=1e-13)


@pytest.mark.parametrize(
    "lam, mu, n, expected",
    [(5, 6, 1, math.sqrt(193) / 2), (5, 6, -1, math.sqrt(265) / 2), (9, 10, -2, 14.5)],
)
def test_ky_mode(lam, mu, n, expected):
    assert dm.ky_mode(SystemParams(lam, mu), ModeIndex(n)) == pytest.approx(expected, rel=1e-15)
    assert dm.ky_mode(SystemParams(lam, mu), ModeIndex(n, -1)) == pytest.approx(-expected, rel=1e-15)


@pytest.mark.parametrize(
    "lam, mu, n, expected",
    [(5, 6, 3, Fraction(-153, 4)), (2, 16, -3, Fraction(-1105, 4)), (9, 10, 8, Fraction(-401, 4))],
)
def test_factorization_energy(lam, mu, n, expected):
    assert dm.factorization_energy_exact(lam, mu, n) == expected
    assert dm.factorization_energy(SystemParams(lam, mu), ModeIndex(n)) == pytest.approx(float(expected), rel=1e-14)


@given(lam=st.integers(1, 12), mu=st.integers(-12, 12), data=st.data())
def test_quantization_is_exact_for_every_regular_mode(lam, mu, data):
    n = data.draw(st.integers(0, lam - 1))
    e = dm.factorization_energy_exact(lam, mu, n)
    assert e == -(Fraction(mu) ** 2 + (Fraction(lam) - n - Fraction(1, 2)) ** 2)
    assert e.denominator == 4


def test_general_solution_on_lattice_is_the_bound_state():
    xs = np.linspace(-4, 4, 20)
    x = jc.jet_variable(xs, 0)
    gen = dm.psi1_general(x, P56, math.sqrt(193) / 2).value
    bound = dm.psi1_bound(x, P56, 1).value
    ratio = gen / bound
    assert np.max(np.abs(ratio - ratio[0])) / abs(ratio[0]) < 1e-9


def test_bound_state_matches_explicit_polynomial_form():
    xs = np.linspace(-4, 4, 20)
    ratio = dm.psi1_bound(jc.jet_variable(xs, 0), P56, 1).value / closed_form_n1(xs)
    assert np.max(np.abs(ratio - ratio[0])) / abs(ratio[0]) < 1e-9


@pytest.mark.parametrize(
    "p, ky",
    [
        (P56, math.sqrt(193) / 2),
        (P56, math.sqrt(265) / 2),
        (SystemParams(5, 6, 0.0, 1.0), math.sqrt(265) / 2),
        (SystemParams(5, 6, 1.0, 0.5j), math.sqrt(313) / 2),
        (SystemParams(2, 16, 0.0, 1.0), math.sqrt(1105) / 2),
        (SystemParams(9, 10), 14.5),
    ],
)
def test_general_solution_residual(p, ky):
    rep = schrodinger_residual(jet_of(lambda x: dm.psi1_general(x, p, ky)), initial_w(p), ky, X5)
    assert rep.max_rel < 1e-8


def test_second_branch_is_finite_at_origin():
    p = SystemParams(2, 16, 0.0, 1.0)
    v = dm.psi1_general(jc.jet_variable(0.0, 0), p, math.sqrt(1105) / 2).value
    assert np.isfinite(v) and abs(v) > 0


def test_off_lattice_needs_continuation():
    with pytest.raises(NonTerminatingSeries):
        dm.psi1_general(jc.jet_variable(0.3, 2), P56, 8.0)
    j = dm.psi1_general(jc.jet_variable(np.linspace(-3, 3, 31), 2), P56, 8.0, continuation=True)
    rep = schrodinger_residual(lambda g: j, initial_w(P56), 8.0, np.linspace(-3, 3, 31))
    assert rep.max_rel < 1e-8


def decay_rates(fn):
    at = lambda t: abs(fn(jc.jet_variable(t, 0)).value)
    return math.log(at(-7.0) / at(-8.0)), math.log(at(7.0) / at(8.0))


@pytest.mark.parametrize("n", range(4))
def test_bound_states_decay(n):
    # both tails fall off like exp(-(lam - n - 1/2) |x|)
    left, right = decay_rates(lambda x: dm.psi1_bound(x, P56, n))
    assert left == pytest.approx(4.5 - n, rel=0.02)
    assert right == pytest.approx(4.5 - n, rel=0.02)


@pytest.mark.parametrize("n", [0, 1])
def test_low_bound_states_fall_by_a_million(n):
    at = lambda t: abs(dm.psi1_bound(jc.jet_variable(t, 0), P56, n).value)
    assert at(8.0) * 1e6 < at(0.0)
    assert at(-8.0) * 1e6 < at(0.0)


@pytest.mark.parametrize("n", range(3))
def test_initial_density_node_structure(n):
    p = SystemParams(3, 10)
    xs = np.linspace(-6, 6, 1201)
    d = np.abs(dm.psi1_bound(jc.jet_variable(xs, 0), p, n).value) ** 2
    d /= d.max()
    minima = np.nonzero((d[1:-1] < d[:-2]) & (d[1:-1] < d[2:]))[0] + 1
    assert len(minima) == n
    assert np.all(d[minima] < 0.02)


@pytest.mark.parametrize("n, lam", [(-1, 5), (6, 5), (0, 0.5), (1, 1.2)])
def test_bound_state_range(n, lam):
    with pytest.raises(ModeOutOfRange):
        dm.psi1_bound(jc.jet_variable(0.0, 1), SystemParams(lam, 6), n)


@pytest.mark.parametrize("lam, mu", [(5, 6), (2, 16), (9, 10), (3, 10)])
def test_zero_mode_has_unit_modulus(lam, mu):
    xs = np.linspace(-6, 6, 50)
    v = dm.psi1_zero_mode(jc.jet_variable(xs, 0), SystemParams(lam, mu)).value
    assert np.max(np.abs(np.abs(v) - 1)) < 1e-10


def test_zero_mode_solves_the_decoupled_equation():
    j = dm.psi1_zero_mode(jc.jet_variable(X5, 2), P56)
    rhs = -1j * potential(X5, 5, 6) * j.value
    assert np.max(np.abs(j.deriv(1) - rhs)) / np.max(np.abs(rhs)) < 1e-9
    rep = schrodinger_residual(lambda g: j, initial_w(P56), 0.0, X5)
    assert rep.max_rel < 1e-8


def test_zero_mode_at_origin():
    v = dm.psi1_zero_mode(jc.jet_variable(0.0, 0), SystemParams(2, 16)).value
    assert abs(v - 1) < 1e-15


def test_zero_mode_is_the_lattice_formula_at_complex_index():
    xs = np.linspace(-3, 3, 13)
    x = jc.jet_variable(xs, 1)
    direct = dm.psi1_zero_mode(x, P56)
    via = dm.psi1_lattice(x, P56, dm.zero_mode_index(P56))
    np.testing.assert_allclose(via.derivs, direct.derivs, rtol=1e-12)


def test_second_component_is_linear():
    x = jc.jet_variable(X5[::50], 2)
    psi1 = dm.psi1_bound(x, P56, 1)
    ky = dm.ky_mode(P56, ModeIndex(1))
    v = dm.potential_v(X5[::50], P56)
    np.testing.assert_allclose(dm.psi2_from_psi1(2 * psi1, v, ky), 2 * dm.psi2_from_psi1(psi1, v, ky), rtol=1e-14)


@pytest.mark.parametrize("n", [1, 2])
def test_bound_pair_solves_coupled_system(n):
    ky = dm.ky_mode(P56, ModeIndex(n))
    x = jc.jet_variable(X5, 2)
    psi1 = dm.psi1_bound(x, P56, n)
    psi2 = dm.psi2_jet(psi1, dm.potential_v_jet(x, P56), ky)
    # psi2 from the value-only helper agrees with the jet form
    np.testing.assert_allclose(dm.psi2_from_psi1(psi1, dm.potential_v(X5, P56), ky), psi2.value, rtol=1e-12)
    rep = dirac_system_residual(lambda g: psi1, lambda g: psi2, lambda g: dm.potential_v(g, P56), ky, X5)
    assert rep.max_rel < 1e-8


def test_zero_ky_rejected():
    psi1 = dm.psi1_bound(jc.jet_variable(0.0, 1), P56, 1)
    with pytest.raises(ZeroKy):
        dm.psi2_from_psi1(psi1, -5.0, 0.0)
    with pytest.raises(ZeroKy):
        dm.psi2_jet(psi1, dm.potential_v_jet(jc.jet_variable(0.0, 1), P56), 1e-13)


def test_assemble_spinor():
    s = dm.assemble_spinor(1.0, 1.0, 2.0, 0.0)
    assert (s.up, s.down) == (1.0, 0.0)
    s = dm.assemble_spinor(1.0, -1.0, 2.0, 0.0)
    assert (s.up, s.down) == (0.0, 1.0)
    ys = np.linspace(-3, 3, 7)
    s = dm.assemble_spinor(0.3 + 1j, -2 + 0.5j, 7.5, ys)
    assert np.ptp(s.density) < 1e-15


@pytest.mark.parametrize("n", range(3))
def test_hole_bound_states(n):
    p = SystemParams(-5, 6)
    ky = dm.hole_ky_mode(p, ModeIndex(n))
    assert ky == pytest.approx(dm.ky_mode(p, ModeIndex(-n - 1)))
    rep = schrodinger_residual(jet_of(lambda x: dm.psi1_hole_bound(x, p, n)), initial_w(p), ky, X5)
    assert rep.max_rel < 1e-8
    left, right = decay_rates(lambda x: dm.psi1_hole_bound(x, p, n))
    assert left == pytest.approx(4.5 - n, rel=0.02)
    assert right == pytest.approx(4.5 - n, rel=0.02)
    # a hole state of (lam, mu) is the conjugate electron state of (-lam, -mu)
    xs = np.linspace(-3, 3, 9)
    ratio = dm.psi1_hole_bound(jc.jet_variable(xs, 0), p, n).value / np.conj(
        dm.psi1_bound(jc.jet_variable(xs, 0), SystemParams(5, -6), n).value
    )
    assert np.max(np.abs(ratio - ratio[0])) < 1e-12 * abs(ratio[0])


def test_hole_range():
    with pytest.raises(ModeOutOfRange):
        dm.psi1_hole_bound(jc.jet_variable(0.0, 1), SystemParams(5, 6), 0)
    with pytest.raises(ModeOutOfRange):
        dm.psi1_hole_bound(jc.jet_variable(0.0, 1), SystemParams(-3, 6), 3)
