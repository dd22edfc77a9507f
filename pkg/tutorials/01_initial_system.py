"""The hyperbolic Dirac potential and its exact bound states.

The initial system has V(x) = -lam sech x + mu tanh x. For each integer n
with 0 <= n < lam - 1/2 there is a bound state whose first component is a
terminating hypergeometric polynomial times decaying envelopes.
"""

# %%
import numpy as np

from susydirac import diracmodel as dm
from susydirac import jetcalc as jc
from susydirac import verifier as vf
from susydirac.diracmodel import ModeIndex, SystemParams

p = SystemParams(3, 10)
x = np.linspace(-8, 8, 1601)
print(f"lambda={p.lam}, mu={p.mu}: regular states n = 0..{p.max_regular_n}")

# %% wave numbers and factorization energies are exact rationals
for n in range(p.max_regular_n + 1):
    ky = dm.ky_mode(p, ModeIndex(n))
    e = dm.factorization_energy_exact(p.lam, p.mu, n)
    print(f"n={n}  ky={ky:.6f}  energy={e}")

# %% densities: state n has n interior minima
xj = jc.jet_variable(x, 0)
for n in range(p.max_regular_n + 1):
    d = vf.normalize_density(x, np.abs(dm.psi1_bound(xj, p, n).value) ** 2)
    inner = (d[1:-1] < d[:-2]) & (d[1:-1] < d[2:])
    print(f"n={n}  peak density {d.max():.4f}  minima at {np.round(x[1:-1][inner], 3)}")

# %% each state solves the second-order equation to roundoff
w = lambda g: dm.potential_v(g, p) ** 2 + 1j * dm.potential_v_jet(jc.jet_variable(g, 1), p).deriv(1)
for n in range(p.max_regular_n + 1):
    rep = vf.schrodinger_residual(
        lambda g: dm.psi1_bound(jc.jet_variable(g, 2), p, n), w, dm.ky_mode(p, ModeIndex(n)), x
    )
    print(f"n={n}  max relative residual {rep.max_rel:.2e}")

# %% the zero mode has unit modulus everywhere; it drives the reality test
z = dm.psi1_zero_mode(xj, p).value
print(f"zero mode: max ||psi|-1| = {np.max(np.abs(np.abs(z) - 1)):.1e}")
