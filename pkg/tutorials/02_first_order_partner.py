"""Building a real partner potential from one seed state.

A first-order transformation with seed u and target state psi produces
Phi1 = W(u, psi) / u and a new potential U = i Phi_hat' / Phi_hat, where
Phi_hat is the transformed zero mode. U is real exactly when |Phi_hat| is
constant, and that constant is the seed's wave number.
"""

# %%
import numpy as np

from susydirac import susyengine as se
from susydirac import verifier as vf
from susydirac.diracmodel import SystemParams
from susydirac.susyengine import General, Regular, TransformationSpec

p = SystemParams(5, 6)
x = np.linspace(-6, 6, 1201)

# %% seed n=1, target n=2
spec = TransformationSpec(p, (Regular(1),), Regular(2))
rep = se.reality_report(spec, x)
print(f"r1 = {rep.r1:.12f}, seed ky = {spec.functions[0].ky(p):.12f}, max deviation {rep.max_rel_dev:.1e}")

ev = se.evaluate(spec, x)
u, v = ev.u.value, ev.v.value.real
print(f"max |Im U| / max |U| = {np.max(np.abs(u.imag)) / np.max(np.abs(u)):.1e}")

# %% the partner differs from V by a single localized spike
peaks = vf.detect_peaks(x, u.real, v)
print(f"peaks: {peaks.detected} at x = {np.round(peaks.locations, 3)}")
for xi in (-6, -3, 0, 3, 6):
    i = np.argmin(np.abs(x - xi))
    print(f"x={x[i]:+.1f}  V={v[i]:+.4f}  U={u.real[i]:+.4f}")

# %% a seed off the wave-number lattice breaks reality
off = TransformationSpec(p, (General(8.0),), Regular(2))
bad = se.reality_report(off, np.linspace(-6, 6, 61))
print(f"ky=8.0: passed={bad.passed}, max deviation {bad.max_rel_dev:.3f}")
