"""Solve the hard-material layer problem and look at what comes out.

The layer temperature obeys phi'' = phi^-4 with phi'(0) = 0 and phi' -> 1
far away. The only number the outer thermal model needs from it is the
coupling constant N, which closes the relation between approach velocity
and weld-plane gradient.

    python3 demos/inner_layer.py [out_dir]
"""
import sys
from pathlib import Path

import numpy as np

from weldtherm.inner import solve_inner_bvp, squeeze_profile
from weldtherm.io import write_csv

out = Path(sys.argv[1] if len(sys.argv) > 1 else "out/inner")
out.mkdir(parents=True, exist_ok=True)

sol = solve_inner_bvp()
print(f"wall value phi(0)        = {sol.phi0:.12f}  (closed form (2/3)^(1/3) = {(2 / 3) ** (1 / 3):.12f})")
print(f"coupling constant N      = {sol.N:.9f}")
print(f"first-integral drift     = {sol.first_integral_drift:.2e}")
print(f"far-field offset c_inf   = {sol.c_inf:.6f}  (phi ~ eta + c_inf)")

# N should not care where the far field is imposed
for eta_max in (30.0, 60.0, 120.0):
    print(f"  eta_max = {eta_max:5.0f}: N = {solve_inner_bvp(eta_max=eta_max).N:.9f}")

# the squeeze-flow weight w* carries the same information: its integral is N
eta, w = squeeze_profile(sol)
print(f"w*(0) = {w[0]:.6f}, w* falls to {w[-1] / w[0]:.1e} of that by eta = {eta[-1]:.0f}")

write_csv(out / "inner_profile.csv", ("eta", "phi", "dphi"), (sol.eta, sol.phi, sol.dphi))
write_csv(out / "squeeze_weight.csv", ("eta", "w"), (eta, w))
print(f"profiles written to {out}/")
print(f"phi(eta) - eta at the far end: {sol.phi[-1] - sol.eta[-1]:.6f}")
assert np.all(np.diff(sol.phi) > 0)
