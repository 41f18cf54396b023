"""Soft-material heating, stage by stage.

With an Arrhenius-type viscosity the weld plane is not pinned at melting.
Its temperature T_c is set by a nonlinear flux condition. Early on the
flux is almost constant and the response is a similarity solution. Next
comes a parameter-free rescaled problem. Finally the full model settles
to a steady T_inf well below melting. This script shows each stage next
to the full transient.

    python3 demos/soft_stages.py [out_dir]
"""
import logging
import math
import sys
from pathlib import Path

import numpy as np

from weldtherm.config import load_config
from weldtherm.core import Grid1D
from weldtherm.io import write_csv
from weldtherm.soft import (
    SoftRunConfig,
    soft_nondimensionalize,
    soft_run,
    soft_steady,
    stage_i_profile,
    stage_ii_scales,
    stage_ii_solve,
    stage_iii_bc,
)
from weldtherm.verification import stage_chain

logging.getLogger("weldtherm.soft").setLevel(logging.ERROR)
here = Path(__file__).resolve().parent
cfg = load_config(here / "configs" / "soft_moderate.cfg")
m, p, N = cfg.material, cfg.process, cfg.solver.N
out = Path(sys.argv[1] if len(sys.argv) > 1 else "out/soft")
out.mkdir(parents=True, exist_ok=True)

# steady state first: it sets the scales for everything else
steady = soft_steady(m, p, N)
rep = soft_nondimensionalize(m, p, steady)
print(f"T_inf = {steady.T_inf:.2f} K (T_m = {m.T_m:.0f} K), V_inf = {steady.V_inf * 1e3:.3f} mm/s, "
      f"l_inf = {steady.l_inf * 1e3:.3f} mm")
print(f"predicted wander of T_c: T_inf^2/T_a = {rep.centre_variation:.1f} K "
      f"({rep.variation_vs_rise:.2f} of the rise); effective Dirichlet: {rep.effective_dirichlet}")

# stages (i) and (ii) are over in nanoseconds for this material
sc = stage_ii_scales(m, p)
print(f"\nstage (ii) scales: time {sc.time:.3e} s, length {sc.length:.3e} m, temperature {sc.temperature:.2f} K")
s2 = stage_ii_solve(1.0, n=401, n_steps=2000)
print("  tau      varphi(0)   stage (i) 2 sqrt(tau/pi)")
for tau in (1e-3, 1e-2, 0.1, 1.0):
    i = int(np.searchsorted(s2.tau, tau))
    T_i, _ = stage_i_profile(sc.to_time(s2.tau[i]), 0.0, m, p)
    print(f"  {tau:<7g} {s2.varphi0[i]:10.5f} {float(sc.to_varphi(T_i)):12.5f}")

print("\noverlap checks against the full transient:")
for pair in stage_chain(m, p, N):
    if not pair.name.startswith("velocity"):
        print(f"  {pair.name:22s} max relative deviation {pair.max_rel_dev:.2%} for tau in "
              f"[{pair.tau_lo:g}, {pair.tau_hi:g}]")

# stage (iii): the reduced weld-plane gradient next to the full matching law
print("\n   T (K)   reduced G / full G")
for T in (310.0, 350.0, 500.0, 700.0):
    print(f"  {T:6.0f}   {stage_iii_bc(T, m, p) / stage_iii_bc(T, m, p, 'consistent'):.4g}")

# the full transient up to ten steady times
t_end = 10 * steady.t_inf
run = soft_run(SoftRunConfig(Grid1D(cfg.solver.grid.n, p.l), t_end / 2000, t_end, N,
                             snapshot_times=(0.01 * t_end, 0.1 * t_end, t_end)), m, p)
print("\n t / t_inf    T_c (K)   V / V_inf")
for frac in (0.01, 0.1, 0.3, 1.0, 3.0, 10.0):
    i = int(np.argmin(np.abs(run.t - frac * steady.t_inf)))
    print(f"{run.t[i] / steady.t_inf:10.2f} {run.T_c[i]:10.2f} {run.V[i] / steady.V_inf:10.4f}")
print(f"worst boundary closure residual {run.closure_residual.max():.1e}")

y = run.grid.y
for s in run.snapshots:
    write_csv(out / f"profile_{s.t / steady.t_inf:g}t_inf.csv", ("y", "T"), (y, s.T))
write_csv(out / "series.csv", ("t", "T_c", "V", "G"), (run.t, run.T_c, run.V, run.G))
write_csv(out / "stage_ii.csv", ("tau", "varphi0"), (s2.tau, s2.varphi0))
print(f"wrote {out}/")
assert math.isclose(run.T_c[-1], steady.T_inf, rel_tol=1e-3)
