"""Hard-material transient for the anchor case, from cold start to steady state.

A workpiece of length 0.018 m starts at 300 K. Its weld plane is held at
the melting temperature while material is extruded at speed V = M / G.
The script follows the approach velocity from its short-time square-root
law to the steady speed, then prints a few temperature snapshots.

    python3 demos/hard_anchor.py [out_dir]
"""
import math
import sys
from pathlib import Path

import numpy as np

from weldtherm.config import load_config
from weldtherm.core import compute_scales
from weldtherm.hard import HardRunConfig, hard_run, hard_short_time, hard_steady
from weldtherm.io import write_csv

here = Path(__file__).resolve().parent
cfg = load_config(here / "configs" / "hard_anchor.cfg")
m, p = cfg.material, cfg.process
out = Path(sys.argv[1] if len(sys.argv) > 1 else "out/hard")
out.mkdir(parents=True, exist_ok=True)

scales = compute_scales(m, p, 8.123)
steady = hard_steady(m, p, p.M)
print(f"D = {m.diffusivity:.3e} m^2/s, M = {p.M} K/s")
print(f"long-workpiece steady length l_inf = {scales.l_inf * 1e3:.3f} mm, time t_inf = {scales.t_inf:.1f} s")
print(f"finite workpiece (l = {p.l * 1e3:.0f} mm): V_inf = {steady.V_inf * 1e3:.4f} mm/s, "
      f"l_inf = {steady.l_inf * 1e3:.3f} mm")

t_inf = scales.t_inf
snaps = tuple(f * t_inf for f in (0.01, 0.1, 0.5, 1.0, 3.0, 10.0))
run = hard_run(HardRunConfig(cfg.solver.grid, t_inf / 500, 10 * t_inf, snapshot_times=snaps), m, p)

print("\n   t / t_inf    V / V_inf   short-time law / V_inf")
dT = m.T_m - p.T_e
for frac in (0.01, 0.05, 0.1, 0.5, 1, 2, 5, 10):
    i = int(np.argmin(np.abs(run.t - frac * t_inf)))
    law = hard_short_time(run.t[i], 0.0, m, p, p.M)[1]
    print(f"{run.t[i] / t_inf:12.3f} {run.V[i] / steady.V_inf:12.4f} {law / steady.V_inf:14.4f}")

y = cfg.solver.grid.y
print("\nsnapshot   T at y = l/4, l/2 (K)   max |T - steady| (K)")
for s in run.snapshots:
    gap = np.abs(s.T - steady.temperature(y)).max()
    print(f"{s.t / t_inf:7.2f} t_inf  {np.interp(p.l / 4, y, s.T):8.1f} {np.interp(p.l / 2, y, s.T):8.1f}"
          f"   {gap:10.3g}")
    write_csv(out / f"profile_{s.t / t_inf:g}t_inf.csv", ("y", "T"), (y, s.T))

write_csv(out / "series.csv", ("t", "V", "G", "upset"), (run.t, run.V, run.G, run.upset))
print(f"\nupset after 10 t_inf: {run.upset[-1] * 1e3:.3f} mm; worst |VG - M|/M = {run.nonlocal_residual.max():.1e}")
print(f"wrote {out}/")
assert math.isclose(run.V[-1], steady.V_inf, rel_tol=1e-3)
