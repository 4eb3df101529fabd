"""Large-time scattering: the movers settle onto shifted profiles.

For compact data the interaction region empties out along the light cone, and

    u(x, t) -> u0(x - t) + G1(x - t),    v(x, t) -> v0(x + t) + G2(x + t),

with G1(y) = -i int_0^inf N1 along the characteristic through y.  The solver
accumulates those integrals exactly along lattice characteristics, so the
profiles fall out of the run, together with a rigorous bound on the part of
the integral beyond the simulated horizon.
"""

import numpy as np

from dirac1d import (Grid, ModelParams, Scheme, compute_profile, make_initial_data,
                     residual, run, sup_tail_bound, tail_bound)

SHAPE = {"u_center": 0.0, "u_width": 1.0, "v_center": 1.0, "v_width": 1.0}

grid = Grid.from_domain(-12.0, 12.0, 1 / 128, 8.0)
data = make_initial_data("gaussian", SHAPE, grid)
m = ModelParams.thirring()
traj = run(data, grid, m, Scheme(), [0.0, 1.0, 2.0, 4.0, 8.0])

p_u = compute_profile(traj, "u")
p_v = compute_profile(traj, "v")
print(f"profile norms:  |G1| = {p_u.l2_norm(grid.h):.6f}   "
      f"|G2| = {p_v.l2_norm(grid.h):.6f}")
print(f"truncation-tail certificates: {p_u.tail_certificate:.2e} (u), "
      f"{p_v.tail_certificate:.2e} (v)")

j = np.argmax(np.abs(p_u.values))
print(f"G1 peaks at y = {p_u.y_grid[j]:+.3f} with |G1| = {abs(p_u.values[j]):.4f}")

print("\nresidual against the settled profiles:")
print(f"  {'t':>4}  {'l2_u':>9}  {'sup_u':>9}  {'tail bound':>10}  {'sup bound':>9}")
for t in (1.0, 2.0, 4.0):
    r = residual(traj, t, p_u, p_v)
    tb = tail_bound(data, m, t, "u")
    sb = sup_tail_bound(data, m, t, -5.0, "u")
    print(f"  {t:4.1f}  {r.l2_u:9.2e}  {r.sup_u:9.2e}  {np.sqrt(tb):10.2e}  {sb:9.2e}")
print("the interaction dies off super-Gaussianly fast: by t = 4 the movers")
print("have separated and only the frozen profiles remain")
