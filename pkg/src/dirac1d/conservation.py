"""Numerical certification of the conservation identities.

Three checks:

* global charge conservation on the padded line (the flux vanishes at the
  array edges, so Q(t) = h * sum(|u|^2 + |v|^2) should be constant up to the
  scheme's O(h^2) error);
* the characteristic-triangle balance law: interior charge at time tau plus
  twice the outflow through the two slanted sides equals the charge on the
  base segment;
* the pointwise exponential envelope |u(x,t)|^2 <= exp(8|beta| C0) |u0(x-t)|^2
  (and the v analogue), with C0 taken as the exact initial charge of the run.

All spatial and slanted-side integrals use the trapezoid rule on the lattice
nodes the characteristics actually pass through (unit CFL makes those exact
node sequences).
"""

from __future__ import annotations

from dataclasses import dataclass, asdict

import numpy as np

from .fields import TriangleRegion, charge
from .solver import Trajectory, shift_left, shift_right


@dataclass(frozen=True)
class BalanceReport:
    """Terms of the triangle balance law; defect = interior + fluxes - initial."""

    region: TriangleRegion
    tau: float
    interior_charge: float
    right_flux: float
    left_flux: float
    initial_charge: float
    defect: float

    def as_dict(self) -> dict:
        d = asdict(self)
        d["region"] = {"a": self.region.a, "b": self.region.b, "t0": self.region.t0}
        return d


def total_charge_drift(traj: Trajectory) -> float:
    """Max over recorded snapshots of |Q(t) - Q(0)| / max(Q(0), 1e-300)."""
    if not traj.times:
        raise ValueError("trajectory has no recorded snapshots")
    q0 = charge(traj.initial)
    worst = 0.0
    for t in traj.times:
        q = charge(traj.snapshots[t])
        worst = max(worst, abs(q - q0))
    return worst / max(q0, 1e-300)


def _segment_trapz(values: np.ndarray, h: float) -> float:
    """Trapezoid rule along a lattice-aligned segment (0 for a single node)."""
    if len(values) < 2:
        return 0.0
    return float(np.trapezoid(values, dx=h))


def triangle_balance(traj: Trajectory, region: TriangleRegion, tau: float) -> BalanceReport:
    """Evaluate all four terms of the balance law on a characteristic triangle.

    Requires a trajectory recorded with record_all_moduli=True, with the
    triangle corners on lattice nodes, t0 <= tau <= apex time, and the whole
    region inside the recorded steps.  The defect is mathematically zero and
    numerically O(h^2).
    """
    if traj.moduli is None:
        raise ValueError("triangle_balance needs a trajectory run with record_all_moduli=True")
    if traj.scheme.kind == "oracle4":
        raise ValueError("triangle_balance expects a unit-step trajectory, not oracle4")
    grid = traj.grid
    h = grid.h
    if not region.t0 - 1e-12 <= tau <= region.apex_t + 1e-12:
        raise ValueError(f"tau = {tau} outside [t0, apex] = [{region.t0}, {region.apex_t}]")

    k0 = grid.step_of(region.t0)
    kt = grid.step_of(tau)
    ja = grid.index_of(region.a)
    jb = grid.index_of(region.b)
    if kt >= len(traj.moduli):
        raise ValueError("triangle extends past the recorded steps")

    mu0, mv0 = traj.moduli[k0]
    initial = _segment_trapz(mu0[ja:jb + 1] + mv0[ja:jb + 1], h)

    # interior at time tau: x in [a - t0 + tau, b + t0 - tau]
    off = kt - k0
    mu_t, mv_t = traj.moduli[kt]
    lo, hi = ja + off, jb - off
    interior = _segment_trapz(mu_t[lo:hi + 1] + mv_t[lo:hi + 1], h)

    # slanted sides: right edge x = b + t0 - s carries 2|u|^2 outflow,
    # left edge x = a - t0 + s carries 2|v|^2 outflow, s in [t0, tau]
    right_vals = np.array([traj.moduli[k][0][jb - (k - k0)] for k in range(k0, kt + 1)])
    left_vals = np.array([traj.moduli[k][1][ja + (k - k0)] for k in range(k0, kt + 1)])
    right = 2.0 * _segment_trapz(right_vals, h)
    left = 2.0 * _segment_trapz(left_vals, h)

    defect = interior + right + left - initial
    return BalanceReport(region=region, tau=tau, interior_charge=interior,
                         right_flux=right, left_flux=left,
                         initial_charge=initial, defect=defect)


def light_cone_balance(traj: Trajectory, x0: float, t0: float) -> BalanceReport:
    """Special case on the backward light cone of (x0, t0).

    The triangle degenerates at the apex, so the whole initial charge on
    [x0 - t0, x0 + t0] leaves through the two characteristic sides.
    """
    region = TriangleRegion(a=x0 - t0, b=x0 + t0, t0=0.0)
    return triangle_balance(traj, region, tau=t0)


def check_pointwise_bound(traj: Trajectory, c0: float | None = None) -> float:
    """Worst violation of the exponential pointwise envelope over all snapshots.

    Returns max over recorded snapshots and nodes of
    |u(x,t)|^2 - exp(8|beta| c0) |u0(x-t)|^2 and the mirrored v expression;
    x -+ t land on exact lattice nodes.  A nonpositive result means the bound
    holds everywhere.  c0 defaults to the exact initial charge of the run.
    """
    if c0 is None:
        c0 = traj.data.c0
    factor = float(np.exp(8.0 * abs(traj.params.beta) * c0))
    mu0 = np.abs(traj.data.u0) ** 2
    mv0 = np.abs(traj.data.v0) ** 2
    worst = -np.inf
    for t in traj.times:
        k = traj.grid.step_of(t)
        snap = traj.snapshots[t]
        vu = np.abs(snap.u) ** 2 - factor * shift_right(mu0, k)
        vv = np.abs(snap.v) ** 2 - factor * shift_left(mv0, k)
        worst = max(worst, float(np.max(vu)), float(np.max(vv)))
    return worst
