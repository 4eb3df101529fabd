"""Grids, spinor states, model parameters and the built-in initial-data families.

The spatial lattice is uniform with unit CFL (the time step equals the space
step), so both characteristic families x - t = const and x + t = const pass
exactly through lattice nodes.  Arrays carry `pad` cells of exact zeros on each
side; with compactly supported data and pad >= n_steps this reproduces the
whole-line problem with no boundary modeling at all.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping

import numpy as np

# Values below this magnitude are treated as exact zeros when sampling
# Gaussian data, making every family effectively compactly supported.
UNDERFLOW_FLOOR = 1e-300

FAMILIES = ("gaussian", "bump", "separated", "zero")


@dataclass(frozen=True)
class ModelParams:
    """Coupling constants of the nonlinearity W = alpha|u|^2|v|^2 + beta(ub*v + u*vb)^2."""

    alpha: float
    beta: float

    @property
    def c_star(self) -> float:
        """Lipschitz envelope of the nonlinearity: |N1| <= c_star * |u| |v|^2.

        Always recomputed from (alpha, beta); never stored independently.
        """
        return abs(self.alpha) + 4.0 * abs(self.beta)

    @classmethod
    def thirring(cls) -> "ModelParams":
        return cls(alpha=1.0, beta=0.0)

    @classmethod
    def gross_neveu(cls) -> "ModelParams":
        return cls(alpha=0.0, beta=0.25)


@dataclass(frozen=True)
class Grid:
    """Uniform unit-CFL lattice.

    Attributes
    ----------
    x_min : left edge of the physical (unpadded) domain
    h : space step; also the time step
    n_cells : number of physical nodes
    n_steps : number of time steps the grid is sized for
    pad : zero cells on each side; must be >= n_steps so no signal
        reaches the array boundary during a run
    """

    x_min: float
    h: float
    n_cells: int
    n_steps: int
    pad: int

    def __post_init__(self):
        if self.h <= 0:
            raise ValueError(f"h must be positive, got {self.h}")
        if self.n_cells < 1:
            raise ValueError(f"n_cells must be >= 1, got {self.n_cells}")
        if self.n_steps < 0:
            raise ValueError(f"n_steps must be >= 0, got {self.n_steps}")
        if self.pad < self.n_steps:
            raise ValueError(
                f"pad ({self.pad}) must be >= n_steps ({self.n_steps}) so that "
                "nonzero data never reaches the array boundary"
            )

    @property
    def x_max(self) -> float:
        return self.x_min + (self.n_cells - 1) * self.h

    @property
    def n_total(self) -> int:
        return self.n_cells + 2 * self.pad

    @property
    def t_final(self) -> float:
        return self.n_steps * self.h

    def x_padded(self) -> np.ndarray:
        """Coordinates of all nodes including padding."""
        return self.x_min + (np.arange(self.n_total) - self.pad) * self.h

    def interior(self) -> slice:
        """Slice selecting the physical nodes out of a padded array."""
        return slice(self.pad, self.pad + self.n_cells)

    def index_of(self, x: float) -> int:
        """Padded-array index of the node at coordinate x.

        Raises ValueError when x is not a lattice node (to 1e-9 * h) or
        falls outside the padded array.
        """
        r = (x - self.x_min) / self.h + self.pad
        j = int(round(r))
        if abs(r - j) > 1e-9:
            raise ValueError(f"x = {x} is not a lattice node (h = {self.h})")
        if not 0 <= j < self.n_total:
            raise ValueError(f"x = {x} lies outside the padded grid")
        return j

    def step_of(self, t: float) -> int:
        """Step index of time t; t must be a multiple of h within the run."""
        r = t / self.h
        k = int(round(r))
        if abs(r - k) > 1e-9:
            raise ValueError(f"t = {t} is not a multiple of h = {self.h}")
        if not 0 <= k <= self.n_steps:
            raise ValueError(f"t = {t} outside the run horizon {self.t_final}")
        return k

    @classmethod
    def from_domain(cls, x_min: float, x_max: float, h: float, t_final: float,
                    extra_pad: int = 8) -> "Grid":
        """Build a grid covering [x_min, x_max] sized for a run of length t_final.

        (x_max - x_min) and t_final must be integer multiples of h.
        Padding is n_steps + extra_pad zero cells per side.
        """
        n_span = (x_max - x_min) / h
        if abs(n_span - round(n_span)) > 1e-9:
            raise ValueError(f"x_max - x_min = {x_max - x_min} is not a multiple of h = {h}")
        n_t = t_final / h
        if abs(n_t - round(n_t)) > 1e-9:
            raise ValueError(f"t_final = {t_final} is not a multiple of h = {h}")
        n_steps = int(round(n_t))
        return cls(x_min=x_min, h=h, n_cells=int(round(n_span)) + 1,
                   n_steps=n_steps, pad=n_steps + extra_pad)

    def refined(self, factor: int) -> "Grid":
        """Grid with `factor` times finer resolution over the same domain and horizon.

        The padded coordinate arrays of the two grids share every coarse node
        (pad scales exactly by `factor`).
        """
        return Grid(x_min=self.x_min, h=self.h / factor,
                    n_cells=factor * (self.n_cells - 1) + 1,
                    n_steps=factor * self.n_steps,
                    pad=factor * self.pad)


@dataclass
class SpinorField:
    """The pair (u, v) sampled on the padded lattice at a fixed time."""

    t: float
    u: np.ndarray
    v: np.ndarray
    grid: Grid

    def __post_init__(self):
        if self.u.shape != (self.grid.n_total,) or self.v.shape != (self.grid.n_total,):
            raise ValueError(
                f"u and v must have length n_cells + 2*pad = {self.grid.n_total}"
            )

    def copy(self) -> "SpinorField":
        return SpinorField(self.t, self.u.copy(), self.v.copy(), self.grid)


def charge(fld: SpinorField) -> float:
    """Total charge Q = h * sum(|u|^2 + |v|^2).

    Equals the trapezoid rule on the padded lattice since the endpoint
    samples are exact zeros.  Raises on non-finite samples (solver blow-up).
    """
    if not (np.all(np.isfinite(fld.u)) and np.all(np.isfinite(fld.v))):
        raise FloatingPointError("non-finite samples in spinor field: solver blow-up")
    return float(fld.grid.h * (np.sum(np.abs(fld.u) ** 2) + np.sum(np.abs(fld.v) ** 2)))


@dataclass(frozen=True)
class TriangleRegion:
    """Backward characteristic triangle with base [a, b] at time t0.

    The apex sits at ((a+b)/2, (b-a)/2 + t0).
    """

    a: float
    b: float
    t0: float = 0.0

    def __post_init__(self):
        if not self.a < self.b:
            raise ValueError(f"need a < b, got a={self.a}, b={self.b}")
        if self.t0 < 0:
            raise ValueError(f"t0 must be >= 0, got {self.t0}")

    @property
    def apex_x(self) -> float:
        return 0.5 * (self.a + self.b)

    @property
    def apex_t(self) -> float:
        return 0.5 * (self.b - self.a) + self.t0


@dataclass
class InitialData:
    """Sampled initial data (u0, v0) on a grid, with its charge budget c0.

    c0 is the trapezoid-rule charge of the samples, computed at construction;
    it is the sharpest admissible constant for every exponential bound
    downstream.
    """

    family: str
    params: dict
    grid: Grid
    u0: np.ndarray
    v0: np.ndarray
    c0: float = field(init=False)

    def __post_init__(self):
        self.c0 = float(self.grid.h * (np.sum(np.abs(self.u0) ** 2)
                                       + np.sum(np.abs(self.v0) ** 2)))


def _component_params(shape_params: Mapping, comp: str) -> tuple[float, float, float, float]:
    p = shape_params
    return (float(p.get(f"{comp}_center", 0.0)),
            float(p.get(f"{comp}_width", 1.0)),
            float(p.get(f"{comp}_amplitude", 1.0)),
            float(p.get(f"{comp}_phase", 0.0)))


def _check_shape(comp: str, width: float, amp: float):
    if width <= 0:
        raise ValueError(f"{comp}_width must be positive, got {width}")
    if not np.isfinite(amp):
        raise ValueError(f"{comp}_amplitude must be finite, got {amp}")


def _gaussian_samples(x, center, width, amp, phase):
    vals = amp * np.exp(-(((x - center) / width) ** 2)) * np.exp(1j * phase)
    vals = np.asarray(vals, dtype=complex)
    vals[np.abs(vals) < UNDERFLOW_FLOOR] = 0.0
    return vals


def _gaussian_radius(width, amp):
    """Half-width of the region where |samples| >= UNDERFLOW_FLOOR."""
    if amp == 0.0:
        return 0.0
    return width * np.sqrt(np.log(abs(amp) / UNDERFLOW_FLOOR))


def _bump_samples(x, center, width, amp, phase):
    # C^infinity bump: amp * exp(1 - 1/(1 - s^2)) on |s| < 1, exactly zero outside.
    s = (x - center) / width
    vals = np.zeros(len(x), dtype=complex)
    inside = np.abs(s) < 1.0
    with np.errstate(divide="ignore", over="ignore"):
        vals[inside] = amp * np.exp(1.0 - 1.0 / (1.0 - s[inside] ** 2)) * np.exp(1j * phase)
    return vals


def make_initial_data(family: str, shape_params: Mapping, grid: Grid) -> InitialData:
    """Sample one of the built-in initial-data families on the grid.

    Families
    --------
    zero       u0 = v0 = 0
    gaussian   Gaussian pulses for u0 and v0 (truncated at the underflow floor)
    bump       compactly supported smooth bumps
    separated  bumps with supp(u0) strictly to the right of supp(v0), so the
               right-mover and left-mover depart immediately and the evolution
               is exact free transport

    Per-component shape parameters: {u,v}_center, {u,v}_width, {u,v}_amplitude,
    {u,v}_phase.  Raises ValueError when the declared support does not fit
    inside the unpadded domain.
    """
    if family not in FAMILIES:
        raise ValueError(f"unknown family {family!r}; expected one of {FAMILIES}")
    x = grid.x_padded()
    params = dict(shape_params)

    if family == "zero":
        z = np.zeros(grid.n_total, dtype=complex)
        return InitialData(family, params, grid, z, z.copy())

    uc, uw, ua, up = _component_params(params, "u")
    vc, vw, va, vp = _component_params(params, "v")
    _check_shape("u", uw, ua)
    _check_shape("v", vw, va)

    if family == "gaussian":
        # Gaussian tails are clipped to exact zeros at the physical domain
        # edge; reject when the clipped value is not negligible there.
        for comp, c, w, amp in (("u", uc, uw, ua), ("v", vc, vw, va)):
            if amp == 0.0:
                continue
            edge = min(c - grid.x_min, grid.x_max - c)
            if edge < 0 or np.exp(-((edge / w) ** 2)) > 1e-12:
                r = _gaussian_radius(w, amp)
                raise ValueError(
                    f"{comp}0 support [{c - r:.3g}, {c + r:.3g}] is wider than the "
                    f"unpadded grid [{grid.x_min:.3g}, {grid.x_max:.3g}]; enlarge the domain"
                )
        sampler = _gaussian_samples
    else:
        for comp, c, r, amp in (("u", uc, uw, ua), ("v", vc, vw, va)):
            if amp != 0.0 and (c - r < grid.x_min or c + r > grid.x_max):
                raise ValueError(
                    f"{comp}0 support [{c - r:.3g}, {c + r:.3g}] is wider than the "
                    f"unpadded grid [{grid.x_min:.3g}, {grid.x_max:.3g}]; enlarge the domain"
                )
        sampler = _bump_samples

    u0 = sampler(x, uc, uw, ua, up)
    v0 = sampler(x, vc, vw, va, vp)
    outside = (x < grid.x_min - 1e-9 * grid.h) | (x > grid.x_max + 1e-9 * grid.h)
    u0[outside] = 0.0
    v0[outside] = 0.0

    if family == "separated":
        if not (ua == 0.0 or va == 0.0 or uc - uw >= vc + vw):
            raise ValueError(
                "separated family requires supp(u0) strictly to the right of "
                f"supp(v0); got u support [{uc - uw}, {uc + uw}] and "
                f"v support [{vc - vw}, {vc + vw}]"
            )

    return InitialData(family, params, grid, u0, v0)
