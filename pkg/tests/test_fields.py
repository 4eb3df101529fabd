"""Grid geometry, model presets, charge and the initial-data families."""

import numpy as np
import pytest

from dirac1d import Grid, ModelParams, SpinorField, TriangleRegion, charge, make_initial_data
from dirac1d.solver import init_state

# Exact charge of the reference pair u0 = exp(-x^2), v0 = exp(-(x-1)^2):
# each component integrates to sqrt(pi/2); value from the closed form.
REFERENCE_CHARGE = 2.5066282746310002
COMPONENT_CHARGE = 1.2533141373155003

GAUSSIAN_PAIR = {"u_center": 0.0, "u_width": 1.0, "v_center": 1.0, "v_width": 1.0}


class TestModelParams:
    def test_presets(self):
        th = ModelParams.thirring()
        gn = ModelParams.gross_neveu()
        assert (th.alpha, th.beta) == (1.0, 0.0)
        assert (gn.alpha, gn.beta) == (0.0, 0.25)

    def test_c_star_is_derived(self):
        assert ModelParams.thirring().c_star == 1.0
        assert ModelParams.gross_neveu().c_star == 1.0
        assert ModelParams(-2.0, 0.5).c_star == 4.0
        assert ModelParams(0.0, -0.25).c_star == 1.0


class TestGrid:
    def test_from_domain_counts(self):
        g = Grid.from_domain(-10.0, 10.0, 0.25, 2.0)
        assert g.n_cells == 81
        assert g.n_steps == 8
        assert g.pad == 16
        assert g.n_total == 81 + 32
        assert g.x_max == pytest.approx(10.0)
        assert g.t_final == pytest.approx(2.0)

    def test_x_padded_and_interior(self):
        g = Grid.from_domain(0.0, 1.0, 0.5, 1.0)
        x = g.x_padded()
        assert x[g.interior()] == pytest.approx([0.0, 0.5, 1.0])
        assert x[0] == pytest.approx(-g.pad * g.h)

    def test_index_and_step_lookup(self):
        g = Grid.from_domain(-1.0, 1.0, 0.5, 1.0)
        assert g.index_of(-1.0) == g.pad
        assert g.index_of(0.5) == g.pad + 3
        assert g.step_of(1.0) == 2
        with pytest.raises(ValueError):
            g.index_of(0.3)
        with pytest.raises(ValueError):
            g.step_of(0.25)
        with pytest.raises(ValueError):
            g.step_of(5.0)

    def test_non_multiple_domain_rejected(self):
        with pytest.raises(ValueError):
            Grid.from_domain(0.0, 1.0, 0.3, 1.0)
        with pytest.raises(ValueError):
            Grid.from_domain(0.0, 1.0, 0.5, 0.7)

    def test_pad_must_cover_run(self):
        with pytest.raises(ValueError):
            Grid(x_min=0.0, h=0.5, n_cells=3, n_steps=4, pad=3)

    def test_refined_shares_coarse_nodes(self):
        g = Grid.from_domain(-2.0, 2.0, 0.5, 1.0)
        f = g.refined(4)
        assert f.h == pytest.approx(g.h / 4)
        assert f.pad == 4 * g.pad
        np.testing.assert_allclose(f.x_padded()[::4], g.x_padded(), atol=1e-12)


class TestInitialData:
    def test_reference_charge(self):
        g = Grid.from_domain(-40.0, 40.0, 1.0 / 128.0, 1.0)
        data = make_initial_data("gaussian", GAUSSIAN_PAIR, g)
        assert data.c0 == pytest.approx(REFERENCE_CHARGE, rel=1e-12)
        u_charge = g.h * np.sum(np.abs(data.u0) ** 2)
        assert u_charge == pytest.approx(COMPONENT_CHARGE, rel=1e-12)

    def test_zero_family(self):
        g = Grid.from_domain(-1.0, 1.0, 0.5, 1.0)
        data = make_initial_data("zero", {}, g)
        assert not data.u0.any() and not data.v0.any()
        assert data.c0 == 0.0

    def test_amplitude_and_phase(self):
        g = Grid.from_domain(-20.0, 20.0, 0.25, 1.0)
        data = make_initial_data(
            "gaussian", {**GAUSSIAN_PAIR, "u_amplitude": 2.0, "u_phase": np.pi / 2}, g)
        j = g.index_of(0.0)
        assert data.u0[j] == pytest.approx(2.0j)
        assert data.v0[g.index_of(1.0)] == pytest.approx(1.0)

    def test_samples_vanish_outside_domain(self):
        g = Grid.from_domain(-20.0, 20.0, 0.25, 2.0)
        data = make_initial_data("gaussian", GAUSSIAN_PAIR, g)
        x = g.x_padded()
        outside = (x < g.x_min - 1e-9) | (x > g.x_max + 1e-9)
        assert not data.u0[outside].any()
        assert not data.v0[outside].any()

    def test_gaussian_too_wide_for_domain(self):
        g = Grid.from_domain(-2.0, 2.0, 0.25, 1.0)
        with pytest.raises(ValueError, match="support"):
            make_initial_data("gaussian", GAUSSIAN_PAIR, g)

    def test_bump_is_compact(self):
        g = Grid.from_domain(-5.0, 5.0, 0.125, 1.0)
        data = make_initial_data("bump", {"u_width": 2.0, "v_width": 2.0}, g)
        x = g.x_padded()
        assert not data.u0[np.abs(x) >= 2.0].any()
        assert data.u0[g.index_of(0.0)] == pytest.approx(1.0)

    def test_bump_support_must_fit(self):
        g = Grid.from_domain(-1.0, 1.0, 0.25, 0.5)
        with pytest.raises(ValueError, match="support"):
            make_initial_data("bump", {"u_width": 3.0}, g)

    def test_separated_order_enforced(self):
        g = Grid.from_domain(-10.0, 10.0, 0.25, 1.0)
        with pytest.raises(ValueError, match="separated"):
            make_initial_data("separated",
                              {"u_center": -3.0, "u_width": 1.0,
                               "v_center": 3.0, "v_width": 1.0}, g)
        data = make_initial_data("separated",
                                 {"u_center": 3.0, "u_width": 1.0,
                                  "v_center": -3.0, "v_width": 1.0}, g)
        assert data.u0.any() and data.v0.any()

    def test_bad_shape_params(self):
        g = Grid.from_domain(-5.0, 5.0, 0.25, 1.0)
        with pytest.raises(ValueError, match="width"):
            make_initial_data("gaussian", {"u_width": -1.0}, g)
        with pytest.raises(ValueError, match="unknown family"):
            make_initial_data("plane_wave", {}, g)


class TestSpinorField:
    def test_shape_validation(self):
        g = Grid.from_domain(-1.0, 1.0, 0.5, 1.0)
        z = np.zeros(g.n_total, dtype=complex)
        SpinorField(0.0, z, z.copy(), g)
        with pytest.raises(ValueError):
            SpinorField(0.0, z[:-1], z, g)

    def test_charge_rejects_nonfinite(self):
        g = Grid.from_domain(-20.0, 20.0, 0.25, 1.0)
        state = init_state(make_initial_data("gaussian", GAUSSIAN_PAIR, g), g)
        state.u[0] = np.nan
        with pytest.raises(FloatingPointError):
            charge(state)


class TestTriangleRegion:
    def test_apex(self):
        r = TriangleRegion(-2.0, 4.0, 1.0)
        assert r.apex_x == pytest.approx(1.0)
        assert r.apex_t == pytest.approx(4.0)

    def test_validation(self):
        with pytest.raises(ValueError):
            TriangleRegion(1.0, 1.0)
        with pytest.raises(ValueError):
            TriangleRegion(0.0, 1.0, t0=-0.5)
