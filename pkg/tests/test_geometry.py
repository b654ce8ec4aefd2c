import csv
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from finitetype.geometry import (
    CSV_COLUMNS,
    AnalyticCurve,
    AnchorRing,
    Catenoid,
    Circle,
    DegenerateMetricError,
    FrenetError,
    Helix,
    Immersion,
    Sphere,
    SurfaceConfigError,
    SurfaceGrid,
    Tube,
    frenet_integrate,
    fundamental_forms,
    surface_from_config,
    tube_closed_forms,
    tube_form_regression,
)

from support import wavy_curve


class TestCurves:
    def test_helix_invariants(self):
        h = Helix(1.0, 1.0)
        (k,), (w,) = h.jets(0.0, 0)
        assert math.isclose(k, 0.5) and math.isclose(w, 0.5)

    @given(st.floats(0.0, 8.0))
    def test_helix_frame_is_orthonormal_and_right_handed(self, t):
        _, T, H, B = Helix(1.0, 0.7).frame(np.array(t))
        M = np.stack([T, H, B])
        assert np.allclose(M @ M.T, np.eye(3), atol=1e-12)
        assert np.allclose(np.cross(T, H), B, atol=1e-12)

    def test_helix_frame_obeys_frenet_by_differences(self):
        h = Helix(1.0, 0.7)
        t, d = 1.3, 1e-5
        _, T0, H0, B0 = h.frame(np.array([t - d, t + d]))
        _, T, H, B = h.frame(np.array(t))
        k, w = h.kappa, h.tau
        assert np.allclose((T0[1] - T0[0]) / (2 * d), k * H, atol=1e-8)
        assert np.allclose((H0[1] - H0[0]) / (2 * d), -k * T + w * B, atol=1e-8)
        assert np.allclose((B0[1] - B0[0]) / (2 * d), -w * H, atol=1e-8)

    def test_integrated_helix_matches_closed_form(self):
        h = Helix(1.0, 1.0)
        ts, pts, T, H, B = frenet_integrate(h, 2000)
        alpha, T_ref, H_ref, B_ref = h.frame(ts)
        assert np.abs(pts - alpha).max() < 1e-9
        assert np.abs(B - B_ref).max() < 1e-9

    def test_circle_closes(self):
        c = Circle(2.0)
        ts, pts, *_ = frenet_integrate(c, 2000)
        assert np.linalg.norm(pts[-1] - pts[0]) < 1e-10

    def test_analytic_frame_stays_orthonormal(self):
        curve = wavy_curve()
        _, T, H, B = curve.frame(np.linspace(0, 6, 50))
        M = np.stack([T, H, B], axis=1)
        assert np.allclose(M @ np.swapaxes(M, 1, 2), np.eye(3), atol=1e-12)

    def test_from_expressions(self):
        curve = AnalyticCurve.from_expressions("1 + 0.3*sin(t)", "0.2", (0.0, 3.0))
        kappa, tau = curve.jets(np.array(1.0), 2)
        assert np.allclose(kappa, [1 + 0.3 * math.sin(1), 0.3 * math.cos(1), -0.3 * math.sin(1)])
        assert np.allclose(tau, [0.2, 0.0, 0.0])

    def test_nonpositive_curvature_rejected(self):
        curve = AnalyticCurve(lambda t: np.sin(t), lambda t: 0 * t, (0.0, 4.0))
        with pytest.raises(FrenetError):
            curve.integrate()


class TestForms:
    @pytest.mark.parametrize("curve", [Helix(1.0, 1.0), Circle(2.0), wavy_curve()], ids=["helix", "circle", "wavy"])
    def test_tube_closed_forms(self, curve):
        rep = tube_form_regression(Tube(curve, 0.3))
        assert rep["max_rel"] < 1e-8

    def test_tube_forms_against_finite_difference_immersion(self, wavy_tube):
        fd = Immersion(wavy_tube.position, wavy_tube.domain, step_fraction=1e-3)
        rng = np.random.default_rng(1)
        t = rng.uniform(0.5, 5.5, 20)
        phi = rng.uniform(-1.2, 1.2, 20)
        num = fundamental_forms(fd, t, phi, orientation=1)
        ref = tube_closed_forms(wavy_tube, t, phi)
        for name in ("E", "F", "G", "L", "M", "N", "e", "f", "g", "K"):
            err = np.abs(getattr(num, name) - ref[name]).max()
            assert err < 1e-6 * (1 + np.abs(ref[name]).max()), name

    def test_sphere_curvatures(self):
        s = Sphere(2.0)
        fc = fundamental_forms(s, np.array([0.7, 1.2]), np.array([0.1, 3.0]))
        assert np.allclose(fc.K, 0.25) and np.allclose(fc.H, -0.5)
        assert np.allclose(fc.normal, (s.position([0.7, 1.2], [0.1, 3.0])) / 2)

    def test_catenoid_is_minimal(self):
        fc = fundamental_forms(Catenoid(1.0), np.linspace(0, 6, 7), np.linspace(-1, 1, 7))
        assert np.abs(fc.H).max() < 1e-14 and np.all(fc.K < 0)

    def test_anchor_ring_forms(self):
        a, r = 2.0, 1.0
        t, phi = np.array([0.3, -1.0]), np.array([0.5, 2.0])
        fc = fundamental_forms(AnchorRing(a, r), t, phi, orientation=1)
        w = a + r * np.cos(t)
        assert np.allclose(fc.E, r**2) and np.allclose(fc.G, w**2)
        assert np.allclose(fc.L, r) and np.allclose(fc.N, w * np.cos(t))
        assert np.allclose(fc.K, np.cos(t) / (r * w))

    def test_tube_outward_relation(self, helix_tube):
        t, phi = np.array([1.0, 2.0]), np.array([0.4, -0.9])
        fc = fundamental_forms(helix_tube, t, phi)
        k = helix_tube.curve.kappa
        assert np.allclose(2 * fc.H / fc.K, 1 / (k * np.cos(phi)) - 2 * helix_tube.r)

    def test_degenerate_immersion(self):
        flat = Immersion(lambda u, v: np.stack([u, u, 0 * v], -1), ((0, 1), (0, 1)))
        with pytest.raises(DegenerateMetricError):
            fundamental_forms(flat, np.array([0.5]), np.array([0.5]))


class TestGrid:
    def test_periodic_axis_omits_endpoint(self):
        g = SurfaceGrid(Sphere(), (10, 16))
        assert g.v_axis[-1] < 2 * math.pi and math.isclose(g.spacing[1], 2 * math.pi / 16)
        assert math.isclose(g.u_axis[-1], math.pi - 0.3)

    def test_csv(self, tmp_path):
        g = SurfaceGrid(AnchorRing(), (6, 8))
        path = tmp_path / "grid.csv"
        g.to_csv(path)
        with open(path) as fh:
            rows = list(csv.reader(fh))
        assert tuple(rows[0]) == CSV_COLUMNS
        assert len(rows) == 1 + 48
        assert math.isclose(float(rows[1][CSV_COLUMNS.index("K")]), g.forms.K[0, 0])


class TestDescriptions:
    def test_builtins(self):
        assert surface_from_config({"kind": "sphere", "R": 2}).R == 2
        tube = surface_from_config({"kind": "tube", "r": 0.4, "curve": {"kind": "helix", "radius": 1, "pitch": 1}})
        assert tube.kind == "tube" and tube.r == 0.4

    def test_analytic_curve_tube(self):
        tube = surface_from_config(
            {"kind": "tube", "r": 0.2, "curve": {"kind": "analytic", "kappa": "1+0.2*cos(t)", "tau": "0.3", "domain": [0, 3]}}
        )
        assert tube_form_regression(tube)["max_rel"] < 1e-8

    def test_immersion(self):
        s = surface_from_config(
            {"kind": "immersion", "x": ["sin(u)*cos(v)", "sin(u)*sin(v)", "cos(u)"], "domain": [[0.5, 2.5], [0, 6.283185307179586]], "periodic": [False, True]}
        )
        fc = fundamental_forms(s, np.array([1.0]), np.array([2.0]))
        assert abs(fc.K[0] - 1) < 1e-6

    @pytest.mark.parametrize(
        "bad",
        [{"kind": "torus"}, {"kind": "tube", "r": 0.5}, {"kind": "tube", "r": 5, "curve": {"kind": "circle", "radius": 1}}, {"kind": "anchor_ring", "a": 1, "r": 2}, [1]],
    )
    def test_invalid(self, bad):
        with pytest.raises(SurfaceConfigError):
            surface_from_config(bad)

    def test_tube_radius_condition(self):
        with pytest.raises(ValueError):
            Tube(Circle(1.0), 1.5)
