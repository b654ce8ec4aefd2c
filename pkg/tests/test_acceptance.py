"""Acceptance criteria, one test each; a PASS/FAIL line per criterion is
printed in the terminal summary (and by running this file directly)."""

import time

import numpy as np
import pytest

from finitetype.beltrami import (
    anchor_grid_convergence,
    check_gauss_map,
    check_position_identity,
    default_grid,
    laplace_beltrami,
    sample_points,
    tube_operator_crosscheck,
)
from finitetype.chentype import classify, eigen_fit, iterates_for_surface, minimal_relation
from finitetype.exact import TubeExpr
from finitetype.geometry import AnchorRing, Catenoid, Circle, Helix, Sphere, Tube, tube_form_regression
from finitetype.tubecalc import (
    AnchorExpr,
    anchor_infinite_type_certificate,
    anchor_iterate_x1,
    apply_delta3_anchor,
    d_first_closed_form,
    d_last_closed_form,
    iterate_shape,
    pole_growth_check,
    secant_power_image,
    tube_infinite_type_certificate,
    tube_iterates,
)

from support import wavy_curve

RESULTS = {}

HELIX_TUBE = Tube(Helix(1.0, 1.0), 0.5)
CIRCLE_TUBE = Tube(Circle(2.0), 0.5)


def record(n, ok, detail):
    RESULTS[n] = (bool(ok), detail)
    assert ok, detail


def admissible(surface, n=100, seed=0):
    return sample_points(surface, n, seed=seed, exclusion=0.2)


def test_criterion_01_anchor_low_iterates():
    start = time.perf_counter()
    tables = {m: anchor_iterate_x1(m)[1].as_tuple() for m in (1, 2, 3)}
    elapsed = time.perf_counter() - start
    expected = {1: ((1,), 2), 2: ((2, -3), 4), 3: ((4, -42, 45), 8)}
    ok = tables == expected and elapsed < 1.0
    record(1, ok, f"tables={tables} runtime={elapsed:.3f}s (< 1 s)")


def test_criterion_02_anchor_closed_forms():
    start = time.perf_counter()
    rows = []
    for m in range(1, 11):
        table = anchor_iterate_x1(m)[1]
        rows.append((table.d[0] == d_first_closed_form(m), table.d[-1] == d_last_closed_form(m), table.d[-1] != 0))
    cert = anchor_infinite_type_certificate(10)
    elapsed = time.perf_counter() - start
    ok = all(all(r) for r in rows) and cert.valid and elapsed < 10
    record(2, ok, f"m<=10 closed forms {sum(all(r) for r in rows)}/10, certificate valid={cert.valid}, runtime={elapsed:.2f}s")


def test_criterion_03_secant_power_identity():
    checks = []
    for k in range(1, 9):
        image = apply_delta3_anchor(AnchorExpr.term(1, cos_t=-k, cos_phi=1))
        checks.append(image == secant_power_image(k))
    first_zero = apply_delta3_anchor(AnchorExpr.term(1, cos_t=-1, cos_phi=1)).is_zero()
    record(3, all(checks) and first_zero, f"k=1..8 exact identities {sum(checks)}/8, k=1 image is zero: {first_zero}")


def test_criterion_04_pole_growth():
    reps = [pole_growth_check(m, n) for m in (1, 2, 3) for n in (1, 3, 5, 7, 9)]
    ok = all(r.leading_coefficient == -r.n * (r.n + 2) and r.remainder_pole_order <= r.n + 3 for r in reps)
    record(4, ok, f"{sum(r.passed for r in reps)}/15 cases: coefficient -n(n+2), remainder order <= n+3")


def test_criterion_05_first_iterate_and_second_coefficient():
    d1 = tube_iterates(1)[1]
    beta = TubeExpr.beta()
    k = TubeExpr.kappa()
    t_ok = d1.t_coeff == beta * TubeExpr.inv_kc(3)
    h_ok = d1.h_coeff == (2 * TubeExpr.r() * TubeExpr.cos() ** 3 * k**2 - k) * TubeExpr.inv_kc(2)
    b_ok = d1.b_coeff == 2 * TubeExpr.r() * TubeExpr.sin()
    first, second = iterate_shape(1).d, iterate_shape(2).d
    ok = t_ok and h_ok and b_ok and d1.alpha_coeff.is_zero() and second == -(3 * 5) * first
    record(5, ok, f"first iterate exact ({t_ok},{h_ok},{b_ok}); d2={second} = -(3*5)*d1 (unit display flagged as discrepancy)")


def test_criterion_06_tube_certificates():
    lines, ok = [], True
    for lam in (1, 2, 3):
        cert = tube_infinite_type_certificate(lam)
        lower = [iterate_shape(j).t_pole_order for j in range(1, lam + 1)]
        good = cert.valid and cert.leading_exponent == 4 * lam + 3 and all(e < 4 * lam + 3 for e in lower) and cert.leading_coefficient != 0
        ok &= good
        lines.append(f"lam={lam}: exp {cert.leading_exponent} > {cert.lower_exponent}, d={cert.leading_coefficient}")
    planar = tube_infinite_type_certificate(3, beta_zero=True)
    ok &= planar.mode == "anchor" and planar.valid
    record(6, ok, "; ".join(lines) + f"; beta=0 -> {planar.mode} certificate valid={planar.valid}")


def test_criterion_07_sphere_and_gauss_map():
    start = time.perf_counter()
    lams = [eigen_fit(iterates_for_surface(Sphere(R))).eigenvalue for R in (0.5, 1.0, 2.0)]
    gauss = [check_gauss_map(s, *admissible(s)).max_rel for s in (Sphere(1.0), AnchorRing(2.0, 1.0), HELIX_TUBE)]
    elapsed = time.perf_counter() - start
    ok = all(abs(x - 2) < 1e-5 for x in lams) and all(g < 1e-5 for g in gauss) and elapsed < 30
    record(7, ok, f"lambda={[round(x, 8) for x in lams]}, Gauss-map rel={[f'{g:.1e}' for g in gauss]}, runtime={elapsed:.2f}s")


def test_criterion_08_catenoid():
    cat = Catenoid(1.0)
    u, v = admissible(cat)
    lhs = laplace_beltrami(cat, cat.position, u, v, "III")
    norm = float(np.linalg.norm(lhs, axis=-1).max())
    lam = eigen_fit(iterates_for_surface(cat)).eigenvalue
    ok = norm < 1e-5 * cat.scale and abs(lam) < 1e-5
    record(8, ok, f"max |D x| = {norm:.1e} (< 1e-5 scale), lambda = {lam:.1e}")


def test_criterion_09_position_identity():
    grid = default_grid(HELIX_TUBE)
    u, v = grid.U[::4, ::4].ravel(), grid.V[::4, ::4].ravel()
    keep = np.abs(np.cos(v)) >= 0.2
    nodes = check_position_identity(HELIX_TUBE, u[keep], v[keep], tolerance=1e-4)
    tube = check_position_identity(HELIX_TUBE, *admissible(HELIX_TUBE), tolerance=1e-4)
    sphere = check_position_identity(Sphere(1.0), *admissible(Sphere(1.0)), tolerance=1e-6)
    ok = nodes.passed and tube.passed and sphere.passed
    record(
        9,
        ok,
        f"helix tube grid nodes {nodes.max_rel:.1e} ({nodes.samples} pts), random {tube.max_rel:.1e} (< 1e-4), "
        f"sphere {sphere.max_rel:.1e} (< 1e-6)",
    )


def test_criterion_10_tube_forms():
    reps = [tube_form_regression(Tube(c, 0.3)) for c in (Helix(1.0, 1.0), Circle(2.0), wavy_curve())]
    k = max(r["K"] for r in reps)
    forms = max(max(r["EFG"], r["LMN"]) for r in reps)
    record(10, k < 1e-8 and forms < 1e-8, f"K rel {k:.1e}, I/II rel {forms:.1e} (< 1e-8)")


def test_criterion_11_tube_operator_crosscheck():
    circ = tube_operator_crosscheck(CIRCLE_TUBE, lambda t, p: np.cos(p), *admissible(CIRCLE_TUBE))
    hel = tube_operator_crosscheck(HELIX_TUBE, lambda t, p: HELIX_TUBE.position(t, p)[..., 0], *admissible(HELIX_TUBE))
    ok = circ.max_rel < 1e-5 and hel.max_rel < 1e-5 and circ.samples == hel.samples == 100
    record(11, ok, f"circle {circ.max_rel:.1e}, helix {hel.max_rel:.1e} (< 1e-5, 100 points)")


def test_criterion_12_anchor_grid_vs_exact():
    conv = anchor_grid_convergence(AnchorRing(2.0, 1.0), (96, 96), 2)
    e1, e2 = conv["errors"]
    order = conv["observed_order"][1]
    record(12, e1 < 1e-5 and e2 < 1e-3 and order >= 2, f"D x1 {e1:.1e} (< 1e-5), D^2 x1 {e2:.1e} (< 1e-3), observed order {order:.2f} (>= 2)")


def test_criterion_13_classification():
    sphere = classify(Sphere(1.0))
    cat = classify(Catenoid(1.0))
    ring = classify(AnchorRing(2.0, 1.0))
    tube = classify(HELIX_TUBE)
    ratios = [a.residual / max(s.residual, 1e-300) for a, s in zip(ring.relations, sphere.relations)]
    ok = (
        sphere.verdict == "finite_type_1"
        and abs(sphere.eigen.eigenvalue - 2) < 1e-5
        and cat.verdict == "finite_type_1"
        and cat.null_type
        and ring.verdict == tube.verdict == "infinite_type_evidence"
        and ring.certificate["valid"]
        and tube.certificate["valid"]
        and all(r >= 10 for r in ratios)
    )
    record(
        13,
        ok,
        f"sphere {sphere.verdict}(lambda={sphere.eigen.eigenvalue:.6f}), catenoid {cat.verdict}(null), "
        f"anchor {ring.verdict}, helix tube {tube.verdict}, anchor/sphere residual ratios >= {min(ratios):.1e}",
    )


def summary_lines():
    return [
        f"criterion {n:2d}: {'PASS' if ok else 'FAIL'}  {detail}" for n, (ok, detail) in sorted(RESULTS.items())
    ]


if __name__ == "__main__":
    import sys

    sys.exit(pytest.main([__file__, "-q", "-p", "no:cacheprovider"]))
