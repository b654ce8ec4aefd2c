import json

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from sklearn.base import clone

from finitetype.chentype import (
    ChenTypeClassifier,
    DegenerateIteratesError,
    IterateMatrix,
    check_iterates,
    classify,
    decide,
    eigen_fit,
    iterates_for_surface,
    matrix_fit,
    minimal_relation,
    rank_profile,
)
from finitetype.geometry import AnchorRing, Catenoid, Sphere
from finitetype.tubecalc import anchor_iterates


@pytest.fixture(scope="module")
def sphere_it():
    return iterates_for_surface(Sphere(1.0, (0.5, -1.0, 2.0)))


@pytest.fixture(scope="module")
def centered_sphere_it():
    return iterates_for_surface(Sphere(1.0))


@pytest.fixture(scope="module")
def catenoid_it():
    return iterates_for_surface(Catenoid(1.0))


@pytest.fixture(scope="module")
def anchor_it():
    return iterates_for_surface(AnchorRing(2.0, 1.0))


class TestEigenFit:
    @pytest.mark.parametrize("R", [0.5, 1.0, 2.0])
    def test_sphere(self, R):
        fit = eigen_fit(iterates_for_surface(Sphere(R, (1.0, 2.0, 3.0))))
        assert abs(fit.eigenvalue - 2) < 1e-5 and fit.residual < 1e-5
        assert np.allclose(fit.center, [1, 2, 3], atol=1e-5)

    def test_catenoid(self, catenoid_it):
        fit = eigen_fit(catenoid_it)
        assert abs(fit.eigenvalue) < 1e-5 and fit.residual < 1e-5

    def test_anchor(self, anchor_it):
        assert eigen_fit(anchor_it).residual > 0.1

    def test_constant_position(self):
        y = np.ones((10, 3))
        with pytest.raises(DegenerateIteratesError):
            eigen_fit(IterateMatrix((y, y)))


class TestRelations:
    def test_sphere(self, sphere_it):
        r1 = minimal_relation(sphere_it, 1)
        assert abs(r1.sigma[0] + 2) < 1e-5 and r1.residual < 1e-5
        assert np.allclose(r1.center, [0.5, -1.0, 2.0], atol=1e-5)
        assert minimal_relation(sphere_it, 2).residual < 1e-5

    def test_sigma_matches_eigenvalue(self, sphere_it):
        assert abs(minimal_relation(sphere_it, 1).sigma[0] + eigen_fit(sphere_it).eigenvalue) < 1e-6

    def test_anchor_stays_away_from_zero(self, anchor_it):
        res = [minimal_relation(anchor_it, k).residual for k in (1, 2, 3)]
        assert min(res) >= 0.05

    def test_monotone_in_k(self, anchor_it):
        res = [minimal_relation(anchor_it, k).residual for k in (1, 2, 3)]
        assert all(b <= a + 1e-6 for a, b in zip(res, res[1:]))

    def test_exact_anchor_relation_impossible(self):
        # exact iterates of x1 sampled densely: no order-3 relation fits
        seq = anchor_iterates(3)
        rng = np.random.default_rng(0)
        t, p = rng.uniform(-1.3, 1.3, 400), rng.uniform(0, 6.28, 400)
        cols = [np.stack([e.evaluate(t, p, 2.0, 1.0), np.zeros_like(t), np.zeros_like(t)], -1) for e in seq]
        cols = [c + np.array([[0.0, 1.0, 0.0]]) * rng.normal(size=(400, 1)) * (k == 0) for k, c in enumerate(cols)]
        assert minimal_relation(IterateMatrix(tuple(cols), source="exact"), 3).residual > 1e-3

    def test_bad_k(self, sphere_it):
        with pytest.raises(ValueError):
            minimal_relation(sphere_it, 4)


class TestRank:
    def test_sphere_saturates(self, sphere_it, centered_sphere_it):
        for it in (sphere_it, centered_sphere_it):
            prof = rank_profile(it, threshold=1e-4)
            assert prof.affine_ranks == [2, 2, 2, 2]

    def test_catenoid_saturates(self, catenoid_it):
        prof = rank_profile(catenoid_it, threshold=1e-4)
        assert prof.affine_ranks == [2, 2, 2, 2] and prof.null_columns == [1, 2, 3]

    def test_anchor_grows(self, anchor_it):
        prof = rank_profile(anchor_it, threshold=1e-4)
        assert prof.ranks == [1, 2, 3, 4] and prof.growing

    def test_exact_anchor_grows_to_ten(self):
        seq = anchor_iterates(10)
        t = np.linspace(-1.3, 1.3, 300)
        cols = [np.stack([e.evaluate(t, 0.0 * t, 2.0, 1.0), 0 * t, 0 * t], -1) for e in seq]
        prof = rank_profile(IterateMatrix(tuple(cols), source="exact"), threshold=1e-13)
        assert prof.ranks == list(range(1, 12))

    def test_raw_values_reported(self, anchor_it):
        js = rank_profile(anchor_it).to_json()
        assert len(js["singular_values"]) == 4 and js["threshold"] == 1e-8


class TestMatrixFit:
    def test_centered_sphere(self, centered_sphere_it):
        fit = matrix_fit(centered_sphere_it)
        assert np.abs(fit.matrix - 2 * np.eye(3)).max() < 1e-5 and fit.residual < 1e-5

    def test_off_center_sphere_breaks_relation(self, sphere_it, centered_sphere_it):
        assert matrix_fit(sphere_it).residual > 100 * matrix_fit(centered_sphere_it).residual

    def test_catenoid(self, catenoid_it):
        fit = matrix_fit(catenoid_it)
        assert np.abs(fit.matrix).max() < 1e-5 and fit.residual < 1e-5

    def test_anchor(self, anchor_it):
        assert matrix_fit(anchor_it).residual > 0.05


def rotation(q):
    q = np.asarray(q) / np.linalg.norm(q)
    a, b, c, d = q
    return np.array(
        [
            [a * a + b * b - c * c - d * d, 2 * (b * c - a * d), 2 * (b * d + a * c)],
            [2 * (b * c + a * d), a * a - b * b + c * c - d * d, 2 * (c * d - a * b)],
            [2 * (b * d - a * c), 2 * (c * d + a * b), a * a - b * b - c * c + d * d],
        ]
    )


quats = st.lists(st.floats(-1, 1), min_size=4, max_size=4).filter(lambda q: np.linalg.norm(q) > 0.3)
shifts = st.lists(st.floats(-5, 5), min_size=3, max_size=3)


class TestEquivariance:
    @given(quats, shifts)
    def test_rigid_motion(self, sphere_it, q, v):
        R, v = rotation(q), np.array(v)
        moved = IterateMatrix((sphere_it[0] @ R.T + v,) + tuple(y @ R.T for y in sphere_it.columns[1:]))
        a, b = eigen_fit(sphere_it), eigen_fit(moved)
        assert abs(a.eigenvalue - b.eigenvalue) < 1e-10
        assert abs(a.residual - b.residual) < 1e-10
        assert np.allclose(R @ a.center + v, b.center, atol=1e-9)

    @given(quats)
    def test_matrix_conjugates(self, centered_sphere_it, q):
        R = rotation(q)
        moved = IterateMatrix(tuple(y @ R.T for y in centered_sphere_it.columns))
        A, B = matrix_fit(centered_sphere_it).matrix, matrix_fit(moved).matrix
        assert np.allclose(R @ A @ R.T, B, atol=1e-8)


class TestClassify:
    def test_sphere(self):
        v = classify(Sphere(1.0))
        assert v.verdict == "finite_type_1" and abs(v.eigen.eigenvalue - 2) < 1e-5 and not v.null_type

    def test_catenoid(self):
        v = classify(Catenoid(1.0))
        assert v.verdict == "finite_type_1" and v.null_type

    def test_anchor(self):
        v = classify(AnchorRing(2.0, 1.0))
        assert v.verdict == "infinite_type_evidence"
        assert v.certificate["valid"] and v.certificate["order"] == 10

    def test_verdict_is_reproducible_from_numbers(self):
        v = classify(AnchorRing(2.0, 1.0))
        js = json.loads(v.to_text())
        th = js["thresholds"]
        assert decide(v.eigen, v.relations, js["certificate"], th["finite"], th["infinite"])[0] == js["verdict"]

    def test_no_certificate_no_infinite_verdict(self, anchor_it):
        clf = ChenTypeClassifier().fit(anchor_it)
        assert clf.predict() == "inconclusive"


class TestEstimator:
    def test_params_roundtrip(self):
        clf = ChenTypeClassifier(kmax=2, finite_tol=1e-5)
        assert clf.get_params()["kmax"] == 2
        assert clone(clf).get_params() == clf.get_params()
        clf.set_params(kmax=3)
        assert clf.kmax == 3

    def test_unfitted(self):
        from sklearn.exceptions import NotFittedError

        with pytest.raises(NotFittedError):
            ChenTypeClassifier().predict()

    def test_predict_on_new_data(self, sphere_it, anchor_it):
        clf = ChenTypeClassifier().fit(anchor_it)
        assert clf.predict(sphere_it) == "finite_type_1"

    def test_rank_tol_by_source(self, sphere_it):
        clf = ChenTypeClassifier().fit(sphere_it)
        assert clf.verdict_.thresholds["rank"] == 1e-4
        exact = IterateMatrix(sphere_it.columns, source="exact")
        assert ChenTypeClassifier().fit(exact).verdict_.thresholds["rank"] == 1e-8


class TestValidation:
    def test_shape_mismatch(self):
        with pytest.raises(ValueError):
            check_iterates([np.zeros((4, 3)), np.zeros((5, 3))])

    def test_non_finite(self):
        bad = np.zeros((4, 3))
        bad[0, 0] = np.nan
        with pytest.raises(ValueError):
            IterateMatrix((bad, bad))

    def test_csv(self, tmp_path, sphere_it):
        path = tmp_path / "it.csv"
        sphere_it.to_csv(path)
        header = path.read_text().splitlines()[0]
        assert header.startswith("sample,y0_x,y0_y,y0_z,y1_x")
