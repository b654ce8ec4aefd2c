"""Finite Chen-type evidence from sampled operator iterates.

A surface of finite type k satisfies a monic relation

    y_k + s_1 y_{k-1} + ... + s_k (y_0 - c) = 0,   y_j = (Delta^J)^j x,

so every fit below carries per-component constant columns to recover ``c``
instead of pre-centering the samples.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass, field

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_array, check_is_fitted

RANK_TOL = 1e-8
# grid iterates carry stencil noise far above 1e-8 by k = 3
GRID_RANK_TOL = 1e-4
FINITE_TOL = 1e-4
INFINITE_TOL = 1e-2
NULL_TOL = 1e-6
DEFAULT_KMAX = 3


class DegenerateIteratesError(ValueError):
    """The sampled position does not vary; no relation can be fitted."""


@dataclass(frozen=True)
class IterateMatrix:
    """Columns ``y_k`` of shape (samples, 3), all on one sample set."""

    columns: tuple
    samples: tuple | None = None
    source: str = "grid"

    def __post_init__(self):
        cols = tuple(check_iterates(self.columns))
        object.__setattr__(self, "columns", cols)

    @classmethod
    def from_fields(cls, fields, samples=None, source="grid"):
        return cls(tuple(np.asarray(f, float).reshape(-1, 3) for f in fields), samples, source)

    @property
    def order(self) -> int:
        return len(self.columns) - 1

    @property
    def n_samples(self) -> int:
        return self.columns[0].shape[0]

    def __getitem__(self, k) -> np.ndarray:
        return self.columns[k]

    def prefix(self, k: int) -> IterateMatrix:
        return IterateMatrix(self.columns[: k + 1], self.samples, self.source)

    def to_csv(self, path) -> None:
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["sample"] + [f"y{k}_{ax}" for k in range(len(self.columns)) for ax in "xyz"])
            stacked = np.concatenate(self.columns, axis=1)
            for i, row in enumerate(stacked):
                w.writerow([i] + [repr(float(x)) for x in row])


def check_iterates(columns, min_columns: int = 1) -> list[np.ndarray]:
    """Validate iterate columns: finite, 2-D (samples, 3), one shared sample set."""
    cols = [check_array(np.asarray(c, float).reshape(-1, 3) if np.ndim(c) != 2 else c, dtype=float) for c in columns]
    if len(cols) < min_columns:
        raise ValueError(f"need at least {min_columns} iterate columns, got {len(cols)}")
    shape = cols[0].shape
    for k, c in enumerate(cols):
        if c.shape != shape or c.shape[1] != 3:
            raise ValueError(f"column {k} has shape {c.shape}, expected {shape} with 3 components")
    return cols


def _as_iterates(iterates) -> IterateMatrix:
    return iterates if isinstance(iterates, IterateMatrix) else IterateMatrix(tuple(iterates))


def _centered_norm(y):
    return float(np.linalg.norm(y - y.mean(axis=0)))


def _scale(y0) -> float:
    s = _centered_norm(y0)
    if s == 0:
        raise DegenerateIteratesError("y0 is constant")
    return s


def _normalizer(target, y0) -> float:
    """|target|, falling back to the spread of y0 when target vanishes (null type)."""
    scale = _scale(y0)
    t = float(np.linalg.norm(target))
    return t if t > NULL_TOL * scale else scale


def _fit_with_constants(target, regressors):
    """Solve target ~ sum_i s_i regressors[i] + b (b per component) in least squares."""
    n = target.shape[0]
    # rows are component-major: all x samples, then y, then z
    const = np.kron(np.eye(3), np.ones((n, 1)))
    design = np.hstack([r.T.reshape(-1, 1) for r in regressors] + [const])
    rhs = target.T.reshape(-1)
    sol, _, rank, _ = np.linalg.lstsq(design, rhs, rcond=None)
    resid = rhs - design @ sol
    return sol[: len(regressors)], sol[len(regressors) :], float(np.linalg.norm(resid)), rank < design.shape[1]


@dataclass
class EigenFit:
    eigenvalue: float
    center: np.ndarray | None
    residual: float

    def to_json(self):
        return {
            "lambda": self.eigenvalue,
            "c": None if self.center is None else [float(x) for x in self.center],
            "residual": self.residual,
        }


def eigen_fit(iterates) -> EigenFit:
    """Least-squares y1 = lambda (y0 - c); residual over |y1| (or |y0 - mean| if y1 vanishes)."""
    it = _as_iterates(iterates)
    if it.order < 1:
        raise ValueError("eigen_fit needs y0 and y1")
    y0, y1 = it[0], it[1]
    _scale(y0)
    (lam,), b, res, _ = _fit_with_constants(y1, [y0])
    center = -b / lam if abs(lam) > NULL_TOL else None
    return EigenFit(float(lam), center, res / _normalizer(y1, y0))


@dataclass
class RelationFit:
    k: int
    sigma: tuple
    center: np.ndarray | None
    residual: float
    rank_deficient: bool

    def to_json(self):
        return {
            "k": self.k,
            "sigma": [float(s) for s in self.sigma],
            "c": None if self.center is None else [float(x) for x in self.center],
            "residual": self.residual,
            "rank_deficient": self.rank_deficient,
        }


def minimal_relation(iterates, k: int) -> RelationFit:
    """Monic fit y_k + s_1 y_{k-1} + ... + s_k (y_0 - c) = 0, residual over |y_k|."""
    it = _as_iterates(iterates)
    if not 1 <= k <= it.order:
        raise ValueError(f"k={k} outside 1..{it.order}")
    coef, b, res, deficient = _fit_with_constants(-it[k], [it[k - i] for i in range(1, k + 1)])
    sigma = tuple(float(s) for s in coef)
    # constant term b = -s_k c
    center = -b / sigma[-1] if abs(sigma[-1]) > NULL_TOL else None
    # past a vanishing iterate, |y_k| is pure noise; measure against y0 instead
    scale = _scale(it[0])
    if any(_centered_norm(it[j]) <= NULL_TOL * scale for j in range(1, k)):
        norm = scale
    else:
        norm = _normalizer(it[k], it[0])
    return RelationFit(k, sigma, center, res / norm, bool(deficient))


@dataclass
class RankProfile:
    singular_values: list
    ranks: list
    threshold: float
    null_columns: list = field(default_factory=list)

    @property
    def affine_ranks(self) -> list:
        """Ranks counting the constant direction as well."""
        return [r + 1 for r in self.ranks]

    @property
    def growing(self) -> bool:
        return all(b > a for a, b in zip(self.ranks, self.ranks[1:]))

    def to_json(self):
        return {
            "singular_values": [[float(s) for s in sv] for sv in self.singular_values],
            "ranks": self.ranks,
            "affine_ranks": self.affine_ranks,
            "threshold": self.threshold,
            "null_columns": self.null_columns,
            "growing": self.growing,
        }


def rank_profile(iterates, threshold: float = RANK_TOL, null_tol: float = NULL_TOL) -> RankProfile:
    """Singular values of the mean-removed prefixes {y_0, ..., y_k}.

    Columns are scaled to unit norm first so that the fast growth of
    |y_k| does not swamp the threshold.  A column below ``null_tol`` times
    the spread of y_0 is zero, and so is every later one (the operator is
    linear).
    """
    it = _as_iterates(iterates)
    if it.order < 1:
        raise ValueError("rank_profile needs at least two columns")
    scale = _scale(it[0])
    cols, nulls = [], []
    for k, y in enumerate(it.columns):
        yc = (y - y.mean(axis=0)).ravel()
        n = np.linalg.norm(yc)
        if nulls or (k > 0 and n <= null_tol * scale):
            nulls.append(k)
            cols.append(np.zeros_like(yc))
        else:
            cols.append(yc / n)
    svs, ranks = [], []
    for k in range(len(cols)):
        s = np.linalg.svd(np.stack(cols[: k + 1], axis=1), compute_uv=False)
        svs.append(s)
        ranks.append(int(np.sum(s > threshold * s[0])) if s[0] > 0 else 0)
    return RankProfile(svs, ranks, threshold, nulls)


@dataclass
class MatrixFit:
    matrix: np.ndarray
    residual: float

    def to_json(self):
        return {"A": [[float(x) for x in row] for row in self.matrix], "residual": self.residual}


def matrix_fit(iterates) -> MatrixFit:
    """Least-squares y1 = A y0 on absolute coordinates (no constant term)."""
    it = _as_iterates(iterates)
    y0, y1 = it[0], it[1]
    sol, *_ = np.linalg.lstsq(y0, y1, rcond=None)
    res = float(np.linalg.norm(y1 - y0 @ sol))
    return MatrixFit(sol.T, res / _normalizer(y1, y0))


@dataclass
class TypeVerdict:
    verdict: str
    eigen: EigenFit
    relations: list
    ranks: RankProfile
    matrix: MatrixFit
    thresholds: dict
    certificate: dict | None = None
    null_type: bool = False
    notes: list = field(default_factory=list)

    @property
    def order(self) -> int | None:
        if self.verdict.startswith("finite_type_"):
            return int(self.verdict.rsplit("_", 1)[1])
        return None

    def to_json(self) -> dict:
        return {
            "verdict": self.verdict,
            "null_type": self.null_type,
            "eigen_fit": self.eigen.to_json(),
            "relation_fits": [r.to_json() for r in self.relations],
            "rank_profile": self.ranks.to_json(),
            "matrix_fit": self.matrix.to_json(),
            "thresholds": self.thresholds,
            "certificate": self.certificate,
            "notes": list(self.notes),
        }

    def to_text(self) -> str:
        return json.dumps(self.to_json(), indent=2, sort_keys=True)


def decide(eigen: EigenFit, relations: list, certificate: dict | None, finite_tol=FINITE_TOL, infinite_tol=INFINITE_TOL):
    """Verdict from stored fits and thresholds alone."""
    if eigen.residual < finite_tol:
        return "finite_type_1", abs(eigen.eigenvalue) < NULL_TOL ** 0.5
    for rel in relations:
        if rel.residual < finite_tol:
            return f"finite_type_{rel.k}", False
    if relations and all(r.residual > infinite_tol for r in relations) and certificate and certificate.get("valid"):
        return "infinite_type_evidence", False
    return "inconclusive", False


class ChenTypeClassifier(BaseEstimator):
    """Estimator wrapper: ``fit`` takes an IterateMatrix (or list of columns).

    Parameters mirror the verdict thresholds; ``certificate`` is an exact
    infinite-type certificate (JSON dict) to attach, if any.  ``rank_tol=None``
    picks 1e-4 for grid iterates and 1e-8 otherwise.
    """

    def __init__(self, kmax=DEFAULT_KMAX, rank_tol=None, finite_tol=FINITE_TOL, infinite_tol=INFINITE_TOL):
        self.kmax = kmax
        self.rank_tol = rank_tol
        self.finite_tol = finite_tol
        self.infinite_tol = infinite_tol

    def fit(self, X, y=None, certificate=None):
        it = _as_iterates(X)
        if it.order < 1:
            raise ValueError("need at least y0 and y1")
        kmax = min(self.kmax, it.order)
        self.eigen_ = eigen_fit(it)
        self.relations_ = [minimal_relation(it, k) for k in range(1, kmax + 1)]
        rank_tol = self.rank_tol
        if rank_tol is None:
            rank_tol = GRID_RANK_TOL if it.source == "grid" else RANK_TOL
        self.rank_profile_ = rank_profile(it.prefix(kmax), rank_tol)
        self.matrix_fit_ = matrix_fit(it)
        verdict, null = decide(self.eigen_, self.relations_, certificate, self.finite_tol, self.infinite_tol)
        self.verdict_ = TypeVerdict(
            verdict,
            self.eigen_,
            self.relations_,
            self.rank_profile_,
            self.matrix_fit_,
            {
                "finite": self.finite_tol,
                "infinite": self.infinite_tol,
                "rank": rank_tol,
                "null": NULL_TOL,
                "kmax": kmax,
            },
            certificate,
            null,
        )
        return self

    def predict(self, X=None) -> str:
        check_is_fitted(self, "verdict_")
        if X is not None:
            return self.__class__(**self.get_params()).fit(X).verdict_.verdict
        return self.verdict_.verdict


def iterates_for_surface(surface, grid_shape=None, kmax: int = DEFAULT_KMAX, form: str = "III") -> IterateMatrix:
    """Grid iterates of the position vector, restricted to the common interior."""
    from .beltrami import common_interior, default_shape, iterate_on_grid
    from .geometry.grid import SurfaceGrid

    grid = SurfaceGrid(surface, grid_shape or default_shape(surface))
    fields = iterate_on_grid(grid, grid.position, kmax, form)
    last = fields[-1]
    samples = (grid.U[last.rows, last.cols].ravel(), grid.V[last.rows, last.cols].ravel())
    return IterateMatrix.from_fields(common_interior(fields), samples=samples)


def exact_certificate(surface, mmax: int = 10, lmax: int = 3) -> dict | None:
    """Exact infinite-type certificate for tubes and anchor rings, else None."""
    from .tubecalc import anchor_infinite_type_certificate, tube_infinite_type_certificate
    from .geometry.curves import Circle

    if surface.kind == "anchor_ring":
        return anchor_infinite_type_certificate(mmax).to_json()
    if surface.kind == "tube":
        planar_circle = isinstance(surface.curve, Circle)
        return tube_infinite_type_certificate(lmax, beta_zero=planar_circle).to_json()
    return None


def classify(surface, grid_shape=None, kmax: int = DEFAULT_KMAX, mmax: int = 10, lmax: int = 3, **thresholds) -> TypeVerdict:
    it = iterates_for_surface(surface, grid_shape, kmax)
    cert = exact_certificate(surface, mmax, lmax)
    clf = ChenTypeClassifier(kmax=kmax, **thresholds).fit(it, certificate=cert)
    return clf.verdict_


__all__ = [
    "ChenTypeClassifier",
    "DegenerateIteratesError",
    "GRID_RANK_TOL",
    "EigenFit",
    "IterateMatrix",
    "MatrixFit",
    "RankProfile",
    "RelationFit",
    "TypeVerdict",
    "check_iterates",
    "classify",
    "decide",
    "eigen_fit",
    "exact_certificate",
    "iterates_for_surface",
    "matrix_fit",
    "minimal_relation",
    "rank_profile",
]
