"""Numeric Laplace-Beltrami operators of the fundamental forms I, II, III.

Sign convention: ``Delta f = -div grad f``, so the Gauss map of any surface
with K != 0 satisfies ``Delta^III n = 2 n``.  In coordinates

    Delta f = -(a11 f_uu + 2 a12 f_uv + a22 f_vv + b1 f_u + b2 f_v)

with ``a = g^{-1}`` and ``b^k = (1/sqrt|g|) d_j(sqrt|g| g^{jk})``.
"""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass

import numpy as np

from .geometry.forms import DegenerateMetricError, forms_from_partials, normal_frame
from .geometry.grid import SurfaceGrid
from .geometry.surfaces import Surface, Tube

FORMS = ("I", "II", "III")
STENCIL_ORDER = 4
MAX_GRID_ITERATES = 3

_D1 = ((-2, 1 / 12), (-1, -8 / 12), (1, 8 / 12), (2, -1 / 12))
_D2 = ((-2, -1 / 12), (-1, 16 / 12), (0, -30 / 12), (1, 16 / 12), (2, -1 / 12))


class StencilError(ValueError):
    """Stencil leaves the domain on a non-periodic axis."""


class NumericLimitError(ValueError):
    """Too many numeric operator applications; use the exact engine."""


def _metric(surface: Surface, form: str, u, v):
    fc = forms_from_partials(surface.partials(u, v), surface.orientation)
    g11, g12, g22 = fc.metric(form)
    det = g11 * g22 - g12 * g12
    return g11, g12, g22, det


def _flux_tensor(surface, form, u, v):
    g11, g12, g22, det = _metric(surface, form, u, v)
    if np.any(det <= 0):
        what = "K > 0" if form == "II" else "K != 0" if form == "III" else "a regular point"
        raise DegenerateMetricError(f"form {form} is degenerate (needs {what})")
    root = np.sqrt(det)
    # sqrt|g| g^{jk}
    return g22 / root, -g12 / root, g11 / root, root


@dataclass
class OperatorCoefficients:
    a11: np.ndarray
    a12: np.ndarray
    a22: np.ndarray
    b1: np.ndarray
    b2: np.ndarray

    def apply(self, f_u, f_v, f_uu, f_uv, f_vv):
        def bc(c, f):
            return c[(...,) + (None,) * (f.ndim - c.ndim)] * f

        return -(
            bc(self.a11, f_uu)
            + 2 * bc(self.a12, f_uv)
            + bc(self.a22, f_vv)
            + bc(self.b1, f_u)
            + bc(self.b2, f_v)
        )

    def restrict(self, sl) -> OperatorCoefficients:
        return OperatorCoefficients(*(np.asarray(c)[sl] for c in asdict(self).values()))


def operator_coefficients(surface: Surface, form: str, u, v, h: float = 1e-3) -> OperatorCoefficients:
    """Coefficients of Delta^form at (u, v); metric derivatives by 5-point differences."""
    form = form.upper()
    if form not in FORMS:
        raise ValueError(f"unknown fundamental form {form!r}")
    u, v = np.broadcast_arrays(np.asarray(u, float), np.asarray(v, float))
    p11, p12, p22, root = _flux_tensor(surface, form, u, v)
    du = [0.0, 0.0]
    dv = [0.0, 0.0]
    for k, c in _D1:
        q11, q12, _, _ = _flux_tensor(surface, form, u + k * h, v)
        du[0] = du[0] + c * q11
        du[1] = du[1] + c * q12
        _, r12, r22, _ = _flux_tensor(surface, form, u, v + k * h)
        dv[0] = dv[0] + c * r12
        dv[1] = dv[1] + c * r22
    b1 = (du[0] + dv[0]) / (h * root)
    b2 = (du[1] + dv[1]) / (h * root)
    return OperatorCoefficients(p11 / root, p12 / root, p22 / root, b1, b2)


def _derivatives(f, u, v, h):
    """5-point stencils on differences from the centre value (exact on constants)."""
    f0 = np.asarray(f(u, v), float)

    def g(a, b):
        return np.asarray(f(a, b), float) - f0

    f_u = sum(c * g(u + k * h, v) for k, c in _D1) / h
    f_v = sum(c * g(u, v + k * h) for k, c in _D1) / h
    f_uu = sum(c * g(u + k * h, v) for k, c in _D2 if k) / h**2
    f_vv = sum(c * g(u, v + k * h) for k, c in _D2 if k) / h**2
    f_uv = sum(ci * cj * g(u + i * h, v + j * h) for i, ci in _D1 for j, cj in _D1) / h**2
    return f0, f_u, f_v, f_uu, f_uv, f_vv


def laplace_beltrami(surface: Surface, f, u, v, form: str = "III", h: float = 2e-3, h_metric: float = 1e-3):
    """Delta^form f at parameter points; ``f(u, v)`` returns (...) or (..., 3)."""
    u, v = np.broadcast_arrays(np.asarray(u, float), np.asarray(v, float))
    coeffs = operator_coefficients(surface, form, u, v, h_metric)
    _, f_u, f_v, f_uu, f_uv, f_vv = _derivatives(f, u, v, h)
    return coeffs.apply(f_u, f_v, f_uu, f_uv, f_vv)


def gradient(surface: Surface, f, u, v, form: str = "III", h: float = 2e-3, along: str = "x"):
    """grad^form f = sum g^{ij} f_j x_i, a tangent vector in E^3.

    ``along="n"`` uses the Gauss-map tangents n_i instead of x_i; for form III
    that is the gradient on the spherical image, the one entering the
    Delta^III x identity.
    """
    u, v = np.broadcast_arrays(np.asarray(u, float), np.asarray(v, float))
    p = surface.partials(u, v)
    if along == "n":
        _, e_u, e_v = normal_frame(p, surface.orientation)
    elif along == "x":
        e_u, e_v = p.xu, p.xv
    else:
        raise ValueError("along must be 'x' or 'n'")
    g11, g12, g22, det = _metric(surface, form, u, v)
    if np.any(det == 0):
        raise DegenerateMetricError(f"form {form} is degenerate")
    _, f_u, f_v, *_ = _derivatives(f, u, v, h)
    w_u = (g22 * f_u - g12 * f_v) / det
    w_v = (g11 * f_v - g12 * f_u) / det
    return w_u[..., None] * e_u + w_v[..., None] * e_v


# -- identity checks -----------------------------------------------------------


@dataclass
class ResidualReport:
    check: str
    surface: str
    samples: int
    max_rel: float
    mean_rel: float
    tolerance: float

    @property
    def passed(self) -> bool:
        return bool(self.max_rel < self.tolerance)

    def to_json(self) -> dict:
        out = asdict(self)
        out["pass"] = self.passed
        return out

    def to_text(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)


def sample_points(surface: Surface, n: int, seed: int = 0, exclusion: float | None = None, margin: float = 0.02):
    """Random admissible parameters, away from non-periodic edges.

    For tubes and anchor rings ``exclusion`` drops points with
    |cos(phi)| (resp. |cos t|) below the threshold.
    """
    rng = np.random.default_rng(seed)
    us, vs = [], []
    need = n
    while need > 0:
        cols = []
        for (lo, hi), per in zip(surface.domain, surface.periodic):
            pad = 0.0 if per else margin * (hi - lo)
            cols.append(rng.uniform(lo + pad, hi - pad, 4 * n))
        u, v = cols
        if exclusion is not None:
            ang = v if surface.kind == "tube" else u
            keep = np.abs(np.cos(ang)) >= exclusion
            u, v = u[keep], v[keep]
        us.append(u[:need])
        vs.append(v[:need])
        need -= len(us[-1])
    return np.concatenate(us), np.concatenate(vs)


def _rel_stats(residual, reference):
    res = np.linalg.norm(np.atleast_2d(residual), axis=-1) if residual.ndim > 1 else np.abs(residual)
    ref = np.linalg.norm(np.atleast_2d(reference), axis=-1) if reference.ndim > 1 else np.abs(reference)
    scale = np.maximum(ref, 1e-300)
    rel = res / scale
    return float(rel.max()), float(rel.mean())


def check_position_identity(surface: Surface, u, v, tolerance: float = 1e-4, h: float = 2e-3) -> ResidualReport:
    """Residual of Delta^III x - (grad^III(2H/K) - (2H/K) n), relative to |Delta^III x|.

    grad^III is taken on the spherical image (``along="n"``).

    When Delta^III x vanishes identically (minimal surfaces) the residual is
    measured against the surface scale instead.
    """
    lhs = laplace_beltrami(surface, surface.position, u, v, "III", h)

    def two_h_over_k(uu, vv):
        fc = forms_from_partials(surface.partials(uu, vv), surface.orientation)
        return 2 * fc.H / fc.K

    fc = forms_from_partials(surface.partials(u, v), surface.orientation)
    rhs = gradient(surface, two_h_over_k, u, v, "III", h, along="n") - two_h_over_k(u, v)[..., None] * fc.normal
    ref = np.linalg.norm(lhs, axis=-1)
    if np.max(ref) < 1e-8 * surface.scale:
        ref = np.full_like(ref, surface.scale)
    res = np.linalg.norm(lhs - rhs, axis=-1) / ref
    return ResidualReport("position_identity", surface.kind, len(res), float(res.max()), float(res.mean()), tolerance)


def check_takahashi(surface: Surface, u, v, tolerance: float = 1e-6, h: float = 2e-3) -> ResidualReport:
    """Residual of Delta^I x + 2 H n (relative to |Delta^I x|, or the scale if minimal)."""
    lhs = laplace_beltrami(surface, surface.position, u, v, "I", h)
    fc = forms_from_partials(surface.partials(u, v), surface.orientation)
    res = np.linalg.norm(lhs + 2 * fc.H[..., None] * fc.normal, axis=-1)
    ref = np.linalg.norm(lhs, axis=-1)
    if np.max(ref) < 1e-8 / surface.scale:
        ref = np.full_like(ref, 1.0 / surface.scale)
    rel = res / ref
    return ResidualReport("takahashi", surface.kind, len(rel), float(rel.max()), float(rel.mean()), tolerance)


def check_gauss_map(surface: Surface, u, v, tolerance: float = 1e-5, h: float = 2e-3) -> ResidualReport:
    """Residual of Delta^III n - 2 n."""

    def normal(uu, vv):
        return forms_from_partials(surface.partials(uu, vv), surface.orientation).normal

    lhs = laplace_beltrami(surface, normal, u, v, "III", h)
    n = normal(u, v)
    rel = np.linalg.norm(lhs - 2 * n, axis=-1) / 2.0
    return ResidualReport("gauss_map", surface.kind, len(rel), float(rel.max()), float(rel.mean()), tolerance)


def tube_formula_apply(tube: Tube, f, t, phi, h: float = 2e-3):
    """The tube's coordinate formula for Delta^III applied to ``f(t, phi)``."""
    t, phi = np.broadcast_arrays(np.asarray(t, float), np.asarray(phi, float))
    (k, k1), (w, w1) = tube.jets(t, 1)
    _, f_t, f_p, f_tt, f_tp, f_pp = _derivatives(f, t, phi, h)
    c, s = np.cos(phi), np.sin(phi)
    kc = k * c
    beta = k1 * c + k * w * s
    out = (
        -f_tt
        + 2 * w * f_tp
        - (w**2 + kc**2) * f_pp
        + beta / kc * f_t
        + (w1 + k**2 * c * s - w * beta / kc) * f_p
    )
    return out / kc**2


def tube_operator_crosscheck(tube: Tube, f, t, phi, tolerance: float = 1e-5, h: float = 2e-3) -> ResidualReport:
    a = tube_formula_apply(tube, f, t, phi, h)
    b = laplace_beltrami(tube, f, t, phi, "III", h)
    scale = max(float(np.max(np.abs(b))), 1e-300)
    if scale < 1e-12:
        rel = np.abs(a - b)
    else:
        rel = np.abs(a - b) / scale
    rel = rel.reshape(len(np.atleast_1d(t)), -1).max(axis=-1)
    return ResidualReport("tube_operator_crosscheck", tube.kind, len(rel), float(rel.max()), float(rel.mean()), tolerance)


# -- grid fields ---------------------------------------------------------------


class GridField:
    """Values on ``grid[rows, cols]`` (slices into the full lattice)."""

    def __init__(self, values: np.ndarray, rows: slice = slice(None), cols: slice = slice(None), error_order=None):
        self.values = np.asarray(values, float)
        self.rows = rows
        self.cols = cols
        self.error_order = error_order

    def __array__(self, dtype=None):
        return self.values if dtype is None else self.values.astype(dtype)


def _axis_stencil(values, axis, weights, periodic):
    if periodic:
        return sum(c * np.roll(values, -k, axis=axis) for k, c in weights)
    n = values.shape[axis]
    out = 0.0
    for k, c in weights:
        sl = [slice(None)] * values.ndim
        sl[axis] = slice(2 + k, n - 2 + k)
        out = out + c * values[tuple(sl)]
    return out


def _trim(values, axis, periodic):
    if periodic:
        return values
    sl = [slice(None)] * values.ndim
    sl[axis] = slice(2, values.shape[axis] - 2)
    return values[tuple(sl)]


def _shrink(sl: slice, n: int, periodic: bool) -> slice:
    if periodic:
        return sl
    start, stop, _ = sl.indices(n)
    if stop - start <= 4:
        raise StencilError("grid too small for another stencil application")
    return slice(start + 2, stop - 2)


class GridOperator:
    """Delta^form on a SurfaceGrid with 4th-order central differences.

    Non-periodic axes lose two boundary layers per application.
    """

    def __init__(self, grid: SurfaceGrid, form: str = "III", h_metric: float = 1e-3):
        self.grid = grid
        self.form = form.upper()
        self.coeffs = operator_coefficients(grid.surface, self.form, grid.U, grid.V, h_metric)

    def apply(self, field: GridField | np.ndarray) -> GridField:
        if not isinstance(field, GridField):
            field = GridField(field)
        per_u, per_v = self.grid.periodic
        hu, hv = self.grid.spacing
        vals = field.values
        nu, nv = self.grid.shape
        rows = _shrink(field.rows, nu, per_u)
        cols = _shrink(field.cols, nv, per_v)
        f_u = _trim(_axis_stencil(vals, 0, _D1, per_u), 1, per_v) / hu
        f_v = _trim(_axis_stencil(vals, 1, _D1, per_v), 0, per_u) / hv
        f_uu = _trim(_axis_stencil(vals, 0, _D2, per_u), 1, per_v) / hu**2
        f_vv = _trim(_axis_stencil(vals, 1, _D2, per_v), 0, per_u) / hv**2
        f_uv = _axis_stencil(_axis_stencil(vals, 0, _D1, per_u), 1, _D1, per_v) / (hu * hv)
        coeffs = self.coeffs.restrict((rows, cols))
        k = 1 if field.error_order is None else field.error_order[1] + 1
        return GridField(coeffs.apply(f_u, f_v, f_uu, f_uv, f_vv), rows, cols, (STENCIL_ORDER - 2 * k, k))


def iterate_on_grid(grid: SurfaceGrid, field, m: int, form: str = "III", operator: GridOperator | None = None):
    """[field, Delta field, ..., Delta^m field] on shrinking interiors.

    Each iterate carries ``error_order = (p - 2k, k)``: the conservative
    O(h^(p-2k)) noise-amplification estimate after k applications of a
    p-th order stencil.
    """
    if m > MAX_GRID_ITERATES:
        raise NumericLimitError(
            f"numeric iteration is limited to m <= {MAX_GRID_ITERATES}; use the exact engine (tubecalc)"
        )
    op = operator or GridOperator(grid, form)
    out = [field if isinstance(field, GridField) else GridField(field, error_order=(STENCIL_ORDER, 0))]
    for _ in range(m):
        out.append(op.apply(out[-1]))
    return out


def common_interior(fields: list[GridField]) -> list[np.ndarray]:
    """Restrict every field to the sample set of the last (smallest) one."""
    last = fields[-1]
    out = []
    for f in fields:
        r0 = (last.rows.start or 0) - (f.rows.start or 0)
        c0 = (last.cols.start or 0) - (f.cols.start or 0)
        nr, nc = last.values.shape[:2]
        out.append(f.values[r0 : r0 + nr, c0 : c0 + nc])
    return out


def default_shape(surface: Surface) -> tuple[int, int]:
    return {"sphere": (96, 128), "catenoid": (128, 96), "anchor_ring": (96, 96), "tube": (160, 128)}.get(
        surface.kind, (96, 96)
    )


def default_grid(surface: Surface, shape=None) -> SurfaceGrid:
    return SurfaceGrid(surface, shape or default_shape(surface))


def check_grid_gauss_map(grid: SurfaceGrid, tolerance: float = 1e-5) -> ResidualReport:
    """Delta^III n = 2 n with the grid stencils, over the trimmed interior."""
    n = grid.forms.normal
    out = GridOperator(grid, "III").apply(n)
    rel = np.linalg.norm(out.values - 2 * n[out.rows, out.cols], axis=-1) / 2.0
    return ResidualReport("grid_gauss_map", grid.surface.kind, rel.size, float(rel.max()), float(rel.mean()), tolerance)


def anchor_grid_errors(surface, shape, m: int = 2) -> list[float]:
    """Max-abs error of grid (Delta^III)^k x1 over max |exact|, k = 1..m."""
    from .tubecalc import anchor_iterates

    exact = anchor_iterates(m)
    grid = SurfaceGrid(surface, shape)
    fields = iterate_on_grid(grid, grid.position[..., 0], m)
    errors = []
    for k in range(1, m + 1):
        f = fields[k]
        ref = exact[k].evaluate(grid.U[f.rows, f.cols], grid.V[f.rows, f.cols], surface.a, surface.r)
        errors.append(float(np.max(np.abs(f.values - ref)) / np.max(np.abs(ref))))
    return errors


def anchor_grid_convergence(surface, shape=(96, 96), m: int = 2) -> dict:
    """Errors on ``shape`` and on the twice-refined grid, plus observed orders."""
    coarse = anchor_grid_errors(surface, shape, m)
    fine = anchor_grid_errors(surface, (2 * shape[0], 2 * shape[1]), m)
    orders = [float(np.log2(c / f)) if f > 0 else float("inf") for c, f in zip(coarse, fine)]
    return {"shape": list(shape), "errors": coarse, "refined_errors": fine, "observed_order": orders}


__all__ = [
    "FORMS",
    "GridField",
    "GridOperator",
    "NumericLimitError",
    "OperatorCoefficients",
    "ResidualReport",
    "StencilError",
    "anchor_grid_convergence",
    "anchor_grid_errors",
    "check_gauss_map",
    "check_grid_gauss_map",
    "check_position_identity",
    "check_takahashi",
    "common_interior",
    "default_grid",
    "default_shape",
    "tube_formula_apply",
    "gradient",
    "iterate_on_grid",
    "laplace_beltrami",
    "operator_coefficients",
    "tube_operator_crosscheck",
    "sample_points",
]

