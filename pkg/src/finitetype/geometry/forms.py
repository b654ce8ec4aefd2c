"""Fundamental forms, Gauss map, curvatures."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .surfaces import Partials, Surface, Tube


class DegenerateMetricError(ValueError):
    pass


def _dot(a, b):
    return np.sum(a * b, axis=-1)


def normal_frame(p: Partials, orientation: int = 1):
    """Unit normal and its partials ``(n, n_u, n_v)`` from second-order partials."""
    N = np.cross(p.xu, p.xv)
    Nu = np.cross(p.xuu, p.xv) + np.cross(p.xu, p.xuv)
    Nv = np.cross(p.xuv, p.xv) + np.cross(p.xu, p.xvv)
    norm = np.linalg.norm(N, axis=-1, keepdims=True)
    if np.any(norm == 0):
        raise DegenerateMetricError("x_u and x_v are parallel")
    n = N / norm
    nu = (Nu - n * _dot(n, Nu)[..., None]) / norm
    nv = (Nv - n * _dot(n, Nv)[..., None]) / norm
    return orientation * n, orientation * nu, orientation * nv


@dataclass
class FormComponents:
    E: np.ndarray
    F: np.ndarray
    G: np.ndarray
    L: np.ndarray
    M: np.ndarray
    N: np.ndarray
    e: np.ndarray
    f: np.ndarray
    g: np.ndarray
    K: np.ndarray
    H: np.ndarray
    normal: np.ndarray

    def metric(self, form: str):
        form = form.upper()
        if form == "I":
            return self.E, self.F, self.G
        if form == "II":
            return self.L, self.M, self.N
        if form == "III":
            return self.e, self.f, self.g
        raise ValueError(f"unknown fundamental form {form!r}")


def forms_from_partials(p: Partials, orientation: int = 1) -> FormComponents:
    n, nu, nv = normal_frame(p, orientation)
    E, F, G = _dot(p.xu, p.xu), _dot(p.xu, p.xv), _dot(p.xv, p.xv)
    det = E * G - F * F
    if np.any(det <= 0):
        raise DegenerateMetricError("first fundamental form is not positive definite")
    L, M, N = _dot(p.xuu, n), _dot(p.xuv, n), _dot(p.xvv, n)
    e, f, g = _dot(nu, nu), _dot(nu, nv), _dot(nv, nv)
    K = (L * N - M * M) / det
    H = (E * N - 2 * F * M + G * L) / (2 * det)
    return FormComponents(E, F, G, L, M, N, e, f, g, K, H, n)


def fundamental_forms(surface: Surface, u, v, orientation: int | None = None) -> FormComponents:
    """Forms I, II, III and K, H at ``(u, v)``.

    ``orientation`` overrides the surface's normal convention (+1 means
    ``x_u x x_v``).
    """
    surface.check_domain(u, v)
    sign = surface.orientation if orientation is None else orientation
    return forms_from_partials(surface.partials(u, v), sign)


def tube_closed_forms(tube: Tube, t, phi) -> dict[str, np.ndarray]:
    """Closed-form I, II (w.r.t. x_t x x_phi), III and K of a tube."""
    (k, _), (w, _) = tube.jets(t, 1)
    r = tube.r
    c = np.cos(phi)
    delta = 1 - r * k * c
    return {
        "E": delta**2 + r**2 * w**2,
        "F": r**2 * w,
        "G": np.full_like(delta, r**2),
        "L": -k * delta * c + r * w**2,
        "M": r * w,
        "N": np.full_like(delta, r),
        "e": k**2 * c**2 + w**2,
        "f": w,
        "g": np.ones_like(delta),
        "K": -k * c / (r * delta),
    }


def tube_form_regression(tube: Tube, n_points: int = 100, seed: int = 0, exclusion: float = 0.2) -> dict:
    """Max relative deviation of numeric forms from the tube's closed forms.

    Errors of the 2x2 form entries are relative to the Frobenius norm of the
    form at the point; K is compared pointwise.
    """
    rng = np.random.default_rng(seed)
    (t0, t1), (p0, p1) = tube.domain
    t = rng.uniform(t0, t1, n_points)
    phi = rng.uniform(p0, p1, n_points)
    keep = np.abs(np.cos(phi)) >= exclusion
    t, phi = t[keep], phi[keep]
    num = fundamental_forms(tube, t, phi, orientation=1)
    ref = tube_closed_forms(tube, t, phi)
    out = {}
    for names in (("E", "F", "G"), ("L", "M", "N"), ("e", "f", "g")):
        scale = np.sqrt(sum(ref[x] ** 2 for x in names) + ref[names[1]] ** 2)
        err = max(np.max(np.abs(getattr(num, x) - ref[x]) / scale) for x in names)
        out["".join(names)] = float(err)
    out["K"] = float(np.max(np.abs(num.K - ref["K"]) / np.abs(ref["K"])))
    out["max_rel"] = max(out.values())
    out["samples"] = int(len(t))
    return out
