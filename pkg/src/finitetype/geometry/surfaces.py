"""Parametric surfaces with analytic (or finite-difference) partials."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .curves import Curve


class DomainError(ValueError):
    pass


@dataclass
class Partials:
    x: np.ndarray
    xu: np.ndarray
    xv: np.ndarray
    xuu: np.ndarray
    xuv: np.ndarray
    xvv: np.ndarray


class Surface:
    """Immersion ``x(u, v)``.

    ``orientation`` is +1 when the unit normal is ``x_u x x_v / |x_u x x_v|``
    and -1 for the opposite choice.
    """

    kind = "surface"
    domain: tuple[tuple[float, float], tuple[float, float]]
    periodic: tuple[bool, bool] = (False, False)
    orientation: int = 1
    scale: float = 1.0

    def partials(self, u, v) -> Partials:
        raise NotImplementedError

    def position(self, u, v) -> np.ndarray:
        return self.partials(u, v).x

    def check_domain(self, u, v) -> None:
        for axis, (w, (lo, hi), per) in enumerate(zip((u, v), self.domain, self.periodic)):
            if per:
                continue
            w = np.asarray(w)
            span = hi - lo
            if np.any(w < lo - 1e-9 * span) or np.any(w > hi + 1e-9 * span):
                raise DomainError(f"parameter outside domain on axis {axis}: [{lo}, {hi}]")

    def describe(self) -> dict:
        return {"kind": self.kind}


class Sphere(Surface):
    """x = center + R (sin u cos v, sin u sin v, cos u); outward normal."""

    kind = "sphere"
    periodic = (False, True)

    def __init__(self, R: float = 1.0, center=(0.0, 0.0, 0.0), polar_margin: float = 0.3):
        self.R = float(R)
        self.center = np.asarray(center, dtype=float)
        self.domain = ((polar_margin, math.pi - polar_margin), (0.0, 2 * math.pi))
        self.scale = self.R

    def partials(self, u, v):
        u, v = np.broadcast_arrays(np.asarray(u, float), np.asarray(v, float))
        su, cu, sv, cv = np.sin(u), np.cos(u), np.sin(v), np.cos(v)
        z = np.zeros_like(u)
        R = self.R
        return Partials(
            self.center + R * np.stack([su * cv, su * sv, cu], -1),
            R * np.stack([cu * cv, cu * sv, -su], -1),
            R * np.stack([-su * sv, su * cv, z], -1),
            R * np.stack([-su * cv, -su * sv, -cu], -1),
            R * np.stack([-cu * sv, cu * cv, z], -1),
            R * np.stack([-su * cv, -su * sv, z], -1),
        )

    def describe(self):
        return {"kind": self.kind, "R": self.R, "center": self.center.tolist()}


class Catenoid(Surface):
    """x = (c cosh(v/c) cos u, c cosh(v/c) sin u, v)."""

    kind = "catenoid"
    periodic = (True, False)

    def __init__(self, c: float = 1.0, height: float = 1.0):
        self.c = float(c)
        self.domain = ((0.0, 2 * math.pi), (-height * self.c, height * self.c))
        self.scale = self.c

    def partials(self, u, v):
        u, v = np.broadcast_arrays(np.asarray(u, float), np.asarray(v, float))
        c = self.c
        ch, sh = np.cosh(v / c), np.sinh(v / c)
        cu, su = np.cos(u), np.sin(u)
        z, o = np.zeros_like(u), np.ones_like(u)
        return Partials(
            np.stack([c * ch * cu, c * ch * su, v], -1),
            np.stack([-c * ch * su, c * ch * cu, z], -1),
            np.stack([sh * cu, sh * su, o], -1),
            np.stack([-c * ch * cu, -c * ch * su, z], -1),
            np.stack([-sh * su, sh * cu, z], -1),
            np.stack([ch * cu / c, ch * su / c, z], -1),
        )

    def describe(self):
        return {"kind": self.kind, "c": self.c}


class AnchorRing(Surface):
    """x = ((a + r cos t) cos phi, (a + r cos t) sin phi, r sin t); outward normal.

    The default t-band keeps |cos t| >= ``exclusion`` on the outer half, where
    the Gauss curvature is bounded away from zero.
    """

    kind = "anchor_ring"
    periodic = (False, True)
    orientation = -1

    def __init__(self, a: float = 2.0, r: float = 1.0, exclusion: float = 0.2):
        if not a > r > 0:
            raise ValueError("anchor ring needs a > r > 0")
        self.a, self.r = float(a), float(r)
        t_max = math.acos(exclusion)
        self.domain = ((-t_max, t_max), (0.0, 2 * math.pi))
        self.scale = self.a + self.r

    def partials(self, t, phi):
        t, phi = np.broadcast_arrays(np.asarray(t, float), np.asarray(phi, float))
        a, r = self.a, self.r
        ct, st, cp, sp = np.cos(t), np.sin(t), np.cos(phi), np.sin(phi)
        w = a + r * ct
        z = np.zeros_like(t)
        return Partials(
            np.stack([w * cp, w * sp, r * st], -1),
            np.stack([-r * st * cp, -r * st * sp, r * ct], -1),
            np.stack([-w * sp, w * cp, z], -1),
            np.stack([-r * ct * cp, -r * ct * sp, -r * st], -1),
            np.stack([r * st * sp, -r * st * cp, z], -1),
            np.stack([-w * cp, -w * sp, z], -1),
        )

    def describe(self):
        return {"kind": self.kind, "a": self.a, "r": self.r}


class Tube(Surface):
    """x(t, phi) = alpha(t) + r cos(phi) h(t) + r sin(phi) b(t); outward normal.

    The default phi-band is the outer side |phi| <= arccos(exclusion), where
    cos(phi) stays away from the parabolic circles.
    """

    kind = "tube"
    orientation = -1

    def __init__(self, curve: Curve, r: float, exclusion: float = 0.2, phi_band=None):
        self.curve = curve
        self.r = float(r)
        kmax = curve.max_curvature()
        if not 0 < self.r * kmax < 1:
            raise ValueError(f"tube radius {r} violates 0 < r < 1/max|kappa| = {1 / kmax:g}")
        if phi_band is None:
            p = math.acos(exclusion)
            phi_band = (-p, p)
        self.domain = (curve.domain, tuple(phi_band))
        full = np.isclose(phi_band[1] - phi_band[0], 2 * math.pi)
        self.periodic = (curve.periodic, bool(full))
        self.scale = self.r

    def jets(self, t, order=1):
        return self.curve.jets(t, order)

    def partials(self, t, phi):
        t, phi = np.broadcast_arrays(np.asarray(t, float), np.asarray(phi, float))
        alpha, T, H, B = self.curve.frame(t)
        (k, k1), (w, w1) = self.curve.jets(t, 1)
        r = self.r
        c, s = np.cos(phi), np.sin(phi)
        delta = 1 - r * k * c

        def comb(a, b, d):
            return a[..., None] * T + b[..., None] * H + d[..., None] * B

        zero = np.zeros_like(t)
        return Partials(
            alpha + comb(zero, r * c, r * s),
            comb(delta, -r * w * s, r * w * c),
            comb(zero, -r * s, r * c),
            comb(-r * k1 * c + r * k * w * s, delta * k - r * w1 * s - r * w**2 * c, -r * w**2 * s + r * w1 * c),
            comb(r * k * s, -r * w * c, -r * w * s),
            comb(zero, -r * c, -r * s),
        )

    def describe(self):
        out = {"kind": self.kind, "r": self.r, "curve": type(self.curve).__name__}
        for name in ("radius", "pitch"):
            if hasattr(self.curve, name):
                out[name] = getattr(self.curve, name)
        return out


class Immersion(Surface):
    """Generic immersion from a callable ``fn(u, v) -> (..., 3)``.

    Without analytic partials, derivatives use 5-point central differences
    with step ``step_fraction`` times the domain span per axis.
    """

    kind = "immersion"

    def __init__(self, fn, domain, periodic=(False, False), partials=None, orientation=1, step_fraction=1e-4):
        self.fn = fn
        self.domain = (tuple(domain[0]), tuple(domain[1]))
        self.periodic = tuple(periodic)
        self._partials = partials
        self.orientation = orientation
        self.steps = tuple(step_fraction * (hi - lo) for lo, hi in self.domain)

    def partials(self, u, v):
        if self._partials is not None:
            return Partials(*self._partials(u, v))
        u, v = np.broadcast_arrays(np.asarray(u, float), np.asarray(v, float))
        hu, hv = self.steps
        f = self.fn
        w1 = ((-2, 1 / 12), (-1, -8 / 12), (1, 8 / 12), (2, -1 / 12))
        w2 = ((-2, -1 / 12), (-1, 16 / 12), (0, -30 / 12), (1, 16 / 12), (2, -1 / 12))
        x = np.asarray(f(u, v))
        xu = sum(c * f(u + k * hu, v) for k, c in w1) / hu
        xv = sum(c * f(u, v + k * hv) for k, c in w1) / hv
        xuu = sum(c * f(u + k * hu, v) for k, c in w2) / hu**2
        xvv = sum(c * f(u, v + k * hv) for k, c in w2) / hv**2
        xuv = sum(ci * cj * f(u + i * hu, v + j * hv) for i, ci in w1 for j, cj in w1) / (hu * hv)
        return Partials(x, xu, xv, xuu, xuv, xvv)
