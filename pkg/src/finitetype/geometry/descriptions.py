"""Surfaces and curves from JSON-style dicts tagged by ``kind``."""

from __future__ import annotations

import numpy as np

from .curves import AnalyticCurve, Circle, Curve, Helix
from .surfaces import AnchorRing, Catenoid, Immersion, Sphere, Surface, Tube


class SurfaceConfigError(ValueError):
    """Invalid surface or curve description."""


def curve_from_config(cfg: dict) -> Curve:
    kind = cfg.get("kind")
    try:
        if kind == "circle":
            return Circle(cfg["radius"])
        if kind == "helix":
            dom = cfg.get("domain")
            return Helix(cfg["radius"], cfg["pitch"], tuple(dom) if dom else None)
        if kind == "analytic":
            return AnalyticCurve.from_expressions(
                str(cfg["kappa"]),
                str(cfg["tau"]),
                tuple(cfg["domain"]),
                steps=int(cfg.get("steps", 4000)),
            )
    except KeyError as exc:
        raise SurfaceConfigError(f"curve {kind!r} missing field {exc}") from None
    raise SurfaceConfigError(f"unknown curve kind {kind!r}")


def surface_from_config(cfg: dict, exclusion: float = 0.2) -> Surface:
    if not isinstance(cfg, dict):
        raise SurfaceConfigError("surface description must be an object")
    kind = cfg.get("kind")
    try:
        if kind == "sphere":
            return Sphere(cfg.get("R", 1.0), cfg.get("center", (0.0, 0.0, 0.0)))
        if kind == "catenoid":
            return Catenoid(cfg.get("c", 1.0), cfg.get("height", 1.0))
        if kind == "anchor_ring":
            return AnchorRing(cfg.get("a", 2.0), cfg.get("r", 1.0), exclusion=exclusion)
        if kind == "tube":
            return Tube(curve_from_config(cfg["curve"]), cfg["r"], exclusion=exclusion)
        if kind == "immersion":
            return _immersion(cfg)
    except KeyError as exc:
        raise SurfaceConfigError(f"surface {kind!r} missing field {exc}") from None
    except (TypeError, ValueError) as exc:
        if isinstance(exc, SurfaceConfigError):
            raise
        raise SurfaceConfigError(f"invalid {kind!r} description: {exc}") from None
    raise SurfaceConfigError(f"unknown surface kind {kind!r}")


def _immersion(cfg: dict) -> Immersion:
    import sympy

    u, v = sympy.symbols("u v")
    comps = [sympy.lambdify((u, v), sympy.sympify(str(e), locals={"u": u, "v": v}), "numpy") for e in cfg["x"]]
    if len(comps) != 3:
        raise SurfaceConfigError("immersion needs three coordinate expressions")

    def fn(uu, vv):
        uu, vv = np.broadcast_arrays(np.asarray(uu, float), np.asarray(vv, float))
        return np.stack([np.broadcast_to(c(uu, vv), uu.shape) for c in comps], -1)

    return Immersion(
        fn,
        cfg["domain"],
        periodic=tuple(cfg.get("periodic", (False, False))),
        orientation=int(cfg.get("orientation", 1)),
    )
