"""Numeric parametric surfaces and their fundamental forms."""

from .curves import AnalyticCurve, Circle, Curve, FrenetError, Helix, frenet_integrate
from .forms import (
    DegenerateMetricError,
    FormComponents,
    forms_from_partials,
    fundamental_forms,
    normal_frame,
    tube_closed_forms,
    tube_form_regression,
)
from .grid import CSV_COLUMNS, SurfaceGrid
from .descriptions import SurfaceConfigError, curve_from_config, surface_from_config
from .surfaces import AnchorRing, Catenoid, DomainError, Immersion, Partials, Sphere, Surface, Tube


def surface_partials(surface: Surface, u, v) -> Partials:
    surface.check_domain(u, v)
    return surface.partials(u, v)


def surface_point(surface: Surface, u, v):
    return surface_partials(surface, u, v).x


__all__ = [
    "AnalyticCurve",
    "AnchorRing",
    "CSV_COLUMNS",
    "Catenoid",
    "Circle",
    "Curve",
    "DegenerateMetricError",
    "DomainError",
    "FormComponents",
    "FrenetError",
    "Helix",
    "Immersion",
    "Partials",
    "SurfaceConfigError",
    "Sphere",
    "Surface",
    "SurfaceGrid",
    "Tube",
    "curve_from_config",
    "forms_from_partials",
    "frenet_integrate",
    "fundamental_forms",
    "normal_frame",
    "surface_from_config",
    "surface_partials",
    "surface_point",
    "tube_closed_forms",
    "tube_form_regression",
]
