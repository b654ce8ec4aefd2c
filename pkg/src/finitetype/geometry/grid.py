"""Uniform parameter lattices over a surface."""

from __future__ import annotations

import csv
from functools import cached_property

import numpy as np

from .forms import FormComponents, forms_from_partials
from .surfaces import Surface

CSV_COLUMNS = ("u", "v", "x", "y", "z", "E", "F", "G", "L", "M", "N", "e", "f", "g", "K", "H")


class SurfaceGrid:
    """``shape[0] x shape[1]`` lattice; periodic axes omit the endpoint."""

    def __init__(self, surface: Surface, shape: tuple[int, int], domain=None, periodic=None):
        self.surface = surface
        self.shape = (int(shape[0]), int(shape[1]))
        self.domain = tuple(tuple(map(float, d)) for d in (domain or surface.domain))
        self.periodic = tuple(periodic if periodic is not None else surface.periodic)
        axes = []
        for n, (lo, hi), per in zip(self.shape, self.domain, self.periodic):
            axes.append(np.linspace(lo, hi, n, endpoint=not per))
        self.u_axis, self.v_axis = axes
        self.spacing = tuple(float(a[1] - a[0]) for a in axes)
        self.U, self.V = np.meshgrid(self.u_axis, self.v_axis, indexing="ij")

    @cached_property
    def partials(self):
        return self.surface.partials(self.U, self.V)

    @cached_property
    def forms(self) -> FormComponents:
        return forms_from_partials(self.partials, self.surface.orientation)

    @property
    def position(self) -> np.ndarray:
        return self.partials.x

    def to_csv(self, path) -> None:
        f = self.forms
        x = self.position
        cols = [self.U, self.V, x[..., 0], x[..., 1], x[..., 2], f.E, f.F, f.G, f.L, f.M, f.N, f.e, f.f, f.g, f.K, f.H]
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(CSV_COLUMNS)
            for row in zip(*(c.ravel() for c in cols)):
                w.writerow([repr(float(val)) for val in row])
