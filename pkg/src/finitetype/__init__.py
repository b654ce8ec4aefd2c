"""Exact and numeric tools for finite Chen-type questions on surfaces in E^3.

Subpackages:

* ``exact``: rational jet polynomials, tube expressions and frame vectors.
* ``tubecalc``: the third-form Beltrami operator on tubes and anchor rings,
  iterates and infinite-type certificates.
* ``geometry``: curves, Frenet frames, surfaces, fundamental forms, grids.
* ``beltrami``: numeric Beltrami operators and identity checks.
* ``chentype``: eigen/relation/rank fits and type verdicts.
"""

__version__ = "0.1.0"

from .chentype import ChenTypeClassifier, IterateMatrix, TypeVerdict, classify
from .exact import BigRational, FrameVec, JetPoly, TubeExpr

__all__ = [
    "BigRational",
    "ChenTypeClassifier",
    "FrameVec",
    "IterateMatrix",
    "JetPoly",
    "TubeExpr",
    "TypeVerdict",
    "__version__",
    "classify",
]
