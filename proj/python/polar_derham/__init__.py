# Copyright (c) 2026 The polar-derham authors
# SPDX-License-Identifier: Apache-2.0
"""Polar spline de Rham complexes on the solid torus."""

try:
    from . import _polar_derham as _ext
except ImportError:  # in-tree build: extension sits outside the package
    import _polar_derham as _ext

__all__ = [
    "ConstructionError",
    "SingularityError",
    "KnotVector",
    "SplineSpace",
    "PolarComplex",
    "build_complex",
    "is_dta_compatible",
    "make_uniform_open_knots",
    "polar_counts",
    "verify",
]

globals().update({name: getattr(_ext, name) for name in __all__})
