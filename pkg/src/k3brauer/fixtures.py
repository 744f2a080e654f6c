"""Parsed objects for the reference data in :mod:`k3brauer.reference`."""

from __future__ import annotations

from functools import lru_cache

from . import reference as R
from .ff import ext_field_create
from .geometry import FOURFOLD_VARS, XYZ, K3Surface, QuadricBundleData, bundle_from_fourfold
from .mpoly import ZZ, parse_poly, parse_rational_function


@lru_cache(maxsize=None)
def reference_bundle(p: int) -> QuadricBundleData:
    """The fourfold data over F_2, F_3 (p = 2, 3) or over Z (p = 0)."""
    if p == 0:
        return bundle_from_fourfold(parse_poly(R.FOURFOLD_Q, ZZ, FOURFOLD_VARS))
    text = {2: R.FOURFOLD_MOD2, 3: R.FOURFOLD_MOD3}[p]
    return bundle_from_fourfold(parse_poly(text, ext_field_create(p, 1), FOURFOLD_VARS))


@lru_cache(maxsize=None)
def reference_surface(p: int) -> K3Surface:
    """The K3 surfaces over F_2 and F_3 stored in reference.py (not recomputed)."""
    F = ext_field_create(p, 1)
    if p == 2:
        return K3Surface(parse_poly(R.SURFACE_MOD2_ALPHA, F, XYZ), parse_poly(R.SURFACE_MOD2_BETA, F, XYZ))
    if p == 3:
        return K3Surface.double_cover(parse_poly(R.SURFACE_MOD3_SEXTIC, F, XYZ))
    raise ValueError("reference surfaces exist for p = 2, 3 only")


def reference_gram_matrix():
    return [[parse_poly(e, ZZ, XYZ) for e in row] for row in R.GRAM_MATRIX_Q]


def reference_algebra():
    """(alpha, beta) of the reference quaternion algebra."""
    return (parse_rational_function(R.ALGEBRA_ALPHA, XYZ), parse_rational_function(R.ALGEBRA_BETA, XYZ))
