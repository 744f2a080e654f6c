"""Reference data for the worked example: the fourfolds over F_2, F_3 and Q,
their K3 surfaces, the quaternion algebra, the two evaluation points and the
reference point counts and Frobenius coefficients.

Polynomials are stored as text in the canonical syntax accepted by
:func:`k3brauer.mpoly.parse_poly`.
"""

from __future__ import annotations

from fractions import Fraction

FOURFOLD_Q = (
    "2*X1^2*Y1 + 3*X1^2*Y2 + X1^2*Y3 + 3*X1*X2*Y1 + 3*X1*X2*Y2 + 3*X1*X3*Y1 + 4*X1*X3*Y2"
    " + 3*X1*Y2^2 + 2*X1*Y3^2 + X2^2*Y3 + 3*X2*X3*Y3 + 4*X2*Y2^2 + X3^2*Y1 + 3*X3^2*Y3"
    " + 4*X3*Y1^2 + 5*X3*Y1*Y2 + 5*X3*Y2^2 + 2*Y1^3 + 3*Y1^2*Y3 + 3*Y1*Y3^2 + 3*Y3^3"
)

FOURFOLD_MOD2 = (
    "X1^2*Y2 + X1^2*Y3 + X1*X2*Y1 + X1*X2*Y2 + X1*X3*Y1 + X1*Y2^2 + X2^2*Y3 + X2*X3*Y3"
    " + X3^2*Y1 + X3^2*Y3 + X3*Y1*Y2 + X3*Y2^2 + Y1^2*Y3 + Y1*Y3^2 + Y3^3"
)

# Variant with the repeated monomial X3*Y2*Y2; fails the CRT consistency check.
FOURFOLD_MOD3_VARIANT = (
    "2*X1^2*Y1 + X1^2*Y3 + X1*X3*Y2 + 2*X1*Y3^2 + X2^2*Y3 + X2*Y2^2 + X3^2*Y1 + X3*Y1^2"
    " + 2*X3*Y2*Y2 + 2*X3*Y2^2 + 2*Y1^3"
)
# The first X3*Y2*Y2 read as X3*Y1*Y2; this is the reduction of FOURFOLD_Q mod 3.
FOURFOLD_MOD3 = (
    "2*X1^2*Y1 + X1^2*Y3 + X1*X3*Y2 + 2*X1*Y3^2 + X2^2*Y3 + X2*Y2^2 + X3^2*Y1 + X3*Y1^2"
    " + 2*X3*Y1*Y2 + 2*X3*Y2^2 + 2*Y1^3"
)

SURFACE_MOD2_ALPHA = "x^2*y + y^3 + y^2*z"
SURFACE_MOD2_BETA = (
    "x^5*z + x^3*y^2*z + x^2*y^3*z + x^3*y*z^2 + x^2*y^2*z^2 + y^2*z^4 + x*z^5 + y*z^5 + z^6"
)

# w^2 = SURFACE_MOD3_SEXTIC over F_3
SURFACE_MOD3_SEXTIC = (
    "2*x^5*z + x^4*y*z + x^4*z^2 + 2*x^3*y*z^2 + x^2*y^4 + 2*x^2*y^3*z + x^2*y^2*z^2"
    " + 2*x^2*y*z^3 + x*y^3*z^2 + x*y^2*z^3 + 2*x*z^5 + y^6 + 2*y^4*z^2 + y^3*z^3"
)

TANGENT_CONIC_MOD3 = "2*x^2 + 2*x*y + x*z + 2*y^2"
# parametrization over F_9 in terms of a multiplicative generator u:
# x = u^2 t^2, y = u^6 s t, z = u^2 s^2 + u^6 s t + u^2 t^2
TANGENT_CONIC_PULLBACK_ROOT = "s^5 + s^4*t + s^3*t^2 + s^2*t^3 + 2*s*t^4 + t^5"  # g = t^2 * root^2

GRAM_MATRIX_Q = (
    ("2*(2*x + 3*y + z)", "3*x + 3*y", "3*x + 4*y", "3*y^2 + 2*z^2"),
    ("3*x + 3*y", "2*z", "3*z", "4*y^2"),
    ("3*x + 4*y", "3*z", "2*(x + 3*z)", "4*x^2 + 5*x*y + 5*y^2"),
    ("3*y^2 + 2*z^2", "4*y^2", "4*x^2 + 5*x*y + 5*y^2", "2*(2*x^3 + 3*x^2*z + 3*x*z^2 + 3*z^3)"),
)

FIBER_CONIC_Q = {
    "a11": "2*x + 3*y + z", "a12": "3*x + 3*y", "a13": "3*x + 4*y",
    "a22": "z", "a23": "3*z", "a33": "x + 3*z",
}

ALGEBRA_ALPHA = (
    "(9*x^2 + 18*x*y - 8*x*z + 9*y^2 - 12*y*z - 4*z^2)/(4*(2*x + 3*y + z)^2)"
)
ALGEBRA_BETA = (
    "(-(9*x^3 + 18*x^2*y + x^2*z + 9*x*y^2 + 3*x*y*z - 10*x*z^2 + 7*y^2*z - 9*y*z^2 - 3*z^3))"
    "/((2*x + 3*y + z)*(9*x^2 + 18*x*y - 8*x*z + 9*y^2 - 12*y*z - 4*z^2))"
)

RATIONAL_POINT = (15, 15, 16, 13752)
REAL_POINT = (1, 0, 1)  # w = sqrt(8)
ALGEBRA_AT_RATIONAL_POINT = (Fraction(2276, 4 * 91**2), Fraction(-75852, 91 * 2276))
ALGEBRA_AT_REAL_POINT = (Fraction(-3, 36), Fraction(-1, 3))

POINT_COUNTS = {
    2: (7, 25, 73, 249, 1137, 4273, 16737, 65313, 264385, 1047745, 4203393, 16767105),
    3: (11, 119, 758, 6707, 58421, 529472, 4784357, 43059323, 387449246, 3486568169,
        31380849731, 282429079832),
}

FROBENIUS_COEFFS = {
    2: (-2, -2, 4, 8, -32, 0, 64, 128, -512, 512, 0, 2048),
    # c_12 as tabulated; the functional equation forces -9 * c_10 = -1062882
    3: (-1, -18, 9, 135, 162, -243, -3645, -6561, 26244, 118098, 0, -106288),
}

# Non-cyclotomic degree-20 factor of p^-22 f(p t), integer coefficients
# listed from t^20 down to t^0, together with the cyclotomic part.
RESIDUAL_FACTOR = {
    2: (2, 2, 1, 1, 2, 1, 0, 0, 1, 0, 0, 0, 1, 0, 0, 1, 2, 1, 1, 2, 2),
    3: (3, -1, -3, 0, 2, 2, 1, -3, -2, 1, 4, 1, -2, -3, 1, 2, 2, 0, -3, -1, 3),
}
CYCLOTOMIC_PART = {2: ((1, 2),), 3: ((1, 1), (2, 1))}  # (m, multiplicity) of Phi_m
