"""Matrix exponential by scaling and squaring with diagonal Pade approximants.

Follows Higham (2005), "The scaling and squaring method for the matrix
exponential revisited": the degree m in {3, 5, 7, 9, 13} and the number of
squarings s are chosen from the 1-norm so that the backward error of the
[m/m] approximant is below the unit roundoff.
"""
from __future__ import annotations

import math

import numpy as np
from scipy.linalg import lu_factor, lu_solve


class NumericError(ArithmeticError):
    """Raised on non-finite inputs or results."""


# Pade coefficients b_k of the [13/13] approximant to exp.
_B13 = (
    64764752532480000.0,
    32382376266240000.0,
    7771770303897600.0,
    1187353796428800.0,
    129060195264000.0,
    10559470521600.0,
    670442572800.0,
    33522128640.0,
    1323241920.0,
    40840800.0,
    960960.0,
    16380.0,
    182.0,
    1.0,
)

_B_LOW = {
    3: (120.0, 60.0, 12.0, 1.0),
    5: (30240.0, 15120.0, 3360.0, 420.0, 30.0, 1.0),
    7: (17297280.0, 8648640.0, 1995840.0, 277200.0, 25200.0, 1512.0, 56.0, 1.0),
    9: (
        17643225600.0,
        8821612800.0,
        2075673600.0,
        302702400.0,
        30270240.0,
        2162160.0,
        110880.0,
        3960.0,
        90.0,
        1.0,
    ),
}

# Largest 1-norm for which the [m/m] approximant meets unit roundoff (double).
_THETA = {
    3: 1.495585217958292e-2,
    5: 2.539398330063230e-1,
    7: 9.504178996162932e-1,
    9: 2.097847961257068e0,
    13: 5.371920351148152e0,
}


def _pade_low(a, m, ident):
    b = _B_LOW[m]
    a2 = a @ a
    powers = [ident, a2]
    for _ in range(2, m // 2 + 1):
        powers.append(powers[-1] @ a2)
    u = sum(b[2 * k + 1] * powers[k] for k in range(m // 2 + 1))
    v = sum(b[2 * k] * powers[k] for k in range(m // 2 + 1))
    return a @ u, v


def _pade13(a, ident):
    b = _B13
    a2 = a @ a
    a4 = a2 @ a2
    a6 = a2 @ a4
    u = a @ (a6 @ (b[13] * a6 + b[11] * a4 + b[9] * a2) + b[7] * a6 + b[5] * a4 + b[3] * a2 + b[1] * ident)
    v = a6 @ (b[12] * a6 + b[10] * a4 + b[8] * a2) + b[6] * a6 + b[4] * a4 + b[2] * a2 + b[0] * ident
    return u, v


def expm(m, t: float = 1.0) -> np.ndarray:
    """Return exp(m * t) for a square (real or complex) matrix ``m``."""
    a = np.asarray(m)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {a.shape}")
    if not np.isfinite(t):
        raise NumericError("time must be finite")
    if not np.all(np.isfinite(a)):
        raise NumericError("matrix has non-finite entries")
    dtype = np.result_type(a.dtype, np.float64)
    a = a.astype(dtype) * t
    n = a.shape[0]
    ident = np.eye(n, dtype=dtype)
    if n == 0:
        return ident

    norm = np.linalg.norm(a, 1)
    if norm == 0.0:
        return ident

    squarings = 0
    for deg in (3, 5, 7, 9):
        if norm <= _THETA[deg]:
            u, v = _pade_low(a, deg, ident)
            break
    else:
        squarings = max(0, int(math.ceil(math.log2(norm / _THETA[13]))))
        a = a / 2.0**squarings
        u, v = _pade13(a, ident)

    r = lu_solve(lu_factor(v - u), v + u)
    for _ in range(squarings):
        r = r @ r
    if not np.all(np.isfinite(r)):
        raise NumericError("matrix exponential overflowed")
    return r
