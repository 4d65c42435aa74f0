"""Exact-size 3x3 linear algebra for stability certificates.

Everything here is closed form: determinants by cofactor expansion,
eigenvalues as roots of the characteristic cubic (trigonometric form for
three real roots, Cardano otherwise, one Newton polish per root), and the
second additive compound whose spectrum is the pairwise sums of the source
matrix's eigenvalues.  No iterative eigensolvers, no n x n generality.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "det3",
    "trace3",
    "eigenvalues3",
    "second_additive_compound",
    "hurwitz_certificate",
    "CertificateReport",
]


def _as_matrix3(m) -> np.ndarray:
    m = np.asarray(m, dtype=float)
    if m.shape != (3, 3):
        raise ValueError(f"expected a 3x3 matrix, got shape {m.shape}")
    return m


def det3(m) -> float:
    """Determinant by cofactor expansion along the first row."""
    m = _as_matrix3(m)
    return float(
        m[0, 0] * (m[1, 1] * m[2, 2] - m[1, 2] * m[2, 1])
        - m[0, 1] * (m[1, 0] * m[2, 2] - m[1, 2] * m[2, 0])
        + m[0, 2] * (m[1, 0] * m[2, 1] - m[1, 1] * m[2, 0])
    )


def trace3(m) -> float:
    m = _as_matrix3(m)
    return float(m[0, 0] + m[1, 1] + m[2, 2])


def _second_invariant(m: np.ndarray) -> float:
    # Sum of the three principal 2x2 minors (coefficient of lambda in the
    # characteristic polynomial).
    return float(
        (m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0])
        + (m[0, 0] * m[2, 2] - m[0, 2] * m[2, 0])
        + (m[1, 1] * m[2, 2] - m[1, 2] * m[2, 1])
    )


def _cbrt(x: float) -> float:
    return math.copysign(abs(x) ** (1.0 / 3.0), x)


def _polish(z: complex, a: float, b: float, c: float) -> complex:
    """One Newton step on p(z) = z^3 + a z^2 + b z + c, kept only if it helps."""
    p = ((z + a) * z + b) * z + c
    dp = (3.0 * z + 2.0 * a) * z + b
    if dp == 0:
        return z
    zn = z - p / dp
    pn = ((zn + a) * zn + b) * zn + c
    return zn if abs(pn) <= abs(p) else z


def eigenvalues3(m) -> np.ndarray:
    """The three eigenvalues of a real 3x3 matrix.

    Roots of det(m - lambda I) computed from the monic characteristic cubic,
    sorted by descending real part, then descending imaginary part.  Complex
    eigenvalues come in exact conjugate pairs.
    """
    m = _as_matrix3(m)
    # lambda^3 + a lambda^2 + b lambda + c
    a = -trace3(m)
    b = _second_invariant(m)
    c = -det3(m)

    # Depressed cubic t^3 + p t + q with lambda = t - a/3.
    shift = a / 3.0
    p = b - a * a / 3.0
    q = (2.0 * a * a * a - 9.0 * a * b) / 27.0 + c
    disc = -4.0 * p * p * p - 27.0 * q * q

    roots: list[complex]
    if disc >= 0.0 and p < 0.0:
        # Three real roots (trigonometric form).
        rho = 2.0 * math.sqrt(-p / 3.0)
        arg = 3.0 * q / (p * rho)
        arg = min(1.0, max(-1.0, arg))
        theta = math.acos(arg) / 3.0
        ts = [rho * math.cos(theta - 2.0 * math.pi * k / 3.0) for k in range(3)]
        roots = [complex(t - shift, 0.0) for t in ts]
        roots = [_polish(z, a, b, c) for z in roots]
        # Real cubic with real starting points: Newton stays on the real axis.
        roots = [complex(z.real, 0.0) for z in roots]
    elif disc >= 0.0:
        # p >= 0 and disc >= 0 forces p = q = 0: a triple real root.
        roots = [complex(-shift, 0.0)] * 3
    else:
        # One real root plus a conjugate pair (Cardano).
        s = math.sqrt(q * q / 4.0 + p * p * p / 27.0)
        w1 = -q / 2.0 + s
        w2 = -q / 2.0 - s
        big = w1 if abs(w1) >= abs(w2) else w2
        aa = _cbrt(big)
        bb = 0.0 if aa == 0.0 else -p / (3.0 * aa)
        t0 = aa + bb
        real_root = _polish(complex(t0 - shift, 0.0), a, b, c)
        r = real_root.real
        # Deflate: remaining quadratic in t is t^2 + t0 t + (p + t0^2); its
        # roots are re-expressed around the polished real root for accuracy.
        # For the monic cubic, the pair sums to -a - r and multiplies to -c/r.
        re_pair = (-a - r) / 2.0
        prod = -c / r if r != 0.0 else b
        im2 = prod - re_pair * re_pair
        im = math.sqrt(im2) if im2 > 0.0 else 0.0
        z = _polish(complex(re_pair, im), a, b, c)
        roots = [complex(r, 0.0), z, z.conjugate()]

    roots.sort(key=lambda z: (-z.real, -z.imag))
    return np.array(roots, dtype=complex)


def second_additive_compound(m) -> np.ndarray:
    """Second additive compound of a 3x3 matrix.

    Its eigenvalues are the pairwise sums lambda_i + lambda_j (i < j) of the
    eigenvalues of ``m``; the sign of its determinant enters the Hurwitz
    certificate below.
    """
    m = _as_matrix3(m)
    return np.array(
        [
            [m[0, 0] + m[1, 1], m[1, 2], -m[0, 2]],
            [m[2, 1], m[0, 0] + m[2, 2], m[0, 1]],
            [-m[2, 0], m[1, 0], m[1, 1] + m[2, 2]],
        ]
    )


@dataclass(frozen=True)
class CertificateReport:
    """Trace/determinant/compound-determinant stability certificate."""

    trace: float
    det: float
    compound_det: float
    stable: bool


def hurwitz_certificate(m) -> CertificateReport:
    """Certify that all eigenvalues of ``m`` lie in the open left half-plane.

    ``stable`` is true iff trace, determinant, and the determinant of the
    second additive compound are all strictly negative.  For 3x3 matrices
    this is equivalent to the Routh-Hurwitz conditions, but only the
    sufficiency direction (stable=True implies Hurwitz) is relied upon.
    """
    m = _as_matrix3(m)
    tr = trace3(m)
    d = det3(m)
    cd = det3(second_additive_compound(m))
    return CertificateReport(tr, d, cd, tr < 0.0 and d < 0.0 and cd < 0.0)
