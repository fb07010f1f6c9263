"""Lobachevsky function and the edge/orthoscheme kernels built from it.

``lob(x) = -int_0^x log|2 sin t| dt``.  It is odd and pi-periodic, so the
evaluation reduces ``x`` to ``r`` in ``[-pi/2, pi/2]`` and sums the
Bernoulli expansion of the Clausen function

    Cl2(t) = t - t log|t| + sum_k |B_2k| t^(2k+1) / (2k (2k+1)!),   |t| < 2 pi

at ``t = 2r``, using ``lob(r) = Cl2(2r) / 2``.  On the reduced range the
terms shrink by a factor of about 4 each, so ~30 terms give full double
precision everywhere, including near the logarithmic singularities at
multiples of pi.  The plain Fourier series is kept as :func:`lob_fourier`
for cross-checking.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .errors import PhiOutOfRange

__all__ = [
    "SpecialFnConfig",
    "LOB_MAX",
    "lob",
    "lob_prime",
    "lob_second",
    "lob_fourier",
    "i_plus",
    "i_minus",
    "omega",
    "ortho_v",
]

HALF_PI = 0.5 * math.pi

# lob(pi/6) = Cl2(pi/3) / 2, the global maximum of |lob|
LOB_MAX = 0.50747080320482708


@dataclass(frozen=True)
class SpecialFnConfig:
    """Truncation controls for :func:`lob`.

    ``series_terms = 0`` picks the smallest truncation whose worst-case tail
    on the reduced range is below ``tol``.
    """

    series_terms: int = 0
    tol: float = 1e-17

    def __post_init__(self):
        if self.series_terms < 0:
            raise ValueError("series_terms must be non-negative")
        if not self.tol > 0:
            raise ValueError("tol must be positive")


DEFAULT_CONFIG = SpecialFnConfig()


@lru_cache(maxsize=None)
def _bernoulli(n: int) -> tuple[Fraction, ...]:
    """B_0 .. B_n (B_1 = -1/2 convention; only even indices are used)."""
    b = [Fraction(1)]
    for m in range(1, n + 1):
        acc = Fraction(0)
        binom = 1
        for k in range(m):
            acc += binom * b[k]
            binom = binom * (m + 1 - k) // (k + 1)
        b.append(-acc / (m + 1))
    return tuple(b)


@lru_cache(maxsize=None)
def _clausen_coeffs(terms: int) -> np.ndarray:
    b = _bernoulli(2 * terms)
    out = []
    for k in range(1, terms + 1):
        c = abs(b[2 * k]) / (2 * k * math.factorial(2 * k + 1))
        out.append(float(c))
    return np.array(out)


@lru_cache(maxsize=None)
def _terms_for(tol: float) -> int:
    # tail bound at |t| = pi; terms decay geometrically (ratio ~ 1/4)
    for k in range(1, 200):
        c = _clausen_coeffs(k)[-1]
        if c * math.pi ** (2 * k + 1) * 4.0 / 3.0 < tol:
            return k
    return 200


def _as_output(x, value):
    if np.ndim(value) == 0 and np.ndim(x) == 0:
        return float(value)
    return value


def lob(x, config: SpecialFnConfig = DEFAULT_CONFIG):
    """Lobachevsky function, elementwise."""
    x = np.asarray(x, dtype=float)
    terms = config.series_terms or _terms_for(config.tol)
    coeffs = _clausen_coeffs(terms)

    r = x - math.pi * np.round(x / math.pi)
    t = 2.0 * r
    t2 = t * t
    poly = np.zeros_like(t)
    for c in coeffs[::-1]:
        poly = poly * t2 + c
    with np.errstate(divide="ignore", invalid="ignore"):
        head = np.where(t == 0.0, 0.0, t - t * np.log(np.abs(t)))
    value = 0.5 * (head + poly * t * t2)
    return _as_output(x, value)


def lob_prime(x):
    """Derivative ``-log|2 sin x|`` (``+inf`` at multiples of pi)."""
    x = np.asarray(x, dtype=float)
    with np.errstate(divide="ignore"):
        value = -np.log(np.abs(2.0 * np.sin(x)))
    return _as_output(x, value)


def lob_second(x):
    """Second derivative ``-cot x``."""
    x = np.asarray(x, dtype=float)
    with np.errstate(divide="ignore"):
        value = -np.cos(x) / np.sin(x)
    return _as_output(x, value)


def lob_fourier(x, terms: int = 100_000, chunk: int = 20_000):
    """Partial sum ``(1/2) sum_{n<=terms} sin(2 n x) / n^2``.

    Slow (the tail decays like 1/terms); meant as an independent check of
    :func:`lob`, not for production use.
    """
    x = np.asarray(x, dtype=float)
    flat = x.reshape(-1)
    acc = np.zeros_like(flat)
    for start in range(1, terms + 1, chunk):
        n = np.arange(start, min(start + chunk, terms + 1), dtype=float)
        acc += (np.sin(2.0 * np.outer(flat, n)) / n**2).sum(axis=1)
    return _as_output(x, 0.5 * acc.reshape(x.shape))


def _check_phi(phi):
    phi_arr = np.asarray(phi, dtype=float)
    if np.any(~((phi_arr > 0.0) & (phi_arr < math.pi))):
        raise PhiOutOfRange(f"phi must lie in (0, pi), got {phi!r}")
    return phi_arr


def i_plus(phi, x):
    """``lob(x) + lob(phi - x) - 2 lob(phi/2)``; concave on [0, phi], max 0."""
    phi = _check_phi(phi)
    x = np.asarray(x, dtype=float)
    value = lob(x) + lob(phi - x) - 2.0 * lob(0.5 * phi)
    return _as_output(np.broadcast_to(x, np.broadcast(x, phi).shape), value)


def i_minus(phi, x):
    """``lob(x) - lob(phi + x) + 2 lob(pi/2 + phi/2)``.

    Companion of :func:`i_plus` for the excess variable; with this choice
    the edge-function form and the plain Lobachevsky form of the functional
    coincide exactly.
    """
    phi = _check_phi(phi)
    x = np.asarray(x, dtype=float)
    value = lob(x) - lob(phi + x) + 2.0 * lob(HALF_PI + 0.5 * phi)
    return _as_output(np.broadcast_to(x, np.broadcast(x, phi).shape), value)


def omega(gamma, x, y):
    """``arctan(cos x sin gamma / (cos y + cos x cos gamma))`` in [-pi/2, pi/2].

    A vanishing denominator maps to ``sign(numerator) * pi/2``; 0/0 maps to 0.
    """
    gamma = np.asarray(gamma, dtype=float)
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    num = np.cos(x) * np.sin(gamma)
    den = np.cos(y) + np.cos(x) * np.cos(gamma)
    num, den = np.broadcast_arrays(num, den)
    with np.errstate(divide="ignore", invalid="ignore"):
        value = np.where(den == 0.0, np.sign(num) * HALF_PI, np.arctan(num / den))
    shape_ref = np.broadcast_to(x, np.broadcast(gamma, x, y).shape)
    return _as_output(shape_ref, value)


def ortho_v(x, y):
    """Orthoscheme kernel ``lob(x+pi/2-y)/4 + lob(-x+pi/2-y)/4 + lob(y)/2``."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    value = 0.25 * lob(x + HALF_PI - y) + 0.25 * lob(-x + HALF_PI - y) + 0.5 * lob(y)
    return _as_output(np.broadcast_to(x, np.broadcast(x, y).shape), value)
