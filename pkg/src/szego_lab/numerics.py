"""Quadrature rules and a small complex polynomial type."""

from __future__ import annotations

from functools import lru_cache
from typing import Callable, Sequence

import numpy as np

from .errors import NonConvergence

TRIM = 1e-300
SEGMENT_TOL = 1e-10


class ComplexPoly:
    """Polynomial with complex coefficients in ascending order.

    Only coefficients below ``1e-300`` in modulus are trimmed from the top,
    so solver noise in the leading coefficients is kept.
    """

    __slots__ = ("_c",)

    def __init__(self, coeffs: Sequence[complex] = ()):
        c = np.array(coeffs, dtype=complex).ravel()
        nz = np.nonzero(np.abs(c) > TRIM)[0]
        c = c[: nz[-1] + 1] if nz.size else c[:0]
        c.flags.writeable = False
        self._c = c

    @property
    def coeffs(self) -> np.ndarray:
        return self._c

    @property
    def degree(self) -> int:
        """Degree, with ``-1`` for the zero polynomial."""
        return len(self._c) - 1

    def __call__(self, z):
        return poly_eval(self, z)

    def __len__(self):
        return len(self._c)

    def __eq__(self, other):
        if not isinstance(other, ComplexPoly):
            return NotImplemented
        return np.array_equal(self._c, other._c)

    def __repr__(self):
        return f"ComplexPoly({self._c.tolist()!r})"

    def derivative(self) -> "ComplexPoly":
        if len(self._c) <= 1:
            return ComplexPoly()
        return ComplexPoly(self._c[1:] * np.arange(1, len(self._c)))

    def tolist(self) -> list[list[float]]:
        return [[float(v.real), float(v.imag)] for v in self._c]


def poly_eval(P: ComplexPoly, z):
    """Horner evaluation; ``z`` may be an array."""
    z = np.asarray(z, dtype=complex)
    acc = np.zeros_like(z)
    for ck in P.coeffs[::-1]:
        acc = acc * z + ck
    return complex(acc) if acc.ndim == 0 else acc


def poly_pow(P: ComplexPoly, p: int) -> ComplexPoly:
    """``P**p`` by repeated direct convolution; ``p = 0`` gives the constant 1."""
    p = int(p)
    if p < 0:
        raise ValueError("poly_pow needs p >= 0")
    out = np.array([1.0 + 0j])
    if p and not len(P.coeffs):
        return ComplexPoly()
    for _ in range(p):
        out = np.convolve(out, P.coeffs)
    return ComplexPoly(out)


def poly_antiderivative(P: ComplexPoly) -> ComplexPoly:
    """Antiderivative with zero constant term."""
    c = P.coeffs
    if not len(c):
        return ComplexPoly()
    return ComplexPoly(np.concatenate([[0j], c / np.arange(1, len(c) + 1)]))


def integrate_periodic(samples, dtheta: float) -> complex:
    """Rectangle rule over a full period (spectrally accurate for smooth data)."""
    return complex(np.sum(np.asarray(samples)) * dtheta)


@lru_cache(maxsize=32)
def gauss_legendre(K: int) -> tuple[np.ndarray, np.ndarray]:
    x, w = np.polynomial.legendre.leggauss(K)
    x.flags.writeable = False
    w.flags.writeable = False
    return x, w


def _segment_rule(f, z0, z1, K):
    x, wts = gauss_legendre(K)
    half = (z1 - z0) / 2.0
    nodes = (z0 + z1)[..., None] / 2.0 + half[..., None] * x
    return np.sum(f(nodes) * wts, axis=-1) * half


def integrate_segment(
    f: Callable, z0, z1, K: int = 64, tol: float = SEGMENT_TOL, check: bool = True
):
    """Gauss-Legendre value of ``int_[z0, z1] f(u) du``.

    ``f`` must accept arrays. ``z0`` and ``z1`` broadcast, so many segments
    can be integrated at once. With ``check`` the rule is compared against
    one and two node doublings; the first pair agreeing to ``tol`` (relative
    to ``max(1, |I|)``) is accepted.
    """
    if K < 16:
        raise ValueError("integrate_segment needs K >= 16")
    z0 = np.asarray(z0, dtype=complex)
    z1 = np.asarray(z1, dtype=complex)
    z0, z1 = np.broadcast_arrays(z0, z1)
    prev = _segment_rule(f, z0, z1, K)
    if check:
        for k in (2 * K, 4 * K):
            cur = _segment_rule(f, z0, z1, k)
            err = np.max(np.abs(cur - prev) / np.maximum(1.0, np.abs(cur)), initial=0.0)
            prev = cur
            if err <= tol:
                break
        else:
            raise NonConvergence(f"segment quadrature did not stabilise (last change {err:.3e})")
    return complex(prev) if prev.ndim == 0 else prev
