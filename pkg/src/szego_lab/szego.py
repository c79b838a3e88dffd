"""Szego (outer) functions built from boundary data.

With ``W(theta) = rho_hat(theta) * |psi'(e^{i theta})|`` and Fourier
coefficients ``c_k`` of ``log W``, the outer function is

    D_G(w) = exp{(c_0 + 2 * sum_{k>=1} c_k w^k) / p},

the Herglotz-kernel integral written as a power series. On the circle
``Re`` of the exponent is ``log W / p``, so ``|D_G|**p = W``, i.e.
``|D|**p * |phi'| = rho`` on E.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np

from .curve import ConformalPair, map_inverse
from .errors import TruncationWarning

DEFAULT_K = 256
TAIL_TOL = 1e-13
SERIES_EPS = 1e-15


@dataclass(frozen=True)
class OuterFunction:
    p: int
    c: np.ndarray = field(repr=False)
    K: int
    tail: float

    @property
    def series(self) -> np.ndarray:
        """Taylor coefficients of the exponent ``c_0 + 2 sum c_k w^k``."""
        s = 2.0 * self.c
        s[0] = self.c[0]
        return s

    @property
    def d0(self) -> float:
        """``D_G(0) = exp(c_0 / p)``, real and positive."""
        return float(np.exp(self.c[0].real / self.p))

    def exponent(self, w):
        return np.polynomial.polynomial.polyval(np.asarray(w, dtype=complex), self._series)

    def __post_init__(self):
        s = self.series
        # trailing coefficients at the FFT rounding floor carry no signal
        mag = np.abs(s)
        keep = np.nonzero(mag > SERIES_EPS * max(1.0, mag.max()))[0]
        s = s[: keep[-1] + 1] if keep.size else s[:1]
        s.flags.writeable = False
        object.__setattr__(self, "_series", s)


def build_outer(grid, p: int, K: int = DEFAULT_K) -> OuterFunction:
    if int(p) != p or p < 2:
        raise ValueError(f"p must be an integer >= 2, got {p}")
    if K > grid.M // 2:
        raise ValueError(f"K={K} exceeds M/2={grid.M // 2}")
    log_w = np.log(grid.rho * grid.psi_prime_abs)
    coeffs = np.fft.fft(log_w) / grid.M
    c = np.array(coeffs[: K + 1])
    if abs(c[0].imag) > 1e-12:
        raise ValueError("mean of log W has a nonzero imaginary part")
    c[0] = c[0].real
    c.flags.writeable = False
    tail = float(abs(c[K]))
    if tail > TAIL_TOL:
        warnings.warn(f"|c_K| = {tail:.2e} > {TAIL_TOL:g}; weight too rough for K={K}", TruncationWarning, stacklevel=2)
    return OuterFunction(int(p), c, int(K), tail)


def eval_outer(D: OuterFunction, w):
    out = np.exp(D.exponent(w) / D.p)
    return complex(out) if np.ndim(out) == 0 else out


def eval_outer_power(D: OuterFunction, w):
    """``D_G(w)**p`` via the exponent, free of branch choices."""
    out = np.exp(D.exponent(w))
    return complex(out) if np.ndim(out) == 0 else out


def eval_target(pair: ConformalPair, D: OuterFunction, z):
    """Normalised target ``D_G(phi(z)) / D_G(0)``; equals 1 at the base point."""
    return eval_outer(D, map_inverse(pair, z)) / D.d0


def boundary_target(grid, D: OuterFunction) -> np.ndarray:
    """Samples of the normalised target at the grid nodes ``t_j``."""
    return np.exp(D.exponent(grid.u) / D.p) / D.d0


def boundary_modulus_error(grid, D: OuterFunction) -> float:
    """Max relative defect of ``|D|**p / |psi'| = rho_hat`` over the grid."""
    lhs = np.abs(eval_outer(D, grid.u)) ** D.p * grid.phi_prime_abs
    return float(np.max(np.abs(lhs - grid.rho) / grid.rho))


def modulus_lower_bound(D: OuterFunction) -> float:
    """Lower bound for ``|D_G|`` on the closed disk from the exponent series."""
    return float(np.exp(-np.sum(np.abs(D.series)) / D.p))
