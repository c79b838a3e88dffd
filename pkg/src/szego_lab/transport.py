"""Antiderivatives ``J_n`` of ``Q_n**p`` and ``Phi`` of the normalised target's p-th power.

``J_n`` is an exact polynomial. ``Phi(z)`` is evaluated after pulling the
path back to the disk: with ``t = psi(u)``,

    Phi(z) = int_[0, phi(z)] D_G(u)**p / D_G(0)**p * psi'(u) du,

so the only quadrature is Gauss-Legendre on a straight segment.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .curve import ConformalPair, map_inverse
from .numerics import ComplexPoly, integrate_segment, poly_antiderivative, poly_eval, poly_pow
from .szego import OuterFunction

DEFAULT_NODES = 64
DEFAULT_NR = 8
DEFAULT_NANG = 512


def compute_Jn(Q: ComplexPoly, p: int, xi: complex) -> ComplexPoly:
    """``J(z) = int_xi^z Q(t)**p dt`` as a polynomial with ``J(xi) = 0``."""
    A = poly_antiderivative(poly_pow(Q, p))
    c = np.array(A.coeffs)
    if len(c):
        c[0] -= poly_eval(A, xi)
    return ComplexPoly(c)


def _phi_integrand(pair: ConformalPair, D: OuterFunction):
    c0 = D.c[0].real

    def f(u):
        return np.exp(D.exponent(u) - c0) * pair.dpsi(u)

    return f


def phi_from_disk(pair: ConformalPair, D: OuterFunction, u, K: int = DEFAULT_NODES, check: bool = True):
    """``Phi(psi(u))`` for points ``u`` of the closed disk (scalar or array)."""
    return integrate_segment(_phi_integrand(pair, D), 0j, u, K=K, check=check)


def compute_phi_integral(pair: ConformalPair, D: OuterFunction, z, K: int = DEFAULT_NODES):
    return phi_from_disk(pair, D, map_inverse(pair, z), K=K)


@dataclass(frozen=True)
class TransportPair:
    Jn: ComplexPoly
    pair: ConformalPair
    D: OuterFunction
    p: int
    segment_nodes: int = DEFAULT_NODES

    def J(self, z):
        return poly_eval(self.Jn, z)

    def phi(self, z):
        return compute_phi_integral(self.pair, self.D, z, self.segment_nodes)


def make_transport(Q: ComplexPoly, pair: ConformalPair, D: OuterFunction, segment_nodes: int = DEFAULT_NODES) -> TransportPair:
    return TransportPair(compute_Jn(Q, D.p, pair.xi), pair, D, D.p, segment_nodes)


def compact_lattice(r_max: float, n_r: int = DEFAULT_NR, n_ang: int = DEFAULT_NANG) -> np.ndarray:
    """Disk points ``r e^{i alpha}``, ``r = r_max j / n_r`` (j >= 1), ``alpha = 2 pi k / n_ang``."""
    if not 0 < r_max < 1:
        raise ValueError("r_max must lie in (0, 1)")
    r = r_max * np.arange(1, n_r + 1) / n_r
    ang = np.exp(2j * np.pi * np.arange(n_ang) / n_ang)
    return (r[:, None] * ang[None, :]).ravel()


def sup_diff_on_compact(
    pair: ConformalPair,
    T: TransportPair,
    r_max: float,
    n_r: int = DEFAULT_NR,
    n_ang: int = DEFAULT_NANG,
    phi_values: np.ndarray | None = None,
) -> float:
    """Lattice maximum of ``|J_n - Phi|`` over ``psi(|u| <= r_max)``.

    A lower bound for the supremum over G. ``phi_values`` may carry a
    precomputed ``Phi`` on the same lattice so it can be shared across degrees.
    """
    u = compact_lattice(r_max, n_r, n_ang)
    if phi_values is None:
        phi_values = phi_from_disk(pair, T.D, u, K=T.segment_nodes)
    return float(np.max(np.abs(T.J(pair.psi(u)) - phi_values)))
