"""Constrained best L^p approximation by polynomials.

The constraint ``Q(xi) = 1`` is eliminated by writing ``Q(z) = 1 + (z - xi) R(z)``
with ``deg R <= n - 1``. The discretised objective

    F(R) = sum_j |f*(t_j) - Q(t_j)|**p * rho_hat_j * |psi'_j| * dtheta

is convex for ``p >= 2``; it is minimised by iteratively reweighted least
squares, which is a single weighted solve when ``p == 2``.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np

from .curve import ConformalPair
from .errors import IllConditioned
from .numerics import ComplexPoly
from .szego import OuterFunction, boundary_target

log = logging.getLogger(__name__)

EPS_IRLS = 1e-10
RTOL = 1e-12
MAX_ITER = 200
COND_LIMIT = 1e12


@dataclass(frozen=True)
class ExtremalSolution:
    n: int
    p: int
    Q: ComplexPoly
    m: float
    iterations: int
    converged: bool
    objective_history: tuple = field(repr=False)
    orthogonalized: bool = False


def constrained_basis(t: np.ndarray, xi: complex, n: int) -> np.ndarray:
    """Columns ``(t - xi) * t**k`` for ``k = 0..n-1``."""
    if n <= 0:
        return np.zeros((len(t), 0), dtype=complex)
    return (t - xi)[:, None] * np.vander(t, n, increasing=True)


def expand_constrained(r: np.ndarray, xi: complex) -> ComplexPoly:
    """Coefficients of ``1 + (z - xi) * R(z)`` from those of ``R``."""
    r = np.asarray(r, dtype=complex)
    out = np.zeros(len(r) + 1, dtype=complex)
    out[0] = 1.0
    out[1:] += r
    out[:-1] -= xi * r
    return ComplexPoly(out)


def _weighted_solve(A: np.ndarray, b: np.ndarray, w: np.ndarray) -> tuple[np.ndarray, bool]:
    """Minimise ``sum w_j |b_j - (A r)_j|**2``.

    Normal equations are used while their condition estimate stays below
    ``COND_LIMIT``; beyond it the weighted basis is orthogonalised (QR) and
    the triangular factor maps the solution back.
    """
    sw = np.sqrt(w)
    Aw = A * sw[:, None]
    bw = b * sw
    G = Aw.conj().T @ Aw
    cond = np.linalg.cond(G)
    if np.isfinite(cond) and cond <= COND_LIMIT:
        return np.linalg.solve(G, Aw.conj().T @ bw), False
    Qf, Rf = np.linalg.qr(Aw)
    if np.linalg.cond(Rf) ** 2 > 1e28:
        raise IllConditioned(f"basis is numerically rank deficient (cond^2 = {np.linalg.cond(Rf) ** 2:.2e})")
    return np.linalg.solve(Rf, Qf.conj().T @ bw), True


def _objective(e: np.ndarray, w0: np.ndarray, p: int) -> float:
    return float(np.sum(np.abs(e) ** p * w0))


def _line_minimiser(e, g, w0, p, iters=30):
    """Newton iteration for the minimiser of ``lam -> sum w0 |e - lam g|**p``."""
    lam = 1.0
    g2 = np.abs(g) ** 2
    for _ in range(iters):
        res = e - lam * g
        a = np.maximum(np.abs(res), 1e-300)
        s = -np.real(np.conj(res) * g)
        h = w0 * a ** (p - 2)
        d2 = np.sum(h * (g2 + (p - 2) * (s / a) ** 2))
        if not d2 > 0:
            break
        delta = np.sum(h * s) / d2
        lam -= delta
        if abs(delta) <= 1e-15 * max(1.0, abs(lam)):
            break
    return float(lam) if np.isfinite(lam) else 1.0


def solve_extremal(
    pair: ConformalPair,
    grid,
    D: OuterFunction,
    n: int,
    p: int,
    eps_irls: float = EPS_IRLS,
    rtol: float = RTOL,
    max_iter: int = MAX_ITER,
) -> ExtremalSolution:
    """Degree-``n`` polynomial ``Q_n`` with ``Q_n(xi) = 1`` minimising the L^p(rho) error."""
    if n < 0:
        raise ValueError("n must be >= 0")
    if int(p) != p or p < 2:
        raise ValueError(f"p must be an integer >= 2, got {p}")
    p = int(p)
    w0 = grid.rho * grid.ds
    b = boundary_target(grid, D) - 1.0
    if n == 0:
        F = _objective(b, w0, p)
        return ExtremalSolution(0, p, ComplexPoly([1.0]), F ** (1.0 / p), 0, True, (F,))

    A = constrained_basis(grid.t, pair.xi, n)
    r, ortho = _weighted_solve(A, b, w0)
    e = b - A @ r
    F = _objective(e, w0, p)
    history = [F]
    iterations = 1
    converged = p == 2
    while not converged and iterations < max_iter:
        omega = np.maximum(np.abs(e), eps_irls) ** (p - 2) * w0
        r_ls, o = _weighted_solve(A, b, omega)
        ortho |= o
        iterations += 1
        # plain IRLS overshoots for p > 3; the step length along the reweighted
        # direction is chosen by minimising the (convex) objective on that line
        direction = r_ls - r
        g = A @ direction
        step = _line_minimiser(e, g, w0, p)
        accepted = False
        for step in (step, 1.0 / (p - 1), 0.5 / (p - 1), 0.25 / (p - 1)):
            r_try = r + step * direction
            e_try = b - A @ r_try
            F_try = _objective(e_try, w0, p)
            if F_try <= F:
                accepted = True
                break
        if not accepted:
            converged = True
            break
        decrease = (F - F_try) / F if F > 0 else 0.0
        r, e, F = r_try, e_try, F_try
        history.append(F)
        if decrease < rtol:
            converged = True
    if not converged:
        log.warning("IRLS stopped after %d iterations without reaching rtol=%g", iterations, rtol)
    return ExtremalSolution(
        n, p, expand_constrained(r, pair.xi), F ** (1.0 / p), iterations, converged, tuple(history), ortho
    )


def ls_oracle_p2(grid, target: np.ndarray, n: int) -> ComplexPoly:
    """Independent p = 2 reference: SVD least squares in the same parameterisation."""
    if n < 1:
        raise ValueError("ls_oracle_p2 needs n >= 1")
    xi = grid.pair.xi
    sw = np.sqrt(grid.rho * grid.ds)
    A = constrained_basis(grid.t, xi, n) * sw[:, None]
    r, *_ = np.linalg.lstsq(A, (np.asarray(target) - 1.0) * sw, rcond=None)
    return expand_constrained(r, xi)
