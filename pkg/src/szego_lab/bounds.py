"""Weighted boundary norms, the inequality constants, and inequality checks.

Norms over E use ``|dt| = |psi'| dtheta`` and integrals over the unit circle
use ``|du| = dtheta`` (see :class:`szego_lab.curve.BoundaryGrid`). With
``W = rho_hat |psi'|`` the constants transplant to

    gamma       = sqrt( int dtheta / W )
    delta(p, q) = ( int W**(-q/p) dtheta )**(1/q)
    gamma_pq    = ( int |D|**(p(2-q)) |psi'|**q dtheta )**(1/p)
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .curve import BoundaryGrid, ConformalPair
from .errors import ConsistencyFailure, ExponentMismatch
from .extremal import ExtremalSolution
from .numerics import ComplexPoly, gauss_legendre, poly_eval
from .szego import OuterFunction, boundary_target, eval_outer
from .weight import make_nu_weight

TOL_REL = 1e-8
TOL_ABS = 1e-12
MU_TOL = 1e-8

THEOREM = "Theorem"
THEOREM_PROOF = "TheoremProofForm"
PROPOSITION = "Proposition"
COROLLARY1 = "Corollary1"
COROLLARY2 = "Corollary2"
FEJER_RIESZ = "FejerRiesz"
HOLDER = "HolderStep"
SUM_BOUND = "SumBound"
MINKOWSKI = "MinkowskiStep"


@dataclass(frozen=True)
class InequalityReport:
    kind: str
    lhs: float
    rhs: float
    inputs: str = ""
    tol_rel: float = TOL_REL
    tol_abs: float = TOL_ABS

    @property
    def slack(self) -> float:
        return self.rhs - self.lhs

    @property
    def passed(self) -> bool:
        return self.lhs <= self.rhs * (1.0 + self.tol_rel) + self.tol_abs

    def as_dict(self) -> dict:
        return {"kind": self.kind, "lhs": self.lhs, "rhs": self.rhs, "slack": self.slack,
                "pass": self.passed, "inputs": self.inputs}


def conjugate(p: float) -> float:
    return p / (p - 1.0)


def lp_norm_boundary(f, weight, grid: BoundaryGrid, p: float) -> float:
    """Discrete ``(int_E |f|**p w |dt|)**(1/p)`` from samples at the grid nodes."""
    if p < 1:
        raise ValueError("p must be >= 1")
    f = np.abs(np.asarray(f))
    return float(np.sum(f ** p * np.asarray(weight) * grid.ds) ** (1.0 / p))


def mu_p(pair: ConformalPair, grid: BoundaryGrid, D: OuterFunction, p: int) -> float:
    """Norm of the normalised target, cross-checked against its closed form.

    Since ``|D|**p = rho_hat |psi'|`` on the circle,
    ``|f*|**p rho |dt| = rho_hat**2 |psi'|**2 dtheta / D(0)**p``.
    """
    direct = lp_norm_boundary(boundary_target(grid, D), grid.rho, grid, p)
    closed = float(np.sum(grid.rho ** 2 * grid.psi_prime_abs ** 2) * grid.dtheta) ** (1.0 / p) / D.d0
    if abs(direct - closed) > MU_TOL * abs(closed):
        raise ConsistencyFailure(f"mu_p routes disagree: {direct!r} vs {closed!r}")
    return direct


def inequality_constants(kind: str, grid: BoundaryGrid, D: OuterFunction | None = None,
                         p: float = 2.0, q: float = 2.0) -> float:
    """``kind`` is one of ``"gamma"``, ``"delta"``, ``"gamma_pq"``."""
    W = grid.rho * grid.psi_prime_abs
    if kind == "gamma":
        return float(np.sqrt(np.sum(1.0 / W) * grid.dtheta))
    if kind == "delta":
        return float((np.sum(W ** (-q / p)) * grid.dtheta) ** (1.0 / q))
    if kind == "gamma_pq":
        if D is None:
            raise ValueError("gamma_pq needs the outer function")
        mod = np.abs(eval_outer(D, grid.u))
        return float((np.sum(mod ** (p * (2.0 - q)) * grid.psi_prime_abs ** q) * grid.dtheta) ** (1.0 / p))
    raise ValueError(f"unknown constant {kind!r}")


def _nu(grid: BoundaryGrid, p: int) -> np.ndarray:
    return make_nu_weight(grid.weight, conjugate(p))(grid.theta)


def theorem_rhs(sol: ExtremalSolution, grid: BoundaryGrid, D: OuterFunction, form: str = "proof") -> float:
    """Right-hand side of the main bound.

    ``form="proof"``: ``(m/2) (||f*||_nu + ||Q||_nu)**(p-1)``.
    ``form="statement"``: ``(m/2) (gamma_pq / D(0) + ||Q||_nu)**(p-1)``.
    """
    p = sol.p
    nu = _nu(grid, p)
    q_norm = lp_norm_boundary(poly_eval(sol.Q, grid.t), nu, grid, p)
    if form == "proof":
        first = lp_norm_boundary(boundary_target(grid, D), nu, grid, p)
    elif form == "statement":
        first = inequality_constants("gamma_pq", grid, D, p, conjugate(p)) / D.d0
    else:
        raise ValueError(f"unknown form {form!r}")
    return 0.5 * sol.m * (first + q_norm) ** (p - 1)


def theorem_chain(sol: ExtremalSolution, grid: BoundaryGrid, D: OuterFunction, lhs: float,
                  inputs: str = "") -> list[InequalityReport]:
    """Every link of the proof, from the lattice supremum to the final bound.

    Returns reports for the Fejer-Riesz step, the Hoelder step, the
    pointwise sum bound, the Minkowski step, and the proof-form theorem.
    """
    p = sol.p
    q = conjugate(p)
    fs = boundary_target(grid, D)
    qv = poly_eval(sol.Q, grid.t)
    nu = _nu(grid, p)
    diffp = np.abs(qv ** p - fs ** p)
    fr_rhs = 0.5 * float(np.sum(diffp * grid.ds))
    ssum = sum(fs ** k * qv ** (p - 1 - k) for k in range(p))
    # |D|^{-p} |phi'|^{-1} = 1 / rho_hat on E
    holder_rhs = 0.5 * sol.m * lp_norm_boundary(ssum / grid.rho, grid.rho, grid, q)
    sum_rhs = 0.5 * sol.m * lp_norm_boundary(np.abs(fs) + np.abs(qv), nu, grid, p) ** (p - 1)
    mink_rhs = 0.5 * sol.m * (lp_norm_boundary(fs, nu, grid, p) + lp_norm_boundary(qv, nu, grid, p)) ** (p - 1)
    return [
        InequalityReport(FEJER_RIESZ, lhs, fr_rhs, inputs),
        InequalityReport(HOLDER, fr_rhs, holder_rhs, inputs),
        InequalityReport(SUM_BOUND, holder_rhs, sum_rhs, inputs),
        InequalityReport(MINKOWSKI, sum_rhs, mink_rhs, inputs),
        InequalityReport(THEOREM_PROOF, lhs, mink_rhs, inputs),
    ]


def holder_step_check(A, B, p: int, inputs: str = "") -> InequalityReport:
    """Pointwise ``|sum_k A^k B^(p-1-k)| <= (|A| + |B|)**(p-1)``; reports the tightest node."""
    A = np.asarray(A, dtype=complex)
    B = np.asarray(B, dtype=complex)
    lhs = np.abs(sum(A ** k * B ** (p - 1 - k) for k in range(p)))
    rhs = (np.abs(A) + np.abs(B)) ** (p - 1)
    j = int(np.argmax(lhs - rhs * (1.0 + TOL_REL)))
    return InequalityReport(HOLDER, float(lhs[j]), float(rhs[j]), inputs)


def minkowski_check(f, g, weight, grid: BoundaryGrid, p: float, inputs: str = "") -> InequalityReport:
    lhs = lp_norm_boundary(np.abs(f) + np.abs(g), weight, grid, p)
    rhs = lp_norm_boundary(f, weight, grid, p) + lp_norm_boundary(g, weight, grid, p)
    return InequalityReport(MINKOWSKI, lhs, rhs, inputs)


def _check_exponents(kind: str, p: float, q: float, r: float) -> None:
    if kind == PROPOSITION:
        if p != 2 or q != 2:
            raise ExponentMismatch(f"Proposition is the L^2 case; got p={p}, q={q}")
    elif kind == COROLLARY1:
        if p <= 1 or q <= 1 or abs(1 / p + 1 / q - 1) > 1e-12:
            raise ExponentMismatch(f"Corollary1 needs conjugate p, q > 1; got p={p}, q={q}")
    elif kind == COROLLARY2:
        if min(p, q, r) < 1 or abs(1 / p + 1 / q - 1 / r) > 1e-12:
            raise ExponentMismatch(f"Corollary2 needs 1/p + 1/q = 1/r with p, q, r >= 1; got {p}, {q}, {r}")
    else:
        raise ValueError(f"unknown embedding inequality {kind!r}")


def check_embedding_inequality(kind: str, Q: ComplexPoly, pair: ConformalPair, grid: BoundaryGrid,
                               p: float = 2.0, q: float = 2.0, r: float = 1.0,
                               inputs: str = "") -> InequalityReport:
    """Disk-side integral of ``|Q(psi(u))|`` against a weighted norm of ``Q`` on E."""
    if grid.pair != pair:
        raise ValueError("grid was built for a different curve")
    _check_exponents(kind, p, q, r)
    qv = np.abs(poly_eval(Q, grid.t))
    if kind == COROLLARY2:
        lhs = float(np.sum(qv ** r) * grid.dtheta) ** (1.0 / r)
    else:
        lhs = float(np.sum(qv) * grid.dtheta)
    const = inequality_constants("gamma" if kind == PROPOSITION else "delta", grid, p=p, q=q)
    rhs = const * lp_norm_boundary(qv, grid.rho, grid, p)
    return InequalityReport(kind, lhs, rhs, inputs)


def fejer_riesz_check(h: ComplexPoly, x: complex, M: int = 1024, K: int = 256, inputs: str = "") -> InequalityReport:
    """``int_[0,x] |h(u)| |du| <= (1/2) int_0^{2 pi} |h(e^{i theta})| dtheta`` for ``|x| <= 1``."""
    if abs(x) > 1.0 + 1e-12:
        raise ValueError("endpoint must lie in the closed unit disk")
    s, w = gauss_legendre(K)
    seg = np.abs(poly_eval(h, x * (s + 1.0) / 2.0))
    lhs = float(np.sum(seg * w) * abs(x) / 2.0)
    theta = 2.0 * np.pi * np.arange(M) / M
    rhs = 0.5 * float(np.sum(np.abs(poly_eval(h, np.exp(1j * theta))))) * 2.0 * np.pi / M
    return InequalityReport(FEJER_RIESZ, lhs, rhs, inputs)
