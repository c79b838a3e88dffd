"""Jordan curves given as images of the unit circle under explicit univalent maps.

A curve is described by ``psi(w) = xi + w`` (the disk, shifted) or
``psi(w) = xi + w + a*w**2`` with ``|a| < 1/2``. The inverse map ``phi`` is
computed by Newton iteration seeded with the closed-form quadratic root.

All boundary integrals in the package are written in the parameter
``theta`` of ``u = exp(i*theta)``. The two measures that occur are

* ``|du| = dtheta`` on the unit circle, and
* ``|dt| = |psi'(e^{i theta})| dtheta`` on the curve E,

and ``|phi'(t)| = 1 / |psi'(phi(t))|`` on E. :class:`BoundaryGrid` exposes
these as :attr:`BoundaryGrid.du`, :attr:`BoundaryGrid.ds` and
:attr:`BoundaryGrid.phi_prime_abs` so the transplantation is done in one place.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any

import numpy as np

from .errors import ConfigError, NonConvergence

NEWTON_TOL = 1e-13
NEWTON_MAXITER = 50
DISK_SLACK = 1e-12
INVERSE_SLACK = 1e-10

_KINDS = ("disk", "quadratic")


def _as_complex(value: Any, name: str) -> complex:
    if isinstance(value, (list, tuple)):
        if len(value) != 2:
            raise ConfigError(f"{name} must be [re, im], got {value!r}")
        return complex(float(value[0]), float(value[1]))
    return complex(value)


@dataclass(frozen=True)
class ConformalPair:
    """Univalent map ``psi`` of the closed unit disk and its inverse ``phi``.

    ``psi(0) = xi`` and ``psi'(0) = 1`` for every member of the family, so
    ``phi(xi) = 0`` and ``phi'(xi) = 1``.
    """

    kind: str = "disk"
    a: complex = 0j
    xi: complex = 0j

    def __post_init__(self):
        if self.kind not in _KINDS:
            raise ConfigError(f"unknown curve kind {self.kind!r}; expected one of {_KINDS}")
        object.__setattr__(self, "a", complex(self.a))
        object.__setattr__(self, "xi", complex(self.xi))
        if self.kind == "disk" and self.a != 0:
            raise ConfigError("disk curve takes no coefficient a")
        if self.kind == "quadratic" and not abs(self.a) < 0.5:
            raise ConfigError(f"quadratic map is not univalent on the closed disk for |a| = {abs(self.a)} >= 1/2")

    @classmethod
    def disk(cls, xi: complex = 0j) -> "ConformalPair":
        return cls("disk", 0j, xi)

    @classmethod
    def quadratic(cls, a: complex, xi: complex = 0j) -> "ConformalPair":
        return cls("quadratic", a, xi)

    @classmethod
    def from_config(cls, cfg: dict) -> "ConformalPair":
        if not isinstance(cfg, dict) or "kind" not in cfg:
            raise ConfigError(f"curve spec must be an object with a 'kind' field, got {cfg!r}")
        unknown = set(cfg) - {"kind", "a", "xi"}
        if unknown:
            raise ConfigError(f"unknown curve field(s) {sorted(unknown)}")
        kind = str(cfg["kind"]).lower()
        xi = _as_complex(cfg.get("xi", 0.0), "xi")
        a = _as_complex(cfg.get("a", 0.0), "a")
        return cls(kind, a, xi)

    def to_config(self) -> dict:
        out: dict = {"kind": self.kind}
        if self.kind == "quadratic":
            out["a"] = [self.a.real, self.a.imag]
        if self.xi != 0:
            out["xi"] = [self.xi.real, self.xi.imag]
        return out

    def psi(self, w):
        w = np.asarray(w, dtype=complex)
        if self.kind == "disk":
            return self.xi + w
        return self.xi + w + self.a * w * w

    def dpsi(self, w):
        w = np.asarray(w, dtype=complex)
        if self.kind == "disk":
            return np.ones_like(w)
        return 1.0 + 2.0 * self.a * w


def map_forward(pair: ConformalPair, w):
    """Return ``(psi(w), psi'(w))``; ``w`` may be a scalar or an array."""
    w_arr = np.asarray(w, dtype=complex)
    if np.any(np.abs(w_arr) > 1.0 + DISK_SLACK):
        raise ValueError("map_forward called outside the closed unit disk")
    z, dz = pair.psi(w_arr), pair.dpsi(w_arr)
    if w_arr.ndim == 0:
        return complex(z), complex(dz)
    return z, dz


def _inverse_seed(pair: ConformalPair, z: np.ndarray) -> np.ndarray:
    s = z - pair.xi
    if pair.kind == "disk" or abs(pair.a) < 1e-8:
        return s
    # principal branch picks 1 + 2aw, which has positive real part on the disk
    return (-1.0 + np.sqrt(1.0 + 4.0 * pair.a * s)) / (2.0 * pair.a)


def map_inverse(pair: ConformalPair, z, tol: float = NEWTON_TOL, maxiter: int = NEWTON_MAXITER):
    """Return ``phi(z)`` for ``z`` in the closure of G.

    Raises
    ------
    NonConvergence
        If Newton does not reach ``|psi(w) - z| <= tol`` in ``maxiter`` steps,
        or if the root lies outside the closed disk (``z`` not in G).
    """
    z_arr = np.asarray(z, dtype=complex)
    w = _inverse_seed(pair, z_arr)
    for _ in range(maxiter + 1):
        resid = pair.psi(w) - z_arr
        if np.all(np.abs(resid) <= tol):
            break
        w = w - resid / pair.dpsi(w)
    else:
        raise NonConvergence(f"map_inverse: Newton did not converge in {maxiter} steps")
    if np.any(np.abs(w) > 1.0 + INVERSE_SLACK):
        raise NonConvergence("map_inverse: point lies outside the closed domain")
    return complex(w) if w.ndim == 0 else w


def _frozen(arr: np.ndarray) -> np.ndarray:
    arr = np.array(arr)
    arr.flags.writeable = False
    return arr


@dataclass(frozen=True)
class BoundaryGrid:
    """Equispaced samples of the boundary shared by every quadrature."""

    pair: ConformalPair
    weight: Any
    M: int
    theta: np.ndarray = field(repr=False)
    u: np.ndarray = field(repr=False)
    t: np.ndarray = field(repr=False)
    psi_prime_abs: np.ndarray = field(repr=False)
    rho: np.ndarray = field(repr=False)

    @property
    def dtheta(self) -> float:
        return 2.0 * np.pi / self.M

    @property
    def du(self) -> np.ndarray:
        """Quadrature weights for ``|du|`` on the unit circle."""
        return np.full(self.M, self.dtheta)

    @property
    def ds(self) -> np.ndarray:
        """Quadrature weights for arc length ``|dt|`` on E."""
        return self.psi_prime_abs * self.dtheta

    @property
    def phi_prime_abs(self) -> np.ndarray:
        """``|phi'(t_j)|`` at the boundary nodes."""
        return 1.0 / self.psi_prime_abs

    @property
    def length(self) -> float:
        return float(np.sum(self.ds))


def make_boundary_grid(pair: ConformalPair, weight, M: int = 1024) -> BoundaryGrid:
    M = int(M)
    if M < 64 or M & (M - 1):
        raise ValueError(f"M must be a power of two >= 64, got {M}")
    theta = 2.0 * np.pi * np.arange(M) / M
    u = np.exp(1j * theta)
    t, dz = pair.psi(u), pair.dpsi(u)
    jac = np.abs(dz)
    rho = np.asarray(weight(theta), dtype=float) * np.ones(M)
    if np.min(rho) <= 0:
        raise ValueError("weight must be strictly positive on the boundary")
    if np.min(jac) <= 0:
        raise ValueError("psi' vanishes on the boundary")
    return BoundaryGrid(pair, weight, M, _frozen(theta), _frozen(u), _frozen(t), _frozen(jac), _frozen(rho))
