"""Boundary weights, written as functions of the circle parameter theta.

Each weight is the pullback ``rho_hat(theta) = rho(psi(e^{i theta}))`` so
that it is defined on every curve of the family. The built-ins are strictly
positive with bounded ``log``, hence the Szego condition holds for all of
them; moment finiteness is automatic because the curves are bounded.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .curve import _as_complex
from .errors import ConfigError

_KINDS = ("const", "expcos", "szego_a")


@dataclass(frozen=True)
class WeightSpec:
    kind: str = "const"
    c: float = 1.0
    a: complex = 0j

    def __post_init__(self):
        if self.kind not in _KINDS:
            raise ConfigError(f"unknown weight kind {self.kind!r}; expected one of {_KINDS}")
        object.__setattr__(self, "a", complex(self.a))
        object.__setattr__(self, "c", float(self.c))
        if self.kind == "const" and not self.c > 0:
            raise ConfigError(f"const weight needs c > 0, got {self.c}")
        if self.kind == "szego_a" and not abs(self.a) < 1:
            raise ConfigError(f"szego_a weight needs |a| < 1, got {abs(self.a)}")

    @classmethod
    def from_config(cls, cfg: dict) -> "WeightSpec":
        if not isinstance(cfg, dict) or "kind" not in cfg:
            raise ConfigError(f"weight spec must be an object with a 'kind' field, got {cfg!r}")
        unknown = set(cfg) - {"kind", "c", "a"}
        if unknown:
            raise ConfigError(f"unknown weight field(s) {sorted(unknown)}")
        return cls(str(cfg["kind"]).lower(), float(cfg.get("c", 1.0)), _as_complex(cfg.get("a", 0.0), "a"))

    def to_config(self) -> dict:
        if self.kind == "const":
            return {"kind": "const", "c": self.c}
        if self.kind == "szego_a":
            return {"kind": "szego_a", "a": [self.a.real, self.a.imag]}
        return {"kind": "expcos"}

    def __call__(self, theta):
        theta = np.asarray(theta, dtype=float)
        if self.kind == "const":
            return np.full_like(theta, self.c)
        if self.kind == "expcos":
            return np.exp(np.cos(theta))
        return np.abs(1.0 - self.a * np.exp(1j * theta)) ** 2


def eval_weight(spec: WeightSpec, theta):
    out = spec(theta)
    return float(out) if np.ndim(out) == 0 else out


@dataclass(frozen=True)
class NuWeight:
    """Dual weight ``rho**(1 - q)`` used by the theorem's L^q step."""

    base: WeightSpec
    q: float

    def __call__(self, theta):
        return self.base(theta) ** (1.0 - self.q)


def make_nu_weight(spec: WeightSpec, q: float) -> NuWeight:
    if not q > 1:
        raise ValueError(f"conjugate exponent q must exceed 1, got {q}")
    return NuWeight(spec, float(q))


def validate_szego_condition(grid) -> float:
    """Trapezoid value of the integral of ``log rho_hat`` over one period.

    This is the transplanted form of ``int_E log(rho) |phi'| |dt|``.
    """
    vals = np.log(grid.rho)
    if not np.all(np.isfinite(vals)):
        raise ValueError("log weight is not finite on the grid")
    return float(np.sum(vals) * grid.dtheta)
