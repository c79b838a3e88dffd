"""Experiment driver: theorem matrix, convergence sweeps and randomized inequality trials.

Cells of a matrix run concurrently on a thread pool (``SZEGO_LAB_THREADS``
caps the worker count, 0 means automatic). Rows are re-sorted into input
order before they are returned, so output never depends on scheduling.
"""

from __future__ import annotations

import csv
import hashlib
import io
import json
import logging
import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import bounds
from .curve import ConformalPair, make_boundary_grid
from .errors import ConfigError
from .extremal import solve_extremal
from .numerics import ComplexPoly
from .szego import build_outer
from .transport import compact_lattice, compute_Jn, phi_from_disk
from .weight import WeightSpec

log = logging.getLogger(__name__)

CSV_COLUMNS = ("config_digest", "n", "m_n", "lhs", "rhs_proof", "rhs_statement", "slack", "pass", "ms")
FLOAT_FMT = "%.15e"
RATE_FLOOR = 1e-13
MAX_RANDOM_DEGREE = 20

_CONFIG_KEYS = {
    "curve", "curves", "weight", "weights", "p", "n", "n_min", "n_max", "M", "K", "segment_nodes",
    "radii", "n_r", "n_ang", "seed", "trials",
}


def _listify(value, name):
    if isinstance(value, (list, tuple)):
        return list(value)
    if value is None:
        raise ConfigError(f"{name} is required", key=name)
    return [value]


@dataclass(frozen=True)
class ExperimentConfig:
    curves: tuple = (ConformalPair(),)
    weights: tuple = (WeightSpec(),)
    p: tuple = (2,)
    n_min: int = 0
    n_max: int = 10
    M: int = 1024
    K: int = 256
    segment_nodes: int = 64
    radii: tuple = (0.5, 0.9, 0.95)
    n_r: int = 8
    n_ang: int = 512
    seed: int = 0
    trials: int = 200

    @classmethod
    def from_dict(cls, d: dict) -> "ExperimentConfig":
        if not isinstance(d, dict):
            raise ConfigError("configuration must be a JSON object")
        unknown = set(d) - _CONFIG_KEYS
        if unknown:
            key = sorted(unknown)[0]
            raise ConfigError(f"unknown configuration key {key!r}", key=key)
        kw: dict = {}

        def parse(key, fn):
            try:
                return fn(d[key])
            except ConfigError as exc:
                raise ConfigError(str(exc), key=key) from None
            except (TypeError, ValueError) as exc:
                raise ConfigError(f"bad value for {key!r}: {exc}", key=key) from None

        for single, plural, maker in (("curve", "curves", ConformalPair.from_config),
                                      ("weight", "weights", WeightSpec.from_config)):
            if plural in d:
                kw[plural] = parse(plural, lambda v: tuple(maker(x) for x in _listify(v, plural)))
            elif single in d:
                kw[plural] = parse(single, lambda v: (maker(v),))
        if "p" in d:
            kw["p"] = parse("p", lambda v: tuple(_int_exponent(x) for x in _listify(v, "p")))
        if "n" in d:
            kw["n_min"] = kw["n_max"] = parse("n", int)
        for key in ("n_min", "n_max", "M", "K", "segment_nodes", "n_r", "n_ang", "seed", "trials"):
            if key in d:
                kw[key] = parse(key, int)
        if "radii" in d:
            kw["radii"] = parse("radii", lambda v: tuple(float(x) for x in _listify(v, "radii")))
        if "K" not in kw and "M" in kw and kw["M"] > 0:
            # an unspecified truncation follows a small grid down
            kw["K"] = min(cls.K, kw["M"] // 2)
        cfg = cls(**kw)
        cfg.validate()
        return cfg

    def validate(self) -> None:
        if not self.curves or not self.weights or not self.p:
            raise ConfigError("curves, weights and p must be non-empty")
        if self.M < 64 or self.M & (self.M - 1):
            raise ConfigError(f"M must be a power of two >= 64, got {self.M}", key="M")
        if not 1 <= self.K <= self.M // 2:
            raise ConfigError(f"K must lie in [1, M/2], got {self.K}", key="K")
        if self.segment_nodes < 16:
            raise ConfigError("segment_nodes must be >= 16", key="segment_nodes")
        if not 0 <= self.n_min <= self.n_max:
            raise ConfigError(f"need 0 <= n_min <= n_max, got {self.n_min}..{self.n_max}", key="n_max")
        if not self.radii or any(not 0 < r < 1 for r in self.radii):
            raise ConfigError(f"radii must lie in (0, 1), got {list(self.radii)}", key="radii")
        if self.n_r < 1 or self.n_ang < 1 or self.trials < 0:
            raise ConfigError("n_r, n_ang must be positive and trials non-negative")

    def cells(self) -> list[tuple[ConformalPair, WeightSpec, int]]:
        return [(c, w, p) for c in self.curves for w in self.weights for p in self.p]

    def cell_dict(self, pair: ConformalPair, weight: WeightSpec, p: int) -> dict:
        return {"curve": pair.to_config(), "weight": weight.to_config(), "p": p, "M": self.M, "K": self.K,
                "segment_nodes": self.segment_nodes, "radii": list(self.radii), "n_r": self.n_r,
                "n_ang": self.n_ang}


def _int_exponent(x) -> int:
    if isinstance(x, bool) or float(x) != int(float(x)) or int(float(x)) < 2:
        raise ConfigError(f"exponents must be integers >= 2, got {x!r}", key="p")
    return int(float(x))


def config_digest(cell: dict) -> str:
    blob = json.dumps(cell, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(blob.encode()).hexdigest()[:12]


@dataclass(frozen=True)
class ReportRow:
    config_digest: str
    n: int
    m_n: float
    lhs: float
    rhs_proof: float
    rhs_statement: float
    ms: float = 0.0
    converged: bool = True
    chain: tuple = field(default=(), repr=False, compare=False)

    @property
    def report(self) -> bounds.InequalityReport:
        return bounds.InequalityReport(bounds.THEOREM_PROOF, self.lhs, self.rhs_proof)

    @property
    def slack(self) -> float:
        return self.report.slack

    @property
    def passed(self) -> bool:
        return self.report.passed


def _threads() -> int | None:
    raw = os.environ.get("SZEGO_LAB_THREADS", "0").strip() or "0"
    try:
        n = int(raw)
    except ValueError:
        raise ConfigError(f"SZEGO_LAB_THREADS must be an integer, got {raw!r}") from None
    return None if n <= 0 else n


def run_cell(cfg: ExperimentConfig, pair: ConformalPair, weight: WeightSpec, p: int,
             record_timings: bool = False) -> list[ReportRow]:
    """All degrees ``n_min..n_max`` of one (curve, weight, p) cell."""
    digest = config_digest(cfg.cell_dict(pair, weight, p))
    grid = make_boundary_grid(pair, weight, cfg.M)
    D = build_outer(grid, p, cfg.K)
    u = np.concatenate([compact_lattice(r, cfg.n_r, cfg.n_ang) for r in cfg.radii])
    z = pair.psi(u)
    phi_vals = phi_from_disk(pair, D, u, K=cfg.segment_nodes)
    rows = []
    for n in range(cfg.n_min, cfg.n_max + 1):
        t0 = time.perf_counter()
        sol = solve_extremal(pair, grid, D, n, p)
        J = compute_Jn(sol.Q, p, pair.xi)
        lhs = float(np.max(np.abs(J(z) - phi_vals)))
        label = f"{digest} n={n}"
        chain = bounds.theorem_chain(sol, grid, D, lhs, label)
        rhs_proof = chain[-1].rhs
        rhs_statement = bounds.theorem_rhs(sol, grid, D, "statement")
        ms = (time.perf_counter() - t0) * 1e3 if record_timings else 0.0
        rows.append(ReportRow(digest, n, sol.m, lhs, rhs_proof, rhs_statement, ms, sol.converged, tuple(chain)))
    return rows


def run_theorem_matrix(cfg: ExperimentConfig, record_timings: bool = False) -> list[ReportRow]:
    cells = cfg.cells()
    with ThreadPoolExecutor(max_workers=_threads()) as pool:
        results = list(pool.map(lambda c: run_cell(cfg, *c, record_timings=record_timings), cells))
    return [row for rows in results for row in rows]


def decay_rate(ns, ms) -> float | None:
    """Least-squares slope of ``log m_n`` against ``n`` over the tail with ``m_n > 1e-13``."""
    pts = [(n, m) for n, m in zip(ns, ms) if m > RATE_FLOOR]
    if len(pts) < 3:
        return None
    x = np.array([n for n, _ in pts], dtype=float)
    y = np.log([m for _, m in pts])
    return float(np.polyfit(x, y, 1)[0])


def run_convergence(cfg: ExperimentConfig, record_timings: bool = False) -> tuple[list[ReportRow], dict]:
    """Theorem rows plus the fitted decay rate of ``m_n`` for each cell."""
    rows = run_theorem_matrix(cfg, record_timings)
    rates = {}
    for digest in dict.fromkeys(r.config_digest for r in rows):
        group = [r for r in rows if r.config_digest == digest]
        rates[digest] = decay_rate([r.n for r in group], [r.m_n for r in group])
    return rows, rates


def random_poly(rng: np.random.Generator, max_degree: int = MAX_RANDOM_DEGREE) -> ComplexPoly:
    """Degree uniform in ``[0, max_degree]``, i.i.d. standard complex normal coefficients."""
    d = int(rng.integers(0, max_degree + 1))
    c = (rng.standard_normal(d + 1) + 1j * rng.standard_normal(d + 1)) / np.sqrt(2.0)
    return ComplexPoly(c)


_KIND_IDS = {bounds.PROPOSITION: 1, bounds.COROLLARY1: 2, bounds.COROLLARY2: 3, bounds.FEJER_RIESZ: 4}


def trial_rng(seed: int, kind: str, index: int) -> np.random.Generator:
    """Independent stream per (seed, kind, trial index)."""
    return np.random.default_rng([int(seed), _KIND_IDS[kind], int(index)])


def _trial(cfg: ExperimentConfig, kind: str, index: int, grids: dict) -> bounds.InequalityReport:
    rng = trial_rng(cfg.seed, kind, index)
    if kind == bounds.FEJER_RIESZ:
        h = random_poly(rng)
        x = np.sqrt(rng.uniform()) * np.exp(2j * np.pi * rng.uniform())
        return bounds.fejer_riesz_check(h, complex(x), M=cfg.M, inputs=f"seed={cfg.seed} trial={index}")
    combos = list(grids)
    pair, weight = combos[index % len(combos)]
    grid = grids[(pair, weight)]
    Q = random_poly(rng)
    if kind == bounds.PROPOSITION:
        p = q = r = 2.0
    elif kind == bounds.COROLLARY1:
        p = float(rng.uniform(1.2, 6.0))
        q, r = bounds.conjugate(p), 1.0
    else:
        r = float(rng.uniform(1.0, 2.0))
        p = float(rng.uniform(r + 0.25, 6.0))
        q = 1.0 / (1.0 / r - 1.0 / p)
    label = (f"seed={cfg.seed} trial={index} curve={json.dumps(pair.to_config())} "
             f"weight={json.dumps(weight.to_config())} p={p:.6g} q={q:.6g} r={r:.6g}")
    return bounds.check_embedding_inequality(kind, Q, pair, grid, p, q, r, inputs=label)


def equality_probes(M: int = 1024) -> list[bounds.InequalityReport]:
    """Closed-form equality cases: ``Q = 1`` and ``Q = z`` on the unit disk with unit weight."""
    pair = ConformalPair.disk()
    grid = make_boundary_grid(pair, WeightSpec("const", 1.0), M)
    out = []
    for Q, name in ((ComplexPoly([1.0]), "Q=1"), (ComplexPoly([0.0, 1.0]), "Q=z")):
        for kind in (bounds.PROPOSITION, bounds.COROLLARY1, bounds.COROLLARY2):
            r = 1.0
            out.append(bounds.check_embedding_inequality(kind, Q, pair, grid, 2.0, 2.0, r, inputs=f"probe {name}"))
    return out


def run_random_checks(cfg: ExperimentConfig, kinds=None) -> dict:
    """Seeded trials of the embedding inequalities and the Fejer-Riesz step.

    Failures are data: each one is listed with the seed and trial index that
    reproduce it.
    """
    kinds = list(kinds or (bounds.PROPOSITION, bounds.COROLLARY1, bounds.COROLLARY2, bounds.FEJER_RIESZ))
    grids = {(c, w): make_boundary_grid(c, w, cfg.M) for c in cfg.curves for w in cfg.weights}
    summary: dict = {"seed": cfg.seed, "trials": cfg.trials, "kinds": {}}
    total_fail = 0
    worst = float("inf")
    for kind in kinds:
        with ThreadPoolExecutor(max_workers=_threads()) as pool:
            reports = list(pool.map(lambda i: _trial(cfg, kind, i, grids), range(cfg.trials)))
        fails = [{"seed": cfg.seed, "trial": i, "config": rep.inputs, "lhs": rep.lhs, "rhs": rep.rhs}
                 for i, rep in enumerate(reports) if not rep.passed]
        kind_worst = min((rep.slack for rep in reports), default=float("inf"))
        summary["kinds"][kind] = {"pass": len(reports) - len(fails), "fail": len(fails),
                                  "worst_slack": kind_worst, "failures": fails}
        total_fail += len(fails)
        worst = min(worst, kind_worst)
    probes = [rep for rep in equality_probes(cfg.M) if rep.kind in kinds]
    summary["probes"] = [rep.as_dict() for rep in probes]
    identity = {}
    for (c, w), grid in grids.items():
        gap = abs(bounds.inequality_constants("delta", grid, p=2, q=2) - bounds.inequality_constants("gamma", grid))
        identity[f"{json.dumps(c.to_config())} {json.dumps(w.to_config())}"] = gap
    summary["delta_gamma_gap"] = identity
    summary["totals"] = {"fail": total_fail + sum(not rep.passed for rep in probes)}
    summary["worst_slack"] = worst if np.isfinite(worst) else None
    return summary


def rows_to_csv(rows: list[ReportRow]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for r in rows:
        writer.writerow([r.config_digest, r.n] + [FLOAT_FMT % v for v in (r.m_n, r.lhs, r.rhs_proof,
                        r.rhs_statement, r.slack)] + ["true" if r.passed else "false", "%.3f" % r.ms])
    return buf.getvalue()


def read_csv(text: str) -> list[dict]:
    reader = csv.reader(io.StringIO(text))
    header = next(reader, None)
    if header is None or tuple(header) != CSV_COLUMNS:
        raise ConfigError(f"line 1: expected header {','.join(CSV_COLUMNS)}", key=None)
    out = []
    for lineno, rec in enumerate(reader, start=2):
        if len(rec) != len(CSV_COLUMNS):
            raise ConfigError(f"line {lineno}: expected {len(CSV_COLUMNS)} fields, got {len(rec)}")
        try:
            row = dict(zip(CSV_COLUMNS, rec))
            for key in ("m_n", "lhs", "rhs_proof", "rhs_statement", "slack", "ms"):
                row[key] = float(row[key])
            row["n"] = int(row["n"])
            if row["pass"] not in ("true", "false"):
                raise ValueError(f"pass must be true/false, got {row['pass']!r}")
            row["pass"] = row["pass"] == "true"
        except ValueError as exc:
            raise ConfigError(f"line {lineno}: {exc}") from None
        out.append(row)
    return out


def summarize_rows(rows: list[ReportRow], cfg: ExperimentConfig | None = None) -> dict:
    failures = [{"seed": cfg.seed if cfg else None, "config": r.config_digest, "n": r.n,
                 "lhs": r.lhs, "rhs": r.rhs_proof} for r in rows if not r.passed]
    chain_fail = [{"config": c.inputs, "kind": c.kind, "lhs": c.lhs, "rhs": c.rhs}
                  for r in rows for c in r.chain if not c.passed]
    nonmono = []
    for digest in dict.fromkeys(r.config_digest for r in rows):
        group = [r for r in rows if r.config_digest == digest]
        for a, b in zip(group, group[1:]):
            if b.m_n > a.m_n + 1e-10:
                nonmono.append({"config": digest, "n": b.n})
    out = {
        "totals": {"rows": len(rows), "pass": sum(r.passed for r in rows), "fail": len(failures),
                   "nonconverged": sum(not r.converged for r in rows)},
        "failures": failures,
        "worst_slack": min((r.slack for r in rows), default=None),
        "proof_chain_failures": chain_fail,
        "monotonicity_violations": nonmono,
        "note": "lhs is a lattice supremum over compact subsets, a lower bound for the supremum over G",
    }
    if cfg is not None:
        out["configs"] = {config_digest(cfg.cell_dict(*c)): cfg.cell_dict(*c) for c in cfg.cells()}
    return out
