import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import CURVES, QUAD, WEIGHTS, bessel_i0
from szego_lab import (
    ComplexPoly,
    ConformalPair,
    ConsistencyFailure,
    ExponentMismatch,
    InequalityReport,
    WeightSpec,
    build_outer,
    check_embedding_inequality,
    compute_Jn,
    eval_outer,
    fejer_riesz_check,
    inequality_constants,
    lp_norm_boundary,
    make_boundary_grid,
    mu_p,
    poly_eval,
    solve_extremal,
    sup_diff_on_compact,
    theorem_chain,
    theorem_rhs,
)
from szego_lab import bounds
from szego_lab.harness import random_poly
from szego_lab.szego import boundary_target
from szego_lab.transport import make_transport

DISK = ConformalPair.disk()
CONST = WeightSpec("const", 1.0)
EXPCOS = WeightSpec("expcos")
SZA = WeightSpec("szego_a", a=0.5)
ROOT_2PI = math.sqrt(2 * math.pi)


def test_report_pass_rule():
    assert InequalityReport("Theorem", 1.0, 1.0).passed
    assert InequalityReport("Theorem", 1.0 + 0.5e-8, 1.0).passed
    assert not InequalityReport("Theorem", 1.0 + 2e-8, 1.0).passed
    assert InequalityReport("Theorem", 1e-12, 0.0).passed
    assert not InequalityReport("Theorem", 3e-12, 0.0).passed
    rep = InequalityReport("Theorem", 1.0, 3.0, "x")
    assert rep.slack == 2.0
    assert rep.as_dict()["pass"] is True


def test_lp_norm_examples(grid_factory):
    grid = grid_factory(DISK, CONST)
    assert lp_norm_boundary(np.ones(grid.M), grid.rho, grid, 2) == pytest.approx(ROOT_2PI, abs=1e-13)
    assert lp_norm_boundary(grid.t, grid.rho, grid, 4) == pytest.approx((2 * math.pi) ** 0.25, abs=1e-13)
    assert lp_norm_boundary(grid.t, grid.rho, grid, 4) == pytest.approx(1.583234, abs=1e-6)
    with pytest.raises(ValueError):
        lp_norm_boundary(grid.t, grid.rho, grid, 0.5)


def test_mu_p_closed_forms(outer_factory):
    grid, D = outer_factory(DISK, CONST, 2)
    assert mu_p(DISK, grid, D, 2) == pytest.approx(ROOT_2PI, abs=1e-13)
    grid, D = outer_factory(DISK, EXPCOS, 2)
    val = mu_p(DISK, grid, D, 2)
    assert val == pytest.approx(math.sqrt(2 * math.pi * bessel_i0(2.0)), rel=1e-13)
    assert lp_norm_boundary(boundary_target(grid, D), grid.rho, grid, 2) == pytest.approx(val, abs=1e-10)


def test_mu_p_szego_a_refinement_oracle(outer_factory):
    grid, D = outer_factory(DISK, SZA, 2)
    th = 2 * np.pi * np.arange(8192) / 8192
    oracle = math.sqrt(np.sum(np.abs(1 - 0.5 * np.exp(1j * th)) ** 4) * 2 * math.pi / 8192)
    assert mu_p(DISK, grid, D, 2) == pytest.approx(oracle, rel=1e-12)


@pytest.mark.parametrize("pair", CURVES, ids=["disk", "quadratic"])
@pytest.mark.parametrize("weight", WEIGHTS, ids=["const", "expcos", "szego_a"])
@pytest.mark.parametrize("p", [2, 3])
def test_mu_p_routes_agree_everywhere(outer_factory, pair, weight, p):
    grid, D = outer_factory(pair, weight, p)
    assert mu_p(pair, grid, D, p) > 0


def test_mu_p_detects_a_broken_outer_function(outer_factory):
    grid, D = outer_factory(DISK, EXPCOS, 2)
    from dataclasses import replace

    bad = replace(D, c=D.c * 1.01)
    with pytest.raises(ConsistencyFailure):
        mu_p(DISK, grid, bad, 2)


def test_constants_on_unit_disk(outer_factory):
    grid, D = outer_factory(DISK, CONST, 2)
    for kind in ("gamma", "delta", "gamma_pq"):
        assert inequality_constants(kind, grid, D, 2, 2) == pytest.approx(ROOT_2PI, abs=1e-13)
    with pytest.raises(ValueError):
        inequality_constants("gamma_pq", grid)
    with pytest.raises(ValueError):
        inequality_constants("beta", grid)


@pytest.mark.parametrize("pair", CURVES, ids=["disk", "quadratic"])
@pytest.mark.parametrize("weight", WEIGHTS, ids=["const", "expcos", "szego_a"])
def test_delta_equals_gamma_at_two(grid_factory, pair, weight):
    grid = grid_factory(pair, weight)
    g = inequality_constants("gamma", grid)
    assert abs(inequality_constants("delta", grid, p=2, q=2) - g) <= 1e-12


@pytest.mark.parametrize("p", [2, 3, 4])
def test_gamma_pq_against_arclength_sampling(outer_factory, p):
    """Evaluate the E-side integral with |dt| and |phi'| from finite differences of t(theta)."""
    grid, D = outer_factory(QUAD, EXPCOS, p)
    q = p / (p - 1)
    h = 1e-5
    th = grid.theta
    dt = np.abs(QUAD.psi(np.exp(1j * (th + h))) - QUAD.psi(np.exp(1j * (th - h)))) / (2 * h)
    phi_prime = 1.0 / dt
    mod = np.abs(eval_outer(D, grid.u))
    direct = (np.sum(mod ** (p * (2 - q)) * phi_prime ** (1 - q) * dt) * grid.dtheta) ** (1 / p)
    assert inequality_constants("gamma_pq", grid, D, p, q) == pytest.approx(direct, rel=1e-9)


def test_gamma_pq_statement_equals_proof_form(outer_factory):
    for pair in CURVES:
        for weight in WEIGHTS:
            grid, D = outer_factory(pair, weight, 3)
            sol = solve_extremal(pair, grid, D, 3, 3)
            a = theorem_rhs(sol, grid, D, "proof")
            b = theorem_rhs(sol, grid, D, "statement")
            assert a == pytest.approx(b, rel=1e-10, abs=1e-300)
    with pytest.raises(ValueError):
        theorem_rhs(sol, grid, D, "other")


def test_theorem_rhs_vanishes_when_target_is_exact(outer_factory):
    grid, D = outer_factory(DISK, CONST, 2)
    sol = solve_extremal(DISK, grid, D, 0, 2)
    assert theorem_rhs(sol, grid, D) == 0
    grid, D = outer_factory(DISK, SZA, 2)
    sol = solve_extremal(DISK, grid, D, 1, 2)
    assert theorem_rhs(sol, grid, D) <= 1e-9


def test_theorem_rhs_expcos_degree_zero(outer_factory):
    grid, D = outer_factory(DISK, EXPCOS, 2)
    sol = solve_extremal(DISK, grid, D, 0, 2)
    th = grid.theta
    u = np.exp(1j * th)
    nu = np.exp(-np.cos(th))
    # independent route: norms of e^{z/2} and 1 under nu = rho^{-1}
    f_norm = math.sqrt(np.sum(np.abs(np.exp(u / 2)) ** 2 * nu) * grid.dtheta)
    one_norm = math.sqrt(np.sum(nu) * grid.dtheta)
    m0 = math.sqrt(np.sum(np.abs(np.exp(u / 2) - 1) ** 2 * np.exp(np.cos(th))) * grid.dtheta)
    assert sol.m == pytest.approx(m0, rel=1e-12)
    assert one_norm == pytest.approx(ROOT_2PI * math.sqrt(bessel_i0(1.0)), rel=1e-12)
    rhs = theorem_rhs(sol, grid, D)
    assert rhs == pytest.approx(0.5 * m0 * (f_norm + one_norm), rel=1e-12)
    T = make_transport(sol.Q, DISK, D)
    assert sup_diff_on_compact(DISK, T, 0.95) <= rhs


@pytest.mark.parametrize("pair", CURVES, ids=["disk", "quadratic"])
@pytest.mark.parametrize("p", [2, 3])
def test_proof_chain_links_hold(outer_factory, pair, p):
    grid, D = outer_factory(pair, SZA, p)
    for n in (0, 2, 5):
        sol = solve_extremal(pair, grid, D, n, p)
        T = make_transport(sol.Q, pair, D)
        lhs = sup_diff_on_compact(pair, T, 0.95)
        chain = theorem_chain(sol, grid, D, lhs)
        assert [c.kind for c in chain] == ["FejerRiesz", "HolderStep", "SumBound", "MinkowskiStep",
                                           "TheoremProofForm"]
        assert all(c.passed for c in chain), [c.as_dict() for c in chain if not c.passed]
        assert chain[-1].rhs == pytest.approx(theorem_rhs(sol, grid, D), rel=1e-14)


def test_holder_pointwise_at_grid_nodes(outer_factory):
    for p in (2, 3, 4):
        grid, D = outer_factory(QUAD, EXPCOS, p)
        sol = solve_extremal(QUAD, grid, D, 4, p)
        rep = bounds.holder_step_check(boundary_target(grid, D), poly_eval(sol.Q, grid.t), p)
        assert rep.passed


@settings(max_examples=60, deadline=None)
@given(st.complex_numbers(max_magnitude=10, allow_nan=False, allow_infinity=False),
       st.complex_numbers(max_magnitude=10, allow_nan=False, allow_infinity=False),
       st.integers(2, 7))
def test_holder_scalar_inequality(a, b, p):
    assert bounds.holder_step_check([a], [b], p).passed


def test_minkowski_step(outer_factory):
    grid, D = outer_factory(DISK, SZA, 3)
    sol = solve_extremal(DISK, grid, D, 2, 3)
    nu = bounds._nu(grid, 3)
    rep = bounds.minkowski_check(boundary_target(grid, D), poly_eval(sol.Q, grid.t), nu, grid, 3)
    assert rep.passed and rep.slack >= 0


@pytest.mark.parametrize("kind", ["Proposition", "Corollary1", "Corollary2"])
def test_equality_probes(grid_factory, kind):
    grid = grid_factory(DISK, CONST)
    for Q in (ComplexPoly([1]), ComplexPoly([0, 1])):
        rep = check_embedding_inequality(kind, Q, DISK, grid, 2, 2, 1)
        assert rep.lhs == pytest.approx(2 * math.pi, abs=1e-12)
        assert rep.rhs == pytest.approx(2 * math.pi, abs=1e-12)
        assert abs(rep.slack) <= 1e-10 and rep.passed


def test_exponent_mismatch(grid_factory):
    grid = grid_factory(DISK, CONST)
    Q = ComplexPoly([1, 1])
    with pytest.raises(ExponentMismatch):
        check_embedding_inequality("Proposition", Q, DISK, grid, 3, 1.5)
    with pytest.raises(ExponentMismatch):
        check_embedding_inequality("Corollary1", Q, DISK, grid, 3, 2)
    with pytest.raises(ExponentMismatch):
        check_embedding_inequality("Corollary2", Q, DISK, grid, 2, 2, 2)
    with pytest.raises(ValueError):
        check_embedding_inequality("Lemma", Q, DISK, grid)
    with pytest.raises(ValueError):
        check_embedding_inequality("Proposition", Q, QUAD, grid)


def test_corollary2_random_degree_ten_on_quadratic():
    g = np.random.default_rng(2026)
    for weight in WEIGHTS:
        grid = make_boundary_grid(QUAD, weight, 4096)
        for _ in range(200 // len(WEIGHTS) + 1):
            c = (g.standard_normal(11) + 1j * g.standard_normal(11)) / math.sqrt(2)
            rep = check_embedding_inequality("Corollary2", ComplexPoly(c), QUAD, grid, 2, 2, 1)
            assert rep.passed and rep.slack >= 0


@pytest.mark.parametrize("kind", ["Proposition", "Corollary1", "Corollary2"])
def test_embedding_random_trials(grid_factory, kind):
    g = np.random.default_rng(7)
    for i in range(60):
        pair, weight = CURVES[i % 2], WEIGHTS[i % 3]
        grid = grid_factory(pair, weight)
        Q = random_poly(g)
        if kind == "Proposition":
            p = q = 2.0
            r = 1.0
        elif kind == "Corollary1":
            p = g.uniform(1.2, 6)
            q, r = p / (p - 1), 1.0
        else:
            r = g.uniform(1, 2)
            p = g.uniform(r + 0.25, 6)
            q = 1 / (1 / r - 1 / p)
        assert check_embedding_inequality(kind, Q, pair, grid, p, q, r).passed


def test_fejer_riesz_examples():
    rep = fejer_riesz_check(ComplexPoly([1]), 1.0)
    assert rep.lhs == pytest.approx(1.0, abs=1e-14)
    assert rep.rhs == pytest.approx(math.pi, abs=1e-13)
    assert rep.passed
    for k in range(1, 8):
        rep = fejer_riesz_check(ComplexPoly([0] * k + [1]), 1.0)
        assert rep.lhs == pytest.approx(1 / (k + 1), abs=1e-14)
        assert rep.rhs == pytest.approx(math.pi, abs=1e-13)
    with pytest.raises(ValueError):
        fejer_riesz_check(ComplexPoly([1]), 1.5)


def test_fejer_riesz_random_trials():
    g = np.random.default_rng(99)
    for _ in range(500):
        h = random_poly(g)
        x = math.sqrt(g.uniform()) * np.exp(2j * math.pi * g.uniform())
        rep = fejer_riesz_check(h, complex(x))
        assert rep.slack >= -1e-12


def test_fejer_riesz_lhs_dominates_antiderivative():
    # |int h| <= int |h| on the same segment, so J(x) never exceeds the lhs
    h = ComplexPoly([0.3, -1.2j, 0.5, 0.25])
    J = compute_Jn(h, 1, 0)
    for x in (0.9, 0.7j, -0.5 + 0.5j):
        rep = fejer_riesz_check(h, x)
        assert abs(J(x)) <= rep.lhs + 1e-14 and rep.passed


def test_verdicts_stable_under_refinement():
    for pair in CURVES:
        for weight in (EXPCOS, SZA):
            verdicts = []
            for M in (1024, 2048):
                grid = make_boundary_grid(pair, weight, M)
                D = build_outer(grid, 3, 256)
                sol = solve_extremal(pair, grid, D, 4, 3)
                T = make_transport(sol.Q, pair, D)
                chain = theorem_chain(sol, grid, D, sup_diff_on_compact(pair, T, 0.95))
                probe = check_embedding_inequality("Corollary1", sol.Q, pair, grid, 3, 1.5)
                verdicts.append([c.passed for c in chain] + [probe.passed])
            assert verdicts[0] == verdicts[1]
            assert all(verdicts[0])
