import warnings

import numpy as np
import pytest

from conftest import random_poly
from fracpicard.conditions import GrowthEnvelope, bound_on_bidisc
from fracpicard.fracops import gauss_jacobi_rule
from fracpicard.series import BivariateSeries, FracPowerSeries, eval_series, schwarz_check, sup_norm_estimate
from fracpicard.solver import (
    ConditionIIViolated,
    DivergenceError,
    Kind,
    MaxIterExceeded,
    NoContractionWarning,
    ProblemSpec,
    RegularizedCompatViolated,
    coeff_distance,
    estimate_lipschitz,
    estimate_radius,
    picard_quad,
    picard_step,
    probe_invariant_ball,
    shift_to_homogeneous,
    solve_picard,
    univalence_check,
)
from fracpicard.specfun import gamma_ratio, rgamma

B = BivariateSeries.from_terms
S = FracPowerSeries
G1P5 = 0.886226925452758013649083741671
RATE_HALF = 0.443113462726379006824541870835  # 0.5 * Gamma(3/2)


def test_picard_step_examples():
    u = picard_step(B({(0, 1): 1.12837916709551257}), S([0, 1]), 0.5, n=8)
    assert np.allclose(u.coeffs, S([0, 1]).padded(8).coeffs, atol=1e-15)
    u2 = picard_step(B({(0, 1): 1.504505556127350098}), S([0, 0, 1]), 0.5, n=8)
    assert np.allclose(u2.coeffs, S([0, 0, 1]).padded(8).coeffs, atol=1e-15)
    f = picard_step(B({(1, 0): 1.0}), S([0]), 0.5, n=8)
    assert f.coeffs[1] == pytest.approx(G1P5, abs=1e-15)
    rule = gauss_jacobi_rule(16, 0.5, left=-0.5)
    for z in [0.3, -0.7j, 0.5 + 0.5j]:
        assert picard_quad(B({(1, 0): 1.0}), S([0]), 0.5, z, rule) == pytest.approx(G1P5 * z, abs=1e-14)


def test_picard_step_regularized_adds_initial_value():
    u = picard_step(B({(1, 0): 1.0}), S([2.0]), 0.5, Kind.REGULARIZED, 2.0, 4)
    assert u.coeffs[0] == 2.0 and u.coeffs[1] == pytest.approx(G1P5, abs=1e-15)


@pytest.mark.parametrize("kind, b", [(Kind.RL, 0.0), (Kind.REGULARIZED, 0.0), (Kind.REGULARIZED, 1.5 - 0.5j)])
def test_diagonal_operator_matches_quadrature(rng, kind, b):
    a = 0.6
    F = BivariateSeries(0.3 * (rng.normal(size=(4, 3)) + 1j * rng.normal(size=(4, 3))))
    u = S(0.5 * random_poly(rng, 5))
    n = 64
    pu = picard_step(F, u, a, kind, b, n)
    rule = gauss_jacobi_rule(64, a, left=-a)
    z = rng.uniform(0.1, 0.9, 10) * np.exp(1j * rng.uniform(-np.pi, np.pi, 10))
    shift = b if kind is Kind.REGULARIZED else 0
    for zi in z:
        assert abs(eval_series(pu, zi) - shift - picard_quad(F, u, a, zi, rule)) <= 1e-9


def test_solve_forced():
    rep = solve_picard(ProblemSpec(Kind.RL, 0.5, B({(1, 0): 1.0})))
    assert rep.converged and rep.iterations == 2
    assert rep.solution.coeffs[1] == pytest.approx(G1P5, abs=1e-15)
    assert rep.residual_series < 1e-12 and rep.residual_quad < 1e-12


def test_solve_condition_II_violation():
    with pytest.raises(ConditionIIViolated) as info:
        solve_picard(ProblemSpec(Kind.RL, 0.5, B({(0, 1): 0.5, (0, 0): 1.0})))
    assert info.value.gap == pytest.approx(1.0, abs=1e-15)


def test_solve_ratios_are_exact_rate():
    rep = solve_picard(ProblemSpec(Kind.RL, 0.5, B({(0, 1): 0.5})), seed=S([0, 1]))
    assert rep.converged
    assert np.max(np.abs(rep.solution.coeffs)) < 1e-11
    assert len(rep.observed_ratios) > 20
    assert all(abs(r - RATE_HALF) <= 1e-10 for r in rep.observed_ratios)
    assert rep.contraction.rate == pytest.approx(RATE_HALF, abs=1e-15)


def test_solve_regularized():
    rep = solve_picard(ProblemSpec(Kind.REGULARIZED, 0.5, B({(1, 0): 1.0}), b=1.0))
    assert rep.converged
    assert np.allclose(rep.solution.padded(1).coeffs, [1.0, G1P5], atol=1e-15)
    assert rep.residual_series < 1e-12 and rep.residual_quad < 1e-12


def test_solve_regularized_compat_violation():
    with pytest.raises(RegularizedCompatViolated):
        solve_picard(ProblemSpec(Kind.REGULARIZED, 0.5, B({(0, 1): 1.0}), b=1.0))


def test_solve_rl_nonzero_initial_value():
    # u = b + v, F = b/Gamma(1-a) + 0.3 (t - b) + z ; compare with the direct iteration
    a, b = 0.4, 0.7 + 0.2j
    F = BivariateSeries(np.array([[b * rgamma(1 - a) - 0.3 * b, 0.3], [1.0, 0.0]]))
    rep = solve_picard(ProblemSpec(Kind.RL, a, F, b=b))
    assert rep.converged
    assert rep.solution.coeffs[0] == pytest.approx(b, abs=1e-13)
    u = S([b])
    for _ in range(200):
        u = picard_step(F, u, a, Kind.RL, b, 64)
    assert np.max(np.abs(u.coeffs - rep.solution.padded(64).coeffs)) < 1e-11
    assert rep.residual_quad < 1e-12


def test_solve_nonlinear_contracting():
    a = 0.5
    F = B({(0, 2): 0.2, (0, 1): 0.3, (1, 0): 0.4, (2, 1): 0.1})
    rep = solve_picard(ProblemSpec(Kind.RL, a, F))
    assert rep.contraction.contracts and rep.converged
    assert rep.residual_series < 1e-12
    assert rep.residual_quad < 1e-10


def test_contraction_bound_realized(rng):
    for F in [B({(0, 1): 0.5}), B({(0, 1): 0.3, (1, 1): 0.4, (1, 0): 1.0}), B({(0, 1): 0.7j, (2, 0): -0.5})]:
        est = estimate_lipschitz(F, 0.5)
        assert est.contracts
        rep = solve_picard(ProblemSpec(Kind.RL, 0.5, F), seed=S([0, 0.5, 0.2j, -0.1]))
        for r in rep.observed_ratios:
            assert r <= est.rate + 1e-8


def test_two_seeds_same_solution():
    p = ProblemSpec(Kind.RL, 0.5, B({(0, 1): 0.5, (1, 0): 1.0, (2, 1): 0.2}))
    r1 = solve_picard(p)
    r2 = solve_picard(p, seed=S([0, 0.5]))
    assert coeff_distance(r1.solution, r2.solution, 1.0) < 10 * p.tol


def test_fixed_point_family_at_threshold(rng):
    a = 0.5
    F = B({(0, 1): rgamma(2 - a)})
    for c in random_poly(rng, 9):
        pu = picard_step(F, S([0, c]), a, n=4)
        assert abs(pu.coeffs[1] - c) <= 1e-15 * abs(c)
        assert not np.any(pu.coeffs[[0, 2, 3, 4]])


def test_no_contraction_reported_not_raised():
    p = ProblemSpec(Kind.RL, 0.5, B({(0, 1): rgamma(1.5)}))
    with pytest.warns(NoContractionWarning):
        rep = solve_picard(p, seed=S([0, 1, 1]))
    assert rep.contraction.rate == pytest.approx(1.0, abs=1e-12)
    assert any(w.startswith("NoContraction") for w in rep.warnings)


def test_divergence_detected():
    p = ProblemSpec(Kind.RL, 0.5, B({(0, 1): 3.0}))
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", NoContractionWarning)
        with pytest.raises(DivergenceError) as info:
            solve_picard(p, seed=S([0, 1]))
    assert info.value.report.status == "diverged"


def test_max_iter_exceeded():
    p = ProblemSpec(Kind.RL, 0.5, B({(0, 1): 1.0}), max_iter=5)
    with pytest.raises(MaxIterExceeded) as info:
        solve_picard(p, seed=S([0, 1]))
    assert info.value.report.iterations == 5


def test_envelope_radius_with_verified_ball():
    # F = 0.7 t^2 + 0.1 z: sampled rate > 1 on |t| <= 1, envelope gives R = 1
    a = 0.5
    F = B({(0, 2): 0.7, (1, 0): 0.1})
    env = GrowthEnvelope(0.7, 2, S([0, 0.1]))
    p = ProblemSpec(Kind.RL, a, F, envelope=env, ball_radius=1.0)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", NoContractionWarning)
        rep = solve_picard(p)
    assert not rep.contraction.contracts
    assert rep.radius == 1.0 and rep.radius_source == "envelope"
    assert rep.diagnostics["growth"]["passed"] and rep.diagnostics["ballProbe"]["passed"]
    assert rep.converged and sup_norm_estimate(rep.solution, 1.0) <= 1.0


def test_envelope_radius_ball_probe_finds_witness():
    # F = t^2 + z: the radius from the envelope formula (about 0.729) does not
    # give a self-map of B_1; P(r z / R) already exceeds r at z = R
    a = 0.5
    F = B({(0, 2): 1.0, (1, 0): 1.0})
    env = GrowthEnvelope(1.0, 2, S([0, 1]))
    R = estimate_radius(env, 1.0, a)
    assert R == pytest.approx(0.72938132698, abs=1e-9)
    pu = picard_step(F, S([0, 1.0 / R]), a)
    assert abs(eval_series(pu, R)) > 1.0
    assert probe_invariant_ball(F, a, 1.0, R) > 1.0
    p = ProblemSpec(Kind.RL, a, F, envelope=env, ball_radius=1.0)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", NoContractionWarning)
        rep = solve_picard(p)
    assert rep.radius == pytest.approx(R, abs=1e-15)
    assert rep.radius_source == "envelope-unverified"
    assert not rep.diagnostics["ballProbe"]["passed"]


def test_inconclusive_status_inside_verified_ball():
    a = 0.5
    F = B({(0, 2): 0.7, (1, 0): 0.1})
    p = ProblemSpec(Kind.RL, a, F, envelope=GrowthEnvelope(0.7, 2, S([0, 0.1])), max_iter=2)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", NoContractionWarning)
        rep = solve_picard(p)
    assert rep.status == "inconclusive"
    assert "InvariantBallVerified|IterationInconclusive" in rep.warnings


def test_estimate_radius_examples():
    assert estimate_radius(GrowthEnvelope(1.0, 2, Mg=0.1), 1.0, 0.5) == 1.0
    R = estimate_radius(GrowthEnvelope(4.0, 1), 3.7, 0.5)
    assert R == pytest.approx(0.28209479177387814347, abs=1e-9)
    assert estimate_radius(GrowthEnvelope(0.0, 1), 0.2, 0.5) == 1.0


def test_estimate_radius_is_largest():
    env = GrowthEnvelope(2.0, 3, S([0, 0.5]), 0.5)
    a, r = 0.3, 1.0
    R = estimate_radius(env, r, a)
    bound = lambda x: env.c * r**3 * x**3 * gamma_ratio(4 - a, 4) + env.Mg * x * gamma_ratio(2 - a, 1)
    assert R < 1 and bound(R) <= r < bound(R + 1e-9)


def test_lipschitz_examples():
    assert estimate_lipschitz(B({(0, 1): 0.3 - 0.4j}), 0.5).kappa == pytest.approx(0.5, abs=1e-15)
    assert estimate_lipschitz(B({(0, 1): 0.5}), 0.5).rate == pytest.approx(RATE_HALF, abs=1e-15)
    est = estimate_lipschitz(B({(0, 1): 1.12837916709551257389615890312}), 0.5)
    assert est.rate == pytest.approx(1.0, abs=1e-15) and not est.contracts
    assert est.threshold == pytest.approx(1.12837916709551257389615890312, abs=1e-15)


def test_lipschitz_sampled_nonlinear():
    # F = t^2 on |t| <= 1: sup |dF/dt| = 2
    est = estimate_lipschitz(B({(0, 2): 1.0}), 0.5, t_radius=1.0)
    assert 1.8 <= est.kappa <= 2.0 + 1e-12


def test_shift_examples(rng):
    F = B({(0, 1): 1.0})
    assert shift_to_homogeneous(F, 0, 0.5) is F
    H = shift_to_homogeneous(F, 1.0, 0.5)
    assert H.coeffs[0, 1] == 1.0
    assert H.coeffs[0, 0] == pytest.approx(0.435810416452243713051920548439, abs=1e-15)
    G = BivariateSeries(rng.normal(size=(3, 4)) + 1j * rng.normal(size=(3, 4)))
    b, a = 0.4 - 0.3j, 0.3
    Hg = shift_to_homogeneous(G, b, a)
    z = np.array([0.2, -0.5j, 0.3 + 0.3j])
    s = np.array([0.1, 0.7, -0.2 + 0.1j])
    assert np.allclose(Hg(z, s), G(z, s + b) - b * rgamma(1 - a), atol=1e-13)


def test_shift_reproduces_solution():
    a, b = 0.5, 0.8
    F = B({(0, 0): b * rgamma(1 - a), (1, 0): 1.0})
    direct = solve_picard(ProblemSpec(Kind.RL, a, F, b=b))
    assert direct.solution.coeffs[0] == pytest.approx(b, abs=1e-14)
    assert direct.solution.coeffs[1] == pytest.approx(G1P5, abs=1e-14)


def test_univalence_examples():
    assert univalence_check(S([0, 1]), 1.0, 16)
    assert not univalence_check(S([0, 0, 1]), 1.0, 16)
    assert not univalence_check(S([0, 0, 0, 1]), 1.0, 16)
    assert univalence_check(S([0, 1, 0.1]), 1.0, 16)
    with pytest.raises(ValueError):
        univalence_check(S([0, 1]), 1.0, 8)


def test_self_map_bound_for_bounded_F(rng):
    # |F| <= M on the bidisc gives sup |Pu| <= M Gamma(1 - a)
    a = 0.4
    F = B({(0, 0): 0.3, (1, 1): 0.2, (0, 2): -0.1j, (2, 0): 0.15})
    for r in (0.5, 1.0, 2.0):
        M = bound_on_bidisc(F, r)
        for _ in range(5):
            c = random_poly(rng, 4)
            u = S(c * r / np.sum(np.abs(c)))
            pu = picard_step(F, u, a, n=64)
            assert sup_norm_estimate(pu, 1.0, 256) <= M * gamma_ratio(1 - a, 1) * (1 + 1e-12)


def test_computed_solutions_satisfy_schwarz():
    for F in [B({(1, 0): 1.0}), B({(0, 1): 0.5, (2, 0): 1.0}), B({(0, 2): 0.2, (1, 0): 0.5})]:
        rep = solve_picard(ProblemSpec(Kind.RL, 0.5, F))
        r = sup_norm_estimate(rep.solution, rep.radius)
        assert schwarz_check(rep.solution, r, rep.radius).passed
        assert rep.diagnostics["schwarz"]["passed"]


def test_report_serialization():
    rep = solve_picard(ProblemSpec(Kind.RL, 0.5, B({(0, 1): 0.5})), seed=S([0, 1]))
    obj = rep.to_json()
    assert obj["status"] == "converged" and obj["contraction"]["rate"] == rep.contraction.rate
    rows = rep.convergence_csv().strip().splitlines()
    assert rows[0] == "n,distance,ratio"
    assert len(rows) == rep.iterations + 1
    assert float(rows[3].split(",")[2]) == pytest.approx(RATE_HALF, abs=1e-10)
