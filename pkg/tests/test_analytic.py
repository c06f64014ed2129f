import math

import numpy as np
import pytest

from dgue import (QuadratureError, component_law, constant_profile,
                  density_of_states, exponential_profile, explicit_profile,
                  finite_n_oracle, moment_prediction, power_law_profile,
                  scaling_regime, solve_saddle, zero_energy_moments)


def _predict(prof, energy, q):
    saddle = solve_saddle(prof, energy)
    density = density_of_states(prof, saddle)
    return moment_prediction(prof, saddle, density, q)


def _law_at(prof, energy, index):
    saddle = solve_saddle(prof, energy)
    density = density_of_states(prof, saddle)
    return component_law(prof, saddle, density, index)


# ---------------------------------------------------------------- moments

def test_gue_total_moments_match_closed_form():
    # flat profile: total I_q = Gamma(q+1) N^(1-q) at any bulk energy
    for size in [50, 400]:
        prof = constant_profile(size)
        for energy in [0.0, 0.5, 1.3]:
            for q in [1.0, 1.5, 2.0, 3.0]:
                pred = _predict(prof, energy, q)
                expect = math.gamma(q + 1) * size ** (1.0 - q)
                assert math.isclose(pred.total, expect, rel_tol=1e-10)


def test_first_moment_is_one():
    # completeness of eigenvector weight, regardless of profile or energy
    profiles = [constant_profile(300),
                power_law_profile(300, -0.5),
                power_law_profile(300, -2.0),
                exponential_profile(300, 2.0)]
    for prof in profiles:
        for energy in [0.0, 0.4, 1.0]:
            pred = _predict(prof, energy, 1.0)
            assert math.isclose(pred.total, 1.0, rel_tol=0, abs_tol=1e-10)


def test_zero_energy_small_case_by_hand():
    # N=4, p=-1/2: v_n = sqrt(n/N), so x_n = 2/sqrt(n);
    # I_2(n) = 2 (x_n / sum x)^2
    prof = power_law_profile(4, -0.5)
    xs = [2.0 / math.sqrt(n) for n in (1, 2, 3, 4)]
    total_x = sum(xs)
    pred = zero_energy_moments(prof, 2.0)
    for n in range(4):
        expect = 2.0 * (xs[n] / total_x) ** 2
        assert math.isclose(pred.per_component[n], expect, rel_tol=1e-13)
    assert math.isclose(pred.total,
                        sum(2.0 * (x / total_x) ** 2 for x in xs),
                        rel_tol=1e-13)
    assert pred.energy == 0.0


def test_zero_energy_agrees_with_general_solver():
    prof = exponential_profile(200, 2.0)
    a = zero_energy_moments(prof, 2.0)
    b = _predict(prof, 0.0, 2.0)
    np.testing.assert_allclose(a.per_component, b.per_component, rtol=1e-12)


def test_component_law_rates():
    # flat profile decays at rate N in the whole bulk
    prof = constant_profile(200)
    for energy in [0.0, 1.0]:
        law = _law_at(prof, energy, 1)
        assert math.isclose(law.rate, 200.0, rel_tol=1e-11)

    # at E=0 the rate is v_n * sum(1/v)
    prof = power_law_profile(100, -0.5)
    xs = prof.inverse()
    for n in [1, 50, 100]:
        law = _law_at(prof, 0.0, n)
        assert math.isclose(law.rate, prof.values[n - 1] * xs.sum(),
                            rel_tol=1e-11)
        assert law.index == n


def test_rate_is_inverse_first_moment():
    prof = power_law_profile(150, -2.0)
    for energy in [0.0, 0.5]:
        pred = _predict(prof, energy, 1.0)
        for n in [1, 75, 150]:
            law = _law_at(prof, energy, n)
            assert math.isclose(1.0 / law.rate, pred.per_component[n - 1],
                                rel_tol=1e-12)


def test_component_law_index_validation():
    prof = constant_profile(10)
    saddle = solve_saddle(prof, 0.0)
    density = density_of_states(prof, saddle)
    for bad in [0, -1, 11]:
        with pytest.raises(ValueError):
            component_law(prof, saddle, density, bad)


def test_moments_bounded_by_gamma_factor():
    # the per-site ratio never exceeds 1, so I_q(n) <= Gamma(q+1)
    prof = exponential_profile(120, 2.0)
    for q in [1.5, 2.0, 3.0]:
        pred = _predict(prof, 0.3, q)
        assert np.all(np.isfinite(pred.per_component))
        assert np.all(pred.per_component <= math.gamma(q + 1) * (1 + 1e-12))
        assert np.all(pred.per_component >= 0)


def test_moment_prediction_rejects_bad_order():
    prof = constant_profile(20)
    saddle = solve_saddle(prof, 0.0)
    density = density_of_states(prof, saddle)
    with pytest.raises(ValueError):
        moment_prediction(prof, saddle, density, 0.0)
    with pytest.raises(ValueError):
        zero_energy_moments(prof, -1.0)


# ----------------------------------------------------------------- oracle

def test_oracle_flat_profile_closed_form():
    # beta-integral identity: Gamma(q+1) Gamma(N) / Gamma(N+q)
    for size in [100, 1000]:
        prof = constant_profile(size)
        for q in [2.0, 3.0]:
            got = finite_n_oracle(prof, q, 1)
            expect = math.exp(math.lgamma(q + 1) + math.lgamma(size)
                              - math.lgamma(size + q))
            assert math.isclose(got, expect, rel_tol=1e-6)


def test_oracle_noninteger_q():
    size = 500
    prof = constant_profile(size)
    got = finite_n_oracle(prof, 1.5, 3)
    log_expect = (math.lgamma(2.5) + math.lgamma(size)
                  - math.lgamma(size + 1.5))
    assert math.isclose(got, math.exp(log_expect), rel_tol=1e-6)


def test_oracle_first_moment_flat():
    prof = constant_profile(250)
    got = finite_n_oracle(prof, 1.0, 17)
    assert math.isclose(got, 1.0 / 250, rel_tol=1e-7)


def test_oracle_converges_to_mean_field():
    # finite-size deviation from the N->inf law shrinks monotonically
    for maker in [constant_profile,
                  lambda n: power_law_profile(n, -0.5)]:
        gaps = []
        for size in [250, 500, 1000, 2000]:
            prof = maker(size)
            exact = finite_n_oracle(prof, 2.0, 1)
            limit = zero_energy_moments(prof, 2.0).per_component[0]
            gaps.append(abs(exact / limit - 1.0))
        assert gaps[0] > gaps[1] > gaps[2] > gaps[3]
        assert gaps[-1] < 0.06


def test_oracle_tail_component_heavier_than_first():
    # small v_n means a heavier weight on that site
    prof = power_law_profile(400, -0.5)
    assert finite_n_oracle(prof, 2.0, 1) > finite_n_oracle(prof, 2.0, 400)


def test_oracle_rejects_bad_arguments():
    prof = constant_profile(50)
    with pytest.raises(ValueError):
        finite_n_oracle(prof, 0.0, 1)
    with pytest.raises(ValueError):
        finite_n_oracle(prof, 2.0, 0)
    with pytest.raises(ValueError):
        finite_n_oracle(prof, 2.0, 51)


def test_oracle_reports_quadrature_breakdown():
    # geometric spread of 2^60 starves the integrand below double precision
    prof = exponential_profile(60, 2.0)
    with pytest.raises(QuadratureError) as err:
        finite_n_oracle(prof, 2.0, 60)
    assert err.value.estimate is not None


# ---------------------------------------------------------------- scaling

def test_scaling_flat_and_growing():
    for p in [0.0, 0.5, 1.0, 2.0]:
        law = scaling_regime(p, 2.0)
        assert law.regime == "extended"
        assert law.exponent == -1.0
        assert law.d_q == 1.0
        assert law.log_correction is False
    law = scaling_regime(0.0, 3.0)
    assert law.exponent == -2.0
    assert law.d_q == 1.0


def test_scaling_weak_decay_branches():
    # p = -1/2: threshold at q = 2
    law = scaling_regime(-0.5, 1.5)
    assert law.regime == "extended"
    assert math.isclose(law.exponent, -0.5)
    assert math.isclose(law.d_q, 1.0)

    law = scaling_regime(-0.5, 2.0)
    assert law.regime == "marginal_log"
    assert math.isclose(law.exponent, -1.0)
    assert law.log_correction is True

    law = scaling_regime(-0.5, 3.0)
    assert law.regime == "frozen_quasi_extended"
    assert math.isclose(law.exponent, -1.5)
    assert math.isclose(law.d_q, 0.75)


def test_scaling_strong_decay_branches():
    # p = -2: threshold at q = 1/2
    law = scaling_regime(-2.0, 0.4)
    assert law.regime == "frozen_quasi_localized"
    assert math.isclose(law.exponent, 0.2)
    assert math.isclose(law.d_q, 1 / 3)

    law = scaling_regime(-2.0, 0.5)
    assert law.regime == "marginal_log"
    assert law.exponent == 0.0
    assert law.log_correction is True

    law = scaling_regime(-2.0, 2.0)
    assert law.regime == "localized"
    assert law.exponent == 0.0
    assert law.d_q == 0.0


def test_scaling_exponential_always_localized():
    for tag in ["exp", "exponential"]:
        for q in [0.5, 2.0, 5.0]:
            law = scaling_regime(tag, q)
            assert law.regime == "localized"
            assert law.exponent == 0.0
            assert law.d_q == 0.0


def test_scaling_exponent_continuous_at_threshold():
    # the exponent from both sides meets the marginal value
    for p in [-0.5, -2.0]:
        qc = -1.0 / p
        mid = scaling_regime(p, qc).exponent
        lo = scaling_regime(p, qc - 1e-9).exponent
        hi = scaling_regime(p, qc + 1e-9).exponent
        assert abs(lo - mid) < 1e-8
        assert abs(hi - mid) < 1e-8


def test_scaling_q_one_has_no_dimension():
    law = scaling_regime(0.5, 1.0)
    assert law.exponent == 0.0
    assert math.isnan(law.d_q)
    law = scaling_regime("exp", 1.0)
    assert math.isnan(law.d_q)


def test_scaling_rejects_bad_inputs():
    with pytest.raises(ValueError):
        scaling_regime(-1.0, 2.0)
    with pytest.raises(ValueError):
        scaling_regime(-0.5, 0.0)
    with pytest.raises(ValueError):
        scaling_regime(-0.5, -1.0)
    with pytest.raises(ValueError):
        scaling_regime("mystery", 2.0)


def test_explicit_profile_moments_still_work():
    # analytic layer only needs values, not a named family
    prof = explicit_profile([1.0, 2.0, 0.5, 1.5])
    pred = _predict(prof, 0.0, 2.0)
    assert math.isclose(pred.total, float(np.sum(pred.per_component)),
                        rel_tol=1e-14)
