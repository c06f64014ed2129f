import math

import numpy as np
import pytest

from dgue import (ProfileError, ProfileSpec, build_profile, constant_profile,
                  exponential_profile, explicit_profile, load_profile,
                  power_law_profile, validity_ratio)


def test_constant_profile():
    prof = constant_profile(4)
    assert prof.size == 4
    assert prof.family == "constant"
    assert np.array_equal(prof.values, np.ones(4))


def test_power_law_weak_decay_values():
    # v_n = (N/n)^p for -1 < p < 0
    prof = power_law_profile(4, -0.5)
    expected = [0.5, (4 / 2) ** -0.5, (4 / 3) ** -0.5, 1.0]
    assert np.array_equal(prof.values, np.array(expected))
    assert prof.param == -0.5


def test_power_law_strong_decay_values():
    # v_n = 1/(N n^p) for p < -1; here n^2/3
    prof = power_law_profile(3, -2.0)
    np.testing.assert_allclose(prof.values, [1 / 3, 4 / 3, 3.0],
                               rtol=5e-16, atol=0)


def test_power_law_growth_values():
    prof = power_law_profile(5, 1.0)
    np.testing.assert_allclose(prof.values, [5.0, 2.5, 5 / 3, 1.25, 1.0],
                               rtol=1e-15)


def test_exponential_values():
    prof = exponential_profile(5, 2.0)
    assert np.array_equal(prof.values,
                          np.array([2.5, 1.25, 0.625, 0.3125, 0.15625]))


def test_exponential_underflow_rejected():
    # base-2 tails fall below the smallest positive double around n ~ 1075
    with pytest.raises(ProfileError):
        exponential_profile(1200, 2.0)


@pytest.mark.parametrize("bad", [-1.0, 0.0])
def test_power_law_rejected_exponents(bad):
    with pytest.raises(ProfileError):
        power_law_profile(10, bad)


@pytest.mark.parametrize("bad", [1.0, 0.5, -2.0])
def test_exponential_rejected_bases(bad):
    with pytest.raises(ProfileError):
        exponential_profile(10, bad)


def test_explicit_profile_validation():
    prof = explicit_profile([2.0, 0.5, 1.0])
    assert prof.size == 3
    with pytest.raises(ProfileError):
        explicit_profile([1.0, 0.0, 2.0])
    with pytest.raises(ProfileError):
        explicit_profile([1.0, -3.0])
    with pytest.raises(ProfileError):
        explicit_profile([1.0, math.nan])
    with pytest.raises(ProfileError):
        explicit_profile([1.0, math.inf])
    with pytest.raises(ProfileError):
        explicit_profile([1.0])  # fewer than 2 entries


def test_load_profile(tmp_path):
    path = tmp_path / "vals.txt"
    path.write_text("# strengths\n2.0\n\n0.5  # middle\n1.25\n")
    prof = load_profile(path)
    assert np.array_equal(prof.values, np.array([2.0, 0.5, 1.25]))

    with pytest.raises(ProfileError, match="expected 4"):
        load_profile(path, size=4)

    bad = tmp_path / "bad.txt"
    bad.write_text("1.0\noops\n")
    with pytest.raises(ProfileError, match="bad.txt:2"):
        load_profile(bad)

    empty = tmp_path / "empty.txt"
    empty.write_text("# nothing\n")
    with pytest.raises(ProfileError, match="no values"):
        load_profile(empty)


def test_build_profile_dispatch(tmp_path):
    assert build_profile(ProfileSpec("constant"), 6).family == "constant"
    prof = build_profile(ProfileSpec("power_law", p=-0.5), 4)
    assert np.array_equal(prof.values, power_law_profile(4, -0.5).values)
    prof = build_profile(ProfileSpec("exponential", base=3.0), 4)
    assert np.array_equal(prof.values, exponential_profile(4, 3.0).values)

    prof = build_profile(ProfileSpec("explicit", values=(1.0, 2.0)), 2)
    assert np.array_equal(prof.values, np.array([1.0, 2.0]))
    with pytest.raises(ProfileError):
        build_profile(ProfileSpec("explicit", values=(1.0, 2.0)), 3)

    path = tmp_path / "v.txt"
    path.write_text("1.0\n2.0\n")
    prof = build_profile(ProfileSpec("explicit", path=str(path)), 2)
    assert prof.size == 2

    with pytest.raises(ProfileError):
        build_profile(ProfileSpec("power_law"), 4)
    with pytest.raises(ProfileError):
        build_profile(ProfileSpec("exponential"), 4)
    with pytest.raises(ProfileError):
        build_profile(ProfileSpec("explicit"), 4)
    with pytest.raises(ProfileError):
        build_profile(ProfileSpec("nonsense"), 4)


def test_build_profile_deterministic():
    a = build_profile(ProfileSpec("power_law", p=-0.7), 50)
    b = build_profile(ProfileSpec("power_law", p=-0.7), 50)
    assert np.array_equal(a.values, b.values)


def test_weights_and_inverse_roundtrip():
    prof = power_law_profile(30, -0.5)
    np.testing.assert_allclose(prof.weights() ** 2, prof.values, rtol=1e-15)
    np.testing.assert_allclose(prof.inverse() * prof.values,
                               np.ones(30), rtol=1e-15)


def test_values_are_read_only():
    prof = constant_profile(4)
    with pytest.raises(ValueError):
        prof.values[0] = 2.0


def test_validity_ratio_constant():
    # x_i = 1 turns the ratio into pi/N when rho0 = 1/pi
    r = validity_ratio(constant_profile(100), 1.0 / math.pi)
    assert math.isclose(r, math.pi / 100, rel_tol=1e-14)


def test_validity_ratio_power_law():
    size = 100
    prof = power_law_profile(size, -0.5)
    xs = [math.sqrt(size / n) for n in range(1, size + 1)]
    rho0 = sum(xs) / (math.pi * size)
    expect = sum(x * x for x in xs) / (rho0 * size**2)
    got = validity_ratio(prof, rho0)
    assert math.isclose(got, expect, rel_tol=1e-12)


def test_validity_ratio_exponential_blows_up():
    # geometric growth of x_i^2 drives the ratio far past unity
    prof = exponential_profile(50, 2.0)
    assert validity_ratio(prof, 1.0) > 1e3


def test_validity_ratio_requires_positive_rho():
    with pytest.raises(ValueError):
        validity_ratio(constant_profile(10), 0.0)


def test_profile_spec_labels():
    assert ProfileSpec("constant").label() == "constant"
    assert ProfileSpec("power_law", p=-0.5).label() == "power_law(p=-0.5)"
    assert ProfileSpec("exponential", base=2.0).label() == \
        "exponential(base=2.0)"
