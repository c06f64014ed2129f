import math

import numpy as np
import pytest

from dgue import (constant_profile, deform, density_of_states, eigensystem,
                  explicit_profile, fix_phases, generalized_equivalence_check,
                  power_law_profile, sample_gue, solve_saddle)


def test_gue_matrix_is_hermitian():
    rng = np.random.default_rng(1)
    h = sample_gue(64, rng)
    assert np.array_equal(h, h.conj().T)
    assert h.dtype == np.complex128


def test_gue_entry_variances():
    size = 40
    rng = np.random.default_rng(2)
    draws = np.stack([sample_gue(size, rng) for _ in range(200)])
    off = draws[:, 0, 1]
    # complex off-diagonal entries have total variance 1/N
    var_off = np.mean(np.abs(off) ** 2)
    assert math.isclose(var_off, 1.0 / size, rel_tol=0.15)
    diag = draws[:, 3, 3]
    assert np.max(np.abs(diag.imag)) == 0.0
    var_diag = np.mean(diag.real ** 2)
    assert math.isclose(var_diag, 1.0 / size, rel_tol=0.25)


def test_deform_scales_entry_variances():
    values = np.array([4.0, 1.0, 0.25, 2.0, 1.0, 0.5, 1.0, 1.0])
    prof = explicit_profile(values)
    size = len(values)
    rng = np.random.default_rng(3)
    acc = np.zeros((size, size))
    draws = 3000
    for _ in range(draws):
        h = deform(sample_gue(size, rng), prof)
        acc += np.abs(h) ** 2
    acc /= draws
    expect = np.outer(values, values) / size
    np.testing.assert_allclose(acc, expect, rtol=0.12)


def test_deform_keeps_hermiticity():
    rng = np.random.default_rng(4)
    prof = power_law_profile(32, -0.5)
    h = deform(sample_gue(32, rng), prof)
    assert np.array_equal(h, h.conj().T)


def test_eigensystem_two_by_two():
    h = np.array([[0.0, 2.0], [2.0, 0.0]], dtype=complex)
    sys = eigensystem(h)
    np.testing.assert_allclose(sys.values, [-2.0, 2.0], atol=1e-14)


def test_eigensystem_properties():
    rng = np.random.default_rng(5)
    prof = power_law_profile(60, -0.5)
    h = deform(sample_gue(60, rng), prof)
    sys = eigensystem(h)
    assert np.all(np.diff(sys.values) >= 0)
    gram = sys.vectors.conj().T @ sys.vectors
    np.testing.assert_allclose(gram, np.eye(60), atol=1e-12)
    resid = h @ sys.vectors - sys.vectors * sys.values[None, :]
    assert np.max(np.abs(resid)) < 1e-12


def test_fix_phases_pivot_convention():
    rng = np.random.default_rng(6)
    h = sample_gue(30, rng)
    sys = eigensystem(h)
    vecs = sys.vectors
    pivots = vecs[np.argmax(np.abs(vecs), axis=0), np.arange(30)]
    assert np.all(pivots.real > 0)
    assert np.max(np.abs(pivots.imag)) <= 1e-12


def test_fix_phases_idempotent():
    rng = np.random.default_rng(7)
    h = sample_gue(24, rng)
    vecs = np.linalg.eigh(h)[1]
    once = fix_phases(vecs)
    twice = fix_phases(once)
    assert np.max(np.abs(twice - once)) < 1e-14


def test_density_matches_empirical_spectrum():
    # fraction of eigenvalues in a fixed band vs integrated mean-field density
    size = 384
    prof = power_law_profile(size, -0.5)
    lo, hi = -0.5, 0.5
    grid = np.linspace(lo, hi, 201)
    vals = np.array([density_of_states(prof, solve_saddle(prof, e)).rho
                     for e in grid])
    # Simpson weights on a uniform grid
    w = np.ones(201)
    w[1:-1:2] = 4.0
    w[2:-1:2] = 2.0
    theory = (grid[1] - grid[0]) / 3.0 * float(w @ vals)

    rng = np.random.default_rng(8)
    count = 0
    reals = 40
    for _ in range(reals):
        h = deform(sample_gue(size, rng), prof)
        eigs = np.linalg.eigvalsh(h)
        count += int(np.sum((eigs >= lo) & (eigs <= hi)))
    empirical = count / (reals * size)
    assert abs(empirical - theory) < 0.015


def test_equivalence_of_direct_and_generalized_forms():
    # the two diagonalization routes must agree to near machine precision
    prof = power_law_profile(64, -0.5)
    worst_gap = 0.0
    worst_angle = 0.0
    for seed in range(20):
        rng = np.random.default_rng(seed)
        report = generalized_equivalence_check(prof, rng)
        worst_gap = max(worst_gap, report.max_value_gap)
        worst_angle = max(worst_angle, report.max_angle)
        assert report.compared + report.skipped == 64
        assert report.skipped <= 2
    assert worst_gap <= 1e-8
    assert worst_angle <= 1e-8


def test_equivalence_with_heavy_profile():
    prof = power_law_profile(48, -2.0)
    rng = np.random.default_rng(123)
    report = generalized_equivalence_check(prof, rng)
    assert report.max_value_gap <= 1e-8
    assert report.max_angle <= 1e-6


def test_sample_gue_accepts_seed_or_generator():
    a = sample_gue(16, 99)
    b = sample_gue(16, np.random.default_rng(99))
    assert np.array_equal(a, b)
