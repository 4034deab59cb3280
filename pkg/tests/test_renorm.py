import cmath
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from genscatter.errors import DegenerateDesignError, PreconditionError
from genscatter.renorm import (DivergenceProfile, MatrixInteraction, dyson_coefficients, dyson_sum,
                               fit_divergence_profile, modulus_invariance, read_samples_csv,
                               regularized_coefficient, time_ordered_product, u0_factor,
                               write_samples_csv)

SIGMA1 = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA3 = np.diag([1.0, -1.0]).astype(complex)
L_GRID = np.geomspace(10, 1e4, 31)


def ramp(T=4.0):
    return MatrixInteraction(lambda t: SIGMA3 + (t / T) * SIGMA1, 2)


def test_order_zero_is_identity():
    (only,) = dyson_coefficients(ramp(), 0.0, 4.0, 0)
    assert np.array_equal(only, np.eye(2))


def test_scalar_constant_interaction_closed_form():
    v, t0, t = 0.7, -1.0, 2.5
    coeffs = dyson_coefficients(MatrixInteraction(lambda u: [[v]], 1), t0, t, 8)
    for k, c in enumerate(coeffs):
        exact = (-1j * v * (t - t0)) ** k / math.factorial(k)
        assert abs(c[0, 0] - exact) <= 1e-10


def test_truncated_series_matches_time_ordered_product():
    V = ramp()
    U = dyson_sum(dyson_coefficients(V, 0.0, 4.0, 8), 0.1)
    oracle = time_ordered_product(V, 0.0, 4.0, 0.1, steps=10_000)
    assert np.max(np.abs(U - oracle)) <= 1e-6


def test_unitarity_defect_scaling_exponent():
    K = 8
    coeffs = dyson_coefficients(ramp(), 0.0, 4.0, K)
    eps = np.array([0.2, 0.1, 0.05])
    defects = [np.linalg.norm(dyson_sum(coeffs, e).conj().T @ dyson_sum(coeffs, e) - np.eye(2), 2)
               for e in eps]
    slope = np.polyfit(np.log(eps), np.log(defects), 1)[0]
    assert slope >= K + 0.5


def test_dyson_preconditions():
    with pytest.raises(PreconditionError):
        dyson_coefficients(ramp(), 0.0, 1.0, 13)
    skew = MatrixInteraction(lambda t: np.array([[0, 1], [-1, 0]]), 2)
    with pytest.raises(PreconditionError):
        dyson_coefficients(skew, 0.0, 1.0, 2)
    with pytest.raises(PreconditionError):
        MatrixInteraction(lambda t: np.eye(9), 9)


def samples(fn, grid=L_GRID):
    return [(float(L), fn(L)) for L in grid]


def test_profile_recovery_from_synthetic_curve():
    curve = lambda L: 1j * (2 * L * L + 3 * L + 0.5 * math.log(L) + 1 + 1 / L)
    prof = fit_divergence_profile(samples(curve))
    got = np.array([prof.phi, prof.psi, prof.nu, prof.mu])
    assert np.max(np.abs(got - [2, 3, 0.5, 1])) <= 1e-3


def test_profile_recovery_without_tail_is_exact():
    curve = lambda L: 1j * (2 * L * L + 3 * L + 0.5 * math.log(L) + 1)
    prof = fit_divergence_profile(samples(curve))
    assert np.max(np.abs(np.array([prof.phi, prof.psi, prof.nu, prof.mu]) - [2, 3, 0.5, 1])) <= 1e-6
    assert prof.residual < 1e-6


def test_pure_log_input():
    prof = fit_divergence_profile(samples(lambda L: 1j * (1.7 * math.log(L) - 0.4)))
    assert abs(prof.phi) < 1e-12 and abs(prof.psi) < 1e-10
    assert prof.nu == pytest.approx(1.7, abs=1e-9)
    assert prof.mu == pytest.approx(-0.4, abs=1e-8)


def test_linear_subcase():
    prof = fit_divergence_profile(samples(lambda L: 1j * L))
    assert abs(prof.phi) < 1e-12 and abs(prof.nu) < 1e-9
    assert prof.psi == pytest.approx(1.0, abs=1e-12)


def test_fit_input_validation():
    with pytest.raises(PreconditionError):
        fit_divergence_profile(samples(lambda L: 1j * L, L_GRID[:5]))
    with pytest.raises(PreconditionError, match="purely imaginary"):
        fit_divergence_profile(samples(lambda L: 1e-3 + 1j * L))
    with pytest.raises(DegenerateDesignError):
        fit_divergence_profile(samples(lambda L: 1j * L, np.geomspace(10, 500, 8)))
    with pytest.raises(DegenerateDesignError):
        fit_divergence_profile(samples(lambda L: 1j * L, [10, 10, 10, 1e3, 1e3, 1e3]))


def test_u0_factor_examples():
    assert u0_factor(DivergenceProfile(0, 0, 0, 5.0), 123.0, 0.3) == 1.0
    eps = 0.3
    for L in (2.0, 50.0, 1e3):
        assert abs(u0_factor(DivergenceProfile(0, 1, 0, 0), L, eps) - cmath.exp(1j * eps ** 2 * L)) < 1e-15
        # L^{i eps^2 nu}
        assert abs(u0_factor(DivergenceProfile(0, 0, 2, 0), L, eps) - L ** (1j * eps ** 2 * 2)) < 1e-14
    with pytest.raises(PreconditionError):
        u0_factor(DivergenceProfile(0, 1, 0, 0), 1.0, eps)


@settings(max_examples=100, deadline=None)
@given(st.floats(-5, 5), st.floats(-5, 5), st.floats(-5, 5), st.floats(1.5, 1e4), st.floats(0, 1))
def test_u0_unit_modulus(phi, psi, nu, L, eps):
    assert abs(abs(u0_factor(DivergenceProfile(phi, psi, nu, 0.0), L, eps)) - 1) < 1e-12


def test_regularized_exact_profile_gives_constant():
    prof = DivergenceProfile(2, 3, 0.5, 1)
    for L in (10.0, 1e3, 1e4):
        assert abs(regularized_coefficient(1j * prof(L), prof, L) - 1j) < 1e-12 * L * L


def test_regularized_sequence_with_tail_is_cauchy():
    prof = DivergenceProfile(2, 3, 0.5, 1)
    reg = [regularized_coefficient(1j * (prof(L) + 1 / L), prof, L) for L in (1e2, 1e3, 1e4)]
    gaps = [abs(b - a) for a, b in zip(reg, reg[1:])]
    assert gaps[1] < 1e-3 and gaps[1] < gaps[0]
    assert abs(reg[-1] - 1j) < 2e-4


def test_regularized_pure_log():
    prof = DivergenceProfile(0, 0, 0.8, 0)
    assert regularized_coefficient(2 + 3j, prof, 100.0) == pytest.approx(2 + 3j - 0.8j * math.log(100))


def test_modulus_invariance():
    rng = np.random.default_rng(12)
    assert modulus_invariance(0, u0_factor(DivergenceProfile(1, 1, 1, 1), 5.0, 1.0)) == (0, 0)
    for _ in range(100):
        s = complex(*rng.normal(size=2))
        prof = DivergenceProfile(*rng.normal(size=4))
        raw, reg = modulus_invariance(s, u0_factor(prof, 1e3, rng.uniform(0, 1)))
        assert abs(raw - reg) <= 1e-14 * max(1.0, raw)
    with pytest.raises(PreconditionError):
        modulus_invariance(1.0, 1.01)


def test_samples_csv_round_trip(tmp_path):
    data = samples(lambda L: complex(0.1 / L, math.pi * L))
    path = tmp_path / "a2.csv"
    write_samples_csv(path, data)
    text = path.read_text()
    path.write_text("# generated\n" + text)
    assert read_samples_csv(path) == data


def test_samples_csv_errors(tmp_path):
    bad = tmp_path / "bad.csv"
    bad.write_text("L,re\n1,2\n")
    with pytest.raises(PreconditionError, match="lacks columns"):
        read_samples_csv(bad)
    bad.write_text("L,re_a2,im_a2\n10,0,x\n")
    with pytest.raises(PreconditionError, match="line 2"):
        read_samples_csv(bad)
