import cmath
import inspect
import math

import numpy as np
import pytest
from scipy.special import spherical_jn

from genscatter.coulomb import CoulombParams, s_st
from genscatter.errors import DomainError, PreconditionError
from genscatter.potentials import (compact_bump, coulomb, dirac_coulomb, inverse_linear_tail,
                                   inverse_square_tail, zero_potential)
from genscatter.radial import (deviation_dirac, deviation_dirac_type, deviation_schrodinger,
                               extract_s_dirac, extract_s_dirac_type, extract_s_schrodinger,
                               integrate_dirac, integrate_dirac_type, integrate_schrodinger)


def riccati_j(n, x):
    return x * spherical_jn(n, x)


def double_factorial(n):
    return math.prod(range(n, 0, -2)) if n > 0 else 1


# ---------------------------------------------------------------------------
# Schrodinger


def test_free_s_wave_solution():
    k = 1.3
    traj = integrate_schrodinger(0, k, zero_potential(), R=10.0, dense=True)
    y = traj(10.0)[0]
    assert abs(y - math.sin(k * 10.0) / k) <= 1e-8 * abs(math.sin(k * 10.0) / k)


def test_free_p_wave_solution():
    k = 0.8
    traj = integrate_schrodinger(1, k, zero_potential(), R=10.0, dense=True)
    rs = np.linspace(1.0, 10.0, 19)
    exact = 3.0 / k ** 2 * riccati_j(1, k * rs)
    got = traj(rs)[:, 0]
    assert np.max(np.abs(got - exact)) <= 1e-8 * np.max(np.abs(exact))


def test_coulomb_trajectory_self_convergence():
    pot = coulomb(1.0)
    rs = np.linspace(1.0, 100.0, 50)
    a = integrate_schrodinger(0, 1.0, pot, R=100.0, dense=True)(rs)
    b = integrate_schrodinger(0, 1.0, pot, R=100.0, rtol=1e-13, dense=True)(rs)
    assert np.max(np.abs(a - b)) <= 1e-8 * np.max(np.abs(b))


def test_flux_conservation_for_complex_combination():
    pot = coulomb(1.0) + inverse_square_tail(2.0)
    rs = np.linspace(0.5, 200.0, 40)
    one = integrate_schrodinger(1, 1.0, pot, r0=0.5, R=200.0, dense=True, y0=(1.0, 0.0))
    two = integrate_schrodinger(1, 1.0, pot, r0=0.5, R=200.0, dense=True, y0=(0.0, 1.0))
    y = one(rs)[:, 0] + 1j * two(rs)[:, 0]
    dy = one(rs)[:, 1] + 1j * two(rs)[:, 1]
    flux = np.imag(np.conj(y) * dy)
    assert abs(flux[0] - 1) < 1e-15
    assert np.max(np.abs(flux - 1)) <= 1e-9


def test_deviation_factor_schrodinger():
    pot = coulomb(1.0)
    assert abs(deviation_schrodinger(pot.a, 2.0, pot) - 1) < 1e-15
    assert deviation_schrodinger(50.0, 2.0, zero_potential()) == 1
    for r in (3.0, 1e4):
        assert abs(deviation_schrodinger(r, 2.0, pot) - cmath.exp(0.5j * math.log(r))) < 1e-13
        assert abs(abs(deviation_schrodinger(r, 2.0, pot)) - 1) < 1e-15


@pytest.mark.parametrize("k", [0.5, 1.0, 2.0])
def test_free_extraction_is_one(k):
    for ell in range(4):
        s = extract_s_schrodinger(ell, k, zero_potential(), R=100.0 / k)
        assert abs(s - 1) <= 1e-8


def test_coulomb_extraction_unitary_and_gamma_phases():
    pot = coulomb(1.0)
    s = [extract_s_schrodinger(ell, 1.0, pot, R=500.0) for ell in range(4)]
    assert all(abs(abs(v) - 1) <= 1e-8 for v in s)
    ref = [s_st(CoulombParams(1.0, 1.0, ell)) for ell in range(4)]
    for ell in range(1, 4):
        got = cmath.phase(s[ell] / s[0])
        want = cmath.phase(ref[ell] / ref[0])
        assert abs(got - want) <= 1e-3


def test_short_range_extraction_independent_of_radius():
    pot = inverse_square_tail(1.0)
    a = extract_s_schrodinger(1, 1.0, pot, R=500.0)
    b = extract_s_schrodinger(1, 1.0, pot, R=1000.0)
    assert abs(a - b) <= 1e-6


def test_leading_basis_drifts_without_deviation_factor():
    # with the bare free basis the Coulomb phase keeps drifting with R
    pot = coulomb(1.0)
    a = extract_s_schrodinger(0, 1.0, pot, R=500.0, basis="free")
    b = extract_s_schrodinger(0, 1.0, pot, R=1000.0, basis="free")
    drift = abs(cmath.phase(b / a))
    assert drift == pytest.approx(2 * math.log(2), rel=1e-3)
    c = extract_s_schrodinger(0, 1.0, pot, R=500.0)
    d = extract_s_schrodinger(0, 1.0, pot, R=1000.0)
    assert abs(c - d) <= 1e-6


def test_schrodinger_preconditions():
    with pytest.raises(PreconditionError):
        integrate_schrodinger(-1, 1.0, zero_potential())
    with pytest.raises(PreconditionError):
        integrate_schrodinger(0, 0.0, zero_potential())
    with pytest.raises(PreconditionError):
        extract_s_schrodinger(0, 1.0, zero_potential(), R=50.0, basis="bogus")


# ---------------------------------------------------------------------------
# Dirac


def free_dirac_error(A, kq=1, lam=2.0, m=1.0):
    """Max deviation from the free spinor, normalized by its size, on [0.5, 10]."""
    eta = math.sqrt(lam * lam - m * m)
    traj = integrate_dirac(kq, lam, m, dirac_coulomb(A), R=10.0, dense=True)
    alpha = math.sqrt(kq * kq - A * A)
    b0 = (alpha + kq) / A
    c = b0 * double_factorial(2 * kq - 1) / eta ** kq
    rs = np.linspace(0.5, 10.0, 60)
    f = c * eta / (lam - m) * riccati_j(kq, eta * rs)
    g = c * riccati_j(kq - 1, eta * rs)
    got = traj(rs)
    exact = np.column_stack([f, g])
    return np.max(np.abs(got - exact)) / np.max(np.abs(exact))


def test_free_dirac_limit_at_small_coupling():
    assert free_dirac_error(1e-6) <= 1e-6


def test_free_dirac_limit_converges_linearly_in_coupling():
    # the -A/r term perturbs the spinor at first order in A
    couplings = (1e-4, 1e-5, 1e-6, 1e-7)
    per_unit = [free_dirac_error(A) / A for A in couplings]
    assert max(per_unit) / min(per_unit) < 1.01
    assert free_dirac_error(1e-8) <= 1e-6


def test_dirac_determinant_constant():
    pot = dirac_coulomb(0.5) + compact_bump(0.3, 0.0, 4.0)
    one = integrate_dirac(1, 2.0, 1.0, pot, r0=0.5, R=200.0, dense=True, y0=(1.0, 0.0))
    two = integrate_dirac(1, 2.0, 1.0, pot, r0=0.5, R=200.0, dense=True, y0=(0.0, 1.0))
    rs = np.linspace(0.5, 200.0, 60)
    a, b = one(rs), two(rs)
    det = a[:, 0] * b[:, 1] - a[:, 1] * b[:, 0]
    assert np.max(np.abs(det - 1)) <= 1e-9


def test_dirac_coulomb_self_convergence():
    pot = dirac_coulomb(0.5)
    rs = np.linspace(0.5, 100.0, 40)
    a = integrate_dirac(1, 2.0, 1.0, pot, R=100.0, dense=True)(rs)
    b = integrate_dirac(1, 2.0, 1.0, pot, R=100.0, rtol=1e-13, dense=True)(rs)
    assert np.max(np.abs(a - b)) <= 1e-8 * np.max(np.abs(b))


def test_deviation_dirac():
    pot = dirac_coulomb(0.5)
    lam, m = 2.0, 1.0
    eta = math.sqrt(3.0)
    assert abs(deviation_dirac(pot.a, lam, m, pot) - 1) < 1e-15
    r = 40.0
    expected = cmath.exp(-1j * lam / eta * 0.5 * math.log(r / pot.a))
    assert abs(deviation_dirac(r, lam, m, pot) - expected) < 1e-13
    # the factor has no angular dependence at all
    assert "k_quantum" not in inspect.signature(deviation_dirac).parameters
    with pytest.raises(DomainError):
        deviation_dirac(2.0, 0.5, 1.0, pot)


@pytest.fixture(scope="module")
def dirac_result():
    return extract_s_dirac(1, 2.0, 1.0, dirac_coulomb(0.5), R=300.0)


def test_dirac_entries_unimodular_with_ratio_minus_one(dirac_result):
    s11, s22 = dirac_result.diagonal
    assert abs(abs(s11) - 1) < 1e-12 and abs(abs(s22) - 1) < 1e-12
    assert abs(s11 / s22 + 1) < 1e-12


def test_dirac_diagonal_product_is_minus_ratio_squared(dirac_result):
    c11 = dirac_result.c1[0]
    s11, s22 = dirac_result.diagonal
    assert abs(s11 * s22 + (c11.conjugate() / c11) ** 2) < 1e-12


def test_dirac_s_maps_c1_to_minus_c2(dirac_result):
    c1, c2 = dirac_result.c1, dirac_result.c2
    assert np.max(np.abs(c2 - np.conj(c1))) <= 1e-8 * np.max(np.abs(c1))
    assert np.max(np.abs(dirac_result.matrix @ c1 + c2)) <= 1e-8 * np.max(np.abs(c1))


def test_dirac_extraction_stable_in_radius():
    pot = dirac_coulomb(0.5) + compact_bump(1.0, 0.0, 5.0)
    a = extract_s_dirac(1, 2.0, 1.0, pot, R=1000.0).matrix
    b = extract_s_dirac(1, 2.0, 1.0, pot, R=2000.0).matrix
    assert np.max(np.abs(a - b)) < 1e-4


def test_dirac_preconditions():
    with pytest.raises(DomainError):
        integrate_dirac(0.4, 2.0, 1.0, dirac_coulomb(0.5))
    with pytest.raises(DomainError):
        integrate_dirac(1, 0.9, 1.0, dirac_coulomb(0.5))
    with pytest.raises(PreconditionError):
        integrate_dirac(1, 2.0, 1.0, zero_potential())


# ---------------------------------------------------------------------------
# Dirac-type


def test_dirac_type_free_solution():
    lam, m = 2.0, 1.0
    eta = math.sqrt(3.0)
    zero = zero_potential()
    traj = integrate_dirac_type(zero, zero, lam, m, R=30.0, dense=True)
    rs = np.linspace(0.0, 30.0, 61)
    got = traj(rs)
    assert np.max(np.abs(got[:, 1] - np.cos(eta * rs))) < 1e-9
    assert np.max(np.abs(got[:, 0] - (m + lam) / eta * np.sin(eta * rs))) < 1e-9


def test_dirac_type_determinant_constant():
    a_fn, b_fn = inverse_square_tail(0.5), inverse_linear_tail(1.0)
    one = integrate_dirac_type(a_fn, b_fn, 2.0, 1.0, R=100.0, dense=True)
    two = integrate_dirac_type(a_fn, b_fn, 2.0, 1.0, R=100.0, dense=True, y0=(1.0, 0.0))
    rs = np.linspace(0.0, 100.0, 50)
    p, q = one(rs), two(rs)
    det = p[:, 0] * q[:, 1] - p[:, 1] * q[:, 0]
    assert np.max(np.abs(det - det[0])) <= 1e-9 * abs(det[0])


def test_dirac_type_long_range_unitary():
    res = extract_s_dirac_type(zero_potential(), inverse_linear_tail(1.0), 2.0, 1.0, R=1000.0)
    s11, s22 = res.diagonal
    assert abs(abs(s11) - 1) <= 1e-8 and abs(abs(s22) - 1) <= 1e-8
    other = extract_s_dirac_type(zero_potential(), inverse_linear_tail(1.0), 2.0, 1.0, R=2000.0)
    assert abs(other.diagonal[0] - s11) < 1e-4


def test_deviation_dirac_type_reference_point():
    b_fn = inverse_linear_tail(1.0)
    assert abs(deviation_dirac_type(1.0, 2.0, 1.0, b_fn) - 1) < 1e-15
    expected = cmath.exp(1j * 2.0 / math.sqrt(3.0) * math.log(11.0 / 2.0))
    assert abs(deviation_dirac_type(10.0, 2.0, 1.0, b_fn) - expected) < 1e-13
