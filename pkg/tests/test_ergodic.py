import cmath
import math

import numpy as np
import pytest
from scipy import integrate

from genscatter.errors import DomainError, PreconditionError
from genscatter.ergodic import (DynamicalDeviation, c_of_p, check_admissibility, check_ergodic_dirac,
                                check_ergodic_schrodinger, coulomb_dynamical, w0_dirac, w0_schrodinger)
from genscatter.potentials import (coulomb, compact_bump, inverse_linear_tail, inverse_square_tail,
                                   quadrature_tail, zero_potential)

T_GRID = np.geomspace(1, 1e4, 50)

ANALYTIC = [coulomb(1.0), inverse_square_tail(2.0), inverse_linear_tail(0.7),
            coulomb(0.5) + inverse_square_tail(1.0)]
QUADRATURED = [quadrature_tail(3.0), compact_bump(1.5, 0.0, 5.0)]


def test_w0_schrodinger_is_one_at_lower_limit():
    pot = coulomb(1.0, a=2.0)
    assert w0_schrodinger(1.0, 2.0, pot) == 1.0


def test_w0_schrodinger_coulomb_closed_form():
    # (i/2k) int_1^{tk} 2z/r dr = i (z/k) ln(tk)
    z, k = 1.0, 2.0
    for t in (1.0, 37.0, 1e4):
        assert abs(w0_schrodinger(t, k, coulomb(z)) - cmath.exp(1j * z / k * math.log(t * k))) < 1e-13
        assert abs(abs(w0_schrodinger(t, k, coulomb(z))) - 1) < 1e-15


def test_w0_schrodinger_domain():
    with pytest.raises(DomainError):
        w0_schrodinger(0.1, 1.0, coulomb(1.0))
    with pytest.raises(DomainError):
        check_ergodic_schrodinger(coulomb(1.0), 1.0, [0.5, 2.0])


@pytest.mark.parametrize("pot", ANALYTIC)
def test_ergodic_schrodinger_analytic(pot):
    assert check_ergodic_schrodinger(pot, 2.0, T_GRID) <= 1e-12


@pytest.mark.parametrize("pot", QUADRATURED)
def test_ergodic_schrodinger_quadratured(pot):
    assert check_ergodic_schrodinger(pot, 2.0, T_GRID) <= 1e-9


def test_w0_dirac_trivial_cases():
    assert w0_dirac(5.0, 1.0, 1.0, zero_potential()) == 1.0
    assert w0_dirac(1.0, 1.0, 1.0, inverse_square_tail(1.0)) == 1.0
    with pytest.raises(DomainError):
        w0_dirac(0.5, 1.0, 1.0, inverse_square_tail(1.0))


def test_w0_dirac_logarithmic_closed_form():
    # int_1^t c/(1 + r s) dr = (c/s) ln((1 + t s)/(1 + s))
    c, p, m = 0.8, 1.0, 1.0
    s = p / math.hypot(p, m)
    for t in (3.0, 250.0, -40.0):
        phase = math.copysign(1, t) * c / s * math.log((1 + abs(t) * s) / (1 + s))
        assert abs(w0_dirac(t, p, m, inverse_linear_tail(c)) - cmath.exp(1j * phase)) < 1e-13


def test_ergodic_dirac():
    res = check_ergodic_dirac(inverse_square_tail(1.0), 1.0, 1.0, T_GRID)
    assert res.constancy_deviation <= 1e-10
    assert res.modulus_deviation <= 1e-12


def test_ergodic_dirac_zero_b():
    res = check_ergodic_dirac(zero_potential(), 1.0, 1.0, T_GRID)
    assert res.c_of_p == 1.0


@pytest.mark.parametrize("p, m", [(1.0, 1.0), (0.3, 2.0), (4.0, 0.5)])
def test_constant_ratio_matches_independent_quadrature(p, m):
    c = 1.3
    s = p / math.hypot(p, m)
    val, _ = integrate.quad(lambda r: c / (1 + r * s) ** 2, 1 / s, 1.0, epsabs=1e-14, epsrel=1e-13)
    oracle = cmath.exp(1j * val)
    b = inverse_square_tail(c)
    res = check_ergodic_dirac(b, p, m, T_GRID)
    assert abs(res.c_of_p - oracle) < 1e-12
    assert abs(c_of_p(b, p, m) - oracle) < 1e-12


def test_ergodic_dirac_preconditions():
    with pytest.raises(PreconditionError):
        check_ergodic_dirac(inverse_square_tail(), -1.0, 1.0, T_GRID)
    with pytest.raises(DomainError):
        check_ergodic_dirac(inverse_square_tail(), 1.0, 1.0, [0.5, 3.0])


def test_admissibility_coulomb_bound():
    z, k, tau, t = 1.0, 1.0, 5.0, 1e6
    got = check_admissibility(coulomb_dynamical(z), [k], tau)
    assert got <= abs(z / k) * abs(math.log1p(tau / t)) + 1e-12
    assert got == pytest.approx(5e-6, rel=1e-3)


def test_admissibility_constant():
    assert check_admissibility(DynamicalDeviation(lambda t, k: 1.0), [0.5, 1, 3], 5.0) == 0.0


def test_admissibility_dirac_family_mean_value_bound():
    b = inverse_square_tail(1.0)
    w = DynamicalDeviation(lambda t, p: w0_dirac(t, p, 1.0, b))
    got = check_admissibility(w, [0.5, 1.0, 2.0], 5.0)
    s_min = 0.5 / math.hypot(0.5, 1.0)
    assert got <= 5.0 / (1 + 1e6 * s_min) ** 2 + 1e-15
    assert got <= 1e-5


def test_dynamical_deviation_unit_modulus():
    w = coulomb_dynamical(2.0, branch=-1)
    for t in (-1e3, 2.0, 1e8):
        assert abs(abs(w(t, 0.7)) - 1) < 1e-15
