import math

import numpy as np
import pytest

from zetamax import dickman
from zetamax.constants import EXP_GAMMA
from zetamax.errors import OutOfDomainError, TailNotCertifiedError

# ---------------------------------------------------------------------------
# independent oracle: fine-step trapezoid integration of u rho'(u) = -rho(u-1)
# on a dyadic grid (step 2^-14), so u-1 always lands on a grid point.
# Values frozen below were produced by this oracle; it runs here as well so
# the derivation stays visible.

_H_EXP = 14


def _ode_oracle(max_u: float = 6.0):
    h = 2.0**-_H_EXP
    n_unit = 2**_H_EXP
    vals = [1.0] * (n_unit + 1)
    for i in range(n_unit, int(max_u * n_unit)):
        u0, u1 = i * h, (i + 1) * h
        f0 = vals[i - n_unit] / u0
        f1 = vals[i + 1 - n_unit] / u1
        vals.append(vals[i] - 0.5 * h * (f0 + f1))

    def at(u: float) -> float:
        return vals[round(u / h)]

    return at


_ORACLE_FROZEN = {
    1.5: 0.5945348917193672,
    2.0: 0.30685281920722224,
    2.5: 0.13031956150129687,
    3.0: 0.04860838794775547,
    4.0: 0.004910925341606593,
}


def test_ode_oracle_reproduces_frozen_values():
    at = _ode_oracle()
    for u, v in _ORACLE_FROZEN.items():
        assert at(u) == pytest.approx(v, abs=1e-15)


def test_table_matches_ode_oracle(table12):
    # trapezoid oracle is O(h^2) ~ 4e-9 accurate; table is certified 1e-12
    for u, v in _ORACLE_FROZEN.items():
        assert dickman.rho(u, table12) == pytest.approx(v, abs=1e-8)


def test_closed_form_on_first_interval(table12):
    # integrating the delay ODE once on [1, 2] gives rho(u) = 1 - log u
    assert dickman.rho(1.5, table12) == pytest.approx(1 - math.log(1.5), abs=table12.tol)
    assert dickman.rho(2.0, table12) == pytest.approx(1 - math.log(2.0), abs=table12.tol)


def test_exact_one_on_unit_interval(table12):
    for u in [0.0, 0.25, 0.5, 0.7853, 1.0]:
        assert dickman.rho(u, table12) == 1.0


def test_rho_at_10_order_of_magnitude(table12):
    # de Bruijn main term puts log rho(10) near -22; check the order only
    v = dickman.rho(10.0, table12)
    assert 0 < v < 1e-10


def test_monotone_and_positive(table60):
    us = np.arange(0.0, 60.0 + 1e-9, 0.01)
    vals = np.array([dickman.rho(float(u), table60) for u in us])
    assert np.all(vals > 0)
    assert np.all(np.diff(vals) <= 2 * table60.tol)
    assert np.all(vals <= 1.0)


def test_delay_ode_residual(table60):
    # centered difference of u*rho(u) equals rho(u) - rho(u-1); the
    # difference window must not straddle the derivative kinks at integers
    h = 1e-5
    for u in np.arange(1.3, 39.0, 0.7):
        if abs(u - round(u)) < 1e-2:
            continue
        lhs = ((u + h) * dickman.rho(u + h, table60) - (u - h) * dickman.rho(u - h, table60)) / (2 * h)
        rhs = dickman.rho(u, table60) - dickman.rho(u - 1, table60)
        assert lhs == pytest.approx(rhs, abs=5e-7)


def test_build_validation():
    with pytest.raises(ValueError):
        dickman.build_rho_table(0.5, 1e-10)
    with pytest.raises(ValueError):
        dickman.build_rho_table(10.0, 0.0)
    with pytest.raises(ValueError):
        dickman.build_rho_table(10.0, 1e-15)
    with pytest.raises(ValueError):
        dickman.build_rho_table(2000.0, 1e-10)


def test_rho_domain_errors(table12):
    with pytest.raises(ValueError):
        dickman.rho(-0.5, table12)
    with pytest.raises(OutOfDomainError):
        dickman.rho(12.5, table12)


# ---------------------------------------------------------------------------
# Laplace transform

def _ein_quad_oracle(s: float, panels: int = 64) -> float:
    # composite Gauss-Legendre quadrature of (e^-z - 1)/z on [0, s]
    nodes, weights = np.polynomial.legendre.leggauss(32)
    total = 0.0
    for i in range(panels):
        a, b = s * i / panels, s * (i + 1) / panels
        mid, half = (a + b) / 2, (b - a) / 2
        z = mid + half * nodes
        f = np.where(np.abs(z) < 1e-12, -1.0 + z / 2, (np.exp(-z) - 1.0) / z)
        total += half * float(np.dot(weights, f))
    return total


_RHS_FROZEN = {
    0.25: 1.4077768059600058,
    0.5: 1.14267680641155,
    1.0: 0.8030133545148503,
    2.0: 0.4761379331187265,
    4.0: 0.24905694508847445,
}


def test_laplace_rhs_against_quadrature_oracle():
    for s, frozen in _RHS_FROZEN.items():
        oracle = math.exp(dickman.EULER_GAMMA + _ein_quad_oracle(s))
        assert oracle == pytest.approx(frozen, abs=1e-13)
        assert dickman.laplace_rhs(s) == pytest.approx(frozen, abs=1e-12)


def test_laplace_rhs_at_zero_is_exp_gamma():
    assert dickman.laplace_rhs(0.0) == EXP_GAMMA


def test_laplace_rhs_large_s_mpmath_path():
    # for s >> 1 the transform approaches 1/s (the [0,1] block dominates)
    v = dickman.laplace_rhs(50.0)
    assert v == pytest.approx(1.0 / 50.0, rel=1e-8)
    v = dickman.laplace_rhs(12.0)
    assert 0 < v < 1.0 / 11.0


def test_laplace_identity(table60):
    for s in (0.0, 0.25, 0.5, 1.0, 2.0, 4.0):
        lhs = dickman.laplace_lhs(s, table60, 1e-10)
        rhs = dickman.laplace_rhs(s, 1e-12)
        assert abs(lhs - rhs) <= 2e-10


def test_laplace_lhs_tail_not_certified():
    small = dickman.build_rho_table(3.0, 1e-12)
    with pytest.raises(TailNotCertifiedError):
        dickman.laplace_lhs(0.0, small, 1e-10)


def test_laplace_validation(table12):
    with pytest.raises(ValueError):
        dickman.laplace_rhs(-1.0)
    with pytest.raises(ValueError):
        dickman.laplace_rhs(101.0)
    with pytest.raises(ValueError):
        dickman.laplace_lhs(-0.1, table12, 1e-8)


# ---------------------------------------------------------------------------
# asymptotic main term

def test_asymptotic_main_term_values():
    assert dickman.log_rho_asymptotic_main(1.0) == pytest.approx(
        1 - math.log(math.log(3.0)), abs=1e-14
    )
    assert dickman.log_rho_asymptotic_main(50.0) == pytest.approx(-214.30267001225508, abs=1e-9)
    with pytest.raises(ValueError):
        dickman.log_rho_asymptotic_main(0.0)


def test_asymptotic_ratio_window(table60):
    # loose regime check: log rho(20) within 20% of the main term
    ratio = math.log(dickman.rho(20.0, table60)) / dickman.log_rho_asymptotic_main(20.0)
    assert 0.8 <= ratio <= 1.2


# ---------------------------------------------------------------------------
# serialization

def test_serialization_roundtrip(tmp_path, table12):
    path = tmp_path / "rho.json"
    dickman.save_table(table12, str(path))
    back = dickman.load_table(str(path))
    assert back.max_u == table12.max_u
    assert back.tol == table12.tol
    assert back.interval_tols == table12.interval_tols
    assert len(back.intervals) == len(table12.intervals)
    for a, b in zip(table12.intervals, back.intervals):
        assert np.array_equal(a, b)
    for u in (0.3, 1.7, 5.5, 11.9):
        assert dickman.rho(u, back) == dickman.rho(u, table12)


def test_load_rejects_unknown_format(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text('{"format": "other", "schema_version": 9}')
    with pytest.raises(ValueError):
        dickman.load_table(str(path))
