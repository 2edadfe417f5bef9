import math

import mpmath
import numpy as np
import pytest

from zetamax import zeta
from zetamax.errors import PrecisionUnreachableError, ResourceLimitError

# classical anchors (independent of both evaluators under test)
PI2_OVER_6 = 1.6449340668482264
MINUS_ZETA_PRIME_2 = 0.9375482543158437  # sum log n / n^2


def test_truncated_classical_values():
    r = zeta.zeta_derivative_truncated(0, 2.0, 0.0, 10**6)
    assert r.value.imag == 0.0
    assert r.value.real == pytest.approx(PI2_OVER_6, abs=1e-5)
    r = zeta.zeta_derivative_truncated(1, 2.0, 0.0, 10**6)
    assert r.value.real == pytest.approx(MINUS_ZETA_PRIME_2, abs=1e-4)
    assert r.value.real > 0  # signed convention: (-1) zeta'(2) is positive


def test_sign_unwrap_helper():
    r = zeta.zeta_derivative_truncated(1, 2.0, 0.0, 10**5)
    assert zeta.zeta_derivative(r) == -r.value
    r0 = zeta.zeta_derivative_truncated(0, 2.0, 0.0, 10**3)
    assert zeta.zeta_derivative(r0) == r0.value


def test_truncated_validation():
    with pytest.raises(ValueError):
        zeta.zeta_derivative_truncated(0, 0.5, 10.0, 100)
    with pytest.raises(ValueError):
        zeta.zeta_derivative_truncated(0, 1.0, 0.0, 100)  # the pole
    with pytest.raises(ValueError):
        zeta.zeta_derivative_truncated(0, 2.0, 0.0, 1)
    with pytest.raises(ValueError):
        zeta.zeta_derivative_truncated(-1, 2.0, 0.0, 100)


def test_conjugate_symmetry_exact():
    for (ell, sigma, t, n) in [(0, 1.0, 17.25, 400), (2, 1.5, 999.5, 2000)]:
        a = zeta.zeta_derivative_truncated(ell, sigma, t, n).value
        b = zeta.zeta_derivative_truncated(ell, sigma, -t, n).value
        assert a == b.conjugate()


def test_error_estimate_monotone_in_N():
    # with eps pinned to 1/log log N the envelope has a small-N hump for
    # large ell (e.g. it rises from N=64 to N=256 at ell=6) and is
    # decreasing beyond N ~ 1e3; assert the monotone range per order
    for ell in (0, 1, 3, 6):
        prev = math.inf
        start = 64 if ell <= 3 else 1024
        for n in (64, 256, 1024, 4096, 65536, 10**6):
            if n < start:
                continue
            est = zeta.truncation_error_estimate(ell, 1.0, n)
            assert est < prev, (ell, n)
            prev = est


def test_doubling_consistency():
    # out-of-window probe: the change under N doubling stays inside the
    # two error envelopes
    a = zeta.zeta_derivative_truncated(1, 1.0, 10**4, 10**5)
    b = zeta.zeta_derivative_truncated(1, 1.0, 10**4, 2 * 10**5)
    assert abs(abs(a.value) - abs(b.value)) <= a.error_estimate + b.error_estimate


# ---------------------------------------------------------------------------
# Euler-Maclaurin reference

def test_reference_classical_point():
    r = zeta.zeta_derivative_reference(0, 2.0, 0.0, 1e-12)
    assert r.value.real == pytest.approx(PI2_OVER_6, abs=1e-12)


def test_reference_against_mpmath_grid():
    mpmath.mp.dps = 30
    pts = [(0, 2.0, 0.0), (1, 2.0, 0.0), (2, 1.0, 5.0), (3, 1.0, 50.0),
           (1, 1.0, 1000.0), (0, 0.6, 3.0), (4, 1.2, 3.0), (6, 2.0, 7.0)]
    for (ell, sigma, t) in pts:
        ref = zeta.zeta_derivative_reference(ell, sigma, t, 1e-10)
        ours = zeta.zeta_derivative(ref)
        other = complex(mpmath.zeta(mpmath.mpc(sigma, t), derivative=ell))
        assert abs(ours - other) <= max(ref.error_estimate, 1e-13), (ell, sigma, t)


def test_reference_stability_under_tightened_tol():
    a = zeta.zeta_derivative_reference(0, 1.0, 100.0, 1e-8).value
    b = zeta.zeta_derivative_reference(0, 1.0, 100.0, 1e-9).value
    assert 0 < abs(a) < 10
    assert abs(a - b) <= 1e-8


def test_reference_validation():
    with pytest.raises(ValueError):
        zeta.zeta_derivative_reference(7, 1.0, 10.0)
    with pytest.raises(ValueError):
        zeta.zeta_derivative_reference(0, 0.5, 10.0)
    with pytest.raises(ValueError):
        zeta.zeta_derivative_reference(0, 5.0, 10.0)
    with pytest.raises(ValueError):
        zeta.zeta_derivative_reference(0, 1.0, 2e8)
    with pytest.raises(PrecisionUnreachableError):
        zeta.zeta_derivative_reference(5, 1.0, 2000.0, 1e-14)


def test_oracle_agreement_in_window():
    # N chosen so t sits inside [N, 6.28 N]
    for (ell, sigma, t) in [(0, 1.0, 50.0), (1, 1.0, 50.0), (2, 1.5, 1000.0),
                            (3, 1.0, 1000.0), (1, 2.0, 100000.0)]:
        n = int(t)
        tr = zeta.zeta_derivative_truncated(ell, sigma, t, n)
        ref = zeta.zeta_derivative_reference(ell, sigma, t, 1e-7)
        assert zeta.in_lemma_window(t, n)
        assert abs(tr.value - ref.value) <= tr.error_estimate + ref.error_estimate


# ---------------------------------------------------------------------------
# scans

def test_scan_degenerate_grid():
    r = zeta.scan_max(0, 40.0, 40.0, 1.0, 64)
    assert r.grid_size == 1
    assert r.t_star == 40.0
    single = abs(zeta.zeta_derivative_truncated(0, 1.0, 40.0, 64).value)
    assert r.value_modulus == pytest.approx(single, rel=1e-12)


def test_scan_refinement_monotone():
    coarse = zeta.scan_max(1, 120.0, 140.0, 0.5, 256)
    fine = zeta.scan_max(1, 120.0, 140.0, 0.25, 256)
    assert fine.value_modulus >= coarse.value_modulus - 1e-12
    assert fine.grid_size == 2 * coarse.grid_size - 1


def test_scan_max_exceeds_mean():
    r = zeta.scan_max(1, 10000.0, 10020.0, 0.05, 10**4)
    ts = [10000.0 + 0.05 * i for i in range(r.grid_size)]
    mods = [abs(zeta.zeta_derivative_truncated(1, 1.0, t, 10**4).value) for t in ts]
    assert r.value_modulus > np.mean(mods)
    assert r.value_modulus == pytest.approx(max(mods), rel=1e-10)
    assert r.in_paper_regime  # window [1e4, 1.002e4] inside [N, 6.28 N]


def test_scan_matches_pointwise_evaluator():
    r = zeta.scan_max(2, 55.0, 60.0, 0.5, 128)
    direct = abs(zeta.zeta_derivative_truncated(2, 1.0, r.t_star, 128).value)
    assert r.value_modulus == pytest.approx(direct, rel=1e-10)


def test_scan_budget_guard():
    with pytest.raises(ResourceLimitError):
        zeta.scan_max(1, 1e4, 2e4, 0.05, 10**6)


def test_scan_validation():
    with pytest.raises(ValueError):
        zeta.scan_max(0, -1.0, 10.0, 0.5, 64)
    with pytest.raises(ValueError):
        zeta.scan_max(0, 10.0, 5.0, 0.5, 64)
    with pytest.raises(ValueError):
        zeta.scan_max(0, 5.0, 10.0, 0.0, 64)


def test_scan_csv_stream():
    text = zeta.scan_to_csv(0, 30.0, 31.0, 0.5, 64)
    lines = text.strip().split("\n")
    assert lines[0] == "t,modulus"
    assert len(lines) == 4
