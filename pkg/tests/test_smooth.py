import math
import random

import numpy as np
import pytest

from zetamax import smooth
from zetamax.errors import ResourceLimitError
from zetamax.smooth import Character, Trivial, Unimodular


def _largest_prime_factor_oracle(n: int) -> int:
    # trial division, independent of the sieve under test
    if n == 1:
        return 1
    r = 1
    d = 2
    while d * d <= n:
        while n % d == 0:
            r = d
            n //= d
        d += 1
    return max(r, n) if n > 1 else r


def test_spf_sieve_small():
    s = smooth.spf_sieve(10)
    assert list(s[1:11]) == [1, 2, 3, 2, 5, 3, 7, 2, 3, 5]


def test_spf_sieve_against_factorization_oracle():
    s = smooth.spf_sieve(3000)
    rng = random.Random(7)
    for n in [1, 2, 3, 4] + [rng.randint(2, 3000) for _ in range(200)]:
        assert int(s[n]) == _largest_prime_factor_oracle(n)


def test_spf_prime_and_prime_power_identities():
    s = smooth.spf_sieve(1000)
    for p in (2, 3, 5, 7, 11, 13, 997):
        assert int(s[p]) == p
    for k in range(1, 10):
        assert int(s[2**k]) == 2


def test_spf_limit_guard():
    with pytest.raises(ResourceLimitError):
        smooth.spf_sieve(1)
    with pytest.raises(ResourceLimitError):
        smooth.spf_sieve(10**9)


def test_psi_count_examples():
    assert smooth.psi_count(10, 2).exact_count == 4  # 1, 2, 4, 8
    assert smooth.psi_count(100, 1000).exact_count == 100  # y >= x
    assert smooth.psi_count(100.7, 1000).exact_count == 100
    r = smooth.psi_count(10**6, 100)
    spf = smooth.spf_sieve(10**6)
    assert r.exact_count == 1 + int(np.count_nonzero(spf[2:] <= 100))


def test_psi_count_u_and_approx_fields():
    r = smooth.psi_count(1000.0, 31.6227766)
    assert r.u == pytest.approx(math.log(1000.0) / math.log(31.6227766), rel=1e-12)
    assert r.dickman_approx > 0
    assert r.relative_error == pytest.approx(r.exact_count / r.dickman_approx - 1, rel=1e-12)


def test_psi_count_validation():
    with pytest.raises(ValueError):
        smooth.psi_count(0.5, 10)
    with pytest.raises(ValueError):
        smooth.psi_count(10, 1.5)


def test_enumeration_matches_sieve_everywhere():
    limit = 20000
    spf = smooth.spf_sieve(limit)
    for y in (2, 3, 5, 10, 30, 64):
        enum = sorted(smooth.iter_smooth(limit, y))
        sieved = [1] + [n for n in range(2, limit + 1) if spf[n] <= y]
        assert enum == sieved


def test_enumeration_budget():
    with pytest.raises(ResourceLimitError):
        list(smooth.iter_smooth(10**6, 70, node_budget=50))


def test_twist_validation(chi5):
    with pytest.raises(ValueError):
        Unimodular(math.inf)
    with pytest.raises(ValueError):
        Character(chi5, 4)  # rows are 0..q-2
    Character(chi5, 0)  # principal row is a valid twist (coprime filter)


def test_trivial_twist_equals_count():
    v = smooth.smooth_twisted_sum(5000, 13, Trivial())
    assert v.imag == 0.0
    assert v.real == smooth.psi_count(5000, 13).exact_count


def test_unimodular_zero_t_equals_trivial():
    a = smooth.smooth_twisted_sum(3000, 7, Unimodular(0.0))
    b = smooth.smooth_twisted_sum(3000, 7, Trivial())
    assert a == b


def test_character_full_period_vanishes(chi5):
    v = smooth.smooth_twisted_sum(5, 10, Character(chi5, 1))
    assert abs(v) < 1e-12
    # direct summation oracle from the character table itself
    direct = sum(chi5.chi_value(1, a) for a in range(1, 6))
    assert abs(direct) < 1e-12


def test_full_twisted_sum_trivial_and_unimodular():
    assert smooth.full_twisted_sum(10.9, Trivial()) == 10 + 0j
    assert smooth.full_twisted_sum(1.0, Unimodular(5.0)) == 1 + 0j


def test_full_twisted_sum_character_periods(chi7):
    for j in range(1, 6):
        assert abs(smooth.full_twisted_sum(7, Character(chi7, j))) < 1e-12
    # principal character counts coprime residues
    v = smooth.full_twisted_sum(14, Character(chi7, 0))
    assert v.real == pytest.approx(12.0, abs=1e-9)


def test_full_unimodular_against_direct_fsum():
    t = 3.75
    x = 4096
    direct_re = math.fsum(math.cos(t * math.log(n)) for n in range(1, x + 1))
    direct_im = math.fsum(-math.sin(t * math.log(n)) for n in range(1, x + 1))
    v = smooth.full_twisted_sum(x, Unimodular(t))
    assert v.real == pytest.approx(direct_re, abs=1e-9)
    assert v.imag == pytest.approx(direct_im, abs=1e-9)


def test_triangle_identity_three_way(chi5):
    x = 10**5
    for twist in (Trivial(), Unimodular(2.5), Character(chi5, 1)):
        full = smooth.full_twisted_sum(x, twist)
        sm = smooth.smooth_twisted_sum(x, 13, twist)
        non = smooth.nonsmooth_twisted_sum(x, 13, twist)
        assert abs(full - (sm + non)) < 1e-8


def test_modulus_bounded_by_count(chi7):
    x, y = 20000, 50
    count = smooth.psi_count(x, y).exact_count
    for twist in (Unimodular(9.25), Character(chi7, 2)):
        assert abs(smooth.smooth_twisted_sum(x, y, twist)) <= count + 1e-9


def test_profile_trivial_identity():
    x = 5000
    recs = smooth.approximation_error_profile(x, Trivial(), [2, 10, 100])
    for r in recs:
        expected = x - smooth.psi_count(x, r.y).exact_count
        assert r.discrepancy == pytest.approx(expected, abs=1e-9)
        assert r.ratio == pytest.approx(expected / r.psi_xy, rel=1e-12)


def test_profile_y_at_least_x_gives_zero():
    recs = smooth.approximation_error_profile(100, Unimodular(4.2), [200])
    assert recs[0].discrepancy == 0.0


def test_profile_character_mod_10007():
    from zetamax import dirichlet

    t = dirichlet.shared_character_table(10007)
    recs = smooth.approximation_error_profile(10007, Character(t, 1), [500])
    assert math.isfinite(recs[0].ratio)
    # internal identity: |full - smooth| equals |sum over non-smooth n|
    non = smooth.nonsmooth_twisted_sum(10007, 500, Character(t, 1))
    assert recs[0].discrepancy == pytest.approx(abs(non), abs=1e-8)


def test_profile_validation():
    with pytest.raises(ValueError):
        smooth.approximation_error_profile(100, Trivial(), [1.5])


def test_profile_csv_shape():
    recs = smooth.approximation_error_profile(100, Trivial(), [2, 4])
    text = smooth.profile_to_csv(recs)
    lines = text.strip().split("\n")
    assert lines[0] == "y,discrepancy,psi_xy,ratio"
    assert len(lines) == 3
