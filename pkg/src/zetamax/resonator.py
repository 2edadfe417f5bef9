"""Divisor-set resonator and its resonance ratio.

The resonator support is the divisor set M of P(y, b) = prod_{p <= y}
p^(b-1).  With r the characteristic function of M, the resonance ratio

    (1/|M|) sum_{n in M, k|n} (log k)^ell / k
        = sum_{k in M} (log k)^ell / k * prod_i (b - alpha_i)/b,

where k = prod p_i^alpha_i.  Two evaluators are provided: direct divisor
enumeration (the oracle, feasible while b^w is small) and a factorized
derivative method that reaches the regime where |M| = b^w is astronomical:
the ratio equals (-1)^ell G^(ell)(1) for G(s) = prod_p g_p(s),
g_p(s) = sum_{alpha < b} (1 - alpha/b) p^(-alpha s), computed by
accumulating the cumulants c_j = sum_p (log g_p)^(j)(1) per prime and
reconstructing the derivative with the complete Bell polynomial.

Parameters derived from a scale T use y = log T / (3 (log log T)^3) and
b = floor((log log T)^3); such T exceed floating-point range long before
y >= 2, so the derivation also accepts log T directly and all bookkeeping
works on the (log T, log_2 T, log_3 T) scale.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import mpmath

from .constants import EXP_GAMMA
from .dickman import _GL_NODES, _GL_WEIGHTS, DickmanTable, rho
from .errors import OutOfRegimeError, PrecisionUnreachableError, ResourceLimitError
from .moments import complete_bell, y_exact
from .primes import sieve_primes

import numpy as np
from numpy.polynomial import chebyshev as C

_DIRECT_BUDGET = 10**7
_FACTORIZED_BUDGET = 10**7  # w * b guard
_MAX_ELL_FACTORIZED = 60


@dataclass(frozen=True)
class ResonatorSpec:
    """Primes p <= y with multiplicity cap b; the divisor set M of
    prod p^(b-1) is implicit.  source_log_t records log T when the spec was
    derived from a scale T."""

    y: float
    b: int
    primes: tuple
    w: int
    source_log_t: float | None = None

    @property
    def log_divisor_count(self) -> float:
        return self.w * math.log(self.b)


def make_spec(y: float, b: int, *, source_log_t: float | None = None) -> ResonatorSpec:
    if y < 2:
        raise ValueError(f"y must be >= 2, got {y}")
    if b < 2:
        raise ValueError(f"b must be >= 2, got {b}")
    primes = tuple(sieve_primes(int(y)))
    return ResonatorSpec(y=float(y), b=int(b), primes=primes, w=len(primes),
                         source_log_t=source_log_t)


def spec_from_T(T: float | None = None, *, log_T: float | None = None) -> ResonatorSpec:
    """Spec with y = log T/(3 (log_2 T)^3), b = [(log_2 T)^3].

    Pass log_T for scales beyond floating-point range.  The derivation only
    enters its regime (y >= 2, b >= 2) around log T ~ 3.4e3, i.e. for no
    representable T; float T therefore always raises OutOfRegimeError, which
    is itself informative.  The invariant P(y, b) <= sqrt(T), i.e.
    (b-1) * sum_{p<=y} log p <= (log T)/2, is checked on every returned spec.
    """
    if (T is None) == (log_T is None):
        raise ValueError("pass exactly one of T, log_T")
    if T is not None:
        if not T > 1:
            raise OutOfRegimeError(f"T={T} too small")
        log_T = math.log(T)
    if log_T <= math.e:
        raise OutOfRegimeError(f"log T = {log_T}: iterated logs undefined")
    l2 = math.log(log_T)
    y = log_T / (3.0 * l2**3)
    b = math.floor(l2**3)
    if y < 2 or b < 2:
        raise OutOfRegimeError(
            f"derived y={y:.6g}, b={b}: below the y >= 2, b >= 2 regime "
            f"(needs log T >~ 3.4e3)"
        )
    spec = make_spec(y, b, source_log_t=log_T)
    theta = math.fsum(math.log(p) for p in spec.primes)
    if (b - 1) * theta > log_T / 2.0:
        raise OutOfRegimeError(
            f"P(y,b) > sqrt(T): (b-1)*theta(y) = {(b - 1) * theta:.6g} > log T/2"
        )
    return spec


# ---------------------------------------------------------------------------
# direct enumeration (oracle)

def _divisor_terms(spec: ResonatorSpec) -> list:
    """(log k, weight) for every divisor k of P(y, b); weight =
    prod (b - alpha_i)/b = the exact mean multiplicity (1/|M|) #{n in M: k|n}."""
    primes, b = spec.primes, spec.b
    if spec.w * math.log(b) > math.log(_DIRECT_BUDGET):
        raise ResourceLimitError(
            f"b^w = {b}^{spec.w} exceeds direct enumeration budget {_DIRECT_BUDGET}"
        )
    terms = [(0.0, 1.0)]

    def rec(i: int, logk: float, wt: float):
        for j in range(i, len(primes)):
            lp = math.log(primes[j])
            lk = logk
            for alpha in range(1, b):
                lk += lp
                w_here = wt * (b - alpha) / b
                terms.append((lk, w_here))
                rec(j + 1, lk, w_here)

    rec(0, 0.0, 1.0)
    return terms


def ratio_direct(spec: ResonatorSpec, ell: int) -> float:
    """Resonance ratio by full enumeration of the divisor set."""
    if ell < 0:
        raise ValueError("ell must be >= 0")
    terms = _divisor_terms(spec)
    if ell == 0:
        return math.fsum(w * math.exp(-lk) for lk, w in terms)
    return math.fsum(w * lk**ell * math.exp(-lk) for lk, w in terms)


def divisors_up_to(spec: ResonatorSpec, bound: float) -> list[int]:
    """Sorted divisors of P(y, b) that are <= bound."""
    primes, b = spec.primes, spec.b
    out = [1]

    def rec(i: int, k: int):
        for j in range(i, len(primes)):
            p = primes[j]
            kk = k
            for _ in range(b - 1):
                kk *= p
                if kk > bound:
                    break
                out.append(kk)
                rec(j + 1, kk)
                if len(out) > _DIRECT_BUDGET:
                    raise ResourceLimitError("divisor enumeration budget exceeded")

    rec(0, 1)
    return sorted(out)


# ---------------------------------------------------------------------------
# factorized derivative method

def _log_derivatives_from_plain(g: list) -> list:
    """Given [g(1), g'(1), .., g^(m)(1)], return [h'(1), .., h^(m)(1)] for
    h = log g, via g^(m) = sum_{i} C(m-1, i) g^(m-1-i) h^(i+1)."""
    m = len(g) - 1
    h = [None] * (m + 1)  # h[j] = h^(j)(1), h[0] unused
    for order in range(1, m + 1):
        acc = g[order]
        for i in range(0, order - 1):
            acc -= math.comb(order - 1, i) * g[order - 1 - i] * h[i + 1]
        h[order] = acc / g[0]
    return h[1:]


def _ratio_factorized_at(spec: ResonatorSpec, ell: int) -> mpmath.mpf:
    primes, b = spec.primes, spec.b
    g0_log = mpmath.mpf(0)
    cum = [mpmath.mpf(0)] * ell  # c_j = sum_p (log g_p)^(j)(1), j = 1..ell
    eps = mpmath.mpf(2) ** (-mpmath.mp.prec - 20)
    for p in primes:
        lp = mpmath.log(p)
        inv_p = mpmath.mpf(1) / p
        g = [mpmath.mpf(0)] * (ell + 1)
        pw = mpmath.mpf(1)  # p^(-alpha)
        # remaining terms carry a factor up to (alpha log p)^ell, so the
        # cutoff must absorb it before comparing against working precision
        growth = max(mpmath.mpf(1), (b * lp) ** ell)
        for alpha in range(0, b):
            coef = (mpmath.mpf(b - alpha) / b) * pw
            apow = mpmath.mpf(1)  # (alpha * log p)^j
            g[0] += coef
            for j in range(1, ell + 1):
                apow *= alpha * lp
                # g_p^(j)(1) = sum_alpha coef * (-alpha log p)^j
                g[j] += coef * apow if j % 2 == 0 else -coef * apow
            pw *= inv_p
            if alpha > ell and pw * growth < eps:
                break
        g0_log += mpmath.log(g[0])
        if ell:
            h = _log_derivatives_from_plain(g)
            for j in range(ell):
                cum[j] += h[j]
    g_total = mpmath.exp(g0_log)
    if ell == 0:
        return g_total
    bell = complete_bell(ell, cum)
    return (-1) ** ell * g_total * bell


def ratio_factorized(spec: ResonatorSpec, ell: int, precision_bits: int = 256) -> float:
    """Resonance ratio as (-1)^ell G^(ell)(1) via per-prime cumulants and
    Bell reconstruction; identical value to ratio_direct but feasible for
    astronomically large divisor sets.

    The result is recomputed at half precision; disagreement beyond
    2^(-precision_bits/4) relative raises PrecisionUnreachableError.
    """
    if ell < 0:
        raise ValueError("ell must be >= 0")
    if ell > _MAX_ELL_FACTORIZED:
        raise ValueError(f"ell > {_MAX_ELL_FACTORIZED} not supported")
    if spec.w * spec.b > _FACTORIZED_BUDGET:
        raise ResourceLimitError(f"w*b = {spec.w * spec.b} exceeds budget")
    if precision_bits < 64:
        raise ValueError("precision_bits must be >= 64")
    with mpmath.workprec(precision_bits):
        full = _ratio_factorized_at(spec, ell)
    with mpmath.workprec(precision_bits // 2):
        half = _ratio_factorized_at(spec, ell)
        rel = abs(full - half) / (abs(full) + mpmath.mpf(1e-300))
        if rel > mpmath.mpf(2) ** (-(precision_bits // 4)):
            raise PrecisionUnreachableError(
                f"half-precision check fails: relative drift {float(rel):.3e}"
            )
    return float(full)


# ---------------------------------------------------------------------------
# sums of (log k)^ell / k

_STIELTJES_Y_CUTOFF = 10**7


def log_power_sum(ell: int, y: float | None = None, *, log_y: float | None = None) -> float:
    """sum_{k <= y} (log k)^ell / k.

    Exact for y within direct-summation range; for larger y the partial-
    summation asymptotic (log y)^(ell+1)/(ell+1) + gamma_ell with the
    Stieltjes constant gamma_ell (error O((log y)^ell / y), negligible
    there).
    """
    if ell < 0:
        raise ValueError("ell must be >= 0")
    if (y is None) == (log_y is None):
        raise ValueError("pass exactly one of y, log_y")
    if y is not None:
        if y < 1:
            return 0.0
        if y <= _STIELTJES_Y_CUTOFF:
            n = math.floor(y)
            if ell == 0:
                return math.fsum(1.0 / k for k in range(1, n + 1))
            return math.fsum(math.log(k) ** ell / k for k in range(2, n + 1))
        log_y = math.log(y)
    gamma_ell = float(mpmath.stieltjes(ell))
    return log_y ** (ell + 1) / (ell + 1) + gamma_ell


# ---------------------------------------------------------------------------
# proof bookkeeping on the log scale

@dataclass(frozen=True)
class BookkeepingResult:
    ell: int
    log_T: float
    log2_T: float
    log3_T: float
    y: float
    b: int
    u_R: float
    S1: float
    S2: float
    K2_bound: float
    predicted: float
    # bookkeeping of the low-multiplicity restriction: divisors whose total
    # exponent stays below the cap keep mean multiplicity >= the floor
    k1_exponent_cap: float
    k1_inner_floor: float


def _integral_u_power_rho(table: DickmanTable, ell: int, u_hi: float) -> float:
    """int_1^{u_hi} u^ell rho(u) du over the table (tail beyond the table is
    certifiably below the working tolerance)."""
    hi = min(u_hi, table.max_u)
    pieces = []
    for k, coeffs in enumerate(table.intervals):
        if k + 1 <= 1.0 or k >= hi:
            continue
        a = max(float(k), 1.0)
        bnd = min(float(k + 1), hi)
        mid, half = 0.5 * (a + bnd), 0.5 * (bnd - a)
        us = mid + half * _GL_NODES
        xs = 2.0 * (us - k) - 1.0
        vals = C.chebval(xs, coeffs) * us**ell
        pieces.append(half * float(np.dot(_GL_WEIGHTS, vals)))
    return math.fsum(pieces)


def proof_bookkeeping(
    ell: int,
    table: DickmanTable,
    T: float | None = None,
    *,
    log_T: float | None = None,
) -> BookkeepingResult:
    """The S1/S2/K2 decomposition of the resonance-ratio lower bound,
    evaluated on the logarithmic scale.

    S1 = sum_{k <= y} (log k)^ell / k.  S2 is the partial-summation integral
    with the smooth-count replaced by its Dickman model x*rho(log x/log y):

        S2 = (log R)^ell rho(u_R) - (log y)^ell
             - ell (log y)^ell     int_1^{u_R} u^(ell-1) rho du
             + (log y)^(ell+1)     int_1^{u_R} u^ell     rho du,

    with R = exp(log_2 T * log_3 T), u_R = log R / log y.  K2_bound is the
    Rankin-trick estimate for the discarded high-multiplicity divisors with
    the Mertens constant made explicit:

        K2_bound = e^(2 gamma) (log_2 T)^(ell-1) (log_3 T)^(ell+1),

    and predicted = Y_ell (log_2 T)^(ell+1) is the target the two sums chase.
    """
    if ell < 0:
        raise ValueError("ell must be >= 0")
    if (T is None) == (log_T is None):
        raise ValueError("pass exactly one of T, log_T")
    if T is not None:
        if not T > 1:
            raise OutOfRegimeError(f"T={T} too small")
        log_T = math.log(T)
    if log_T < math.exp(math.e):
        raise OutOfRegimeError(f"need log T >= e^e, got {log_T}")
    l2 = math.log(log_T)
    l3 = math.log(l2)
    y = log_T / (3.0 * l2**3)
    if y <= 1.0:
        raise OutOfRegimeError(
            f"derived y = {y:.6g} <= 1 (log T = {log_T:.6g}; the formulas need "
            f"log T >~ 1e3)"
        )
    b = math.floor(l2**3)
    log_y = math.log(y)
    log_R = l2 * l3
    u_R = log_R / log_y

    s1 = log_power_sum(ell, y)
    i_ell = _integral_u_power_rho(table, ell, u_R)
    rho_uR = rho(u_R, table) if u_R <= table.max_u else 0.0
    s2 = log_R**ell * rho_uR - log_y**ell + log_y ** (ell + 1) * i_ell
    if ell > 0:
        s2 -= ell * log_y**ell * _integral_u_power_rho(table, ell - 1, u_R)

    k2 = EXP_GAMMA**2 * l2 ** (ell - 1) * l3 ** (ell + 1)
    predicted = y_exact(ell).float_value * l2 ** (ell + 1)
    return BookkeepingResult(
        ell=ell, log_T=log_T, log2_T=l2, log3_T=l3, y=y, b=b, u_R=u_R,
        S1=s1, S2=s2, K2_bound=k2, predicted=predicted,
        k1_exponent_cap=l2**3 / l3, k1_inner_floor=1.0 - 2.0 / l3,
    )
