"""Truncated Dirichlet-series evaluation of zeta derivatives on and right of
the 1-line, an independent Euler-Maclaurin reference, and window scans.

Sign convention: both evaluators return the signed quantity

    value  =  (-1)^ell zeta^(ell)(sigma + i t)  ~  sum_{n<=N} (log n)^ell n^(-sigma-it),

i.e. the plain truncated sum is the value itself; `zeta_derivative` unwraps
to zeta^(ell).  The truncation error envelope mirrors the unconditional
approximation (ell!/eps^ell) N^(-sigma+eps); it is a statement about the
window t in [N, 6.28 N] and eps is pinned to 1/log log N, which balances
ell!/eps^ell against N^eps for ell <= 6 at reachable sizes.

The reference evaluator applies Euler-Maclaurin to zeta and differentiates
every term analytically: n^(-s) contributes (-log n)^ell n^(-s); the
boundary term M^(1-s)/(s-1), the M^(-s)/2 term, and the Bernoulli
corrections B_2j/(2j)! * s(s+1)..(s+2j-2) * M^(1-2j-s) are differentiated
by the Leibniz rule, with derivatives of the Pochhammer polynomial obtained
from elementary symmetric functions of 1/(s+i) (stable for large |s|,
unlike expanded polynomial coefficients).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .constants import LEMMA_WINDOW_FACTOR
from .errors import PrecisionUnreachableError, ResourceLimitError
from .sums import ComplexNeumaierSum

_CHUNK = 1 << 19
_PHASE_EXTENDED_THRESHOLD = 1e8
_EM_BERNOULLI_TERMS = 12
_DEFAULT_SCAN_BUDGET = 2 * 10**9

_MIN_SIGMA = 0.6

# 2*pi to longdouble precision; reducing phases mod the float64 constant
# would leak (wrap count) * 2.4e-16 of phase error.
_TWO_PI_LD = np.longdouble("6.28318530717958647692528676655900576839433879875")


@dataclass(frozen=True)
class EvalResult:
    value: complex      # (-1)^ell zeta^(ell)(sigma + i t), see module docstring
    sigma: float
    t: float
    ell: int
    truncation: int     # N (truncated) or the Euler-Maclaurin cutoff M
    error_estimate: float


@dataclass(frozen=True)
class ScanResult:
    t_star: float
    value_modulus: float
    grid_size: int
    ell: int
    N: int
    t_lo: float
    t_hi: float
    step: float
    in_paper_regime: bool


def zeta_derivative(result: EvalResult) -> complex:
    """Unwrap the sign convention: zeta^(ell) = (-1)^ell * value."""
    return (-1) ** result.ell * result.value


def in_lemma_window(t: float, N: int) -> bool:
    return N <= abs(t) <= LEMMA_WINDOW_FACTOR * N


def _epsilon_for(N: int) -> float:
    return 1.0 / math.log(math.log(max(N, 16)))


def truncation_error_estimate(ell: int, sigma: float, N: int) -> float:
    eps = _epsilon_for(N)
    return math.factorial(ell) / eps**ell * N ** (-sigma + eps)


def _phases(ns: np.ndarray, t: float) -> np.ndarray:
    """t * log n, reduced in extended precision when the phase is huge."""
    if t == 0.0:
        return np.zeros(ns.shape)
    logs = np.log(ns.astype(np.float64))
    if abs(t) * float(logs[-1]) > _PHASE_EXTENDED_THRESHOLD:
        w = (np.longdouble(t) * np.log(ns.astype(np.longdouble))) % _TWO_PI_LD
        return w.astype(np.float64)
    return t * logs


def zeta_derivative_truncated(ell: int, sigma: float, t: float, N: int) -> EvalResult:
    """sum_{n <= N} (log n)^ell / n^(sigma + i t), compensated and chunked.

    The attached error_estimate (ell!/eps^ell) N^(-sigma+eps) is meaningful
    inside the window t in [N, 6.28 N]; outside it the sum is exploratory.
    """
    if ell < 0:
        raise ValueError("ell must be >= 0")
    if sigma < _MIN_SIGMA:
        raise ValueError(f"sigma must be >= {_MIN_SIGMA}, got {sigma}")
    if not isinstance(N, (int, np.integer)) or N < 2:
        raise ValueError(f"N must be an integer >= 2, got {N!r}")
    if sigma == 1.0 and t == 0.0:
        raise ValueError("(sigma, t) = (1, 0) is the pole")

    acc = ComplexNeumaierSum()
    acc.add(1.0 + 0j if ell == 0 else 0j)  # n = 1 term
    for lo in range(2, N + 1, _CHUNK):
        hi = min(lo + _CHUNK, N + 1)
        ns = np.arange(lo, hi, dtype=np.int64)
        logs = np.log(ns.astype(np.float64))
        coeff = logs**ell * np.exp(-sigma * logs) if ell else np.exp(-sigma * logs)
        if t == 0.0:
            acc.add(complex(float(np.sum(coeff)), 0.0))
        else:
            w = _phases(ns, t)
            acc.add(complex(np.sum(coeff * np.exp(-1j * w))))
    return EvalResult(
        value=acc.value, sigma=float(sigma), t=float(t), ell=int(ell),
        truncation=int(N), error_estimate=truncation_error_estimate(ell, sigma, N),
    )


# ---------------------------------------------------------------------------
# Euler-Maclaurin reference

def _bernoulli_fractions(n_pairs: int) -> list[Fraction]:
    """B_2, B_4, .., B_{2 n_pairs} exactly (Akiyama-Tanigawa)."""
    top = 2 * n_pairs
    a = [Fraction(0)] * (top + 1)
    out = []
    for m in range(top + 1):
        a[m] = Fraction(1, m + 1)
        for j in range(m, 0, -1):
            a[j - 1] = j * (a[j - 1] - a[j])
        if m >= 2 and m % 2 == 0:
            out.append(a[0])
    return out


_B2J = _bernoulli_fractions(_EM_BERNOULLI_TERMS + 1)


def _pochhammer_derivatives(s: complex, degree: int, max_order: int) -> list[complex]:
    """[P(s), P'(s), .., P^(max_order)(s)] for P(s) = prod_{i=0}^{degree-1} (s+i).

    P^(m) = m! e_m(1/(s), .., 1/(s+degree-1)) P(s); the e_m come from power
    sums via Newton's identities.  Stable for large |s| where expanded
    coefficients would cancel catastrophically.
    """
    roots_inv = [1.0 / (s + i) for i in range(degree)]
    p0 = 1.0 + 0j
    for i in range(degree):
        p0 *= s + i
    power_sums = [sum(r**k for r in roots_inv) for k in range(1, max_order + 1)]
    e = [1.0 + 0j]
    for m in range(1, max_order + 1):
        if m > degree:
            e.append(0j)
            continue
        acc = 0j
        for r in range(1, m + 1):
            acc += (-1) ** (r - 1) * e[m - r] * power_sums[r - 1]
        e.append(acc / m)
    return [math.factorial(m) * e[m] * p0 for m in range(max_order + 1)]


def _em_zeta_derivative(ell: int, s: complex, M: int) -> tuple[complex, float, float]:
    """(zeta^(ell)(s) by Euler-Maclaurin at cutoff M, remainder band,
    magnitude sum for the rounding floor)."""
    sigma, t = s.real, s.imag
    L = math.log(M)

    ns = np.arange(2, M, dtype=np.int64)
    logs = np.log(ns.astype(np.longdouble))
    coeff = (logs**ell if ell else np.ones_like(logs)) * np.exp(-sigma * logs)
    if t == 0.0:
        main = complex(float(np.sum(coeff.astype(np.float64))), 0.0)
    else:
        w = (np.longdouble(t) * logs) % _TWO_PI_LD
        terms = coeff * np.exp(np.longdouble(-1.0) * 1j * w)
        main = complex(np.sum(terms))
    if ell % 2 == 1:
        main = -main  # (-log n)^ell
    if ell == 0:
        main += 1.0  # n = 1
    mag = float(np.sum(np.abs(coeff).astype(np.float64))) + 1.0

    m_pow = M ** complex(-s.real, -s.imag)  # M^{-s}
    total = main + (-L) ** ell * m_pow / 2.0

    # d^ell [ M^{1-s}/(s-1) ]
    m1_pow = M * m_pow  # M^{1-s}
    boundary = 0j
    for i in range(ell + 1):
        boundary += (
            math.comb(ell, i)
            * (-L) ** i
            * (-1.0) ** (ell - i)
            * math.factorial(ell - i)
            * (s - 1.0) ** (-(ell - i) - 1)
        )
    total += boundary * m1_pow
    mag += abs(boundary * m1_pow) + abs(m_pow) * L**ell / 2.0

    def bern_term(jj: int) -> complex:
        c = float(_B2J[jj - 1]) / math.factorial(2 * jj)
        pd = _pochhammer_derivatives(s, 2 * jj - 1, min(ell, 2 * jj - 1))
        leib = 0j
        for i in range(min(ell, 2 * jj - 1) + 1):
            leib += math.comb(ell, i) * pd[i] * (-L) ** (ell - i)
        return c * leib * m_pow * M ** (1 - 2 * jj)

    for jj in range(1, _EM_BERNOULLI_TERMS + 1):
        term = bern_term(jj)
        total += term
        mag += abs(term)

    nxt = bern_term(_EM_BERNOULLI_TERMS + 1)
    band = 2.0 * abs(nxt) * (abs(s) + 2 * _EM_BERNOULLI_TERMS + 3) / (
        sigma + 2 * _EM_BERNOULLI_TERMS + 1
    )
    return total, band, mag


def zeta_derivative_reference(ell: int, sigma: float, t: float, tol: float = 1e-10) -> EvalResult:
    """Independent Euler-Maclaurin oracle for (-1)^ell zeta^(ell)(sigma+it).

    Starts at cutoff M = max(2|s|, 50) and doubles M until the remainder
    band plus the rounding floor is below tol; raises
    PrecisionUnreachableError if that never happens.
    """
    if not 0.6 <= sigma <= 4.0:
        raise ValueError(f"sigma must lie in [0.6, 4], got {sigma}")
    if abs(t) > 1e8:
        raise ValueError(f"|t| must be <= 1e8, got {t}")
    if not 0 <= ell <= 6:
        raise ValueError(f"ell must lie in 0..6, got {ell}")
    if sigma == 1.0 and t == 0.0:
        raise ValueError("(sigma, t) = (1, 0) is the pole")
    if not tol > 0:
        raise ValueError("tol must be positive")

    s = complex(sigma, t)
    M = max(int(math.ceil(2 * abs(s))), 50)
    for _ in range(7):
        value, band, mag = _em_zeta_derivative(ell, s, M)
        # longdouble phases: ~1e-19 relative argument error
        rounding = 4e-16 * mag + abs(t) * math.log(M) * 2e-19 * mag
        err = band + rounding
        if err <= tol:
            signed = (-1) ** ell * value
            return EvalResult(value=signed, sigma=sigma, t=t, ell=ell,
                              truncation=M, error_estimate=err)
        M *= 2
    raise PrecisionUnreachableError(
        f"Euler-Maclaurin cannot reach tol={tol} at (ell={ell}, sigma={sigma}, t={t})"
    )


# ---------------------------------------------------------------------------
# window scans

def scan_max(
    ell: int,
    t_lo: float,
    t_hi: float,
    step: float,
    N: int,
    *,
    budget: int = _DEFAULT_SCAN_BUDGET,
) -> ScanResult:
    """Grid argmax of |truncated value| over t = t_lo, t_lo+step, ..;
    deterministic tie-break toward the smallest t.

    Work is grid_size * N term evaluations; exceeding `budget` raises
    ResourceLimitError before any work is done.
    """
    if not 0 < t_lo <= t_hi:
        raise ValueError(f"need 0 < t_lo <= t_hi, got [{t_lo}, {t_hi}]")
    if not step > 0:
        raise ValueError("step must be positive")
    if ell < 0:
        raise ValueError("ell must be >= 0")
    if N < 2:
        raise ValueError("N must be >= 2")

    grid_size = int(math.floor((t_hi - t_lo) / step + 1e-9)) + 1
    if grid_size * N > budget:
        raise ResourceLimitError(
            f"grid_size*N = {grid_size}*{N} exceeds budget {budget}"
        )

    ns = np.arange(2, N + 1, dtype=np.int64)
    logs = np.log(ns.astype(np.float64))
    coeff = logs**ell / ns if ell else 1.0 / ns  # sigma = 1

    best_mod = -1.0
    best_t = t_lo
    t_block = max(1, min(grid_size, int(2**24 // max(len(ns), 1)) + 1))
    base = 1.0 if ell == 0 else 0.0  # n = 1 term
    for lo in range(0, grid_size, t_block):
        hi = min(lo + t_block, grid_size)
        ts = t_lo + step * np.arange(lo, hi)
        phases = np.outer(ts, logs)
        vals = (np.exp(-1j * phases) * coeff).sum(axis=1) + base
        mods = np.abs(vals)
        i = int(np.argmax(mods))
        if mods[i] > best_mod:
            best_mod = float(mods[i])
            best_t = float(ts[i])
    return ScanResult(
        t_star=best_t, value_modulus=best_mod, grid_size=grid_size,
        ell=ell, N=int(N), t_lo=float(t_lo), t_hi=float(t_hi), step=float(step),
        in_paper_regime=bool(t_hi <= LEMMA_WINDOW_FACTOR * N and N <= t_lo),
    )


def scan_to_csv(ell: int, t_lo: float, t_hi: float, step: float, N: int,
                *, budget: int = _DEFAULT_SCAN_BUDGET) -> str:
    """CSV stream `t,modulus` over the scan grid (same evaluation path)."""
    if not 0 < t_lo <= t_hi:
        raise ValueError(f"need 0 < t_lo <= t_hi, got [{t_lo}, {t_hi}]")
    if not step > 0:
        raise ValueError("step must be positive")
    grid_size = int(math.floor((t_hi - t_lo) / step + 1e-9)) + 1
    if grid_size * N > budget:
        raise ResourceLimitError(f"grid_size*N exceeds budget {budget}")
    lines = ["t,modulus"]
    for i in range(grid_size):
        t = t_lo + step * i
        r = zeta_derivative_truncated(ell, 1.0, t, N)
        lines.append(f"{t!r},{abs(r.value)!r}")
    return "\n".join(lines) + "\n"
