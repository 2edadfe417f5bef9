"""Dirichlet characters mod a prime q, truncated L-derivative sums at s = 1,
maxima over the character family, and the resonance quotient V2/V1.

Characters are represented through a discrete-log table over the smallest
primitive root: chi_j(a) = e^(2 pi i j dlog[a] / (q-1)).  All character
arithmetic stays in integer exponents mod q-1 until the final conversion to
a complex value, so orthogonality holds exactly (no accumulated phase
drift).  Only prime moduli are accepted: for moduli divisible by many small
primes the truncated sums degenerate (chi kills every small-prime multiple)
and the family maxima behave differently, so composites are rejected loudly.

Family-wide evaluation of sum_k chi_j(k) c_k for all j at once groups the
real coefficients c_k by discrete-log class and applies one length-(q-1)
FFT, turning the naive q*N work into N + q log q.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .errors import PrincipalCharacterError, ResourceLimitError
from .primes import is_prime, prime_factors

_MAX_Q = 10**7
_MAX_N = 10**8
_QUOTIENT_MAX_Q = 10**5
_CHUNK = 1 << 20


@dataclass(frozen=True)
class CharacterTable:
    """Full character group mod prime q via a primitive root.

    dlog[a] is the discrete log of a (base `generator`), so
    chi_j(a) = omega^(j * dlog[a]) with omega = e^(2 pi i/(q-1)).
    Immutable after construction.
    """

    q: int
    generator: int
    dlog: np.ndarray
    order: int

    def chi_exponent(self, j: int, a: int) -> int | None:
        """Exact exponent e with chi_j(a) = omega^e, or None when q | a."""
        r = a % self.q
        if r == 0:
            return None
        return (j * int(self.dlog[r])) % self.order

    def chi_value(self, j: int, a: int) -> complex:
        e = self.chi_exponent(j, a)
        if e is None:
            return 0j
        return cmath.exp(2j * math.pi * e / self.order)

    def chi_vector(self, j: int, ns: np.ndarray) -> np.ndarray:
        """chi_j over an array of positive integers."""
        r = ns % self.q
        nonzero = r != 0
        e = (j * self.dlog[r]) % self.order
        vals = np.exp((2j * np.pi / self.order) * e)
        vals[~nonzero] = 0.0
        return vals


def _verify_table(table: CharacterTable, checks: int = 100) -> None:
    q, order = table.q, table.order
    if int(np.unique(table.dlog[1:]).size) != order:
        raise AssertionError("discrete-log table is not a bijection")
    rng = np.random.default_rng(q)
    for a in rng.integers(1, q, size=min(checks, order)):
        if pow(table.generator, int(table.dlog[int(a)]), q) != int(a):
            raise AssertionError(f"dlog check failed at a={a}")
    # orthogonality spot checks, exact exponents -> complex only at the end
    n_spot = min(checks, order - 1, max(4, int(2e7 // max(q, 1))))
    omega_exp = 2j * np.pi / order
    all_e = np.arange(order, dtype=np.int64)
    for j in rng.integers(1, order, size=n_spot):  # rows: sum_a chi_j(a) = 0
        s = np.exp(omega_exp * ((int(j) * all_e) % order)).sum()
        if abs(s) > 1e-6 * order:
            raise AssertionError(f"row orthogonality failed at j={j}")
    all_j = np.arange(order, dtype=np.int64)
    for a in rng.integers(2, q, size=n_spot):  # columns: sum_j chi_j(a) = 0
        d = int(table.dlog[int(a)])
        if d == 0:
            continue
        s = np.exp(omega_exp * ((all_j * d) % order)).sum()
        if abs(s) > 1e-6 * order:
            raise AssertionError(f"column orthogonality failed at a={a}")


def build_character_table(q: int) -> CharacterTable:
    """Character group table for prime q in [3, 1e7], with the generator and
    orthogonality spot-checked on random rows/columns."""
    q = int(q)
    if q < 3 or q > _MAX_Q:
        raise ValueError(f"q must lie in [3, {_MAX_Q}], got {q}")
    if not is_prime(q):
        raise ValueError(f"q must be prime, got {q}")
    factors = prime_factors(q - 1)
    g = None
    for cand in range(2, q):
        if all(pow(cand, (q - 1) // p, q) != 1 for p in factors):
            g = cand
            break
    if g is None:  # unreachable for prime q
        raise AssertionError(f"no primitive root found for q={q}")
    dlog = np.empty(q, dtype=np.int64)
    dlog[0] = -1
    acc = 1
    for e in range(q - 1):
        dlog[acc] = e
        acc = (acc * g) % q
    table = CharacterTable(q=q, generator=g, dlog=dlog, order=q - 1)
    _verify_table(table)
    return table


_table_cache: dict = {}


def shared_character_table(q: int) -> CharacterTable:
    if q not in _table_cache:
        if len(_table_cache) > 8:
            _table_cache.clear()
        _table_cache[q] = build_character_table(q)
    return _table_cache[q]


# ---------------------------------------------------------------------------
# truncated L-derivative sums

@dataclass(frozen=True)
class LSeriesValue:
    value: complex
    ell: int
    q: int
    j: int
    N: int
    error_scale: float  # Polya-Vinogradov truncation scale sqrt(q) log q (log N)^ell / N


def _pv_error_scale(q: int, ell: int, N: int) -> float:
    return math.sqrt(q) * math.log(q) * math.log(N) ** ell / N


def l_derivative_truncated(ell: int, table: CharacterTable, j: int, N: int) -> LSeriesValue:
    """sum_{k <= N} chi_j(k) (-log k)^ell / k with compensated accumulation.

    Approximates the ell-th derivative of L(s, chi_j) at s = 1 with the
    Polya-Vinogradov error scale attached.  Non-principal characters only.
    """
    if ell < 0:
        raise ValueError("ell must be >= 0")
    if j == 0:
        raise PrincipalCharacterError("principal character rejected: the truncated "
                                      "series approximates L^(ell)(1, chi) only for chi != chi_0")
    if not 1 <= j <= table.order - 1:
        raise ValueError(f"character index {j} out of range for q={table.q}")
    if N < 2:
        raise ValueError("N must be >= 2")
    if N > _MAX_N:
        raise ResourceLimitError(f"N={N} exceeds budget {_MAX_N}")
    if ell > math.log(N):
        raise ValueError(f"need ell <= log N, got ell={ell}, log N={math.log(N):.3f}")

    from .sums import ComplexNeumaierSum

    acc = ComplexNeumaierSum()
    sign = (-1.0) ** ell
    for lo in range(1, N + 1, _CHUNK):
        hi = min(lo + _CHUNK, N + 1)
        ns = np.arange(lo, hi, dtype=np.int64)
        logs = np.log(ns.astype(np.float64))
        if lo == 1:
            logs[0] = 0.0
        coeff = sign * logs**ell / ns if ell else 1.0 / ns
        vals = table.chi_vector(j, ns) * coeff
        acc.add(complex(np.sum(vals)))
    return LSeriesValue(value=acc.value, ell=ell, q=table.q, j=j, N=int(N),
                        error_scale=_pv_error_scale(table.q, ell, N))


def _l_values_all_characters(ell: int, table: CharacterTable, N: int) -> np.ndarray:
    """sum_{k<=N} chi_j(k) (-log k)^ell / k for every j at once.

    Groups coefficients by dlog class and applies one FFT; entry j equals
    the direct sum for character j (exactly the same quantity, different
    association order).
    """
    if N > _MAX_N:
        raise ResourceLimitError(f"N={N} exceeds budget {_MAX_N}")
    order = table.order
    class_sums = np.zeros(order, dtype=np.float64)
    sign = (-1.0) ** ell
    for lo in range(1, N + 1, _CHUNK):
        hi = min(lo + _CHUNK, N + 1)
        ns = np.arange(lo, hi, dtype=np.int64)
        r = ns % table.q
        keep = r != 0
        ns, r = ns[keep], r[keep]
        logs = np.log(ns.astype(np.float64))
        if lo == 1:
            logs[0] = 0.0
        coeff = sign * logs**ell / ns if ell else 1.0 / ns
        class_sums += np.bincount(table.dlog[r], weights=coeff, minlength=order)
    # chi_j(k) = omega^{+j d}; fft gives sum_d A_d omega^{-jd}, so conjugate.
    return np.conj(np.fft.fft(class_sums))


@dataclass(frozen=True)
class MaxCharResult:
    ell: int
    q: int
    N: int
    j_star: int
    modulus: float
    all_moduli: np.ndarray


def max_over_characters(ell: int, q: int, N: int,
                        *, table: CharacterTable | None = None) -> MaxCharResult:
    """Family maximum of |sum_{k<=N} chi(k)(-log k)^ell/k| over the q-2
    non-principal characters; deterministic smallest-j tie-break."""
    table = table if table is not None else shared_character_table(q)
    if N < 2:
        raise ValueError("N must be >= 2")
    if ell > math.log(N):
        raise ValueError(f"need ell <= log N, got ell={ell}")
    values = _l_values_all_characters(ell, table, N)
    all_moduli = np.abs(values[1 : table.order])  # j = 1 .. q-2
    j_star = 1 + int(np.argmax(all_moduli))  # first occurrence = smallest j
    return MaxCharResult(ell=ell, q=table.q, N=int(N), j_star=j_star,
                         modulus=float(all_moduli[j_star - 1]), all_moduli=all_moduli)


def moduli_to_csv(result: MaxCharResult) -> str:
    lines = ["j,modulus"]
    for j, m in enumerate(result.all_moduli, start=1):
        lines.append(f"{j},{float(m)!r}")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# resonance quotient

@dataclass(frozen=True)
class ResonanceQuotient:
    q: int
    ell: int
    A: float
    N: int
    v2_over_v1: float
    error_term_scale: float
    closed_form: float   # orthogonality main term / resonator support mass
    support_size: int
    principal_correction: float  # |L^(ell)(1, chi_0; N)| |R_{chi_0}|^2, reported explicitly


def resonance_quotient(ell: int, q: int, spec,
                       *, table: CharacterTable | None = None) -> ResonanceQuotient:
    """Resonance quotient |V2/V1| with r the characteristic function of the
    divisor set clipped to [1, A], A = q^(1/4), N = q^(3/4).

    V1 = sum_{chi != chi_0} |R_chi|^2 and V2 = sum (-1)^ell L^(ell)(1,chi;N)
    |R_chi|^2 are computed directly from the character table; the
    orthogonality closed form (main term over the support mass) and a
    certified scale for the difference are returned alongside.  Because a
    weighted average cannot exceed the maximum, v2_over_v1 is a lower bound
    for max_chi |L^(ell)(1, chi; N)|.
    """
    from .resonator import ResonatorSpec, divisors_up_to

    if not isinstance(spec, ResonatorSpec):
        raise ValueError(f"spec must be a ResonatorSpec, got {type(spec).__name__}")
    if ell < 0:
        raise ValueError("ell must be >= 0")
    q = int(q)
    if q > _QUOTIENT_MAX_Q:
        raise ResourceLimitError(
            f"q={q} beyond exact character-sum budget {_QUOTIENT_MAX_Q}")
    table = table if table is not None else shared_character_table(q)
    A = q ** 0.25
    N = math.ceil(q ** 0.75)
    if spec.y >= q:
        raise ValueError(f"spec with y={spec.y} >= q={q} is incompatible")

    support = divisors_up_to(spec, A)  # all < q, all coprime to q
    S = len(support)

    # R_chi for every chi via one FFT over dlog classes of the support
    order = table.order
    counts = np.bincount(table.dlog[np.array(support, dtype=np.int64) % q],
                         minlength=order).astype(np.float64)
    R = np.conj(np.fft.fft(counts))
    R2 = np.abs(R) ** 2

    ml = _l_values_all_characters(ell, table, N) * (-1.0) ** ell  # (-1)^ell L^(ell)(1,chi;N)
    v1 = float(np.sum(R2[1:]))
    v2 = complex(np.sum(ml[1:] * R2[1:]))

    # orthogonality closed form: sum_{mk=n<=A} (log k)^ell r(m) r(n) / k over
    # sum r (k = n/m <= A <= N, so every divisor pair contributes)
    main_terms = []
    for n in support:
        for m in support:
            if n % m == 0:
                k = n // m
                if k == 1:
                    main_terms.append(1.0 if ell == 0 else 0.0)
                else:
                    main_terms.append(math.log(k) ** ell / k)
    main_sum = math.fsum(main_terms)
    closed = main_sum / S

    # |V2/V1 - main/S| = S |main_sum - ML0 * S| / V1 exactly; bound both terms.
    ml0 = float(np.real(ml[0]))
    scale = S * (abs(main_sum) + abs(ml0) * S) / v1
    return ResonanceQuotient(
        q=q, ell=ell, A=A, N=N,
        v2_over_v1=abs(v2) / v1,
        error_term_scale=scale,
        closed_form=closed,
        support_size=S,
        principal_correction=abs(ml0) * S**2,
    )
