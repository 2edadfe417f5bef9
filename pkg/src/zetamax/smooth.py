"""Smooth-number counting and twisted sums.

Psi(x, y) counts integers n <= x whose largest prime factor P+(n) is at most
y; Psi(x, y; f) is the f-weighted version.  Two counting strategies are
selected automatically: a largest-prime-factor sieve scan for x within the
sieve budget, and exponent-vector depth-first enumeration over the primes
<= y when pi(y) is small, which also covers x far beyond any sieve.

Complex sums run compensated: pure-Python paths through Neumaier
accumulators, numpy paths chunked with compensated chunk combination, so
1e8-term unit-modulus sums keep ~1 ulp accumulation error.  Chunks are
combined in fixed ascending order, so results are bit-reproducible.

The module-level sieve cache is built single-owner and only read
afterwards; all sum operations are pure given their inputs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterator, Union

import numpy as np

from .dickman import DickmanTable, build_rho_table, rho
from .dirichlet import CharacterTable
from .errors import ResourceLimitError
from .primes import sieve_primes
from .sums import ComplexNeumaierSum

DEFAULT_SIEVE_LIMIT = 10**8
DEFAULT_FULL_SUM_LIMIT = 10**8
_ENUM_PRIME_BOUND = 20  # exponent-vector enumeration engages when pi(y) <= 20
_ENUM_NODE_BUDGET = 10**7
_CHUNK = 1 << 20

# Absolute phase above which unimodular phases t*log(n) move to extended
# precision (argument-reduction error would dominate otherwise).
_PHASE_EXTENDED_THRESHOLD = 1e8


@dataclass(frozen=True)
class Trivial:
    """f(n) = 1."""


@dataclass(frozen=True)
class Character:
    """f(n) = chi_j(n) for row j of a character table (j = 0 allowed:
    the principal character acts as the coprime-to-q filter)."""

    table: CharacterTable
    j: int

    def __post_init__(self):
        if not 0 <= self.j <= self.table.order - 1:
            raise ValueError(f"character index {self.j} out of range for q={self.table.q}")


@dataclass(frozen=True)
class Unimodular:
    """f(n) = n^{-it}."""

    t: float

    def __post_init__(self):
        if not math.isfinite(self.t):
            raise ValueError("t must be finite")


TwistSpec = Union[Trivial, Character, Unimodular]


@dataclass(frozen=True)
class SmoothCountResult:
    x: float
    y: float
    exact_count: int
    dickman_approx: float
    u: float
    relative_error: float


@dataclass(frozen=True)
class ProfileRecord:
    y: float
    discrepancy: float
    psi_xy: int
    ratio: float


# ---------------------------------------------------------------------------
# largest-prime-factor sieve

_spf_cache: dict = {"limit": 0, "table": None}


def spf_sieve(limit: int, *, limit_cap: int = DEFAULT_SIEVE_LIMIT) -> np.ndarray:
    """Array a with a[n] = P+(n) for 2 <= n <= limit; a[1] = 1, a[0] = 0.

    Ascending prime passes overwrite multiples, so the last write at each n
    is its largest prime factor.
    """
    limit = int(limit)
    if limit < 2 or limit > limit_cap:
        raise ResourceLimitError(f"sieve limit {limit} outside [2, {limit_cap}]")
    table = np.zeros(limit + 1, dtype=np.int32)
    table[1] = 1
    for p in range(2, limit + 1):
        if table[p] == 0:
            table[p::p] = p
    return table


def _shared_spf(limit: int) -> np.ndarray:
    if _spf_cache["limit"] < limit:
        # grow geometrically so ascending-x call sequences amortize
        target = max(limit, min(max(2 * _spf_cache["limit"], 4096), DEFAULT_SIEVE_LIMIT))
        _spf_cache["table"] = spf_sieve(target)
        _spf_cache["limit"] = target
    return _spf_cache["table"]


# ---------------------------------------------------------------------------
# exponent-vector enumeration

def iter_smooth(x: float, y: float, *, node_budget: int = _ENUM_NODE_BUDGET) -> Iterator[int]:
    """Yield every y-smooth integer <= x (unordered), one node per number.

    Requires pi(y) <= 20; raises ResourceLimitError beyond node_budget.
    """
    primes = sieve_primes(int(y))
    if len(primes) > _ENUM_PRIME_BOUND:
        raise ResourceLimitError(f"pi({y}) = {len(primes)} > {_ENUM_PRIME_BOUND}")
    budget = node_budget
    xi = math.floor(x)

    def rec(i: int, prod: int) -> Iterator[int]:
        nonlocal budget
        budget -= 1
        if budget < 0:
            raise ResourceLimitError(f"smooth enumeration exceeds {node_budget} nodes")
        yield prod
        for j in range(i, len(primes)):
            nxt = prod * primes[j]
            if nxt > xi:
                break
            yield from rec(j, nxt)

    if xi >= 1:
        yield from rec(0, 1)


# ---------------------------------------------------------------------------
# default Dickman table for the density comparison

_default_table: list = [None]


def _density_table() -> DickmanTable:
    if _default_table[0] is None:
        _default_table[0] = build_rho_table(40.0, 1e-12)
    return _default_table[0]


# ---------------------------------------------------------------------------
# counting

def psi_count(
    x: float,
    y: float,
    *,
    sieve_limit: int = DEFAULT_SIEVE_LIMIT,
    table: DickmanTable | None = None,
) -> SmoothCountResult:
    """Exact Psi(x, y) together with the Dickman approximation x*rho(u).

    Strategy: y >= x is trivial; else exponent-vector enumeration when
    pi(y) <= 20 (any x), falling back to a sieve scan for x within budget.
    """
    if x < 1:
        raise ValueError(f"x must be >= 1, got {x}")
    if y < 2:
        raise ValueError(f"y must be >= 2, got {y}")
    xi = math.floor(x)
    if y >= x:
        count = xi
    else:
        count = None
        if len(sieve_primes(int(y))) <= _ENUM_PRIME_BOUND:
            try:
                count = sum(1 for _ in iter_smooth(x, y))
            except ResourceLimitError:
                count = None
        if count is None:
            if xi > sieve_limit:
                raise ResourceLimitError(
                    f"x={x}: no counting strategy within budget (sieve_limit={sieve_limit})"
                )
            spf = _shared_spf(xi)
            count = 1 + int(np.count_nonzero(spf[2 : xi + 1] <= y))

    u = math.log(x) / math.log(y)
    t = table if table is not None else _density_table()
    rho_u = rho(u, t) if u <= t.max_u else math.exp(-u * (math.log(u) + math.log(math.log(u + 2)) - 1))
    approx = x * rho_u
    rel = count / approx - 1.0 if approx > 0 else math.inf
    return SmoothCountResult(
        x=float(x), y=float(y), exact_count=int(count),
        dickman_approx=approx, u=u, relative_error=rel,
    )


# ---------------------------------------------------------------------------
# twist evaluation helpers

_TWO_PI_LD = np.longdouble("6.28318530717958647692528676655900576839433879875")


def _phase_factors(ns: np.ndarray, t: float) -> np.ndarray:
    """e^{-i t log n} for an int array; extended precision for huge phases."""
    logs = np.log(ns.astype(np.float64))
    if ns.size and abs(t) * float(logs[-1]) > _PHASE_EXTENDED_THRESHOLD:
        logs_ld = np.log(ns.astype(np.longdouble))
        phase = (np.longdouble(t) * logs_ld) % _TWO_PI_LD
        return np.exp(-1j * phase.astype(np.float64))
    return np.exp(-1j * (t * logs))


def _twist_values(ns: np.ndarray, twist: TwistSpec) -> np.ndarray:
    if isinstance(twist, Trivial):
        return np.ones(ns.shape, dtype=np.complex128)
    if isinstance(twist, Unimodular):
        if twist.t == 0.0:
            return np.ones(ns.shape, dtype=np.complex128)
        return _phase_factors(ns, twist.t)
    if isinstance(twist, Character):
        return twist.table.chi_vector(twist.j, ns)
    raise TypeError(f"not a twist spec: {twist!r}")


def _twist_scalar(n: int, twist: TwistSpec) -> complex:
    if isinstance(twist, Trivial):
        return 1.0 + 0.0j
    if isinstance(twist, Unimodular):
        if twist.t == 0.0 or n == 1:
            return 1.0 + 0.0j
        w = twist.t * math.log(n)
        if abs(w) > _PHASE_EXTENDED_THRESHOLD:
            import mpmath

            with mpmath.workdps(40):
                w = float(mpmath.fmod(mpmath.mpf(twist.t) * mpmath.log(n), 2 * mpmath.pi))
        return complex(math.cos(w), -math.sin(w))
    if isinstance(twist, Character):
        return twist.table.chi_value(twist.j, n % twist.table.q)
    raise TypeError(f"not a twist spec: {twist!r}")


# ---------------------------------------------------------------------------
# twisted sums

def smooth_twisted_sum(
    x: float,
    y: float,
    twist: TwistSpec,
    *,
    sieve_limit: int = DEFAULT_SIEVE_LIMIT,
) -> complex:
    """Exact Psi(x, y; f) = sum over y-smooth n <= x of f(n)."""
    if x < 1:
        return 0j
    if y < 2:
        raise ValueError(f"y must be >= 2, got {y}")
    xi = math.floor(x)
    if y >= x:
        # every n <= x is y-smooth: identical value AND identical float path,
        # so full - smooth is exactly zero here
        return full_twisted_sum(x, twist)

    if len(sieve_primes(int(y))) <= _ENUM_PRIME_BOUND:
        try:
            acc = ComplexNeumaierSum()
            for n in iter_smooth(x, y):
                acc.add(_twist_scalar(n, twist))
            return acc.value
        except ResourceLimitError:
            pass

    if xi > sieve_limit:
        raise ResourceLimitError(f"x={x} exceeds sieve budget {sieve_limit}")
    acc = ComplexNeumaierSum()
    acc.add(_twist_scalar(1, twist))
    if xi >= 2:
        spf = _shared_spf(xi)
        for lo in range(2, xi + 1, _CHUNK):
            hi = min(lo + _CHUNK, xi + 1)
            ns = np.arange(lo, hi, dtype=np.int64)
            ns = ns[spf[lo:hi] <= y]
            if ns.size:
                acc.add(complex(np.sum(_twist_values(ns, twist))))
    return acc.value


def full_twisted_sum(
    x: float,
    twist: TwistSpec,
    *,
    limit: int = DEFAULT_FULL_SUM_LIMIT,
) -> complex:
    """Exact sum_{n <= x} f(n).

    Character twists reduce over full periods (the period sum is exact by
    orthogonality); unimodular twists run the compensated chunked sum.
    """
    if x < 1:
        return 0j
    xi = math.floor(x)
    if isinstance(twist, Trivial):
        return complex(xi)
    if isinstance(twist, Character):
        q = twist.table.q
        period = twist.table.chi_vector(twist.j, np.arange(1, q + 1, dtype=np.int64))
        prefix = np.cumsum(period)
        full, rem = divmod(xi, q)
        total = full * complex(prefix[-1])
        if rem:
            total += complex(prefix[rem - 1])
        return total
    if xi > limit:
        raise ResourceLimitError(f"x={x} exceeds full-sum budget {limit}")
    acc = ComplexNeumaierSum()
    for lo in range(1, xi + 1, _CHUNK):
        hi = min(lo + _CHUNK, xi + 1)
        ns = np.arange(lo, hi, dtype=np.int64)
        acc.add(complex(np.sum(_twist_values(ns, twist))))
    return acc.value


def nonsmooth_twisted_sum(x: float, y: float, twist: TwistSpec) -> complex:
    """sum over n <= x with P+(n) > y of f(n) -- the third, independent
    summation used to validate full = smooth + nonsmooth."""
    xi = math.floor(x)
    if xi < 2:
        return 0j
    spf = _shared_spf(xi)
    acc = ComplexNeumaierSum()
    for lo in range(2, xi + 1, _CHUNK):
        hi = min(lo + _CHUNK, xi + 1)
        ns = np.arange(lo, hi, dtype=np.int64)
        ns = ns[spf[lo:hi] > y]
        if ns.size:
            acc.add(complex(np.sum(_twist_values(ns, twist))))
    return acc.value


# ---------------------------------------------------------------------------
# approximation error profile

def approximation_error_profile(
    x: float,
    twist: TwistSpec,
    y_grid,
    *,
    sieve_limit: int = DEFAULT_SIEVE_LIMIT,
) -> list[ProfileRecord]:
    """Measured discrepancy |full - smooth| normalized by Psi(x, y) for each
    y in the grid.  Pure measurement; no conditional approximation theorem
    is assumed anywhere.
    """
    ys = list(y_grid)
    for y in ys:
        if y < 2:
            raise ValueError(f"every y must be >= 2, got {y}")
    full = full_twisted_sum(x, twist)
    out = []
    for y in ys:
        smooth_val = smooth_twisted_sum(x, y, twist, sieve_limit=sieve_limit)
        psi = psi_count(x, y, sieve_limit=sieve_limit).exact_count
        disc = abs(full - smooth_val)
        out.append(ProfileRecord(y=float(y), discrepancy=disc, psi_xy=psi, ratio=disc / psi))
    return out


def profile_to_csv(records: list[ProfileRecord]) -> str:
    lines = ["y,discrepancy,psi_xy,ratio"]
    for r in records:
        lines.append(f"{r.y!r},{r.discrepancy!r},{r.psi_xy},{r.ratio!r}")
    return "\n".join(lines) + "\n"
