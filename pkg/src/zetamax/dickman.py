"""The Dickman function rho(u), its Laplace transform, and the de Bruijn
main-term asymptotic.

rho is the continuous solution of  u*rho'(u) + rho(u-1) = 0  with rho = 1 on
[0, 1].  The builder does not step that delay ODE directly (step error is
amplified multiplicatively); it uses the equivalent self-stabilizing integral
form

    u * rho(u) = integral_{u-1}^{u} rho(t) dt,

solved interval by interval on [k, k+1] with a fixed-point iteration over a
Chebyshev interpolant.  Because rho has a derivative kink at u = 1 (and
progressively weaker kinks at the larger integers), intervals are aligned to
integer breakpoints so no interpolant spans a kink.

Error certification: if e_k is the absolute error of interpolant k and r_k
the residual of the integral identity on interval k, the identity gives
||e_1|| <= ||r_1|| (Gronwall) and ||e_k|| <= (||e_{k-1}|| + ||r_k||)/(k-1)
for k >= 2, so errors are contracted rather than amplified.  Tail bounds use
the rigorous monotonicity consequence rho(u) <= rho(u-1)/u, i.e. the table
value at the domain end certifies everything beyond it.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import mpmath
import numpy as np
from numpy.polynomial import chebyshev as C
from numpy.polynomial import legendre as L

from .constants import EULER_GAMMA, GAMMA_LITERAL
from .errors import OutOfDomainError, PrecisionUnreachableError, TailNotCertifiedError

DEFAULT_DEGREE = 16
_MAX_DEGREE = 40
_GL_NODES, _GL_WEIGHTS = L.leggauss(32)


@dataclass(frozen=True)
class DickmanTable:
    """Piecewise-Chebyshev representation of rho on [0, max_u].

    intervals[k] holds the Chebyshev coefficients of rho on [k, k+1] in the
    local variable x = 2*(u - k) - 1.  tol is the certified absolute error
    bound of the whole representation; interval_tols[k] the (much smaller,
    superfactorially decaying) certified bound on interval k alone, which is
    what tail certification at the domain end relies on.  Immutable;
    evaluations are pure and safe to share across workers.
    """

    max_u: float
    degree: int
    tol: float
    intervals: tuple
    interval_tols: tuple

    def __call__(self, u: float) -> float:
        return rho(u, self)

    def end_error_bound(self) -> float:
        return self.interval_tols[-1]


def _interval_antiderivative(coeffs: np.ndarray) -> np.ndarray:
    # d/dx -> d/du scaling: unit interval has half-width 1/2.
    return C.chebint(coeffs, m=1, scl=0.5)


def _build_interval(k: int, prev_coeffs: np.ndarray, degree: int) -> tuple[np.ndarray, float]:
    """Solve u*rho(u) = A(u) + int_k^u rho on [k, k+1]; return (coeffs, residual).

    A(u) = int_{u-1}^{k} rho_{k-1}; the point u-1 has the same local
    coordinate in interval k-1 as u has in interval k, so A evaluates from
    the previous antiderivative at the node coordinates directly.
    """
    m = degree + 1
    xs = np.cos(np.pi * (2 * np.arange(m) + 1) / (2 * m))  # first-kind nodes
    xs = np.sort(xs)
    us = (k + 0.5) + 0.5 * xs

    phi_prev = _interval_antiderivative(prev_coeffs)
    a_vals = C.chebval(1.0, phi_prev) - C.chebval(xs, phi_prev)

    vals = np.full(m, C.chebval(1.0, prev_coeffs))  # continuity seed
    coeffs = None
    for _ in range(200):
        coeffs = C.chebfit(xs, vals, degree)
        phi = _interval_antiderivative(coeffs)
        new_vals = (a_vals + C.chebval(xs, phi) - C.chebval(-1.0, phi)) / us
        delta = float(np.max(np.abs(new_vals - vals)))
        vals = new_vals
        if delta < 1e-18 + 1e-16 * float(np.max(np.abs(vals))):
            break
    coeffs = C.chebfit(xs, vals, degree)

    # residual of the integral identity on a denser grid
    xd = np.cos(np.pi * (2 * np.arange(4 * m) + 1) / (8 * m))
    xd = np.concatenate(([-1.0], np.sort(xd), [1.0]))
    ud = (k + 0.5) + 0.5 * xd
    phi = _interval_antiderivative(coeffs)
    a_dense = C.chebval(1.0, phi_prev) - C.chebval(xd, phi_prev)
    lhs = ud * C.chebval(xd, coeffs)
    rhs = a_dense + C.chebval(xd, phi) - C.chebval(-1.0, phi)
    residual = float(np.max(np.abs(lhs - rhs)))
    return coeffs, residual


def build_rho_table(max_u: float, tol: float) -> DickmanTable:
    """Build a certified table of rho on [0, max_u].

    max_u in [1, 1e3]; tol in [1e-14, inf).  Construction is sequential
    (interval k depends on k-1); the returned table is immutable.
    """
    if not (max_u >= 1.0) or max_u > 1e3:
        raise ValueError(f"max_u must lie in [1, 1e3], got {max_u}")
    if not (tol > 0.0):
        raise ValueError(f"tol must be positive, got {tol}")
    if tol < 1e-14:
        raise ValueError(f"tol below the certifiable floor 1e-14: {tol}")

    n_intervals = max(1, math.ceil(max_u))
    degree = DEFAULT_DEGREE
    while True:
        intervals = [np.array([1.0])]  # rho = 1 on [0, 1]
        certs = [0.0]  # per-interval certified error bounds
        worst = 0.0
        ok = True
        for k in range(1, n_intervals):
            coeffs, res = _build_interval(k, intervals[k - 1], degree)
            res *= 2.0  # grid-sampled residual safety factor
            cert = (certs[-1] + res) if k == 1 else (certs[-1] + res) / (k - 1)
            worst = max(worst, cert)
            if worst > tol:
                ok = False
                break
            intervals.append(coeffs)
            certs.append(cert)
        if ok:
            return DickmanTable(
                max_u=float(max_u),
                degree=degree,
                tol=max(worst, 1e-16),
                intervals=tuple(np.asarray(c) for c in intervals),
                interval_tols=tuple(certs),
            )
        if degree >= _MAX_DEGREE:
            raise PrecisionUnreachableError(
                f"cannot certify tol={tol} at degree <= {_MAX_DEGREE}"
            )
        degree += 8


def rho(u: float, table: DickmanTable) -> float:
    """Table value of rho(u); exact 1.0 on [0, 1], in (0, 1] elsewhere."""
    if u < 0:
        raise ValueError(f"u must be >= 0, got {u}")
    if u > table.max_u * (1 + 1e-12) + 1e-12:
        raise OutOfDomainError(f"u={u} beyond table domain [0, {table.max_u}]")
    if u <= 1.0:
        return 1.0
    k = min(int(math.floor(u)), len(table.intervals) - 1)
    x = 2.0 * (u - k) - 1.0
    x = min(1.0, max(-1.0, x))
    return float(C.chebval(x, table.intervals[k]))


def log_rho_asymptotic_main(u: float) -> float:
    """Main term of the de Bruijn asymptotic: -u*(log u + log log(u+2) - 1)."""
    if not u > 0:
        raise ValueError(f"u must be positive, got {u}")
    return -u * (math.log(u) + math.log(math.log(u + 2.0)) - 1.0)


def _tail_mass_bound(table: DickmanTable, from_u: float) -> float:
    """Certified bound on int_{from_u}^infty rho, via rho(u) <= rho(u-1)/u."""
    if from_u < 2.0:
        return math.inf
    k = min(int(math.floor(from_u)), len(table.intervals) - 1)
    top = rho(from_u, table) + table.interval_tols[k]
    return top * from_u / (from_u - 1.0)


def _interval_quadrature(coeffs: np.ndarray, k: int, weight, panels: int = 1) -> float:
    """Gauss-Legendre integral of weight(u)*p(u) over [k, k+1]."""
    total = 0.0
    for j in range(panels):
        a = k + j / panels
        b = k + (j + 1) / panels
        mid, half = 0.5 * (a + b), 0.5 * (b - a)
        us = mid + half * _GL_NODES
        xs = 2.0 * (us - k) - 1.0
        vals = C.chebval(xs, coeffs) * weight(us)
        total += half * float(np.dot(_GL_WEIGHTS, vals))
    return total


def laplace_lhs(s: float, table: DickmanTable, tol: float) -> float:
    """int_0^infty rho(u) e^{-u s} du by quadrature over the table plus a
    certified truncation bound.

    Raises TailNotCertifiedError when the table domain cannot push the tail
    below tol.
    """
    if s < 0:
        raise ValueError(f"s must be >= 0, got {s}")
    if not tol > 0:
        raise ValueError("tol must be positive")
    u_end = table.max_u
    tail = _tail_mass_bound(table, u_end) * math.exp(-s * u_end)
    if not (tail < tol / 2):
        raise TailNotCertifiedError(
            f"tail bound {tail:.3e} at U={u_end} exceeds tol/2={tol / 2:.3e}"
        )

    panels = max(1, math.ceil(s / 4.0))
    pieces = []
    n_int = len(table.intervals)
    for k in range(n_int):
        hi = min(k + 1.0, u_end)
        if hi <= k:
            break
        if hi < k + 1.0:
            # Final partial interval: integrate [k, hi] only.
            mid, half = 0.5 * (k + hi), 0.5 * (hi - k)
            us = mid + half * _GL_NODES
            xs = 2.0 * (us - k) - 1.0
            vals = C.chebval(xs, table.intervals[k]) * np.exp(-s * us)
            pieces.append(half * float(np.dot(_GL_WEIGHTS, vals)))
            break
        pieces.append(
            _interval_quadrature(table.intervals[k], k, lambda us: np.exp(-s * us), panels)
        )
        if k >= 2:
            remaining = _tail_mass_bound(table, float(k + 1)) * math.exp(-s * (k + 1))
            if remaining < tol / 4:
                break
    return math.fsum(pieces)


def _ein_series_float(s: float) -> float:
    # Ein(s) = sum_{m>=1} (-1)^{m-1} s^m / (m * m!), fine in float64 for small s.
    total = []
    term = 1.0
    for m in range(1, 200):
        term *= s / m  # s^m / m!
        contrib = term / m
        total.append(contrib if m % 2 == 1 else -contrib)
        if m > s and contrib < 1e-20:
            break
    return math.fsum(total)


def _ein_series_mp(s: float, dps: int) -> mpmath.mpf:
    with mpmath.workdps(dps):
        ss = mpmath.mpf(s)
        total = mpmath.mpf(0)
        term = mpmath.mpf(1)
        m = 1
        while True:
            term *= ss / m
            contrib = term / m
            total += contrib if m % 2 == 1 else -contrib
            if m > s and abs(contrib) < mpmath.mpf(10) ** (-dps):
                break
            m += 1
        return total


def laplace_rhs(s: float, tol: float = 1e-12) -> float:
    """Closed form exp(gamma + int_0^s (e^{-z}-1)/z dz), via the everywhere-
    convergent series int_0^s (e^{-z}-1)/z dz = sum_{m>=1} (-s)^m/(m*m!).

    The series alternates with terms up to ~e^s/s^{3/2}, so cancellation
    outgrows float64 near s ~ 12; larger s switches to mpmath with digits
    scaled to the cancellation.
    """
    if s < 0:
        raise ValueError(f"s must be >= 0, got {s}")
    if s > 100:
        raise ValueError(f"s must be <= 100, got {s}")
    if not tol > 0:
        raise ValueError("tol must be positive")
    if s == 0.0:
        return math.exp(EULER_GAMMA)
    if s <= 8.0:
        return math.exp(EULER_GAMMA - _ein_series_float(s))
    dps = int(25 + 0.45 * s)
    with mpmath.workdps(dps):
        val = mpmath.exp(mpmath.mpf(GAMMA_LITERAL) - _ein_series_mp(s, dps))
        return float(val)


def save_table(table: DickmanTable, path: str) -> None:
    """Versioned textual dump; round-trips exactly (floats via repr)."""
    doc = {
        "format": "dickman-rho-table",
        "schema_version": 1,
        "max_u": table.max_u,
        "degree": table.degree,
        "tol": table.tol,
        "interval_tols": [float(t) for t in table.interval_tols],
        "intervals": [
            {"k": k, "coeffs": [float(c) for c in coeffs]}
            for k, coeffs in enumerate(table.intervals)
        ],
    }
    with open(path, "w", encoding="utf-8") as f:
        json.dump(doc, f)
        f.write("\n")


def load_table(path: str) -> DickmanTable:
    with open(path, "r", encoding="utf-8") as f:
        doc = json.load(f)
    if doc.get("format") != "dickman-rho-table" or doc.get("schema_version") != 1:
        raise ValueError(f"unrecognized table file {path!r}")
    intervals = [None] * len(doc["intervals"])
    for item in doc["intervals"]:
        intervals[item["k"]] = np.array(item["coeffs"], dtype=float)
    if any(c is None for c in intervals):
        raise ValueError("table file has missing intervals")
    return DickmanTable(
        max_u=float(doc["max_u"]),
        degree=int(doc["degree"]),
        tol=float(doc["tol"]),
        intervals=tuple(intervals),
        interval_tols=tuple(float(t) for t in doc["interval_tols"]),
    )
