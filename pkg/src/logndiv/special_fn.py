"""Scalar special functions used by every closed-form expression in this
package: Gaussian tail Q, regularized incomplete gamma, and the generalized
Marcum-Q function evaluated through the noncentral chi-squared series.

All functions are pure, deterministic, and safe to call concurrently. They
return plain floats; probabilities are range-checked, never silently clipped
(excursions beyond floating-point dust raise, because they indicate a bug).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import DomainError, SeriesCapError

_SQRT2 = math.sqrt(2.0)
_LN_2PI = math.log(2.0 * math.pi)

# Incomplete-gamma iteration controls.
_EPS = 1e-16
_FPMIN = 1e-300
_ITMAX = 10 ** 6

# Tolerated floating-point excursion outside [0, 1] before we call it a bug.
_PROB_SLACK = 1e-12


def _as_probability(p: float, what: str) -> float:
    if p < -_PROB_SLACK or p > 1.0 + _PROB_SLACK:
        raise AssertionError(f"{what} produced {p!r}, outside [0, 1]")
    return min(max(p, 0.0), 1.0)


def gaussian_q(x: float) -> float:
    """Standard normal tail probability Pr{N(0,1) > x}.

    Computed via the complementary error function; accurate to full double
    precision for moderate x and keeps the correct exponential decay deep
    into the tail (x up to ~38, where the result goes subnormal).
    """
    if not math.isfinite(x):
        raise DomainError(f"gaussian_q requires finite x, got {x!r}")
    return 0.5 * math.erfc(x / _SQRT2)


def gaussian_q_asym(x: float) -> float:
    """Leading-order tail approximation exp(-x^2/2) / (sqrt(2*pi) * x).

    Only meaningful for x > 0; the ratio to gaussian_q(x) tends to 1 as
    x grows.
    """
    if not (math.isfinite(x) and x > 0.0):
        raise DomainError(f"gaussian_q_asym requires x > 0, got {x!r}")
    return math.exp(-0.5 * x * x) / (math.sqrt(2.0 * math.pi) * x)


def _check_gamma_args(s: float, x: float) -> None:
    if not (math.isfinite(s) and s > 0.0):
        raise DomainError(f"gamma shape must be finite and > 0, got {s!r}")
    if not (math.isfinite(x) and x >= 0.0):
        raise DomainError(f"gamma argument must be finite and >= 0, got {x!r}")


def _gser_sum(s: float, x: float) -> float:
    # Series part of P(s,x): sum_{n>=0} x^n / (s(s+1)...(s+n)) * s, i.e.
    # P = sum * exp(-x + s ln x - lgamma(s)) with sum = 1/s * (1 + ...).
    ap = s
    term = 1.0 / s
    total = term
    for _ in range(_ITMAX):
        ap += 1.0
        term *= x / ap
        total += term
        if abs(term) < abs(total) * _EPS:
            return total
    raise SeriesCapError(f"incomplete gamma series did not converge (s={s}, x={x})")


def _gcf_factor(s: float, x: float) -> float:
    # Modified Lentz evaluation of the continued fraction for Q(s,x);
    # Q = exp(-x + s ln x - lgamma(s)) * factor. Valid for x >= s + 1.
    b = x + 1.0 - s
    c = 1.0 / _FPMIN
    d = 1.0 / b
    h = d
    for i in range(1, _ITMAX):
        an = -i * (i - s)
        b += 2.0
        d = an * d + b
        if abs(d) < _FPMIN:
            d = _FPMIN
        c = b + an / c
        if abs(c) < _FPMIN:
            c = _FPMIN
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < _EPS:
            return h
    raise SeriesCapError(f"incomplete gamma continued fraction did not converge (s={s}, x={x})")


def reg_gamma_lower(s: float, x: float) -> float:
    """Regularized lower incomplete gamma P(s, x), nondecreasing in x.

    Series expansion for x < s + 1, continued fraction otherwise.
    """
    _check_gamma_args(s, x)
    if x == 0.0:
        return 0.0
    if x < s + 1.0:
        p = _gser_sum(s, x) * math.exp(-x + s * math.log(x) - math.lgamma(s))
    else:
        p = 1.0 - _gcf_factor(s, x) * math.exp(-x + s * math.log(x) - math.lgamma(s))
    return _as_probability(p, "reg_gamma_lower")


def reg_gamma_upper(s: float, x: float) -> float:
    """Regularized upper incomplete gamma Q(s, x) = 1 - P(s, x), computed on
    whichever branch keeps the tail relatively accurate."""
    _check_gamma_args(s, x)
    if x == 0.0:
        return 1.0
    if x < s + 1.0:
        q = 1.0 - _gser_sum(s, x) * math.exp(-x + s * math.log(x) - math.lgamma(s))
    else:
        q = _gcf_factor(s, x) * math.exp(-x + s * math.log(x) - math.lgamma(s))
    return _as_probability(q, "reg_gamma_upper")


def reg_gamma_upper_log(s: float, x: float) -> float:
    """ln Q(s, x), stable far into the right tail where Q underflows."""
    _check_gamma_args(s, x)
    if x == 0.0:
        return 0.0
    if x < s + 1.0:
        p = _gser_sum(s, x) * math.exp(-x + s * math.log(x) - math.lgamma(s))
        return math.log1p(-min(p, 1.0 - 1e-300))
    return -x + s * math.log(x) - math.lgamma(s) + math.log(_gcf_factor(s, x))


def reg_gamma_lower_log(s: float, x: float) -> float:
    """ln P(s, x), stable far into the left tail where P underflows."""
    _check_gamma_args(s, x)
    if x == 0.0:
        return -math.inf
    if x < s + 1.0:
        return math.log(_gser_sum(s, x)) - x + s * math.log(x) - math.lgamma(s)
    q = _gcf_factor(s, x) * math.exp(-x + s * math.log(x) - math.lgamma(s))
    return math.log1p(-q) if q < 0.5 else math.log(1.0 - q)


def _check_ncx2_args(k: float, lam: float, x: float) -> None:
    if not (math.isfinite(k) and k > 0.0):
        raise DomainError(f"degrees of freedom must be > 0, got {k!r}")
    if not (math.isfinite(lam) and lam >= 0.0):
        raise DomainError(f"noncentrality must be >= 0, got {lam!r}")
    if not (math.isfinite(x) and x >= 0.0):
        raise DomainError(f"evaluation point must be >= 0, got {x!r}")


def noncentral_chi2_cdf(k: float, lam: float, x: float) -> float:
    """CDF of the noncentral chi-squared law with k dof and noncentrality lam.

    Poisson-weighted mixture of central gamma CDFs. Summation starts at the
    modal Poisson index and expands both ways, so very large noncentralities
    do not underflow at the first term. Truncates once the remaining Poisson
    weight is below 1e-16 (the gamma terms are decreasing, so the discarded
    mass bounds the truncation error).
    """
    _check_ncx2_args(k, lam, x)
    if x == 0.0:
        return 0.0
    if lam == 0.0:
        return reg_gamma_lower(0.5 * k, 0.5 * x)

    y = 0.5 * x
    half = 0.5 * lam
    j0 = int(half)
    lw0 = -half + j0 * math.log(half) - math.lgamma(j0 + 1.0)
    w0 = math.exp(lw0)
    s0 = 0.5 * k + j0
    t0 = reg_gamma_lower(s0, y)

    acc = w0 * t0
    cumw = w0

    # Upward sweep: t_{j+1} = t_j - y^s e^{-y} / Gamma(s+1) at s = k/2 + j.
    w, t, s = w0, t0, s0
    j = j0
    e = math.exp(s * math.log(y) - y - math.lgamma(s + 1.0))
    for _ in range(_ITMAX):
        if cumw >= 1.0 - _EPS:
            break
        t -= e
        if t <= 0.0:
            break  # all further gamma terms vanish numerically
        e *= y / (s + 1.0)
        s += 1.0
        j += 1
        w *= half / j
        acc += w * t
        cumw += w
        if w < 1e-20 and j > half:
            break
    else:
        raise SeriesCapError(f"noncentral chi-squared series hit the term cap (k={k}, lam={lam}, x={x})")

    # Downward sweep from the mode: t_{j-1} = t_j + term at s-1.
    w, t, s = w0, t0, s0
    j = j0
    while j > 0 and cumw < 1.0 - _EPS:
        t = min(1.0, t + math.exp((s - 1.0) * math.log(y) - y - math.lgamma(s)))
        w *= j / half
        j -= 1
        s -= 1.0
        acc += w * t
        cumw += w
        if w < 1e-20 and (half - j) > 2.0:
            break

    return _as_probability(acc, "noncentral_chi2_cdf")


def noncentral_chi2_cdf_log(k: float, lam: float, x: float) -> float:
    """ln of noncentral_chi2_cdf, usable when the CDF underflows linearly.

    Log-sum-exp over the Poisson-gamma series; the summand is unimodal in
    the mixture index, so the peak is located by integer ternary search and
    the sum is taken outward until terms fall 46 nats below the peak.
    """
    _check_ncx2_args(k, lam, x)
    if x == 0.0:
        return -math.inf
    if lam == 0.0:
        return reg_gamma_lower_log(0.5 * k, 0.5 * x)

    y = 0.5 * x
    half = 0.5 * lam
    log_half = math.log(half)

    def log_term(j: int) -> float:
        return (-half + j * log_half - math.lgamma(j + 1.0)
                + reg_gamma_lower_log(0.5 * k + j, y))

    lo, hi = 0, int(half + 10.0 * math.sqrt(half) + 60.0)
    while hi - lo > 2:
        m1 = lo + (hi - lo) // 3
        m2 = hi - (hi - lo) // 3
        if log_term(m1) < log_term(m2):
            lo = m1 + 1
        else:
            hi = m2
    jstar = max(range(max(lo - 2, 0), hi + 3), key=log_term)
    tstar = log_term(jstar)

    total = 1.0
    j = jstar + 1
    for _ in range(_ITMAX):
        d = log_term(j) - tstar
        if d < -46.0:
            break
        total += math.exp(d)
        j += 1
    j = jstar - 1
    while j >= 0:
        d = log_term(j) - tstar
        if d < -46.0:
            break
        total += math.exp(d)
        j -= 1

    return min(tstar + math.log(total), 0.0)


@dataclass(frozen=True)
class MarcumArgs:
    """Arguments of the generalized Marcum-Q function Q_order(a, b).

    The order may be any positive real (half-integers arise from odd branch
    counts); a is the noncentrality arm, b the threshold arm.
    """

    order: float
    a: float
    b: float

    def __post_init__(self):
        if not (math.isfinite(self.order) and self.order > 0.0):
            raise DomainError(f"Marcum order must be finite and > 0, got {self.order!r}")
        if not (math.isfinite(self.a) and self.a >= 0.0):
            raise DomainError(f"Marcum a must be finite and >= 0, got {self.a!r}")
        if not (math.isfinite(self.b) and self.b >= 0.0):
            raise DomainError(f"Marcum b must be finite and >= 0, got {self.b!r}")


def marcum_q(args: MarcumArgs) -> float:
    """Generalized Marcum-Q: the survival function of a noncentral
    chi-squared law with 2*order dof and noncentrality a^2, evaluated
    at b^2. Nonincreasing in b, nondecreasing in a."""
    if args.b == 0.0:
        return 1.0
    if args.a == 0.0:
        # Central case on the upper-tail branch, which keeps small tails exact.
        return reg_gamma_upper(args.order, 0.5 * args.b * args.b)
    p = noncentral_chi2_cdf(2.0 * args.order, args.a * args.a, args.b * args.b)
    return _as_probability(1.0 - p, "marcum_q")


def marcum_q_complement_log(order: float, a: float, b: float) -> float:
    """ln(1 - Q_order(a, b)): the log lower tail of the associated
    noncentral chi-squared law. Stable when the complement underflows,
    which is the regime of high-SNR combining curves."""
    if not (math.isfinite(order) and order > 0.0):
        raise DomainError(f"Marcum order must be finite and > 0, got {order!r}")
    if not (math.isfinite(a) and a >= 0.0) or not (math.isfinite(b) and b >= 0.0):
        raise DomainError("Marcum arms must be finite and >= 0")
    return noncentral_chi2_cdf_log(2.0 * order, a * a, b * b)
