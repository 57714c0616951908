"""Closed-form high-SNR outage approximations for SC/EGC/MRC over equally
correlated lognormal channels, and the matching left-tail CDF of a sum of
lognormal variables.

Conventions shared by every function here:

  * q.er is the average received electrical power Er (watts) and
    q.gamma_th the outage threshold (watts).
  * The SC approximation is an elementary expression; EGC and MRC come out
    as lower tails of a noncentral chi-squared law (complement of a
    generalized Marcum-Q of order L/2).
  * Everything is evaluated in log-space internally, so L = 8 with mixing
    weight a = 10^3 neither overflows nor underflows; *_log10
    variants expose the log value directly for deep-tail comparisons.
  * Below the validity region of an approximation a typed
    BelowAsymptoticRegimeError is raised carrying the smallest valid Er,
    so grid sweeps can annotate pre-asymptotic points instead of dropping
    them.
  * Fully correlated channels (a = 1) are rejected: the osculating
    geometry behind the EGC/MRC forms degenerates, and the SC coefficient
    divides by the vanishing mixing determinant. Identical branches should
    be modeled as a single branch with scaled power by the caller.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .channel import DerivedParams, log_det_mixing
from .errors import BelowAsymptoticRegimeError, DegenerateGeometryError, DomainError
from .special_fn import gaussian_q, marcum_q_complement_log

_LN_2PI = math.log(2.0 * math.pi)
_LG_E = math.log10(math.e)
_LN10 = math.log(10.0)


@dataclass(frozen=True)
class OutageQuery:
    """One evaluation point: threshold gamma_th and average power er, both
    in watts."""

    gamma_th: float
    er: float

    def __post_init__(self):
        if not (math.isfinite(self.gamma_th) and self.gamma_th > 0.0):
            raise DomainError(f"gamma_th must be finite and > 0 watts, got {self.gamma_th!r}")
        if not (math.isfinite(self.er) and self.er > 0.0):
            raise DomainError(f"er must be finite and > 0 watts, got {self.er!r}")


def _require_correlated(params: DerivedParams, what: str) -> float:
    if params.independent:
        raise DomainError(f"{what} needs correlated-mode parameters (rho > 0)")
    if params.a <= 1.0:
        raise DegenerateGeometryError(
            f"{what} is undefined for fully correlated channels (a = 1); "
            "model them as a single branch with scaled power")
    return params.a


def _sc_z(q: OutageQuery, sigma_g: float) -> float:
    # Validity region of the SC form: ln sqrt(Er/gamma_th) > sigma_G^2.
    z = 0.5 * math.log(q.er / q.gamma_th) - sigma_g ** 2
    if z <= 0.0:
        min_er = q.gamma_th * math.exp(2.0 * sigma_g ** 2)
        raise BelowAsymptoticRegimeError(
            f"below the SC asymptotic regime: need Er > {min_er:.6g} W", min_er)
    return z


def _sc_ln(params: DerivedParams, q: OutageQuery) -> float:
    a, L, sg = params.a, params.L, params.sigma_G
    z = _sc_z(q, sg)
    a2 = a * a + L - 1.0
    ln_p = (-log_det_mixing(a, L)
            - 0.5 * L * _LN_2PI
            + 0.5 * L * math.log(sg * sg / a2)
            + L * (2.0 * math.log(a + L - 1.0) - math.log(z))
            - (L * a2 / (2.0 * sg * sg)) * (z / (a + L - 1.0)) ** 2)
    return ln_p


def _sc_indep_ln(L: int, sigma_g: float, q: OutageQuery) -> float:
    z = _sc_z(q, sigma_g)
    return (L * (math.log(sigma_g) - math.log(z))
            - 0.5 * L * _LN_2PI
            - (L / (2.0 * sigma_g ** 2)) * z * z)


def sc_outage_asym(params: DerivedParams, q: OutageQuery) -> float:
    """High-SNR SC outage over correlated branches; dispatches to the
    independent closed form when params are in independent mode.

    The value is the approximation exactly as derived (no re-simplification
    of its higher-order terms); immediately above the validity threshold it
    can exceed 1 and is not yet a meaningful probability there.
    """
    if params.independent:
        return sc_outage_asym_indep(params.L, params.sigma_G, q)
    _require_correlated(params, "SC asymptotic outage")
    return math.exp(_sc_ln(params, q))


def sc_outage_asym_log10(params: DerivedParams, q: OutageQuery) -> float:
    if params.independent:
        return _sc_indep_ln(params.L, params.sigma_G, q) / _LN10
    _require_correlated(params, "SC asymptotic outage")
    return _sc_ln(params, q) / _LN10


def sc_outage_asym_indep(L: int, sigma_G: float, q: OutageQuery) -> float:
    """Independent-channel specialization of the SC form: the L-th power of
    the one-branch Gaussian tail approximation."""
    return math.exp(_sc_indep_ln(L, sigma_G, q))


def sc_outage_asym_latent(a: float, L: int, mu_X: float, sigma_X: float,
                          gamma_th: float) -> float:
    """The same SC approximation parameterized by the latent mean/std
    instead of (Er, sigma_G); kept as an independent evaluation path so the
    two printed forms can be checked against each other."""
    if a <= 1.0:
        raise DegenerateGeometryError("latent SC form requires a > 1")
    x_nst = 0.5 * math.log(gamma_th) / (a + L - 1.0)
    if mu_X <= x_nst:
        raise DomainError(
            f"latent SC form needs mu_X > {x_nst:.6g} (the nearest-point coordinate)")
    ln_p = (-log_det_mixing(a, L)
            - 0.5 * L * (_LN_2PI + 2.0 * math.log(sigma_X))
            + L * math.log(sigma_X * sigma_X * (a + L - 1.0) / (mu_X - x_nst))
            - (L / (2.0 * sigma_X ** 2)) * (x_nst - mu_X) ** 2)
    return math.exp(ln_p)


def _egc_args(params: DerivedParams, q: OutageQuery) -> tuple[float, float]:
    a, L, sg = params.a, params.L, params.sigma_G
    nu = sg / math.sqrt(a * a + L - 1.0)
    h = (L - 1.0 + a) / (1.0 - a) ** 2
    z_e = 0.5 * math.log(L * q.er / q.gamma_th) - sg ** 2
    first = math.sqrt(L) * (z_e / (a + L - 1.0) + h) / nu
    second = math.sqrt(L) * h / nu
    if first <= 0.0:
        min_er = (q.gamma_th / L) * math.exp(2.0 * sg ** 2 - 2.0 * h * (a + L - 1.0))
        raise BelowAsymptoticRegimeError(
            f"below the EGC asymptotic regime: need Er > {min_er:.6g} W", min_er)
    return first, second


def _egc_indep_args(L: int, sigma_G: float, q: OutageQuery) -> tuple[float, float]:
    z_e = 0.5 * math.log(L * q.er / q.gamma_th) - sigma_G ** 2
    first = math.sqrt(L) / sigma_G * (z_e + 1.0)
    if first <= 0.0:
        min_er = (q.gamma_th / L) * math.exp(2.0 * sigma_G ** 2 - 2.0)
        raise BelowAsymptoticRegimeError(
            f"below the EGC asymptotic regime: need Er > {min_er:.6g} W", min_er)
    return first, math.sqrt(L) / sigma_G


def egc_outage_asym(params: DerivedParams, q: OutageQuery) -> float:
    """High-SNR EGC outage: lower noncentral chi-squared tail of order L/2."""
    if params.independent:
        return egc_outage_asym_indep(params.L, params.sigma_G, q)
    _require_correlated(params, "EGC asymptotic outage")
    first, second = _egc_args(params, q)
    return math.exp(marcum_q_complement_log(0.5 * params.L, first, second))


def egc_outage_asym_log10(params: DerivedParams, q: OutageQuery) -> float:
    if params.independent:
        first, second = _egc_indep_args(params.L, params.sigma_G, q)
    else:
        _require_correlated(params, "EGC asymptotic outage")
        first, second = _egc_args(params, q)
    return marcum_q_complement_log(0.5 * params.L, first, second) / _LN10


def egc_outage_asym_indep(L: int, sigma_G: float, q: OutageQuery) -> float:
    first, second = _egc_indep_args(L, sigma_G, q)
    return math.exp(marcum_q_complement_log(0.5 * L, first, second))


def _mrc_args(params: DerivedParams, q: OutageQuery) -> tuple[float, float]:
    a, L, sg = params.a, params.L, params.sigma_G
    nu = sg / math.sqrt(a * a + L - 1.0)
    h = (L - 1.0 + a) / (1.0 - a) ** 2
    z_m = math.log(L * q.er / q.gamma_th) - 2.0 * sg ** 2
    first = math.sqrt(L) * (z_m / (a + L - 1.0) + h) / (2.0 * nu)
    second = math.sqrt(L) * h / (2.0 * nu)
    if first <= 0.0:
        min_er = (q.gamma_th / L) * math.exp(2.0 * sg ** 2 - h * (a + L - 1.0))
        raise BelowAsymptoticRegimeError(
            f"below the MRC asymptotic regime: need Er > {min_er:.6g} W", min_er)
    return first, second


def _mrc_indep_args(L: int, sigma_G: float, q: OutageQuery) -> tuple[float, float]:
    z_m = math.log(L * q.er / q.gamma_th) - 2.0 * sigma_G ** 2
    first = math.sqrt(L) / (2.0 * sigma_G) * (z_m + 1.0)
    if first <= 0.0:
        min_er = (q.gamma_th / L) * math.exp(2.0 * sigma_G ** 2 - 1.0)
        raise BelowAsymptoticRegimeError(
            f"below the MRC asymptotic regime: need Er > {min_er:.6g} W", min_er)
    return first, math.sqrt(L) / (2.0 * sigma_G)


def mrc_outage_asym(params: DerivedParams, q: OutageQuery) -> float:
    """High-SNR MRC outage; same noncentral chi-squared structure as EGC
    with the latent scale doubled and the threshold mapped accordingly."""
    if params.independent:
        return mrc_outage_asym_indep(params.L, params.sigma_G, q)
    _require_correlated(params, "MRC asymptotic outage")
    first, second = _mrc_args(params, q)
    return math.exp(marcum_q_complement_log(0.5 * params.L, first, second))


def mrc_outage_asym_log10(params: DerivedParams, q: OutageQuery) -> float:
    if params.independent:
        first, second = _mrc_indep_args(params.L, params.sigma_G, q)
    else:
        _require_correlated(params, "MRC asymptotic outage")
        first, second = _mrc_args(params, q)
    return marcum_q_complement_log(0.5 * params.L, first, second) / _LN10


def mrc_outage_asym_indep(L: int, sigma_G: float, q: OutageQuery) -> float:
    first, second = _mrc_indep_args(L, sigma_G, q)
    return math.exp(marcum_q_complement_log(0.5 * L, first, second))


def _sum_cdf_args(L: int, rho: float, mu_G: float, sigma_G: float,
                  y: float, a_from_rho) -> tuple[float, float]:
    if not (math.isfinite(y) and y > 0.0):
        raise DomainError(f"sum-CDF argument y must be finite and > 0, got {y!r}")
    u = math.log(L) + mu_G - math.log(y)
    if rho == 0.0:
        first = math.sqrt(L) / sigma_G * (u + 1.0)
        second = math.sqrt(L) / sigma_G
        max_y = math.exp(math.log(L) + mu_G + 1.0)
    else:
        a = a_from_rho(rho, L)
        if a <= 1.0:
            raise DegenerateGeometryError("sum-CDF tail form requires rho < 1")
        nu = sigma_G / math.sqrt(a * a + L - 1.0)
        h = (L - 1.0 + a) / (1.0 - a) ** 2
        first = math.sqrt(L) * (u / (a + L - 1.0) + h) / nu
        second = math.sqrt(L) * h / nu
        max_y = math.exp(math.log(L) + mu_G + h * (a + L - 1.0))
    if first <= 0.0:
        raise BelowAsymptoticRegimeError(
            f"sum-CDF tail form is only valid left of y = {max_y:.6g}", max_y)
    return first, second


def sum_lognormal_cdf_asym(L: int, rho: float, mu_G: float, sigma_G: float,
                           y: float) -> float:
    """Left-tail CDF approximation of Y = sum_l exp(G_l) for equally
    correlated exponents; algebraically the EGC outage re-anchored at
    y = sqrt(L * gamma_th)."""
    from .channel import a_from_rho
    first, second = _sum_cdf_args(L, rho, mu_G, sigma_G, y, a_from_rho)
    return math.exp(marcum_q_complement_log(0.5 * L, first, second))


def sum_lognormal_cdf_asym_log10(L: int, rho: float, mu_G: float,
                                 sigma_G: float, y: float) -> float:
    from .channel import a_from_rho
    first, second = _sum_cdf_args(L, rho, mu_G, sigma_G, y, a_from_rho)
    return marcum_q_complement_log(0.5 * L, first, second) / _LN10


@dataclass(frozen=True)
class AsymptoteDecomposition:
    """lg of the SC approximation split as

        lg P = lg(Oc_ln) + term2 + term3

    Oc_ln shifts the curve; Od_ln scales the quadratic drop (it carries the
    lg(e) factor, so term3 = -Od_ln * z^2 is already in decades); term2 is
    the slowly varying -L*lg(z) part, z = ln sqrt(Er/gamma_th) - sigma_G^2.
    """

    Oc_ln: float
    Od_ln: float
    term2: float
    term3: float

    @property
    def lg_outage(self) -> float:
        return math.log10(self.Oc_ln) + self.term2 + self.term3


def sc_asymptote_decomposition(params: DerivedParams, q: OutageQuery) -> AsymptoteDecomposition:
    """Shift/curvature decomposition of the SC approximation."""
    L, sg = params.L, params.sigma_G
    z = _sc_z(q, sg)
    if params.independent:
        oc = math.exp(L * math.log(sg) - 0.5 * L * _LN_2PI)
        od = _LG_E * L / (2.0 * sg * sg)
    else:
        a = _require_correlated(params, "SC asymptote decomposition")
        a2 = a * a + L - 1.0
        oc = math.exp(2.0 * L * math.log(a + L - 1.0) - log_det_mixing(a, L)
                      - 0.5 * L * _LN_2PI + 0.5 * L * math.log(sg * sg / a2))
        od = _LG_E * L * a2 / (2.0 * sg * sg * (a + L - 1.0) ** 2)
    return AsymptoteDecomposition(Oc_ln=oc, Od_ln=od,
                                  term2=-L * math.log10(z), term3=-od * z * z)


def single_branch_outage_exact(mu_G: float, sigma_G: float, gamma_th: float) -> float:
    """Exact outage of one lognormal branch: Pr{exp(2G) < gamma_th}."""
    if not (math.isfinite(gamma_th) and gamma_th > 0.0):
        raise DomainError(f"gamma_th must be finite and > 0, got {gamma_th!r}")
    return gaussian_q((mu_G - 0.5 * math.log(gamma_th)) / sigma_G)


def outage_asym(params: DerivedParams, scheme, q: OutageQuery) -> float:
    """Scheme dispatcher used by sweeps. A single branch (L = 1) short-
    circuits every scheme to the exact lognormal CDF, since all three
    combiners coincide there and the exact form is available."""
    from .schemes import SchemeKind
    if params.L == 1:
        mu_g = 0.5 * math.log(q.er) - params.sigma_G ** 2
        return single_branch_outage_exact(mu_g, params.sigma_G, q.gamma_th)
    if scheme is SchemeKind.SC:
        return sc_outage_asym(params, q)
    if scheme is SchemeKind.EGC:
        return egc_outage_asym(params, q)
    if scheme is SchemeKind.MRC:
        return mrc_outage_asym(params, q)
    raise DomainError(f"unknown scheme {scheme!r}")
