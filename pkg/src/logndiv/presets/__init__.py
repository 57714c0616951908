"""Shipped figure presets: parameter sets encoded as JSON config files,
turned into curve bundles here."""

from __future__ import annotations

import json
import math
from importlib import resources
from typing import Optional

import numpy as np

from ..asymptotics import OutageQuery, outage_asym, single_branch_outage_exact, sum_lognormal_cdf_asym
from ..baselines import fenton_wilkinson_cdf
from ..channel import ChannelSpec, derive_params
from ..curves import Curve, CurvePoint
from ..errors import BelowAsymptoticRegimeError, DomainError
from ..montecarlo import SimConfig, sweep
from ..oracles import sum2_cdf_quadrature
from ..schemes import SchemeKind

PRESET_NAMES = ("fig4", "fig5", "fig6", "fig7")


def load_preset(name: str) -> dict:
    if name not in PRESET_NAMES:
        raise DomainError(f"unknown preset {name!r}; expected one of {PRESET_NAMES}")
    text = resources.files("logndiv.presets").joinpath(f"{name}.json").read_text()
    return json.loads(text)


def er_grid_from(cfg: dict) -> list[float]:
    """Inclusive dB grid -> watts."""
    start, stop, step = float(cfg["start"]), float(cfg["stop"]), float(cfg["step"])
    if step <= 0.0 or stop < start:
        raise DomainError(f"bad grid {cfg!r}")
    n = int(round((stop - start) / step))
    return [10.0 ** ((start + i * step) / 10.0) for i in range(n + 1)]


def asymptotic_curve(spec: ChannelSpec, scheme: SchemeKind, gamma_th: float,
                     er_grid: list[float], label: Optional[str] = None) -> Curve:
    """Closed-form curve over an Er grid; points below the validity region
    or where the raw approximation exceeds 1 are annotated, not dropped."""
    params = derive_params(spec)
    pts = []
    for er in er_grid:
        note = ""
        outage: Optional[float]
        try:
            outage = outage_asym(params, scheme, OutageQuery(gamma_th, er))
            if outage > 1.0:
                note = f"above_unity;raw={outage:.6e}"
                outage = None
        except BelowAsymptoticRegimeError as exc:
            note = f"below_asymptotic_regime;min_er_db={10.0 * math.log10(exc.min_er_watts):.6f}"
            outage = None
        pts.append(CurvePoint(x=10.0 * math.log10(er), outage=outage, note=note))
    return Curve(label=label or f"{scheme.value}-asym-L{spec.L}-rho{spec.rho:g}",
                 scheme=scheme.value, source="asymptotic", L=spec.L, rho=spec.rho,
                 sigma_G=spec.sigma_G, gamma_th=gamma_th, points=tuple(pts))


def single_branch_curve(sigma_G: float, gamma_th: float, er_grid: list[float]) -> Curve:
    pts = []
    for er in er_grid:
        mu_g = 0.5 * math.log(er) - sigma_G ** 2
        pts.append(CurvePoint(x=10.0 * math.log10(er),
                              outage=single_branch_outage_exact(mu_g, sigma_G, gamma_th)))
    return Curve(label="single-branch-exact", scheme="sc", source="exact", L=1,
                 rho=0.0, sigma_G=sigma_G, gamma_th=gamma_th, points=tuple(pts))


def _y_grid(cfg: dict) -> list[float]:
    n = int(cfg["points"])
    if n < 1:
        raise DomainError("y grid needs at least one point")
    start, stop = float(cfg["start"]), float(cfg["stop"])
    if cfg.get("spacing", "log") == "log":
        if start <= 0.0:
            raise DomainError("log-spaced y grid needs start > 0")
        return list(np.geomspace(start, stop, n))
    return list(np.linspace(start, stop, n))


def sumcdf_curve(L: int, rho: float, mu_G: float, sigma_G: float,
                 y_grid: list[float], method: str, label: Optional[str] = None) -> Curve:
    """Sum-CDF curve by one of: the tail approximation ('asym'), the
    moment-matched lognormal ('fw'), or adaptive quadrature ('quadrature',
    two branches only)."""
    if method == "quadrature" and L != 2:
        raise DomainError("quadrature sum-CDF is implemented for L = 2 only")
    pts = []
    for y in y_grid:
        note = ""
        value: Optional[float]
        if method == "asym":
            try:
                value = sum_lognormal_cdf_asym(L, rho, mu_G, sigma_G, y)
                if value > 1.0:
                    note = f"above_unity;raw={value:.6e}"
                    value = None
            except BelowAsymptoticRegimeError as exc:
                note = "beyond_tail_region"
                value = None
        elif method == "fw":
            value = fenton_wilkinson_cdf(L, rho, mu_G, sigma_G, y)
        elif method == "quadrature":
            value = sum2_cdf_quadrature(mu_G, sigma_G, rho, y)
        else:
            raise DomainError(f"unknown sum-CDF method {method!r}; expected fw/asym/quadrature")
        pts.append(CurvePoint(x=y, outage=value, note=note))
    source = {"asym": "asymptotic", "fw": "baseline", "quadrature": "exact"}[method]
    return Curve(label=label or f"sumcdf-{method}", scheme="egc", source=source,
                 L=L, rho=rho, sigma_G=sigma_G, gamma_th=float("nan"),
                 points=tuple(pts), x_kind="y")


def figure_curves(name: str, samples: Optional[int] = None, seed: int = 1,
                  batch_size: int = 1_000_000) -> tuple[dict, list[Curve]]:
    """Build all curves of a preset. For outage presets, `samples` adds
    simulated curves next to the closed forms."""
    preset = load_preset(name)
    meta = {"preset": name, "description": preset["description"]}
    curves: list[Curve] = []
    if preset["kind"] == "outage":
        gamma_th = float(preset["gamma_th"])
        er_grid = er_grid_from(preset["er_db"])
        meta["gamma_th"] = f"{gamma_th:g}"
        for ch in preset["channels"]:
            spec = ChannelSpec(L=int(ch["L"]), rho=float(ch["rho"]),
                               sigma_G=float(ch["sigma_G"]), Er=1.0)
            for s in preset["schemes"]:
                scheme = SchemeKind.parse(s)
                label = f"{scheme.value}-L{spec.L}-rho{spec.rho:g}-sg{spec.sigma_G:g}"
                curves.append(asymptotic_curve(spec, scheme, gamma_th, er_grid,
                                               label=label + "-asym"))
                if samples:
                    sim = sweep(derive_params(spec), scheme, gamma_th, er_grid,
                                SimConfig(samples, seed, min(batch_size, samples)))
                    curves.append(Curve(label=label + "-sim", scheme=sim.scheme,
                                        source=sim.source, L=sim.L, rho=sim.rho,
                                        sigma_G=sim.sigma_G, gamma_th=sim.gamma_th,
                                        points=sim.points))
        if "baseline_single_branch" in preset:
            curves.append(single_branch_curve(
                float(preset["baseline_single_branch"]["sigma_G"]), gamma_th, er_grid))
        if samples:
            meta["samples"] = str(samples)
            meta["seed"] = str(seed)
    elif preset["kind"] == "sumcdf":
        y_grid = _y_grid(preset["y"])
        for s2 in preset["sigma_sq"]:
            sg = math.sqrt(float(s2))
            for method in preset["methods"]:
                curves.append(sumcdf_curve(
                    int(preset["L"]), float(preset["rho"]), float(preset["mu_G"]), sg,
                    y_grid, method, label=f"sumcdf-{method}-s2_{s2:g}"))
    else:
        raise DomainError(f"unknown preset kind {preset['kind']!r}")
    return meta, curves
