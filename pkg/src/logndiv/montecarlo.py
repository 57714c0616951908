"""Seeded Monte Carlo estimation of exact outage probabilities.

Plain Monte Carlo only: the point of the closed forms elsewhere in this
package is that simulation stops being feasible once outage drops below
~100/samples, and these estimators document that floor rather than fight it
with variance reduction.

Determinism contract: identical (seed, samples, batch_size) give identical
hit counts, independent of how batches are scheduled, because every batch
draws from a substream derived only from (seed, batch index) and results
reduce by addition.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np
from scipy import stats

from .asymptotics import OutageQuery
from .channel import DerivedParams, iter_latent_batches
from .curves import Curve, CurvePoint
from .errors import DomainError
from .schemes import SchemeKind, combiner_snr

_U64 = 0xFFFFFFFFFFFFFFFF


@dataclass(frozen=True)
class SimConfig:
    samples: int
    seed: int
    batch_size: Optional[int] = None   # default: min(10^6, samples)

    def __post_init__(self):
        if not (isinstance(self.samples, (int, np.integer)) and self.samples >= 1000):
            raise DomainError(f"samples must be an integer >= 1000, got {self.samples!r}")
        if self.batch_size is None:
            object.__setattr__(self, "batch_size", min(1_000_000, self.samples))
        if not (isinstance(self.batch_size, (int, np.integer)) and 1 <= self.batch_size <= self.samples):
            raise DomainError("need samples >= batch_size >= 1")


@dataclass(frozen=True)
class SimEstimate:
    """Binomial outage estimate.

    stderr is the normal-approximation binomial standard error. With fewer
    than 30 hits the estimate additionally carries a Clopper-Pearson 95%
    interval; with zero hits it is flagged resolution_exhausted and
    p_upper_95 holds the rule-of-three bound 3/n.
    """

    p_hat: float
    stderr: float
    n: int
    hits: int
    resolution_exhausted: bool = False
    p_upper_95: Optional[float] = None
    ci95: Optional[tuple[float, float]] = None


def _estimate_from_hits(hits: int, n: int) -> SimEstimate:
    p = hits / n
    se = math.sqrt(p * (1.0 - p) / n)
    if hits == 0:
        return SimEstimate(p_hat=0.0, stderr=0.0, n=n, hits=0,
                           resolution_exhausted=True, p_upper_95=3.0 / n,
                           ci95=(0.0, 1.0 - 0.025 ** (1.0 / n)))
    ci = None
    if hits < 30:
        lo = float(stats.beta.ppf(0.025, hits, n - hits + 1))
        hi = float(stats.beta.ppf(0.975, hits + 1, n - hits)) if hits < n else 1.0
        ci = (lo, hi)
    return SimEstimate(p_hat=p, stderr=se, n=n, hits=hits, ci95=ci)


def simulate_outage_multi(params: DerivedParams, schemes: Sequence[SchemeKind],
                          q: OutageQuery, cfg: SimConfig) -> dict[SchemeKind, SimEstimate]:
    """Estimate outage for several schemes from one common gain stream
    (common random numbers), the default for scheme comparisons."""
    hits = {s: 0 for s in schemes}
    for latent in iter_latent_batches(params, cfg.samples, cfg.seed, cfg.batch_size):
        gains = np.exp(latent)
        for s in schemes:
            hits[s] += int(np.count_nonzero(combiner_snr(s, gains) < q.gamma_th))
    return {s: _estimate_from_hits(hits[s], cfg.samples) for s in schemes}


def simulate_outage(params: DerivedParams, scheme: SchemeKind,
                    q: OutageQuery, cfg: SimConfig) -> SimEstimate:
    """Single-scheme outage estimate; same stream as the multi-scheme form,
    so per-seed results are comparable across schemes."""
    return simulate_outage_multi(params, [scheme], q, cfg)[scheme]


def point_seed(seed: int, index: int) -> int:
    """Per-grid-point substream seed, derived by hashing (seed, index) so
    grids can be split or merged without correlation between points."""
    ss = np.random.SeedSequence(entropy=int(seed) & _U64, spawn_key=(0x9E37, int(index)))
    return int(ss.generate_state(1, np.uint64)[0])


def sweep(params: DerivedParams, scheme: SchemeKind, gamma_th: float,
          er_grid: Sequence[float], cfg: SimConfig) -> Curve:
    """Simulate along an Er grid (watts, strictly increasing), one derived
    substream per point. Resolution-exhausted points are annotated, not
    dropped."""
    pts = []
    for i, er in enumerate(er_grid):
        p = params.with_er(er)
        est = simulate_outage(p, scheme, OutageQuery(gamma_th, er),
                              SimConfig(cfg.samples, point_seed(cfg.seed, i), cfg.batch_size))
        note = ""
        if est.resolution_exhausted:
            note = f"resolution_exhausted;p_upper_95={est.p_upper_95:.6e}"
        pts.append(CurvePoint(x=10.0 * math.log10(er), outage=est.p_hat,
                              stderr=est.stderr, n=est.n, hits=est.hits, note=note))
    return Curve(label=f"{scheme.value}-sim", scheme=scheme.value, source="simulation",
                 L=params.L, rho=params.rho, sigma_G=params.sigma_G,
                 gamma_th=gamma_th, points=tuple(pts))
