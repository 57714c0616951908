"""Diversity combining schemes and their instantaneous output SNRs."""

from __future__ import annotations

from enum import Enum

import numpy as np

from .errors import DomainError


class SchemeKind(str, Enum):
    SC = "sc"    # selection combining: best branch
    EGC = "egc"  # equal-gain combining: unit weights
    MRC = "mrc"  # maximum-ratio combining: optimal weights

    @classmethod
    def parse(cls, text: str) -> "SchemeKind":
        try:
            return cls(text.strip().lower())
        except ValueError:
            raise DomainError(f"unknown scheme {text!r}; expected one of sc/egc/mrc") from None


def combiner_snr(scheme: SchemeKind, gains: np.ndarray) -> np.ndarray:
    """Instantaneous output SNR per draw from a (n, L) array of branch
    amplitudes (unit noise covariance):

        SC:  max_l c_l^2        EGC: (sum_l c_l)^2 / L      MRC: sum_l c_l^2
    """
    if scheme is SchemeKind.SC:
        m = gains.max(axis=1)
        return m * m
    if scheme is SchemeKind.EGC:
        s = gains.sum(axis=1)
        return s * s / gains.shape[1]
    if scheme is SchemeKind.MRC:
        return (gains * gains).sum(axis=1)
    raise DomainError(f"unknown scheme {scheme!r}")
