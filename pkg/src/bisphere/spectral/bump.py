"""Smooth cutoffs used for the physical bump Phi and the frequency cutoffs Psi.

The plateau profile equals 1 on |t| <= 1, decays smoothly on 1 < |t| < 2
and vanishes for |t| >= 2.  A cutoff with scale s is t -> plateau(t / s); the
companion with scale 2s equals 1 on the whole support of the first, so the
product of the two is the first one exactly.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


def _psi(x: np.ndarray) -> np.ndarray:
    out = np.zeros_like(x)
    pos = x > 0
    out[pos] = np.exp(-1.0 / x[pos])
    return out


def plateau(t) -> np.ndarray:
    """C-infinity, 1 on |t| <= 1, 0 on |t| >= 2, values in [0, 1]."""
    a = np.abs(np.asarray(t, dtype=np.float64))
    up = _psi(2.0 - a)
    down = _psi(a - 1.0)
    with np.errstate(invalid="ignore"):
        out = up / (up + down)
    out = np.where(a <= 1.0, 1.0, out)
    return np.where(a >= 2.0, 0.0, out)


def classic_bump(t) -> np.ndarray:
    """exp(1 - 1/(1 - t^2)) on |t| < 1, else 0.  Peaks at 1 only at t = 0."""
    t = np.asarray(t, dtype=np.float64)
    out = np.zeros_like(t)
    inside = np.abs(t) < 1
    out[inside] = np.exp(1.0 - 1.0 / (1.0 - t[inside] ** 2))
    return out


@dataclass(frozen=True)
class Cutoff:
    """Tensor-product plateau cutoff x -> prod_i plateau(x_i / scale)."""

    scale: float = 1.0

    @property
    def plateau_radius(self) -> float:
        return self.scale

    @property
    def support_radius(self) -> float:
        return 2.0 * self.scale

    def __call__(self, t) -> np.ndarray:
        return plateau(np.asarray(t, dtype=np.float64) / self.scale)

    def tensor(self, x) -> np.ndarray:
        """Product over the last axis of ``x``."""
        return np.prod(self(x), axis=-1)

    def companion(self) -> "Cutoff":
        """The cutoff Psi' with Psi' * Psi = Psi."""
        return Cutoff(2.0 * self.scale)

    def integral(self) -> float:
        """Integral of the 1-d profile over R (= 3 * scale by symmetry of the transition)."""
        return 3.0 * self.scale
