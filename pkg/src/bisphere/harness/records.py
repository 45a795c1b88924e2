"""Experiment records, Hölder sweep grids, and log-log exponent fitting."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .. import __version__
from ..errors import DomainError

# RMS of log residuals above which a fitted exponent is flagged
RESIDUAL_THRESHOLD = 0.1


@dataclass(frozen=True)
class LogLogFit:
    slope: float
    intercept: float
    residual: float  # RMS of log-residuals over the points used
    n_used: int
    dropped: tuple[float, ...] = ()
    threshold: float = RESIDUAL_THRESHOLD

    @property
    def flagged(self) -> bool:
        return not self.residual <= self.threshold

    def as_dict(self) -> dict:
        return {
            "slope": self.slope,
            "intercept": self.intercept,
            "residual": self.residual,
            "n_used": self.n_used,
            "dropped": list(self.dropped),
            "flagged": self.flagged,
        }


def fit_loglog(x, y, *, drop_smallest: bool = True, threshold: float = RESIDUAL_THRESHOLD) -> LogLogFit:
    """OLS of log y on log x, optionally dropping the smallest abscissa as transient."""
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    if x.shape != y.shape or x.ndim != 1:
        raise DomainError("x and y must be 1-d arrays of equal length")
    if np.any(x <= 0) or np.any(y <= 0):
        raise DomainError("log-log fit needs positive data")
    order = np.argsort(x, kind="stable")
    x, y = x[order], y[order]
    dropped: tuple[float, ...] = ()
    if drop_smallest and x.size > 2:
        dropped = (float(x[0]),)
        x, y = x[1:], y[1:]
    if x.size < 2:
        raise DomainError("need at least two points to fit an exponent")
    lx, ly = np.log(x), np.log(y)
    slope, intercept = np.polyfit(lx, ly, 1)
    res = ly - (slope * lx + intercept)
    rms = float(np.sqrt(np.mean(res**2)))
    return LogLogFit(float(slope), float(intercept), rms, int(x.size), dropped, threshold)


@dataclass
class ExperimentRecord:
    experiment: str
    params: dict
    measurements: list  # (abscissa, value) pairs
    fit: LogLogFit | None = None
    derived: dict = field(default_factory=dict)
    flags: list = field(default_factory=list)
    provenance: dict = field(default_factory=dict)

    def __post_init__(self):
        self.provenance = {"version": __version__, **self.provenance}
        if self.fit is not None and self.fit.flagged:
            self.flags.append(f"fit residual {self.fit.residual:.3g} above {self.fit.threshold}")

    def validate(self) -> None:
        if not self.measurements:
            raise DomainError(f"record {self.experiment!r} has no measurements")

    @property
    def abscissae(self) -> np.ndarray:
        return np.array([m[0] for m in self.measurements], dtype=np.float64)

    @property
    def values(self) -> np.ndarray:
        return np.array([m[1] for m in self.measurements], dtype=np.float64)

    def as_dict(self) -> dict:
        return {
            "experiment": self.experiment,
            "params": self.params,
            "measurements": [[float(a), float(v)] for a, v in self.measurements],
            "fit": self.fit.as_dict() if self.fit else None,
            "derived": self.derived,
            "flags": list(self.flags),
            "provenance": self.provenance,
        }


def _inv(p: float) -> float:
    return 0.0 if math.isinf(p) else 1.0 / p


@dataclass(frozen=True)
class SweepGrid:
    """Hölder triples (p, q, r), a function family and a size schedule."""

    triples: tuple
    family: str = "box"
    sizes: tuple = (2, 4, 8, 16)

    def __post_init__(self):
        for t in self.triples:
            if len(t) != 3 or any(not (e >= 1) for e in t):
                raise DomainError(f"every exponent must be >= 1: {t}")
        if self.family not in FAMILIES:
            raise DomainError(f"unknown family {self.family!r}; choose from {FAMILIES}")

    @staticmethod
    def violates_necessary(triple) -> bool:
        """1/r > 1/p + 1/q: outside the range any bound can hold."""
        p, q, r = triple
        return _inv(r) > _inv(p) + _inv(q) + 1e-12

    @staticmethod
    def in_claimed_region(triple, d: int) -> bool:
        """1/p + 1/q >= 1/r and r > d/(d-2)."""
        p, q, r = triple
        return not SweepGrid.violates_necessary(triple) and d > 2 and r > d / (d - 2)

    def violations(self) -> list:
        return [t for t in self.triples if self.violates_necessary(t)]


FAMILIES = ("random_sparse", "box", "delta_plus_constant")
