"""Finitely supported functions on Z^d, plus two symbolic infinite-support cases.

``kind`` is one of

* ``"finite"`` -- explicit (points, values);
* ``"constant"`` -- the constant ``scale`` everywhere (g = 1 in the sharpness example);
* ``"box"`` -- ``scale`` times the indicator of [0, side)^d.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field

import numpy as np

from ..errors import DomainError


def _dedupe(points: np.ndarray, values: np.ndarray):
    """Merge repeated points by summing, drop exact zeros, sort lexicographically."""
    if points.shape[0] == 0:
        return points.reshape(0, points.shape[1]).astype(np.int64), values.astype(np.float64)
    uniq, inv = np.unique(points, axis=0, return_inverse=True)
    summed = np.zeros(uniq.shape[0], dtype=np.float64)
    np.add.at(summed, inv.ravel(), values)
    keep = summed != 0
    return uniq[keep].astype(np.int64), summed[keep]


@dataclass(frozen=True, eq=False)
class LatticeFunction:
    dim: int
    points: np.ndarray = field(repr=False)
    values: np.ndarray = field(repr=False)
    kind: str = "finite"
    scale: float = 1.0
    side: int = 0

    # ----------------------------------------------------------- constructors
    @classmethod
    def from_points(cls, points, values, dim: int | None = None) -> "LatticeFunction":
        pts = np.asarray(points, dtype=np.int64)
        if pts.ndim == 1:
            pts = pts.reshape(-1, dim or 1) if pts.size else pts.reshape(0, dim or 1)
        vals = np.broadcast_to(np.asarray(values, dtype=np.float64), (pts.shape[0],))
        pts, vals = _dedupe(pts, vals)
        return cls(dim=dim or pts.shape[1], points=pts, values=vals)

    @classmethod
    def from_dict(cls, mapping: dict, dim: int) -> "LatticeFunction":
        if not mapping:
            return cls.zero(dim)
        pts = np.array([tuple(k) for k in mapping], dtype=np.int64).reshape(-1, dim)
        return cls.from_points(pts, list(mapping.values()), dim)

    @classmethod
    def zero(cls, dim: int) -> "LatticeFunction":
        return cls(dim=dim, points=np.zeros((0, dim), np.int64), values=np.zeros(0))

    @classmethod
    def delta(cls, dim: int, at=None, value: float = 1.0) -> "LatticeFunction":
        at = np.zeros(dim, np.int64) if at is None else np.asarray(at, np.int64)
        return cls.from_points(at.reshape(1, dim), [value], dim)

    @classmethod
    def constant(cls, dim: int, value: float = 1.0) -> "LatticeFunction":
        return cls(dim=dim, points=np.zeros((0, dim), np.int64), values=np.zeros(0), kind="constant", scale=float(value))

    @classmethod
    def box(cls, dim: int, side: int, value: float = 1.0) -> "LatticeFunction":
        if side < 1:
            raise DomainError(f"box side must be >= 1, got {side}")
        return cls(dim=dim, points=np.zeros((0, dim), np.int64), values=np.zeros(0), kind="box", scale=float(value), side=int(side))

    @classmethod
    def random_sparse(cls, dim: int, size: int, radius: int, rng: np.random.Generator, signed: bool = True) -> "LatticeFunction":
        """``size`` random points in [-radius, radius]^dim with N(0,1) (or |N(0,1)|) values."""
        pts = rng.integers(-radius, radius + 1, size=(size, dim))
        vals = rng.standard_normal(size)
        if not signed:
            vals = np.abs(vals)
        return cls.from_points(pts, vals, dim)

    # ------------------------------------------------------------- properties
    @property
    def is_symbolic(self) -> bool:
        return self.kind != "finite"

    def materialize(self) -> "LatticeFunction":
        """Explicit finite form (boxes only; constants have infinite support)."""
        if self.kind == "finite":
            return self
        if self.kind == "box":
            axes = [np.arange(self.side)] * self.dim
            pts = np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1).reshape(-1, self.dim)
            return LatticeFunction.from_points(pts, np.full(pts.shape[0], self.scale), self.dim)
        raise DomainError("a constant function has infinite support")

    def bounds(self) -> tuple[np.ndarray, np.ndarray]:
        """Inclusive bounding box (lo, hi) of the support."""
        if self.kind == "box":
            return np.zeros(self.dim, np.int64), np.full(self.dim, self.side - 1, np.int64)
        if self.kind == "constant":
            raise DomainError("a constant function has unbounded support")
        if self.points.shape[0] == 0:
            raise DomainError("empty support has no bounding box")
        return self.points.min(axis=0), self.points.max(axis=0)

    def __len__(self):
        if self.kind == "box":
            return self.side**self.dim
        if self.kind == "constant":
            raise DomainError("a constant function has infinite support")
        return int(self.points.shape[0])

    def __call__(self, x) -> np.ndarray:
        """Values at integer points ``x`` of shape (m, d) (or a single point)."""
        x = np.asarray(x, dtype=np.int64)
        single = x.ndim == 1
        x = np.atleast_2d(x)
        if self.kind == "constant":
            out = np.full(x.shape[0], self.scale)
        elif self.kind == "box":
            inside = np.all((x >= 0) & (x < self.side), axis=1)
            out = np.where(inside, self.scale, 0.0)
        else:
            out = np.zeros(x.shape[0])
            if self.points.shape[0]:
                lookup = {tuple(p): v for p, v in zip(self.points.tolist(), self.values.tolist())}
                out = np.array([lookup.get(tuple(p), 0.0) for p in x.tolist()])
        return float(out[0]) if single else out

    def as_dict(self) -> dict:
        if self.is_symbolic:
            return self.materialize().as_dict()
        return {tuple(p): v for p, v in zip(self.points.tolist(), self.values.tolist())}

    # ------------------------------------------------------------- transforms
    def scaled(self, c: float) -> "LatticeFunction":
        if self.kind == "finite":
            return LatticeFunction.from_points(self.points, self.values * c, self.dim)
        return LatticeFunction(self.dim, self.points, self.values, self.kind, self.scale * c, self.side)

    def abs(self) -> "LatticeFunction":
        if self.kind == "finite":
            return LatticeFunction(self.dim, self.points, np.abs(self.values))
        return LatticeFunction(self.dim, self.points, self.values, self.kind, abs(self.scale), self.side)

    def shift(self, h) -> "LatticeFunction":
        """Translate: (tau_h f)(x) = f(x - h)."""
        h = np.asarray(h, dtype=np.int64)
        if self.kind == "constant":
            return self
        return LatticeFunction.from_points(self.materialize().points + h, self.materialize().values, self.dim)

    # ------------------------------------------------------------------- I/O
    def to_csv(self) -> str:
        """Rows ``coord_1..coord_d,value``; symbolic kinds are rejected except boxes (materialized)."""
        f = self.materialize()
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow([f"coord_{i + 1}" for i in range(self.dim)] + ["value"])
        for p, v in zip(f.points.tolist(), f.values.tolist()):
            w.writerow(p + [repr(v)])
        return buf.getvalue()

    @classmethod
    def from_csv(cls, text: str) -> "LatticeFunction":
        rows = list(csv.reader(io.StringIO(text)))
        header = rows[0]
        dim = len(header) - 1
        if header[:-1] != [f"coord_{i + 1}" for i in range(dim)] or header[-1] != "value":
            raise ValueError(f"unexpected header {header!r}")
        pts = np.array([[int(c) for c in r[:-1]] for r in rows[1:]], dtype=np.int64).reshape(-1, dim)
        vals = np.array([float(r[-1]) for r in rows[1:]])
        return cls.from_points(pts, vals, dim)

    def to_json(self) -> str:
        doc = {"dim": self.dim, "kind": self.kind}
        if self.kind == "finite":
            doc["points"] = self.points.tolist()
            doc["values"] = self.values.tolist()
        else:
            doc["scale"] = self.scale
            if self.kind == "box":
                doc["side"] = self.side
        return json.dumps(doc, sort_keys=True, separators=(",", ":"))

    @classmethod
    def from_json(cls, text: str) -> "LatticeFunction":
        doc = json.loads(text)
        dim, kind = doc["dim"], doc["kind"]
        if kind == "finite":
            return cls.from_points(np.array(doc["points"], dtype=np.int64).reshape(-1, dim), doc["values"], dim)
        if kind == "constant":
            return cls.constant(dim, doc["scale"])
        if kind == "box":
            return cls.box(dim, doc["side"], doc["scale"])
        raise ValueError(f"unknown kind {kind!r}")

    def equals(self, other: "LatticeFunction", atol: float = 0.0) -> bool:
        if self.kind != other.kind or self.dim != other.dim:
            return False
        if self.is_symbolic:
            return self.side == other.side and abs(self.scale - other.scale) <= atol
        return (
            self.points.shape == other.points.shape
            and np.array_equal(self.points, other.points)
            and np.allclose(self.values, other.values, rtol=0, atol=atol)
        )


def max_abs_difference(f: LatticeFunction, g: LatticeFunction) -> float:
    """sup |f - g| over the union of the two (finite) supports."""
    if f.kind == "constant" and g.kind == "constant":
        return abs(f.scale - g.scale)
    f, g = f.materialize(), g.materialize()
    pts = np.vstack([f.points, g.points])
    if pts.shape[0] == 0:
        return 0.0
    pts = np.unique(pts, axis=0)
    return float(np.abs(f(pts) - g(pts)).max())
