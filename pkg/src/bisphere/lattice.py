"""Representation counts r_k(lambda), lattice sphere enumeration and N(lambda).

``r_k(lam)`` is the number of ``u`` in Z^k with ``|u|^2 = lam``.  The count
that normalizes the l-linear spherical average on Z^d is
``N_l(lam) = r_{l*d}(lam)``; the bilinear case is ``l = 2``.
"""

from __future__ import annotations

import csv
import functools
import io
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import CountOverflowError, DomainError, TableRangeError

__all__ = [
    "RepresentationTable",
    "build_representation_table",
    "get_table",
    "squares_indicator",
    "sphere_points",
    "count_N",
    "regularity_ratio",
]

# float64 shadow of the int64 counts must stay below this to rule out wraparound
_INT64_SAFE = float(2**63 - 2**12)


@dataclass(frozen=True)
class RepresentationTable:
    """Exact counts ``counts[lam] = r_dim(lam)`` for ``0 <= lam <= lambda_max``."""

    dim: int
    lambda_max: int
    counts: np.ndarray

    def __post_init__(self):
        if self.counts.shape != (self.lambda_max + 1,):
            raise ValueError("counts must have length lambda_max + 1")
        self.counts.setflags(write=False)

    def count(self, lam: int) -> int:
        if lam < 0:
            raise DomainError(f"lambda must be nonnegative, got {lam}")
        if lam > self.lambda_max:
            raise TableRangeError(
                f"lambda={lam} beyond table range lambda_max={self.lambda_max} (dim={self.dim})"
            )
        return int(self.counts[lam])

    __getitem__ = count

    def covers(self, lam: int) -> bool:
        return 0 <= lam <= self.lambda_max

    def to_csv(self, path=None) -> str:
        """Write ``lambda,count`` rows; returns the text as well."""
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["lambda", "count"])
        for lam, c in enumerate(self.counts.tolist()):
            writer.writerow([lam, c])
        text = buf.getvalue()
        if path is not None:
            Path(path).write_text(text)
        return text

    @classmethod
    def from_csv(cls, source, dim: int) -> "RepresentationTable":
        """Parse the text written by :meth:`to_csv` (a path or the text itself)."""
        if isinstance(source, Path) or (isinstance(source, str) and "\n" not in source):
            source = Path(source).read_text()
        rows = list(csv.reader(io.StringIO(source)))
        if rows[0] != ["lambda", "count"]:
            raise ValueError(f"unexpected header {rows[0]!r}")
        lams = [int(r[0]) for r in rows[1:]]
        if lams != list(range(len(lams))):
            raise ValueError("lambda column must be 0..lambda_max without gaps")
        counts = np.array([int(r[1]) for r in rows[1:]], dtype=np.int64)
        return cls(dim=dim, lambda_max=len(lams) - 1, counts=counts)


def squares_indicator(lambda_max: int) -> np.ndarray:
    """r_1 on 0..lambda_max: 1 at 0, 2 at positive squares, 0 elsewhere."""
    r1 = np.zeros(lambda_max + 1, dtype=np.int64)
    root = math.isqrt(lambda_max)
    r1[np.arange(1, root + 1) ** 2] = 2
    r1[0] = 1
    return r1


def _convolve_with_squares(prev: np.ndarray, lambda_max: int) -> np.ndarray:
    out = prev.copy()  # u = 0 term
    shadow = prev.astype(np.float64)
    for u in range(1, math.isqrt(lambda_max) + 1):
        s = u * u
        out[s:] += 2 * prev[: lambda_max + 1 - s]
        shadow[s:] += 2.0 * prev[: lambda_max + 1 - s]
    if shadow.max(initial=0.0) >= _INT64_SAFE:
        raise CountOverflowError(
            f"representation count exceeds int64 range (max ~ {shadow.max():.3e})"
        )
    return out


def build_representation_table(k: int, lambda_max: int) -> RepresentationTable:
    """Count lattice points on every sphere |u|^2 = lam in Z^k, lam <= lambda_max.

    Convolves the square indicator r_1 with itself k times.  Each pass only
    touches the ~sqrt(lambda_max) nonzero entries of r_1.
    """
    if k < 1:
        raise DomainError(f"dimension must be >= 1, got {k}")
    if lambda_max < 0:
        raise DomainError(f"lambda_max must be >= 0, got {lambda_max}")
    counts = squares_indicator(lambda_max)
    for _ in range(k - 1):
        counts = _convolve_with_squares(counts, lambda_max)
    return RepresentationTable(dim=k, lambda_max=lambda_max, counts=counts)


@functools.lru_cache(maxsize=64)
def _cached_table(k: int, lambda_max: int) -> RepresentationTable:
    return build_representation_table(k, lambda_max)


def get_table(k: int, lambda_max: int) -> RepresentationTable:
    """Shared immutable table covering at least ``lambda_max``.

    Sizes are rounded up to a power of two so that nearby requests hit the
    same cache entry.
    """
    size = 64
    while size < lambda_max:
        size *= 2
    return _cached_table(k, size)


def _sphere_rec(d: int, lam: int) -> np.ndarray:
    if d == 1:
        if lam == 0:
            return np.zeros((1, 1), dtype=np.int64)
        root = math.isqrt(lam)
        if root * root != lam:
            return np.zeros((0, 1), dtype=np.int64)
        return np.array([[-root], [root]], dtype=np.int64)
    return _sphere_cached(d, lam)


def _stripe(d: int, lam: int, u1: int) -> np.ndarray:
    rest = _sphere_rec(d - 1, lam - u1 * u1)
    head = np.full((rest.shape[0], 1), u1, dtype=np.int64)
    return np.hstack([head, rest])


@functools.lru_cache(maxsize=4096)
def _sphere_cached(d: int, lam: int) -> np.ndarray:
    root = math.isqrt(lam)
    parts = [_stripe(d, lam, u1) for u1 in range(-root, root + 1)]
    out = np.vstack(parts) if parts else np.zeros((0, d), dtype=np.int64)
    out.setflags(write=False)
    return out


def sphere_points(d: int, lam: int, threads: int = 1) -> np.ndarray:
    """All ``u`` in Z^d with ``|u|^2 = lam`` as an ``(r_d(lam), d)`` int array.

    Rows are in lexicographic order.  Enumeration descends one coordinate at
    a time with ``u_i^2`` bounded by the remaining budget, so no empty box
    cells are visited.  With ``threads > 1`` the top coordinate is split into
    stripes that are computed concurrently and concatenated in order.
    """
    if d < 1:
        raise DomainError(f"dimension must be >= 1, got {d}")
    if lam < 0:
        raise DomainError(f"lambda must be nonnegative, got {lam}")
    if d == 1 or threads <= 1:
        return _sphere_rec(d, lam)
    root = math.isqrt(lam)
    with ThreadPoolExecutor(max_workers=threads) as pool:
        parts = list(pool.map(lambda u1: _stripe(d, lam, u1), range(-root, root + 1)))
    return np.vstack(parts) if parts else np.zeros((0, d), dtype=np.int64)


def count_N(d: int, lam: int, l: int = 2, table: RepresentationTable | None = None) -> int:
    """N_l(lam) = r_{l*d}(lam), the size of the l-linear lattice sphere in (Z^d)^l."""
    if d < 1 or l < 1:
        raise DomainError(f"need d >= 1 and l >= 1, got d={d}, l={l}")
    if table is None:
        table = get_table(l * d, max(lam, 0))
    elif table.dim != l * d:
        raise DomainError(f"table has dim {table.dim}, expected l*d = {l * d}")
    return table.count(lam)


def regularity_ratio(d: int, lambdas, l: int = 2, table: RepresentationTable | None = None):
    """Pairs ``(lam, N_l(lam) / lam^(l*d/2 - 1))`` for diagnostic plots.

    Returns an ``(n, 2)`` float array.  Nothing is asserted: the ratio
    fluctuates with the arithmetic of ``lam``.
    """
    exponent = l * d / 2 - 1
    if exponent <= 0:
        raise DomainError(f"l*d/2 - 1 must be positive, got {exponent}")
    lams = np.asarray(list(lambdas), dtype=np.int64)
    if lams.size and lams.min() < 1:
        raise DomainError("regularity ratio needs lambda >= 1")
    if table is None:
        table = get_table(l * d, int(lams.max(initial=0)))
    counts = np.array([count_N(d, int(x), l, table) for x in lams], dtype=np.float64)
    return np.column_stack([lams.astype(np.float64), counts / lams.astype(np.float64) ** exponent])
