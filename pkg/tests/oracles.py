"""Brute-force reference computations shared by the test modules.

Nothing here imports the code under test except for type-free plumbing, so
each oracle is an independent route to the quantity it checks.
"""

from __future__ import annotations

import cmath
import itertools
import math

import numpy as np


def box_norm_histogram(k: int, lambda_max: int) -> np.ndarray:
    """#{u in Z^k : |u|^2 = lam} by scanning the full box |u_i| <= sqrt(lambda_max)."""
    root = math.isqrt(lambda_max)
    axis = np.arange(-root, root + 1, dtype=np.int64) ** 2
    norms = np.zeros(1, dtype=np.int64)
    for _ in range(k):
        norms = (norms[:, None] + axis[None, :]).ravel()
        norms = norms[norms <= lambda_max]
    return np.bincount(norms, minlength=lambda_max + 1)[: lambda_max + 1]


def split_norm_histogram(k: int, lambda_max: int) -> np.ndarray:
    """Same count for larger k: enumerate two half-dimensional boxes and pair them."""
    k1 = k // 2
    h1 = box_norm_histogram(k1, lambda_max)
    h2 = box_norm_histogram(k - k1, lambda_max)
    out = np.zeros(lambda_max + 1, dtype=np.int64)
    for m in range(lambda_max + 1):
        out[m] = int(np.dot(h1[: m + 1], h2[m::-1]))
    return out


def brute_sphere(d: int, lam: int) -> list[tuple[int, ...]]:
    root = math.isqrt(lam)
    rng = range(-root, root + 1)
    return sorted(p for p in itertools.product(rng, repeat=d) if sum(x * x for x in p) == lam)


def e(x: float) -> complex:
    return cmath.exp(2j * math.pi * x)


def brute_sigma_hat(d: int, lam: int, xi) -> complex:
    """(1/N) sum over (u, v) in Z^d x Z^d with |u|^2+|v|^2 = lam of e(u.xi)."""
    pts = brute_sphere(2 * d, lam)
    total = sum(e(sum(p[i] * xi[i] for i in range(d))) for p in pts)
    return total / len(pts)


def euler_phi(n: int) -> int:
    return sum(1 for a in range(1, n + 1) if math.gcd(a, n) == 1)


def brute_multilinear(fs: list[dict], lam: int, d: int, consts: list[float] | None = None) -> dict:
    """T_lam by summing over every (u_1..u_l) on the sphere of Z^{l d}, dict in / dict out.

    ``fs`` are finite slots given as {point: value}; ``consts`` lists the
    values of extra constant slots (appended after the finite ones).
    """
    consts = consts or []
    l = len(fs) + len(consts)
    pts = brute_sphere(l * d, lam)
    out: dict = {}
    if not fs:
        return {"const": float(np.prod(consts)) if consts else 1.0}
    for p in pts:
        us = [p[i * d : (i + 1) * d] for i in range(l)]
        # x - u_0 must be a support point of f_0
        for s0, v0 in fs[0].items():
            x = tuple(s + u for s, u in zip(s0, us[0]))
            val = v0
            for f, u in zip(fs[1:], us[1 : len(fs)]):
                val *= f.get(tuple(xi - ui for xi, ui in zip(x, u)), 0.0)
                if val == 0:
                    break
            for c in consts:
                val *= c
            if val:
                out[x] = out.get(x, 0.0) + val
    n = len(pts)
    return {x: v / n for x, v in out.items() if v != 0}


def bump_ft_fft(profile, N: float, eta: np.ndarray, half_width: float = 2.0, n: int = 1 << 16) -> np.ndarray:
    """N * phi_hat(N eta) via a zero-padded FFT of samples of phi on [-half_width, half_width]."""
    L = 8 * half_width
    t = (np.arange(n) - n // 2) * (L / n)
    samples = profile(t)
    spectrum = np.fft.fftshift(np.fft.fft(np.fft.ifftshift(samples))) * (L / n)
    freqs = np.fft.fftshift(np.fft.fftfreq(n, d=L / n))
    re = np.interp(N * eta, freqs, spectrum.real)
    im = np.interp(N * eta, freqs, spectrum.imag)
    return N * (re + 1j * im)
