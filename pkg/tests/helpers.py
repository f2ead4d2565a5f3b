"""Shared independent oracles for the test suite.

The interference-field oracle estimates Laplace functionals by realizing
Poisson fields directly: conditional on interferer positions, averaging
the Rayleigh fading analytically turns E[exp(-s I)] into the product of
1/(1 + c x^-alpha) over interferers, which is what gets sampled here.
Interference beyond the simulated radius is restored with the first-order
power-law tail correction (independent of the package's quadrature
kernel); its second-order error is negligible at the radii used.
"""

from __future__ import annotations

import math
from itertools import combinations
from typing import Tuple

import numpy as np


def sample_nearest_distance(rng: np.random.Generator, lam: float, n: int) -> np.ndarray:
    """Exact nearest-neighbour distances: pi*lam*r^2 ~ Exp(1)."""
    return np.sqrt(rng.exponential(size=n) / (math.pi * lam))


def sample_second_nearest_distance(rng: np.random.Generator, lam: float, n: int) -> np.ndarray:
    """Exact second-nearest distances: pi*lam*d^2 ~ Gamma(2, 1)."""
    return np.sqrt(rng.gamma(2.0, size=n) / (math.pi * lam))


def field_log_products(
    rng: np.random.Generator,
    density: float,
    exclusion: np.ndarray,
    c: np.ndarray,
    alpha: float,
    r_max: float = 600.0,
    chunk_points: int = 4_000_000,
) -> np.ndarray:
    """Per-realization log of prod_i 1/(1 + c * x_i^-alpha) over a PPP of the
    given density on the annulus [exclusion_k, r_max], plus the analytic
    far-field correction for interferers beyond r_max.  Processes
    realizations in blocks to bound memory."""
    n = len(c)
    c = np.asarray(c, dtype=float)
    exclusion = np.broadcast_to(np.asarray(exclusion, dtype=float), (n,))
    mean_count = density * math.pi * r_max**2
    block = max(1, int(chunk_points / max(mean_count, 1.0)))
    logs = np.empty(n)
    for lo in range(0, n, block):
        hi = min(lo + block, n)
        exc2 = exclusion[lo:hi] ** 2
        area = math.pi * np.maximum(r_max**2 - exc2, 0.0)
        counts = rng.poisson(density * area)
        total = int(counts.sum())
        u = rng.uniform(size=total)
        exc2_rep = np.repeat(exc2, counts)
        x2 = exc2_rep + u * (r_max**2 - exc2_rep)
        c_rep = np.repeat(c[lo:hi], counts)
        terms = -np.log1p(c_rep * x2 ** (-alpha / 2.0))
        seg = np.repeat(np.arange(hi - lo), counts)
        logs[lo:hi] = np.bincount(seg, weights=terms, minlength=hi - lo)
    # first-order tail: -2*pi*density * c * r_max^(2-alpha) / (alpha - 2)
    logs -= 2.0 * math.pi * density * c * r_max ** (2.0 - alpha) / (alpha - 2.0)
    return logs


def mc_mean_and_se(values: np.ndarray) -> Tuple[float, float]:
    return float(values.mean()), float(values.std(ddof=1) / math.sqrt(len(values)))


def brute_force_delaunay_edges(points: np.ndarray) -> set:
    """Delaunay edges by the empty-circumcircle test: an edge belongs to the
    triangulation iff some triangle containing it has an empty circumcircle.
    O(n^4); for small point sets only."""
    n = len(points)
    edges = set()
    for i, j, k in combinations(range(n), 3):
        centre, radius = _circumcircle(points[i], points[j], points[k])
        if centre is None:
            continue
        d2 = np.sum((points - centre) ** 2, axis=1)
        inside = d2 < radius**2 - 1e-9 * radius**2
        inside[[i, j, k]] = False
        if not inside.any():
            edges.update({(min(a, b), max(a, b)) for a, b in ((i, j), (j, k), (i, k))})
    return edges


def _circumcircle(a, b, c):
    ax, ay = a
    bx, by = b
    cx, cy = c
    d = 2.0 * (ax * (by - cy) + bx * (cy - ay) + cx * (ay - by))
    if abs(d) < 1e-14:
        return None, None
    ux = ((ax**2 + ay**2) * (by - cy) + (bx**2 + by**2) * (cy - ay) + (cx**2 + cy**2) * (ay - by)) / d
    uy = ((ax**2 + ay**2) * (cx - bx) + (bx**2 + by**2) * (ax - cx) + (cx**2 + cy**2) * (bx - ax)) / d
    centre = np.array([ux, uy])
    return centre, float(np.linalg.norm(centre - a))
