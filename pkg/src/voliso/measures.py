"""Exact and Monte Carlo measures: volume, surface area, shadows, Petty.

Exact quantities come from a fan triangulation of the convex hull; Monte
Carlo quantities are seeded, batched, and reported with standard errors.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .bodies import BodyOracle, VPolytope, unit_ball_volume
from .sampling import RunningMean, batch_sizes, rng_from_seed, sphere_points


@dataclass(frozen=True)
class McParams:
    """Sample budget for one Monte Carlo run.

    The same (seed, sample_count) always reproduces the same estimate bit
    for bit; ``batch`` only limits working memory.  Acceptance-grade runs
    use at least 1000 samples.
    """

    sample_count: int
    seed: int = 0
    batch: int = 1 << 16

    def __post_init__(self):
        if self.sample_count < 1:
            raise ValueError("sample_count must be positive")
        if self.batch < 1:
            raise ValueError("batch must be positive")


@dataclass(frozen=True)
class Estimate:
    """Monte Carlo value reported as value +- std_error over ``samples``."""

    value: float
    std_error: float
    samples: int

    def to_dict(self) -> dict:
        return {"value": self.value, "std_error": self.std_error,
                "samples": self.samples}

    def agrees_with(self, other: float, sigmas: float = 3.0) -> bool:
        return abs(self.value - other) <= sigmas * self.std_error


def _triangulated_hull(V: VPolytope):
    from scipy.spatial import ConvexHull

    return ConvexHull(V.vertices, qhull_options="Qt")


def _facet_areas_normals(V: VPolytope):
    """(n-1)-areas and outward unit normals of the triangulated facets."""
    hull = _triangulated_hull(V)
    verts = V.vertices
    n = V.dim
    areas = np.empty(len(hull.simplices))
    fact = math.factorial(n - 1)
    for i, simplex in enumerate(hull.simplices):
        edges = verts[simplex[1:]] - verts[simplex[0]]
        gram = edges @ edges.T
        areas[i] = math.sqrt(max(np.linalg.det(gram), 0.0)) / fact
    normals = hull.equations[:, :-1]
    return areas, normals


def polytope_volume(V: VPolytope) -> float:
    """Exact volume: fan triangulation from the vertex centroid."""
    hull = _triangulated_hull(V)
    verts = V.vertices
    center = verts.mean(axis=0)
    n = V.dim
    total = 0.0
    for simplex in hull.simplices:
        total += abs(np.linalg.det(verts[simplex] - center))
    return float(total) / math.factorial(n)


def surface_area(V: VPolytope) -> float:
    """Exact boundary measure: Gram-determinant areas of facet simplices."""
    areas, _ = _facet_areas_normals(V)
    return float(areas.sum())


def isoperimetric_quotient(V: VPolytope) -> float:
    """surface_area / volume^((n-1)/n)."""
    n = V.dim
    return surface_area(V) / polytope_volume(V) ** ((n - 1.0) / n)


def mc_volume(body: BodyOracle, mc: McParams) -> Estimate:
    """Hit-or-miss volume estimate over the bounding box [-R, R]^n."""
    rng = rng_from_seed(mc.seed)
    n, R = body.dim, body.radius
    box_volume = (2.0 * R) ** n
    hits = 0
    for size in batch_sizes(mc.sample_count, mc.batch):
        pts = rng.uniform(-R, R, size=(size, n))
        hits += int(np.count_nonzero(body.member(pts)))
    p = hits / mc.sample_count
    se = box_volume * math.sqrt(max(p * (1.0 - p), 0.0) / mc.sample_count)
    return Estimate(box_volume * p, se, mc.sample_count)


def projection_area(V: VPolytope, theta, mc: McParams | None = None):
    """(n-1)-volume of the shadow of V on the hyperplane orthogonal to theta.

    Exact for n in {2, 3} (support width / area of the projected hull) and
    returned as a float.  For n >= 4 a hit-or-miss estimate over the
    projected bounding box is returned as an Estimate, which flags the
    fallback; ``mc`` is required then.
    """
    theta = np.asarray(theta, dtype=float)
    theta = theta / np.linalg.norm(theta)
    n = V.dim
    basis = _orthonormal_complement(theta)
    shadow = V.vertices @ basis
    if n == 2:
        return float(shadow.max() - shadow.min())
    if n == 3:
        from scipy.spatial import ConvexHull

        return float(ConvexHull(shadow).volume)
    if mc is None:
        raise ValueError("exact shadows need n in {2, 3}; pass mc for the "
                         "Monte Carlo fallback")
    return _shadow_mc(shadow, mc)


def _orthonormal_complement(theta: np.ndarray) -> np.ndarray:
    """Columns form an orthonormal basis of theta-perp."""
    n = theta.size
    u, s, _ = np.linalg.svd(np.eye(n) - np.outer(theta, theta))
    return u[:, : n - 1]


def _shadow_mc(shadow_vertices: np.ndarray, mc: McParams) -> Estimate:
    """Hit-or-miss volume of conv(shadow_vertices) via LP membership."""
    from scipy.optimize import linprog

    k, d = shadow_vertices.shape
    lo = shadow_vertices.min(axis=0)
    hi = shadow_vertices.max(axis=0)
    box = float(np.prod(hi - lo))
    rng = rng_from_seed(mc.seed)
    hits = 0
    A_eq = np.vstack([shadow_vertices.T, np.ones(k)])
    for size in batch_sizes(mc.sample_count, min(mc.batch, 4096)):
        pts = rng.uniform(lo, hi, size=(size, d))
        for x in pts:
            res = linprog(np.zeros(k), A_eq=A_eq, b_eq=np.append(x, 1.0),
                          bounds=[(0, None)] * k, method="highs")
            hits += res.status == 0
    p = hits / mc.sample_count
    se = box * math.sqrt(max(p * (1.0 - p), 0.0) / mc.sample_count)
    return Estimate(box * p, se, mc.sample_count)


def _shadow_values(V: VPolytope, thetas: np.ndarray) -> np.ndarray:
    """Shadow areas for many directions at once.

    Uses the projection identity for convex polytopes: the shadow along
    theta is half the total facet area weighted by |<facet normal, theta>|.
    Agrees with projection_area to round-off and costs one matmul.
    """
    areas, normals = _facet_areas_normals(V)
    return 0.5 * np.abs(thetas @ normals.T) @ areas


def cauchy_surface_area(V: VPolytope, mc: McParams) -> Estimate:
    """Surface area from the spherical mean of shadow areas.

    |boundary| = (n v_n / v_{n-1}) * mean over uniform theta of |shadow|.
    """
    n = V.dim
    factor = n * unit_ball_volume(n) / unit_ball_volume(n - 1)
    rng = rng_from_seed(mc.seed)
    acc = RunningMean()
    for size in batch_sizes(mc.sample_count, mc.batch):
        thetas = sphere_points(rng, size, n)
        acc.add(_shadow_values(V, thetas))
    return Estimate(factor * acc.mean, factor * acc.std_error, mc.sample_count)


def petty_functional(V: VPolytope, mc: McParams) -> Estimate:
    """Affine-invariant shadow functional.

    Estimates (|C|^{n-1} * mean |shadow|^{-n})^{-1/n} by uniform direction
    sampling; minimized by ellipsoids.  The standard error comes from the
    delta method applied to the inner spherical mean.
    """
    n = V.dim
    vol = polytope_volume(V)
    rng = rng_from_seed(mc.seed)
    acc = RunningMean()
    for size in batch_sizes(mc.sample_count, mc.batch):
        thetas = sphere_points(rng, size, n)
        acc.add(_shadow_values(V, thetas) ** (-float(n)))
    inner = acc.mean
    value = (vol ** (n - 1) * inner) ** (-1.0 / n)
    se = value * acc.std_error / (n * inner)
    return Estimate(value, se, mc.sample_count)
