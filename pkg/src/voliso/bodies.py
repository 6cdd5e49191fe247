"""Convex body representations and conversions.

Bodies live in R^n with n between 2 and 6 for the polytope types.  An
HPolytope is an intersection of half-spaces with unit outward normals and
strictly positive offsets (the origin is interior); a VPolytope is the convex
hull of an irredundant vertex list; an Ellipsoid is the image of the unit
ball under ``y -> B y + d`` with ``B`` symmetric positive definite.

All types are immutable values and all operations are pure functions.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import linprog
from scipy.spatial import ConvexHull, HalfspaceIntersection, QhullError

from .errors import DegenerateBodyError, UnboundedBodyError

MAX_EXACT_DIM = 6

_SYM_TOL = 1e-12


def _readonly(a):
    a = np.ascontiguousarray(np.asarray(a, dtype=float))
    a.flags.writeable = False
    return a


def unit_ball_volume(n: int) -> float:
    """Volume of the Euclidean unit ball in R^n, pi^(n/2) / Gamma(1 + n/2)."""
    if n < 1:
        raise ValueError("dimension must be >= 1")
    return math.exp(0.5 * n * math.log(math.pi) - math.lgamma(1.0 + 0.5 * n))


def chebyshev_center(normals, offsets):
    """Largest-ball center and radius for {x : <a_i, x> <= b_i}, unit a_i.

    Returns (center, radius).  Raises DegenerateBodyError when no ball of
    positive radius fits.
    """
    A = np.asarray(normals, dtype=float)
    b = np.asarray(offsets, dtype=float)
    m, n = A.shape
    c = np.zeros(n + 1)
    c[-1] = -1.0
    res = linprog(c, A_ub=np.hstack([A, np.ones((m, 1))]), b_ub=b,
                  bounds=[(None, None)] * n + [(0, None)], method="highs")
    if res.status == 3:
        raise UnboundedBodyError("unbounded body: contains arbitrarily large balls")
    if res.status != 0 or res.x[-1] <= 0:
        raise DegenerateBodyError("no interior ball of positive radius")
    return res.x[:n], float(res.x[-1])


def _check_bounded(normals):
    """Boundedness of {Ax <= b} with b > 0 and unit rows of A.

    Bounded iff the normals positively span R^n, i.e. rank(A) = n and the
    recession cone {w : Aw <= 0} is trivial.  The cone test is one LP:
    maximize sum(xi) over |w|_inf <= 1, 0 <= xi <= 1, Aw + xi <= 0.
    """
    A = np.asarray(normals, dtype=float)
    m, n = A.shape
    if np.linalg.matrix_rank(A, tol=1e-10) < n:
        return False
    c = np.concatenate([np.zeros(n), -np.ones(m)])
    A_ub = np.hstack([A, np.eye(m)])
    bounds = [(-1, 1)] * n + [(0, 1)] * m
    res = linprog(c, A_ub=A_ub, b_ub=np.zeros(m), bounds=bounds, method="highs")
    return res.status == 0 and -res.fun <= 1e-9


@dataclass(frozen=True, eq=False)
class HPolytope:
    """Bounded intersection {x : <a_i, x> <= b_i} with unit normals a_i.

    Rows are normalized on construction, so ``offsets[i]`` is the Euclidean
    distance from the origin to facet plane i.  The origin must be interior
    (all offsets positive) and the body bounded.  Pass ``validate=False``
    only when boundedness is guaranteed by construction.
    """

    normals: np.ndarray
    offsets: np.ndarray

    def __init__(self, normals, offsets, validate: bool = True):
        A = np.atleast_2d(np.asarray(normals, dtype=float))
        b = np.asarray(offsets, dtype=float).ravel()
        if A.ndim != 2 or A.shape[0] != b.shape[0]:
            raise ValueError("normals and offsets shapes do not match")
        if A.shape[1] < 2:
            raise ValueError("dimension must be >= 2")
        norms = np.linalg.norm(A, axis=1)
        if np.any(norms < 1e-300):
            raise ValueError("zero normal vector")
        A = A / norms[:, None]
        b = b / norms
        if np.any(b <= 0):
            raise DegenerateBodyError("origin is not interior (offset <= 0)")
        if validate and not _check_bounded(A):
            raise UnboundedBodyError("unbounded body: normals do not positively span R^n")
        object.__setattr__(self, "normals", _readonly(A))
        object.__setattr__(self, "offsets", _readonly(b))

    @property
    def dim(self) -> int:
        return self.normals.shape[1]

    @property
    def num_facets(self) -> int:
        return self.normals.shape[0]

    def contains(self, points, tol: float = 1e-9):
        """Boolean membership for one point or an array of row points."""
        pts = np.atleast_2d(np.asarray(points, dtype=float))
        inside = np.all(pts @ self.normals.T <= self.offsets + tol, axis=1)
        return inside if np.asarray(points).ndim > 1 else bool(inside[0])

    def slacks(self, point):
        """Per-facet slack b_i - <a_i, x>; negative entries mean violation."""
        return self.offsets - self.normals @ np.asarray(point, dtype=float)


@dataclass(frozen=True, eq=False)
class VPolytope:
    """Convex hull of a vertex list, canonicalized to extreme points.

    The hull must be full-dimensional.  Vertices are reduced to the extreme
    points and sorted lexicographically, so equal bodies compare equal.
    """

    vertices: np.ndarray

    def __init__(self, vertices, canonicalize: bool = True):
        V = np.atleast_2d(np.asarray(vertices, dtype=float))
        if V.shape[1] < 2:
            raise ValueError("dimension must be >= 2")
        if V.shape[0] < V.shape[1] + 1:
            raise DegenerateBodyError("too few vertices for a full-dimensional body")
        if canonicalize:
            try:
                hull = ConvexHull(V)
            except QhullError as exc:
                raise DegenerateBodyError(f"vertex set is not full-dimensional: {exc}") from exc
            V = V[hull.vertices]
            V = V[np.lexsort(V.T[::-1])]
        object.__setattr__(self, "vertices", _readonly(V))

    @property
    def dim(self) -> int:
        return self.vertices.shape[1]

    @property
    def num_vertices(self) -> int:
        return self.vertices.shape[0]

    def contains(self, points, tol: float = 1e-9):
        return hrep_from_vrep(self).contains(points, tol=tol)


@dataclass(frozen=True, eq=False)
class Ellipsoid:
    """Image {B y + d : |y| <= 1} of the unit ball; B symmetric PD."""

    shape: np.ndarray
    center: np.ndarray

    def __init__(self, shape, center=None):
        B = np.atleast_2d(np.asarray(shape, dtype=float))
        n = B.shape[0]
        if B.shape != (n, n):
            raise ValueError("shape matrix must be square")
        if np.max(np.abs(B - B.T)) > _SYM_TOL * max(1.0, np.max(np.abs(B))):
            raise ValueError("shape matrix must be symmetric")
        B = 0.5 * (B + B.T)
        if np.linalg.eigvalsh(B)[0] <= 0:
            raise ValueError("shape matrix must be positive definite")
        d = np.zeros(n) if center is None else np.asarray(center, dtype=float)
        if d.shape != (n,):
            raise ValueError("center has wrong dimension")
        object.__setattr__(self, "shape", _readonly(B))
        object.__setattr__(self, "center", _readonly(d))

    @classmethod
    def unit_ball(cls, n: int) -> "Ellipsoid":
        return cls(np.eye(n))

    @property
    def dim(self) -> int:
        return self.shape.shape[0]

    @property
    def volume(self) -> float:
        return unit_ball_volume(self.dim) * float(np.linalg.det(self.shape))

    def contains(self, points, tol: float = 1e-9):
        pts = np.atleast_2d(np.asarray(points, dtype=float))
        y = np.linalg.solve(self.shape, (pts - self.center).T).T
        inside = np.linalg.norm(y, axis=1) <= 1 + tol
        return inside if np.asarray(points).ndim > 1 else bool(inside[0])

    def as_map(self) -> "AffineMap":
        """The map y -> B y + d sending the unit ball onto this ellipsoid."""
        return AffineMap(self.shape, self.center)


@dataclass(frozen=True, eq=False)
class AffineMap:
    """Invertible map x -> L x + t."""

    linear: np.ndarray
    shift: np.ndarray

    def __init__(self, linear, shift=None):
        L = np.atleast_2d(np.asarray(linear, dtype=float))
        n = L.shape[0]
        if L.shape != (n, n):
            raise ValueError("linear part must be square")
        if abs(np.linalg.det(L)) < 1e-300:
            raise ValueError("linear part is singular")
        t = np.zeros(n) if shift is None else np.asarray(shift, dtype=float)
        if t.shape != (n,):
            raise ValueError("shift has wrong dimension")
        object.__setattr__(self, "linear", _readonly(L))
        object.__setattr__(self, "shift", _readonly(t))

    @classmethod
    def identity(cls, n: int) -> "AffineMap":
        return cls(np.eye(n))

    @property
    def dim(self) -> int:
        return self.linear.shape[0]

    def __call__(self, points):
        pts = np.asarray(points, dtype=float)
        return pts @ self.linear.T + self.shift

    def compose(self, other: "AffineMap") -> "AffineMap":
        """self after other: x -> self(other(x))."""
        return AffineMap(self.linear @ other.linear,
                         self.linear @ other.shift + self.shift)

    def inverse(self) -> "AffineMap":
        Linv = np.linalg.inv(self.linear)
        return AffineMap(Linv, -Linv @ self.shift)


@dataclass(frozen=True, eq=False)
class BodyOracle:
    """Black-box convex body: membership test plus a bounding radius.

    ``member`` maps an array of row points to booleans; the body must be
    contained in ``radius`` times the unit ball.  ``gauge`` (optional) is the
    Minkowski functional of the body: gauge(x) <= 1 iff x is a member.
    """

    dim: int
    member: object
    radius: float
    gauge: object = None

    @classmethod
    def from_hpolytope(cls, P: HPolytope) -> "BodyOracle":
        lo, hi = bounding_box(P)
        radius = float(np.linalg.norm(np.maximum(np.abs(lo), np.abs(hi))))

        def gauge(points):
            pts = np.atleast_2d(np.asarray(points, dtype=float))
            return np.max((pts @ P.normals.T) / P.offsets, axis=1)

        return cls(dim=P.dim, member=lambda pts: P.contains(pts),
                   radius=radius, gauge=gauge)

    @classmethod
    def from_gauge(cls, dim: int, gauge, radius: float) -> "BodyOracle":
        def member(points):
            pts = np.atleast_2d(np.asarray(points, dtype=float))
            return np.asarray(gauge(pts)) <= 1.0

        return cls(dim=dim, member=member, radius=float(radius), gauge=gauge)

    @classmethod
    def euclidean_ball(cls, n: int, radius: float = 1.0) -> "BodyOracle":
        r = float(radius)
        return cls.from_gauge(n, lambda pts: np.linalg.norm(
            np.atleast_2d(pts), axis=1) / r, r)


def bounding_box(P: HPolytope):
    """Tight axis-aligned bounding box of an HPolytope via 2n support LPs."""
    n = P.dim
    lo = np.empty(n)
    hi = np.empty(n)
    for k in range(n):
        c = np.zeros(n)
        for sign, out in ((1.0, lo), (-1.0, hi)):
            c[k] = sign
            res = linprog(c, A_ub=P.normals, b_ub=P.offsets,
                          bounds=[(None, None)] * n, method="highs")
            if res.status != 0:
                raise UnboundedBodyError("unbounded body: support function unbounded")
            out[k] = sign * res.fun
        c[k] = 0.0
    return lo, hi


def apply_affine(body, T: AffineMap):
    """Exact image of a polytope under an invertible affine map.

    For an HPolytope the normals are re-normalized to unit length with the
    offsets rescaled accordingly; the image must still contain the origin.
    """
    if isinstance(body, VPolytope):
        return VPolytope(T(body.vertices))
    if isinstance(body, HPolytope):
        # <a, x> <= b maps to <L^-T a, y> <= b + <L^-T a, t>
        Minv_t = np.linalg.inv(T.linear).T
        new_normals = body.normals @ Minv_t.T
        new_offsets = body.offsets + new_normals @ T.shift
        return HPolytope(new_normals, new_offsets, validate=False)
    raise TypeError(f"cannot apply affine map to {type(body).__name__}")


def vrep_from_hrep(P: HPolytope, dedupe_tol: float = 1e-9) -> VPolytope:
    """Enumerate the vertices of a bounded H-polytope (dimension <= 6)."""
    if P.dim > MAX_EXACT_DIM:
        raise ValueError(f"vertex enumeration limited to dimension {MAX_EXACT_DIM}")
    center, radius = chebyshev_center(P.normals, P.offsets)
    halfspaces = np.hstack([P.normals, -P.offsets[:, None]])
    try:
        hs = HalfspaceIntersection(halfspaces, center)
    except QhullError as exc:
        raise DegenerateBodyError(f"vertex enumeration failed: {exc}") from exc
    pts = hs.intersections
    decimals = max(0, int(-math.log10(dedupe_tol)))
    pts = np.unique(np.round(pts, decimals), axis=0)
    return VPolytope(pts)


def hrep_from_vrep(V: VPolytope, dedupe_tol: float = 1e-9) -> HPolytope:
    """Facet description of the hull of a vertex list (origin must be interior)."""
    if V.dim > MAX_EXACT_DIM:
        raise ValueError(f"facet enumeration limited to dimension {MAX_EXACT_DIM}")
    try:
        hull = ConvexHull(V.vertices)
    except QhullError as exc:
        raise DegenerateBodyError(f"facet enumeration failed: {exc}") from exc
    # qhull rows are [unit normal, offset] with normal.x + offset <= 0 inside
    decimals = max(0, int(-math.log10(dedupe_tol)))
    eqs = np.unique(np.round(hull.equations, decimals), axis=0)
    return HPolytope(eqs[:, :-1], -eqs[:, -1], validate=False)


def polytope_to_dict(body) -> dict:
    """File-format dictionary {"dim", "kind", "rows"} for either representation."""
    if isinstance(body, HPolytope):
        rows = np.hstack([body.normals, body.offsets[:, None]])
        return {"dim": body.dim, "kind": "H", "rows": rows.tolist()}
    if isinstance(body, VPolytope):
        return {"dim": body.dim, "kind": "V", "rows": body.vertices.tolist()}
    raise TypeError(f"not a polytope: {type(body).__name__}")


def polytope_from_dict(data: dict):
    kind = data.get("kind")
    n = int(data.get("dim", 0))
    rows = np.asarray(data.get("rows", []), dtype=float)
    if kind == "H":
        if rows.ndim != 2 or rows.shape[1] != n + 1:
            raise ValueError("H rows must be [a_1..a_n, b]")
        return HPolytope(rows[:, :-1], rows[:, -1])
    if kind == "V":
        if rows.ndim != 2 or rows.shape[1] != n:
            raise ValueError("V rows must be vertex coordinates")
        return VPolytope(rows)
    raise ValueError(f"unknown polytope kind {kind!r}")


def write_polytope(path, body) -> None:
    """Serialize to the JSON polytope file format (round-trip exact reals)."""
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(polytope_to_dict(body), fh, indent=2, sort_keys=True)
        fh.write("\n")


def read_polytope(path):
    with open(path, "r", encoding="utf-8") as fh:
        return polytope_from_dict(json.load(fh))
