"""Volumes and volume ratios of l_p balls and subspaces of l_p^m.

The unit-ball volume of (R^n, ||.||) obeys the gauge-integral identity

    |K| = Gamma(1 + n/p)^{-1} * integral of e^{-||x||^p} over R^n

for any Minkowski gauge and any finite p >= 1, which turns volume
estimation into importance sampling.  Weighted gauges built on an identity
decomposition obey the product volume bound (Brascamp-Lieb applied to the
gauge integral), with equality exactly for the coordinate l_p^n ball.  A
fixed-point Lewis-position solver represents any n-dimensional subspace of
l_p^m with the decomposition weights matching the norm weights, which makes
l_p^n the maximal-volume-ratio subspace of L_p.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .bodies import BodyOracle
from .brascamp_lieb import BLSystem, verify_decomposition
from .errors import GaugeError, SolverError
from .measures import Estimate, McParams
from .sampling import (StudentTProposal, RunningMean, batch_sizes,
                       rng_from_seed, sphere_points)

L1_VR_LIMIT = math.sqrt(2.0 * math.e / math.pi)


def lp_ball_volume(n: int, p: float) -> float:
    """Volume of the l_p unit ball, 2^n Gamma(1+1/p)^n / Gamma(1+n/p).

    p = inf gives the cube volume 2^n.  Evaluated in log-Gamma space.
    """
    if n < 1:
        raise ValueError("dimension must be >= 1")
    if p == math.inf:
        return 2.0 ** n
    if p < 1:
        raise ValueError("p must be >= 1")
    return math.exp(n * math.log(2.0) + n * math.lgamma(1.0 + 1.0 / p)
                    - math.lgamma(1.0 + n / p))


def lp_ball_inscribed_radius(n: int, p: float) -> float:
    """Radius of the largest Euclidean ball inside the l_p^n unit ball:
    n^{1/2 - 1/p} for p <= 2 and 1 for p >= 2 (also the radius of its
    maximal inscribed ellipsoid, which is a centered ball by symmetry)."""
    if p == math.inf:
        return 1.0
    return min(1.0, float(n) ** (0.5 - 1.0 / p))


def lp_ball_volume_ratio(n: int, p: float) -> float:
    """vr of l_p^n: ball volume over the inscribed-ball volume, n-th root."""
    from .bodies import unit_ball_volume

    rho = lp_ball_inscribed_radius(n, p)
    return (lp_ball_volume(n, p) / (unit_ball_volume(n) * rho ** n)) ** (1.0 / n)


@dataclass(frozen=True, eq=False)
class WeightedLpGauge:
    """Norm x -> (sum alpha_i |<u_i, x>|^p)^{1/p} for unit vectors u_i."""

    vectors: np.ndarray
    alphas: np.ndarray
    p: float

    def __init__(self, vectors, alphas, p):
        U = np.atleast_2d(np.asarray(vectors, dtype=float))
        a = np.asarray(alphas, dtype=float).ravel()
        if U.shape[0] != a.shape[0]:
            raise ValueError("one alpha per vector required")
        if np.any(np.abs(np.linalg.norm(U, axis=1) - 1.0) > 1e-9):
            raise ValueError("vectors must have unit length")
        if np.any(a <= 0):
            raise ValueError("alphas must be positive")
        if not (1.0 <= p < math.inf):
            raise ValueError("p must lie in [1, inf)")
        if np.linalg.matrix_rank(U, tol=1e-12) < U.shape[1]:
            raise GaugeError("vectors do not span; gauge vanishes on a subspace")
        object.__setattr__(self, "vectors", U)
        object.__setattr__(self, "alphas", a)
        object.__setattr__(self, "p", float(p))

    @property
    def dim(self) -> int:
        return self.vectors.shape[1]

    def __call__(self, points) -> np.ndarray:
        pts = np.atleast_2d(np.asarray(points, dtype=float))
        dots = np.abs(pts @ self.vectors.T)
        return (dots ** self.p @ self.alphas) ** (1.0 / self.p)

    def bounding_radius(self) -> float:
        """Rigorous R with {gauge <= 1} contained in R * unit ball.

        From max_i <u_i, x>^2 >= lam_min(sum u u^T) |x|^2 / m it follows
        that gauge(x) >= alpha_min^{1/p} (lam_min/m)^{1/2} |x|.
        """
        G = self.vectors.T @ self.vectors
        lam_min = float(np.linalg.eigvalsh(G)[0])
        m = self.vectors.shape[0]
        lower = self.alphas.min() ** (1.0 / self.p) * math.sqrt(lam_min / m)
        return 1.0 / lower

    def unit_ball_oracle(self) -> BodyOracle:
        return BodyOracle.from_gauge(self.dim, self, self.bounding_radius())


def gauge_integral_volume(body: BodyOracle, p: float, mc: McParams) -> Estimate:
    """Unit-ball volume from the gauge integral, for any gauge and finite p.

    Estimates Gamma(1+n/p)^{-1} * integral e^{-gauge(x)^p} dx with a product
    Student-t proposal scaled to the body's bounding radius.  Raises
    GaugeError when sampled gauge values reveal a non-coercive gauge.
    """
    if body.gauge is None:
        raise GaugeError("oracle carries no gauge evaluator")
    if not (1.0 <= p < math.inf):
        raise ValueError("the gauge integral needs finite p >= 1; "
                         "use closed forms for p = inf")
    n = body.dim
    rng = rng_from_seed(mc.seed)
    # probe directions: sampled radii 1/gauge must stay within the claimed
    # bounding radius, otherwise the gauge is non-coercive (or the oracle's
    # radius is wrong); the median radius sizes the proposal
    probe = sphere_points(rng, 256, n)
    radii = 1.0 / np.asarray(body.gauge(probe), dtype=float)
    if not np.all(np.isfinite(radii)) or radii.max() > body.radius * (1.0 + 1e-6):
        raise GaugeError(
            f"sampled direction radius {radii.max():.3g} exceeds the claimed "
            f"bounding radius {body.radius:.3g} (non-coercive gauge?)")
    scale = float(np.median(radii)) * max(1.0, (n / p) ** (1.0 / p)) * 1.3
    proposal = StudentTProposal(dim=n, scale=scale)
    acc = RunningMean()
    for size in batch_sizes(mc.sample_count, mc.batch):
        X = proposal.sample(rng, size)
        values = np.asarray(body.gauge(X), dtype=float)
        acc.add(np.exp(-values ** p - proposal.logpdf(X)))
    norm = math.exp(-math.lgamma(1.0 + n / p))
    return Estimate(norm * acc.mean, norm * acc.std_error, mc.sample_count)


def product_volume_bound(weights, alphas, p: float, n: int | None = None) -> float:
    """Product bound for the weighted-gauge unit ball volume:

        |K| <= 2^n Gamma(1+1/p)^n / Gamma(1+n/p) * prod (c_i/alpha_i)^{c_i/p}

    requires sum c_i = n (trace of an identity decomposition).
    """
    c = np.asarray(weights, dtype=float)
    a = np.asarray(alphas, dtype=float)
    if n is None:
        n = round(c.sum())
    if abs(c.sum() - n) > 1e-8:
        raise ValueError(f"weights sum to {c.sum():.12g}, expected {n}")
    if np.any(a <= 0) or np.any(c <= 0):
        raise ValueError("weights and alphas must be positive")
    log_bound = (n * math.log(2.0) + n * math.lgamma(1.0 + 1.0 / p)
                 - math.lgamma(1.0 + n / p)
                 + float(np.dot(c / p, np.log(c) - np.log(a))))
    return math.exp(log_bound)


@dataclass(frozen=True)
class ProductBoundReport:
    volume: Estimate
    bound: float
    satisfied: bool

    def to_dict(self) -> dict:
        return {"volume": self.volume.to_dict(), "bound": self.bound,
                "satisfied": self.satisfied}


def verify_product_volume_bound(gauge: WeightedLpGauge, weights, mc: McParams) -> ProductBoundReport:
    """Estimate the gauge ball volume and compare with the product bound.

    ``weights`` are the decomposition weights c_i of the gauge's vectors;
    they must resolve the identity (checked to 1e-8).
    """
    c = np.asarray(weights, dtype=float)
    system = BLSystem(gauge.vectors, c)
    report = verify_decomposition(system)
    if report.frobenius_residual > 1e-8:
        raise ValueError(f"not an identity decomposition: residual "
                         f"{report.frobenius_residual:.3e}")
    volume = gauge_integral_volume(gauge.unit_ball_oracle(), gauge.p, mc)
    bound = product_volume_bound(c, gauge.alphas, gauge.p, gauge.dim)
    return ProductBoundReport(volume=volume, bound=bound,
                       satisfied=volume.value <= bound + 3.0 * volume.std_error)


# ---------------------------------------------------------------------------
# subspaces of l_p^m
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class SubspaceSpec:
    """n-dimensional subspace of l_p^m spanned by the columns of ``basis``."""

    basis: np.ndarray
    p: float

    def __init__(self, basis, p):
        M = np.atleast_2d(np.asarray(basis, dtype=float))
        if M.shape[0] < M.shape[1]:
            raise ValueError("basis must be m x n with m >= n")
        if np.linalg.matrix_rank(M) < M.shape[1]:
            raise ValueError("basis must have full column rank")
        if not (1.0 <= p < math.inf):
            raise ValueError("p must lie in [1, inf)")
        object.__setattr__(self, "basis", M)
        object.__setattr__(self, "p", float(p))

    @property
    def m(self) -> int:
        return self.basis.shape[0]

    @property
    def n(self) -> int:
        return self.basis.shape[1]

    def norm(self, coeffs) -> np.ndarray:
        """l_p norm of basis @ z for rows z of ``coeffs``."""
        z = np.atleast_2d(np.asarray(coeffs, dtype=float))
        return (np.abs(z @ self.basis.T) ** self.p).sum(axis=1) ** (1.0 / self.p)

    def to_dict(self) -> dict:
        return {"m": self.m, "n": self.n, "p": self.p,
                "basis": self.basis.tolist()}

    @classmethod
    def from_dict(cls, data: dict) -> "SubspaceSpec":
        M = np.asarray(data["basis"], dtype=float)
        if M.shape != (data["m"], data["n"]):
            raise ValueError("basis shape does not match m, n")
        return cls(M, data["p"])


@dataclass(frozen=True, eq=False)
class LewisPosition:
    """Representation of a subspace with matching norm and identity weights.

    ``change_of_basis`` L maps R^n into the subspace via x -> basis @ L @ x,
    whose l_p norm equals (sum c_i |<u_i, x>|^p)^{1/p} exactly, while
    sum c_i u_i (x) u_i = I_n within the solver tolerance.
    """

    vectors: np.ndarray
    weights: np.ndarray
    change_of_basis: np.ndarray
    p: float
    residual: float
    iterations: int

    def gauge(self) -> WeightedLpGauge:
        return WeightedLpGauge(self.vectors, self.weights, self.p)


def lewis_position(spec: SubspaceSpec, tol: float = 1e-10,
                   max_iter: int = 500, step: float = 0.5) -> LewisPosition:
    """Fixed-point solve for the Lewis position of a subspace of l_p^m.

    Starting from the QR-whitened basis (already the fixed point for p = 2),
    each sweep computes row weights |r_i|^p of R = basis @ L and applies the
    damped whitening L <- L T^{-step/2} with T = sum |r_i|^{p-2} r_i r_i^T,
    until |T - I|_F < tol.  Zero rows carry zero weight and are dropped
    from the returned vectors.
    """
    M = spec.basis
    p = spec.p
    n = spec.n
    Q, Rt = np.linalg.qr(M)
    L = np.linalg.inv(Rt)
    residual = math.inf
    for iteration in range(max_iter):
        R = M @ L
        norms = np.linalg.norm(R, axis=1)
        mask = norms > 1e-300
        U = np.zeros_like(R)
        U[mask] = R[mask] / norms[mask, None]
        w = np.where(mask, norms ** p, 0.0)
        T = (U * w[:, None]).T @ U
        residual = float(np.linalg.norm(T - np.eye(n)))
        if residual <= tol:
            break
        evals, evecs = np.linalg.eigh(T)
        if evals[0] <= 0:
            raise SolverError("whitening matrix lost positive definiteness")
        L = L @ (evecs * evals ** (-0.5 * step)) @ evecs.T
    else:
        raise SolverError(f"Lewis iteration did not reach {tol:.1e} within "
                          f"{max_iter} sweeps (residual {residual:.3e})")
    R = M @ L
    norms = np.linalg.norm(R, axis=1)
    keep = norms > 1e-14
    return LewisPosition(vectors=R[keep] / norms[keep, None],
                         weights=norms[keep] ** p, change_of_basis=L,
                         p=p, residual=residual, iterations=iteration)


def inscribed_radius_check(vectors, weights, p: float, seed: int = 0,
                           count: int = 1000, tol: float = 1e-9) -> float:
    """Guaranteed Euclidean ball radius inside a Lewis-position unit ball.

    Returns n^{1/2 - 1/p} for p <= 2 and 1 for p > 2, after verifying
    gauge(x) <= |x| / radius on ``count`` random unit vectors (the two
    Hoelder cases); a violation beyond ``tol`` signals an invalid
    decomposition.
    """
    U = np.atleast_2d(np.asarray(vectors, dtype=float))
    n = U.shape[1]
    radius = lp_ball_inscribed_radius(n, p)
    gauge = WeightedLpGauge(U, weights, p)
    rng = rng_from_seed(seed)
    x = rng.standard_normal((count, n))
    x /= np.linalg.norm(x, axis=1, keepdims=True)
    worst = float((gauge(x) - 1.0 / radius).max())
    if worst > tol:
        raise ValueError(f"gauge exceeds |x|/radius by {worst:.3e}; "
                         "the decomposition is invalid")
    return radius


def subspace_volume_ratio(spec: SubspaceSpec, mc: McParams) -> Estimate:
    """Volume ratio of a subspace of l_p^m, via Lewis position.

    Puts the subspace in Lewis position, estimates the unit-ball volume by
    the gauge integral, and divides by the guaranteed inscribed ball of
    radius min(1, n^{1/2-1/p}); the result never exceeds the volume ratio
    of l_p^n beyond Monte Carlo noise.
    """
    from .bodies import unit_ball_volume

    lewis = lewis_position(spec)
    gauge = lewis.gauge()
    volume = gauge_integral_volume(gauge.unit_ball_oracle(), spec.p, mc)
    n = spec.n
    rho = inscribed_radius_check(lewis.vectors, lewis.weights, spec.p)
    denom = unit_ball_volume(n) * rho ** n
    vr = (volume.value / denom) ** (1.0 / n)
    se = vr * volume.std_error / (n * volume.value)
    return Estimate(vr, se, mc.sample_count)


class L1VolumeRatioBound(NamedTuple):
    """Exact n-dimensional bound and its dimension-free limit."""

    exact: float
    limit: float


def l1_vr_bound(n: int) -> L1VolumeRatioBound:
    """Upper bound for volume ratios of n-dimensional subspaces of L_1.

    The exact bound is vr(l_1^n) = (2^n n^{n/2} Gamma(1+n/2) /
    (Gamma(1+n) pi^{n/2}))^{1/n}; it increases to sqrt(2e/pi) = 1.31549...
    """
    if n < 1:
        raise ValueError("dimension must be >= 1")
    log_vn = 0.5 * n * math.log(math.pi) - math.lgamma(1.0 + 0.5 * n)
    log_ball = n * math.log(2.0) - math.lgamma(n + 1.0)   # |B_1^n| = 2^n / n!
    log_rho_n = -0.5 * n * math.log(n)                    # inscribed radius^n
    exact = math.exp((log_ball - log_vn - log_rho_n) / n)
    return L1VolumeRatioBound(exact=exact, limit=L1_VR_LIMIT)
