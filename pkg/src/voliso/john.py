"""Maximal inscribed ellipsoids, John position, and identity decompositions.

The solver maximizes log det B over ellipsoids {By + d : |y| <= 1} subject
to the second-order-cone containment constraints |B a_i| + <a_i, d> <= b_i,
one per facet.  It follows the central path of the log-barrier

    Phi_t(B, d) = -t log det B - sum_i log((b_i - <a_i, d>)^2 - |B a_i|^2)

with damped Newton steps; each barrier stage multiplies t by a fixed factor
until the duality gap 2m/t is below tolerance.  A body is in John position
when its maximal inscribed ellipsoid is the unit ball; contact points are
then the facet normals at unit distance, and nonnegative weights solving
sum c_i u_i (x) u_i = I certify optimality.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import nnls

from .bodies import (Ellipsoid, HPolytope, apply_affine, chebyshev_center,
                     vrep_from_hrep)
from .errors import InfeasibleDecompositionError, NotJohnPositionError, SolverError

_GAP_TOL = 1e-10
_DECREMENT_TOL = 1e-13     # on lambda^2 / 2, the Newton suboptimality estimate
_MAX_NEWTON = 200
_T_FACTOR = 20.0
_STAGE_CAP = 25


# ---------------------------------------------------------------------------
# symmetric-matrix parametrization helpers, cached per dimension
# ---------------------------------------------------------------------------

class _SymIndex:
    """Index arrays for the packed lower triangle of a symmetric n x n matrix."""

    def __init__(self, n: int):
        pairs = [(j, k) for j in range(n) for k in range(j + 1)]
        self.n = n
        self.q = len(pairs)
        self.rows = np.array([j for j, _ in pairs])
        self.cols = np.array([k for _, k in pairs])
        self.diag = self.rows == self.cols
        # duplication matrix: vec_F(B) = D @ packed(B)
        D = np.zeros((n * n, self.q))
        for col, (j, k) in enumerate(pairs):
            D[k * n + j, col] = 1.0
            D[j * n + k, col] = 1.0
        self.dup = D
        # curvature tensor: for tangents T_a = e_j a_k + e_k a_j the Gram
        # matrix <T_a, T_b> is a fixed linear function of outer(a, a); C maps
        # outer(a, a) to that Gram matrix, with diagonal tangents halved
        C = np.zeros((self.q, self.q, n, n))
        scale = np.where(self.diag, 0.5, 1.0)
        for a_idx, (j, k) in enumerate(pairs):
            for b_idx, (l, m) in enumerate(pairs):
                f = scale[a_idx] * scale[b_idx]
                for (r, s, t, u) in ((j, l, k, m), (j, m, k, l),
                                     (k, l, j, m), (k, m, j, l)):
                    if r == s:
                        C[a_idx, b_idx, t, u] += f
        self.curvature = C

    def to_matrix(self, packed: np.ndarray) -> np.ndarray:
        B = np.zeros((self.n, self.n))
        B[self.rows, self.cols] = packed
        B[self.cols, self.rows] = packed
        return B

    def from_matrix_grad(self, G: np.ndarray) -> np.ndarray:
        """Packed gradient from a full-matrix gradient with independent entries."""
        g = G[self.rows, self.cols] + G[self.cols, self.rows]
        g[self.diag] *= 0.5
        return g

    def pair_products(self, X: np.ndarray, Y: np.ndarray) -> np.ndarray:
        """Row-wise packed gradient of x^T B y in B: column (j,k) is
        x_j y_k + x_k y_j off the diagonal and x_j y_j on it."""
        P = X[:, self.rows] * Y[:, self.cols] + X[:, self.cols] * Y[:, self.rows]
        P[:, self.diag] *= 0.5
        return P

    def sym_entries(self, X: np.ndarray, Y: np.ndarray) -> np.ndarray:
        """Row-wise packed entries of sym(x y^T) = (x y^T + y x^T) / 2."""
        return 0.5 * (X[:, self.rows] * Y[:, self.cols]
                      + X[:, self.cols] * Y[:, self.rows])


_SYM_CACHE: dict[int, _SymIndex] = {}


def _sym_index(n: int) -> _SymIndex:
    if n not in _SYM_CACHE:
        _SYM_CACHE[n] = _SymIndex(n)
    return _SYM_CACHE[n]


# ---------------------------------------------------------------------------
# solver
# ---------------------------------------------------------------------------

@dataclass
class SolveInfo:
    """Diagnostics of one inscribed-ellipsoid solve."""

    newton_iterations: int
    duality_gap: float
    newton_decrement: float
    kkt_residual: float
    det_trace: list = field(default_factory=list)
    converged: bool = True


def _barrier_value(sym, A, b, theta, t):
    """Value of Phi_t together with log det B; None when theta is infeasible."""
    B = sym.to_matrix(theta[: sym.q])
    d = theta[sym.q:]
    sign, logdet = np.linalg.slogdet(B)
    if sign <= 0:
        return None
    s = b - A @ d
    V = A @ B
    vnorm = np.linalg.norm(V, axis=1)
    slack = s - vnorm
    if np.any(s <= 0) or np.any(slack <= 0):
        return None
    g = slack * (s + vnorm)
    return -t * logdet - float(np.log(g).sum()), logdet, B, d, s, V, g


def _barrier_state(sym, A, b, theta, t):
    """Value, gradient, Hessian of Phi_t; None when theta is infeasible."""
    q = sym.q
    cheap = _barrier_value(sym, A, b, theta, t)
    if cheap is None:
        return None
    value, logdet, B, d, s, V, g = cheap

    Binv = np.linalg.inv(B)
    inv_g = 1.0 / g
    # packed sym(v a^T) per constraint, and the gradient
    P1 = sym.pair_products(V, A)
    grad = np.empty(theta.size)
    grad[:q] = -t * sym.from_matrix_grad(Binv) + 2.0 * inv_g @ P1
    grad[q:] = A.T @ (2.0 * s * inv_g)

    # Hessian: t (Binv kron Binv) on the B-block, plus per constraint
    # (1/g^2) w w^T - (1/g) Hess(g); Hess(g) has B-block -2 Jv^T Jv
    # (assembled from the cached curvature tensor) and d-block 2 a a^T
    H = np.zeros((theta.size, theta.size))
    H[:q, :q] = t * (sym.dup.T @ np.kron(Binv, Binv) @ sym.dup)
    W = np.hstack([-2.0 * P1, -2.0 * s[:, None] * A])   # grad of g, row per i
    Wg = W * inv_g[:, None]
    H += Wg.T @ Wg
    S2 = (A * (2.0 * inv_g)[:, None]).T @ A             # sum (2/g) a a^T
    H[:q, :q] += np.einsum("abrs,rs->ab", sym.curvature, S2)
    H[q:, q:] -= S2
    return value, grad, H, logdet


def _kkt_certificate(A, b, B, d, eps_contact):
    """Best nonnegative multipliers for stationarity; returns the residual.

    Stationarity of log det at the optimum reads B^{-1} = sum lam_i
    sym(v_i a_i^T)/|v_i| together with sum lam_i a_i = 0; multipliers are
    fitted by nonnegative least squares on the near-active facets.
    """
    sym = _sym_index(A.shape[1])
    s = b - A @ d
    V = A @ B
    vnorm = np.linalg.norm(V, axis=1)
    slack = s - vnorm
    active = slack <= eps_contact
    violation = max(0.0, float(-slack.min()))
    if not np.any(active):
        return math.inf, violation
    Aact = A[active]
    Vact = V[active] / vnorm[active][:, None]
    # Frobenius-consistent packed rows: off-diagonal entries weighted sqrt(2)
    weights = np.where(sym.diag, 1.0, math.sqrt(2.0))
    M = sym.sym_entries(Vact, Aact) * weights
    Binv = np.linalg.inv(B)
    target = Binv[sym.rows, sym.cols] * weights
    system = np.hstack([M, Aact]).T               # (q + n, k) columns per facet
    rhs = np.concatenate([target, np.zeros(A.shape[1])])
    lam, _ = nnls(system, rhs)
    resid = float(np.linalg.norm(system @ lam - rhs))
    comp = float(np.abs(lam * slack[active]).sum())
    return max(resid, comp, violation), violation


def max_inscribed_ellipsoid(P: HPolytope, full_output: bool = False):
    """Ellipsoid of maximal volume inside a bounded H-polytope.

    Returns the unique maximizer of det B over symmetric positive-definite
    B and center d with |B a_i| + <a_i, d> <= b_i for every facet.  With
    ``full_output=True`` also returns a SolveInfo carrying the KKT residual,
    duality gap, and the per-stage determinant trace (non-decreasing).

    Raises SolverError if the Newton iteration cap is exhausted before the
    duality gap closes.
    """
    A, b = P.normals, P.offsets
    m, n = A.shape
    sym = _sym_index(n)
    q = sym.q

    center, radius = chebyshev_center(A, b)
    theta = np.zeros(q + n)
    theta[:q][sym.diag] = 0.9 * radius
    theta[q:] = center

    t = 1.0
    iterations = 0
    decrement = math.inf
    det_trace = []
    logdet = -math.inf
    while True:
        for _ in range(_STAGE_CAP):
            state = _barrier_state(sym, A, b, theta, t)
            if state is None:
                raise SolverError("iterate left the feasible region")
            value, grad, H, logdet = state
            try:
                step = -np.linalg.solve(H, grad)
            except np.linalg.LinAlgError:
                step = -np.linalg.solve(
                    H + 1e-12 * np.trace(H) * np.eye(H.shape[0]), grad)
            dec2 = float(-grad @ step)
            decrement = math.sqrt(max(dec2, 0.0))
            iterations += 1
            if dec2 / 2.0 <= _DECREMENT_TOL or iterations > _MAX_NEWTON:
                break
            slope = float(grad @ step)
            alpha = 1.0
            accepted = False
            while alpha > 1e-13:
                trial = theta + alpha * step
                cand = _barrier_value(sym, A, b, trial, t)
                if cand is not None and cand[0] <= value + 0.25 * alpha * slope:
                    theta = trial
                    progress = value - cand[0]
                    accepted = True
                    break
                alpha *= 0.5
            if not accepted or progress <= 1e-13 * (1.0 + abs(value)):
                break   # numerical noise floor for this stage
        det_trace.append(math.exp(logdet))
        gap = 2.0 * m / t
        if gap <= _GAP_TOL or iterations >= _MAX_NEWTON:
            break
        t *= _T_FACTOR

    B = sym.to_matrix(theta[:q])
    d = theta[q:]
    gap = 2.0 * m / t
    eps_contact = 1e-6 * float(b.max())
    kkt, violation = _kkt_certificate(A, b, B, d, eps_contact)
    converged = gap <= 1e-8 and violation <= 1e-9
    if not converged:
        raise SolverError(
            f"no convergence after {iterations} Newton iterations: "
            f"duality gap {gap:.3e}, KKT residual {kkt:.3e}")
    ellipsoid = Ellipsoid(B, d)
    if full_output:
        info = SolveInfo(newton_iterations=iterations, duality_gap=gap,
                         newton_decrement=decrement, kkt_residual=kkt,
                         det_trace=det_trace, converged=converged)
        return ellipsoid, info
    return ellipsoid


def john_position(P: HPolytope):
    """Affine image of P whose maximal inscribed ellipsoid is the unit ball.

    Returns (image, T) where T is the inverse of the ellipsoid map
    x -> Bx + d, so image = T(P) and re-solving the image yields (I, 0).
    """
    ellipsoid = max_inscribed_ellipsoid(P)
    T = ellipsoid.as_map().inverse()
    return apply_affine(P, T), T


def contact_points(P: HPolytope, eps_contact: float | None = None) -> np.ndarray:
    """Facet normals touching the unit ball of a body in John position.

    In John position every facet has offset >= 1 and the touching facets
    have offset 1; since normals are unit vectors, the tangency point of
    facet i is the normal itself.  Raises NotJohnPositionError when some
    facet cuts into the unit ball.
    """
    if eps_contact is None:
        eps_contact = 1e-6 * float(P.offsets.max())
    if np.any(P.offsets < 1.0 - eps_contact):
        raise NotJohnPositionError(
            f"unit ball not contained: min offset {P.offsets.min():.12g}")
    return P.normals[P.offsets <= 1.0 + eps_contact].copy()


@dataclass(frozen=True, eq=False)
class JohnDecomposition:
    """Contact unit vectors u_i with positive weights c_i.

    Satisfies sum c_i u_i (x) u_i = I within tolerance, hence sum c_i = n;
    in the general (non-symmetric) case also sum c_i u_i = 0.  The vectors
    act like an orthonormal basis: |x|^2 = sum c_i <u_i, x>^2.
    """

    contacts: np.ndarray
    weights: np.ndarray
    symmetric: bool

    @property
    def dim(self) -> int:
        return self.contacts.shape[1]

    def frobenius_residual(self) -> float:
        n = self.dim
        M = (self.contacts * self.weights[:, None]).T @ self.contacts
        return float(np.linalg.norm(M - np.eye(n)))

    def trace_gap(self) -> float:
        return float(abs(self.weights.sum() - self.dim))

    def barycenter_norm(self) -> float:
        return float(np.linalg.norm(self.weights @ self.contacts))

    def to_dict(self) -> dict:
        return {"contacts": self.contacts.tolist(),
                "weights": self.weights.tolist(),
                "symmetric": self.symmetric}

    @classmethod
    def from_dict(cls, data: dict) -> "JohnDecomposition":
        return cls(np.asarray(data["contacts"], dtype=float),
                   np.asarray(data["weights"], dtype=float),
                   bool(data["symmetric"]))


def john_decomposition(contacts, symmetric: bool, tol: float = 1e-8,
                       drop_tol: float = 1e-10) -> JohnDecomposition:
    """Nonnegative weights making the contacts resolve the identity.

    Solves sum c_i u_i (x) u_i = I_n (plus sum c_i u_i = 0 when
    ``symmetric`` is False) by nonnegative least squares; when the system is
    underdetermined the minimum-Euclidean-norm nonnegative solution is
    returned, and zero-weight contacts are dropped.  Raises
    InfeasibleDecompositionError when no weights fit within ``tol``,
    which signals an incomplete contact set.
    """
    U = np.atleast_2d(np.asarray(contacts, dtype=float))
    m, n = U.shape
    sym = _sym_index(n)
    # row per entry of sum c_i u_i u_i^T = I, off-diagonals weighted sqrt(2)
    # so the least-squares residual is exactly the Frobenius residual
    weights_row = np.where(sym.diag, 1.0, math.sqrt(2.0))
    rows = [(sym.sym_entries(U, U) * weights_row).T]
    rhs = [np.where(sym.diag, 1.0, 0.0) * weights_row]
    if not symmetric:
        rows.append(U.T)
        rhs.append(np.zeros(n))
    A = np.vstack(rows)
    y = np.concatenate(rhs)
    # tiny Tikhonov row block selects the minimum-norm nonnegative solution
    ridge = 1e-6
    A_aug = np.vstack([A, ridge * np.eye(m)])
    y_aug = np.concatenate([y, np.zeros(m)])
    c, _ = nnls(A_aug, y_aug)
    residual = float(np.linalg.norm(A @ c - y))
    if residual > tol:
        raise InfeasibleDecompositionError(
            f"decomposition residual {residual:.3e} exceeds {tol:.1e}; "
            "contact set looks incomplete (raise eps_contact and retry)")
    keep = c > drop_tol
    return JohnDecomposition(U[keep].copy(), c[keep].copy(), symmetric)


def volume_ratio(P: HPolytope) -> float:
    """vr(P) = (|P| / |maximal inscribed ellipsoid|)^(1/n); affine-invariant."""
    from .measures import polytope_volume

    ellipsoid = max_inscribed_ellipsoid(P)
    vol = polytope_volume(vrep_from_hrep(P))
    return (vol / ellipsoid.volume) ** (1.0 / P.dim)
