"""Small dense eigen/singular value kernels.

Everything here is sized for matrices up to a few dozen rows: cyclic Jacobi
for symmetric eigenproblems, one-sided (Hestenes) Jacobi for singular values
and Gauss-Jordan elimination for inverses. ``numpy.linalg`` is deliberately
not used so the test suite can treat it as an independent oracle.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import InvalidArgument, NumericalFailure

DEFAULT_TOL = 1e-12
MAX_SWEEPS = 30


@dataclass
class SpectrumReport:
    """Eigenvalues or singular values, sorted descending.

    ``offdiag_residual`` is the off-diagonal Frobenius mass left after the
    last sweep, relative to the Frobenius norm of the input.
    """

    values: np.ndarray
    iterations: int
    offdiag_residual: float
    vectors: Optional[np.ndarray] = None
    left_vectors: Optional[np.ndarray] = None


def _as_matrix(m, name="matrix") -> np.ndarray:
    a = np.array(m, dtype=np.float64)
    if a.ndim != 2 or a.shape[0] < 1 or a.shape[1] < 1:
        raise InvalidArgument(f"{name} must be a nonempty 2-D array, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise InvalidArgument(f"{name} contains NaN or Inf")
    return a


def symmetrize(m) -> np.ndarray:
    a = _as_matrix(m)
    if a.shape[0] != a.shape[1]:
        raise InvalidArgument(f"symmetric matrix must be square, got {a.shape}")
    return 0.5 * (a + a.T)


def _offdiag(a: np.ndarray) -> float:
    # summed directly: ||A||^2 - ||diag||^2 cancels to zero long before the
    # off-diagonal mass is negligible
    off = a - np.diag(np.diag(a))
    return math.sqrt(float(np.sum(off * off)))


def _rotation_tangent(tau: float) -> float:
    """Smaller root of t^2 + 2 tau t - 1 = 0, without overflowing tau^2."""
    if abs(tau) > 1e150:
        return 0.5 / tau
    return math.copysign(1.0, tau) / (abs(tau) + math.sqrt(1.0 + tau * tau))


def sym_eig(m, tol: float = DEFAULT_TOL, max_sweeps: int = MAX_SWEEPS) -> SpectrumReport:
    """Eigenvalues of a symmetric matrix by cyclic Jacobi rotations.

    The input is symmetrized first. Converged when the off-diagonal Frobenius
    norm drops to ``tol`` times the Frobenius norm of the input; raises
    ``NumericalFailure`` (with the residual attached) if ``max_sweeps`` sweeps
    are not enough.
    """
    if tol <= 0:
        raise InvalidArgument("tol must be positive")
    a = symmetrize(m)
    n = a.shape[0]
    v = np.eye(n)
    scale = math.sqrt(float(np.sum(a * a)))
    if scale == 0.0:
        return SpectrumReport(np.zeros(n), 0, 0.0, v)

    sweeps = 0
    off = _offdiag(a) / scale
    while off > tol:
        if sweeps >= max_sweeps:
            raise NumericalFailure(f"Jacobi did not converge in {max_sweeps} sweeps", residual=off)
        sweeps += 1
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if apq == 0.0:
                    continue
                diff = a[q, q] - a[p, p]
                if abs(apq) < 1e-150 * abs(diff):
                    t = apq / diff
                else:
                    t = _rotation_tangent(diff / (2.0 * apq))
                c = 1.0 / math.sqrt(1.0 + t * t)
                s = t * c
                rp = a[p, :].copy()
                rq = a[q, :].copy()
                a[p, :] = c * rp - s * rq
                a[q, :] = s * rp + c * rq
                cp = a[:, p].copy()
                cq = a[:, q].copy()
                a[:, p] = c * cp - s * cq
                a[:, q] = s * cp + c * cq
                a[p, q] = a[q, p] = 0.0
                vp = v[:, p].copy()
                v[:, p] = c * vp - s * v[:, q]
                v[:, q] = s * vp + c * v[:, q]
        off = _offdiag(a) / scale

    w = np.diag(a).copy()
    order = np.argsort(-w, kind="stable")
    return SpectrumReport(w[order], sweeps, off, v[:, order])


def _one_sided_jacobi(a: np.ndarray, tol: float, max_sweeps: int):
    """Hestenes iteration on the columns of ``a`` (rows >= cols)."""
    u = a.copy()
    n = u.shape[1]
    v = np.eye(n)
    sweeps = 0
    worst = 0.0
    while True:
        worst = 0.0
        rotated = False
        for i in range(n - 1):
            for j in range(i + 1, n):
                alpha = float(u[:, i] @ u[:, i])
                beta = float(u[:, j] @ u[:, j])
                gamma = float(u[:, i] @ u[:, j])
                # sqrt of each factor: alpha * beta underflows for rank-deficient input
                denom = math.sqrt(alpha) * math.sqrt(beta)
                if denom == 0.0:
                    continue
                cosine = abs(gamma) / denom
                worst = max(worst, cosine)
                if cosine <= tol:
                    continue
                rotated = True
                zeta = (beta - alpha) / (2.0 * gamma)
                t = _rotation_tangent(zeta)
                c = 1.0 / math.sqrt(1.0 + t * t)
                s = c * t
                ui = u[:, i].copy()
                u[:, i] = c * ui - s * u[:, j]
                u[:, j] = s * ui + c * u[:, j]
                vi = v[:, i].copy()
                v[:, i] = c * vi - s * v[:, j]
                v[:, j] = s * vi + c * v[:, j]
        if not rotated:
            break
        sweeps += 1
        if sweeps >= max_sweeps:
            raise NumericalFailure(f"one-sided Jacobi did not converge in {max_sweeps} sweeps", residual=worst)
    sigma = np.sqrt(np.einsum("ij,ij->j", u, u))
    order = np.argsort(-sigma, kind="stable")
    sigma = sigma[order]
    u = u[:, order]
    v = v[:, order]
    nz = sigma > 0
    u[:, nz] /= sigma[nz]
    return u, sigma, v, sweeps, worst


def svd(m, tol: float = DEFAULT_TOL, max_sweeps: int = MAX_SWEEPS):
    """Thin SVD ``m = U diag(s) V^T`` with ``s`` descending.

    Columns of ``U`` belonging to zero singular values are left as zero.
    """
    a = _as_matrix(m)
    if a.shape[0] >= a.shape[1]:
        u, s, v, sweeps, res = _one_sided_jacobi(a, tol, max_sweeps)
    else:
        v, s, u, sweeps, res = _one_sided_jacobi(a.T.copy(), tol, max_sweeps)
    return u, s, v, sweeps, res


def singular_values(m, tol: float = DEFAULT_TOL, max_sweeps: int = MAX_SWEEPS) -> SpectrumReport:
    u, s, v, sweeps, res = svd(m, tol, max_sweeps)
    return SpectrumReport(s, sweeps, res, vectors=v, left_vectors=u)


def nuclear_norm(m) -> float:
    return float(np.sum(singular_values(m).values))


def spectral_norm(m) -> float:
    return float(singular_values(m).values[0])


def polar_factor(m) -> np.ndarray:
    """``U V^T`` from the thin SVD: the maximizer of <m, W> over ||W||_S <= 1."""
    u, s, v, _, _ = svd(m)
    keep = s > 0
    return u[:, keep] @ v[:, keep].T


def spectral_radius(m, tol: float = 1e-15, max_squarings: int = 64) -> float:
    """Largest eigenvalue modulus of a square matrix.

    Symmetric input goes through ``sym_eig``. Otherwise the power sequence
    ``||A^(2^j)||_F^(1/2^j)`` is followed with per-step renormalization, so
    the iterate never overflows; complex eigenvalue pairs need no special
    handling.
    """
    a = _as_matrix(m)
    if a.shape[0] != a.shape[1]:
        raise InvalidArgument(f"spectral radius needs a square matrix, got {a.shape}")
    if np.allclose(a, a.T, rtol=0.0, atol=1e-12):
        return float(np.max(np.abs(sym_eig(a).values)))
    s = math.sqrt(float(np.sum(a * a)))
    if s == 0.0:
        return 0.0
    b = a / s
    log_scale = math.log(s)
    r = s
    for j in range(1, max_squarings + 1):
        c = b @ b
        s = math.sqrt(float(np.sum(c * c)))
        if s == 0.0:
            return 0.0
        b = c / s
        log_scale = 2.0 * log_scale + math.log(s)
        r_new = math.exp(log_scale / 2.0**j)
        if abs(r_new - r) <= tol * r_new:
            return r_new
        r = r_new
    return r


@dataclass
class MatrixNorms:
    spectral: float
    nuclear: float
    spectral_radius: Optional[float] = None


def matrix_norms(m, radius: Optional[bool] = None) -> MatrixNorms:
    """Spectral and nuclear norms, plus the spectral radius for square input.

    ``radius=True`` insists on the radius (non-square input is an error),
    ``radius=None`` computes it only when the matrix is square.
    """
    a = _as_matrix(m)
    s = singular_values(a).values
    square = a.shape[0] == a.shape[1]
    if radius and not square:
        raise InvalidArgument(f"spectral radius needs a square matrix, got {a.shape}")
    rho = spectral_radius(a) if (square and radius is not False) else None
    return MatrixNorms(float(s[0]), float(np.sum(s)), rho)


def inverse(m, min_pivot_ratio: float = 1e-10) -> np.ndarray:
    """Gauss-Jordan inverse with partial pivoting.

    Refuses (``NumericalFailure``) when the smallest pivot is below
    ``min_pivot_ratio`` times the largest one.
    """
    a = _as_matrix(m)
    n = a.shape[0]
    if n != a.shape[1]:
        raise InvalidArgument(f"inverse needs a square matrix, got {a.shape}")
    aug = np.hstack([a, np.eye(n)])
    pivots = []
    for col in range(n):
        row = col + int(np.argmax(np.abs(aug[col:, col])))
        piv = aug[row, col]
        if piv == 0.0:
            raise NumericalFailure("matrix is singular")
        if row != col:
            aug[[col, row]] = aug[[row, col]]
        pivots.append(abs(piv))
        aug[col] /= piv
        for r in range(n):
            if r != col and aug[r, col] != 0.0:
                aug[r] -= aug[r, col] * aug[col]
    if min(pivots) < min_pivot_ratio * max(pivots):
        raise NumericalFailure("matrix is numerically singular", residual=min(pivots) / max(pivots))
    return aug[:, n:].copy()
