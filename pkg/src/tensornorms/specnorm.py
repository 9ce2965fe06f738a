"""Tensor spectral norm: max of <A, u1 o ... o uk> over unit vectors.

Computing it exactly is NP-hard in general, so ``hopm`` returns a certified
lower bound (the witness vectors reproduce the value) found by multistart
alternating maximization. ``spectral_bruteforce`` is an independent grid
oracle for tensors of order <= 3 with modes of size <= 3.
"""

from __future__ import annotations

import math
import string
from dataclasses import dataclass, field
from typing import List, Sequence

import numpy as np

from .core import as_tensor, outer, rng_for, sub_seed
from .errors import InvalidArgument, UnsupportedSize

DEFAULT_RESTARTS = 32
DEFAULT_MAX_SWEEPS = 500
DEFAULT_TOL = 1e-13


@dataclass
class RankOneTerm:
    coefficient: float
    factors: List[np.ndarray]

    def evaluate(self) -> np.ndarray:
        return self.coefficient * outer(self.factors)

    @property
    def shape(self):
        return tuple(len(f) for f in self.factors)


@dataclass
class SpectralCertificate:
    """Best value found by ``hopm`` and the rank-one term that attains it.

    ``value == |<A, outer(witness.factors)>|`` by construction, so ``value``
    is always a valid lower bound on the spectral norm; ``converged`` only
    says that the winning restart stopped moving, not that it is global.
    """

    value: float
    witness: RankOneTerm
    restarts_used: int
    best_restart_seed: int
    converged: bool
    history: List[float] = field(default_factory=list)
    histories: List[List[float]] = field(default_factory=list, repr=False)
    reseeds: int = 0


def _mode_contract(a: np.ndarray, factors: Sequence[np.ndarray], skip: int) -> np.ndarray:
    """Contract ``a`` with batched factors (rows = restarts) on every mode but ``skip``."""
    letters = string.ascii_lowercase[: a.ndim]
    ops = [a]
    subs = [letters]
    for m in range(a.ndim):
        if m != skip:
            ops.append(factors[m])
            subs.append("z" + letters[m])
    return np.einsum(",".join(subs) + "->z" + letters[skip], *ops)


def hopm(
    a,
    restarts: int = DEFAULT_RESTARTS,
    max_sweeps: int = DEFAULT_MAX_SWEEPS,
    tol: float = DEFAULT_TOL,
    seed: int = 0,
    polish: bool = True,
) -> SpectralCertificate:
    """Higher-order power method with ``restarts`` independent starts.

    Restart ``r`` draws its starting factors from ``rng_for(seed, r)``
    (standard normal, normalized). A sweep replaces each factor in turn by the
    normalized contraction of ``a`` against all the others, which cannot lower
    the objective. A restart stops once two successive sweep values differ by
    at most ``tol`` times the value. All restarts run side by side as one
    batch; the reduction keeps the first restart that attains the maximum.

    The stopping rule watches the objective, which settles long before the
    factors do (the error in the value is quadratic in the error of the
    direction). With ``polish`` the winner keeps sweeping until its factors
    stop moving, so the witness does not depend on which of several
    near-tied restarts happened to win; deflation in the nuclear-norm bound
    relies on that.
    """
    a = as_tensor(a)
    if restarts < 1:
        raise InvalidArgument("restarts must be >= 1")
    shape = a.shape

    if not np.any(a):
        factors = [np.eye(n)[0] for n in shape]
        return SpectralCertificate(0.0, RankOneTerm(0.0, factors), restarts, sub_seed(seed, 0), True, [0.0], [[0.0]])

    if a.ndim == 1:
        nv = float(np.sqrt(a @ a))
        return SpectralCertificate(nv, RankOneTerm(nv, [a / nv]), restarts, sub_seed(seed, 0), True, [nv], [[nv]])

    rngs = [rng_for(seed, r) for r in range(restarts)]
    factors = []
    for n in shape:
        block = np.empty((restarts, n))
        for r, rng in enumerate(rngs):
            v = rng.standard_normal(n)
            block[r] = v / np.linalg.norm(v)
        factors.append(block)

    active = np.ones(restarts, dtype=bool)
    converged = np.zeros(restarts, dtype=bool)
    values = np.zeros(restarts)
    histories: List[List[float]] = [[] for _ in range(restarts)]
    reseeds = 0

    for _ in range(max_sweeps):
        idx = np.flatnonzero(active)
        if idx.size == 0:
            break
        sub = [f[idx] for f in factors]
        norms = None
        for m in range(a.ndim):
            v = _mode_contract(a, sub, m)
            norms = np.sqrt(np.einsum("zi,zi->z", v, v))
            dead = norms == 0.0
            if np.any(dead):
                # contraction vanished: redraw that factor and keep going
                for j in np.flatnonzero(dead):
                    w = rngs[idx[j]].standard_normal(shape[m])
                    v[j] = w
                    norms[j] = np.linalg.norm(w)
                    reseeds += 1
            sub[m] = v / norms[:, None]
        for m in range(a.ndim):
            factors[m][idx] = sub[m]
        new = norms
        for j, r in enumerate(idx):
            prev = histories[r][-1] if histories[r] else None
            histories[r].append(float(new[j]))
            if prev is not None and abs(new[j] - prev) <= tol * max(new[j], 1e-300):
                converged[r] = True
                active[r] = False
        values[idx] = new

    final = np.einsum("zi,zi->z", _mode_contract(a, factors, a.ndim - 1), factors[-1])
    best = int(np.argmax(np.abs(final)))
    witness = [factors[m][best].copy() for m in range(a.ndim)]
    if polish:
        witness = polish_rank_one(a, witness)
    # recompute the objective from the final witness so value and witness agree exactly
    signed = float(np.dot(_mode_contract(a, [w[None, :] for w in witness], a.ndim - 1)[0], witness[-1]))
    value = abs(signed)
    if signed < 0:
        witness[0] = -witness[0]
    return SpectralCertificate(
        value=value,
        witness=RankOneTerm(value, witness),
        restarts_used=restarts,
        best_restart_seed=sub_seed(seed, best),
        converged=bool(converged[best]),
        history=histories[best],
        histories=histories,
        reseeds=reseeds,
    )


POLISH_SWEEPS = 500
POLISH_TOL = 1e-15


def polish_rank_one(a, factors: Sequence[np.ndarray], max_sweeps: int = POLISH_SWEEPS, tol: float = POLISH_TOL):
    """Continue power sweeps from ``factors`` until no entry moves by more than ``tol``."""
    a = as_tensor(a)
    f = [np.array(x, dtype=float)[None, :] for x in factors]
    for _ in range(max_sweeps):
        delta = 0.0
        for m in range(a.ndim):
            v = _mode_contract(a, f, m)[0]
            n = float(np.sqrt(v @ v))
            if n == 0.0:
                return [x[0] for x in f]
            v = v / n
            delta = max(delta, float(np.max(np.abs(v - f[m][0]))))
            f[m][0] = v
        if delta <= tol:
            break
    return [x[0] for x in f]


def _hemisphere_grid(n: int, g: int) -> np.ndarray:
    """Unit vectors covering every direction up to sign, spacing pi/g per angle."""
    if n == 1:
        return np.ones((1, 1))
    if n == 2:
        t = np.pi * np.arange(g) / g
        return np.stack([np.cos(t), np.sin(t)], axis=1)
    theta = np.pi * np.arange(g + 1) / g
    phi = np.pi * np.arange(g) / g
    th, ph = np.meshgrid(theta, phi, indexing="ij")
    pts = np.stack([np.sin(th) * np.cos(ph), np.sin(th) * np.sin(ph), np.cos(th)], axis=-1)
    return pts.reshape(-1, 3)


def bruteforce_gap(a, grid_points_per_angle: int) -> float:
    """Guaranteed distance between ``spectral_bruteforce`` and the true norm.

    Every direction lies within arc length pi/g of a grid point and the
    objective is ||A||_F-Lipschitz in each factor; the bound charges that
    for every mode, which over-covers the modes solved in closed form.
    """
    a = as_tensor(a)
    fro = float(np.sqrt(np.sum(a * a)))
    return fro * a.ndim * math.pi / grid_points_per_angle


def spectral_bruteforce(a, grid_points_per_angle: int = 720) -> float:
    """Grid search for the spectral norm of a tensor of order <= 3, modes <= 3.

    The first factor ranges over a spherical-angle grid; for each grid point
    the remaining factors are optimal in closed form (vector 2-norm for order
    2, largest singular value via LAPACK for order 3). The result is a lower
    bound within ``bruteforce_gap`` of the true value.
    """
    a = as_tensor(a)
    if a.ndim > 3 or max(a.shape) > 3:
        raise UnsupportedSize(f"brute force handles order <= 3 and modes <= 3, got shape {a.shape}")
    if grid_points_per_angle < 1:
        raise InvalidArgument("grid_points_per_angle must be >= 1")
    if not np.any(a):
        return 0.0
    grid = _hemisphere_grid(a.shape[0], grid_points_per_angle)
    if a.ndim == 1:
        vals = np.abs(grid @ a)
    elif a.ndim == 2:
        rows = grid @ a
        vals = np.sqrt(np.einsum("gi,gi->g", rows, rows))
    else:
        mats = np.einsum("gi,ijk->gjk", grid, a)
        vals = np.linalg.norm(mats, ord=2, axis=(1, 2))
    return float(np.max(vals))


def spectral_alt_formula(a, samples: int = 64, seed: int = 0, restarts: int = 8) -> float:
    """Lower bound on the spectral norm through rank-one contractions of the last two modes.

    Each sample draws unit ``u, v``, contracts ``A`` against ``u v^T`` on its
    last two modes and takes the spectral norm (``hopm``) of the smaller
    tensor. The supremum over unit-nuclear-norm matrices equals the spectral
    norm of ``A``, and it is reached at a rank-one matrix, so sampling rank-one
    matrices only loses the sampling gap.
    """
    a = as_tensor(a)
    if a.ndim < 3:
        raise InvalidArgument(f"needs order >= 3, got {a.ndim}")
    if samples < 1:
        raise InvalidArgument("samples must be >= 1")
    best = 0.0
    for s in range(samples):
        rng = rng_for(seed, s)
        u = rng.standard_normal(a.shape[-2])
        v = rng.standard_normal(a.shape[-1])
        b = np.outer(u / np.linalg.norm(u), v / np.linalg.norm(v))
        c = np.tensordot(a, b, axes=([a.ndim - 2, a.ndim - 1], [0, 1]))
        best = max(best, hopm(c, restarts=restarts, seed=seed).value)
    return best
