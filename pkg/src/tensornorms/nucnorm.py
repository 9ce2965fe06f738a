"""Certified intervals for the tensor nuclear norm.

Upper bounds come from explicit rank-one decompositions (greedy deflation);
any decomposition ``A = sum_j lambda_j u1j o ... o ukj + R`` with unit
factors bounds ``||A||_*`` by ``sum |lambda_j| + ||R||_*``. Lower bounds come
from contracting ``A`` against unit-nuclear-norm matrices on paired modes:
the contraction cannot increase the nuclear norm, so the nuclear norm of the
small result (a vector or a matrix, both cheap) is a lower bound.
"""

from __future__ import annotations

import math
import string
from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple

import numpy as np

from . import linalg
from .core import as_tensor, random_unit_vector, rng_for, sub_seed
from .errors import InvalidArgument, NumericalFailure
from .specnorm import RankOneTerm, hopm

GREEDY_MAX_TERMS = 100
GREEDY_TOL = 1e-8
GREEDY_RESTARTS = 16
INTERVAL_SLACK = 1e-8


def residual_constant(shape) -> float:
    """``c`` with ``||R||_* <= c ||R||_F`` for every tensor of this shape.

    Writing R as the sum of its fibres along the longest mode gives
    prod(other dims) rank-one terms; Cauchy-Schwarz on their lengths gives
    c = sqrt(prod of all dims except the largest).
    """
    dims = sorted(int(n) for n in shape)
    return math.sqrt(math.prod(dims[:-1]))


@dataclass
class GreedyUpper:
    upper: float
    terms: List[RankOneTerm] = field(repr=False)
    residual_norm: float = 0.0
    residual_bound: float = 0.0


def nuclear_upper_greedy(
    a,
    max_terms: int = GREEDY_MAX_TERMS,
    tol: float = GREEDY_TOL,
    seed: int = 0,
    restarts: int = GREEDY_RESTARTS,
) -> GreedyUpper:
    """Upper bound from greedy rank-one deflation.

    Each step takes the best rank-one approximation of the current residual
    (``hopm``), subtracts it and adds its coefficient to the running sum. Stops
    when the residual's Frobenius norm is at most ``tol * ||A||_F`` or after
    ``max_terms`` terms; the leftover residual is charged through
    ``residual_constant``. On matrices this is deflation by singular triplets
    and the bound equals the sum of singular values.
    """
    a = as_tensor(a)
    if max_terms < 1:
        raise InvalidArgument("max_terms must be >= 1")
    r = a.copy()
    fro0 = float(np.sqrt(np.sum(a * a)))
    terms: List[RankOneTerm] = []
    total = 0.0
    res = fro0
    for t in range(max_terms):
        if res <= tol * fro0:
            break
        cert = hopm(r, restarts=restarts, seed=sub_seed(seed, t << 32))
        if cert.value == 0.0:
            break
        term = cert.witness
        terms.append(term)
        total += abs(term.coefficient)
        r = r - term.evaluate()
        res = float(np.sqrt(np.sum(r * r)))
    bound = residual_constant(a.shape) * res
    return GreedyUpper(total + bound, terms, res, bound)


def default_pairs(order: int) -> Tuple[Tuple[int, ...], List[Tuple[int, int]]]:
    """Free modes and paired modes (0-based) for a tensor of the given order.

    Odd order keeps mode 0 free and pairs (1,2), (3,4), ...; even order keeps
    modes 0 and 1 free and pairs (2,3), (4,5), ...
    """
    if order < 3:
        raise InvalidArgument(f"witness contractions need order >= 3, got {order}")
    free = (0,) if order % 2 else (0, 1)
    start = len(free)
    return free, [(m, m + 1) for m in range(start, order, 2)]


def _resolve_pairs(order: int, pairs) -> Tuple[Tuple[int, ...], List[Tuple[int, int]]]:
    if pairs is None:
        return default_pairs(order)
    pairs = [tuple(int(m) for m in p) for p in pairs]
    used = [m for p in pairs for m in p]
    if any(len(p) != 2 for p in pairs) or len(set(used)) != len(used) or not all(0 <= m < order for m in used):
        raise InvalidArgument(f"invalid mode pairing {pairs} for order {order}")
    free = tuple(m for m in range(order) if m not in used)
    if len(free) not in (1, 2):
        raise InvalidArgument(f"pairing must leave one or two free modes, leaves {free}")
    return free, pairs


def _small_nuclear(c: np.ndarray) -> float:
    if c.ndim == 1:
        return float(np.sqrt(c @ c))
    return linalg.nuclear_norm(c)


def witness_contract(a: np.ndarray, witnesses: Sequence[np.ndarray], pairs) -> np.ndarray:
    letters = string.ascii_letters[: a.ndim]
    ops = [a]
    subs = [letters]
    for (p, q), w in zip(pairs, witnesses):
        ops.append(w)
        subs.append(letters[p] + letters[q])
    used = {m for pq in pairs for m in pq}
    out = "".join(letters[m] for m in range(a.ndim) if m not in used)
    return np.einsum(",".join(subs) + "->" + out, *ops)


def nuclear_lower_witness(a, witnesses: Sequence, pairs=None) -> float:
    """Nuclear norm of ``A`` contracted against the witness matrices.

    Witnesses are rescaled to unit nuclear norm first; a zero witness is
    rejected. The result is a vector (odd order) or matrix (even order) whose
    nuclear norm never exceeds that of ``A``.
    """
    a = as_tensor(a)
    free, pairs = _resolve_pairs(a.ndim, pairs)
    if len(witnesses) != len(pairs):
        raise InvalidArgument(f"need {len(pairs)} witness matrices, got {len(witnesses)}")
    scaled = []
    for (p, q), w in zip(pairs, witnesses):
        w = np.asarray(w, dtype=np.float64)
        if w.shape != (a.shape[p], a.shape[q]):
            raise InvalidArgument(f"witness for modes ({p}, {q}) must be {(a.shape[p], a.shape[q])}, got {w.shape}")
        nn = linalg.nuclear_norm(w)
        if nn == 0.0:
            raise InvalidArgument("witness matrix is zero")
        scaled.append(w / nn)
    return _small_nuclear(witness_contract(a, scaled, pairs))


@dataclass
class WitnessSearch:
    value: float
    witnesses: List[np.ndarray]
    restarts_used: int
    best_restart: int
    history: List[float] = field(default_factory=list)


def _contract_vectors(a: np.ndarray, vecs: dict) -> np.ndarray:
    """Contract the modes in ``vecs`` (mode -> vector); remaining modes keep their order."""
    out = a
    for m in sorted(vecs, reverse=True):
        out = np.tensordot(out, vecs[m], axes=([m], [0]))
    return out


def _dual_maximizer(c: np.ndarray, rng) -> np.ndarray:
    """Element W of the unit spectral-norm ball with <c, W> = ||c||_*."""
    if c.ndim == 1:
        n = float(np.sqrt(c @ c))
        return c / n if n > 0 else random_unit_vector(rng, c.size)
    if not np.any(c):
        return np.outer(random_unit_vector(rng, c.shape[0]), random_unit_vector(rng, c.shape[1]))
    return linalg.polar_factor(c)


def nuclear_lower_search(
    a,
    iterations: int = 200,
    seed: int = 0,
    restarts: int = 16,
    pairs=None,
    tol: float = 1e-12,
) -> WitnessSearch:
    """Maximize ``nuclear_lower_witness`` over rank-one witnesses ``u v^T``.

    The objective is convex in each witness, so over the unit nuclear-norm
    ball its maximum sits at a rank-one extreme point; only unit ``u, v`` are
    searched. Each sweep fixes the dual maximizer ``W`` of the current result
    and then updates every ``u`` and ``v`` to the normalized contraction of
    ``A`` against ``W`` and all other factors. Every step is an exact block
    maximization of a lower bound that touches the objective, so sweep values
    never decrease. Restart 0 starts from constant vectors, the rest from
    ``rng_for(seed, r)``.
    """
    a = as_tensor(a)
    free, pairs = _resolve_pairs(a.ndim, pairs)
    paired = [m for pq in pairs for m in pq]
    if not np.any(a):
        wit = [np.outer(np.eye(a.shape[p])[0], np.eye(a.shape[q])[0]) for p, q in pairs]
        return WitnessSearch(0.0, wit, restarts, 0, [0.0])

    best: Optional[WitnessSearch] = None
    for r in range(max(1, restarts)):
        rng = rng_for(seed, r)
        if r == 0:
            vecs = {m: np.full(a.shape[m], 1.0 / math.sqrt(a.shape[m])) for m in paired}
        else:
            vecs = {m: random_unit_vector(rng, a.shape[m]) for m in paired}
        history = []
        value = _small_nuclear(_contract_vectors(a, vecs))
        history.append(value)
        for _ in range(iterations):
            c = _contract_vectors(a, vecs)
            w = _dual_maximizer(c, rng)
            for m in paired:
                others = {k: v for k, v in vecs.items() if k != m}
                t = _contract_vectors(a, others)
                # remaining axes: free modes and m in increasing mode order
                rest = sorted(list(free) + [m])
                pos = rest.index(m)
                axes_t = [i for i in range(t.ndim) if i != pos]
                g = np.tensordot(t, w, axes=(axes_t, list(range(w.ndim))))
                ng = float(np.sqrt(g @ g))
                vecs[m] = g / ng if ng > 0 else random_unit_vector(rng, a.shape[m])
            new = _small_nuclear(_contract_vectors(a, vecs))
            history.append(new)
            if abs(new - value) <= tol * max(new, 1e-300):
                value = new
                break
            value = new
        if best is None or value > best.value:
            wit = [np.outer(vecs[p], vecs[q]) for p, q in pairs]
            best = WitnessSearch(value, wit, restarts, r, history)
    return best


@dataclass
class NuclearInterval:
    lower: float
    upper: float
    lower_witness: List[np.ndarray] = field(repr=False)
    upper_witness: List[RankOneTerm] = field(repr=False)
    residual_norm: float = 0.0


def nuclear_interval(
    a,
    seed: int = 0,
    max_terms: int = GREEDY_MAX_TERMS,
    tol: float = GREEDY_TOL,
    restarts: int = GREEDY_RESTARTS,
    search_iterations: int = 200,
    search_restarts: int = 16,
) -> NuclearInterval:
    """Lower and upper bounds on ``||A||_*`` with their witnesses.

    Vectors and matrices are exact (2-norm, sum of singular values). Raises
    ``NumericalFailure`` if the bounds cross, which would mean a bug.
    """
    a = as_tensor(a)
    if a.ndim == 1:
        v = float(np.sqrt(a @ a))
        term = RankOneTerm(v, [a / v]) if v > 0 else RankOneTerm(0.0, [np.eye(a.size)[0]])
        return NuclearInterval(v, v, [], [term], 0.0)
    up = nuclear_upper_greedy(a, max_terms=max_terms, tol=tol, seed=seed, restarts=restarts)
    if a.ndim == 2:
        exact = linalg.nuclear_norm(a)
        lower, upper, lw = exact, exact, []
    else:
        low = nuclear_lower_search(a, iterations=search_iterations, seed=seed, restarts=search_restarts)
        lower, upper, lw = low.value, up.upper, low.witnesses
    if lower > upper + INTERVAL_SLACK * max(1.0, upper):
        raise NumericalFailure(f"nuclear interval crossed: lower {lower!r} > upper {upper!r}")
    return NuclearInterval(lower, upper, lw, up.terms, up.residual_norm)


def contraction_matrix(a, mode: int) -> np.ndarray:
    """Gram matrix of the mode-``mode`` slices (0-based mode index).

    Entry (r, s) sums a[..r..] * a[..s..] over every other index; the matrix is
    symmetric positive semidefinite with trace ``||A||_F^2``.
    """
    a = as_tensor(a)
    if a.ndim < 2:
        raise InvalidArgument("contraction matrices need order >= 2")
    if not 0 <= mode < a.ndim:
        raise InvalidArgument(f"mode {mode} out of range for order {a.ndim}")
    others = [m for m in range(a.ndim) if m != mode]
    g = np.tensordot(a, a, axes=(others, others))
    return 0.5 * (g + g.T)


@dataclass
class RadiusBoundResult:
    """``rho`` is the spectral radius of the contraction matrix; ``spectral``
    and ``nuclear_upper`` are the two factors of ``product_upper``."""

    rho: float
    spectral: float
    nuclear_upper: float
    product_upper: float
    holds: bool


def radius_bound_check(a, mode: int, seed: int = 0, slack: float = 1e-6, restarts: int = 32) -> RadiusBoundResult:
    """Compare the contraction-matrix radius with spectral x nuclear-upper.

    The true bound is ``rho <= ||A||_* ||A||_S``. ``hopm`` under-estimates
    the spectral factor, so ``holds`` relies on multistart finding the global
    maximum for the small tensors this is meant for.
    """
    a = as_tensor(a)
    g = contraction_matrix(a, mode)
    rho = float(np.max(np.abs(linalg.sym_eig(g).values)))
    spectral = hopm(a, restarts=restarts, seed=seed).value
    nuc = nuclear_upper_greedy(a, seed=seed).upper
    product = spectral * nuc
    return RadiusBoundResult(rho, spectral, nuc, product, rho <= product + slack)
