"""Dense tensors, rank-one products and the general contraction product.

Tensors are plain ``numpy.ndarray`` objects of dtype float64 stored in C
(row-major, last index fastest) order. ``as_tensor`` is the single gate that
enforces the invariants: order at least one, every mode at least one, finite
entries.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import InvalidArgument

NORM_ALIASES = {
    "one": "one",
    "1": "one",
    "l1": "one",
    "inf": "infinity",
    "infinity": "infinity",
    "max": "infinity",
    "fro": "frobenius",
    "frobenius": "frobenius",
    "2": "frobenius",
}

_SEED_MASK = (1 << 64) - 1


def as_tensor(x, name: str = "tensor") -> np.ndarray:
    """Validate ``x`` and return it as a C-ordered float64 array."""
    a = np.ascontiguousarray(x, dtype=np.float64)
    if a.ndim < 1:
        raise InvalidArgument(f"{name} must have order >= 1, got a scalar")
    if any(n < 1 for n in a.shape):
        raise InvalidArgument(f"{name} has an empty mode: shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise InvalidArgument(f"{name} contains NaN or Inf")
    return a


def outer(factors: Sequence) -> np.ndarray:
    """Rank-one tensor ``f1 o f2 o ... o fk``."""
    if len(factors) == 0:
        raise InvalidArgument("outer() needs at least one factor")
    vecs = []
    for i, f in enumerate(factors):
        v = np.asarray(f, dtype=np.float64)
        if v.ndim != 1 or v.size == 0:
            raise InvalidArgument(f"factor {i} must be a nonempty vector")
        vecs.append(v)
    out = vecs[0]
    for v in vecs[1:]:
        out = np.multiply.outer(out, v)
    return np.ascontiguousarray(out)


def inner(a, b) -> float:
    a = as_tensor(a, "a")
    b = as_tensor(b, "b")
    if a.shape != b.shape:
        raise InvalidArgument(f"inner product needs equal shapes, got {a.shape} and {b.shape}")
    return float(np.dot(a.ravel(), b.ravel()))


@dataclass(frozen=True)
class ContractionPlan:
    """Mode split ``(k, p, q)`` of the contraction product.

    The first ``k`` modes of ``a`` survive, the last ``p`` modes of ``a`` are
    summed against the first ``p`` modes of ``b``, and the last ``q`` modes of
    ``b`` survive.
    """

    k: int
    p: int
    q: int = 0

    def __post_init__(self):
        if self.k < 1 or self.p < 1 or self.q < 0:
            raise InvalidArgument(f"plan needs k >= 1, p >= 1, q >= 0; got {self}")

    @classmethod
    def for_shapes(cls, a_shape, b_shape, p: int) -> "ContractionPlan":
        return cls(len(a_shape) - p, p, len(b_shape) - p)

    def check(self, a_shape, b_shape) -> None:
        if len(a_shape) != self.k + self.p:
            raise InvalidArgument(f"order of a is {len(a_shape)}, plan needs k+p = {self.k + self.p}")
        if len(b_shape) != self.p + self.q:
            raise InvalidArgument(f"order of b is {len(b_shape)}, plan needs p+q = {self.p + self.q}")
        if tuple(a_shape[self.k:]) != tuple(b_shape[: self.p]):
            raise InvalidArgument(
                f"contracted modes do not match: a{tuple(a_shape)} trailing {tuple(a_shape[self.k:])} "
                f"vs b{tuple(b_shape)} leading {tuple(b_shape[: self.p])}"
            )

    def result_shape(self, a_shape, b_shape) -> tuple:
        return tuple(a_shape[: self.k]) + tuple(b_shape[self.p:])


def contract_product(a, b, plan: ContractionPlan) -> np.ndarray:
    """Sum over the ``p`` shared modes of ``a`` and ``b``.

    The result has the leading ``k`` modes of ``a`` followed by the trailing
    ``q`` modes of ``b``; ``q = 0`` gives an order-``k`` tensor.
    """
    a = as_tensor(a, "a")
    b = as_tensor(b, "b")
    plan.check(a.shape, b.shape)
    rows = int(np.prod(a.shape[: plan.k]))
    inner_dim = int(np.prod(a.shape[plan.k:]))
    cols = int(np.prod(b.shape[plan.p:])) if plan.q else 1
    # row-major flattening keeps the contracted block contiguous in both operands
    c = a.reshape(rows, inner_dim) @ b.reshape(inner_dim, cols)
    return np.ascontiguousarray(c.reshape(plan.result_shape(a.shape, b.shape)))


def elementwise_norm(a, kind: str) -> float:
    """``one`` (sum of |entries|), ``infinity`` (max |entry|) or ``frobenius``."""
    a = as_tensor(a)
    try:
        kind = NORM_ALIASES[kind]
    except KeyError:
        raise InvalidArgument(f"unknown elementwise norm {kind!r}") from None
    if kind == "one":
        return float(np.abs(a).sum())
    if kind == "infinity":
        return float(np.abs(a).max())
    return float(np.sqrt(np.dot(a.ravel(), a.ravel())))


def sub_seed(seed: int, index: int = 0) -> int:
    """Seed for the ``index``-th independent stream derived from ``seed``."""
    return (int(seed) ^ int(index)) & _SEED_MASK


def rng_for(seed: int, index: int = 0) -> np.random.Generator:
    """PCG64 generator for stream ``index`` of ``seed``.

    numpy's PCG64 is bit-reproducible across platforms for a fixed seed, which
    is what makes multistart traces comparable between machines.
    """
    return np.random.Generator(np.random.PCG64(sub_seed(seed, index)))


def random_tensor(shape, seed: int = 0, distribution: str = "standard-normal") -> np.ndarray:
    shape = tuple(int(n) for n in shape)
    if len(shape) < 1 or any(n < 1 for n in shape):
        raise InvalidArgument(f"invalid shape {shape}")
    rng = rng_for(seed)
    if distribution in ("standard-normal", "normal"):
        return rng.standard_normal(shape)
    if distribution in ("uniform", "uniform(-1,1)"):
        return rng.uniform(-1.0, 1.0, size=shape)
    raise InvalidArgument(f"unknown distribution {distribution!r}")


def random_unit_vector(rng: np.random.Generator, n: int) -> np.ndarray:
    v = rng.standard_normal(n)
    nv = np.linalg.norm(v)
    while nv == 0.0:
        v = rng.standard_normal(n)
        nv = np.linalg.norm(v)
    return v / nv
