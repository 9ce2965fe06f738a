"""Cubic and quintic tensor powers and the Gelfand limit.

The cubic power of an order-3 tensor is

    t[i,j,k] = sum_{s,p,q} a[i,p,q] a[s,j,q] a[s,p,k]

and the quintic powers of order-5 tensors are the two five-factor
contractions ``QUINTIC_SUBSCRIPTS['A']`` and ``['B']``, in which every dummy
index appears in exactly two factors. Iterating the power map m times gives
``A^(d^m)`` (d = 3 or 5); ``||A^(d^m)||^(1/d^m)`` converges to the same
limit for every norm.

The raw iterates grow or shrink like ``rho^(d^m)``, which leaves double
precision after a handful of steps, so ``gelfand_iterate`` carries a unit
Frobenius-norm representative ``B_m`` and the logarithm of its scale.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence

import numpy as np

from .core import as_tensor, elementwise_norm
from .errors import InvalidArgument

CUBIC_SUBSCRIPTS = "ipq,sjq,spk->ijk"
# i1..i5 = abcde, j1..j5 = fghij, k1..k5 = klmno
QUINTIC_SUBSCRIPTS = {
    "A": "aghij,fbhij,fgcno,klmdo,klmne->abcde",
    "B": "aghij,kbhij,fgcno,flmdo,klmne->abcde",
}

NILPOTENT_FLOOR = 1e-12

TRACE_NORMS = {
    "one": "one",
    "1": "one",
    "fro": "frobenius",
    "frobenius": "frobenius",
    "2": "frobenius",
    "inf": "infinity",
    "infinity": "infinity",
    "nuclear": "nuclear-upper",
    "nuclear-upper": "nuclear-upper",
}


def cubic_power(a) -> np.ndarray:
    a = as_tensor(a)
    if a.ndim != 3:
        raise InvalidArgument(f"cubic power needs an order-3 tensor, got order {a.ndim}")
    return np.einsum(CUBIC_SUBSCRIPTS, a, a, a, optimize="greedy")


def quintic_power(a, variant: str = "A") -> np.ndarray:
    a = as_tensor(a)
    if a.ndim != 5:
        raise InvalidArgument(f"quintic power needs an order-5 tensor, got order {a.ndim}")
    try:
        subs = QUINTIC_SUBSCRIPTS[variant.upper()]
    except (KeyError, AttributeError):
        raise InvalidArgument(f"unknown quintic variant {variant!r}; use 'A' or 'B'") from None
    return np.einsum(subs, a, a, a, a, a, optimize="greedy")


def power_map(a, variant: Optional[str] = None):
    """Return ``(degree, map)`` for the order of ``a``."""
    a = as_tensor(a)
    if a.ndim == 3:
        if variant is not None:
            raise InvalidArgument("the quintic variant only applies to order-5 tensors")
        return 3, cubic_power
    if a.ndim == 5:
        v = "A" if variant is None else variant
        if v.upper() not in QUINTIC_SUBSCRIPTS:
            raise InvalidArgument(f"unknown quintic variant {variant!r}; use 'A' or 'B'")
        return 5, lambda x: quintic_power(x, v)
    raise InvalidArgument(f"power map defined for order 3 and 5, got order {a.ndim}")


def normalize_norm_kinds(kinds: Sequence[str]) -> List[str]:
    out = []
    for k in kinds:
        try:
            name = TRACE_NORMS[k.strip().lower()]
        except KeyError:
            raise InvalidArgument(f"unknown norm {k!r}; choose from one, fro, inf, nuclear") from None
        if name not in out:
            out.append(name)
    if not out:
        raise InvalidArgument("at least one norm is required")
    return out


def _norm(b: np.ndarray, kind: str, seed: int) -> float:
    if kind == "nuclear-upper":
        from .nucnorm import nuclear_upper_greedy

        return nuclear_upper_greedy(b, seed=seed, restarts=8).upper
    return elementwise_norm(b, kind)


@dataclass
class GelfandRow:
    """One step: ``r[kind] = ||A^(d^m)||_kind^(1/d^m)`` and ``log_scale = ln ||A^(d^m)||_F``."""

    m: int
    r: Dict[str, float]
    log_scale: float


@dataclass
class GelfandTrace:
    norms: List[str]
    degree: int
    rows: List[GelfandRow] = field(default_factory=list)
    rho_estimate: float = float("nan")
    classification: str = "iteration_cap"
    # last unit-Frobenius representative, kept for callers that need the direction
    representative: Optional[np.ndarray] = field(default=None, repr=False)

    def column(self, kind: str) -> List[float]:
        kind = TRACE_NORMS.get(kind, kind)
        return [row.r[kind] for row in self.rows]

    def to_delimited(self, delimiter: str = ",") -> str:
        header = ["m"] + self.norms + ["log_scale"]
        lines = [delimiter.join(header)]
        for row in self.rows:
            cells = [str(row.m)] + [format_real(row.r[k]) for k in self.norms] + [format_real(row.log_scale)]
            lines.append(delimiter.join(cells))
        return "\n".join(lines) + "\n"


def format_real(x: float) -> str:
    return f"{x:.15g}"


def gelfand_iterate(
    a,
    norms: Sequence[str] = ("frobenius",),
    max_m: int = 31,
    tol: float = 1e-10,
    variant: Optional[str] = None,
    stop_early: bool = True,
    seed: int = 0,
) -> GelfandTrace:
    """Log-scaled power iteration for the Gelfand limit.

    ``B_0 = A / ||A||_F`` and ``L_0 = ln ||A||_F``; each step forms
    ``C = power(B_m)``, ``s = ||C||_F``, ``B_{m+1} = C / s`` and
    ``L_{m+1} = d L_m + ln s``. Since the power map is homogeneous of degree
    d, ``A^(d^m) = exp(L_m) B_m`` exactly, so for any norm
    ``r_m = exp((L_m + ln ||B_m||) / d^m)``.

    Stops early (``classification='converged'``) when every requested column
    moved by at most ``tol``; ``s == 0`` or a Frobenius value below
    ``NILPOTENT_FLOOR`` gives ``'nilpotent_detected'`` with rho 0. The
    ``nuclear-upper`` column uses the greedy decomposition bound, which is
    not itself a norm.
    """
    a = as_tensor(a)
    degree, fmap = power_map(a, variant)
    kinds = normalize_norm_kinds(norms)
    if max_m < 1:
        raise InvalidArgument("max_m must be >= 1")
    if tol <= 0:
        raise InvalidArgument("tol must be positive")
    trace = GelfandTrace(kinds, degree)

    fro = elementwise_norm(a, "frobenius")
    if fro == 0.0:
        trace.rows.append(GelfandRow(0, {k: 0.0 for k in kinds}, -math.inf))
        trace.rho_estimate = 0.0
        trace.classification = "nilpotent_detected"
        return trace

    b = a / fro
    log_scale = math.log(fro)

    def row_for(m: int) -> GelfandRow:
        power = float(degree) ** m
        r = {k: math.exp((log_scale + math.log(_norm(b, k, seed))) / power) for k in kinds}
        return GelfandRow(m, r, log_scale)

    trace.rows.append(row_for(0))
    for m in range(1, max_m + 1):
        c = fmap(b)
        s = elementwise_norm(c, "frobenius")
        if s == 0.0:
            trace.rows.append(GelfandRow(m, {k: 0.0 for k in kinds}, -math.inf))
            trace.rho_estimate = 0.0
            trace.classification = "nilpotent_detected"
            return trace
        b = c / s
        log_scale = degree * log_scale + math.log(s)
        row = row_for(m)
        prev = trace.rows[-1]
        trace.rows.append(row)
        r_fro = math.exp(log_scale / float(degree) ** m)
        if r_fro < NILPOTENT_FLOOR:
            trace.rho_estimate = 0.0
            trace.classification = "nilpotent_detected"
            trace.representative = b
            return trace
        if stop_early and all(abs(row.r[k] - prev.r[k]) <= tol for k in kinds):
            trace.classification = "converged"
            break
    trace.rho_estimate = math.exp(log_scale / float(degree) ** trace.rows[-1].m)
    trace.representative = b
    return trace


@dataclass
class Classification:
    nilpotent: bool
    idempotent: bool
    rho: float
    trace: GelfandTrace = field(repr=False)


def classify(a, max_m: int = 20, tol: float = 1e-10, variant: Optional[str] = None) -> Classification:
    """Nilpotent / idempotent flags and the Gelfand limit estimate.

    Idempotent means ``||power(A) - A||_F <= tol * max(1, ||A||_F)``.
    Nilpotent means the scaled iteration hit an exact zero or fell below
    ``NILPOTENT_FLOOR`` within ``max_m`` steps; a False here is an
    observation, not a proof that no later power vanishes.
    """
    a = as_tensor(a)
    _, fmap = power_map(a, variant)
    diff = elementwise_norm(fmap(a) - a, "frobenius")
    idempotent = diff <= tol * max(1.0, elementwise_norm(a, "frobenius"))
    trace = gelfand_iterate(a, ("frobenius",), max_m=max_m, tol=tol, variant=variant)
    nilpotent = trace.classification == "nilpotent_detected"
    return Classification(nilpotent, idempotent, trace.rho_estimate, trace)
