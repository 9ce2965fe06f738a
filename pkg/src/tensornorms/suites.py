"""Seeded property suites for the norm inequalities.

Every suite draws its instances from ``rng_for(seed, trial)`` so a run is
reproducible from ``(suite, trials, seed)``. Checks that involve a spectral
norm only ever have a ``hopm`` lower bound for it, and nuclear norms only an
interval; each check below states which direction it uses.

The registry keys are the suite names accepted by ``tensornorms verify``:

==========================  ==============================================
theorem-1                   nuclear norm is submultiplicative
theorem-2                   ||C||_S <= ||A||_S ||B||_*
theorem-3-positive          one-norm and Frobenius are submultiplicative
theorem-3-counterexamples   infinity and spectral norms are not
prop-p2                     norm products of a matrix and its inverse
prop-51                     contraction-matrix radius <= ||A||_S ||A||_*
gelfand-properties          homogeneity, cube law, domination, decay
==========================  ==============================================
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Dict, List

import numpy as np

from . import linalg
from .core import ContractionPlan, contract_product, elementwise_norm, rng_for
from .errors import NumericalFailure
from .fixtures import load_fixture
from .nucnorm import nuclear_lower_search, nuclear_upper_greedy, radius_bound_check
from .power import cubic_power, gelfand_iterate
from .specnorm import hopm

SUITE_RESTARTS = 8


@dataclass
class SuiteResult:
    name: str
    trials: int
    checks: int = 0
    violations: List[str] = field(default_factory=list)
    notes: List[str] = field(default_factory=list)
    expect_violation: bool = False

    @property
    def passed(self) -> bool:
        return not self.violations


def random_triple(rng, max_dim: int = 3, max_order: int = 3):
    """Random (A, B, plan) with orders <= ``max_order`` and modes <= ``max_dim``."""
    k = int(rng.integers(1, max_order))
    p = int(rng.integers(1, max_order - k + 1))
    q = int(rng.integers(0, max_order - p + 1))
    dims = [int(n) for n in rng.integers(1, max_dim + 1, size=k + p + q)]
    a = rng.standard_normal(dims[: k + p])
    b = rng.standard_normal(dims[k:])
    return a, b, ContractionPlan(k, p, q)


def nuclear_lower(c: np.ndarray, seed: int = 0) -> float:
    """Certified lower bound on the nuclear norm (exact for order <= 2)."""
    if c.ndim == 1:
        return float(np.sqrt(c @ c))
    if c.ndim == 2:
        return linalg.nuclear_norm(c)
    return nuclear_lower_search(c, seed=seed, restarts=4, iterations=100).value


def nuclear_upper(c: np.ndarray, seed: int = 0) -> float:
    if c.ndim == 1:
        return float(np.sqrt(c @ c))
    if c.ndim == 2:
        return linalg.nuclear_norm(c)
    return nuclear_upper_greedy(c, seed=seed, restarts=SUITE_RESTARTS).upper


def nuclear_submultiplicative(trials: int, seed: int) -> SuiteResult:
    """Nuclear norm submultiplicativity, checked as lower(C) <= upper(A) upper(B)."""
    res = SuiteResult("theorem-1", trials)
    for t in range(trials):
        rng = rng_for(seed, t)
        a, b, plan = random_triple(rng)
        c = contract_product(a, b, plan)
        lhs = nuclear_lower(c, seed)
        rhs = nuclear_upper(a, seed) * nuclear_upper(b, seed)
        res.checks += 1
        if lhs > rhs + 1e-6:
            res.violations.append(f"trial {t}: plan {plan}, lower(C)={lhs:.15g} > {rhs:.15g}")
    return res


def spectral_times_nuclear(trials: int, seed: int) -> SuiteResult:
    """||C||_S <= ||A||_S ||B||_*, checked as hopm(C) <= hopm(A) upper(B).

    hopm(A) is only a lower bound, so this leans on multistart finding the
    global maximum for these small tensors.
    """
    res = SuiteResult("theorem-2", trials)
    for t in range(trials):
        rng = rng_for(seed, t)
        a, b, plan = random_triple(rng)
        c = contract_product(a, b, plan)
        lhs = hopm(c, seed=seed).value
        rhs = hopm(a, seed=seed).value * nuclear_upper(b, seed)
        res.checks += 1
        if lhs > rhs + 1e-8:
            res.violations.append(f"trial {t}: plan {plan}, hopm(C)={lhs:.15g} > {rhs:.15g}")
    return res


def elementwise_submultiplicative(trials: int, seed: int) -> SuiteResult:
    """1-norm and Frobenius norm submultiplicativity (both exact)."""
    res = SuiteResult("theorem-3-positive", trials)
    for t in range(trials):
        rng = rng_for(seed, t)
        a, b, plan = random_triple(rng)
        c = contract_product(a, b, plan)
        for kind in ("one", "frobenius"):
            lhs = elementwise_norm(c, kind)
            rhs = elementwise_norm(a, kind) * elementwise_norm(b, kind)
            res.checks += 1
            if lhs > rhs * (1 + 1e-12):
                res.violations.append(f"trial {t}: {kind} {lhs:.15g} > {rhs:.15g}")
    return res


INFINITY_COUNTEREXAMPLE = (np.ones((2, 2)), np.ones((2, 2)), ContractionPlan(1, 1, 1))


def non_submultiplicative_examples(trials: int = 1, seed: int = 0) -> SuiteResult:
    """Stored instances on which the infinity and spectral norms fail submultiplicativity.

    Passes when both instances violate the inequality. The spectral instance
    compares hopm values only; hopm(C) is a certified lower bound for
    ||C||_S, so exceeding hopm(A) hopm(B) is conclusive as long as hopm(A)
    is the true maximum (multistart on a 2x2x2x2 tensor).
    """
    res = SuiteResult("theorem-3-counterexamples", 1, expect_violation=True)
    a, b, plan = INFINITY_COUNTEREXAMPLE
    c = contract_product(a, b, plan)
    lhs = elementwise_norm(c, "infinity")
    rhs = elementwise_norm(a, "infinity") * elementwise_norm(b, "infinity")
    res.checks += 1
    res.notes.append(f"infinity: ||J J||_inf = {lhs:.15g} vs ||J||_inf^2 = {rhs:.15g}")
    if not lhs > rhs:
        res.violations.append("infinity-norm counterexample no longer violates the inequality")

    a = load_fixture("product_counterexample")
    c = contract_product(a, a, ContractionPlan(2, 2, 2))
    sa = hopm(a, seed=seed).value
    sc = hopm(c, seed=seed).value
    res.checks += 1
    res.notes.append(f"spectral: hopm(C) = {sc:.15g} vs hopm(A) hopm(B) = {sa * sa:.15g}")
    if not sc > sa * sa:
        res.violations.append("spectral-norm counterexample did not reproduce")
    return res


def inverse_norm_products(trials: int, seed: int) -> SuiteResult:
    """||A||_* ||A^-1||_* >= n and ||A||_* ||A^-1||_S >= 1 on random invertible 4x4."""
    res = SuiteResult("prop-p2", trials)
    n = 4
    for t in range(trials):
        rng = rng_for(seed, t)
        m = rng.standard_normal((n, n))
        try:
            inv = linalg.inverse(m)
        except NumericalFailure:
            res.notes.append(f"trial {t}: skipped, numerically singular")
            continue
        err = float(np.linalg.norm(m @ inv - np.eye(n)))
        if err > 1e-10:
            res.notes.append(f"trial {t}: skipped, ||A A^-1 - I||_F = {err:.3g}")
            continue
        nm = linalg.matrix_norms(m, radius=False)
        ni = linalg.matrix_norms(inv, radius=False)
        res.checks += 2
        if nm.nuclear * ni.nuclear < n - 1e-10:
            res.violations.append(f"trial {t}: nuclear product {nm.nuclear * ni.nuclear:.15g} < {n}")
        if nm.nuclear * ni.spectral < 1 - 1e-10:
            res.violations.append(f"trial {t}: nuclear x spectral {nm.nuclear * ni.spectral:.15g} < 1")
    return res


def contraction_radius_bound(trials: int, seed: int) -> SuiteResult:
    """rho(contraction matrix) <= hopm(A) x nuclear upper(A) for random 2x3x2 tensors."""
    res = SuiteResult("prop-51", trials)
    for t in range(trials):
        a = rng_for(seed, t).standard_normal((2, 3, 2))
        for mode in range(3):
            r = radius_bound_check(a, mode, seed=seed)
            res.checks += 1
            if not r.holds:
                res.violations.append(f"trial {t} mode {mode}: rho {r.rho:.15g} > {r.product_upper:.15g}")
    return res


def _rho(a, max_m: int = 40) -> float:
    return gelfand_iterate(a, ("frobenius",), max_m=max_m, tol=1e-14).rho_estimate


def gelfand_properties(trials: int, seed: int) -> SuiteResult:
    """Homogeneity, cube law, norm domination and the rho < 1 decay criterion."""
    res = SuiteResult("gelfand-properties", trials)
    for t in range(trials):
        rng = rng_for(seed, t)
        shape = tuple(int(n) for n in rng.integers(1, 4, size=3))
        a = rng.standard_normal(shape)
        alpha = float(rng.uniform(0.2, 3.0)) * (1 if rng.random() < 0.5 else -1)
        rho = _rho(a)

        res.checks += 1
        scaled = _rho(alpha * a)
        if abs(scaled - abs(alpha) * rho) > 1e-8 * max(abs(alpha) * rho, 1e-300):
            res.violations.append(f"trial {t}: rho(alpha A) = {scaled:.15g} vs |alpha| rho(A) = {abs(alpha) * rho:.15g}")

        res.checks += 1
        cubed = _rho(cubic_power(a))
        if abs(cubed - rho**3) > 1e-6 * max(rho**3, 1e-300):
            res.violations.append(f"trial {t}: rho(A^3) = {cubed:.15g} vs rho(A)^3 = {rho ** 3:.15g}")

        for kind in ("one", "frobenius"):
            res.checks += 1
            if rho > elementwise_norm(a, kind) + 1e-9:
                res.violations.append(f"trial {t}: rho {rho:.15g} exceeds {kind} norm")

        if rho == 0.0:
            res.notes.append(f"trial {t}: rho = 0, decay check skipped")
            continue
        for target in (0.9, 1.1):
            tr = gelfand_iterate(a * (target / rho), ("frobenius",), max_m=20, stop_early=False)
            log_final = tr.rows[-1].log_scale
            res.checks += 1
            if target < 1 and not log_final < -100.0:
                res.violations.append(f"trial {t}: rho 0.9 but ln||A^(3^20)||_F = {log_final:.6g}")
            if target > 1 and not log_final > 100.0:
                res.violations.append(f"trial {t}: rho 1.1 but ln||A^(3^20)||_F = {log_final:.6g}")
    return res


SUITES: Dict[str, Callable[[int, int], SuiteResult]] = {
    "theorem-1": nuclear_submultiplicative,
    "theorem-2": spectral_times_nuclear,
    "theorem-3-positive": elementwise_submultiplicative,
    "theorem-3-counterexamples": non_submultiplicative_examples,
    "prop-p2": inverse_norm_products,
    "prop-51": contraction_radius_bound,
    "gelfand-properties": gelfand_properties,
}


def run_suite(name: str, trials: int = 100, seed: int = 0) -> SuiteResult:
    return SUITES[name](trials, seed)
