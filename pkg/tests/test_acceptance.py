"""Acceptance criteria, one test each.

Every test prints a single ``criterion N: PASS|FAIL`` line (also collected
into the pytest terminal summary) listing the sub-checks that failed.
Run ``python tests/test_acceptance.py`` to get just those lines.
"""

import math
import time

import numpy as np
import pytest

from tensornorms.core import ContractionPlan, contract_product, elementwise_norm, outer
from tensornorms.fixtures import load_fixture
from tensornorms.linalg import sym_eig
from tensornorms.nucnorm import contraction_matrix, nuclear_interval, nuclear_upper_greedy
from tensornorms.power import classify, cubic_power, gelfand_iterate, quintic_power
from tensornorms.repro import DISCREPANCY, run_repro, witness_value_dense_loops
from tensornorms.specnorm import bruteforce_gap, hopm, spectral_bruteforce
from tensornorms.suites import run_suite

try:
    from conftest import ACCEPTANCE_LINES
except ImportError:  # run as a script
    ACCEPTANCE_LINES = []

TABLE_LIMIT = 2.537118666456933


def report(number, title, checks):
    failed = [label for label, ok in checks if not ok]
    line = f"criterion {number}: {'PASS' if not failed else 'FAIL'}  {title}"
    if failed:
        line += "  [failed: " + "; ".join(failed) + "]"
    print(line)
    ACCEPTANCE_LINES.append(line)
    return failed


def criterion_1():
    start = time.perf_counter()
    a = load_fixture("product_counterexample")
    c = contract_product(a, a, ContractionPlan(2, 2, 2))
    printed = load_fixture("product_counterexample_reference_c")
    sa = hopm(a).value
    sc = hopm(c).value
    elapsed = time.perf_counter() - start
    mismatches = [tuple(int(i) + 1 for i in idx) for idx in np.argwhere(c != printed)]
    return report(1, "product example: printed entries, spectral norms, counterexample", [
        ("all 16 printed entries exactly" + "".join(
            f"; entry {m}: computed {c[tuple(i - 1 for i in m)]:g}, printed {printed[tuple(i - 1 for i in m)]:g}"
            for m in mismatches), not mismatches),
        (f"hopm(A) = {sa:.6f} >= 16.3509", sa >= 16.3609 - 1e-2),
        (f"hopm(C) = {sc:.6f} >= 271.5403", sc >= 271.5503 - 1e-2),
        ("hopm(C) > hopm(A) hopm(B)", sc > sa * sa),
        (f"runtime {elapsed:.2f}s < 1s", elapsed < 1.0),
    ])


def criterion_2():
    start = time.perf_counter()
    tr = gelfand_iterate(load_fixture("gelfand_4x3x2"), ("one", "fro", "inf"), max_m=31, stop_early=False)
    elapsed = time.perf_counter() - start
    r0 = tr.rows[0].r
    last = tr.rows[-1]
    monotone = all(
        all(b <= a + 1e-9 for a, b in zip(col, col[1:])) for col in (tr.column("one"), tr.column("frobenius"))
    )
    return report(2, "Gelfand table: first row, common limit, monotone columns", [
        ("m=0 one-norm 15.6755", round(r0["one"], 4) == 15.6755),
        ("m=0 frobenius 3.86508", round(r0["frobenius"], 5) == 3.86508),
        ("m=0 infinity 1.921669", round(r0["infinity"], 6) == 1.921669),
        ("reached m = 31", last.m == 31),
        ("all columns within 1e-9 of 2.537118666456933",
         all(abs(v - TABLE_LIMIT) <= 1e-9 for v in last.r.values())),
        ("one and frobenius non-increasing", monotone),
        (f"runtime {elapsed:.3f}s < 1s", elapsed < 1.0),
    ])


def criterion_3():
    a = load_fixture("sym_order3")
    mats = [contraction_matrix(a, j) for j in range(3)]
    rhos = [float(np.max(np.abs(sym_eig(g).values))) for g in mats]
    spec = hopm(a).value
    iv = nuclear_interval(a)
    return report(3, "contraction example: 0.5 I, radius 0.5, radius bound", [
        ("all contraction matrices equal 0.5 I exactly", all(np.array_equal(g, 0.5 * np.eye(2)) for g in mats)),
        ("radii 0.5 within 1e-10", all(abs(r - 0.5) <= 1e-10 for r in rhos)),
        (f"spectral norm {spec!r} = 0.5 within 1e-6", abs(spec - 0.5) <= 1e-6),
        (f"nuclear interval [{iv.lower:.6g}, {iv.upper:.6g}] contains 2", iv.lower <= 2.0 <= iv.upper),
        ("rho <= spectral x nuclear", all(r <= spec * iv.upper for r in rhos) and max(rhos) <= 0.5 * 2.0),
    ])


def criterion_4():
    nil = load_fixture("nilpotent")
    cn = classify(nil)
    r1 = load_fixture("rank_one_unit")
    cr = classify(r1)
    s = 2 ** -0.5
    five = outer([np.array([0.6, 0.8]), np.array([s, -s]), np.array([1.0, 0.0]),
                  np.array([0.0, 1.0]), np.array([0.8, 0.6])])
    return report(4, "nilpotent and idempotent fixtures", [
        ("nilpotent cube is exactly zero", not np.any(cubic_power(nil))),
        ("nilpotent rho = 0", cn.rho == 0.0 and cn.nilpotent),
        ("unit rank-one exactly idempotent", np.array_equal(cubic_power(r1), r1)),
        ("unit rank-one rho = 1 within 1e-10", abs(cr.rho - 1.0) <= 1e-10),
        ("quintic variant A fixes a unit rank-one order-5 tensor within 1e-12",
         float(np.max(np.abs(quintic_power(five, "A") - five))) <= 1e-12),
    ])


def criterion_5():
    rep = run_repro()
    checks = []
    for name, fixture, derived, true_value in (
        ("sym3.lower_bound_all_ones", "sym_order3", 0.5, 2.0),
        ("sym4.lower_bound_all_ones", "sym_order4", 28 / 3, 12.0),
    ):
        a = load_fixture(fixture)
        loops = witness_value_dense_loops(a, np.ones(a.shape[-2:]))
        checks += [
            (f"{name} marked {DISCREPANCY}", rep.by_name(name).verdict == DISCREPANCY),
            (f"{name} loop oracle gives {derived:.6g}", abs(loops - derived) <= 1e-12),
            (f"{name} lower bound <= {true_value:g}", loops <= true_value),
        ]
    return report(5, "reference lower bounds flagged as discrepancies and confirmed", checks)


def criterion_6():
    start = time.perf_counter()
    names = ["theorem-1", "theorem-2", "theorem-3-positive", "prop-p2", "gelfand-properties",
             "prop-51", "theorem-3-counterexamples"]
    results = {n: run_suite(n, trials=100, seed=0) for n in names}
    elapsed = time.perf_counter() - start
    checks = [(f"{n}: {len(r.violations)} violations", r.passed) for n, r in results.items()]
    checks.append((f"total runtime {elapsed:.1f}s < 60s", elapsed < 60.0))
    return report(6, "property suites, 100 seeded trials each", checks)


def criterion_7():
    checks = []
    worst = 0.0
    for seed in range(10):
        a = np.random.default_rng(1000 + seed).standard_normal((2, 2, 2))
        h = hopm(a, seed=seed).value
        b = spectral_bruteforce(a, 720)
        gap = bruteforce_gap(a, 720)
        worst = max(worst, abs(h - b) / gap)
        checks.append((f"hopm vs grid, tensor {seed}", b - 1e-12 <= h <= b + gap))
    for seed in range(10):
        m = np.random.default_rng(2000 + seed).standard_normal((3, 4))
        up = nuclear_upper_greedy(m, seed=seed).upper
        checks.append((f"greedy vs SVD sum, matrix {seed}", abs(up - np.linalg.norm(m, "nuc")) <= 1e-6))
    for seed in range(5):
        a = np.random.default_rng(3000 + seed).standard_normal((2, 3, 2))
        tr = gelfand_iterate(a, ("fro",), max_m=3, stop_early=False)
        direct = a
        for m in range(4):
            if m:
                direct = cubic_power(direct)
            ref = elementwise_norm(direct, "frobenius")
            checks.append((f"scaled vs direct, tensor {seed} m={m}",
                           abs(math.exp(tr.rows[m].log_scale) - ref) <= 1e-9 * ref))
    return report(7, f"oracle equivalences (hopm within {worst:.2%} of the grid gap)", checks)


@pytest.mark.parametrize("check", [criterion_1, criterion_2, criterion_3, criterion_4,
                                   criterion_5, criterion_6, criterion_7],
                         ids=[f"criterion_{i}" for i in range(1, 8)])
def test_acceptance(check):
    failed = check()
    assert not failed, failed


if __name__ == "__main__":
    for fn in (criterion_1, criterion_2, criterion_3, criterion_4, criterion_5, criterion_6, criterion_7):
        fn()
