"""Rerun the bundled reference examples and compare with the published values.

Each case reports the reference value, the computed value and a verdict:

``reproduced``
    the computed value matches the reference to its printed precision;
``bounded``
    the reference value lies inside a certified interval we computed;
``discrepancy-documented``
    the reference value is not reproduced, an independent computation
    confirms ours, and the note explains the difference;
``failed``
    none of the above (a regression).
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from decimal import Decimal
from typing import List

import numpy as np

from .core import ContractionPlan, contract_product, elementwise_norm
from .fixtures import load_fixture
from .nucnorm import contraction_matrix, nuclear_interval, nuclear_lower_witness, radius_bound_check
from .power import classify, cubic_power, format_real, gelfand_iterate, quintic_power
from .specnorm import hopm
from . import linalg

REPRODUCED = "reproduced"
BOUNDED = "bounded"
DISCREPANCY = "discrepancy-documented"
FAILED = "failed"

# m, one-norm, frobenius, infinity, as printed
GELFAND_TABLE = [
    ("0", "15.6755", "3.86508", "1.92167"),
    ("1", "4.0199", "2.70142", "2.31202"),
    ("2", "2.82591", "2.54596", "2.45592"),
    ("3", "2.61624", "2.53718", "2.50769"),
    ("4", "2.56299", "2.53712", "2.52722"),
    ("5", "2.54571", "2.53712", "2.53382"),
    ("6", "2.53998", "2.537118666456933", "2.53602"),
    ("7", "2.538072064165983", "2.537118666456933", "2.536751440470295"),
    ("8", "2.537436425894090", "2.537118666456933", "2.536996251888380"),
    ("9", "2.537224581847678", "2.537118666456933", "2.537077860944460"),
    ("10", "2.537153971095906", "2.537118666456933", "2.537105064546520"),
    ("11", "2.537130434615338", "2.537118666456933", "2.537114132478693"),
    ("12", "2.537122589170336", "2.537118666456933", "2.537117155129952"),
    ("13", "2.537119974027393", "2.537118666456933", "2.537118162681173"),
    ("14", "2.537119102313678", "2.537118666456933", "2.537118498531668"),
    ("15", "2.537118811742506", "2.537118666456933", "2.537118610481843"),
    ("16", "2.537118714885456", "2.537118666456933", "2.537118647798569"),
    ("17", "2.537118682599774", "2.537118666456933", "2.537118660237478"),
    ("18", "2.537118671837880", "2.537118666456933", "2.537118664383781"),
    ("19", "2.537118668250582", "2.537118666456933", "2.537118665765882"),
    ("20", "2.537118667054816", "2.537118666456933", "2.537118666226583"),
    ("21", "2.537118666656227", "2.537118666456933", "2.537118666380149"),
    ("22", "2.537118666523364", "2.537118666456933", "2.537118666431338"),
    ("23", "2.537118666479076", "2.537118666456933", "2.537118666448401"),
    ("24", "2.537118666464314", "2.537118666456933", "2.537118666454089"),
    ("25", "2.537118666459393", "2.537118666456933", "2.537118666455985"),
    ("26", "2.537118666457753", "2.537118666456933", "2.537118666456617"),
    ("27", "2.537118666457206", "2.537118666456933", "2.537118666456827"),
    ("28", "2.537118666457024", "2.537118666456933", "2.537118666456898"),
    ("29", "2.537118666456963", "2.537118666456933", "2.537118666456921"),
    ("30", "2.537118666456943", "2.537118666456933", "2.537118666456929"),
    ("31", "2.537118666456936", "2.537118666456933", "2.537118666456931"),
]
GELFAND_LIMIT = 2.537118666456933

# entries whose printed value is known to differ from the contraction, with the reason
PRODUCT_ENTRY_ERRATA = {
    (1, 1, 1, 1): "printed 1252; the contraction is 3*3 + (-3)(-3) + 3*3 + 15*15 = 252, "
    "and only 252 is consistent with the printed ||C||_S = 271.5503",
}


@dataclass
class Case:
    name: str
    reference: str
    computed: str
    verdict: str
    note: str = ""


@dataclass
class Report:
    cases: List[Case] = field(default_factory=list)
    observations: List[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(c.verdict != FAILED for c in self.cases)

    def by_name(self, name: str) -> Case:
        for c in self.cases:
            if c.name == name:
                return c
        raise KeyError(name)


def printed_tolerance(text: str) -> float:
    """Half a unit in the last printed digit."""
    exp = Decimal(text).as_tuple().exponent
    return 0.5 * 10.0 ** exp


# 16-digit reference entries sit at the double-precision floor, where the
# last digit depends on summation order; allow a few ulps below that.
ULP_FLOOR = 8


def comparison_tolerance(text: str) -> float:
    return max(printed_tolerance(text) * (1 + 1e-9), ULP_FLOOR * float(np.spacing(abs(float(text)))))


def matches_printed(value: float, text: str) -> bool:
    return abs(value - float(text)) <= comparison_tolerance(text)


def witness_value_dense_loops(a: np.ndarray, witness: np.ndarray) -> float:
    """Contract the last two modes against ``witness / ||witness||_*`` with plain loops.

    Independent of ``nuclear_lower_witness``: explicit index loops for the
    contraction and LAPACK for the singular values of a matrix result.
    """
    w = np.asarray(witness, dtype=float)
    w = w / np.linalg.svd(w, compute_uv=False).sum()
    head = a.shape[:-2]
    out = np.zeros(head)
    for idx in itertools.product(*(range(n) for n in head)):
        total = 0.0
        for p in range(a.shape[-2]):
            for q in range(a.shape[-1]):
                total += a[idx + (p, q)] * w[p, q]
        out[idx] = total
    if out.ndim == 1:
        return math.sqrt(sum(x * x for x in out))
    return float(np.linalg.svd(out, compute_uv=False).sum())


def product_dense_loops(a: np.ndarray, b: np.ndarray, plan: ContractionPlan) -> np.ndarray:
    out_shape = a.shape[: plan.k] + b.shape[plan.p:]
    out = np.zeros(out_shape)
    for left in itertools.product(*(range(n) for n in a.shape[: plan.k])):
        for right in itertools.product(*(range(n) for n in b.shape[plan.p:])):
            total = 0.0
            for mid in itertools.product(*(range(n) for n in a.shape[plan.k:])):
                total += a[left + mid] * b[mid + right]
            out[left + right] = total
    return out


def _lower_bound_case(name, tensor, ref_lower, ref_nuclear, derived_text) -> Case:
    witness = np.ones(tensor.shape[-2:])
    value = nuclear_lower_witness(tensor, [witness])
    oracle = witness_value_dense_loops(tensor, witness)
    computed = f"{format_real(value)} (loop oracle {format_real(oracle)})"
    if matches_printed(value, ref_lower):
        return Case(name, ref_lower, computed, REPRODUCED)
    if abs(value - oracle) <= 1e-12 * max(1.0, oracle) and value <= float(ref_nuclear) + 1e-12:
        return Case(name, ref_lower, computed, DISCREPANCY,
                    f"{derived_text}; still a valid lower bound (<= nuclear norm {ref_nuclear})")
    return Case(name, ref_lower, computed, FAILED, "lower bound disagrees with loop oracle or exceeds the nuclear norm")


def _interval_case(name, tensor, ref, seed) -> Case:
    iv = nuclear_interval(tensor, seed=seed)
    computed = f"[{format_real(iv.lower)}, {format_real(iv.upper)}]"
    if iv.lower - 1e-9 <= float(ref) <= iv.upper + 1e-9:
        return Case(name, ref, computed, BOUNDED, "reference lies in the certified interval")
    return Case(name, ref, computed, FAILED, "reference outside the certified interval")


def _value_case(name, value, ref, tol=None, note="") -> Case:
    ok = abs(value - float(ref)) <= tol if tol is not None else matches_printed(value, ref)
    return Case(name, ref, format_real(value), REPRODUCED if ok else FAILED, note)


def run_repro(seed: int = 0) -> Report:
    rep = Report()

    sym3 = load_fixture("sym_order3")
    rep.cases.append(_lower_bound_case(
        "sym3.lower_bound_all_ones", sym3, "0.6455", "2",
        "contraction with J/2 gives c = (0.5, 0), ||c||_2 = 0.5; the best rank-one witness also gives 0.5"))
    rep.cases.append(_interval_case("sym3.nuclear_norm", sym3, "2", seed))
    rep.cases.append(_value_case("sym3.spectral_norm", hopm(sym3, seed=seed).value, "0.5", tol=1e-9))
    worst = max(float(np.max(np.abs(contraction_matrix(sym3, j) - 0.5 * np.eye(2)))) for j in range(3))
    rep.cases.append(Case("sym3.contraction_matrices", "0.5 I (all modes)", f"max deviation {worst:.3g}",
                          REPRODUCED if worst == 0.0 else FAILED))
    rhos = [float(np.max(np.abs(linalg.sym_eig(contraction_matrix(sym3, j)).values))) for j in range(3)]
    rep.cases.append(_value_case("sym3.contraction_radius", max(rhos), "0.5", tol=1e-10,
                                 note="all modes: " + ", ".join(format_real(r) for r in rhos)))
    checks = [radius_bound_check(sym3, j, seed=seed) for j in range(3)]
    holds = all(c.holds for c in checks) and max(rhos) <= 0.5 * 2.0
    rep.cases.append(Case("sym3.radius_bound", "0.5 <= 0.5 * 2", f"{format_real(max(rhos))} <= "
                          f"{format_real(checks[0].spectral)} * {format_real(checks[0].nuclear_upper)}",
                          REPRODUCED if holds else FAILED))

    sym4 = load_fixture("sym_order4")
    rep.cases.append(_lower_bound_case(
        "sym4.lower_bound_all_ones", sym4, "10.3757", "12",
        "contraction with J/3 gives 3J - I/3 with eigenvalues 26/3, -1/3, -1/3, nuclear norm 28/3"))
    rep.cases.append(_interval_case("sym4.nuclear_norm", sym4, "12", seed))

    a = load_fixture("product_counterexample")
    plan = ContractionPlan(2, 2, 2)
    c = contract_product(a, a, plan)
    loops = product_dense_loops(a, a, plan)
    printed = load_fixture("product_counterexample_reference_c")
    bad = [tuple(int(i) for i in idx) for idx in np.argwhere(c != printed)]
    undocumented = [i for i in bad if i not in PRODUCT_ENTRY_ERRATA]
    agrees = np.array_equal(c, loops)
    if not bad and agrees:
        verdict, note = REPRODUCED, ""
    elif not undocumented and agrees:
        verdict = DISCREPANCY
        note = "; ".join(f"entry {tuple(i + 1 for i in idx)}: {PRODUCT_ENTRY_ERRATA[idx]}" for idx in bad)
    else:
        verdict, note = FAILED, f"unexplained mismatches at {undocumented}" if undocumented else "loop oracle disagrees"
    rep.cases.append(Case("product.entries", "16 printed entries",
                          f"{16 - len(bad)}/16 match (loop oracle {'agrees' if agrees else 'DISAGREES'})", verdict, note))

    sa = hopm(a, seed=seed).value
    sc = hopm(c, seed=seed).value
    rep.cases.append(_value_case("product.spectral_A", sa, "16.3609"))
    rep.cases.append(_value_case("product.spectral_C", sc, "271.5503"))
    prod_case = _value_case("product.spectral_A_times_B", sa * sa, "268.6781")
    if prod_case.verdict == FAILED and matches_printed(sa, "16.3609"):
        prod_case.verdict = DISCREPANCY
        prod_case.note = "16.3609^2 = 267.679; the printed product is off by exactly 1 in the units digit"
    rep.cases.append(prod_case)
    rep.cases.append(Case("product.spectral_not_submultiplicative", "||C||_S > ||A||_S ||B||_S",
                          f"{format_real(sc)} > {format_real(sa * sa)}", REPRODUCED if sc > sa * sa else FAILED))

    diag = load_fixture("diagonal")
    expected = np.zeros((3, 3, 3))
    for i, v in enumerate((8.0, -1.0, 0.125)):
        expected[i, i, i] = v
    rep.cases.append(Case("diagonal.cubic_power", "diag(8, -1, 0.125)",
                          "diag(" + ", ".join(format_real(cubic_power(diag)[i, i, i]) for i in range(3)) + ")",
                          REPRODUCED if np.array_equal(cubic_power(diag), expected) else FAILED))

    nil = load_fixture("nilpotent")
    cube = cubic_power(nil)
    rep.cases.append(Case("nilpotent.cube_is_zero", "A^3 = O", f"max |entry| = {float(np.max(np.abs(cube))):.3g}",
                          REPRODUCED if not np.any(cube) else FAILED))
    rep.cases.append(_value_case("nilpotent.spectral_norm", hopm(nil, seed=seed).value, "1", tol=1e-9))
    cl = classify(nil)
    rep.cases.append(Case("nilpotent.gelfand_limit", "0", f"{format_real(cl.rho)} ({cl.trace.classification})",
                          REPRODUCED if cl.nilpotent and cl.rho == 0.0 else FAILED))

    r1 = load_fixture("rank_one_unit")
    cl = classify(r1)
    diff = float(np.max(np.abs(cubic_power(r1) - r1)))
    rep.cases.append(Case("rank_one.idempotent", "(x o y o z)^3 = x o y o z",
                          f"max |A^3 - A| = {diff:.3g}, rho = {format_real(cl.rho)}",
                          REPRODUCED if diff == 0.0 and abs(cl.rho - 1.0) <= 1e-10 else FAILED))

    g = load_fixture("gelfand_4x3x2")
    tr = gelfand_iterate(g, ("one", "frobenius", "infinity"), max_m=31, stop_early=False)
    row0 = tr.rows[0].r
    ok0 = all(matches_printed(row0[k], ref) for k, ref in zip(("one", "frobenius", "infinity"), GELFAND_TABLE[0][1:]))
    rep.cases.append(Case("gelfand_table.m0", ", ".join(GELFAND_TABLE[0][1:]),
                          ", ".join(format_real(row0[k]) for k in ("one", "frobenius", "infinity")),
                          REPRODUCED if ok0 else FAILED))
    misses = []
    worst = 0.0
    for (m, *refs), row in zip(GELFAND_TABLE, tr.rows):
        for kind, ref in zip(("one", "frobenius", "infinity"), refs):
            worst = max(worst, abs(row.r[kind] - float(ref)) / comparison_tolerance(ref))
            if not matches_printed(row.r[kind], ref):
                misses.append(f"m={m} {kind}")
    rep.cases.append(Case("gelfand_table.all_rows", "32 rows x 3 norms",
                          f"{96 - len(misses)}/96 within printed precision (worst uses {worst:.0%} of its tolerance)",
                          REPRODUCED if not misses else FAILED, ", ".join(misses)))
    last = tr.rows[-1].r
    spread = max(abs(v - GELFAND_LIMIT) for v in last.values())
    rep.cases.append(Case("gelfand_table.limit", format_real(GELFAND_LIMIT),
                          ", ".join(format_real(last[k]) for k in ("one", "frobenius", "infinity")),
                          REPRODUCED if spread <= 1e-9 else FAILED, f"max |r_31 - limit| = {spread:.3g}"))

    rep.observations.extend(quintic_observations(seed))
    return rep


def quintic_observations(seed: int = 0, trials: int = 3) -> List[str]:
    """Gelfand limits of both quintic variants on a few seeded 2x2x2x2x2 tensors (no assertion)."""
    from .core import random_tensor

    lines = []
    for t in range(trials):
        x = random_tensor((2, 2, 2, 2, 2), seed=seed + t)
        ra = gelfand_iterate(x, ("frobenius",), max_m=12, tol=1e-12, variant="A").rho_estimate
        rb = gelfand_iterate(x, ("frobenius",), max_m=12, tol=1e-12, variant="B").rho_estimate
        same_map = np.allclose(quintic_power(x, "A"), quintic_power(x, "B"), rtol=0, atol=1e-12)
        lines.append(f"quintic seed {seed + t}: rho_A = {format_real(ra)}, rho_B = {format_real(rb)}, "
                     f"gap = {abs(ra - rb):.3g}, maps {'coincide' if same_map else 'differ'}")
    return lines
