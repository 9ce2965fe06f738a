import numpy as np
import pytest

from tensornorms.core import ContractionPlan, contract_product
from tensornorms.fixtures import load_fixture
from tensornorms.repro import (
    BOUNDED,
    DISCREPANCY,
    FAILED,
    GELFAND_TABLE,
    REPRODUCED,
    matches_printed,
    printed_tolerance,
    product_dense_loops,
    run_repro,
    witness_value_dense_loops,
)


@pytest.fixture(scope="module")
def report():
    return run_repro()


def test_no_case_failed(report):
    assert report.ok, [c for c in report.cases if c.verdict == FAILED]


@pytest.mark.parametrize(
    "name, verdict",
    [
        ("sym3.lower_bound_all_ones", DISCREPANCY),
        ("sym3.nuclear_norm", BOUNDED),
        ("sym3.spectral_norm", REPRODUCED),
        ("sym3.contraction_matrices", REPRODUCED),
        ("sym4.lower_bound_all_ones", DISCREPANCY),
        ("sym4.nuclear_norm", BOUNDED),
        ("product.entries", DISCREPANCY),
        ("product.spectral_A", REPRODUCED),
        ("product.spectral_C", REPRODUCED),
        ("product.spectral_A_times_B", DISCREPANCY),
        ("product.spectral_not_submultiplicative", REPRODUCED),
        ("nilpotent.cube_is_zero", REPRODUCED),
        ("rank_one.idempotent", REPRODUCED),
        ("gelfand_table.all_rows", REPRODUCED),
        ("gelfand_table.limit", REPRODUCED),
    ],
)
def test_verdicts(report, name, verdict):
    assert report.by_name(name).verdict == verdict


def test_discrepancies_carry_explanations(report):
    for c in report.cases:
        if c.verdict == DISCREPANCY:
            assert c.note


def test_quintic_gap_is_observed_not_asserted(report):
    assert report.observations
    assert all("rho_A" in o and "rho_B" in o for o in report.observations)


def test_printed_tolerance():
    assert printed_tolerance("15.6755") == pytest.approx(5e-5)
    assert printed_tolerance("2") == 0.5
    assert matches_printed(3.865084640, "3.86508")
    assert not matches_printed(3.86510, "3.86508")


def test_table_is_complete():
    assert [int(r[0]) for r in GELFAND_TABLE] == list(range(32))


def test_loop_oracles(rng):
    a = rng.standard_normal((2, 3, 3))
    w = rng.standard_normal((3, 3))
    from tensornorms.nucnorm import nuclear_lower_witness

    assert witness_value_dense_loops(a, w) == pytest.approx(nuclear_lower_witness(a, [w]), rel=1e-12)
    b = rng.standard_normal((3, 3, 2))
    plan = ContractionPlan(1, 2, 1)
    np.testing.assert_allclose(product_dense_loops(a, b, plan), contract_product(a, b, plan), rtol=1e-12)


def test_order3_witness_value_by_hand():
    # J/2 against the last two modes: c_i = (a_i11 + a_i12 + a_i21 + a_i22) / 2
    a = load_fixture("sym_order3")
    c = a.sum(axis=(1, 2)) / 2
    np.testing.assert_allclose(c, [0.5, 0.0], atol=1e-15)
    assert witness_value_dense_loops(a, np.ones((2, 2))) == pytest.approx(0.5, abs=1e-15)
