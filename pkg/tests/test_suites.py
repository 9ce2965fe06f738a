import numpy as np
import pytest

from tensornorms.core import rng_for
from tensornorms.suites import SUITES, random_triple, run_suite


@pytest.mark.parametrize("name", sorted(SUITES))
def test_each_suite_passes_on_a_short_run(name):
    res = run_suite(name, trials=10, seed=3)
    assert res.passed, res.violations
    assert res.checks > 0


def test_counterexample_suite_expects_violations():
    res = run_suite("theorem-3-counterexamples")
    assert res.expect_violation
    assert res.passed
    assert any("271.55" in n for n in res.notes)


def test_runs_are_reproducible():
    a = run_suite("theorem-1", trials=5, seed=9)
    b = run_suite("theorem-1", trials=5, seed=9)
    assert (a.checks, a.violations, a.notes) == (b.checks, b.violations, b.notes)


def test_random_triples_conform_and_stay_small():
    for t in range(50):
        a, b, plan = random_triple(rng_for(0, t))
        plan.check(a.shape, b.shape)
        assert a.ndim <= 3 and b.ndim <= 3
        assert max(a.shape + b.shape) <= 3


def test_unknown_suite():
    with pytest.raises(KeyError):
        run_suite("theorem-9")
