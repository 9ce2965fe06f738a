import io
import json

import numpy as np
import pytest

from tensornorms.cli import main
from tensornorms.fixtures import fixture_path
from tensornorms.tensorio import load_tensor, save_tensor


def run(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = main(list(argv), stdout=out, stderr=err)
    return code, out.getvalue(), err.getvalue()


def body(text):
    return [line for line in text.splitlines() if not line.startswith("#")]


def fx(name):
    return str(fixture_path(name))


def test_norm_elementwise_on_table_tensor():
    code, out, _ = run("norm", "--no-timestamp", "--format", "delimited", "--kinds", "one,fro,inf", fx("gelfand_4x3x2"))
    assert code == 0
    rows = {r.split(",")[0]: r.split(",")[1] for r in body(out)[1:]}
    assert round(float(rows["one"]), 4) == 15.6755
    assert round(float(rows["frobenius"]), 5) == 3.86508
    assert rows["infinity"] == "1.921669"


def test_norm_spectral_and_zero():
    code, out, _ = run("norm", "--no-timestamp", "--format", "delimited", "--kinds", "spectral", fx("sym_order3"))
    assert code == 0 and body(out)[1].startswith("spectral,0.5,")
    code, out, _ = run("norm", "--no-timestamp", "--format", "delimited", "--kinds", "one", fx("zero"))
    assert body(out)[1] == "one,0,0,0"


def test_norm_nuclear_interval_with_witnesses():
    code, out, _ = run("norm", "--no-timestamp", "--format", "delimited", "--kinds", "nuclear", "--witnesses", fx("sym_order3"))
    assert code == 0
    name, value, lower, upper = body(out)[1].split(",")
    assert value == "" and float(lower) <= 2 <= float(upper)
    assert "nuclear lower witness 0" in out


def test_malformed_file_exits_2(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text('{"shape": [2],\n "data": [1, }')
    code, _, err = run("norm", str(bad))
    assert code == 2
    assert "bad.json:2:" in err


def test_product_matches_reference_except_documented_entry(tmp_path):
    dest = tmp_path / "c.json"
    a = fx("product_counterexample")
    code, _, _ = run("product", "--no-timestamp", a, a, "--p", "2", "-o", str(dest))
    assert code == 0
    c = load_tensor(dest)
    ref = load_tensor(fx("product_counterexample_reference_c"))
    diff = np.argwhere(c != ref)
    assert [tuple(d) for d in diff] == [(1, 1, 1, 1)]
    assert c[1, 1, 1, 1] == 252.0 and ref[1, 1, 1, 1] == 1252.0


def test_product_matrix_and_verify(tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    ma = np.array([[1.0, 2.0], [3.0, 4.0]])
    mb = np.array([[0.0, 1.0], [1.0, 0.0]])
    save_tensor(a, ma)
    save_tensor(b, mb)
    code, out, _ = run("product", "--no-timestamp", str(a), str(b), "--p", "1", "--verify")
    assert code == 0
    payload = json.loads(body(out)[0])
    assert payload["data"] == list((ma @ mb).ravel())
    assert "frobenius submultiplicative" in out


def test_product_nonconforming_exits_2(tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    save_tensor(a, np.ones((2, 3)))
    save_tensor(b, np.ones((2, 2)))
    code, _, err = run("product", str(a), str(b), "--p", "1")
    assert code == 2 and "3" in err
    code, _, _ = run("product", str(a), str(b), "--p", "1", "--k", "2")
    assert code == 2


def test_gelfand_table_and_trace_file(tmp_path):
    trace = tmp_path / "trace.tsv"
    code, out, _ = run("gelfand", "--no-timestamp", "--norms", "one,fro,inf", "--max-m", "31", "--no-early-stop",
                       "--trace", str(trace), "--delimiter", "tab", fx("gelfand_4x3x2"))
    assert code == 0
    summary = [l for l in out.splitlines() if l.startswith("# rho")][0]
    assert abs(float(summary.split()[2]) - 2.537118666456933) < 1e-9
    lines = trace.read_text().splitlines()
    assert lines[0] == "m\tone\tfrobenius\tinfinity\tlog_scale"
    assert len(lines) == 33


def test_gelfand_nilpotent_and_rank_one():
    _, out, _ = run("gelfand", "--no-timestamp", fx("nilpotent"))
    assert "# rho 0 classification nilpotent_detected at m=1" in out
    _, out, _ = run("gelfand", "--no-timestamp", "--format", "delimited", fx("rank_one_unit"))
    assert all(row.split(",")[1] == "1" for row in body(out)[1:])


def test_gelfand_order_checks(tmp_path):
    code, _, err = run("gelfand", fx("sym_order4"))
    assert code == 2
    five = tmp_path / "five.json"
    save_tensor(five, np.ones((2,) * 5))
    code, _, err = run("gelfand", str(five))
    assert code == 2 and "--variant" in err
    code, _, _ = run("gelfand", "--no-timestamp", "--variant", "A", "--max-m", "3", str(five))
    assert code == 0


def test_power_writes_cube(tmp_path):
    dest = tmp_path / "p.json"
    code, out, _ = run("power", "--no-timestamp", fx("nilpotent"), "-o", str(dest))
    assert code == 0
    assert not np.any(load_tensor(dest))
    assert "nilpotent True" in out


def test_bounds_reports_every_mode():
    code, out, _ = run("bounds", "--no-timestamp", "--format", "delimited", fx("sym_order3"))
    assert code == 0
    rows = body(out)
    assert rows[1].startswith("nuclear,0.5,")
    assert [r.split(",")[0] for r in rows[3:]] == ["0", "1", "2"]
    assert all(r.endswith(",yes") for r in rows[3:])


def test_gen_is_seeded(tmp_path):
    p1, p2 = tmp_path / "1.json", tmp_path / "2.json"
    run("gen", "--shape", "2x3", "--seed", "5", "-o", str(p1))
    run("gen", "--shape", "2x3", "--seed", "5", "-o", str(p2))
    assert p1.read_text() == p2.read_text()
    assert load_tensor(p1).shape == (2, 3)
    code, _, _ = run("gen", "--shape", "2x0")
    assert code == 2


def test_verify_pass_and_unknown_suite():
    code, out, _ = run("verify", "--no-timestamp", "--suite", "theorem-3-counterexamples")
    assert code == 0 and "PASS" in out
    code, _, _ = run("verify", "--suite", "theorem-7")
    assert code == 2


def test_verify_gelfand_properties_20_trials():
    code, out, _ = run("verify", "--no-timestamp", "--suite", "gelfand-properties", "--trials", "20")
    assert code == 0 and "PASS" in out


def test_repro_exit_and_verdicts():
    code, out, _ = run("repro", "--no-timestamp", "--format", "delimited", "--delimiter", "tab")
    assert code == 0
    verdicts = {r.split("\t")[0]: r.split("\t")[-1] for r in body(out)[1:]}
    assert verdicts["gelfand_table.all_rows"] == "reproduced"
    assert verdicts["sym3.lower_bound_all_ones"] == "discrepancy-documented"
    assert verdicts["sym3.spectral_norm"] == "reproduced"


def test_identical_config_gives_identical_output():
    args = ("verify", "--no-timestamp", "--suite", "theorem-1", "--trials", "5", "--seed", "7")
    assert run(*args)[1] == run(*args)[1]
    _, out, _ = run("norm", "--kinds", "one", fx("zero"))
    assert any(l.startswith("# timestamp") for l in out.splitlines())


def test_config_is_echoed():
    _, out, _ = run("norm", "--no-timestamp", "--seed", "4", "--kinds", "one", fx("zero"))
    first = out.splitlines()[0]
    assert first.startswith("# tensornorms ") and "seed=4" in first and "subcommand=norm" in first


def test_usage_errors():
    assert run()[0] == 2
    assert run("norm")[0] == 2
    assert run("norm", "--kinds", "bogus", fx("zero"))[0] == 2
