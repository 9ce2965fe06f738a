"""Bundled example tensors (``tensornorms/data/*.json``)."""

from __future__ import annotations

from importlib import resources

from .tensorio import parse_tensor

NAMES = (
    "diagonal",
    "gelfand_4x3x2",
    "nilpotent",
    "product_counterexample",
    "product_counterexample_reference_c",
    "rank_one_unit",
    "sym_order3",
    "sym_order4",
    "zero",
)


def fixture_path(name: str):
    return resources.files("tensornorms") / "data" / f"{name}.json"


def load_fixture(name: str):
    if name not in NAMES:
        raise KeyError(f"unknown fixture {name!r}")
    path = fixture_path(name)
    return parse_tensor(path.read_text(), f"fixture:{name}")
