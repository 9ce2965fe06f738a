"""Command-line interface: ``tensornorms <subcommand> ...``.

Every run starts by echoing its configuration as ``#`` comment lines so the
output is reproducible from itself. Exit codes: 0 success, 1 property
violation or numerical failure, 2 usage or input error.
"""

from __future__ import annotations

import argparse
import sys
import time
from datetime import datetime, timezone
from typing import List, Optional, Sequence

import numpy as np

from . import __version__
from .core import ContractionPlan, contract_product, elementwise_norm, random_tensor
from .errors import InvalidArgument, NumericalFailure, UnsupportedSize
from .nucnorm import nuclear_interval, radius_bound_check
from .power import classify, format_real, gelfand_iterate, normalize_norm_kinds, power_map
from .repro import run_repro
from .specnorm import hopm
from .suites import SUITES, run_suite
from .tensorio import dumps_tensor, load_tensor, save_tensor

EXIT_OK = 0
EXIT_VIOLATION = 1
EXIT_USAGE = 2

NORM_KINDS = {
    "one": "one",
    "1": "one",
    "fro": "frobenius",
    "frobenius": "frobenius",
    "inf": "infinity",
    "infinity": "infinity",
    "spectral": "spectral",
    "s": "spectral",
    "nuclear": "nuclear",
    "*": "nuclear",
}


class UsageError(InvalidArgument):
    pass


class Output:
    """Writes comment lines and tables in the selected format.

    Text-mode tables are buffered so each column can be padded to its
    widest cell; any other write flushes the pending table first.
    """

    def __init__(self, stream, fmt: str, delimiter: str):
        self.stream = stream
        self.fmt = fmt
        self.delimiter = delimiter
        self._rows: List[List[str]] = []

    def flush(self) -> None:
        if not self._rows:
            return
        widths = [max(len(r[i]) for r in self._rows if i < len(r)) for i in range(max(map(len, self._rows)))]
        for r in self._rows:
            self.stream.write("  ".join(c.ljust(w) for c, w in zip(r, widths)).rstrip() + "\n")
        self._rows = []

    def line(self, text: str = "") -> None:
        self.flush()
        self.stream.write(text + "\n")

    def comment(self, text: str) -> None:
        self.line(f"# {text}")

    def record(self, *cells) -> None:
        cells = [format_real(c) if isinstance(c, float) else str(c) for c in cells]
        if self.fmt == "delimited":
            self.line(self.delimiter.join(cells))
        else:
            self._rows.append(cells)


def _csv_list(text: str) -> List[str]:
    return [t for t in (s.strip() for s in text.split(",")) if t]


def _shape(text: str):
    try:
        dims = tuple(int(x) for x in text.lower().replace(",", "x").split("x") if x)
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad shape {text!r}; use e.g. 2x3x2") from None
    if not dims or any(d < 1 for d in dims):
        raise argparse.ArgumentTypeError(f"bad shape {text!r}; dimensions must be >= 1")
    return dims


def _delimiter(text: str) -> str:
    return {"tab": "\t", "\\t": "\t", "comma": ",", "space": " "}.get(text, text)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0, help="master seed for multistart and generators")
    common.add_argument("--tol", type=float, default=1e-10, help="convergence tolerance")
    common.add_argument("--restarts", type=int, default=None, help="multistart count (command default if omitted)")
    common.add_argument("--format", choices=("text", "delimited"), default="text", dest="fmt")
    common.add_argument("--delimiter", type=_delimiter, default=",", help="delimiter for delimited output (',' 'tab' ...)")
    common.add_argument("--no-timestamp", action="store_true", help="omit the timestamp line")

    parser = argparse.ArgumentParser(prog="tensornorms", description="Tensor norms, products, powers and Gelfand limits.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="subcommand", required=True)

    p = sub.add_parser("norm", parents=[common], help="elementwise, spectral and nuclear norms of a tensor")
    p.add_argument("tensor")
    p.add_argument("--kinds", type=_csv_list, default=["one", "fro", "inf", "spectral", "nuclear"])
    p.add_argument("--witnesses", action="store_true", help="also print the spectral and nuclear witnesses")

    p = sub.add_parser("product", parents=[common], help="contraction product C = A x_p B")
    p.add_argument("a")
    p.add_argument("b")
    p.add_argument("--p", type=int, required=True, help="number of contracted modes")
    p.add_argument("--k", type=int, default=None, help="free modes of A (checked against A's order)")
    p.add_argument("--q", type=int, default=None, help="free modes of B (checked against B's order)")
    p.add_argument("-o", "--output", help="write the product here instead of stdout")
    p.add_argument("--verify", action="store_true", help="check the submultiplicativity inequalities for this triple")

    p = sub.add_parser("gelfand", parents=[common], help="log-scaled power iteration for the Gelfand limit")
    p.add_argument("tensor")
    p.add_argument("--norms", type=_csv_list, default=["fro"])
    p.add_argument("--max-m", type=int, default=31)
    p.add_argument("--variant", choices=("A", "B", "a", "b"), default=None, help="quintic variant (order-5 input)")
    p.add_argument("--no-early-stop", action="store_true", help="run all max-m steps")
    p.add_argument("--trace", help="also write the trace as delimited rows to this file")

    p = sub.add_parser("power", parents=[common], help="one application of the cubic or quintic power")
    p.add_argument("tensor")
    p.add_argument("--variant", choices=("A", "B", "a", "b"), default=None)
    p.add_argument("-o", "--output")

    p = sub.add_parser("bounds", parents=[common], help="nuclear interval and contraction-matrix radius bounds")
    p.add_argument("tensor")

    p = sub.add_parser("gen", parents=[common], help="write a seeded random tensor")
    p.add_argument("--shape", type=_shape, required=True)
    p.add_argument("--distribution", choices=("standard-normal", "uniform"), default="standard-normal")
    p.add_argument("-o", "--output")

    p = sub.add_parser("verify", parents=[common], help="run the seeded property suites")
    p.add_argument("--suite", action="append", choices=sorted(SUITES), help="repeatable; default all")
    p.add_argument("--trials", type=int, default=100)

    sub.add_parser("repro", parents=[common], help="rerun the bundled reference examples")
    return parser


def echo_config(out: Output, args: argparse.Namespace) -> None:
    skip = {"no_timestamp"}
    parts = []
    for key in sorted(vars(args)):
        if key in skip:
            continue
        val = vars(args)[key]
        if key == "delimiter":
            val = repr(val)
        elif isinstance(val, list):
            val = ",".join(val)
        parts.append(f"{key}={val}")
    out.comment("tensornorms " + __version__ + " " + " ".join(parts))
    if not args.no_timestamp:
        out.comment("timestamp " + datetime.now(timezone.utc).isoformat(timespec="seconds"))


def cmd_norm(args, out: Output) -> int:
    a = load_tensor(args.tensor)
    kinds = []
    for k in args.kinds:
        try:
            kinds.append(NORM_KINDS[k.lower()])
        except KeyError:
            raise UsageError(f"unknown norm kind {k!r}; choose from one, fro, inf, spectral, nuclear") from None
    out.record("norm", "value", "lower", "upper")
    for kind in dict.fromkeys(kinds):
        if kind in ("one", "frobenius", "infinity"):
            v = elementwise_norm(a, kind)
            out.record(kind, v, v, v)
        elif kind == "spectral":
            cert = hopm(a, restarts=args.restarts or 32, seed=args.seed)
            # hopm finds a witness value, which bounds the norm from below
            out.record("spectral", cert.value, cert.value, "")
            if args.witnesses:
                for i, f in enumerate(cert.witness.factors):
                    out.comment(f"spectral witness factor {i}: " + " ".join(format_real(float(x)) for x in f))
        else:
            iv = nuclear_interval(a, seed=args.seed, restarts=args.restarts or 16)
            value = iv.lower if iv.lower == iv.upper else ""
            out.record("nuclear", value, iv.lower, iv.upper)
            if args.witnesses:
                for i, w in enumerate(iv.lower_witness):
                    out.comment(f"nuclear lower witness {i}: " + " ".join(format_real(float(x)) for x in np.ravel(w)))
                out.comment(f"nuclear upper: {len(iv.upper_witness)} rank-one terms, residual {format_real(iv.residual_norm)}")
    return EXIT_OK


def _plan_for(a, b, args) -> ContractionPlan:
    k = a.ndim - args.p if args.k is None else args.k
    q = b.ndim - args.p if args.q is None else args.q
    try:
        plan = ContractionPlan(k, args.p, q)
    except InvalidArgument as e:
        raise UsageError(str(e)) from None
    plan.check(a.shape, b.shape)
    return plan


def cmd_product(args, out: Output) -> int:
    a = load_tensor(args.a)
    b = load_tensor(args.b)
    plan = _plan_for(a, b, args)
    c = contract_product(a, b, plan)
    if args.output:
        save_tensor(args.output, c)
        out.comment(f"wrote {args.output} shape {'x'.join(map(str, c.shape))}")
    else:
        out.line(dumps_tensor(c).rstrip("\n"))
    if not args.verify:
        return EXIT_OK
    violated = False
    out.record("check", "lhs", "rhs", "holds")
    for kind in ("one", "frobenius", "infinity"):
        lhs = elementwise_norm(c, kind)
        rhs = elementwise_norm(a, kind) * elementwise_norm(b, kind)
        holds = lhs <= rhs * (1 + 1e-12)
        out.record(f"{kind} submultiplicative", lhs, rhs, "yes" if holds else "no")
        violated |= not holds and kind != "infinity"
    restarts = args.restarts or 32
    sa = hopm(a, restarts=restarts, seed=args.seed).value
    sb = hopm(b, restarts=restarts, seed=args.seed).value
    sc = hopm(c, restarts=restarts, seed=args.seed).value
    out.record("spectral submultiplicative", sc, sa * sb, "yes" if sc <= sa * sb + 1e-9 else "no")
    ia = nuclear_interval(a, seed=args.seed)
    ib = nuclear_interval(b, seed=args.seed)
    ic = nuclear_interval(c, seed=args.seed)
    holds = ic.lower <= ia.upper * ib.upper + 1e-6
    out.record("nuclear lower(C) <= upper(A) upper(B)", ic.lower, ia.upper * ib.upper, "yes" if holds else "no")
    violated |= not holds
    holds = sc <= sa * ib.upper + 1e-8
    out.record("spectral(C) <= spectral(A) nuclear upper(B)", sc, sa * ib.upper, "yes" if holds else "no")
    violated |= not holds
    out.comment("infinity and spectral norms are not submultiplicative in general; 'no' there is not a violation")
    return EXIT_VIOLATION if violated else EXIT_OK


def cmd_gelfand(args, out: Output) -> int:
    a = load_tensor(args.tensor)
    if a.ndim not in (3, 5):
        raise UsageError(f"gelfand needs an order-3 or order-5 tensor, got order {a.ndim}")
    if a.ndim == 5 and args.variant is None:
        raise UsageError("order-5 input needs --variant A or B")
    variant = args.variant.upper() if args.variant else None
    trace = gelfand_iterate(a, normalize_norm_kinds(args.norms), max_m=args.max_m, tol=args.tol,
                            variant=variant, stop_early=not args.no_early_stop, seed=args.seed)
    out.record("m", *trace.norms, "log_scale")
    for row in trace.rows:
        out.record(row.m, *[row.r[k] for k in trace.norms], row.log_scale)
    last = trace.rows[-1].m
    out.comment(f"rho {format_real(trace.rho_estimate)} classification {trace.classification} at m={last}")
    if args.trace:
        with open(args.trace, "w", encoding="utf-8") as fh:
            fh.write(trace.to_delimited(args.delimiter))
    return EXIT_OK


def cmd_power(args, out: Output) -> int:
    a = load_tensor(args.tensor)
    variant = args.variant.upper() if args.variant else None
    try:
        degree, fmap = power_map(a, variant)
    except InvalidArgument as e:
        raise UsageError(str(e)) from None
    p = fmap(a)
    cl = classify(a, variant=variant, tol=args.tol)
    if args.output:
        save_tensor(args.output, p)
        out.comment(f"wrote {args.output}")
    else:
        out.line(dumps_tensor(p).rstrip("\n"))
    out.comment(f"degree {degree} nilpotent {cl.nilpotent} idempotent {cl.idempotent} rho {format_real(cl.rho)}")
    return EXIT_OK


def cmd_bounds(args, out: Output) -> int:
    a = load_tensor(args.tensor)
    iv = nuclear_interval(a, seed=args.seed, restarts=args.restarts or 16)
    out.record("quantity", "lower", "upper")
    out.record("nuclear", iv.lower, iv.upper)
    if a.ndim < 2:
        return EXIT_OK
    status = EXIT_OK
    out.record("mode", "rho", "spectral", "nuclear_upper", "product", "holds")
    for mode in range(a.ndim):
        r = radius_bound_check(a, mode, seed=args.seed, restarts=args.restarts or 32)
        out.record(mode, r.rho, r.spectral, r.nuclear_upper, r.product_upper, "yes" if r.holds else "no")
        if not r.holds:
            status = EXIT_VIOLATION
    return status


def cmd_gen(args, out: Output) -> int:
    a = random_tensor(args.shape, seed=args.seed, distribution=args.distribution)
    comment = f"random {args.distribution} tensor, seed {args.seed}"
    if args.output:
        save_tensor(args.output, a, comment)
        out.comment(f"wrote {args.output}")
    else:
        out.line(dumps_tensor(a, comment).rstrip("\n"))
    return EXIT_OK


def cmd_verify(args, out: Output) -> int:
    names = args.suite or list(SUITES)
    status = EXIT_OK
    out.record("suite", "trials", "checks", "violations", "result")
    messages, timings = [], []
    for name in names:
        start = time.perf_counter()
        res = run_suite(name, trials=args.trials, seed=args.seed)
        elapsed = time.perf_counter() - start
        out.record(name, res.trials, res.checks, len(res.violations), "PASS" if res.passed else "FAIL")
        timings.append(f"{name} {elapsed:.2f}s")
        messages += [f"{name}: {note}" for note in res.notes]
        messages += [f"{name} violation: {v}" for v in res.violations]
        if not res.passed:
            status = EXIT_VIOLATION
    for msg in messages:
        out.comment(msg)
    if not args.no_timestamp:
        # wall-clock times vary run to run, so they go with the timestamp
        out.comment("timing " + ", ".join(timings))
    return status


def cmd_repro(args, out: Output) -> int:
    rep = run_repro(seed=args.seed)
    out.record("case", "reference", "computed", "verdict")
    for c in rep.cases:
        out.record(c.name, c.reference, c.computed, c.verdict)
    for c in rep.cases:
        if c.note:
            out.comment(f"{c.name}: {c.note}")
    for obs in rep.observations:
        out.comment(obs)
    return EXIT_OK if rep.ok else EXIT_VIOLATION


COMMANDS = {
    "norm": cmd_norm,
    "product": cmd_product,
    "gelfand": cmd_gelfand,
    "power": cmd_power,
    "bounds": cmd_bounds,
    "gen": cmd_gen,
    "verify": cmd_verify,
    "repro": cmd_repro,
}


def main(argv: Optional[Sequence[str]] = None, stdout=None, stderr=None) -> int:
    stdout = sys.stdout if stdout is None else stdout
    stderr = sys.stderr if stderr is None else stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_USAGE if e.code else EXIT_OK
    out = Output(stdout, args.fmt, args.delimiter)
    echo_config(out, args)
    try:
        return COMMANDS[args.subcommand](args, out)
    except (InvalidArgument, UnsupportedSize, OSError) as e:
        out.flush()
        stderr.write(f"tensornorms {args.subcommand}: error: {e}\n")
        return EXIT_USAGE
    except NumericalFailure as e:
        out.flush()
        stderr.write(f"tensornorms {args.subcommand}: numerical failure: {e}\n")
        return EXIT_VIOLATION
    finally:
        out.flush()


if __name__ == "__main__":
    sys.exit(main())
