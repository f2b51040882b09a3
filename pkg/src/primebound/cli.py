"""Command-line entry point.

Data goes to stdout; logs, progress and the run manifest go to stderr.
Exit codes: 0 success, 1 a mathematical claim was falsified (Goldbach
failure, gap bound violated, ...), 2 usage or capacity errors.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import io
import json
import logging
import math
import statistics
import sys
import time
from decimal import Decimal, InvalidOperation
from typing import Callable

from . import __version__, _parallel
from . import bounds as bounds_mod
from . import cramer_model, gaps, goldbach
from .errors import OutOfRangeError, PrimeboundError
from .sieve import build_table, segmented_primes

log = logging.getLogger("primebound")

EXIT_OK, EXIT_FALSIFIED, EXIT_USAGE = 0, 1, 2
INT_LIMIT = 1 << 63


def parse_int(text: str) -> int:
    """Integer or scientific notation with an exact integral value, e.g. ``1e16``."""
    try:
        value = Decimal(text.strip().replace("_", ""))
    except InvalidOperation:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if not value.is_finite() or value != value.to_integral_value():
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}")
    n = int(value)
    if abs(n) > INT_LIMIT:
        raise argparse.ArgumentTypeError(f"{text!r} exceeds 2^63")
    return n


def parse_float(text: str) -> float:
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if not math.isfinite(value):
        raise argparse.ArgumentTypeError(f"not finite: {text!r}")
    return value


class Output:
    """Collects everything written to stdout so the manifest can digest it."""

    def __init__(self, stream) -> None:
        self.stream = stream
        self.digest = hashlib.sha256()

    def write(self, text: str) -> None:
        self.stream.write(text)
        self.digest.update(text.encode())

    def json(self, obj) -> None:
        self.write(json.dumps(obj, indent=2, sort_keys=False) + "\n")

    def csv(self, header: list[str], rows) -> None:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow(["" if v is None else _fmt(v) for v in row])
            if buf.tell() > 1 << 16:
                self.write(buf.getvalue())
                buf.seek(0)
                buf.truncate()
        self.write(buf.getvalue())


def _fmt(v) -> str:
    if isinstance(v, float):
        return repr(v)
    return str(v)


# ---------------------------------------------------------------------------
# subcommands; each returns an exit code


def cmd_sieve(args, out: Output) -> int:
    if args.format in ("text", "csv"):
        if args.format == "csv":
            out.write("p\n")
        for primes in segmented_primes(args.lo, args.hi):
            if primes.size:
                out.write("\n".join(map(str, primes.tolist())) + "\n")
        return EXIT_OK
    jobs = _parallel.partition(args.lo, args.hi, args.threads, align=1 << 20)
    counts = _parallel.ordered_map(_count_chunk, jobs, args.threads)
    out.json({"lo": args.lo, "hi": args.hi, "count": sum(counts)})
    return EXIT_OK


def _count_chunk(lo: int, hi: int) -> int:
    return sum(int(p.size) for p in segmented_primes(lo, hi))


def _emit_range(args, out: Output, report: goldbach.RangeReport, header, record_row) -> int:
    if args.format == "csv":
        rows = []
        if report.max_min_p is not None:
            rows.append(record_row(report.max_min_p[1]))
        rows.extend([n] + [None] * (len(header) - 1) for n in report.failures)
        out.csv(header, rows)
    else:
        out.json(report.to_dict(timing=args.timing))
    log.info("checked %d values in %.2fs", report.checked, report.elapsed_seconds)
    return EXIT_OK if report.verified else EXIT_FALSIFIED


def cmd_goldbach(args, out: Output) -> int:
    report = goldbach.verify_binary_range(args.lo, args.hi, threads=args.threads)

    def row(n):
        w = goldbach.binary_witness(n)
        return [n, w.p, w.q]

    return _emit_range(args, out, report, ["n", "p", "q"], row)


def cmd_ternary(args, out: Output) -> int:
    report = goldbach.verify_ternary_range(args.lo, args.hi, threads=args.threads)

    def row(n):
        w = goldbach.ternary_witness(n)
        return [n, w.a, w.b, w.c]

    return _emit_range(args, out, report, ["n", "a", "b", "c"], row)


def cmd_tres2(args, out: Output) -> int:
    if args.n is not None:
        w = goldbach.tres2_witness(args.n, args.alpha)
        doc = {"n": args.n, "alpha": args.alpha, "found": w is not None,
               "p": None if w is None else w.p, "r": None if w is None else w.r}
        if args.format == "csv":
            out.csv(["n", "p", "r"], [[args.n, doc["p"], doc["r"]]])
        else:
            out.json(doc)
        return EXIT_OK if w is not None else EXIT_FALSIFIED
    if args.lo is None or args.hi is None:
        raise PrimeboundError("tres2 needs --n or both --from and --to")
    batch = goldbach.tres2_range(args.lo, args.hi, args.alpha)
    if args.format == "csv":
        found = batch.found
        out.csv(["n", "p", "r"], (
            [n, p if ok else None, r if ok else None]
            for n, p, r, ok in zip(batch.n.tolist(), batch.p.tolist(), batch.r.tolist(), found.tolist())
        ))
    else:
        j = int(batch.r.argmax())
        out.json({
            "lo": int(batch.n[0]), "hi": int(batch.n[-1]), "alpha": args.alpha,
            "checked": int(batch.n.size), "failures": batch.failures.tolist(),
            "max_r": {"r": int(batch.r[j]), "n": int(batch.n[j]), "p": int(batch.p[j])},
        })
    return EXIT_OK if batch.failures.size == 0 else EXIT_FALSIFIED


def cmd_dois5(args, out: Output) -> int:
    if args.m is not None:
        res = goldbach.dois5_check(args.m)
        fb = res.fallback
        out.json({"m": res.m, "m_minus_3_prime": res.m_minus_3_prime, "c": res.c,
                  "fallback": None if fb is None else {"p": fb.p, "q": fb.q}})
        return EXIT_OK if res.c is not None or fb is not None else EXIT_FALSIFIED
    if args.lo is None or args.hi is None:
        raise PrimeboundError("dois5 needs --m or both --from and --to")
    lo = args.lo + (args.lo % 2)
    if lo <= 4:
        lo = 6
    table = build_table(0, args.hi)
    ms = list(range(lo, args.hi + 1, 2))
    hits = sum(table.is_prime(m - 3) for m in ms)
    out.json({"lo": lo, "hi": args.hi, "checked": len(ms), "m_minus_3_prime": hits,
              "frequency": hits / len(ms) if ms else None})
    return EXIT_OK


def cmd_gaps(args, out: Output) -> int:
    records = gaps.maximal_gaps_up_to(args.to, threads=args.threads)
    if args.format == "csv":
        out.csv(["p", "p_next", "gap", "merit", "cramer_ratio"], (g.as_row() for g in records))
    else:
        out.json({"N": args.to, "records": [g.to_dict() for g in records]})
    return EXIT_OK


def cmd_gap_bound(args, out: Output) -> int:
    res = gaps.verify_gap_bound(args.to, args.r, threads=args.threads)
    if args.format == "csv":
        out.csv(["p", "p_next", "gap", "merit", "cramer_ratio", "bound", "holds"],
                [list(res.worst.as_row()) + [res.bound, res.holds]])
    else:
        out.json(res.to_dict())
    log.info("worst record: p=%d gap=%d vs bound %.3f", res.worst.p, res.worst.gap, res.bound)
    return EXIT_OK if res.holds else EXIT_FALSIFIED


def cmd_bounds(args, out: Output) -> int:
    report = bounds_mod.scenario_report(args.alpha, args.log10_beta)
    if args.format == "text":
        out.write(report.summary() + "\n")
    else:
        doc = report.to_dict()
        doc["summary"] = report.summary().splitlines()
        out.json(doc)
    return EXIT_OK if report.worst.holds else EXIT_FALSIFIED


def cmd_selberg(args, out: Output) -> int:
    if args.x is not None:
        width = math.floor(math.log(args.x) ** args.lam)
        table = build_table(args.x + 1, args.x + max(width, 1))
        ratio = gaps.selberg_ratio(args.x, args.lam, table)
        out.json({"x": args.x, "lambda": args.lam, "window": width, "ratio": ratio})
        return EXIT_OK
    samples = gaps.selberg_samples(args.lo, args.hi, args.samples, args.lam, args.seed)
    if args.format == "csv":
        out.csv(["x", "ratio"], ((s.x, s.ratio) for s in samples))
    else:
        out.json({"lo": args.lo, "hi": args.hi, "lambda": args.lam, "seed": args.seed,
                  "median": statistics.median(s.ratio for s in samples),
                  "samples": [{"x": s.x, "ratio": s.ratio} for s in samples]})
    return EXIT_OK


def cmd_simulate(args, out: Output) -> int:
    config = cramer_model.SimConfig(args.lo, args.hi, args.seed, args.trials)
    outcomes = cramer_model.simulate(config, threads=args.threads)
    if args.format == "json":
        ratios = [o.ratio for o in outcomes if o.ratio is not None]
        out.json({
            "x_start": args.lo, "x_end": args.hi, "seed": args.seed, "trials": args.trials,
            "expected_count": cramer_model.expected_count(args.lo, args.hi),
            "mean_count": statistics.mean(o.pseudo_prime_count for o in outcomes),
            "mean_ratio": statistics.mean(ratios) if ratios else None,
            "outcomes": [dict(zip(("trial", "count", "max_gap", "max_gap_at", "ratio"), o.as_row()))
                         for o in outcomes],
        })
    else:
        out.csv(["trial", "count", "max_gap", "max_gap_at", "ratio"], (o.as_row() for o in outcomes))
    return EXIT_OK


def cmd_mertens(args, out: Output) -> int:
    table = build_table(0, args.z)
    product = cramer_model.mertens_product(args.z, table)
    scaled = product * math.log(args.z) * math.exp(cramer_model.EULER_GAMMA)
    out.json({"z": args.z, "product": product,
              "mertens_limit_check": {"product_ln_z_e_gamma": scaled, "rel_error": abs(scaled - 1)}})
    return EXIT_OK


def cmd_maier(args, out: Output) -> int:
    table = build_table(0, max(math.isqrt(args.n), 2))
    d = cramer_model.maier_discrepancy(args.n, table)
    out.json({"n": d.n, "p": d.p, "lhs": d.lhs, "rhs": d.rhs, "ratio": d.ratio,
              "limit": math.exp(cramer_model.EULER_GAMMA) / 2})
    return EXIT_OK if d.lhs != d.rhs else EXIT_FALSIFIED


def cmd_fcheck(args, out: Output) -> int:
    table = build_table(0, args.x + args.y)
    f = cramer_model.empirical_F(args.x, args.y, args.q, table)
    ln_mid = math.log(args.x + args.y / 2)
    # every survivor is prime once the next prime above q has its square past x + y
    top = args.x + args.y
    try:
        exact = args.q + 1 > top or table.next_prime(args.q + 1) ** 2 > top
    except OutOfRangeError:
        exact = True
    out.json({"x": args.x, "y": args.y, "q": args.q, "F": f, "ln_mid": ln_mid,
              "primes": table.count_primes(args.x + 1, args.x + args.y),
              "survivors": cramer_model.interval_survivors(args.x, args.y, args.q, table),
              "identity_expected": exact, "identity_holds": f == ln_mid})
    return EXIT_FALSIFIED if exact and f != ln_mid else EXIT_OK


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "csv", "text"), default=None)
    common.add_argument("--threads", type=int, default=_parallel.default_threads())
    common.add_argument("--quiet", action="store_true", help="suppress progress logging")
    common.add_argument("--verbose", action="store_true")

    parser = argparse.ArgumentParser(prog="primebound", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"primebound {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name: str, fn: Callable, help: str, default_format: str = "json"):
        p = sub.add_parser(name, parents=[common], help=help)
        p.set_defaults(func=fn, default_format=default_format)
        return p

    p = add("sieve", cmd_sieve, "count or dump primes in a range")
    p.add_argument("--from", dest="lo", type=parse_int, required=True)
    p.add_argument("--to", dest="hi", type=parse_int, required=True)

    p = add("goldbach", cmd_goldbach, "verify binary Goldbach on even n in a range")
    p.add_argument("--from", dest="lo", type=parse_int, required=True)
    p.add_argument("--to", dest="hi", type=parse_int, required=True)
    p.add_argument("--timing", action="store_true", help="include elapsed_seconds in the report")

    p = add("ternary", cmd_ternary, "verify ternary Goldbach on odd n in a range")
    p.add_argument("--from", dest="lo", type=parse_int, required=True)
    p.add_argument("--to", dest="hi", type=parse_int, required=True)
    p.add_argument("--timing", action="store_true", help="include elapsed_seconds in the report")

    p = add("tres2", cmd_tres2, "decompose odd n = p + r with r in {4, ..., alpha-1}")
    p.add_argument("--n", type=parse_int)
    p.add_argument("--from", dest="lo", type=parse_int)
    p.add_argument("--to", dest="hi", type=parse_int)
    p.add_argument("--alpha", type=parse_int, required=True)

    p = add("dois5", cmd_dois5, "check whether m - 3 is prime for even m")
    p.add_argument("--m", type=parse_int)
    p.add_argument("--from", dest="lo", type=parse_int)
    p.add_argument("--to", dest="hi", type=parse_int)

    p = add("gaps", cmd_gaps, "table of maximal prime gaps up to N")
    p.add_argument("--to", type=parse_int, required=True)

    p = add("gap-bound", cmd_gap_bound, "check max gap up to N against ln(N)^r")
    p.add_argument("--to", type=parse_int, required=True)
    p.add_argument("--r", type=parse_float, required=True)

    p = add("bounds", cmd_bounds, "log-space arithmetic of the conditional gap bound")
    p.add_argument("--alpha", type=parse_int, required=True)
    p.add_argument("--log10-beta", type=parse_float, required=True)

    p = add("selberg", cmd_selberg, "short-interval prime count ratio with window ln(x)^lambda")
    p.add_argument("--x", type=parse_int)
    p.add_argument("--lambda", dest="lam", type=parse_float, default=3.0)
    p.add_argument("--from", dest="lo", type=parse_int, default=10**6)
    p.add_argument("--to", dest="hi", type=parse_int, default=10**9)
    p.add_argument("--samples", type=int, default=100)
    p.add_argument("--seed", type=parse_int, default=0)

    p = add("simulate", cmd_simulate, "Cramér random-model trials", default_format="csv")
    p.add_argument("--from", dest="lo", type=parse_int, default=3)
    p.add_argument("--to", dest="hi", type=parse_int, required=True)
    p.add_argument("--seed", type=parse_int, required=True)
    p.add_argument("--trials", type=int, default=1)

    p = add("mertens", cmd_mertens, "product of (1 - 1/p) over primes p <= z")
    p.add_argument("--z", type=parse_int, required=True)

    p = add("maier", cmd_maier, "sieved density at p ~ sqrt(n) versus ln n")
    p.add_argument("--n", type=parse_int, required=True)

    p = add("fcheck", cmd_fcheck, "empirical survival function F on (x, x+y]")
    p.add_argument("--x", type=parse_int, required=True)
    p.add_argument("--y", type=parse_int, required=True)
    p.add_argument("--q", type=parse_int, required=True)
    return parser


def _configure_logging(args) -> None:
    level = logging.WARNING if args.quiet else logging.DEBUG if args.verbose else logging.INFO
    handler = logging.StreamHandler(sys.stderr)
    handler.setFormatter(logging.Formatter("%(levelname)s %(name)s: %(message)s"))
    root = logging.getLogger("primebound")
    root.handlers[:] = [handler]
    root.setLevel(level)
    root.propagate = False


def main(argv: list[str] | None = None, stdout=None, stderr=None) -> int:
    stdout = sys.stdout if stdout is None else stdout
    stderr = sys.stderr if stderr is None else stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    args.format = args.format or args.default_format
    if args.threads < 1:
        stderr.write("error: --threads must be >= 1\n")
        return EXIT_USAGE
    _configure_logging(args)

    out = Output(stdout)
    t0 = time.perf_counter()
    try:
        code = args.func(args, out)
    except PrimeboundError as exc:
        stderr.write(f"error: {exc}\n")
        code = EXIT_USAGE
    params = {k: v for k, v in vars(args).items()
              if k not in ("func", "default_format", "command", "quiet", "verbose")}
    manifest = {
        "command": args.command,
        "parameters": params,
        "tool_version": __version__,
        "elapsed_seconds": round(time.perf_counter() - t0, 6),
        "output_digest": "sha256:" + out.digest.hexdigest(),
        "exit_code": code,
    }
    stderr.write("manifest " + json.dumps(manifest, sort_keys=True) + "\n")
    return code


def run() -> None:
    sys.exit(main())
