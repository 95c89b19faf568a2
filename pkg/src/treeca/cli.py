"""Command-line interface.

Subcommands: check, verify, det, evolve, orbit, global-period, render.
``check`` exits 0 for a reversible rule and 1 otherwise; every command exits
2 on bad input.
"""

from __future__ import annotations

import argparse
import csv
import itertools
import random
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path

from . import __version__
from .dynamics import backward, global_period, orbit
from .errors import Exceeded, TreeCAError
from .modmatrix import build_matrix, det_exact_mod, dump_matrix
from .render import Geometry, render_strip, render_svg
from .reversibility import (
    criterion_mod2,
    criterion_mod3,
    criterion_pow2,
    det_formula,
    is_pow2_height,
    is_reversible,
)
from .rules import LinearRule, format_configuration, iterate, parse_configuration
from .tree import TreeShape, node_cap

EXIT_OK, EXIT_NO, EXIT_ERROR = 0, 1, 2
DEFAULT_ORACLE_CAP = 4096

SWEEP_COLUMNS = (
    "m", "d", "n", "b", "c", "det_formula", "det_oracle", "reversible", "criteria_verdict", "agree",
)


class UsageError(Exception):
    pass


def parse_range(text: str) -> list[int]:
    """``"3"``, ``"2..5"`` (inclusive) or ``"2,3,7"``."""
    out: list[int] = []
    try:
        for part in text.split(","):
            if ".." in part:
                lo, hi = part.split("..")
                out.extend(range(int(lo), int(hi) + 1))
            else:
                out.append(int(part))
    except ValueError:
        raise UsageError(f"bad range {text!r}") from None
    if not out:
        raise UsageError(f"empty range {text!r}")
    return out


def parse_coeffs(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(tok) for tok in text.split(","))
    except ValueError:
        raise UsageError(f"bad coefficient list {text!r}") from None


def _rule_from_args(args, m: int | None = None, d: int | None = None) -> LinearRule:
    m = args.m if getattr(args, "m", None) is not None else m
    if m is None:
        raise UsageError("--m is required")
    c = parse_coeffs(args.c)
    d = getattr(args, "d", None) or d or len(c)
    if len(c) != d:
        raise UsageError(f"--c has {len(c)} coefficients but the tree arity is {d}")
    return LinearRule(m, args.b, c)


def _shape_from_args(args) -> TreeShape:
    d = args.d or len(parse_coeffs(args.c))
    return TreeShape(d, args.n)


def _add_rule_args(p, need_shape=True):
    p.add_argument("--m", type=int, required=need_shape, help="modulus")
    if need_shape:
        p.add_argument("--d", type=int, help="arity (default: number of --c values)")
        p.add_argument("--n", type=int, required=True, help="tree height")
    p.add_argument("--b", type=int, required=True, help="centre coefficient")
    p.add_argument("--c", required=True, help="child coefficients, comma separated")


# -- check / det ----------------------------------------------------------------


def cmd_check(args) -> int:
    rule = _rule_from_args(args)
    shape = _shape_from_args(args)
    report = is_reversible(rule, shape, mode=args.mode)
    for key, value in report.as_dict().items():
        print(f"{key}={value if value is not None else '-'}")
    return EXIT_OK if report.reversible else EXIT_NO


def cmd_det(args) -> int:
    rule = _rule_from_args(args)
    shape = _shape_from_args(args)
    mat = build_matrix(rule, shape)
    if args.dump:
        sys.stdout.write(dump_matrix(mat))
    oracle = det_exact_mod(mat)
    formula = det_formula(rule, shape).det
    print(f"det_oracle={oracle}")
    print(f"det_formula={formula}")
    return EXIT_OK if oracle == formula else EXIT_NO


# -- verify ---------------------------------------------------------------------


@dataclass(frozen=True)
class SweepRow:
    m: int
    d: int
    n: int
    b: int
    c: tuple[int, ...]
    det_formula: int
    det_oracle: int | None
    reversible: bool
    criteria_verdict: bool | None
    agree: bool
    oracle_skipped: bool = False

    def csv_fields(self) -> list[str]:
        def verdict(v):
            return "" if v is None else ("reversible" if v else "irreversible")

        oracle = "over-cap" if self.oracle_skipped else ("" if self.det_oracle is None else str(self.det_oracle))
        return [
            str(self.m), str(self.d), str(self.n), str(self.b), ";".join(map(str, self.c)),
            str(self.det_formula), oracle, verdict(self.reversible),
            verdict(self.criteria_verdict), str(self.agree).lower(),
        ]

    @property
    def criteria_mismatch(self) -> bool:
        return self.criteria_verdict is not None and self.criteria_verdict != self.reversible


def _criterion(kind: str | None, rule: LinearRule, n: int) -> bool | None:
    if kind is None or rule.d != 2:
        return None
    if kind in ("p2", "auto") and rule.m == 2:
        return criterion_mod2(rule, n).reversible
    if kind in ("p3", "auto") and rule.m == 3:
        return criterion_mod3(rule, n).reversible
    if kind in ("pow2", "auto"):
        from sympy import isprime

        l = is_pow2_height(n)
        if l is not None and isprime(rule.m):
            return criterion_pow2(rule, l).reversible
    return None


def _sweep_tuples(m: int, d: int, budget: int, rng: random.Random):
    total = m ** (d + 1)
    if total <= budget:
        yield from itertools.product(range(m), repeat=d + 1)
        return
    for _ in range(budget):
        yield tuple(rng.randrange(m) for _ in range(d + 1))


def sweep_row(m, d, n, coeffs, criteria=None, oracle_cap=DEFAULT_ORACLE_CAP) -> SweepRow:
    rule = LinearRule(m, coeffs[0], coeffs[1:])
    shape = TreeShape(d, n)
    report = det_formula(rule, shape)
    skipped = shape.node_count > min(oracle_cap, node_cap())
    oracle = None if skipped else det_exact_mod(build_matrix(rule, shape))
    return SweepRow(
        m, d, n, rule.b, rule.c, report.det, oracle, report.reversible,
        _criterion(criteria, rule, n), oracle is None or oracle == report.det,
        oracle_skipped=skipped,
    )


def run_sweep(ms, ds, ns, *, budget=100_000, seed=0, criteria=None,
              oracle_cap=DEFAULT_ORACLE_CAP, jobs=1):
    """All sweep rows in deterministic (m, d, n, tuple) order."""
    tasks = []
    for m in ms:
        for d in ds:
            for n in ns:
                rng = random.Random(f"{seed}:{m}:{d}:{n}")
                tasks += [(m, d, n, t) for t in _sweep_tuples(m, d, budget, rng)]

    def work(task):
        m, d, n, t = task
        return sweep_row(m, d, n, t, criteria, oracle_cap)

    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(work, tasks))
    return [work(t) for t in tasks]


def cmd_verify(args) -> int:
    ms, ds, ns = parse_range(args.m), parse_range(args.d), parse_range(args.n)
    rows = run_sweep(
        ms, ds, ns, budget=args.max_tuples, seed=args.seed, criteria=args.criteria,
        oracle_cap=args.oracle_cap, jobs=args.jobs,
    )
    writer = csv.writer(sys.stdout, lineterminator="\n")
    writer.writerow(SWEEP_COLUMNS)
    for row in rows:
        writer.writerow(row.csv_fields())
    disagree = sum(not r.agree for r in rows)
    mismatch = sum(r.criteria_mismatch for r in rows)
    skipped = sum(r.oracle_skipped for r in rows)
    print(
        f"TOTAL={len(rows)}, DISAGREE={disagree}, CRITERIA_MISMATCH={mismatch}, ORACLE_SKIPPED={skipped}",
        file=sys.stderr,
    )
    return EXIT_NO if disagree else EXIT_OK


# -- configuration commands -----------------------------------------------------


def _read_config(path: str):
    text = sys.stdin.read() if path == "-" else Path(path).read_text()
    return parse_configuration(text)


def _write(path: str | None, text: str):
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        Path(path).write_text(text)


def cmd_evolve(args) -> int:
    t = _read_config(args.input)
    rule = _rule_from_args(args, m=t.m, d=t.shape.d)
    if rule.m != t.m:
        raise UsageError(f"--m {rule.m} does not match the file's modulus {t.m}")
    t = backward(t, rule, args.steps) if args.backward else iterate(t, rule, args.steps)
    _write(args.out, format_configuration(t))
    return EXIT_OK


def cmd_orbit(args) -> int:
    t = _read_config(args.input)
    rule = _rule_from_args(args, m=t.m, d=t.shape.d)
    try:
        summary = orbit(t, rule, args.max_steps)
    except Exceeded as exc:
        print(str(exc), file=sys.stderr)
        return EXIT_NO
    print(f"transient={summary.transient}, period={summary.period}")
    return EXIT_OK


def cmd_global_period(args) -> int:
    rule = _rule_from_args(args)
    shape = _shape_from_args(args)
    try:
        r, s = global_period(rule, shape, args.max_steps)
    except Exceeded as exc:
        print(str(exc), file=sys.stderr)
        return EXIT_NO
    print(f"preperiod={r}, period={s}")
    return EXIT_OK


def cmd_render(args) -> int:
    t = _read_config(args.input)
    geometry = Geometry(radius_step=args.radius_step, node_radius=args.node_radius)
    if args.steps:
        if args.b is None or args.c is None:
            raise UsageError("--steps needs the rule (--b and --c)")
        rule = _rule_from_args(args, m=t.m, d=t.shape.d)
        frames = [t]
        for _ in range(args.steps):
            frames.append(iterate(frames[-1], rule, 1))
        svg = render_strip(frames, geometry=geometry, columns=args.columns)
    else:
        svg = render_svg(t, geometry=geometry)
    _write(args.out, svg)
    return EXIT_OK


# -- parser ---------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="treeca",
        description="Linear cellular automata on finite Cayley trees with periodic boundary.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", help="decide reversibility of one rule")
    _add_rule_args(p)
    p.add_argument("--mode", choices=("formula", "oracle", "auto"), default="auto")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("verify", help="closed form vs. brute-force determinant sweep (CSV)")
    p.add_argument("--m", required=True, help="moduli, e.g. 2..4")
    p.add_argument("--d", default="2", help="arities")
    p.add_argument("--n", required=True, help="heights")
    p.add_argument("--criteria", choices=("p2", "p3", "pow2", "auto"))
    p.add_argument("--max-tuples", type=int, default=100_000,
                   help="exhaustive below this many coefficient tuples, sampled above")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--oracle-cap", type=int, default=DEFAULT_ORACLE_CAP,
                   help="largest node count for the brute-force determinant")
    p.add_argument("--jobs", type=int, default=1)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("det", help="brute-force and closed-form determinants")
    _add_rule_args(p)
    p.add_argument("--dump", action="store_true", help="print the matrix first")
    p.set_defaults(func=cmd_det)

    p = sub.add_parser("evolve", help="apply the global map k times")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--out")
    p.add_argument("--steps", type=int, default=1)
    p.add_argument("--backward", action="store_true", help="step backwards (reversible rules)")
    _add_rule_args(p, need_shape=False)
    p.set_defaults(func=cmd_evolve)

    p = sub.add_parser("orbit", help="transient and period of one configuration")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--max-steps", type=int, default=1_000_000)
    _add_rule_args(p, need_shape=False)
    p.set_defaults(func=cmd_orbit)

    p = sub.add_parser("global-period", help="eventual period of the matrix powers")
    _add_rule_args(p)
    p.add_argument("--max-steps", type=int, default=100_000)
    p.set_defaults(func=cmd_global_period)

    p = sub.add_parser("render", help="draw a configuration (or its orbit strip) as SVG")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--out")
    p.add_argument("--steps", type=int, default=0, help="also draw this many later time steps")
    p.add_argument("--columns", type=int)
    p.add_argument("--radius-step", type=float, default=40.0)
    p.add_argument("--node-radius", type=float)
    p.add_argument("--m", type=int)
    p.add_argument("--b", type=int)
    p.add_argument("--c")
    p.set_defaults(func=cmd_render)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_ERROR
    try:
        return args.func(args)
    except (UsageError, TreeCAError, ValueError, OSError) as exc:
        print(f"treeca {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
