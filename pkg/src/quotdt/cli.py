"""``quotdt``: expand generating functions, verify identities, run the finite-field oracle.

Exit codes: 0 success, 1 verification failure, 2 usage or budget error.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from typing import Optional, Sequence

from . import dt, oracle, verify
from .motive import TateClass, euler_char, weight_specialize

FORMULAS = ("macmahon", "z-affine", "p-punctual", "omega", "z-threefold", "dt-series", "vc-weight")

MAX_POINTS = 3
MAX_Q = 5
MAX_MATRIX_SPACE = 1000  # q^(n^2): number of candidates for each loop matrix
MAX_PARTITION_SIZE = 10


class UsageError(Exception):
    pass


def _dump(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2)


def _parse_ranks(text: str) -> list[int]:
    try:
        ranks = [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad rank list {text!r}") from None
    if not ranks or any(r < 1 for r in ranks):
        raise argparse.ArgumentTypeError("ranks must be positive integers")
    return ranks


def _parse_motive(text: str) -> TateClass:
    if text in dt.NAMED_THREEFOLDS:
        return dt.NAMED_THREEFOLDS[text]
    return TateClass.parse(text)


# -- expand --------------------------------------------------------------------

def _term(c: str, n: int, var: str) -> str:
    if n == 0:
        return c
    mono = var if n == 1 else f"{var}^{n}"
    if c == "1":
        return mono
    if c == "-1":
        return "-" + mono
    if " " in c:
        return f"({c})·{mono}"
    return f"{c}·{mono}"


def _compute(args) -> dict:
    """Evaluate the requested formula into a table description."""
    f, N, r = args.formula, args.order, args.rank
    if N < 0:
        raise UsageError("order must be nonnegative")
    if r < 1:
        raise UsageError("rank must be positive")
    table: dict = {"formula": f, "params": {"order": N}, "kind": "class", "start": 0}
    if f == "macmahon":
        table.update(kind="int", var="q", coeffs=dt.macmahon(N))
    elif f == "dt-series":
        if args.chern:
            try:
                c1c2, c3 = (int(x) for x in args.chern.split(","))
            except ValueError:
                raise UsageError("--chern expects c1c2,c3") from None
            Y = dt.ThreefoldInput(chern=(c1c2, c3), calabi_yau=args.calabi_yau)
            exponent = Y.dt_exponent()
            table["conjectural"] = Y.conjectural
            table["params"]["chern"] = [c1c2, c3]
        elif args.chi is not None:
            exponent = args.chi
        else:
            raise UsageError("dt-series needs --chi or --chern")
        table["params"].update(rank=r, exponent=exponent)
        table.update(kind="int", var="q", coeffs=dt.dt_series(r, exponent, N))
    elif f == "z-affine":
        table["params"]["rank"] = r
        table["coeffs"] = list(dt.z_affine(r, N))
    elif f == "p-punctual":
        table["params"]["rank"] = r
        table["coeffs"] = list(dt.p_punctual(r, N))
    elif f == "omega":
        table["params"]["rank"] = r
        table.update(start=1, coeffs=[dt.omega(r, n) for n in range(1, N + 1)])
    elif f == "z-threefold":
        if not args.motive:
            raise UsageError("z-threefold needs --motive")
        Y = dt.ThreefoldInput(motive=_parse_motive(args.motive), name=args.motive)
        table["params"].update(rank=r, motive=args.motive, mode=args.mode)
        table["coeffs"] = list(dt.z_threefold(Y, r, N, args.mode))
    elif f == "vc-weight":
        table["params"]["rank"] = r
        table.update(kind="weight", coeffs=dt.vc_weight_series(r, N))
    else:
        raise UsageError(f"unknown formula {f!r}")
    return table


def _render_table(table: dict, fmt: str, var: str) -> str:
    kind, coeffs, start = table["kind"], table["coeffs"], table["start"]
    idx = range(start, start + len(coeffs))
    if fmt == "json":
        if kind == "int":
            payload = [str(c) for c in coeffs]
        else:
            payload = [c.to_json() for c in coeffs]
        out = {"formula": table["formula"], "params": table["params"], "coeffs": payload, "start": start}
        if "conjectural" in table:
            out["conjectural"] = table["conjectural"]
        return _dump(out) + "\n"
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        if kind == "class":
            w.writerow(["n", "class", "chi", "weight"])
            for n, c in zip(idx, coeffs):
                w.writerow([n, c.render(var), euler_char(c), str(weight_specialize(c))])
        else:
            w.writerow(["n", "coefficient"])
            for n, c in zip(idx, coeffs):
                w.writerow([n, str(c)])
        return buf.getvalue()
    if fmt == "latex":
        lines = []
        for n, c in zip(idx, coeffs):
            if kind == "class":
                lines.append(f"{n} & ${c.to_latex()}$ & {euler_char(c)} & ${weight_specialize(c).to_latex()}$ \\\\")
            elif kind == "weight":
                lines.append(f"{n} & ${c.to_latex()}$ \\\\")
            else:
                lines.append(f"{n} & {c} \\\\")
        return "\n".join(lines) + "\n"
    # text
    tvar = table.get("var", "t")
    terms = []
    for n, c in zip(idx, coeffs):
        if kind == "int":
            if c or n == start:
                terms.append(_term(str(c), n, tvar))
        elif c:
            s = c.render(var) if isinstance(c, TateClass) else str(c)
            terms.append(_term(s, n, tvar))
    return (", ".join(terms) if terms else "0") + "\n"


def cmd_expand(args) -> int:
    table = _compute(args)
    if table.get("conjectural"):
        print("note: non Calabi-Yau exponent; this series is conjectural", file=sys.stderr)
    sys.stdout.write(_render_table(table, args.format, args.var))
    return 0


# -- verify --------------------------------------------------------------------

def cmd_verify(args) -> int:
    if args.identity and args.suite not in ("identities", "all"):
        raise UsageError("--identity only applies to the identities suite")
    if args.identity and args.identity not in verify.IDENTITIES:
        raise UsageError(f"unknown identity {args.identity!r}; choose from {', '.join(verify.IDENTITIES)}")
    suite = "identities" if args.identity else args.suite
    report = verify.run_suite(
        suite,
        args.order,
        args.ranks,
        instances=args.instances,
        identity=args.identity,
        threads=args.threads or oracle.default_threads(),
    )
    sys.stdout.write(_dump(report.to_json(timing=args.timing)) + "\n")
    return 0 if report.passed else 1


# -- oracle --------------------------------------------------------------------

def _check_budget(n: int, q: int, force: bool) -> None:
    if not oracle.is_prime(q):
        raise UsageError(f"q={q} is not prime")
    if not force and (n > MAX_POINTS or q > MAX_Q or q ** (n * n) > MAX_MATRIX_SPACE):
        raise UsageError(
            f"(n={n}, q={q}) exceeds the enumeration budget n <= {MAX_POINTS}, q <= {MAX_Q}, "
            f"q^(n^2) <= {MAX_MATRIX_SPACE}; pass --force to run anyway"
        )


def cmd_oracle(args) -> int:
    if args.oracle_cmd == "plane-partitions":
        if args.colors < 1 or args.size < 0:
            raise UsageError("need --colors >= 1 and --size >= 0")
        if args.size > MAX_PARTITION_SIZE and not args.force:
            raise UsageError(f"--size above {MAX_PARTITION_SIZE} needs --force")
        count = oracle.colored_plane_partitions(args.colors, args.size)
        sys.stdout.write(_dump({"colors": args.colors, "size": args.size, "count": count}) + "\n")
        return 0
    if args.rank < 1 or args.points < 0:
        raise UsageError("need --rank >= 1 and --points >= 0")
    _check_budget(args.points, args.q, args.force)
    threads = args.threads or oracle.default_threads()
    record = oracle.CountRecord(args.rank, args.points, args.q)
    if args.oracle_cmd == "quot-count":
        record.count_quot = oracle.count_quot_points(args.rank, args.points, args.q, threads)
    else:
        record.count_ncquot = oracle.count_ncquot_points(args.rank, args.points, args.q, threads)
    if args.pin:
        try:
            oracle.pin_record(record, args.pin_file)
        except ValueError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return 1
    sys.stdout.write(_dump(record.to_json()) + "\n")
    return 0


# -- parser --------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="quotdt", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    e = sub.add_parser("expand", help="expand a generating function")
    e.add_argument("--formula", required=True, choices=FORMULAS)
    e.add_argument("--rank", type=int, default=1)
    e.add_argument("--order", type=int, default=6)
    e.add_argument("--chi", type=int, help="exponent chi(Y) for dt-series")
    e.add_argument("--chern", help="c1c2,c3 Chern numbers for dt-series")
    e.add_argument("--calabi-yau", action="store_true", help="declare the 3-fold Calabi-Yau")
    e.add_argument("--motive", help="[Y]: P3, A3, point, P1xP1xP1 or a class like 'L^3 + 1'")
    e.add_argument("--mode", choices=("power", "closed_form"), default="power")
    e.add_argument("--format", choices=("text", "json", "csv", "latex"), default="text")
    e.add_argument("--var", choices=("L", "u"), default="L")
    e.set_defaults(func=cmd_expand)

    v = sub.add_parser("verify", help="run identity suites")
    v.add_argument("--suite", choices=verify.SUITES + ("all",), default="all")
    v.add_argument("--identity", help="run a single identity from the identities suite")
    v.add_argument("--order", type=int, default=8)
    v.add_argument("--ranks", type=_parse_ranks, default=[1, 2, 3])
    v.add_argument("--instances", type=int, default=100)
    v.add_argument("--threads", type=int, default=0)
    v.add_argument("--timing", action="store_true", help="include elapsed_ms per case")
    v.set_defaults(func=cmd_verify)

    o = sub.add_parser("oracle", help="finite-field and plane-partition enumeration")
    osub = o.add_subparsers(dest="oracle_cmd", required=True)
    for name in ("quot-count", "ncquot-count"):
        c = osub.add_parser(name)
        c.add_argument("--rank", type=int, required=True)
        c.add_argument("--points", type=int, required=True)
        c.add_argument("--q", type=int, required=True)
        c.add_argument("--threads", type=int, default=0)
        c.add_argument("--force", action="store_true")
        c.add_argument("--pin", action="store_true", help="append the result to the regression file")
        c.add_argument("--pin-file", default="oracle_counts.json")
        c.set_defaults(func=cmd_oracle)
    pp = osub.add_parser("plane-partitions")
    pp.add_argument("--colors", type=int, required=True)
    pp.add_argument("--size", type=int, required=True)
    pp.add_argument("--force", action="store_true")
    pp.set_defaults(func=cmd_oracle)
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except (UsageError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
