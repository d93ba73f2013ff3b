"""Command-line interface: tables, series, identity-check suites and certificates.

Every command prints exact rationals only.  ``--format json`` emits

    {command, params, results: [{id, value|series|certificate, provenance}],
     checks: [CheckReport...], version}

Exit codes: 0 success, 1 a check failed, 2 usage or parse error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
import time
from fractions import Fraction
from pathlib import Path
from typing import Sequence

from . import __version__
from .report import CheckReport


class UsageError(ValueError):
    pass


# formatting ------------------------------------------------------------------------

def fmt_rat(c) -> str:
    c = Fraction(c)
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def fmt_series(coeffs: Sequence, var: str = "q") -> str:
    parts = []
    for k, c in enumerate(coeffs):
        c = Fraction(c)
        if not c:
            continue
        mono = "" if k == 0 else (var if k == 1 else f"{var}^{k}")
        mag = abs(c)
        if not mono:
            body = fmt_rat(mag)
        elif mag == 1:
            body = mono
        else:
            body = f"{fmt_rat(mag)}*{mono}"
        parts.append(("-" if c < 0 else "+", body))
    if not parts:
        return f"O({var}^{len(coeffs)})"
    out = ("-" if parts[0][0] == "-" else "") + parts[0][1]
    for sign, body in parts[1:]:
        out += f" {sign} {body}"
    return out + f" + O({var}^{len(coeffs)})"


def parse_spec(text: str | None):
    if text is None:
        return None
    try:
        a, b = (Fraction(x.strip()) for x in text.split(","))
    except ValueError as exc:
        raise UsageError(f"--specialize expects two rationals 't1,t2', got {text!r}") from exc
    if a == 0 or b == 0 or a + b == 0:
        raise UsageError("--specialize needs t1, t2 and t1 + t2 nonzero")
    return (a, b)


def _spec_json(spec):
    return None if spec is None else [fmt_rat(spec[0]), fmt_rat(spec[1])]


# commands ----------------------------------------------------------------------------

def _ns(args, default_max: int) -> list[int]:
    if args.n is not None:
        return [args.n]
    return list(range(2, (args.n_max or default_max) + 1))


def cmd_dseries(args):
    from .genus1 import d_series, d_series_qexp

    spec = None if args.symbolic else parse_spec(args.specialize)
    results = []
    for n in _ns(args, 5):
        if n < 1:
            raise UsageError("--n must be positive")
        item = {"id": f"n={n}", "value": str(d_series(n, spec)), "provenance": "trace formula"}
        if args.order is not None:
            item["series"] = [fmt_rat(c) for c in d_series_qexp(n, args.order).coeffs[:args.order + 1]]
            item["series_prefactor"] = "-(1/24)*(t1+t2)^2/(t1*t2)"
        results.append(item)
    return results, []


def cmd_tables(args):
    from .genus1 import load_table, table_eval

    spec = None if args.symbolic else parse_spec(args.specialize)
    ns = _ns(args, 5)
    results = []
    for (n, mu), entry in sorted(load_table().items()):
        if n not in ns:
            continue
        label = "(" + ",".join(map(str, mu)) + ")"
        item = {"id": f"n={n} {label}", "kind": entry.kind, "provenance": "table"}
        if entry.kind == "closed":
            item["value"] = str(table_eval(n, mu, "closed", spec).value)
        else:
            item["combo"] = entry.value
            if entry.closed is not None:
                item["closed"] = str(table_eval(n, mu, "closed", spec).value)
            if spec is not None:
                item["value"] = str(table_eval(n, mu, "combo", spec).value)
        results.append(item)
    if not results:
        raise UsageError("the table covers 2 <= n <= 5")
    return results, []


def cmd_hodge(args):
    from .genus1 import hodge_family_series

    order = 8 if args.order is None else args.order
    gs = [args.g] if args.g is not None else list(range(1, 7))
    results = []
    for g in gs:
        if g < 1:
            raise UsageError("--g must be at least 1")
        s = hodge_family_series(g, order)
        results.append({"id": f"g={g}", "series": [fmt_rat(s[k]) for k in range(order + 1)],
                        "variable": "Q", "provenance": "Eisenstein"})
    return results, []


def cmd_nl(args):
    from .genus1 import nl_coefficient, nl_projection_check

    n_max = args.n_max or 8
    gs = [args.g] if args.g is not None else [2, 3, 4]
    results, checks = [], []
    for g in gs:
        if g < 2:
            raise UsageError("--g must be at least 2")
        for n in range(1, n_max + 1):
            results.append({"id": f"g={g} n={n}", "value": fmt_rat(nl_coefficient(g, n)),
                            "provenance": "lambda_(g-1) coefficient"})
        checks.append(nl_projection_check(g, n_max))
    return results, checks


def cmd_trace(args):
    from .hilb import build_md, trn
    from .kernel import RatFunc

    spec = None if args.symbolic else parse_spec(args.specialize)
    results = []
    rep = CheckReport("trace")
    for n in _ns(args, 5):
        if n < 1:
            raise UsageError("--n must be positive")
        tr = trn(n)
        tm = build_md(n, spec).trace()
        lhs = tr if spec is None else tr.subs({"t1": spec[0], "t2": spec[1]})
        t12 = RatFunc.gen("t1") + RatFunc.gen("t2") if spec is None else RatFunc.const(spec[0] + spec[1])
        rep.record(tm == lhs * t12, f"n={n}")
        results.append({"id": f"n={n}", "value": str(tr), "provenance": "partition sum"})
    return results, [rep]


def _cache_dir() -> Path | None:
    d = os.environ.get("HILBGW_CACHE_DIR")
    if not d:
        return None
    path = Path(d)
    path.mkdir(parents=True, exist_ok=True)
    return path


def certificate(n: int, spec, q_order):
    """wronskian_certificate, memoized in HILBGW_CACHE_DIR when it is set."""
    from .spectrum import wronskian_certificate

    cache = _cache_dir()
    key = f"wronskian-n{n}-{_spec_json(spec)}-{q_order}.json".replace(" ", "").replace("/", "_")
    if cache is not None and (cache / key).exists():
        return json.loads((cache / key).read_text())
    cert = wronskian_certificate(n, spec, q_order).to_json()
    if cache is not None:
        (cache / key).write_text(json.dumps(cert, sort_keys=True))
    return cert


def cmd_wronskian(args):
    spec = parse_spec(args.specialize)
    results = []
    rep = CheckReport("wronskian")
    for n in _ns(args, 5):
        if n < 2:
            raise UsageError("the Wronskian certificate needs n >= 2")
        cert = certificate(n, spec, args.order)
        rep.record(cert["verdict"] == "pass", f"n={n}")
        results.append({"id": f"n={n}", "certificate": cert, "provenance": "specialized lift"})
    return results, [rep]


def _symfun_inputs(args) -> list[str]:
    if args.exprs:
        return list(args.exprs)
    return [line.strip() for line in sys.stdin if line.strip()]


def cmd_symfun(args):
    from .symfun import parse_diffpoly, rewrite

    if args.action == "rewrite":
        n = args.n or 2
        results = []
        for text in _symfun_inputs(args):
            expr = parse_diffpoly(text, n)
            try:
                value = rewrite(expr, n)
            except ValueError as exc:
                raise UsageError(f"{text}: {exc}") from exc
            results.append({"id": text, "value": str(value), "provenance": "rewrite"})
        return results, []
    return [], [_symfun_suite(args.seed, args.count, args.n_max or 4)]


def _symfun_suite(seed: int, count: int, n_max: int) -> CheckReport:
    from .symfun import oracle_run

    rep = CheckReport("symfun")
    rep.notes.append(f"seed={seed}")
    for k, (expr, n, m, direct, via) in enumerate(oracle_run(count, seed, n_max=n_max)):
        rep.record(direct == via, f"trial {k}: n={n} m={m} {expr} direct={direct} rewritten={via}")
    return rep


def _suite_runs(name: str, args) -> list:
    """Callables producing CheckReports for one suite."""
    from . import genus1, hilb, qmodular

    fast = args.fast
    n_max = args.n_max
    if name == "trace":
        top = n_max or (4 if fast else 7)
        return [lambda: hilb.trace_identity_check(top, min(top, 3 if fast else 5))]
    if name == "lemma34":
        return [lambda: qmodular.lemma_trace_check(n_max or (4 if fast else 7),
                                                   args.u_order or (5 if fast else 11))]
    if name == "degree0":
        return [lambda: genus1.degree0_identity_check(args.order or (6 if fast else 12))]
    if name == "hodge":
        return [lambda: genus1.hodge_check(3 if fast else 6, args.order or (6 if fast else 12))]
    if name == "section5":
        specs = ((1, 5),) if fast else ((1, 5), (2, 7))
        return [lambda: genus1.section5_check(specs), lambda: genus1.table_audit()]
    if name == "exxx":
        return [lambda: genus1.exxx_check(n_max or (4 if fast else 7)),
                lambda: genus1.xcce_series(3 if fast else 4, n_max or (4 if fast else 8))[1]]
    if name == "nl":
        top = n_max or (5 if fast else 8)
        return [lambda g=g: genus1.nl_projection_check(g, top) for g in (2, 3, 4)]
    if name == "wronskian":
        spec = parse_spec(args.specialize)

        def run():
            rep = CheckReport("wronskian")
            for n in range(2, (n_max or (4 if fast else 5)) + 1):
                cert = certificate(n, spec, args.order)
                rep.record(cert["verdict"] == "pass",
                           f"n={n} first nonzero index {cert['first_nonzero_index']}")
            return rep
        return [run]
    if name == "symfun":
        return [lambda: _symfun_suite(args.seed, 20 if fast else 200, n_max or 4)]
    raise UsageError(f"unknown suite {name!r}")


SUITES = ("trace", "lemma34", "degree0", "hodge", "section5", "exxx", "nl", "wronskian", "symfun")


def cmd_check(args):
    names = SUITES if args.suite == "all" else (args.suite,)
    runs = [run for name in names for run in _suite_runs(name, args)]
    checks = []
    for run in runs:
        start = time.perf_counter()
        rep = run()
        # timings go to stderr so that stdout stays byte-stable
        print(f"{rep.name}: {time.perf_counter() - start:.2f}s", file=sys.stderr)
        checks.append(rep)
    return [], checks


# output -------------------------------------------------------------------------------

def render(command: str, params: dict, results: list, checks: list[CheckReport], fmt: str) -> str:
    if fmt == "json":
        doc = {"command": command, "params": params, "results": results,
               "checks": [c.to_json() for c in checks], "version": __version__}
        return json.dumps(doc, indent=2, sort_keys=True) + "\n"
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["id", "field", "value"])
        for item in results:
            for key in sorted(item):
                if key == "id":
                    continue
                val = item[key]
                w.writerow([item["id"], key, json.dumps(val, sort_keys=True) if isinstance(val, (dict, list)) else val])
        for c in checks:
            w.writerow([c.name, "check", "PASS" if c.passed else "FAIL"])
        return buf.getvalue()
    lines = []
    for item in results:
        if "certificate" in item:
            cert = item["certificate"]
            lines.append(f"{item['id']}: {cert['verdict']} at (t1,t2)=({cert['t1']},{cert['t2']}), "
                         f"first nonzero index {cert['first_nonzero_index']}, coefficient {cert['coefficient']}")
            continue
        if "value" in item:
            lines.append(f"{item['id']}: {item['value']}")
        elif "combo" in item:
            lines.append(f"{item['id']}: {item['combo']}")
        if "closed" in item:
            lines.append(f"  closed form: {item['closed']}")
        if "series" in item:
            var = item.get("variable", "q")
            pref = item.get("series_prefactor")
            body = fmt_series([Fraction(c) for c in item["series"]], var)
            lines.append(f"  {pref} * ({body})" if pref else f"{item['id']}: {body}")
    for c in checks:
        lines.append(c.line())
    return "\n".join(lines) + ("\n" if lines else "")


# argument parsing ----------------------------------------------------------------------

def _common() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--n", type=int)
    p.add_argument("--n-max", type=int)
    p.add_argument("--g", type=int)
    p.add_argument("--order", "--expand", type=int, dest="order")
    p.add_argument("--u-order", type=int)
    p.add_argument("--specialize", metavar="T1,T2")
    p.add_argument("--symbolic", action="store_true")
    p.add_argument("--format", choices=("json", "csv", "text"), default="text")
    p.add_argument("--out", metavar="PATH")
    p.add_argument("--seed", type=int, default=0)
    return p


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = argparse.ArgumentParser(prog="hilbgw", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("dseries", parents=[common], help="the divisor series <D>_1")
    sub.add_parser("tables", parents=[common], help="one-point series for 2 <= n <= 5")
    sub.add_parser("hodge", parents=[common], help="Hodge-class series of the elliptic family")
    sub.add_parser("nl", parents=[common], help="Noether-Lefschetz coefficients")
    sub.add_parser("trace", parents=[common], help="normalized traces Tr_n")
    sub.add_parser("wronskian", parents=[common], help="Wronskian nondegeneracy certificates")
    p = sub.add_parser("check", parents=[common], help="run identity-check suites")
    p.add_argument("suite", choices=SUITES + ("all",))
    p.add_argument("--fast", action="store_true")
    p = sub.add_parser("symfun", parents=[common], help="symmetric differential polynomials")
    p.add_argument("action", choices=("rewrite", "oracle"))
    p.add_argument("exprs", nargs="*", help="expressions (read from stdin when absent)")
    p.add_argument("--count", type=int, default=200)
    return parser


COMMANDS = {"dseries": cmd_dseries, "tables": cmd_tables, "hodge": cmd_hodge, "nl": cmd_nl,
            "trace": cmd_trace, "wronskian": cmd_wronskian, "check": cmd_check, "symfun": cmd_symfun}


def _params(args) -> dict:
    out = {}
    for key, val in sorted(vars(args).items()):
        if key in ("command", "format", "out") or val is None or val is False:
            continue
        out[key] = val if isinstance(val, (int, str, bool, list)) else str(val)
    return out


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args, extra = parser.parse_known_args(argv)
        # argparse stops collecting nargs="*" positionals at the first option
        if extra and args.command == "symfun" and not any(e.startswith("--") for e in extra):
            args.exprs = list(args.exprs) + extra
        elif extra:
            parser.error(f"unrecognized arguments: {' '.join(extra)}")
    except SystemExit as exc:
        return int(exc.code or 0)
    from .symfun import SymfunParseError

    for flag in ("n", "n_max", "g", "order", "u_order"):
        val = getattr(args, flag, None)
        if val is not None and val < 0:
            print(f"hilbgw: error: --{flag.replace('_', '-')} must be nonnegative", file=sys.stderr)
            return 2
    try:
        results, checks = COMMANDS[args.command](args)
    except (UsageError, SymfunParseError) as exc:
        print(f"hilbgw: error: {exc}", file=sys.stderr)
        return 2
    text = render(args.command, _params(args), results, checks, args.format)
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    return 0 if all(c.passed for c in checks) else 1
