"""Command line interface.

Exit codes: 0 yes/ok, 1 invalid input, 2 no, 3 inconclusive, 64 usage.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path

import numpy as np

from . import __version__
from .brackets import BracketTensor, classify
from .curvature import KAPPA
from .decide import (
    INCONCLUSIVE,
    NO,
    YES,
    Verdict,
    admits_flat,
    admits_negative_einstein,
    admits_solsoliton,
    is_einstein_nilradical,
    reduce_direct_sum,
)
from .derivations import pre_einstein
from .errors import Inconclusive, JacobiError, ParseError, SolvSolitonError
from .flow import distinguished_verdict, flow
from .io import SCHEMA_VERSION, emit, fraction_str, read_algebra, to_jsonable, verdict_to_dict, write_atomic

EXIT_OK, EXIT_INVALID, EXIT_NO, EXIT_INCONCLUSIVE, EXIT_USAGE = 0, 1, 2, 3, 64


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _fmt_matrix(m) -> str:
    rows = [[fraction_str(v) if not isinstance(v, float) else f"{v:.6g}" for v in row] for row in np.atleast_2d(np.asarray(m)).tolist()]
    width = max((len(x) for r in rows for x in r), default=1)
    return "\n".join("  [" + " ".join(x.rjust(width) for x in r) + "]" for r in rows)


def _fmt_value(v) -> str:
    if isinstance(v, np.ndarray):
        return "\n" + _fmt_matrix(v)
    if isinstance(v, (list, tuple)) and v and isinstance(v[0], np.ndarray):
        return "".join("\n" + _fmt_matrix(np.asarray([x])) for x in v)
    return str(to_jsonable(v))


def _print_verdict(v: Verdict, out=None) -> None:
    out = out or sys.stdout
    print(f"{v.question}: {v.label}", file=out)
    if v.failed_step:
        print(f"  failed step: {v.failed_step}", file=out)
    if v.verified is not None:
        print(f"  verified: {str(v.verified).lower()}", file=out)
    for key in ("phi", "X_phi", "c", "D", "destabilizer", "imaginary_element", "complement", "metric"):
        if key in v.witnesses and v.witnesses[key] is not None:
            print(f"  {key}:{'' if isinstance(v.witnesses[key], np.ndarray) else ' '}{_fmt_value(v.witnesses[key])}", file=out)
    for note in v.notes:
        print(f"  note: {note}", file=out)


def _code(v: Verdict) -> int:
    return {YES: EXIT_OK, NO: EXIT_NO, INCONCLUSIVE: EXIT_INCONCLUSIVE}[v.answer]


def _flow_kw(args) -> dict:
    return {"tol": args.tol, "max_time": args.max_time}


def cmd_validate(args) -> int:
    af = read_algebra(args.file)
    cls = classify(af.mu)
    print(f"valid Lie algebra of dimension {af.mu.dim}" + (f" ({af.mu.name})" if af.mu.name else ""))
    for key, val in cls.as_dict().items():
        print(f"  {key}: {val}")
    return EXIT_OK


def cmd_pre_einstein(args) -> int:
    mu = read_algebra(args.file).mu
    pe = pre_einstein(mu)
    print("phi =")
    print(_fmt_matrix(pe.phi))
    print(f"semisimple: {pe.semisimple}")
    print(f"minimal polynomial: {pe.report.minimal_polynomial.as_expr()}")
    if pe.eigenvalues is None:
        print("eigenvalues: not all rational")
    else:
        print("eigenvalues: " + ", ".join(f"{fraction_str(v)} (x{m})" for v, m in pe.eigenvalues))
        print(f"all positive: {pe.all_positive}")
    return EXIT_OK


def _require(cond: bool, message: str) -> None:
    if not cond:
        raise _InvalidInput(message)


class _InvalidInput(Exception):
    pass


def cmd_nilsoliton(args) -> int:
    mu = read_algebra(args.file).mu
    _require(classify(mu).nilpotent, "nilsoliton needs a nilpotent Lie algebra")
    v = is_einstein_nilradical(mu, cross_check=args.cross_check, **_flow_kw(args))
    _print_verdict(v)
    return _code(v)


def cmd_einstein(args) -> int:
    mu = read_algebra(args.file).mu
    _require(classify(mu).solvable, "einstein needs a solvable Lie algebra")
    flat = admits_flat(mu)
    neg = admits_negative_einstein(mu, **_flow_kw(args))
    print(f"flat: {flat.label}")
    print(f"negative Einstein: {neg.label}")
    for v in (flat, neg):
        print()
        _print_verdict(v)
    if flat.yes or neg.yes:
        return EXIT_OK
    if neg.answer == INCONCLUSIVE or flat.answer == INCONCLUSIVE:
        return EXIT_INCONCLUSIVE
    return EXIT_NO


def cmd_solsoliton(args) -> int:
    mu = read_algebra(args.file).mu
    _require(classify(mu).solvable, "solsoliton needs a solvable Lie algebra")
    v = admits_solsoliton(mu, **_flow_kw(args))
    _print_verdict(v)
    return _code(v)


def cmd_flow(args) -> int:
    mu = read_algebra(args.file).mu
    _require(not mu.is_zero, "the flow is undefined for the zero bracket")
    traj = flow(mu, tol=args.tol, max_time=args.max_time)
    fin = traj.final
    print(f"converged: {traj.converged}")
    print(f"steps: {traj.steps} (rejected {traj.rejected})")
    print(f"t: {fin.t:.6g}  F: {fin.F:.12g}  residual: {fin.residual:.3e}")
    if args.csv:
        tmp = Path(str(args.csv) + ".partial")
        traj.write_csv(tmp)
        tmp.replace(args.csv)
        print(f"trajectory written to {args.csv}")
    return EXIT_OK if traj.converged else EXIT_INCONCLUSIVE


def build_report(mu: BracketTensor, splitting=None, flow_kw: dict | None = None, cross_check: bool = False) -> dict:
    """Every applicable verdict plus a flow summary, as a JSON-ready dict."""
    flow_kw = flow_kw or {}
    t0 = time.perf_counter()
    cls = classify(mu)
    verdicts: list[Verdict] = []
    if cls.nilpotent:
        verdicts.append(is_einstein_nilradical(mu, cross_check=cross_check, **flow_kw))
    if cls.solvable:
        verdicts += [
            admits_flat(mu),
            admits_negative_einstein(mu, **flow_kw),
            admits_solsoliton(mu, **flow_kw),
        ]
    report = {
        "schema_version": SCHEMA_VERSION,
        "tool_version": __version__,
        "kappa": KAPPA,
        "input": emit(mu, splitting),
        "classification": cls.as_dict(),
        "verdicts": [verdict_to_dict(v) for v in verdicts],
    }
    if mu.is_zero:
        report["flow"] = {"skipped": "zero bracket: moment map undefined"}
    else:
        dv = distinguished_verdict(mu, **flow_kw)
        report["flow"] = {"distinguished": dv.distinguished, **to_jsonable(dv.evidence)}
    if splitting is not None and cls.solvable:
        red = reduce_direct_sum(mu, splitting)
        combined = red.solve(**flow_kw)
        direct = {v.question: v.answer for v in verdicts}
        report["direct_sum"] = {
            "summands": [emit(red.mu1), emit(red.mu2)],
            "combined": {q: verdict_to_dict(v) for q, v in combined.items()},
            "agrees_with_direct": all(direct.get(q) == v.answer for q, v in combined.items()),
        }
    report["timing_seconds"] = time.perf_counter() - t0
    return report


def cmd_report(args) -> int:
    af = read_algebra(args.file)
    rep = build_report(af.mu, af.splitting, _flow_kw(args), cross_check=args.cross_check)
    text = json.dumps(rep, indent=2) + "\n"
    if args.json:
        write_atomic(args.json, text)
        print(f"report written to {args.json}")
    else:
        sys.stdout.write(text)
    return EXIT_OK


def make_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="solvsoliton", description="Einstein, nilsoliton and solsoliton metrics from structure constants")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(name, func, help_, flow_opts=False):
        sp = sub.add_parser(name, help=help_)
        sp.add_argument("file", help="JSON structure-constant file")
        if flow_opts:
            sp.add_argument("--tol", type=float, default=1e-10, help="critical-point residual tolerance")
            sp.add_argument("--max-time", type=float, default=1e4, help="flow time budget")
        sp.set_defaults(func=func)
        return sp

    add("validate", cmd_validate, "check Jacobi and classify")
    add("pre-einstein", cmd_pre_einstein, "print the pre-Einstein derivation")
    sp = add("nilsoliton", cmd_nilsoliton, "decide whether a nilpotent algebra is an Einstein nilradical", True)
    sp.add_argument("--cross-check", action="store_true", help="confirm exact 'no' answers with the flow")
    add("einstein", cmd_einstein, "flat and negative Einstein metrics on a solvable algebra", True)
    add("solsoliton", cmd_solsoliton, "decide whether a solvable algebra admits a solsoliton", True)
    sp = add("flow", cmd_flow, "run the bracket flow", True)
    sp.add_argument("--csv", type=Path, help="write t,F,residual,derdim to this file")
    sp = add("report", cmd_report, "run everything and emit a JSON report", True)
    sp.add_argument("--json", type=Path, help="output path (default: standard output)")
    sp.add_argument("--cross-check", action="store_true", help="confirm exact 'no' answers with the flow")
    return p


def main(argv=None) -> int:
    args = make_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ParseError, JacobiError, _InvalidInput, FileNotFoundError, IsADirectoryError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except Inconclusive as exc:
        print(f"inconclusive: {exc}", file=sys.stderr)
        return EXIT_INCONCLUSIVE
    except SolvSolitonError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
