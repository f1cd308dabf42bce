"""Command-line front end: parse a form, run the pipeline, emit a report.

Exit status 0 means a verdict was computed (any verdict, including "not
diagonalizable"); status 2 means the input could not be understood.
"""

from __future__ import annotations

import argparse
import json
import sys
import time

from .decomp import decompose, odeco_precheck, verify
from .errors import NotRealError
from .fields import FieldConfig, parse_scalar, scalar_text
from .forms import Form, SymTensor, form_from_gram, form_text, gram_tensor, \
    linear_text, parse_form
from .upoly import poly_text

REPORT_KEYS = (
    "input", "mode", "adjoined", "n", "d", "rank", "center_dim",
    "center_algebra", "center_algebra_text", "verdict", "lambdas", "forms",
    "blocks", "P", "ortho", "scaling_in_field", "odeco_precheck",
    "verified", "certificates", "timing_seconds",
)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="formdiag",
        description="Decide diagonalizability of higher degree forms and "
                    "symmetric tensors over exact fields.")
    sub = parser.add_subparsers(dest="command", required=True)
    dec = sub.add_parser(
        "decompose",
        help="decompose a homogeneous form into powers of linear forms")
    dec.add_argument("polynomial", nargs="?",
                     help="form in x1..xn, e.g. 'x1^4+x2^4+6*x1^2*x2^2'")
    dec.add_argument("--tensor", metavar="FILE",
                     help="JSON symmetric tensor entries instead of a polynomial")
    dec.add_argument("--vars", type=int, default=None,
                     help="override the inferred variable count")
    dec.add_argument("--mode", choices=("exact", "float"), default="exact")
    dec.add_argument("--adjoin", type=int, action="append", default=[],
                     metavar="M", help="adjoin sqrt(M); repeatable")
    dec.add_argument("--max-adjoin", type=int, default=2,
                     help="budget for automatic quadratic extensions (default 2)")
    dec.add_argument("--tol", type=float, default=1e-9,
                     help="tolerance for float mode (default 1e-9)")
    dec.add_argument("--seed", type=int, default=0)
    fmt = dec.add_mutually_exclusive_group()
    fmt.add_argument("--json", dest="as_json", action="store_true", default=True)
    fmt.add_argument("--text", dest="as_json", action="store_false")
    dec.add_argument("--odeco-only", action="store_true",
                     help="run only the commuting-slices screen")
    return parser


def _load_tensor(path: str, cfg: FieldConfig, n: int = None) -> SymTensor:
    with open(path, "r", encoding="utf-8") as fh:
        raw = json.load(fh)
    if not isinstance(raw, list) or not raw:
        raise ValueError("tensor file must be a nonempty JSON list")
    entries = {}
    width = n or 0
    degree = None
    for item in raw:
        idx = tuple(int(i) for i in item["index"])
        if degree is None:
            degree = len(idx)
        if len(idx) != degree:
            raise ValueError("tensor indices have mixed lengths")
        value = item["value"]
        value = parse_scalar(value, cfg) if isinstance(value, str) else cfg.scalar(value)
        entries[tuple(sorted(idx))] = value
        width = max(width, max(idx))
    return SymTensor(cfg, width, degree, entries)


def _matrix_json(m):
    return [[scalar_text(x) for x in row] for row in m.tolist()]


def _factor_json(fac, base):
    return {
        "kind": fac.kind,
        "dim": fac.dim,
        "polynomial": poly_text(fac.polynomial) if fac.polynomial else None,
        "multiplicity": fac.multiplicity,
        "disc_class": fac.disc_class,
        "proven": fac.proven,
        "text": fac.text(base),
    }


def build_report(f: Form, dec, precheck, elapsed: float, source: str) -> dict:
    base = dec.cfg.field_text()
    report = {key: None for key in REPORT_KEYS}
    report.update({
        "input": source,
        "mode": dec.cfg.mode,
        "adjoined": list(dec.cfg.adjoined),
        "n": dec.n,
        "d": dec.d,
        "rank": dec.rank,
        "center_dim": dec.center_dim,
        "center_algebra": [_factor_json(fac, base) for fac in dec.center_factors],
        "center_algebra_text": dec.center_text(),
        "verdict": dec.verdict,
        "ortho": dec.ortho,
        "scaling_in_field": dec.scaling_in_field,
        "odeco_precheck": precheck,
        "verified": verify(dec, f),
        "certificates": [{"kind": c.kind, "detail": c.detail}
                         for c in dec.certificates],
        "timing_seconds": round(elapsed, 6),
        "P": _matrix_json(dec.P),
    })
    if dec.lambdas is not None:
        report["lambdas"] = [scalar_text(v) for v in dec.lambdas]
    if dec.L is not None and dec.L.nrows:
        report["forms"] = [linear_text(dec.L.row(i), dec.cfg)
                           for i in range(dec.L.nrows)]
    if dec.blocks:
        report["blocks"] = [{
            "variables": list(b.variables),
            "form": form_text(b.form),
            "kind": b.kind,
            "center_dim": b.center_dim,
        } for b in dec.blocks]
    return report


def _print_text(report: dict, out) -> None:
    print(f"input:          {report['input']}", file=out)
    print(f"field:          mode={report['mode']} adjoined={report['adjoined']}",
          file=out)
    print(f"n={report['n']} d={report['d']} rank={report['rank']} "
          f"center_dim={report['center_dim']}", file=out)
    print(f"center algebra: {report['center_algebra_text']}", file=out)
    print(f"verdict:        {report['verdict']}", file=out)
    if report["lambdas"]:
        for lam, form in zip(report["lambdas"], report["forms"]):
            print(f"  ({lam}) * ({form})^{report['d']}", file=out)
    if report["blocks"]:
        for block in report["blocks"]:
            names = ",".join(f"y{v}" for v in block["variables"])
            print(f"  block[{names}] ({block['kind']}): {block['form']}", file=out)
    print(f"ortho: {report['ortho']}  scaling_in_field: "
          f"{report['scaling_in_field']}  odeco_precheck: "
          f"{report['odeco_precheck']}  verified: {report['verified']}", file=out)
    for cert in report["certificates"]:
        print(f"  note[{cert['kind']}]: {cert['detail']}", file=out)
    print(f"time: {report['timing_seconds']}s", file=out)


def run(argv, out=None) -> int:
    out = out if out is not None else sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        cfg = FieldConfig(mode=args.mode, adjoined=tuple(args.adjoin),
                          tolerance=args.tol, max_adjoin=args.max_adjoin)
        if args.tensor and args.polynomial:
            raise ValueError("give either a polynomial or --tensor, not both")
        if args.tensor:
            tensor = _load_tensor(args.tensor, cfg, args.vars)
            f = form_from_gram(tensor)
            source = f"tensor:{args.tensor}"
        elif args.polynomial:
            f = parse_form(args.polynomial, cfg, n=args.vars)
            source = args.polynomial
        else:
            raise ValueError("no input: give a polynomial or --tensor FILE")
    except Exception as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    started = time.perf_counter()
    a = gram_tensor(f)
    try:
        precheck = odeco_precheck(a)
    except NotRealError:
        precheck = None
    if args.odeco_only:
        elapsed = time.perf_counter() - started
        report = {key: None for key in REPORT_KEYS}
        report.update({
            "input": source, "mode": cfg.mode, "adjoined": list(cfg.adjoined),
            "n": f.n, "d": f.d, "odeco_precheck": precheck,
            "certificates": [], "timing_seconds": round(elapsed, 6),
        })
    else:
        dec = decompose(f, cfg, seed=args.seed)
        elapsed = time.perf_counter() - started
        report = build_report(f, dec, precheck, elapsed, source)
    if args.as_json:
        json.dump(report, out, indent=2)
        out.write("\n")
    else:
        _print_text(report, out)
    return 0


def main() -> None:
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
