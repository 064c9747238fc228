"""Command-line interface.

Exit codes: 0 when every check passed, 1 when a mathematical check failed,
2 on usage or domain errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from datetime import datetime, timezone
from typing import List, Optional, Sequence

from . import __version__, arith, cohen, gamma04, nonhol, qseries, rankin
from .report import ResidualRecord, VerificationReport

SCHEMA_VERSION = 1

# JSON Schema of every --json document this tool prints.
_NUMBER_PAIR = {"type": "array", "items": {"type": "number"}, "minItems": 2, "maxItems": 2}
JSON_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "type": "object",
    "required": ["schema", "tool", "version", "command", "timestamp", "pass", "records"],
    "additionalProperties": False,
    "properties": {
        "schema": {"const": SCHEMA_VERSION},
        "tool": {"const": "hurwitzcohen"},
        "version": {"type": "string"},
        "command": {"type": "array", "items": {"type": "string"}},
        "timestamp": {"type": "string"},
        "pass": {"type": "boolean"},
        "records": {"type": "array", "items": {"oneOf": [
            {"type": "object", "additionalProperties": False,
             "required": ["kind", "check_id", "params", "range", "status", "first_failure",
                          "checked", "rows", "details"],
             "properties": {
                 "kind": {"const": "verification"},
                 "check_id": {"type": "string"},
                 "params": {"type": "object"},
                 "range": {"type": "array", "items": {"type": "integer"}, "minItems": 2, "maxItems": 2},
                 "status": {"enum": ["pass", "fail"]},
                 "first_failure": {"type": ["array", "null"], "minItems": 3, "maxItems": 3},
                 "checked": {"type": "integer", "minimum": 0},
                 "rows": {"type": "array", "items": {"type": "array", "minItems": 3, "maxItems": 3}},
                 "details": {"type": "object"}}},
            {"type": "object", "additionalProperties": False,
             "required": ["kind", "check", "tau", "config", "residual", "tolerance", "pass"],
             "properties": {
                 "kind": {"const": "residual"},
                 "check": {"type": "string"},
                 "tau": _NUMBER_PAIR,
                 "config": {"type": "object"},
                 "residual": {"type": "number", "minimum": 0},
                 "tolerance": {"type": "number", "exclusiveMinimum": 0},
                 "pass": {"type": "boolean"}}},
            {"type": "object", "additionalProperties": False,
             "required": ["kind", "pass", "decomposition", "error"],
             "properties": {
                 "kind": {"const": "identify"},
                 "pass": {"type": "boolean"},
                 "error": {"type": ["string", "null"]},
                 "decomposition": {"oneOf": [{"type": "null"}, {
                     "type": "object",
                     "required": ["weight", "cusp", "labels", "coefficients", "verified_through",
                                  "sturm_bound"],
                     "properties": {"labels": {"type": "array", "items": {"type": "string"}},
                                    "coefficients": {"type": "array", "items": {"type": "string"}}}}]}}},
        ]}},
    },
}


class UsageError(Exception):
    pass


def envelope(command: Sequence[str], records: List, timestamp: Optional[str] = None) -> dict:
    return {
        "schema": SCHEMA_VERSION,
        "tool": "hurwitzcohen",
        "version": __version__,
        "command": list(command),
        "timestamp": timestamp or datetime.now(timezone.utc).isoformat(timespec="seconds"),
        "pass": all(r.passed for r in records),
        "records": [r.to_dict() for r in records],
    }


def _parse_tau(text: str) -> complex:
    try:
        re_s, im_s = text.split(",")
        tau = complex(float(re_s), float(im_s))
    except ValueError:
        raise UsageError(f"--tau expects RE,IM, got {text!r}") from None
    if tau.imag <= 0:
        raise UsageError(f"tau must have positive imaginary part, got {text}")
    return tau


# -- subcommand handlers ------------------------------------------------------

def _cmd_value(args) -> int:
    if args.cmd == "hurwitz":
        print(arith.hurwitz(args.n))
    elif args.cmd == "sigma":
        if args.n < 1 or args.k < 1:
            raise arith.DomainError("sigma needs k >= 1 and n >= 1")
        print(arith.sigma(args.k, args.n))
    elif args.cmd == "lambda":
        if args.k < 1 or args.k % 2 == 0 or args.n < 1:
            raise arith.DomainError("lambda needs odd k >= 1 and n >= 1")
        print(arith.lambda_k(args.k, args.n))
    elif args.cmd == "classno":
        print(arith.class_number(args.d))
    return 0


def _cmd_series(args) -> int:
    N = args.prec
    if N < 0:
        raise UsageError("--prec must be non-negative")
    if args.name == "lambda-odd":
        if args.ell is None or args.ell % 2 == 0:
            raise UsageError("lambda-odd needs an odd --ell")
        f = qseries.lambda_odd_series(args.ell, N)
    else:
        f = {"theta": qseries.theta_series, "hurwitz": qseries.hurwitz_series,
             "f2": qseries.f2_series, "delta4": qseries.delta4_series}[args.name](N)
    text = qseries.to_text(f)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


def _print_table(rep: VerificationReport, limit: int = 20) -> None:
    if rep.rows:
        print(f"{'n':>8}  {'lhs':>20}  {'rhs':>20}")
        for n, lhs, rhs in rep.rows[:limit]:
            mark = "" if lhs == rhs else "  <-- mismatch"
            print(f"{n:>8}  {str(lhs):>20}  {str(rhs):>20}{mark}")
        if len(rep.rows) > limit:
            print(f"{'...':>8}  ({len(rep.rows) - limit} more rows)")
    lo, hi = rep.range
    print(f"{rep.check_id} [{lo}, {hi}]: {rep.status.upper()} ({rep.checked} values checked)")
    if rep.first_failure is not None:
        n, lhs, rhs = rep.first_failure
        print(f"first counterexample: n={n}: lhs={lhs}, rhs={rhs}")


def _cmd_check(args) -> List:
    if args.to_ < args.from_:
        raise UsageError("--to must be >= --from")
    rep = cohen.check_relation(args.relation, args.from_, args.to_, record_rows=True)
    if not args.json:
        _print_table(rep)
    return [rep]


def _cmd_verify_theorem(args) -> List:
    reports = cohen.verify_theorem(args.k_max, args.prec)
    if not args.json:
        for rep in reports:
            dec = rep.details.get("decomposition")
            if dec is None:
                shown = "not in space"
            elif not dec["coefficients"]:
                shown = "0 (empty cusp basis)"
            else:
                shown = " + ".join(f"{c}*{lab}" for c, lab in zip(dec["coefficients"], dec["labels"]))
            print(f"k={rep.params['k']} weight {rep.params['weight']}: {rep.status.upper()}  "
                  f"X^{2 * rep.params['k']} = {shown}  (checked through q^{args.prec})")
            if rep.first_failure is not None:
                print(f"  failure: {rep.first_failure}")
    return reports


class _IdentifyRecord:
    def __init__(self, dec: Optional[gamma04.BasisDecomposition], error: Optional[str]):
        self.dec = dec
        self.error = error

    @property
    def passed(self) -> bool:
        return self.dec is not None

    def to_dict(self):
        return {"kind": "identify", "pass": self.passed,
                "decomposition": self.dec.to_dict() if self.dec else None, "error": self.error}


def _cmd_identify(args) -> List:
    with open(args.infile) as fh:
        f = qseries.from_text(fh.read())
    try:
        dec = gamma04.identify(f, args.weight, use_cusp=args.cusp)
        rec = _IdentifyRecord(dec, None)
        if not args.json:
            print("(" + ", ".join(str(c) for c in dec.coefficients) + ")")
            print(f"basis: {', '.join(dec.labels) or '(empty)'}; verified through q^{dec.verified_through}")
    except gamma04.NotInSpace as exc:
        rec = _IdentifyRecord(None, str(exc))
        if not args.json:
            print(f"not in space: {exc}")
    return [rec]


def _cmd_nonhol(args) -> List:
    cfg = nonhol.NumericConfig(trunc=args.trunc)
    taus = [_parse_tau(args.tau)] if args.tau else list(nonhol.STANDARD_TAUS)
    records: List = []
    kind = args.kind
    if kind == "binom":
        records.append(rankin.check_cohen_binomial_identities(args.m if args.m is not None else 10))
    for tau in taus if kind != "binom" else []:
        if kind == "rid":
            records.extend(nonhol.check_special_values(tau, cfg))
        elif kind == "heat":
            u = 0.3 + 0.2j
            h = nonhol.check_heat(u, tau, cfg)
            conf = dict(cfg.as_dict(), u=[u.real, u.imag])
            records.append(ResidualRecord("heat", tau, h.residual, nonhol.TOL_HEAT, conf))
            records.append(ResidualRecord("heat-fd-order", tau, abs(h.ratio - 4), 0.5,
                                          dict(conf, ratio=h.ratio)))
        elif kind == "eqfin1":
            ms = [args.m] if args.m is not None else [0, 1]
            for m in ms:
                if m not in (0, 1):
                    raise UsageError("eqfin1 supports --m 0 or 1")
                records.append(ResidualRecord(f"eqfin1-m{m}", tau, nonhol.check_eqfin1(m, tau, cfg),
                                              nonhol.TOL_EQFIN[m], cfg.as_dict()))
        elif kind == "appell":
            for k in (1, 3, 5):
                records.append(ResidualRecord(f"appell-k{k}", tau, nonhol.appell_residual(k, tau, cfg),
                                              nonhol.TOL_APPELL, cfg.as_dict()))
        elif kind == "difftheta":
            for r in range(6):
                ra, rb = nonhol.diff_theta_residuals(r, tau, cfg)
                records.append(ResidualRecord(f"difftheta-half-r{r}", tau, ra, nonhol.TOL_DIFF_THETA, cfg.as_dict()))
                records.append(ResidualRecord(f"difftheta-one-r{r}", tau, rb, nonhol.TOL_DIFF_THETA, cfg.as_dict()))
    if not args.json:
        for rec in records:
            if isinstance(rec, VerificationReport):
                _print_table(rec)
            else:
                t = rec.tau
                print(f"{rec.check:<22} tau={t.real:g}{t.imag:+g}i  residual={rec.residual:.3e}  "
                      f"tol={rec.tolerance:.0e}  {'PASS' if rec.passed else 'FAIL'}")
    return records


# -- parser -------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="hurwitzcohen", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="cmd", required=True)

    sp = sub.add_parser("hurwitz", help="Hurwitz class number H(n)")
    sp.add_argument("n", type=int)
    sp = sub.add_parser("sigma", help="divisor power sum sigma_k(n)")
    sp.add_argument("k", type=int)
    sp.add_argument("n", type=int)
    sp = sub.add_parser("lambda", help="lambda_k(n) for odd k")
    sp.add_argument("k", type=int)
    sp.add_argument("n", type=int)
    sp = sub.add_parser("classno", help="class number h(-d)")
    sp.add_argument("d", type=int)

    sp = sub.add_parser("series", help="write a q-expansion in the text interchange format")
    sp.add_argument("name", choices=["theta", "hurwitz", "f2", "delta4", "lambda-odd"])
    sp.add_argument("--ell", type=int)
    sp.add_argument("--prec", type=int, required=True)
    sp.add_argument("--out")

    sp = sub.add_parser("check", help="check a class number relation exactly over a range")
    sp.add_argument("relation", choices=cohen.RELATIONS)
    sp.add_argument("--from", dest="from_", type=int, required=True)
    sp.add_argument("--to", dest="to_", type=int, required=True)
    sp.add_argument("--json", action="store_true")

    sp = sub.add_parser("verify-theorem", help="certify the Cohen series coefficients up to k_max")
    sp.add_argument("--k-max", type=int, required=True)
    sp.add_argument("--prec", type=int, required=True)
    sp.add_argument("--json", action="store_true")

    sp = sub.add_parser("identify", help="decompose a q-expansion in the Gamma0(4) basis")
    sp.add_argument("--in", dest="infile", required=True)
    sp.add_argument("--weight", type=int, required=True)
    sp.add_argument("--cusp", action="store_true")
    sp.add_argument("--json", action="store_true")

    sp = sub.add_parser("nonhol-check", help="numeric checks of the non-holomorphic identities")
    sp.add_argument("kind", choices=["rid", "heat", "eqfin1", "appell", "difftheta", "binom"])
    sp.add_argument("--tau", help="RE,IM (default: the three standard points)")
    sp.add_argument("--trunc", type=int, default=nonhol.DEFAULT.trunc)
    sp.add_argument("--m", type=int)
    sp.add_argument("--json", action="store_true")
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        if args.cmd in ("hurwitz", "sigma", "lambda", "classno"):
            return _cmd_value(args)
        if args.cmd == "series":
            return _cmd_series(args)
        handler = {"check": _cmd_check, "verify-theorem": _cmd_verify_theorem,
                   "identify": _cmd_identify, "nonhol-check": _cmd_nonhol}[args.cmd]
        records = handler(args)
    except gamma04.InsufficientPrecision as exc:
        print(f"error: {exc} (required minimum: {exc.required})", file=sys.stderr)
        return 2
    except (UsageError, arith.DomainError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    if getattr(args, "json", False):
        print(json.dumps(envelope(["hurwitzcohen"] + argv, records), indent=2, sort_keys=True))
    return 0 if all(r.passed for r in records) else 1


if __name__ == "__main__":
    sys.exit(main())
