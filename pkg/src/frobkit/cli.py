"""``frobkit`` command line.

Every subcommand prints one JSON result document (schema
``frobkit/schema/result-v1.json``) and exits with

* 0 on success,
* 1 when a check ran and failed,
* 2 on bad input (unreadable files, syntax or arity errors),
* 3 when a requested degree lies beyond the certified truncation.

The default cutoff is 4, overridable through ``FROBKIT_MAX_DEGREE`` or
``--max-degree``.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
import time
from pathlib import Path

from . import bordism
from .algebra import Algebra
from .algfile import load_algebra
from .complexes import GradedDims
from .errors import (
    AlgebraFileError,
    ArityError,
    BordismSyntaxError,
    FrobkitError,
    TruncationExhausted,
)
from .kernels import (
    DEFAULT_CUTOFF,
    Status,
    Verdict,
    evaluate_closed_surface,
    hochschild_dims,
    no_go_check,
    verify_frobenius,
)

SCHEMA_ID = "frobkit.result/1"
SCHEMA_PATH = Path(__file__).with_name("schema") / "result-v1.json"

OK, FAILED, INPUT_ERROR, TRUNCATED = 0, 1, 2, 3


class InputError(Exception):
    pass


def default_cutoff() -> int:
    raw = os.environ.get("FROBKIT_MAX_DEGREE")
    if raw is None:
        return DEFAULT_CUTOFF
    try:
        value = int(raw)
    except ValueError:
        raise InputError(f"FROBKIT_MAX_DEGREE={raw!r} is not an integer") from None
    if value < 0:
        raise InputError("FROBKIT_MAX_DEGREE must be >= 0")
    return value


def dims_json(d: GradedDims | dict) -> dict:
    items = d.dims.items() if isinstance(d, GradedDims) else d.items()
    return {str(k): int(v) for k, v in sorted(items)}


def fingerprint(a: Algebra, label: str) -> dict:
    return {"dim": a.dim, "field": a.field.name, "label": label}


# -- subcommands -------------------------------------------------------------------
# each returns (exit code, data, algebra)

def cmd_frobcheck(args, cutoff):
    a = load_algebra(args.algebra)
    report = verify_frobenius(a, cutoff)
    axioms = {
        name: {
            "status": c.status.value,
            "dims_left": dims_json(c.dims_left),
            "dims_right": dims_json(c.dims_right),
            "degree": c.degree,
            "reason": c.reason,
        }
        for name, c in report.items()
    }
    failed = any(c.status is Status.FAIL for c in report.values())
    all_pass = all(c.status is Status.PASS for c in report.values())
    return (FAILED if failed else OK), {"axioms": axioms, "all_pass": all_pass}, a


def cmd_surface(args, cutoff):
    a = load_algebra(args.algebra)
    if args.genus < 0:
        raise InputError("--genus must be >= 0")
    dims = evaluate_closed_surface(a, args.genus, cutoff)
    return OK, {"genus": args.genus, "dims": dims_json(dims)}, a


def cmd_eval(args, cutoff):
    try:
        text = Path(args.program).read_text()
    except OSError as e:
        raise InputError(f"cannot read {args.program}: {e.strerror}") from None
    expr = bordism.parse(text)
    a = load_algebra(args.algebra)
    result = bordism.evaluate(bordism.compile(expr, a, cutoff))
    data = {"program": bordism.to_text(expr), "arity": list(expr.arity)}
    if isinstance(result, GradedDims):
        data["dims"] = dims_json(result)
    else:
        data["dims"] = dims_json(result.homology_dims(cutoff))
    return OK, data, a


def cmd_nogo(args, cutoff):
    a = load_algebra(args.algebra)
    r = no_go_check(a, cutoff)
    hom = r.hom_diag_to_free_dims
    # a point or sum of points must admit a nonzero map from the diagonal
    contradiction = r.verdict in (Verdict.FIELD_POINT, Verdict.DIRECT_SUM_OF_POINTS) and hom[0] == 0
    data = {
        "reduced": r.reduced,
        "blocks_found": r.blocks_found,
        "is_field": r.field_test.verdict.value,
        "verdict": r.verdict.value,
        "hom_diag_to_free_dims": dims_json(hom),
    }
    return (FAILED if contradiction else OK), data, a


def cmd_hochschild(args, cutoff):
    a = load_algebra(args.algebra)
    return OK, {"dims": dims_json(hochschild_dims(a, cutoff))}, a


COMMANDS = {
    "frobcheck": cmd_frobcheck,
    "surface": cmd_surface,
    "eval": cmd_eval,
    "nogo": cmd_nogo,
    "hochschild": cmd_hochschild,
}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="frobkit", description="Diagonal Frobenius TQFT computations.")
    p.add_argument("--no-timing", action="store_true", help="omit wall-clock timing from the output")
    p.add_argument("--indent", type=int, default=2)
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, help_text):
        sp = sub.add_parser(name, help=help_text)
        sp.add_argument("--max-degree", type=int, default=None, metavar="N",
                        help="truncation cutoff (default: $FROBKIT_MAX_DEGREE or 4)")
        return sp

    add("frobcheck", "verify the Frobenius axioms").add_argument("algebra")
    sp = add("surface", "state space of a closed surface")
    sp.add_argument("algebra")
    sp.add_argument("--genus", type=int, required=True)
    sp = add("eval", "evaluate a bordism program")
    sp.add_argument("program")
    sp.add_argument("algebra")
    add("nogo", "obstruction report for extending the TQFT").add_argument("algebra")
    add("hochschild", "Hochschild homology dimensions").add_argument("algebra")
    return p


def _error(exc: BaseException) -> dict:
    err = {"type": type(exc).__name__, "message": str(exc)}
    for attr in ("position", "line", "path", "requested", "valid_through"):
        v = getattr(exc, attr, None)
        if v is not None:
            err[attr] = v if isinstance(v, int) else str(v)
    if isinstance(exc, BordismSyntaxError):
        err["expected"] = sorted(exc.expected)
    return err


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    start = time.perf_counter()
    cmd_args = {k: v for k, v in vars(args).items() if k not in ("command", "no_timing", "indent")}
    doc = {"schema": SCHEMA_ID, "command": {"name": args.command, "args": cmd_args}}
    try:
        cutoff = args.max_degree if args.max_degree is not None else default_cutoff()
        if cutoff < 0:
            raise InputError("--max-degree must be >= 0")
        doc["cutoff"] = cutoff
        code, data, a = COMMANDS[args.command](args, cutoff)
        doc["algebra"] = fingerprint(a, Path(args.algebra).stem)
        doc["data"] = data
        status = "ok" if code == OK else "fail"
    except TruncationExhausted as e:
        code, status, doc["data"] = TRUNCATED, "truncated", {"error": _error(e)}
    except (InputError, AlgebraFileError, BordismSyntaxError, ArityError, FrobkitError) as e:
        code, status, doc["data"] = INPUT_ERROR, "error", {"error": _error(e)}
    doc["status"] = status
    doc["exit_code"] = code
    if not args.no_timing:
        doc["timing"] = {"milliseconds": int((time.perf_counter() - start) * 1000)}
    if code in (INPUT_ERROR, TRUNCATED):
        print(f"frobkit: {doc['data']['error']['message']}", file=sys.stderr)
    print(json.dumps(doc, sort_keys=True, indent=args.indent))
    return code


if __name__ == "__main__":
    sys.exit(main())
