"""Command-line front-end.

One JSON record per result line (JSON Lines) by default, CSV optional.
Every record carries the subcommand, the input quad text and the tool
version.  Exit codes: 0 success, 1 usage or parse error, 2 verification
failure, 3 budget exhausted, 4 precondition violation (branch cut,
summability violation, domain errors).
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import re
import sys

from . import __version__
from .coords import (
    HorocyclicCoords,
    LambdaCoords,
    horocyclic_to_quad,
    in_fundamental_domain,
    lambda_to_quad,
    mcg_apply,
    quad_to_horocyclic,
    quad_to_lambda,
)
from .curvecomplex import reduce_to_sink
from .errors import (
    BqViolationError,
    BranchCutError,
    BudgetExceededError,
    DegenerateClassError,
    DomainError,
    InvalidQuadError,
    MarkoffError,
)
from .integral import IntegerQuad, classify, enumerate_fundamental, enumerate_integral_below, int_flip
from .mcshane import check_bq, mcshane_partial, mcshane_verify, Verdict
from .quadalgebra import DEFAULT_TOL, MarkoffQuad, flip, klein_sequence, verify_quad
from .spectra import growth_exponent, one_sided_spectrum, systole, two_sided_spectrum

ENV_MAX_CELLS = "MQL_MAX_CELLS"
_INT_RE = re.compile(r"^[+-]?\d+$")


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse exits 2 on usage errors by default, which collides with the
    # verification-failure code; route through exit code 1 instead.
    def error(self, message):
        raise _UsageError(message)


def _parse_entry(text: str) -> complex:
    try:
        return complex(text.replace("i", "j"))
    except ValueError:
        raise _UsageError(f"cannot parse entry {text!r}")


def parse_quad(text: str, exact: bool = False):
    """Parse "a,b,c,d".  All-integer input routes to exact arithmetic;
    --exact forces that route and rejects non-integers."""
    parts = [p.strip() for p in text.split(",")]
    if len(parts) != 4:
        raise _UsageError(f"quad needs 4 comma-separated entries, got {len(parts)}")
    if all(_INT_RE.match(p) for p in parts):
        return IntegerQuad.from_values(int(p) for p in parts)
    if exact:
        raise _UsageError("--exact requires all-integer entries")
    return MarkoffQuad.from_values(_parse_entry(p) for p in parts)


def _json_val(v):
    if isinstance(v, bool) or isinstance(v, int):
        return v
    if isinstance(v, float):
        return v
    if isinstance(v, complex):
        return v.real if v.imag == 0.0 else [v.real, v.imag]
    if isinstance(v, (list, tuple)):
        return [_json_val(x) for x in v]
    if isinstance(v, dict):
        return {k: _json_val(x) for k, x in v.items()}
    if isinstance(v, Verdict):
        return v.value
    return v


def _display(v) -> str:
    if isinstance(v, bool):
        return str(v).lower()
    if isinstance(v, int):
        return str(v)
    if isinstance(v, float):
        return format(v, ".15g")
    if isinstance(v, complex):
        if v.imag == 0.0:
            return format(v.real, ".15g")
        sign = "+" if v.imag >= 0 else "-"
        return f"{format(v.real, '.15g')}{sign}{format(abs(v.imag), '.15g')}i"
    if isinstance(v, (list, tuple)):
        return ";".join(_display(x) for x in v)
    if isinstance(v, Verdict):
        return v.value
    return str(v)


def _emit(records, fmt: str, out) -> None:
    if fmt == "jsonl":
        for rec in records:
            out.write(json.dumps(_json_val(rec), sort_keys=True,
                                 separators=(",", ":")))
            out.write("\n")
    else:
        if not records:
            return
        keys = sorted({k for rec in records for k in rec})
        w = csv.writer(out, lineterminator="\n")
        w.writerow(keys)
        for rec in records:
            w.writerow([_display(rec.get(k, "")) for k in keys])


def _base(args, cmd: str) -> dict:
    return {"cmd": cmd, "quad": getattr(args, "quad", None), "version": __version__}


def _quad_values(q) -> list:
    return list(q.values())


def _entry_record(args, e) -> dict:
    rec = _base(args, args.cmd)
    rec.update({
        "kind": e.kind.value,
        "trace": e.trace,
        "length": e.length,
        "abs_length": abs(e.length),
        "cell": list(e.cell_ref) if isinstance(e.cell_ref, tuple) else e.cell_ref,
        "word": list(e.word) if e.word is not None else None,
    })
    return rec


def _cmd_verify(args):
    q = parse_quad(args.quad, args.exact)
    if isinstance(q, IntegerQuad):
        residual, valid = 0.0, True  # constructor already proved exactness
    else:
        residual = verify_quad(q, args.tol)
        valid = residual <= args.tol
    rec = _base(args, "verify")
    rec.update({"residual": residual, "valid": valid})
    return [rec], (0 if valid else 2)


def _cmd_flip(args):
    q = parse_quad(args.quad, args.exact)
    if isinstance(q, IntegerQuad):
        result = int_flip(q, args.index)
    else:
        result = flip(q.require_valid(args.tol), args.index)
    rec = _base(args, "flip")
    rec["result"] = _quad_values(result)
    return [rec], 0


def _cmd_reduce(args):
    q = parse_quad(args.quad, args.exact)
    rec = _base(args, "reduce")
    if isinstance(q, IntegerQuad):
        root, word = classify(q)
        rec.update({"root": _quad_values(root), "word": word, "path": "integer"})
    else:
        sink, word = reduce_to_sink(q.require_valid(args.tol), tol=args.tol)
        rec.update({"root": _quad_values(sink), "word": word, "path": "complex"})
    return [rec], 0


def _to_markoff(q) -> MarkoffQuad:
    if isinstance(q, IntegerQuad):
        return MarkoffQuad.from_values(q.values())
    return q


def _cmd_spectrum(args):
    q = _to_markoff(parse_quad(args.quad, args.exact)).require_valid(args.tol)
    fn = two_sided_spectrum if args.two_sided else one_sided_spectrum
    entries = fn(q, args.length, max_cells=args.max_cells, tol=args.tol,
                 threads=args.threads)
    return [_entry_record(args, e) for e in entries], 0


def _cmd_systole(args):
    q = _to_markoff(parse_quad(args.quad, args.exact)).require_valid(args.tol)
    length, witness = systole(q, max_cells=args.max_cells, tol=args.tol,
                              threads=args.threads)
    rec = _entry_record(args, witness)
    rec["cmd"] = "systole"
    return [rec], 0


def _cmd_mcshane(args):
    if (args.cutoff is None) == (args.target_tol is None):
        raise _UsageError("give exactly one of --cutoff or --target-tol")
    q = _to_markoff(parse_quad(args.quad, args.exact)).require_valid(args.tol)
    budget = args.budget if args.budget is not None else args.max_cells
    rec = _base(args, "mcshane")
    if args.cutoff is not None:
        rep = mcshane_partial(q, args.cutoff, max_cells=budget, tol=args.tol,
                              threads=args.threads)
        code = 3 if rep.verdict is Verdict.BUDGET_EXCEEDED else 0
        passed = None
    else:
        passed, rep = mcshane_verify(q, args.target_tol, max_cells=budget,
                                     tol=args.tol, threads=args.threads)
        code = 0 if passed else 3
    rec.update({
        "partial_sum": rep.partial_sum,
        "term_count": rep.term_count,
        "product_cutoff": rep.product_cutoff,
        "last_shell_max": rep.last_shell_max,
        "verdict": rep.verdict,
    })
    if passed is not None:
        rec["passed"] = passed
    return [rec], code


def _cmd_bq_check(args):
    q = _to_markoff(parse_quad(args.quad, args.exact)).require_valid(args.tol)
    rep = check_bq(q, args.k, max_cells=args.max_cells, threads=args.threads)
    rec = _base(args, "bq-check")
    rec.update({
        "cutoff": rep.cutoff,
        "faces4": [[f.cells[0], f.cells[1], f.product] for f in rep.faces4],
        "violations": [[f.cells[0], f.cells[1], f.product] for f in rep.violations],
        "cells_below2": rep.cells_below2,
        "budget_hit": rep.budget_hit,
        "ok": rep.ok,
    })
    return [rec], 0


def _cmd_fundamental(args):
    recs = []
    for q in enumerate_fundamental():
        rec = _base(args, "fundamental")
        rec["result"] = _quad_values(q)
        recs.append(rec)
    return recs, 0


def _cmd_enumerate_integral(args):
    recs = []
    for q in enumerate_integral_below(args.bound):
        rec = _base(args, "enumerate-integral")
        rec["result"] = _quad_values(q)
        recs.append(rec)
    return recs, 0


def _cmd_growth(args):
    q = _to_markoff(parse_quad(args.quad, args.exact)).require_valid(args.tol)
    fit = growth_exponent(q, args.lmin, args.lmax, args.shells,
                          max_cells=args.max_cells, tol=args.tol,
                          threads=args.threads)
    rec = _base(args, "growth")
    rec.update({
        "exponent": fit.exponent,
        "intercept_log_eta": fit.intercept_log_eta,
        "fit_residual": fit.fit_residual,
        "samples": [[L, s] for L, s in fit.samples],
    })
    return [rec], 0


def _cmd_coords(args):
    rec = _base(args, "coords")
    if args.to is not None:
        q = _to_markoff(parse_quad(args.values, args.exact)).require_valid(args.tol)
        rec["quad"] = args.values
        if args.to == "lambda":
            lc = quad_to_lambda(q, tol=args.tol)
            rec["lambda"] = list(lc.values())
            rec["simplex_residual"] = lc.simplex_residual()
        else:
            hc = quad_to_horocyclic(q, tol=args.tol)
            chk = in_fundamental_domain(hc, tol=args.tol)
            rec["horocyclic"] = list(hc.values())
            rec["in_domain"] = chk.inside
            rec["walls"] = list(chk.walls)
    else:
        parts = [float(p) for p in args.values.split(",")]
        if args.source == "lambda":
            if len(parts) != 6:
                raise _UsageError("lambda coordinates need 6 entries")
            q = lambda_to_quad(LambdaCoords(*parts), tol=args.tol)
        else:
            if len(parts) != 4:
                raise _UsageError("horocyclic coordinates need 4 entries")
            q = horocyclic_to_quad(HorocyclicCoords(*parts), tol=args.tol)
        rec["quad"] = args.values
        rec["result"] = _quad_values(q)
    return [rec], 0


def _cmd_mcg(args):
    q = _to_markoff(parse_quad(args.quad, args.exact)).require_valid(args.tol)
    word = [w for w in re.split(r"[,\s]+", args.word.strip()) if w]
    result = mcg_apply(word, q)
    rec = _base(args, "mcg")
    rec.update({"word": word, "result": _quad_values(result)})
    return [rec], 0


def _cmd_klein(args):
    seeds = [p.strip() for p in args.seed.split(",")]
    if len(seeds) != 2:
        raise _UsageError("--seed needs two comma-separated values")
    a0, a1 = (_parse_entry(s) for s in seeds)
    seq = klein_sequence(_parse_entry(args.A), a0, a1, args.count, tol=args.tol)
    rec = _base(args, "klein")
    rec.update({
        "A": complex(seq.A),
        "terms": [complex(t) for t in seq.terms],
        "lambda_plus": seq.lambda_plus,
        "lambda_minus": seq.lambda_minus,
    })
    return [rec], 0


def _add_quad(p):
    p.add_argument("quad", help="quad as 'a,b,c,d'; entries real, x+yi, or integers")


def _add_common(p, defaults: bool):
    # attached to the main parser with real defaults and to every
    # subparser with SUPPRESS, so the flags parse on either side of the
    # subcommand and the later position wins
    env_cells = os.environ.get(ENV_MAX_CELLS)
    kw = lambda v: {"default": v} if defaults else {"default": argparse.SUPPRESS}
    p.add_argument("--tol", type=float, **kw(DEFAULT_TOL))
    p.add_argument("--format", choices=("jsonl", "csv"), **kw("jsonl"))
    p.add_argument("--out", help="write records to FILE instead of stdout",
                   **kw(None))
    p.add_argument("--max-cells", type=int,
                   help=f"cell budget for enumerations (env {ENV_MAX_CELLS})",
                   **kw(int(env_cells) if env_cells else 200_000))
    p.add_argument("--threads", type=int,
                   help="subtree-parallel enumeration; output is identical for any N",
                   **kw(1))
    p.add_argument("--exact", action="store_true",
                   help="force the integer fast-path, rejecting non-integers",
                   **({} if defaults else {"default": argparse.SUPPRESS}))


def _build_parser() -> _Parser:
    p = _Parser(prog="mql", description=__doc__)
    _add_common(p, defaults=True)
    sub = p.add_subparsers(dest="cmd", required=True)

    sp = sub.add_parser("verify", help="quad relation residual; exit 2 if above tol")
    _add_quad(sp)
    sp.set_defaults(run=_cmd_verify)

    sp = sub.add_parser("flip", help="flip one entry")
    _add_quad(sp)
    sp.add_argument("-i", "--index", type=int, required=True, choices=(1, 2, 3, 4))
    sp.set_defaults(run=_cmd_flip)

    sp = sub.add_parser("reduce", help="descend to the sink (or fundamental root)")
    _add_quad(sp)
    sp.set_defaults(run=_cmd_reduce)

    sp = sub.add_parser("spectrum", help="simple length spectrum below a cutoff")
    _add_quad(sp)
    sp.add_argument("-L", "--length", type=float, required=True)
    sp.add_argument("--two-sided", action="store_true")
    sp.set_defaults(run=_cmd_spectrum)

    sp = sub.add_parser("systole", help="shortest curve class and its witness")
    _add_quad(sp)
    sp.set_defaults(run=_cmd_systole)

    sp = sub.add_parser("mcshane", help="identity partial sum or verification")
    _add_quad(sp)
    sp.add_argument("--cutoff", type=float, default=None)
    sp.add_argument("--target-tol", type=float, default=None)
    sp.add_argument("--budget", type=int, default=None)
    sp.set_defaults(run=_cmd_mcshane)

    sp = sub.add_parser("bq-check", help="summability check up to a product cutoff")
    _add_quad(sp)
    sp.add_argument("-k", type=float, required=True)
    sp.set_defaults(run=_cmd_bq_check)

    sp = sub.add_parser("fundamental", help="all reduced positive integer quads")
    sp.set_defaults(run=_cmd_fundamental)

    sp = sub.add_parser("enumerate-integral",
                        help="all positive integer quads with max entry <= B")
    sp.add_argument("-B", "--bound", type=int, required=True)
    sp.set_defaults(run=_cmd_enumerate_integral)

    sp = sub.add_parser("growth", help="counting-function exponent fit")
    _add_quad(sp)
    sp.add_argument("--lmin", type=float, required=True)
    sp.add_argument("--lmax", type=float, required=True)
    sp.add_argument("--shells", type=int, required=True)
    sp.set_defaults(run=_cmd_growth)

    sp = sub.add_parser("coords", help="convert between quad and coordinate charts")
    sp.add_argument("values", help="quad 'a,b,c,d' (--to) or coordinate list (--from)")
    g = sp.add_mutually_exclusive_group(required=True)
    g.add_argument("--to", choices=("lambda", "horocyclic"), default=None)
    g.add_argument("--from", dest="source", choices=("lambda", "horocyclic"),
                   default=None)
    sp.set_defaults(run=_cmd_coords)

    sp = sub.add_parser("mcg", help="apply a mapping class word (right-to-left)")
    _add_quad(sp)
    sp.add_argument("-w", "--word", required=True,
                    help="letters f1..f4, phi1..phi3, comma or space separated")
    sp.set_defaults(run=_cmd_mcg)

    sp = sub.add_parser("klein", help="Klein bottle trace recursion")
    sp.add_argument("-A", required=True, help="two-sided trace")
    sp.add_argument("--seed", required=True, help="a0,a1")
    sp.add_argument("-n", "--count", type=int, required=True)
    sp.set_defaults(run=_cmd_klein)

    for action in sub.choices.values():
        _add_common(action, defaults=False)
    return p


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except _UsageError as e:
        print(f"mql: error: {e}", file=sys.stderr)
        return 1
    out = sys.stdout
    close = False
    try:
        if args.out:
            out = open(args.out, "w")
            close = True
        records, code = args.run(args)
        _emit(records, args.format, out)
        return code
    except _UsageError as e:
        print(f"mql: error: {e}", file=sys.stderr)
        return 1
    except BudgetExceededError as e:
        print(f"mql: budget exhausted: {e}", file=sys.stderr)
        return 3
    except InvalidQuadError as e:
        print(f"mql: verification failure: {e}", file=sys.stderr)
        return 2
    except (BranchCutError, BqViolationError, DegenerateClassError, DomainError) as e:
        print(f"mql: precondition violation: {e}", file=sys.stderr)
        return 4
    except MarkoffError as e:
        print(f"mql: error: {e}", file=sys.stderr)
        return 4
    finally:
        if close:
            out.close()


if __name__ == "__main__":
    sys.exit(main())
