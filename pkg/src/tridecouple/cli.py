"""Command-line front end.

Every subcommand writes one JSON report.  Exit codes: 0 accepted or
success, 1 rejected, 2 indeterminate, 64 usage error, 65 malformed input,
66 unreadable input file.
"""
from __future__ import annotations

import argparse
import json
import sys
import time

from . import __version__
from .decouple import (
    FullyDecoupleable,
    Indeterminate,
    NotDecoupleable,
    PartiallyNotFully,
    classify_fd_generic,
    classify_fd_n3,
    classify_n2,
    classify_pd_not_fd_n3,
)
from .errors import (
    DegenerateEigenvalues,
    DimensionMismatch,
    DomainExcluded,
    MalformedInput,
    NoCandidateMatches,
    NotDecoupleable as NotDecoupleableError,
    Unsolvable,
    ZeroTensor,
)
from .invariants import oa_basis, qtilde_full, qtilde_partial, so2_basis
from .jsonio import digest, dump_tensor, load_tensor, map_to_json, scalar_to_json
from .molien import molien_series
from .orbitlab import orbit_search_oracle, sample
from .recover import recover_fd_generic, recover_n2, recover_pd_params, recover_pd_rotation
from .tolerance import DEFAULT_TOL
from .verify import run_checks

EX_OK, EX_REJECT, EX_INDETERMINATE = 0, 1, 2
EX_USAGE, EX_DATAERR, EX_NOINPUT = 64, 65, 66


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _jsonable(x):
    if isinstance(x, dict):
        return {k: _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, (str, bool)) or x is None:
        return x
    return scalar_to_json(x)


def _verdict_json(v):
    if isinstance(v, FullyDecoupleable):
        return {"kind": "FullyDecoupleable", "betas": _jsonable(v.betas)}
    if isinstance(v, PartiallyNotFully):
        return {
            "kind": "PartiallyNotFully",
            "alpha": _jsonable(v.alpha),
            "gamma1": _jsonable(v.gamma1),
            "gamma2": _jsonable(v.gamma2),
            "beta3": _jsonable(v.beta3),
        }
    if isinstance(v, Indeterminate):
        return {"kind": "Indeterminate", "reason": v.reason}
    return {"kind": "NotDecoupleable"}


def _load(args):
    doc_path = args.inp
    gamma = load_tensor(doc_path, force_exact=getattr(args, "exact", False))
    with open(doc_path, encoding="utf-8") as fh:
        return gamma, digest(json.load(fh))


def _need_n(gamma, n, what):
    if gamma.n != n:
        raise MalformedInput(f"{what} needs an n={n} tensor, got n={gamma.n}")


def cmd_invariants(args):
    gamma, dig = _load(args)
    out = {"input_digest": dig, "mode": "exact" if gamma.exact else "float", "basis": args.basis}
    if args.basis in ("so2", "o2"):
        _need_n(gamma, 2, f"basis {args.basis}")
        inv = so2_basis(gamma)
        vals = {k: inv.as_dict()[k] for k in (("j2", "h2", "l4", "m4") if args.basis == "so2" else ("i1", "i2", "i3"))}
        out["values"] = _jsonable(vals)
    else:
        _need_n(gamma, 3, "basis oa")
        inv = oa_basis(gamma)
        out["values"] = _jsonable(inv.as_dict())
        out["qtilde_full"] = _jsonable(qtilde_full(gamma).as_dict())
        try:
            out["qtilde_partial"] = _jsonable(qtilde_partial(gamma, args.tol, inv).as_dict())
        except DomainExcluded:
            out["qtilde_partial"] = {"excluded": "DomainExcluded"}
    return out, EX_OK


_CLASSIFIERS = {
    "n2": (classify_n2, 2),
    "fd3": (classify_fd_n3, 3),
    "pd3": (classify_pd_not_fd_n3, 3),
    "generic": (classify_fd_generic, None),
}


def cmd_classify(args):
    gamma, dig = _load(args)
    fn, n = _CLASSIFIERS[args.mode]
    if n is not None:
        _need_n(gamma, n, f"mode {args.mode}")
    c = fn(gamma, args.tol) if args.mode != "generic" else fn(gamma, max(args.tol, 1e-8))
    out = {
        "input_digest": dig,
        "mode": args.mode,
        "scalars": "exact" if gamma.exact else "float",
        "verdict": _verdict_json(c.verdict),
        "residuals": _jsonable(c.residuals),
        "thresholds": c.thresholds,
        "certificates": [[name, str(getattr(j, "value", j))] for name, j in c.certificates],
    }
    if c.map is not None:
        out["map"] = map_to_json(c.map)
    return out, c.exit_code


def _report_json(report):
    return {
        "maps": [map_to_json(m) for m in report.maps],
        "reduced": dump_tensor(report.reduced) if report.reduced is not None else None,
        "residual": _jsonable(report.residual),
        "branch_count": report.branch_count,
    }


def cmd_recover(args):
    gamma, dig = _load(args)
    out = {"input_digest": dig, "mode": args.mode}
    try:
        if args.mode == "n2":
            _need_n(gamma, 2, "mode n2")
            rep = recover_n2(gamma, args.tol)
            out.update(_report_json(rep))
            out["angles"] = rep.angles
            out["reduced_forms"] = [dump_tensor(f) for f in rep.reduced_forms]
        elif args.mode == "generic":
            rep = recover_fd_generic(gamma)
            out.update(_report_json(rep))
            if not rep.maps:
                out["status"] = "NoCandidateMatches"
                return out, EX_REJECT
        else:
            _need_n(gamma, 3, "mode pd3")
            p = recover_pd_params(qtilde_partial(gamma, args.tol), norm=gamma.norm(), tol=args.tol)
            out["params"] = _jsonable(p.as_dict())
            out.update(_report_json(recover_pd_rotation(gamma, p)))
    except (NotDecoupleableError, Unsolvable, NoCandidateMatches, ZeroTensor) as exc:
        out["status"] = type(exc).__name__
        out["detail"] = str(exc)
        return out, EX_REJECT
    except (DegenerateEigenvalues, DomainExcluded) as exc:
        out["status"] = type(exc).__name__
        out["detail"] = str(exc)
        return out, EX_INDETERMINATE
    out["status"] = "ok"
    return out, EX_OK


def cmd_molien(args):
    try:
        s = molien_series(args.group, args.max_degree, args.points)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    return {"group": args.group, "max_degree": s.max_degree, "coefficients": list(s.coefficients), "max_drift": s.max_drift}, EX_OK


def cmd_sample(args):
    try:
        s = sample(args.kind, args.n, args.seed, exact=args.exact)
    except (ValueError, DimensionMismatch) as exc:
        raise UsageError(str(exc)) from None
    # the sample subcommand emits a plain tensor document
    return dump_tensor(s.point), EX_OK


def cmd_oracle(args):
    gamma, dig = _load(args)
    r = orbit_search_oracle(gamma, args.pattern, budget=args.budget, seed=args.seed)
    return {
        "input_digest": dig,
        "pattern": args.pattern,
        "residual": r.residual,
        "starts": r.starts,
        "steps": r.steps,
        "matrix": r.matrix.tolist(),
        "note": "upper bound on the distance from the orbit to the pattern",
    }, EX_OK


def cmd_verify(args):
    results = run_checks(args.seed, args.count)
    ok = all(r["passed"] for r in results)
    return {"seed": args.seed, "count": args.count, "checks": results, "passed": ok}, EX_OK if ok else EX_REJECT


def build_parser():
    p = _Parser(prog="tridecouple", description="Decoupleability of symmetric 3-tensors under O(n).")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(sp, tensor_in=True):
        if tensor_in:
            sp.add_argument("--in", dest="inp", required=True, metavar="PATH")
            sp.add_argument("--exact", action="store_true", help="read floats as exact decimals")
            sp.add_argument("--tol", type=float, default=DEFAULT_TOL)
        sp.add_argument("--out", metavar="PATH", help="write the report here instead of stdout")
        sp.add_argument("--timing", action="store_true", help="add wall-clock time to the report")

    sp = sub.add_parser("invariants")
    sp.add_argument("--basis", choices=("so2", "o2", "oa"), required=True)
    common(sp)
    sp.set_defaults(func=cmd_invariants)

    sp = sub.add_parser("classify")
    sp.add_argument("--mode", choices=tuple(_CLASSIFIERS), required=True)
    common(sp)
    sp.set_defaults(func=cmd_classify)

    sp = sub.add_parser("recover")
    sp.add_argument("--mode", choices=("n2", "generic", "pd3"), required=True)
    common(sp)
    sp.set_defaults(func=cmd_recover)

    sp = sub.add_parser("molien")
    sp.add_argument("--group", choices=("so2", "o2"), required=True)
    sp.add_argument("--max-degree", type=int, default=12)
    sp.add_argument("--points", type=int, default=None)
    common(sp, tensor_in=False)
    sp.set_defaults(func=cmd_molien)

    sp = sub.add_parser("sample")
    sp.add_argument("--kind", choices=("fd", "pd", "generic"), required=True)
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--seed", type=int, required=True)
    sp.add_argument("--exact", action="store_true", help="rational entries and rational rotations")
    common(sp, tensor_in=False)
    sp.set_defaults(func=cmd_sample)

    sp = sub.add_parser("oracle")
    sp.add_argument("--pattern", choices=("fd", "pd"), required=True)
    sp.add_argument("--budget", type=int, default=32, help="number of multi-starts")
    sp.add_argument("--seed", type=int, required=True)
    common(sp)
    sp.set_defaults(func=cmd_oracle)

    sp = sub.add_parser("verify")
    sp.add_argument("--seed", type=int, required=True)
    sp.add_argument("--count", type=int, default=10, help="fixtures per check")
    common(sp, tensor_in=False)
    sp.set_defaults(func=cmd_verify)
    return p


def run(argv=None):
    """Parse ``argv``, run the subcommand, write the report; returns the exit code."""
    try:
        args = build_parser().parse_args(argv)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EX_USAGE
    start = time.perf_counter()
    try:
        body, code = args.func(args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EX_USAGE
    except OSError as exc:
        print(f"cannot read input: {exc}", file=sys.stderr)
        return EX_NOINPUT
    except (MalformedInput, DimensionMismatch) as exc:
        print(f"malformed input: {exc}", file=sys.stderr)
        return EX_DATAERR
    if args.command != "sample":
        body = {"tool": "tridecouple", "tool_version": __version__, "command": args.command, **body}
        if args.timing:
            body["timing_seconds"] = time.perf_counter() - start
    text = json.dumps(body, indent=2)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    else:
        print(text)
    return code


def main():
    sys.exit(run())
