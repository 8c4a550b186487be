"""Command-line front end.

One binary, subcommand groups: expand, fano, curve, unirat, bounds,
examples, tangency.  All randomness flows from --seed and is echoed in the
report; JSON output is canonical (sorted keys, no timestamps) so identical
configurations produce byte-identical bytes, and parallel census runs merge
deterministically.  Exit codes: 0 success, 2 input error, 3 budget
exhaustion, 4 internal invariant violation (always a bug).
"""

from __future__ import annotations

import argparse
import json
import sys
import time
import traceback

from . import bounds as bounds_mod
from . import curves as curves_mod
from . import fano as fano_mod
from . import unirational as unirat_mod
from .errors import BudgetError, InputError, InternalInvariantViolation, WorkbenchError
from .expansion import (
    expand_at_plane,
    expand_at_point,
    multiset_of,
    tangency_locus,
)
from .fields import QQ, FieldSpec
from .poly import poly_parse, poly_render, reduce_mod
from .varieties import (
    KPlane,
    Hypersurface,
    example_hypersurface,
    hypersurface_from_json,
    hypersurface_to_json,
    load_hypersurface,
    random_smooth,
)

SCHEMA = "fano-workbench/1"


def _parse_point(field, text: str):
    return tuple(field.parse_scalar(x) for x in text.split(","))


def _parse_rows(field, text: str):
    return [[field.parse_scalar(x) for x in row.split(",")] for row in text.split(";")]


def _load_input(args) -> Hypersurface:
    if not getattr(args, "input", None):
        raise InputError("--input FILE is required for this command")
    X = load_hypersurface(args.input)
    prime = getattr(args, "prime", None)
    if prime is not None and X.field.p != prime:
        X = Hypersurface(
            reduce_mod(X.form, prime),
            [
                KPlane.from_rows(
                    FieldSpec(prime),
                    [[X.field.lift(x) % prime for x in row] for row in P.basis],
                )
                for P in X.marked_planes
            ]
            if X.field.p is not None
            else [],
        )
    return X


def _marked_plane(X: Hypersurface, args, flag="--gamma") -> KPlane:
    center = getattr(args, "center", None)
    if center:
        return KPlane.from_rows(X.field, _parse_rows(X.field, center))
    idx = getattr(args, "gamma", None)
    if idx is None:
        idx = getattr(args, "through", None)
    if idx is None:
        raise InputError(f"supply {flag} INDEX (into marked_planes) or --center \"rows\"")
    if not X.marked_planes or idx >= len(X.marked_planes):
        raise InputError(
            f"input file has {len(X.marked_planes)} marked planes; index {idx} is out of range"
        )
    return X.marked_planes[idx]


def _emit(args, doc: dict, elapsed: float) -> str:
    doc = dict(doc)
    doc["schema"] = SCHEMA
    if getattr(args, "timing", False):
        doc["elapsed"] = round(elapsed, 6)
    if getattr(args, "json", False):
        return json.dumps(doc, sort_keys=True) + "\n"
    lines = []
    for key in sorted(doc):
        lines.append(f"{key}: {json.dumps(doc[key], sort_keys=True)}")
    return "\n".join(lines) + "\n"


# -- subcommand handlers -------------------------------------------------------------


def _cmd_expand_point(args):
    X = _load_input(args)
    pt = _parse_point(X.field, args.point)
    x0 = _parse_point(X.field, args.x0) if args.x0 else None
    import random

    exp = expand_at_point(X, pt, x0=x0, rng=random.Random(args.seed))
    return {
        "center": [str(x) for x in exp.center.basis[0]],
        "x0": [str(c) for c in exp.x0_coeffs],
        "pieces": {str(i): poly_render(g) for i, g in exp.pieces.items()},
        "seed": args.seed,
    }


def _cmd_expand_plane(args):
    X = _load_input(args)
    center = _marked_plane(X, args, "--gamma")
    exp = expand_at_plane(X, center)
    return {
        "center": [[str(x) for x in row] for row in center.basis],
        "index_set_size": len(exp.index_set),
        "coefficients": {
            json.dumps(multiset_of(I)): poly_render(c)
            for I, c in exp.coefficients.items()
        },
    }


def _cmd_fano_fiber(args):
    X = _load_input(args)
    center = _marked_plane(X, args, "--gamma")
    fib = fano_mod.fano_fiber(X, center)
    return {
        "center": [[str(x) for x in row] for row in center.basis],
        "fiber_ambient_dim": fib.fiber_dim,
        "expected_dim": fib.expected_dim,
        "equations": {
            json.dumps(multiset_of(I)): poly_render(c)
            for I, c in fib.equations.items()
        },
    }


def _cmd_fano_census(args):
    X = _load_input(args)
    through = None
    if args.through is not None or args.center:
        through = _marked_plane(X, args, "--through")
    census = fano_mod.enumerate_kplanes(
        X, args.k, through=through, budget=args.budget, jobs=args.jobs
    )
    doc = census.to_dict()
    if args.no_list:
        doc.pop("planes", None)
    return doc


def _cmd_fano_estimate(args):
    X = _load_input_any_field(args)
    p1, p2 = (int(x) for x in args.primes.split(","))
    est = fano_mod.dimension_estimate(X.form, args.k, (p1, p2), budget=args.budget)
    return est.to_dict()


def _load_input_any_field(args) -> Hypersurface:
    if not getattr(args, "input", None):
        raise InputError("--input FILE is required for this command")
    return load_hypersurface(args.input)


def _cmd_curve_splitting(args):
    X = _load_input(args)
    line = KPlane.from_rows(X.field, _parse_rows(X.field, args.line))
    split = curves_mod.normal_bundle_splitting(X, line)
    doc = split.to_dict()
    # cross-check the tangent-defect identity n-1-delta = h0(N(-1))
    from .expansion import linear_diagnostics

    pt = next(iter(line.points()))
    exp = expand_at_point(X, pt)
    for row in line.basis:
        local = exp.to_local.matvec(row)
        if any(v != 0 for v in local[1:]):
            at = local[1:]
            break
    diag = linear_diagnostics(exp, at)
    doc["delta"] = diag.delta
    doc["delta_bridge_check"] = (
        X.ambient_dim - 1 - diag.delta == split.h0_table[-1]
    )
    return doc


def _cmd_curve_h0(args):
    X = _load_input(args)
    line = KPlane.from_rows(X.field, _parse_rows(X.field, args.line))
    C = curves_mod.RationalCurve.from_line(X, line)
    vanish = _parse_point(X.field, args.vanish_at) if args.vanish_at else None
    value = curves_mod.h0_twisted_tangent(X, C, args.m, vanish_at=vanish)
    return {"m": args.m, "vanish_at": args.vanish_at, "h0": value}


def _cmd_curve_free(args):
    X = _load_input(args)
    line = KPlane.from_rows(X.field, _parse_rows(X.field, args.line))
    return {"free": curves_mod.is_free(X, line)}


def _cmd_unirat_sample(args):
    X = _load_input(args)
    gamma = _marked_plane(X, args)
    report = unirat_mod.unirational_sample(
        X, gamma, args.samples, seed=args.seed, budget=args.budget
    )
    return report.to_dict()


def _cmd_unirat_quadric(args):
    X = _load_input(args)
    pt = _parse_point(X.field, args.point)
    param = unirat_mod.quadric_param(X, pt)
    import random

    return {
        "base_point": [str(x) for x in param.base_point],
        "components": [poly_render(g) for g in param.components],
        "dominance_evidence": param.dominance_evidence(random.Random(args.seed)),
        "seed": args.seed,
    }


def _cmd_unirat_series(args):
    X = _load_input(args)
    gamma = _marked_plane(X, args)
    series = unirat_mod.boundary_series(X, gamma)
    report = unirat_mod.basepoint_free_check(series, second_prime=args.second_prime)
    doc = report.to_dict()
    doc["rows"] = {
        json.dumps(multiset_of(I)): poly_render(linear) for I, linear in series.rows
    }
    return doc


def _cmd_unirat_bertini(args):
    X = _load_input(args)
    gamma = _marked_plane(X, args)
    series = unirat_mod.boundary_series(X, gamma)
    strata = unirat_mod.bertini_strata(
        series.member, series.param_dim, gamma.dim, X.field, budget=args.budget
    )
    return strata.to_dict()


def _cmd_bounds_k0(args):
    _check_degree_gate(args)
    return {"d": args.d, "k0": str(bounds_mod.k0(args.d))}


def _cmd_bounds_n0(args):
    _check_degree_gate(args)
    return {"d": args.d, "n0": str(bounds_mod.n0(args.d))}


def _check_degree_gate(args):
    if args.d > bounds_mod.DEFAULT_MAX_EXACT_DEGREE and not args.allow_large:
        raise InputError(
            f"--d {args.d} grows as an iterated exponential; pass --allow-large to force it"
        )


def _cmd_bounds_report(args):
    report = bounds_mod.threshold_report(
        args.n,
        args.d,
        args.k,
        s=args.s,
        e=args.e,
        r=args.r,
        max_exact_degree=bounds_mod.DEFAULT_MAX_EXACT_DEGREE
        if not args.allow_large
        else max(args.d, bounds_mod.DEFAULT_MAX_EXACT_DEGREE),
    )
    return report.to_dict()


def _cmd_examples(args):
    kind = args.kind
    if kind == "random-smooth":
        X, report, seed_used = random_smooth(
            args.n, args.d, args.prime, attempts=args.attempts, seed=args.seed
        )
        doc = hypersurface_to_json(X)
        doc["smoothness"] = report.to_dict()
        doc["seed"] = list(seed_used)
    else:
        X, marked = example_hypersurface(
            kind,
            n=args.n,
            d=args.d,
            p=args.prime,
            m=args.m,
            seed=args.seed,
            attempts=args.attempts,
        )
        doc = hypersurface_to_json(X)
        doc["seed"] = args.seed
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            json.dump(doc, fh, indent=2, sort_keys=True)
            fh.write("\n")
        return {"written": args.out, "n": args.n, "d": args.d}
    return doc


def _cmd_tangency(args):
    field = FieldSpec(args.prime)
    nvars = args.n + 1
    h = poly_parse(args.form, nvars, field)
    lower = [poly_parse(t, nvars, field) for t in args.lower.split(";")] if args.lower else []
    report = tangency_locus(h, lower, budget=args.budget)
    doc = report.to_dict()
    if args.no_list:
        doc.pop("points", None)
    return doc


# -- parser ---------------------------------------------------------------------------


def _add_common(sp, *flags):
    if "input" in flags:
        sp.add_argument("--input", help="hypersurface JSON file")
    if "prime" in flags:
        sp.add_argument("--prime", type=int, help="prime field modulus")
    if "seed" in flags:
        sp.add_argument("--seed", type=int, default=0, help="random seed (echoed in reports)")
    if "jobs" in flags:
        sp.add_argument("--jobs", type=int, default=1, help="worker processes for scans")
    if "budget" in flags:
        sp.add_argument(
            "--budget", type=int, default=10**8, help="maximum points/planes to visit"
        )
    sp.add_argument("--json", action="store_true", help="canonical JSON output")
    sp.add_argument("--timing", action="store_true", help="include elapsed seconds (breaks byte-identical reruns)")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="fano-workbench",
        description="Exact census, tangent, splitting, and unirationality "
        "diagnostics for hypersurfaces over prime fields.",
    )
    groups = ap.add_subparsers(dest="group", required=True)

    g = groups.add_parser("expand", help="local expansions").add_subparsers(
        dest="action", required=True
    )
    sp = g.add_parser("point", help="expansion around a point of X")
    sp.add_argument("--point", required=True, help='point "c0,c1,..."')
    sp.add_argument("--x0", help="distinguished coordinate (random if omitted)")
    _add_common(sp, "input", "prime", "seed")
    sp.set_defaults(fn=_cmd_expand_point)
    sp = g.add_parser("plane", help="expansion around a plane inside X")
    sp.add_argument("--gamma", type=int, help="marked plane index")
    sp.add_argument("--center", help='plane rows "r00,r01,...;r10,..."')
    _add_common(sp, "input", "prime", "seed")
    sp.set_defaults(fn=_cmd_expand_plane)

    g = groups.add_parser("fano", help="Fano fibers and censuses").add_subparsers(
        dest="action", required=True
    )
    sp = g.add_parser("fiber", help="local equations of planes through a center")
    sp.add_argument("--gamma", type=int, help="marked plane index")
    sp.add_argument("--center", help="plane rows")
    _add_common(sp, "input", "prime")
    sp.set_defaults(fn=_cmd_fano_fiber)
    sp = g.add_parser("census", help="count k-planes on X over F_p")
    sp.add_argument("--k", type=int, required=True)
    sp.add_argument("--through", type=int, help="marked plane index to pass through")
    sp.add_argument("--center", help="through-plane rows")
    sp.add_argument("--no-list", action="store_true", help="omit the plane list")
    _add_common(sp, "input", "prime", "jobs", "budget")
    sp.set_defaults(fn=_cmd_fano_census)
    sp = g.add_parser("estimate", help="two-prime dimension estimate")
    sp.add_argument("--k", type=int, required=True)
    sp.add_argument("--primes", required=True, help='"p1,p2"')
    _add_common(sp, "input", "budget")
    sp.set_defaults(fn=_cmd_fano_estimate)

    g = groups.add_parser("curve", help="rational curve diagnostics").add_subparsers(
        dest="action", required=True
    )
    sp = g.add_parser("splitting", help="normal bundle splitting type of a line")
    sp.add_argument("--line", required=True, help="line rows")
    _add_common(sp, "input", "prime")
    sp.set_defaults(fn=_cmd_curve_splitting)
    sp = g.add_parser("h0", help="twisted tangent section count")
    sp.add_argument("--line", required=True)
    sp.add_argument("--m", type=int, default=0)
    sp.add_argument("--vanish-at", dest="vanish_at", help='parameter point "s,t"')
    _add_common(sp, "input", "prime")
    sp.set_defaults(fn=_cmd_curve_h0)
    sp = g.add_parser("free", help="global generation test")
    sp.add_argument("--line", required=True)
    _add_common(sp, "input", "prime")
    sp.set_defaults(fn=_cmd_curve_free)

    g = groups.add_parser("unirat", help="residual tower tools").add_subparsers(
        dest="action", required=True
    )
    sp = g.add_parser("sample", help="unirational point sampler")
    sp.add_argument("--gamma", type=int, help="marked plane index")
    sp.add_argument("--center", help="marked plane rows")
    sp.add_argument("--samples", type=int, default=1000)
    _add_common(sp, "input", "prime", "seed", "budget")
    sp.set_defaults(fn=_cmd_unirat_sample)
    sp = g.add_parser("quadric", help="parameterize a quadric from a point")
    sp.add_argument("--point", required=True)
    _add_common(sp, "input", "prime", "seed")
    sp.set_defaults(fn=_cmd_unirat_quadric)
    sp = g.add_parser("series", help="boundary series and basepoint check")
    sp.add_argument("--gamma", type=int, help="marked plane index")
    sp.add_argument("--center", help="marked plane rows")
    sp.add_argument("--second-prime", dest="second_prime", type=int)
    _add_common(sp, "input", "prime")
    sp.set_defaults(fn=_cmd_unirat_series)
    sp = g.add_parser("bertini", help="singular-member strata of the boundary series")
    sp.add_argument("--gamma", type=int, help="marked plane index")
    sp.add_argument("--center", help="marked plane rows")
    _add_common(sp, "input", "prime", "budget")
    sp.set_defaults(fn=_cmd_unirat_bertini)

    g = groups.add_parser("bounds", help="closed-form thresholds").add_subparsers(
        dest="action", required=True
    )
    sp = g.add_parser("k0", help="recursive plane threshold")
    sp.add_argument("--d", type=int, required=True)
    sp.add_argument("--allow-large", action="store_true")
    _add_common(sp)
    sp.set_defaults(fn=_cmd_bounds_k0)
    sp = g.add_parser("n0", help="ambient dimension threshold")
    sp.add_argument("--d", type=int, required=True)
    sp.add_argument("--allow-large", action="store_true")
    _add_common(sp)
    sp.set_defaults(fn=_cmd_bounds_n0)
    sp = g.add_parser("report", help="predicate battery for (n,d,k,s,e[,r])")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--d", type=int, required=True)
    sp.add_argument("--k", type=int, required=True)
    sp.add_argument("--s", type=int, default=-1)
    sp.add_argument("--e", type=int, default=1)
    sp.add_argument("--r", type=int)
    sp.add_argument("--allow-large", action="store_true")
    _add_common(sp)
    sp.set_defaults(fn=_cmd_bounds_report)

    sp = groups.add_parser("examples", help="generate example hypersurface files")
    sp.add_argument(
        "kind", choices=["fermat", "conical", "planed", "random-smooth"]
    )
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--d", type=int, required=True)
    sp.add_argument("--m", type=int, help="marked plane dimension (planed)")
    sp.add_argument("--attempts", type=int, default=100)
    sp.add_argument("--out", help="write hypersurface JSON here")
    _add_common(sp, "prime", "seed")
    sp.set_defaults(fn=_cmd_examples)

    sp = groups.add_parser("tangency", help="tangency locus scan")
    sp.add_argument("--form", required=True, help="degree-d form in the grammar")
    sp.add_argument("--lower", help='lower-degree forms, ";"-separated')
    sp.add_argument("--n", type=int, required=True, help="ambient projective dimension")
    sp.add_argument("--no-list", action="store_true")
    _add_common(sp, "prime", "budget")
    sp.set_defaults(fn=_cmd_tangency)
    return ap


def dispatch(argv):
    """Run one command; returns (exit code, output text)."""
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return (exc.code if exc.code is not None else 2), ""
    start = time.monotonic()
    try:
        doc = args.fn(args)
    except InputError as exc:
        return 2, f"input error: {exc}\n"
    except BudgetError as exc:
        return 3, f"budget exhausted: {exc}\n"
    except InternalInvariantViolation as exc:
        return 4, f"internal invariant violated (this is a bug): {exc}\n"
    except WorkbenchError as exc:
        return 2, f"input error: {exc}\n"
    except Exception:
        return 4, "internal error (this is a bug):\n" + traceback.format_exc()
    return 0, _emit(args, doc, time.monotonic() - start)


def main(argv=None) -> int:
    code, out = dispatch(sys.argv[1:] if argv is None else argv)
    stream = sys.stdout if code == 0 else sys.stderr
    stream.write(out)
    return code


if __name__ == "__main__":
    sys.exit(main())
