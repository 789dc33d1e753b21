"""ramcycles command line.

Exit status: 0 determinate, 2 usage or parse error, 3 indeterminate
(censored) answer, 4 a violated invariant or failed self-check.
"""

from __future__ import annotations

import argparse
import random
import sys
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction

from . import __version__
from . import report as R
from .cycles import appendix_check, cycle_report
from .errors import (
    IndeterminateValuation,
    OrderMismatch,
    ParseError,
    RamcyclesError,
    TruncationTooSmall,
)
from .fields import ff_make, mult_order
from .normal_form import characterize_mr, normalize
from .okpoly import OKPoly
from .parsing import (
    parse_field_element,
    parse_germ,
    parse_map,
    parse_modulus,
    parse_padic,
    parse_padic_map,
    parse_scalar,
)
from .ramification import (
    TruncPolicy,
    is_almost_minimally_ramified,
    is_minimally_ramified,
    lower_bound,
    ram_index,
    ram_profile,
)
from .series import to_text
from .valued import LaurentTrunc, PadicTrunc, RationalExact, bound_valuation

EXIT_OK, EXIT_USAGE, EXIT_INDET, EXIT_VIOLATION = 0, 2, 3, 4

COMMANDS = ("order", "invariants", "mr", "resit", "normalize", "classify", "bound", "cycles", "appendix", "selftest")


class UsageError(Exception):
    pass


# -- argument handling ---------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    g = common.add_argument_group("field and input")
    g.add_argument("--p", type=int, help="characteristic (a prime)")
    g.add_argument("--k", type=int, default=1, help="extension degree of the residue field")
    g.add_argument("--modulus", help="irreducible modulus, e.g. 'x^4+x+1' or '1,1,0,0,1'")
    g.add_argument("--germ", help="germ over F_{p^k}, e.g. 'x*z*(1+z^5)'; classify binds g to each multiplier")
    g.add_argument("--elem", help="field element (order command)")
    g.add_argument("--map", dest="map_text", help="map over O_K, e.g. 'l*z*(1+mu*z+z^2)'")
    g.add_argument("--lambda", dest="lam", help="value of l / lambda, e.g. '1+t' or 'padic:1+p'")
    g.add_argument("--mu", help="value of mu in the map text")
    g.add_argument("--q", type=int, help="expected multiplier order (checked, never trusted)")
    r = common.add_argument_group("computation")
    r.add_argument("--nmax", type=int, default=2)
    r.add_argument("--trunc", type=int, help="series truncation N")
    r.add_argument("--tprec", type=int, default=60, help="t-adic precision T in trunc mode")
    r.add_argument("--pprec", type=int, default=20, help="p-adic precision M")
    r.add_argument("--degree", type=int, help="highest exponent kept by normalize")
    r.add_argument("--mode", choices=("exact", "trunc"), help="exact rational arithmetic or truncated")
    r.add_argument("--seed", type=int, default=0)
    r.add_argument("--sample", type=int, help="classify: random subset of this size (uses --seed)")
    r.add_argument("--jobs", type=int, default=1)
    r.add_argument("--only", type=int, action="append", help="selftest: run only this criterion")
    r.add_argument("--size", type=int, default=300, help="selftest: random germs per prime")
    r.add_argument("--dump-iterate", action="store_true", help="cycles: include windowed iterate data")
    o = common.add_argument_group("output")
    o.add_argument("--output", choices=("pretty", "json", "tsv"), default="pretty")

    top = argparse.ArgumentParser(prog="ramcycles", description=__doc__.splitlines()[0])
    top.add_argument("--version", action="version", version=f"ramcycles {__version__}")
    sub = top.add_subparsers(dest="command", required=True)
    helps = {
        "order": "multiplicative order of a field element or a germ's multiplier",
        "invariants": "ramification numbers i_n(g^q), n <= nmax",
        "mr": "minimal (and, for p = 2, almost minimal) ramification",
        "resit": "iterative residue from the normal form",
        "normalize": "conjugate to gamma z s(z^q) up to a given degree",
        "classify": "sweep every multiplier through a germ template",
        "bound": "largest valuation of a point of period q p^n",
        "cycles": "per-level optimal-cycle verdicts for a map",
        "appendix": "multiplicity law for maps with i_0 = q p",
        "selftest": "run the acceptance checks",
    }
    for name in COMMANDS:
        sub.add_parser(name, parents=[common], help=helps[name])
    return top


def make_config(args) -> dict:
    keys = ("command", "p", "k", "modulus", "germ", "elem", "map_text", "lam", "mu", "q", "nmax", "trunc",
            "tprec", "pprec", "degree", "mode", "seed", "sample", "only", "size", "dump_iterate", "output")
    return {k: getattr(args, k) for k in keys}


def field_of(args):
    if args.p is None:
        raise UsageError("--p is required")
    mod = parse_modulus(args.modulus, args.p) if args.modulus else None
    return ff_make(args.p, args.k, mod)


def germ_of(args, spec):
    if not args.germ:
        raise UsageError("--germ is required")
    return parse_germ(args.germ, spec, q=args.q)


def _frac(x):
    return R.cell(Fraction(x)) if x is not None else None


# -- commands ------------------------------------------------------------------


def cmd_order(args):
    spec = field_of(args)
    if args.elem:
        e = parse_field_element(args.elem, spec)
        label = args.elem
    elif args.germ:
        e = germ_of(args, spec).gamma
        label = f"multiplier of {args.germ}"
    else:
        raise UsageError("order needs --elem or --germ")
    if not e:
        raise UsageError("zero has no multiplicative order")
    row = {"element": label, "value": e.to_json(), "order": mult_order(e)}
    if args.q is not None and args.q != row["order"]:
        raise OrderMismatch(f"supplied q={args.q} but the order is {row['order']}")
    return [row], {"element": e.to_json(), "order": row["order"]}, EXIT_OK


def cmd_invariants(args):
    spec = field_of(args)
    g = germ_of(args, spec)
    mode = args.mode or "trunc"
    policy = TruncPolicy(trunc=args.trunc, adaptive=(mode == "exact"))
    prof = ram_profile(g, args.nmax, policy)
    rows = []
    for n, e in enumerate(prof.entries):
        status = "exact" if e.is_exact else ("censored" if e.kind == "atleast" else "infinite")
        rows.append({"n": n, "i_n": e, "status": status, "lower_bound": lower_bound(g.q, g.p, n),
                     "trunc": prof.trunc})
    result = prof.to_json()
    result["mr"] = prof.mr.to_json()
    if prof.amr is not None:
        result["amr"] = prof.amr.to_json()
    result["policy"] = policy.to_json()
    code = EXIT_OK
    if any(v is False for v in prof.flags.values()):
        code = EXIT_VIOLATION
    elif prof.verdict == "Indeterminate":
        code = EXIT_INDET
    head = [f"gamma = {R.cell(prof.gamma.to_json())}, q = {g.q}, p = {g.p}, truncation {prof.trunc}",
            f"verdict: {prof.verdict}   flags: {prof.flags}"]
    return rows, result, code, head


def cmd_mr(args):
    spec = field_of(args)
    g = germ_of(args, spec)
    mr = is_minimally_ramified(g)
    amr = is_almost_minimally_ramified(g) if g.p == 2 else None
    row = {"p": g.p, "q": g.q, "gamma": g.gamma.to_json(), "mr": mr.value,
           "amr": None if amr is None else amr.value, "reason": mr.reason}
    result = {"p": g.p, "q": g.q, "gamma": g.gamma.to_json(), "mr": mr.to_json(),
              "amr": None if amr is None else amr.to_json()}
    code = EXIT_INDET if mr.value is None or (amr is not None and amr.value is None) else EXIT_OK
    return [row], result, code


def cmd_resit(args):
    spec = field_of(args)
    g = germ_of(args, spec)
    nf = normalize(g, args.degree)
    row = {"p": g.p, "q": g.q, "gamma": g.gamma.to_json(), "a1": nf.a1.to_json(), "a2": nf.a2.to_json(),
           "resit": None if nf.resit is None else nf.resit.to_json()}
    result = dict(row)
    result["characterize_mr"] = characterize_mr(g).to_json()
    if nf.resit is None:
        result["note"] = "a_1 = 0, so i_0(g^q) != q and resit is undefined"
    return [row], result, EXIT_OK


def cmd_normalize(args):
    spec = field_of(args)
    g = germ_of(args, spec)
    nf = normalize(g, args.degree)
    row = {"p": g.p, "q": g.q, "gamma": g.gamma.to_json(), "trunc": nf.ghat.trunc,
           "h": to_text(nf.h), "ghat": to_text(nf.ghat)}
    return [row], nf.to_json(), EXIT_OK


def _classify_one(job):
    p, k, modulus, template, coeffs, q = job
    spec = ff_make(p, k, modulus)
    from .fields import FFElem

    gamma = FFElem(spec, coeffs)
    g = parse_germ(template, spec, symbols={"g": gamma})
    mr = is_minimally_ramified(g)
    ch = characterize_mr(g)
    resit = ch.witness.get("resit")
    i0 = ram_index(g, 0, TruncPolicy(trunc=g.q + 2))
    return {"gamma": gamma.to_json(), "order": g.q, "i0": i0, "mr": mr.value,
            "resit": None if resit is None else resit.to_json(), "characterize_mr": ch.value,
            "agree": mr.value == ch.value}


def cmd_classify(args):
    spec = field_of(args)
    template = args.germ or "g*z+z^2"
    gammas = list(spec.nonzero_elements())
    if args.sample is not None and args.sample < len(gammas):
        rng = random.Random(args.seed)
        picked = sorted(rng.sample(range(len(gammas)), args.sample))
        gammas = [gammas[i] for i in picked]
    jobs = [(spec.p, spec.k, spec.modulus, template, g.coeffs, args.q) for g in gammas]
    if args.jobs > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as ex:
            rows = list(ex.map(_classify_one, jobs))  # map keeps input order
    else:
        rows = [_classify_one(j) for j in jobs]
    code = EXIT_OK
    if not all(r["agree"] for r in rows):
        code = EXIT_VIOLATION
    elif any(r["mr"] is None for r in rows):
        code = EXIT_INDET
    summary = {"template": template, "count": len(rows),
               "mr_true": sum(1 for r in rows if r["mr"] is True),
               "disagreements": sum(1 for r in rows if not r["agree"])}
    return rows, {"summary": summary, "rows": rows}, code


def _is_padic(*texts):
    return any(t is not None and t.strip().startswith("padic:") for t in texts)


def _scalar(args, text, spec, mode):
    if _is_padic(text):
        return PadicTrunc.from_fraction(args.p, args.pprec, parse_padic(text, args.p))
    rf = parse_scalar(text, spec)
    return RationalExact(rf) if mode == "exact" else LaurentTrunc.from_ratfunc(rf, args.tprec)


def cmd_bound(args):
    spec = field_of(args)
    if not args.lam:
        raise UsageError("bound needs --lambda")
    mode = args.mode or "exact"
    lam = _scalar(args, args.lam, spec, mode)
    v0 = lam.val()
    if not isinstance(v0, int) or v0 != 0:
        raise UsageError("lambda must be a unit")
    q = mult_order(lam.residue())
    if args.q is not None and args.q != q:
        raise OrderMismatch(f"supplied q={args.q} but the residue of lambda has order {q}")
    rows, code = [], EXIT_OK
    for n in range(args.nmax + 1):
        try:
            b = bound_valuation(lam, q, n)
        except IndeterminateValuation:
            b, code = None, EXIT_INDET
        rows.append({"n": n, "period": q * args.p ** n, "bound_valuation": b})
    result = {"q": q, "backend": lam.backend, "rows": [{**r, "bound_valuation": _frac(r["bound_valuation"])}
                                                      for r in rows]}
    return rows, result, code


def _okpoly(args, spec, mode):
    if not args.map_text:
        raise UsageError("--map is required")
    warnings = []
    if args.mu is not None:
        warnings.append("mu is a single sampled value; verdicts need not hold for other parameters")
    if _is_padic(args.map_text, args.lam, args.mu):
        lam = parse_padic(args.lam, args.p) if args.lam else None
        mu = parse_padic(args.mu, args.p) if args.mu else None
        coeffs = parse_padic_map(args.map_text, args.p, lam, mu)
        return OKPoly.from_padic(coeffs, args.p, args.pprec), warnings
    lam = parse_scalar(args.lam, spec) if args.lam else None
    mu = parse_scalar(args.mu, spec) if args.mu else None
    coeffs = parse_map(args.map_text, spec, lam, mu)
    if mode == "exact":
        return OKPoly.from_ratfuncs(coeffs, spec), warnings
    return OKPoly.from_ratfuncs(coeffs, spec, "laurent", T=args.tprec), warnings


def cmd_cycles(args):
    spec = field_of(args)
    mode = args.mode or "exact"
    P, warnings = _okpoly(args, spec, mode)
    if args.q is not None and args.q != mult_order(P.reduce()[1]):
        raise OrderMismatch(f"supplied q={args.q} disagrees with the multiplier")
    policy = TruncPolicy(trunc=args.trunc, adaptive=args.trunc is None)
    rep = cycle_report(P, args.nmax, policy=policy, warnings=warnings, keep_iterates=args.dump_iterate)
    rows = []
    for lv in rep.levels:
        rows.append({"n": lv.n, "period": lv.period, "i_n": lv.i_n, "increment": lv.increment,
                     "bound_valuation": lv.bound, "new_mass": lv.new_mass, "positive_mass": lv.positive_mass,
                     "simplicity": lv.simplicity, "verdict": lv.verdict})
    result = rep.to_json()
    if args.dump_iterate:
        result["iterates"] = {str(m): [R.jsonable(v) for v in F.coeff_vals()] for m, F in rep.iterates.items()}
    code = EXIT_OK
    if any(v is False for lv in rep.levels for v in lv.checks.values()):
        code = EXIT_VIOLATION
    elif any(lv.verdict == "Indeterminate" for lv in rep.levels):
        code = EXIT_INDET
    head = [f"warning: {w}" for w in rep.warnings]
    return rows, result, code, head


def cmd_appendix(args):
    spec = field_of(args)
    mode = args.mode or "exact"
    Q, warnings = _okpoly(args, spec, mode)
    rows_, info = appendix_check(Q, args.nmax)
    rows = [{"n": r.n, "i_n": r.i_n, "expected": r.expected, "pass": r.passed,
             "roots_in_level0": r.roots_in_level0} for r in rows_]
    code = EXIT_OK
    if any(r["pass"] is False or r["roots_in_level0"] is False for r in rows):
        code = EXIT_VIOLATION
    elif any(r["pass"] is None for r in rows):
        code = EXIT_INDET
    return rows, {"info": info, "rows": [r.to_json() for r in rows_], "warnings": warnings}, code


def cmd_selftest(args):
    from .selftest import check_5, check_6, run_all, run_check, CHECKS

    results = []
    for i, fn in enumerate(CHECKS, 1):
        if args.only and i not in args.only:
            continue
        kw = {"seed": args.seed, "size": args.size} if fn in (check_5, check_6) else {}
        res = run_check(fn, **kw)
        if args.output == "pretty":
            print(res.line(), flush=True)
        results.append(res)
    rows = [r.to_row() for r in results]
    # timings vary run to run, so they stay out of the JSON document
    result = [{"criterion": r.number, "name": r.name, "pass": r.passed, "detail": r.detail} for r in results]
    code = EXIT_OK if all(r.passed for r in results) else EXIT_VIOLATION
    return rows, result, code, None


HANDLERS = {name: globals()[f"cmd_{name}"] for name in COMMANDS}


_TEXT_OPTS = {"--germ", "--elem", "--map", "--lambda", "--mu", "--modulus"}


def _glue(argv: list) -> list:
    """Attach expression values to their option so '-1*z+z^2' is not read as a flag."""
    out, i = [], 0
    while i < len(argv):
        tok = argv[i]
        if tok in _TEXT_OPTS and i + 1 < len(argv):
            out.append(f"{tok}={argv[i + 1]}")
            i += 2
            continue
        out.append(tok)
        i += 1
    return out


def main(argv=None) -> int:
    parser = build_parser()
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        args = parser.parse_args(_glue(argv))
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    config = make_config(args)
    try:
        out = HANDLERS[args.command](args)
    except (ParseError, UsageError, OrderMismatch) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (IndeterminateValuation, TruncationTooSmall) as exc:
        print(f"indeterminate: {exc}", file=sys.stderr)
        return EXIT_INDET
    except (RamcyclesError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    rows, result, code = out[:3]
    head = out[3] if len(out) > 3 else None
    if args.output == "json":
        print(R.dumps_json(R.envelope(args.command, config, result, __version__)))
    elif args.output == "tsv":
        print(R.dumps_tsv(args.command, rows, {"version": __version__, **config}))
    elif args.command != "selftest":
        print(R.dumps_pretty(args.command, rows, head))
    return code


if __name__ == "__main__":
    sys.exit(main())
