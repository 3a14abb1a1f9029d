"""Command-line interface.

Exit codes: 0 success, 1 selftest failure, 2 usage or precondition error,
3 budget exceeded (partial results are still printed), 4 internal
inconsistency.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import math
import sys
from fractions import Fraction

from syzlab import ENGINE_VERSION
from syzlab.linalg import DEFAULT_PRIME, QQ, FieldChoice, ResourceLimitError
from syzlab.monomials import RingContext

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_USAGE = 2
EXIT_BUDGET = 3
EXIT_INTERNAL = 4

log = logging.getLogger("syzlab")


class UsageError(Exception):
    pass


class InternalError(Exception):
    pass


def _primes(text: str) -> list:
    try:
        primes = [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad prime list {text!r}")
    if not primes:
        raise argparse.ArgumentTypeError("empty prime list")
    return primes


def _fraction(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}")


def _fractions(text: str) -> list:
    return [_fraction(x) for x in text.split(",") if x.strip()]


def _floats(text: str) -> list:
    try:
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad number list {text!r}")


def _global_flags(parser: argparse.ArgumentParser, suppress: bool):
    d = (lambda v: argparse.SUPPRESS) if suppress else (lambda v: v)
    g = parser.add_argument_group("global options")
    g.add_argument("--field", choices=("p", "Q"), default=d("p"), help="prime field (default) or rationals")
    g.add_argument("--primes", type=_primes, default=d([DEFAULT_PRIME]), help="comma-separated primes")
    g.add_argument("--cache-dir", default=d(None), help="cell cache directory (env SYZLAB_CACHE)")
    g.add_argument("--budget", type=int, default=d(None), help="max estimated work per cell")
    g.add_argument("--format", choices=("diagram", "csv", "json"), default=d("diagram"))
    g.add_argument("--seed", type=int, default=d(None))
    g.add_argument("--jobs", type=int, default=d(1))
    g.add_argument("-v", "--verbose", action="store_true", default=d(False))


def _ring_args(p, q: bool = False, pq: bool = False):
    p.add_argument("-n", type=int, required=True, help="dimension of P^n")
    p.add_argument("-b", type=int, default=0, help="twist")
    p.add_argument("-d", type=int, required=True, help="Veronese degree")
    if pq:
        p.add_argument("-p", type=int, required=True)
    if q or pq:
        p.add_argument("-q", type=int, required=True)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="syzlab", description="Koszul cohomology of Veronese embeddings")
    parser.add_argument("--version", action="version", version=f"syzlab engine {ENGINE_VERSION}")
    _global_flags(parser, suppress=False)
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, help_):
        sp = sub.add_parser(name, help=help_)
        _global_flags(sp, suppress=True)
        return sp

    def nested(subs, name):
        sp = subs.add_parser(name)
        _global_flags(sp, suppress=True)
        return sp

    sp = add("kpq", "dimension of a single K_{p,q}(n, b; d)")
    _ring_args(sp, pq=True)

    sp = add("table", "full Betti table of (n, b, d)")
    _ring_args(sp)
    sp.add_argument("--watch", action="store_true", help="compare with the predicted support")

    sp = add("certify", "build and verify a monomial certificate")
    _ring_args(sp, q=True)
    sp.add_argument("--extra", type=int, default=0, help="extra annihilators in the wedge")
    sp.add_argument("--target", help="target monomial such as x0^2*x1^3 (default: the standard target)")
    sp.add_argument("--cross-check", action="store_true", help="confirm with exact linear algebra over Q")
    sp.add_argument("-o", "--output", help="write the certificate JSON here")

    sp = add("predict", "support prediction with citations")
    psub = sp.add_subparsers(dest="kind", required=True)
    pv = nested(psub, "veronese")
    _ring_args(pv)
    pc = nested(psub, "curve")
    pc.add_argument("-g", type=int, required=True)
    pc.add_argument("--gon", type=int, required=True)
    pc.add_argument("-d", type=int, required=True)
    pc.add_argument("--mode", choices=("O", "K"), default="O")
    pe = nested(psub, "easy")
    pe.add_argument("-n", type=int, required=True)
    pe.add_argument("--r-B", type=int, required=True)
    pe.add_argument("--r-KminusB", type=int, required=True)
    pe.add_argument("--r-d", type=int, required=True)

    sp = add("range", "closed-form ranges and thresholds")
    rsub = sp.add_subparsers(dest="kind", required=True)
    rv = nested(rsub, "veronese")
    _ring_args(rv, q=True)
    rc = nested(rsub, "cm")
    rc.add_argument("--degX", type=int, required=True)
    rc.add_argument("-n", type=int, required=True)
    rc.add_argument("-c", type=int, required=True, help="regularity of O_X")
    rc.add_argument("-b", type=int, default=0)
    rc.add_argument("-d", type=int, required=True)
    rc.add_argument("-q", type=int, required=True)
    rc.add_argument("--r-d", type=int, required=True, help="h^0(O_X(d))")
    rn = nested(rsub, "np")
    rn.add_argument("--family", choices=("curve", "veronese", "adjoint", "abelian"), required=True)
    rn.add_argument("-k", type=int, required=True)
    rn.add_argument("-d", type=int, required=True)
    rn.add_argument("-g", type=int)
    rn.add_argument("-n", type=int)
    rw = nested(rsub, "window")
    rw.add_argument("-n", type=int, required=True)
    rw.add_argument("-q", type=int, required=True)
    rw.add_argument("-d", type=int, required=True)
    rw.add_argument("--r-d", type=int, required=True)
    rw.add_argument("--C1", type=_fraction, required=True)
    rw.add_argument("--C2", type=_fraction, required=True)

    sp = add("curve", "curve formulas")
    csub = sp.add_subparsers(dest="kind", required=True)
    ck = nested(csub, "kp1")
    ck.add_argument("-g", type=int, required=True)
    ck.add_argument("-d", type=int, required=True)
    ck.add_argument("-p", type=int, help="omit for the whole row")
    cg = nested(csub, "gauss")
    cg.add_argument("-g", type=int, required=True)
    cg.add_argument("-d", type=int, required=True)
    cg.add_argument("-a", type=float, required=True)
    cs = nested(csub, "support")
    cs.add_argument("-g", type=int, required=True)
    cs.add_argument("--gon", type=int, required=True)
    cs.add_argument("-d", type=int, required=True)
    cs.add_argument("--mode", choices=("O", "K"), default="O")
    cd = nested(csub, "dual")
    cd.add_argument("-g", type=int, required=True)
    cd.add_argument("-b", type=int, required=True)
    cd.add_argument("-d", type=int, required=True)
    cd.add_argument("-p", type=int, required=True)

    sp = add("bs", "two-row Boij-Soderberg tools")
    bsub = sp.add_subparsers(dest="kind", required=True)
    bp = nested(bsub, "pure")
    bp.add_argument("-i", type=int, required=True)
    bp.add_argument("-r", type=int, required=True)
    bd = nested(bsub, "decompose")
    bd.add_argument("input", help="table CSV (p,q,value,...); '-' for stdin")
    bd.add_argument("-r", type=int, help="table length (default: last column)")
    bs_ = nested(bsub, "synthesize")
    bs_.add_argument("-r", type=int, required=True)
    bs_.add_argument("-x", type=_fractions, required=True, help="x_1,...,x_r (or x_0,...,x_{r+1})")
    bm = nested(bsub, "sample")
    bm.add_argument("-r", type=int, required=True)
    bm.add_argument("-N", type=int, required=True)
    bm.add_argument("--dist", choices=("uniform", "exponential", "beta"), default="uniform")
    bm.add_argument("--grid", type=_floats, default=None, help="comma-separated a values")

    sp = add("oracle", "cross-check one cell against the dense rational oracle")
    _ring_args(sp, pq=True)
    sp.add_argument("--mode", choices=("reduced", "full"), default="reduced")

    sp = add("selftest", "run the acceptance suite")
    sp.add_argument("--only", type=int, action="append", help="run only this check (repeatable)")
    return parser


def _field(args) -> FieldChoice:
    if args.field == "Q":
        return QQ
    return FieldChoice(args.primes[0])


def _engine_kw(args) -> dict:
    from syzlab.koszul import DEFAULT_BUDGET

    return {"budget": args.budget if args.budget is not None else DEFAULT_BUDGET}


def _cache(args):
    from syzlab.cache import Cache, default_dir

    root = args.cache_dir or default_dir()
    return Cache(root) if root else None


def _emit(out, text: str):
    out.write(text if text.endswith("\n") else text + "\n")


def cmd_kpq(args, out):
    from syzlab.koszul import kpq_dim, kpq_multi_prime

    ctx = RingContext(args.n, args.d, args.b)
    if args.field == "p" and len(args.primes) > 1:
        res = kpq_multi_prime(ctx, args.p, args.q, args.primes, **_engine_kw(args))
        value, field_tag, per_prime = res.value, "multi-prime", {f"GF({p})": v for p, v in res.values.items()}
    else:
        f = _field(args)
        value, field_tag, per_prime = kpq_dim(ctx, args.p, args.q, f, **_engine_kw(args)), f.tag, None
    if args.format == "json":
        payload = {"n": args.n, "b": args.b, "d": args.d, "p": args.p, "q": args.q, "value": value, "field": field_tag}
        if per_prime:
            payload["per_prime"] = per_prime
        _emit(out, json.dumps(payload, sort_keys=True))
    elif args.format == "csv":
        _emit(out, f"p,q,value,field,method\n{args.p},{args.q},{value},{field_tag},engine")
    else:
        _emit(out, str(value))
        if per_prime and len(set(per_prime.values())) > 1:
            _emit(out, f"warning: primes disagree {per_prime}; reporting the minimum")
    return EXIT_OK


def _render_table(t, fmt, annotate=None) -> str:
    if fmt == "csv":
        return t.to_csv()
    if fmt == "json":
        return t.to_json()
    return t.render(annotate)


def cmd_table(args, out):
    from syzlab.koszul import BudgetExceeded, betti_table, hilbert_check
    from syzlab.predictors import conjecture_watch

    ctx = RingContext(args.n, args.d, args.b)
    f = _field(args)
    try:
        t = betti_table(ctx, f, jobs=args.jobs, cache=_cache(args), **_engine_kw(args))
    except BudgetExceeded as exc:
        if exc.partial is not None:
            _emit(out, _render_table(exc.partial, args.format))
        raise
    rep = hilbert_check(t)
    _emit(out, _render_table(t, args.format))
    if not rep.passed:
        raise InternalError(f"Hilbert identity fails on the engine table: {rep.mismatches[:5]}")
    if args.watch:
        if args.b < 0:
            raise UsageError("--watch needs b >= 0")
        _emit(out, conjecture_watch(t).render())
    return EXIT_OK


def cmd_certify(args, out):
    from syzlab.certificates import build_certificate, certify, verify_certificate
    from syzlab.monomials import parse_monomial

    if args.target:
        ctx = RingContext(args.n, args.d, args.b)
        cert = build_certificate(parse_monomial(args.target, args.n), args.extra, ctx, args.q)
        verify_certificate(cert, cross_check=args.cross_check)
    else:
        cert = certify(args.n, args.b, args.d, args.q, extra=args.extra, cross_check=args.cross_check)
    text = cert.to_json()
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text)
    if args.format == "json" or not args.output:
        _emit(out, text)
    else:
        _emit(out, f"p = {cert.p}, valid = {cert.valid}, written to {args.output}")
    la = cert.linear_algebra
    if la and la.get("ran") and (not la["closed"] or la["in_image"]) and cert.valid:
        raise InternalError(f"linear algebra contradicts the combinatorial verdict: {la}")
    return EXIT_OK


def _emit_prediction(pred, fmt, out):
    if fmt == "json":
        _emit(out, json.dumps(pred.to_dict(), indent=2, sort_keys=True))
    elif fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["p", "q", "verdict", "citation", "conjectural"])
        for c in pred.to_dict()["cells"]:
            w.writerow([c["p"], c["q"], c["verdict"], c["citation"], c["conjectural"]])
        _emit(out, buf.getvalue())
    else:
        _emit(out, pred.render())


def cmd_predict(args, out):
    from syzlab import predictors as pr

    if args.kind == "veronese":
        pred = pr.veronese_support(args.n, args.b, args.d)
    elif args.kind == "curve":
        pred = pr.curve_support(args.g, args.gon, args.d, args.mode)
    else:
        pred = pr.easy_support(args.n, args.r_B, args.r_KminusB, args.r_d)
    _emit_prediction(pred, args.format, out)
    return EXIT_OK


def _emit_pairs(out, fmt, pairs: dict):
    if fmt == "json":
        _emit(out, json.dumps(pairs, sort_keys=True, default=str))
    elif fmt == "csv":
        keys = list(pairs)
        _emit(out, ",".join(keys) + "\n" + ",".join(str(pairs[k]) for k in keys))
    else:
        _emit(out, "  ".join(f"{k} = {v}" for k, v in pairs.items()))


def cmd_range(args, out):
    from syzlab import predictors as pr

    if args.kind == "veronese":
        lo, hi = pr.veronese_range(args.n, args.b, args.d, args.q)
        _emit_pairs(out, args.format, {"p_min": lo, "p_max": hi})
    elif args.kind == "cm":
        lo, hi = pr.cm_range(args.degX, args.n, args.c, args.b, args.d, args.q, args.r_d)
        _emit_pairs(out, args.format, {"p_min": lo, "p_max": hi})
    elif args.kind == "np":
        params = {"d": args.d}
        if args.family == "curve":
            if args.g is None:
                raise UsageError("family curve needs -g")
            params["g"] = args.g
        else:
            if args.n is None:
                raise UsageError(f"family {args.family} needs -n")
            params["n"] = args.n
        status = pr.np_thresholds(args.family, params, args.k)
        _emit_pairs(out, args.format, {"family": args.family, "k": args.k, "status": status.value})
    else:
        w = pr.asymptotic_window(args.n, args.q, args.r_d, args.d, args.C1, args.C2)
        _emit_pairs(out, args.format, {"p_min": w.lo, "p_max": w.hi, "empty": w.empty})
    return EXIT_OK


def cmd_curve(args, out):
    from syzlab import predictors as pr

    if args.kind == "kp1":
        ps = [args.p] if args.p is not None else list(range(1, args.d - 2 * args.g + 1))
        rows = [(p, pr.curve_kp1(args.g, args.d, p)) for p in ps]
        if args.format == "json":
            _emit(out, json.dumps({"g": args.g, "d": args.d, "k_p1": {str(p): v for p, v in rows}}, sort_keys=True))
        elif args.format == "csv":
            _emit(out, "p,value\n" + "\n".join(f"{p},{v}" for p, v in rows))
        else:
            _emit(out, "\n".join(f"k_{p},1 = {v}" for p, v in rows))
    elif args.kind == "gauss":
        value = pr.curve_gaussian_normalized(args.g, args.d, args.a)
        _emit_pairs(
            out,
            args.format,
            {
                "p": pr.gaussian_index(args.d - args.g, args.a),
                "normalized": f"{value:.12g}",
                "limit": f"{math.exp(-args.a ** 2 / 2):.12g}",
            },
        )
    elif args.kind == "support":
        _emit_prediction(pr.curve_support(args.g, args.gon, args.d, args.mode), args.format, out)
    else:
        p2, b2 = pr.curve_duality_pair(args.g, args.b, args.d, args.p)
        _emit_pairs(out, args.format, {"p_dual": p2, "b_dual": b2})
    return EXIT_OK


def _read_input(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    with open(path) as fh:
        return fh.read()


def cmd_bs(args, out):
    from syzlab import boij_soderberg as bs
    from syzlab.koszul import hilbert_check
    from syzlab.tables import BettiTable

    if args.kind == "pure":
        t = bs.pure_table(args.i, args.r).to_table()
        _emit(out, _render_table(t, args.format))
    elif args.kind == "synthesize":
        t = bs.synthesize(args.x, args.r)
        if not hilbert_check(t).passed:
            raise InternalError("synthesized table fails the Herzog-Kuhl divisibility check")
        _emit(out, _render_table(t, args.format))
    elif args.kind == "decompose":
        t = BettiTable.from_csv(_read_input(args.input))
        dec = bs.decompose(t, args.r)
        if bs.synthesize(dec.coefficients, dec.r) != t:
            raise InternalError("decomposition does not reproduce the table")
        if args.format == "json":
            _emit(out, json.dumps({str(i): str(v) for i, v in sorted(dec.coefficients.items())}, sort_keys=True))
        else:
            _emit(out, dec.to_csv())
    else:
        if args.seed is None:
            raise UsageError("bs sample needs --seed")
        grid = args.grid if args.grid is not None else bs.DEFAULT_GRID
        st = bs.sample_profiles(args.r, args.N, args.seed, args.dist, grid)
        if args.format == "json":
            _emit(out, json.dumps(st.summary(), sort_keys=True))
        else:
            _emit(out, st.to_csv())
    return EXIT_OK


def cmd_oracle(args, out):
    from syzlab.koszul import kpq_dim
    from syzlab.oracle import OracleSizeError, brute_kpq

    ctx = RingContext(args.n, args.d, args.b)
    try:
        brute = brute_kpq(ctx, args.p, args.q, mode=args.mode)
    except OracleSizeError as exc:
        raise UsageError(f"too large for the oracle: {exc}")
    engine = kpq_dim(ctx, args.p, args.q, QQ, **_engine_kw(args))
    _emit_pairs(out, args.format, {"oracle": brute, "engine": engine, "agree": brute == engine})
    if brute != engine:
        raise InternalError(f"engine {engine} != oracle {brute}")
    return EXIT_OK


def cmd_selftest(args, out):
    from syzlab import acceptance

    if args.only:
        results = []
        for num in args.only:
            res = acceptance.run_check(num)
            _emit(out, res.line())
            results.append(res)
    else:
        results = acceptance.run_all(out)
    failed = [r.number for r in results if not r.passed]
    _emit(out, f"{len(results) - len(failed)}/{len(results)} passed" + (f"; failed: {failed}" if failed else ""))
    return EXIT_FAIL if failed else EXIT_OK


COMMANDS = {
    "kpq": cmd_kpq,
    "table": cmd_table,
    "certify": cmd_certify,
    "predict": cmd_predict,
    "range": cmd_range,
    "curve": cmd_curve,
    "bs": cmd_bs,
    "oracle": cmd_oracle,
    "selftest": cmd_selftest,
}


def run(argv=None, out=None, err=None) -> int:
    from syzlab.certificates import CertificateError
    from syzlab.koszul import BudgetExceeded
    from syzlab.predictors import PredictionError

    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else EXIT_OK
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, stream=err)
    try:
        return COMMANDS[args.command](args, out)
    except (BudgetExceeded, ResourceLimitError) as exc:
        print(f"budget exceeded: {exc}", file=err)
        if isinstance(exc, BudgetExceeded) and exc.partial is not None:
            print("partial result printed above; missing cells are marked '?'", file=err)
        return EXIT_BUDGET
    except InternalError as exc:
        print(f"internal inconsistency: {exc}", file=err)
        return EXIT_INTERNAL
    except ArithmeticError as exc:
        print(f"internal inconsistency: {exc}", file=err)
        return EXIT_INTERNAL
    except (UsageError, PredictionError, CertificateError, ValueError) as exc:
        print(f"error: {exc}", file=err)
        return EXIT_USAGE


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
