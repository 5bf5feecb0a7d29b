"""Command-line entry point.

    birdeg build psi --variant sug24 --out psi.json
    birdeg build phi6 | build h --n0 2 | build psi6 --variant toy:42
    birdeg build tower --base toy:42 --d 8
    birdeg degseq psi.json --max-n 3
    birdeg verify --suite all --trials 100 --seed 0
    birdeg profile --d 10 | profile --monomial M.json

Exit codes: 0 all checks pass, 1 verification failure, 2 usage or input
error, 3 guard trip in a required computation.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
import time

from . import constructions as cons
from . import dyndeg
from .errors import BirdegError, CertificateFailure, GuardExceeded
from .monomial import IntMatrix, to_projective
from .polyring import BlockShape, limits
from .projmap import (
    DegreeSequence,
    RationalMap,
    certify_inverse,
    compose,
    dumps,
    equal,
    iterate_degrees,
    map_from_dict,
    product,
)

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_GUARD = 0, 1, 2, 3


class UsageError(Exception):
    pass


# output -------------------------------------------------------------------------


def _table(headers, rows) -> str:
    cells = [[str(h) for h in headers]] + [[_fmt(c) for c in r] for r in rows]
    widths = [max(len(r[i]) for r in cells) for i in range(len(headers))]
    lines = ["  ".join(c.ljust(w) for c, w in zip(r, widths)).rstrip() for r in cells]
    lines.insert(1, "  ".join("-" * w for w in widths))
    return "\n".join(lines)


def _fmt(x) -> str:
    if isinstance(x, bool):
        return "pass" if x else "FAIL"
    if isinstance(x, float):
        return f"{x:.9g}"
    if x is None:
        return "-"
    return str(x)


def _emit(args, doc: dict, text: str):
    if args.format == "json":
        out = json.dumps(doc, indent=1, sort_keys=True, default=str) + "\n"
    else:
        out = text.rstrip() + "\n"
    if args.out and args.command != "build":
        with open(args.out, "w") as fh:
            fh.write(out)
    sys.stdout.write(out)


def _config(args) -> dict:
    return {k: v for k, v in vars(args).items() if k != "func"}


# build --------------------------------------------------------------------------


def _build(args):
    what = args.what
    if what == "psi":
        return cons.psi_variant(args.variant)
    if what == "psi6":
        return cons.big_psi(cons.psi_variant(args.variant))
    if what == "phi6":
        return cons.segre_slice_phi()
    if what == "h":
        return cons.step_map_h(args.n0)
    if what == "tower":
        base = cons.big_psi(cons.psi_variant(args.base))
        return cons.tower(base, args.d)
    raise UsageError(f"unknown construction {what!r}")


def cmd_build(args) -> int:
    if args.what == "tower" and args.d is None:
        raise UsageError("build tower needs --d")
    if args.what == "tower" and args.d < 6:
        raise UsageError("the tower starts from Ψ on P^6; use --d >= 6")
    t0 = time.perf_counter()
    c = _build(args)
    deg = c.degree()
    doc = c.to_dict()
    elapsed = round(time.perf_counter() - t0, 3)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(dumps(doc))
    rows = [
        ("name", c.name),
        ("source", str(c.source)),
        ("target", str(c.target)),
        ("degree", deg if deg is not None else "not expanded (too large)"),
        ("inverse expanded", "yes" if c.inverse.is_expanded else "no (kept as factors)"),
        ("certificate", c.certificate.passed),
        ("method", c.certificate.method),
        ("pointwise check", c.certificate.pointwise),
    ]
    if c.map.is_expanded:
        rows.append(("max terms per component", max(c.map.term_counts())))
    if "degree_bound" in c.notes:
        rows.append(("degree bound", c.notes["degree_bound"]))
    if args.variant == "sug24" and args.what == "psi" and deg is not None:
        lo, hi = dyndeg.LAMBDA_RANGE
        rows.append((f"degree in [{lo}, {hi}]", lo <= deg <= hi))
    if args.out:
        rows.append(("written to", args.out))
    summary = {"command": "build", "config": _config(args), "construction": c.name, "degree": deg,
               "certificate": c.certificate.to_dict(), "out": args.out, "elapsed_seconds": elapsed}
    _emit(args, summary, _table(("field", "value"), rows))
    if not c.certificate.passed:
        return EXIT_FAIL
    if deg is None:
        print("guard tripped: the map is too large to expand under the current ceilings", file=sys.stderr)
        return EXIT_GUARD
    return EXIT_OK


# degseq -------------------------------------------------------------------------


def _load_map(path):
    with open(path) as fh:
        doc = json.load(fh)
    interval = None
    if "entries" in doc and "n" in doc:
        return to_projective(IntMatrix.from_dict(doc)), None
    if "map" in doc:
        if doc.get("notes", {}).get("variant") == "sug24" and doc.get("name") == "psi":
            interval = dyndeg.LAMBDA_RANGE
        doc = doc["map"]
    return map_from_dict(doc), interval


def cmd_degseq(args) -> int:
    try:
        f, interval = _load_map(args.map)
    except (OSError, ValueError, KeyError) as exc:
        raise UsageError(f"cannot read {args.map}: {exc}") from exc
    if args.interval:
        interval = tuple(args.interval)
    if f.source != f.target:
        raise UsageError("degseq needs a self-map")
    warning = None
    try:
        seq = iterate_degrees(f, args.max_n)
    except GuardExceeded as exc:
        seq = exc.partial or DegreeSequence()
        warning = str(exc)
    rows = [(n, d, r, u) for n, d, r, u in zip(seq.ns, seq.degrees, seq.roots, seq.running_upper_bounds)]
    text = _table(("n", "deg", "deg^(1/n)", "upper bound"), rows)
    in_interval = None
    if interval and seq.entries:
        in_interval = interval[0] <= seq.degrees[0] <= interval[1]
        text += f"\n\ndeg(f) = {seq.degrees[0]} in [{interval[0]}, {interval[1]}]: {_fmt(in_interval)}"
    if warning:
        text += f"\n\nWARNING guard tripped, partial results: {warning}"
    doc = {"command": "degseq", "config": _config(args), "sequence": seq.to_dict(),
           "cited_interval": list(interval) if interval else None, "in_interval": in_interval,
           "warning": warning}
    _emit(args, doc, text)
    return EXIT_OK


# verify -------------------------------------------------------------------------


def _suite_identities(args):
    rng = random.Random(args.seed)
    rows = []
    fails = {"duality": 0, "product": 0, "conjugacy": 0}
    worst = {"duality": 0.0, "product": 0.0, "conjugacy": 0.0}
    for _ in range(args.trials):
        M = dyndeg.random_unimodular(rng.randint(2, 5), rng)
        r = dyndeg.check_duality(M, args.tol)
        fails["duality"] += not r.passed
        worst["duality"] = max(worst["duality"], max(x[3] for x in r.rows))
        M1 = dyndeg.random_unimodular(rng.randint(1, 4), rng)
        M2 = dyndeg.random_unimodular(rng.randint(1, 4), rng)
        r = dyndeg.check_product(M1, M2, args.tol)
        fails["product"] += not r.passed
        worst["product"] = max(worst["product"], max(x[3] for x in r.rows))
        n = rng.randint(2, 4)
        r = dyndeg.check_conjugacy(dyndeg.random_unimodular(n, rng), dyndeg.random_unimodular(n, rng), args.tol)
        fails["conjugacy"] += not r.passed
        worst["conjugacy"] = max(worst["conjugacy"], max(x[3] for x in r.rows))
    for name in fails:
        rows.append((f"{name} x{args.trials}", fails[name] == 0,
                     f"{fails[name]} failures, worst relative difference {worst[name]:.3g}"))
    return rows


def _suite_root(args):
    cert = dyndeg.root_a()
    ok = abs(cert.value - dyndeg.PRINTED_A) <= 5e-4 and cert.sign_change() and cert.width <= 1e-6
    return [("root a", ok, f"a = {cert.value:.7f}, width {cert.width:.2g}, bracket [{cert.lo}, {cert.hi}]"),
            ("lambda interval above a", dyndeg.lambda_exceeds_a(), "[291, 669] vs certified bracket")]


def _suite_involutions(args):
    rows = []
    for d in (2, 3):
        h = cons.cremona(d)
        rows.append((f"h_-I o h_-I = id on P{d}", compose(h, h).is_identity, ""))
    seq = iterate_degrees(cons.cremona(3), 6).degrees
    rows.append(("degrees of h_-I on P3", seq == [3, 1, 3, 1, 3, 1], str(seq)))
    phi = cons.segre_slice_phi()
    hh = product(cons.cremona(3), cons.cremona(3))
    conj = cons.conjugate(hh, phi)
    sq = compose(conj, conj)
    rows.append(("conjugate of h_-I x h_-I squares to id", equal(sq, RationalMap.identity(BlockShape((6,)))),
                 f"degree {conj.degree}"))
    base = cons.NamedConstruction("h_-I", cons.cremona(3), cons.cremona(3),
                                  certify_inverse(cons.cremona(3), cons.cremona(3)))
    t = cons.tower(base, 5)
    sq = compose(t.map, t.map)
    rows.append(("tower(h_-I, 5) is an involution", t.certificate.passed and sq.is_identity,
                 f"degree {t.degree()}"))
    return rows


def _suite_constructions(args):
    rows = []
    phi = cons.segre_slice_phi()
    rows.append(("Phi certificate", phi.certificate.passed, phi.certificate.method))
    for n0 in range(1, 7):
        h = cons.step_map_h(n0)
        rows.append((f"h (n0={n0}) certificate", h.certificate.passed, ""))
    toy = f"toy:{args.seed}"
    psi = cons.psi_variant(toy)
    rows.append((f"psi ({toy}) certificate", psi.certificate.passed, f"degree {psi.degree()}"))
    P = cons.big_psi(psi)
    rows.append((f"Psi ({toy}) certificate", P.certificate.passed, f"degree {P.degree()}"))
    T = cons.tower_step(P)
    rows.append((f"tower step to P7 ({toy})", T.certificate.passed, f"degree {T.degree()}"))
    for variant in ("bdjk", "sug24"):
        c = cons.psi_variant(variant)
        deg = c.degree()
        detail = f"degree {deg} (bound {c.notes['degree_bound']})"
        ok = c.certificate.passed and deg is not None and deg <= c.notes["degree_bound"]
        if variant == "sug24":
            ok = ok and 291 <= deg <= 669 and max(c.map.term_counts()) <= 256
            detail += f", max terms {max(c.map.term_counts())}"
        rows.append((f"{c.name} ({variant})", ok, detail))
    return rows


SUITES = {
    "identities": _suite_identities,
    "root": _suite_root,
    "involutions": _suite_involutions,
    "constructions": _suite_constructions,
}


def cmd_verify(args) -> int:
    names = list(SUITES) if args.suite == "all" else [args.suite]
    rows = []
    for name in names:
        for check, ok, detail in SUITES[name](args):
            rows.append((name, check, ok, detail))
    passed = all(r[2] for r in rows)
    text = _table(("suite", "check", "result", "detail"), rows)
    text += f"\n\n{'all checks pass' if passed else 'FAILURES present'}"
    doc = {"command": "verify", "config": _config(args), "passed": passed,
           "checks": [{"suite": s, "check": c, "passed": ok, "detail": d} for s, c, ok, d in rows]}
    _emit(args, doc, text)
    return EXIT_OK if passed else EXIT_FAIL


# profile ------------------------------------------------------------------------


def cmd_profile(args) -> int:
    if args.monomial:
        try:
            with open(args.monomial) as fh:
                M = IntMatrix.from_dict(json.load(fh))
        except (OSError, ValueError, KeyError) as exc:
            raise UsageError(f"cannot read {args.monomial}: {exc}") from exc
        from .monomial import monomial_dyndeg_profile

        prof = monomial_dyndeg_profile(M)
    else:
        if args.d is None:
            raise UsageError("profile needs --d or --monomial")
        if args.d < 6:
            raise UsageError("tower profiles need d >= 6")
        prof = dyndeg.tower_profile(args.d)
    rows = []
    for p, e in enumerate(prof.entries):
        lo, hi = e.bounds
        rows.append((p, e.label(), lo, hi, e.kind))
    text = _table(("p", "lambda_p", "lower", "upper", "provenance"), rows)
    checks = {}
    if not args.monomial:
        checks["palindromic"] = prof.symbols() == prof.reversed().symbols()
        checks["lambda above a"] = dyndeg.lambda_exceeds_a()
        try:
            sep = dyndeg.separation_from_powers_of_a(prof)
            checks["entries separated from powers of a"] = True
        except ValueError:
            sep = []
            checks["entries separated from powers of a"] = False
        text += "\n\n" + "\n".join(f"{k}: {_fmt(v)}" for k, v in checks.items())
        text += "\n" + "\n".join(f"  p={p}: a^{k} < {s} < a^{k + 1}" for p, s, k in sep)
        text += "\ntranscendence of λ is cited, not verified"
    doc = {"command": "profile", "config": _config(args), "profile": prof.to_dict(), "checks": checks}
    _emit(args, doc, text)
    return EXIT_OK if all(checks.values()) else EXIT_FAIL


# parser -------------------------------------------------------------------------


def _positive(kind):
    def conv(s):
        v = kind(float(s)) if kind is int else kind(s)
        if v <= 0:
            raise argparse.ArgumentTypeError("must be positive")
        return v

    return conv


def _tolerance(s):
    v = float(s)
    if not 0 < v < 1:
        raise argparse.ArgumentTypeError("tolerance must lie in (0, 1)")
    return v


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--max-terms", type=_positive(int), default=None, help="term ceiling per polynomial")
    common.add_argument("--max-degree", type=_positive(int), default=None, help="total-degree ceiling")
    common.add_argument("--format", choices=("text", "json"), default="text")
    common.add_argument("--out", default=None, help="output path")

    parser = argparse.ArgumentParser(prog="birdeg", description=__doc__.split("\n\n")[0])
    sub = parser.add_subparsers(dest="command", required=True)

    b = sub.add_parser("build", parents=[common], help="build a named construction")
    b.add_argument("what", choices=("psi", "psi6", "phi6", "h", "tower"))
    b.add_argument("--variant", default="sug24", help="sug24 | bdjk | toy:<seed>")
    b.add_argument("--base", default="toy:42", help="variant whose Ψ starts the tower")
    b.add_argument("--d", type=int, default=None, help="tower dimension")
    b.add_argument("--n0", type=_positive(int), default=1)
    b.set_defaults(func=cmd_build)

    s = sub.add_parser("degseq", parents=[common], help="degree sequence of a map file")
    s.add_argument("map", help="map, construction or matrix document")
    s.add_argument("--max-n", type=_positive(int), default=5)
    s.add_argument("--interval", type=int, nargs=2, metavar=("LO", "HI"), help="cited interval for deg(f)")
    s.set_defaults(func=cmd_degseq)

    v = sub.add_parser("verify", parents=[common], help="run verification suites")
    v.add_argument("--suite", choices=("identities", "root", "constructions", "involutions", "all"), default="all")
    v.add_argument("--trials", type=_positive(int), default=100)
    v.add_argument("--seed", type=int, default=42)
    v.add_argument("--tol", type=_tolerance, default=1e-6)
    v.set_defaults(func=cmd_verify)

    p = sub.add_parser("profile", parents=[common], help="dynamical-degree profile")
    p.add_argument("--d", type=int, default=None)
    p.add_argument("--monomial", default=None, help="matrix document")
    p.set_defaults(func=cmd_profile)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        with limits(args.max_terms, args.max_degree):
            return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except GuardExceeded as exc:
        print(f"guard tripped: {exc}", file=sys.stderr)
        return EXIT_GUARD
    except CertificateFailure as exc:
        print(f"certificate failure: {exc}", file=sys.stderr)
        return EXIT_FAIL
    except (ValueError, BirdegError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
