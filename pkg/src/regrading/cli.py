"""Command-line surface: validation, single computations, and campaigns.

Exit status: 0 on success, 1 when a verification check fails, 2 on bad
input.  REGRADING_CAP overrides the default resolution cap.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from .functors import (
    adjunction_witness,
    coinduction,
    decomposition_iso,
    pullback,
    pushforward,
    rank1_regrade_resolution,
    LazyGradedModule,
)
from .harness import (
    DocumentError,
    _lemma_window,
    parse_and_validate,
    run_campaign,
)
from .homology import (
    DEFAULT_CAP,
    ext_table,
    graded_injective_dimension,
    graded_injectives,
    minimal_resolution,
    simple_module,
    verify_acyclicity,
    verify_inequality,
)
from .pid import verify_sharpness
from .reporting import VerificationReport


def _default_cap() -> int:
    env = os.environ.get("REGRADING_CAP")
    if env:
        try:
            return int(env)
        except ValueError:
            print(f"ignoring malformed REGRADING_CAP={env!r}", file=sys.stderr)
    return DEFAULT_CAP


def _load(path: str):
    try:
        with open(path) as fh:
            doc = json.load(fh)
    except FileNotFoundError:
        raise DocumentError("document", path, "file not found")
    except json.JSONDecodeError as exc:
        raise DocumentError("document", path, f"line {exc.lineno}, column {exc.colno}: {exc.msg}")
    return parse_and_validate(doc)


def _print_report(report: VerificationReport) -> bool:
    for c in report.checks:
        print(f"{c.outcome.upper():12s} {report.title}: {c.name}"
              + (f"  [{c.detail}]" if c.detail else ""))
    return report.passed


def _print_reports(reports) -> int:
    ok = True
    for r in reports:
        ok = _print_report(r) and ok
    print("RESULT:", "pass" if ok else "FAIL")
    return 0 if ok else 1


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="regrading",
        description="exact verification of graded-module regrading identities")
    sub = parser.add_subparsers(dest="command", required=True)

    def capped(p):
        p.add_argument("--cap", type=int, default=_default_cap(),
                       help="resolution length bound (env REGRADING_CAP)")
        return p

    p = sub.add_parser("validate", help="parse a document and validate every object")
    p.add_argument("file")

    p = capped(sub.add_parser("resolve", help="minimal projective resolution of a module"))
    p.add_argument("file")
    p.add_argument("--module", required=True)
    p.add_argument("--json", dest="json_out")

    p = capped(sub.add_parser("ext", help="graded ext dimension between two modules"))
    p.add_argument("file")
    p.add_argument("--module", required=True)
    p.add_argument("--target", required=True)
    p.add_argument("--degree", type=int, default=1)

    p = capped(sub.add_parser("injdim", help="graded injective dimension of a module"))
    p.add_argument("file")
    p.add_argument("--module", required=True)

    p = sub.add_parser("regrade", help="push, coinduce, or pull a module along a morphism")
    p.add_argument("file")
    p.add_argument("--module", required=True)
    p.add_argument("--morphism", required=True)
    p.add_argument("--mode", choices=["pushforward", "coinduction", "pullback"],
                   default="pushforward")
    p.add_argument("--algebra", help="domain algebra (pullback only)")

    p = capped(sub.add_parser("verify-inequality",
                              help="injective-dimension bounds under regrading"))
    p.add_argument("file")
    p.add_argument("--module", required=True)
    p.add_argument("--morphism", required=True)

    p = sub.add_parser("verify-adjunction", help="triangle identities and hom bijections")
    p.add_argument("file")
    p.add_argument("--module", required=True)
    p.add_argument("--comodule", required=True)
    p.add_argument("--morphism", required=True)

    p = sub.add_parser("verify-lemma", help="kernel-shift decomposition of pullback(pushforward)")
    p.add_argument("file")
    p.add_argument("--module", required=True)
    p.add_argument("--morphism", required=True)
    p.add_argument("--window", type=int)

    p = sub.add_parser("verify-resolution",
                       help="windowed two-term resolution for rank-one kernels")
    p.add_argument("file")
    p.add_argument("--module", required=True)
    p.add_argument("--morphism", required=True)
    p.add_argument("--algebra", required=True, help="domain algebra name")
    p.add_argument("--window", type=int, default=4)

    p = capped(sub.add_parser("verify-acyclicity",
                              help="regraded ext vanishing against regraded injectives"))
    p.add_argument("file")
    p.add_argument("--algebra", required=True)
    p.add_argument("--morphism", required=True)

    sub.add_parser("demo-pid", help="sharpness of the bounds over the one-variable polynomial ring")

    p = capped(sub.add_parser("campaign", help="run every job in a document"))
    p.add_argument("file")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--json", dest="json_out")
    p.add_argument("--timings", action="store_true",
                   help="embed wall-clock timings (breaks byte-for-byte reproducibility)")

    args = parser.parse_args(argv)

    try:
        return _run(args)
    except DocumentError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def _run(args) -> int:
    cmd = args.command

    if cmd == "demo-pid":
        return _print_reports([verify_sharpness()])

    resolved = _load(args.file)

    if cmd == "validate":
        print(f"groups: {len(resolved.groups)}, morphisms: {len(resolved.morphisms)},"
              f" algebras: {len(resolved.algebras)}, modules: {len(resolved.modules)},"
              f" jobs: {len(resolved.jobs)}")
        print("all objects validated")
        return 0

    if cmd == "resolve":
        m = resolved.modules[_require(resolved.modules, args.module, "module")]
        res = minimal_resolution(m, args.cap)
        print(f"status: {res.status} (cap {args.cap})")
        for i in range(len(res.bundles)):
            terms = ", ".join(f"P[{v}]({g})" for v, g in res.term_summary(i))
            print(f"term {i}: {terms or '0'}")
        if args.json_out:
            payload = {
                "status": res.status,
                "cap": args.cap,
                "terms": [[(v, g.coords()) for v, g in res.term_summary(i)]
                          for i in range(len(res.bundles))],
            }
            with open(args.json_out, "w") as fh:
                json.dump(payload, fh, sort_keys=True, indent=2)
        return 0

    if cmd == "ext":
        m = resolved.modules[_require(resolved.modules, args.module, "module")]
        n = resolved.modules[_require(resolved.modules, args.target, "target")]
        entry = ext_table(m, n, args.degree, args.cap)[args.degree]
        suffix = " (conditional on truncation)" if entry.conditional else ""
        print(f"ext^{args.degree} = {entry.dim}{suffix}")
        return 0

    if cmd == "injdim":
        m = resolved.modules[_require(resolved.modules, args.module, "module")]
        print(f"graded injective dimension: {graded_injective_dimension(m, args.cap)}")
        return 0

    if cmd == "regrade":
        m = resolved.modules[_require(resolved.modules, args.module, "module")]
        phi = resolved.morphisms[_require(resolved.morphisms, args.morphism, "morphism")]
        if args.mode == "pushforward":
            out = pushforward(m, phi)
        elif args.mode == "coinduction":
            out = coinduction(m, phi)
        else:
            if not args.algebra:
                raise DocumentError("cli", "regrade", "pullback needs --algebra")
            alg = resolved.algebras[_require(resolved.algebras, args.algebra, "algebra")]
            out = pullback(m, phi, alg)
        if isinstance(out, LazyGradedModule):
            print("lazy pullback (infinite kernel); sample components:")
            for h in out.base.support():
                print(f"  any g over {h}: dim {out.base.dim_at(h)}")
        else:
            for g, d in out.graded_dims():
                print(f"{g}: {d}")
            if not out.graded_dims():
                print("zero module")
        return 0

    if cmd == "verify-inequality":
        m = resolved.modules[_require(resolved.modules, args.module, "module")]
        phi = resolved.morphisms[_require(resolved.morphisms, args.morphism, "morphism")]
        return _print_reports([verify_inequality(m, phi, args.cap)])

    if cmd == "verify-adjunction":
        m = resolved.modules[_require(resolved.modules, args.module, "module")]
        n = resolved.modules[_require(resolved.modules, args.comodule, "comodule")]
        phi = resolved.morphisms[_require(resolved.morphisms, args.morphism, "morphism")]
        return _print_reports([adjunction_witness(m, n, phi).report])

    if cmd == "verify-lemma":
        m = resolved.modules[_require(resolved.modules, args.module, "module")]
        phi = resolved.morphisms[_require(resolved.morphisms, args.morphism, "morphism")]
        window = _lemma_window(phi, args.window)
        _, report = decomposition_iso(m, phi, window)
        return _print_reports([report])

    if cmd == "verify-resolution":
        n = resolved.modules[_require(resolved.modules, args.module, "module")]
        phi = resolved.morphisms[_require(resolved.morphisms, args.morphism, "morphism")]
        alg = resolved.algebras[_require(resolved.algebras, args.algebra, "algebra")]
        return _print_reports([rank1_regrade_resolution(n, phi, alg, args.window).report])

    if cmd == "verify-acyclicity":
        alg = resolved.algebras[_require(resolved.algebras, args.algebra, "algebra")]
        phi = resolved.morphisms[_require(resolved.morphisms, args.morphism, "morphism")]
        reports = []
        injectives = graded_injectives(alg)
        for v in alg.vertices:
            s = simple_module(alg, v)
            for w, inj in zip(alg.vertices, injectives):
                r = verify_acyclicity(s, inj, phi, min(args.cap, 6))
                r.title = f"acyclicity simple={alg.labels[v]} injective={alg.labels[w]}"
                reports.append(r)
        return _print_reports(reports)

    if cmd == "campaign":
        report = run_campaign(resolved, seed=args.seed,
                              include_timings=args.timings, default_cap=args.cap)
        print(report.table())
        if args.json_out:
            with open(args.json_out, "w") as fh:
                fh.write(report.to_json())
        return 0 if report.passed else 1

    raise DocumentError("cli", cmd, "unknown command")


def _require(table, name, what) -> str:
    if name not in table:
        raise DocumentError(what, name, f"no {what} named {name!r} in the document")
    return name


if __name__ == "__main__":
    sys.exit(main())
