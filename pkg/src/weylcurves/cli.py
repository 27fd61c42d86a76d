"""Command-line front end: enumeration, classification, decomposition,
chop verification, transit witnesses, curve reports, and a self-test.

Exit codes: 0 success, 1 usage or I/O error, 2 verification failure.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys

import numpy as np

from . import KERNELS_COMPILED, __version__
from . import bruhat as br
from . import classify as cl
from . import clifford_exact as ce
from . import curves as cv
from . import signed_perm as sp
from . import spin_chop as sc
from . import spin_numeric as sn

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_VERIFICATION = 2


class VerificationFailure(Exception):
    """A theorem-level or invariant check failed."""


def _dump_json(data, path: str | None) -> None:
    text = json.dumps(data, sort_keys=True, separators=(",", ":")) + "\n"
    if path:
        with open(path, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _resolve_m(args) -> int:
    if getattr(args, "m", None) is not None:
        return args.m
    if getattr(args, "n", None) is not None:
        return args.n + 1
    raise ValueError("one of --m or --n is required")


def cmd_enumerate(args) -> int:
    m = _resolve_m(args)
    if args.spin:
        elements = list(ce.enumerate_tilde_d(m, force=args.force))
        payload = {
            "m": m,
            "level": "Spin",
            "count": len(elements),
            "elements": [z.to_json_dict() for z in elements],
        }
    else:
        elements = list(sp.enumerate_d(m, force=args.force))
        payload = {
            "m": m,
            "level": "SO",
            "count": len(elements),
            "elements": [list(q.word) for q in elements],
        }
    _dump_json(payload, args.json)
    print(f"enumerated {payload['count']} elements of {payload['level']} level, m={m}",
          file=sys.stderr)
    return EXIT_OK


def cmd_classify(args) -> int:
    m = _resolve_m(args)
    report = (cl.spin_classes if args.spin else cl.so_classes)(m, force=args.force)
    total = sum(c.size for c in report.classes)
    if total != report.group_order:
        raise VerificationFailure("class sizes do not sum to the group order")
    _dump_json(report.to_json_dict(include_timing=args.timing), args.json)
    if args.csv:
        with open(args.csv, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["n", "level", "class", "representative", "size", "s"])
            writer.writerows(report.to_csv_rows())
    print(f"{report.level} m={m}: {report.class_count()} classes "
          f"({report.elapsed_ms:.0f} ms)", file=sys.stderr)
    return EXIT_OK


def cmd_decompose(args) -> int:
    if args.input:
        with open(args.input) as fh:
            text = fh.read()
    else:
        text = sys.stdin.read()
    try:
        q = br.matrix_from_json(text)
    except (json.JSONDecodeError, KeyError):
        q = br.parse_float_matrix(text)
    factors = br.decompose(q, pivot_floor=args.tol if args.tol else br.DEFAULT_PIVOT_FLOOR)
    residual = factors.residual(q)
    payload = {
        "q0": list(factors.q0.word),
        "u1": factors.u1.tolist(),
        "u2": factors.u2.tolist(),
        "residual": residual,
    }
    _dump_json(payload, args.json)
    if residual > 1e-8:
        raise VerificationFailure(f"reconstruction residual {residual:.2e} > 1e-8")
    return EXIT_OK


def cmd_chop_verify(args) -> int:
    m = _resolve_m(args)
    rng = np.random.default_rng(args.seed)
    h = args.h if args.h else 1e-3
    n_logs = args.samples if args.samples else 1
    elements = list(sp.enumerate_d(m, force=args.force))
    failures = []
    for q in elements:
        for _ in range(n_logs):
            log = cv.random_log(m, rng)
            cell, chop = cv.verify_chop(q, h, log)
            if cell != chop:
                failures.append((q.word, cell.word, chop.word))
    payload = {
        "m": m,
        "h": h,
        "checked": len(elements) * n_logs,
        "failures": [list(map(list, f)) for f in failures],
    }
    _dump_json(payload, args.json)
    print(f"chop-verify m={m}: {len(elements) * n_logs - len(failures)}"
          f"/{len(elements) * n_logs} germs match delta(Q)*A", file=sys.stderr)
    if failures:
        raise VerificationFailure(f"{len(failures)} germ cells disagree with the formula")
    return EXIT_OK


def _parse_signs(text: str) -> tuple[int, ...]:
    vals = tuple(int(x) for x in text.strip().strip("[]").split(","))
    if any(v not in (1, -1) for v in vals):
        raise ValueError("diagonal entries must be +-1")
    return vals


def cmd_transit(args) -> int:
    d1 = sp.DiagonalSigns(_parse_signs(args.d1))
    d2 = sp.DiagonalSigns(_parse_signs(args.d2))
    if not args.spin:
        q = cl.transit_witness(d1, d2)
        ok = (sp.delta(q).signs == d1.signs and sp.delta(sp.tr(q)).signs == d2.signs)
        _dump_json({"witness": list(q.word), "valid": ok}, args.json)
        if not ok:
            raise VerificationFailure("witness failed the delta/TR-delta check")
        return EXIT_OK
    z1 = ce.lift_signed_perm(d1.to_perm())
    z2 = ce.lift_signed_perm(d2.to_perm())
    if args.sign1 < 0:
        z1 = ce.neg(z1)
    if args.sign2 < 0:
        z2 = ce.neg(z2)
    chain = cl.spin_transit_chain(z1, z2)
    payload = {
        "jumps": len(chain),
        "chain": [
            {"from": x.to_json_dict(), "witness": w.to_json_dict(), "to": y.to_json_dict()}
            for x, w, y in chain
        ],
    }
    _dump_json(payload, args.json)
    print(f"connected in {len(chain)} jumps", file=sys.stderr)
    return EXIT_OK


def cmd_curve(args) -> int:
    if args.input:
        with open(args.input) as fh:
            spec_data = json.load(fh)
    elif args.spec:
        spec_data = json.loads(args.spec)
    else:
        spec_data = json.load(sys.stdin)
    spec = cv.CurveSpec.from_json_dict(spec_data)
    samples = args.samples if args.samples else None
    path = cv.frame_path(spec, samples)
    lifted = sn.lift_path(path, sn.SpinNumeric.one(spec.m))
    ts = np.linspace(0.01, 1.0, 50)
    min_w = min(cv.wronskian(spec, t) for t in ts)
    endpoint = path.frames[-1]
    factors = br.decompose(endpoint)
    z_end = lifted.lifts[-1]
    rep = br.decompose_spin(z_end)
    sign = 1 if rep == ce.lift_signed_perm(factors.q0) else -1
    payload = {
        "spec": spec.to_json_dict(),
        "min_wronskian": min_w,
        "endpoint_cell": list(factors.q0.word),
        "endpoint_lift_sign": sign,
        "path": lifted.to_json_dict(),
    }
    _dump_json(payload, args.json)
    print(f"curve n={spec.n}: min Wronskian {min_w:.3e}, endpoint cell "
          f"{list(factors.q0.word)}, lift sign {sign:+d}", file=sys.stderr)
    if min_w <= 0:
        raise VerificationFailure("sampled Wronskian is not positive")
    return EXIT_OK


def _selftest_suites(rng: np.random.Generator):
    yield "kernel backends agree", _check_kernels
    yield "signed word calculus identities", _check_words
    yield "exact spin arithmetic", _check_spin
    yield "bruhat roundtrip", lambda: _check_bruhat(rng)
    yield "curve convexity", lambda: _check_curves(rng)
    yield "classification counts", _check_classify


def _check_kernels() -> None:
    from ._kernels import pure
    words = cl._all_words(4)
    for name in ("tr_batch", "ad_batch", "chop_batch", "delta_word_batch", "s_batch"):
        from . import _kernels
        a = getattr(_kernels, name)(words)
        b = getattr(pure, name)(words)
        if not np.array_equal(np.asarray(a), np.asarray(b)):
            raise VerificationFailure(f"kernel mismatch in {name}")


def _check_words() -> None:
    for q in sp.enumerate_d(4):
        if sp.tr(sp.tr(q)) != q or sp.ad(sp.ad(q)) != q:
            raise VerificationFailure("TR/AD involution failed")
        if sp.s_invariant(sp.tr(q)) != sp.s_invariant(q):
            raise VerificationFailure("s not TR-invariant")


def _check_spin() -> None:
    for z in ce.enumerate_tilde_d(3):
        if not ce.is_unit(z):
            raise VerificationFailure("non-unit enumerated element")
        if ce.pi(sc.chop_spin(z)) != sp.chop_rep(ce.pi(z)):
            raise VerificationFailure("spin chop does not cover the matrix chop")


def _check_bruhat(rng: np.random.Generator) -> None:
    for _ in range(100):
        m = int(rng.integers(2, 7))
        q = br.random_so(m, rng)
        if br.decompose(q).residual(q) > 1e-8:
            raise VerificationFailure("bruhat reconstruction residual too large")


def _check_curves(rng: np.random.Generator) -> None:
    for n in (2, 3):
        for _ in range(10):
            spec = cv.random_spec(n, rng)
            for t in rng.uniform(0.01, 1.0, 5):
                if cv.wronskian(spec, float(t)) <= 0:
                    raise VerificationFailure("non-positive Wronskian")


def _check_classify() -> None:
    if cl.so_classes(3).class_count() != 2 or cl.so_classes(4).class_count() != 3:
        raise VerificationFailure("SO class counts off")
    if cl.spin_classes(3).class_count() != 3:
        raise VerificationFailure("spin class count off at m=3")


def cmd_selftest(args) -> int:
    rng = np.random.default_rng(args.seed)
    passed = failed = 0
    for name, check in _selftest_suites(rng):
        try:
            check()
        except VerificationFailure as exc:
            failed += 1
            print(f"FAIL {name}: {exc}", file=sys.stderr)
        else:
            passed += 1
            print(f"ok   {name}", file=sys.stderr)
    print(f"selftest: {passed} passed, {failed} failed "
          f"(kernels: {'compiled' if KERNELS_COMPILED else 'pure'})", file=sys.stderr)
    if failed:
        raise VerificationFailure(f"{failed} selftest suites failed")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="weylcurves",
        description="Signed permutation calculus, spin double covers, and "
        "classification of locally convex curve spaces.",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, spin=True):
        p.add_argument("--n", type=int, help="sphere dimension (m = n+1)")
        p.add_argument("--m", type=int, help="matrix size")
        if spin:
            p.add_argument("--spin", action="store_true", help="work in the double cover")
        p.add_argument("--json", metavar="PATH", help="write the JSON report here")
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--tol", type=float, default=None)
        p.add_argument("--force", action="store_true", help="override size guards")
        p.add_argument("--samples", type=int, default=None)
        p.add_argument("--h", type=float, default=None)

    p = sub.add_parser("enumerate", help="list the group elements")
    common(p)
    p.set_defaults(func=cmd_enumerate)

    p = sub.add_parser("classify", help="classify under TR/AD/chop/Delta moves")
    common(p)
    p.add_argument("--csv", metavar="PATH", help="write the class table as CSV")
    p.add_argument("--timing", action="store_true", help="embed elapsed time in the JSON")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("decompose", help="Bruhat-decompose a matrix (file or stdin)")
    common(p, spin=False)
    p.add_argument("--input", metavar="PATH")
    p.set_defaults(func=cmd_decompose)

    p = sub.add_parser("chop-verify", help="check the germ cell against delta(Q)*A")
    common(p, spin=False)
    p.set_defaults(func=cmd_chop_verify)

    p = sub.add_parser("transit", help="witnesses connecting equal-trace diagonals")
    common(p)
    p.add_argument("--d1", required=True, metavar="SIGNS", help="e.g. [1,-1,-1,1]")
    p.add_argument("--d2", required=True, metavar="SIGNS")
    p.add_argument("--sign1", type=int, default=1, choices=(1, -1))
    p.add_argument("--sign2", type=int, default=1, choices=(1, -1))
    p.set_defaults(func=cmd_transit)

    p = sub.add_parser("curve", help="sample a spiral curve and lift its frames")
    common(p, spin=False)
    p.add_argument("--input", metavar="PATH", help="spec JSON file")
    p.add_argument("--spec", metavar="JSON", help="inline spec JSON")
    p.set_defaults(func=cmd_curve)

    p = sub.add_parser("selftest", help="run the module invariant suites")
    common(p, spin=False)
    p.set_defaults(func=cmd_selftest)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except VerificationFailure as exc:
        print(f"verification failure: {exc}", file=sys.stderr)
        return EXIT_VERIFICATION
    except (ValueError, KeyError, OSError, json.JSONDecodeError, sp.SizeGuardError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
