"""Command-line front end.

Exit codes: 0 success / verified, 1 verified-false or infeasible, 2 input error.
"""

from __future__ import annotations

import argparse
import random
import sys

from .certificates import (
    InfeasibleError,
    MultiRootCertificate,
    SignedCertificate,
    TraceCertificate,
    find_certificate,
)
from .colfinite import decompose14
from .finite import (
    HypothesisError,
    PostconditionError,
    decompose_finite_order,
    decompose_linear_combination,
    decompose_theorem1,
    decompose_theorem4,
)
from .formats import (
    FormatError,
    certificate_from_json,
    decomposition_from_json,
    decomposition_to_json,
    dump_json,
    lazy_decomposition_to_json,
    lazy_family,
    load_json,
    matrix_from_json,
)
from .matrix import DimensionError, is_kpotent, order_of
from .scalars import ScalarParseError

EXIT_OK, EXIT_FALSE, EXIT_INPUT = 0, 1, 2


class _Out:
    def __init__(self, args):
        self.args = args
        self.banner_done = False

    def banner(self, field):
        if not field.exact and not self.banner_done and not self.args.json:
            print(f"*** approximate verification (eps={field.eps}) ***")
            self.banner_done = True

    def emit(self, payload: dict, lines):
        if self.args.json:
            print(dump_json(payload))
        else:
            for line in lines:
                print(line)


def _load_matrix(args):
    M = matrix_from_json(load_json(args.matrix), backend=args.backend, eps=args.eps)
    return M


def _fmt_poly(coeffs):
    terms = []
    for j, c in enumerate(coeffs):
        if c:
            terms.append(str(c) if j == 0 else f"{c}*x" if j == 1 else f"{c}*x^{j}")
    return " + ".join(terms) or "0"


def cmd_check_potent(args, out):
    M = _load_matrix(args)
    out.banner(M.field)
    p = args.k + 1
    ok = is_kpotent(M, p, max_k=max(p, 64))
    out.emit({"exponent": p, "potent": ok, "approximate": not M.field.exact},
             [f"{p}-potent: {'true' if ok else 'false'}"])
    return EXIT_OK if ok else EXIT_FALSE


def cmd_order(args, out):
    M = _load_matrix(args)
    out.banner(M.field)
    m = order_of(M, args.bound)
    out.emit({"order": m, "bound": args.bound},
             [f"order: {m}" if m else f"order: none within {args.bound}"])
    return EXIT_OK if m else EXIT_FALSE


def cmd_analyze(args, out):
    M = _load_matrix(args)
    f = M.field
    out.banner(f)
    t = M.trace()
    r = M.rank()
    base = {"k": args.k, "trace": f.format(t), "rank": r}
    try:
        if not f.exact:
            raise InfeasibleError("certificate search needs the exact backend")
        cert = find_certificate(t, args.k, r, args.budget)
    except InfeasibleError as exc:
        base.update(feasible=False, reason=exc.reason)
        out.emit(base, [f"trace: {base['trace']}", f"rank: {r}", f"infeasible: {exc.reason}"])
        return EXIT_FALSE
    base.update(feasible=True, certificate=cert.to_json())
    out.emit(base, [f"trace: {base['trace']}", f"rank: {r}",
                    f"certificate F(x)={_fmt_poly(cert.coeffs)}", f"F(1)={cert.F1}"])
    return EXIT_OK


def cmd_decompose(args, out):
    M = _load_matrix(args)
    out.banner(M.field)
    cert = certificate_from_json(load_json(args.cert)) if args.cert else None
    try:
        if args.mode == "finite-order":
            dec = decompose_finite_order(M, args.k, budget=args.budget)
        elif args.mode == "lincomb":
            if cert is None:
                raise FormatError("lincomb mode needs --cert")
            if not isinstance(cert, SignedCertificate):
                cert = SignedCertificate.from_json(cert.to_json()) if isinstance(cert, MultiRootCertificate) \
                    else SignedCertificate.single(cert.k, cert.coeffs)
            dec = decompose_linear_combination(M, cert)
        elif isinstance(cert, MultiRootCertificate):
            dec = decompose_theorem4(M, cert)
        else:
            if cert is not None and not isinstance(cert, TraceCertificate):
                raise FormatError("sum mode needs a nonnegative certificate")
            dec = decompose_theorem1(M, args.k, cert, args.budget)
    except (InfeasibleError, HypothesisError, PostconditionError) as exc:
        reason = getattr(exc, "reason", str(exc))
        out.emit({"ok": False, "error": type(exc).__name__, "reason": reason},
                 [f"{type(exc).__name__}: {reason}"])
        return EXIT_FALSE
    payload = decomposition_to_json(dec)
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(dump_json(payload))
    lines = [f"{len(dec)} summands ({dec.mode})"]
    for i, s in enumerate(dec.summands):
        coef = "" if s.coefficient is None else f" coef={M.field.format(s.coefficient)}"
        lines.append(f"  [{i}] {s.tag}{coef} {s.provenance}")
    lines.append(f"verified: {'true' if payload['report']['ok'] else 'false'}")
    out.emit(payload, lines)
    return EXIT_OK if payload["report"]["ok"] else EXIT_FALSE


def cmd_verify(args, out):
    dec = decomposition_from_json(load_json(args.decomposition), backend=args.backend, eps=args.eps)
    out.banner(dec.target.field)
    rep = dec.report()
    lines = [f"summand {i}: {'ok' if ok else 'FAIL'}" for i, ok in enumerate(rep["summands"])]
    lines.append(f"sum: {'ok' if rep['sum'] else 'FAIL'}")
    lines.append(f"verified: {'true' if rep['ok'] else 'false'}")
    out.emit(rep, lines)
    return EXIT_OK if rep["ok"] else EXIT_FALSE


def cmd_decompose14(args, out):
    A = lazy_family(load_json(args.family), backend=args.backend or "exact", eps=args.eps)
    out.banner(A.field)
    k = args.k if args.k is not None else A.field.k
    dec = decompose14(A, k)
    Ns = args.truncate or [8]
    payload = lazy_decomposition_to_json(dec, Ns, include_matrices=args.json)
    lines = [f"{len(dec)} summands {payload['counts']}"]
    for r in payload["report"]["truncations"]:
        bad = [p for p, v in r["potency"].items() if not v["ok"]]
        lines.append(f"N={r['N']}: reconstruction {'ok' if r['reconstruction'] else 'FAIL'}, "
                     f"potency {'ok' if not bad else 'FAIL ' + ','.join(bad)}")
    lines.append(f"verified: {'true' if payload['report']['ok'] else 'false'}")
    out.emit(payload, lines)
    return EXIT_OK if payload["report"]["ok"] else EXIT_FALSE


def build_parser() -> argparse.ArgumentParser:
    def flags(suppress):
        dflt = (lambda v: argparse.SUPPRESS) if suppress else (lambda v: v)
        parent = argparse.ArgumentParser(add_help=False)
        parent.add_argument("--backend", choices=["exact", "float"], default=dflt(None))
        parent.add_argument("--eps", type=float, default=dflt(1e-9))
        parent.add_argument("--seed", type=int, default=dflt(0))
        parent.add_argument("--json", action="store_true", default=dflt(False), help="machine-readable output")
        return parent

    # flags are accepted before or after the subcommand
    top, common = flags(False), flags(True)

    p = argparse.ArgumentParser(prog="kpotent", parents=[top],
                                description="Decompose matrices into sums of potent and finite-order matrices.")
    sub = p.add_subparsers(dest="command", required=True)

    def k_arg(sp, required=True):
        sp.add_argument("--k", type=int, required=required, help="root order k >= 2")

    s = sub.add_parser("check-potent", parents=[common], help="test A^(k+1) == A")
    k_arg(s)
    s.add_argument("matrix")
    s.set_defaults(func=cmd_check_potent)

    s = sub.add_parser("order", parents=[common], help="smallest m <= bound with A^m = I")
    s.add_argument("--bound", type=int, default=64)
    s.add_argument("matrix")
    s.set_defaults(func=cmd_order)

    s = sub.add_parser("analyze", parents=[common], help="trace certificate search")
    k_arg(s)
    s.add_argument("--budget", type=int, default=64)
    s.add_argument("matrix")
    s.set_defaults(func=cmd_analyze)

    s = sub.add_parser("decompose", parents=[common], help="decompose a finite matrix")
    k_arg(s)
    s.add_argument("--mode", choices=["sum", "lincomb", "finite-order"], default="sum")
    s.add_argument("--cert", help="certificate JSON (single-root, multiroot or signed)")
    s.add_argument("--budget", type=int, default=64)
    s.add_argument("-o", "--output", help="write the decomposition JSON here")
    s.add_argument("matrix")
    s.set_defaults(func=cmd_decompose)

    s = sub.add_parser("decompose14", parents=[common], help="decompose a lazy column-finite family")
    k_arg(s, required=False)
    s.add_argument("--truncate", type=int, action="append", help="truncation size (repeatable)")
    s.add_argument("family")
    s.set_defaults(func=cmd_decompose14)

    s = sub.add_parser("verify", parents=[common], help="re-check a decomposition JSON file")
    s.add_argument("decomposition")
    s.set_defaults(func=cmd_verify)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "k", None) is not None and args.k < 2:
        parser.error("k must be >= 2")
    random.seed(args.seed)
    out = _Out(args)
    try:
        return args.func(args, out)
    except (FormatError, ScalarParseError, DimensionError, ValueError) as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
