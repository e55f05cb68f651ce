"""JSON formats: matrices, certificates, decompositions and lazy matrix families."""

from __future__ import annotations

import json
import math
from fractions import Fraction

from .certificates import MultiRootCertificate, SignedCertificate, TraceCertificate
from .colfinite import LazyDecomposition, LazyMatrix
from .finite import Decomposition, Summand
from .matrix import DimensionError, Matrix
from .scalars import FloatComplexField, cyclotomic_field

__all__ = [
    "FormatError",
    "make_field",
    "matrix_to_json",
    "matrix_from_json",
    "certificate_from_json",
    "decomposition_to_json",
    "decomposition_from_json",
    "lazy_family",
    "lazy_decomposition_to_json",
    "load_json",
    "dump_json",
]


class FormatError(ValueError):
    pass


def make_field(k, backend="exact", eps=1e-9):
    if k < 1:
        raise FormatError("k must be >= 1")
    if backend == "exact":
        return cyclotomic_field(k)
    if backend == "float":
        return FloatComplexField(k, eps)
    raise FormatError(f"unknown backend {backend!r}")


def matrix_to_json(M: Matrix) -> dict:
    f = M.field
    return {
        "k": f.k,
        "backend": "exact" if f.exact else "float",
        "rows": M.rows,
        "cols": M.cols,
        "entries": M.to_strings(),
    }


def matrix_from_json(data: dict, backend=None, eps=1e-9, field=None) -> Matrix:
    try:
        k = int(data["k"])
        entries = data["entries"]
    except (KeyError, TypeError, ValueError) as exc:
        raise FormatError(f"bad matrix JSON: {exc}") from exc
    if field is None:
        field = make_field(k, backend or data.get("backend", "exact"), eps)
    try:
        rows = [[field.parse(str(x)) for x in row] for row in entries]
        M = Matrix._wrap(field, rows)
    except ValueError as exc:
        raise FormatError(str(exc)) from exc
    if any(len(r) != M.cols for r in rows):
        raise FormatError("ragged matrix rows")
    if ("rows" in data and data["rows"] != M.rows) or ("cols" in data and data["cols"] != M.cols):
        raise FormatError("declared shape does not match entries")
    return M


def certificate_from_json(data: dict):
    """Single-root, multi-root or signed certificate, chosen by the keys and signs present."""
    if "roots" in data or "a0" in data:
        vals = [data.get("a0", 0)] + [c for r in data.get("roots", []) for c in r["coeffs"]]
        if any(Fraction(str(v)) < 0 or Fraction(str(v)).denominator != 1 for v in vals) or data.get("signed"):
            return SignedCertificate.from_json(data)
        return MultiRootCertificate.from_json(data)
    coeffs = data["coeffs"]
    if any(Fraction(str(c)) < 0 or Fraction(str(c)).denominator != 1 for c in coeffs) or data.get("signed"):
        return SignedCertificate.single(int(data["k"]), [Fraction(str(c)) for c in coeffs])
    return TraceCertificate.from_json(data)


def _scalar_json(field, x):
    return None if x is None else field.format(field(x))


def decomposition_to_json(dec: Decomposition, report=None) -> dict:
    f = dec.target.field
    report = dec.report() if report is None else report
    return {
        "target": matrix_to_json(dec.target),
        "mode": dec.mode,
        "summands": [
            {
                "matrix": matrix_to_json(s.matrix),
                "kind": s.kind,
                "exponent": s.exponent,
                "coefficient": _scalar_json(f, s.coefficient),
                "root": _scalar_json(f, s.root),
                "provenance": s.provenance,
            }
            for s in dec.summands
        ],
        "report": report,
        "meta": dec.meta,
    }


def decomposition_from_json(data: dict, backend=None, eps=1e-9) -> Decomposition:
    try:
        target = matrix_from_json(data["target"], backend, eps)
        f = target.field
        summands = []
        for s in data["summands"]:
            M = matrix_from_json(s["matrix"], field=f)
            if M.shape != target.shape:
                raise DimensionError("summand shape differs from the target")
            coef = s.get("coefficient")
            root = s.get("root")
            summands.append(Summand(
                M, s["kind"], int(s["exponent"]), s.get("provenance", ""),
                coefficient=None if coef is None else f.parse(coef),
                root=None if root is None else f.parse(root),
            ))
    except (KeyError, TypeError) as exc:
        raise FormatError(f"bad decomposition JSON: {exc}") from exc
    return Decomposition(target, summands, mode=data.get("mode", "sum"), meta=data.get("meta", {}))


# ---------------------------------------------------------------------------
# lazy families


def _schedule(sched):
    """l'_m as a function of m (1-based)."""
    if isinstance(sched, list):
        vals = [int(v) for v in sched]
        return lambda m: max(vals[m - 1], m) if m <= len(vals) else max(vals[-1], m)
    if sched == "m":
        return lambda m: m
    if sched == "m+1":
        return lambda m: m + 1
    if sched == "2ceil(m/2)":
        return lambda m: 2 * math.ceil(m / 2)
    raise FormatError(f"unknown schedule {sched!r}")


def _band(field, band):
    """offset (column - row) -> value function of the column index (periodic lists allowed)."""
    out = {}
    for off, val in (band or {}).items():
        vals = [field.parse(str(v)) for v in (val if isinstance(val, list) else [val])]
        out[int(off)] = vals
    return out


def lazy_family(data: dict, backend="exact", eps=1e-9) -> LazyMatrix:
    """Build a LazyMatrix from a parametric family description.

    Families: constant (value on the diagonal), banded (offset = column - row,
    value or list periodic in the column), staircase (diag, fill below the
    diagonal down to row schedule(m), optional upper band).  Any family accepts
    a finite "perturb" list of {"i", "j", "v"} (1-based) added on top.
    """
    try:
        k = int(data["k"])
        family = data["family"]
    except (KeyError, TypeError, ValueError) as exc:
        raise FormatError(f"bad family JSON: {exc}") from exc
    f = make_field(k, backend, eps)
    z = f.zero
    if family == "constant":
        c = f.parse(str(data.get("value", "0")))
        base = {0: [c]}
        depth = 0
        stair = None
    elif family == "banded":
        base = _band(f, data.get("band"))
        depth = max([0] + [-o for o in base])
        stair = None
    elif family == "staircase":
        base = _band(f, data.get("band"))
        base.setdefault(0, [f.parse(str(data.get("diag", "0")))])
        fill = f.parse(str(data.get("fill", "1")))
        stair = _schedule(data.get("schedule", "m+1"))
        depth = max([0] + [-o for o in base])
    else:
        raise FormatError(f"unknown family {family!r}")
    perturb = {}
    for p in data.get("perturb", []):
        key = (int(p["i"]), int(p["j"]))
        if key[0] < 1 or key[1] < 1:
            raise FormatError("perturbation indices are 1-based")
        perturb[key] = perturb.get(key, z) + f.parse(str(p["v"]))
    extra_rows = {}
    for (i, j) in perturb:
        extra_rows[j] = max(extra_rows.get(j, 0), i)

    def entry(i, j):
        v = z
        vals = base.get(j - i)
        if vals:
            v = vals[(j - 1) % len(vals)]
        if stair is not None and j < i <= stair(j) and (j - i) not in base:
            v = v + fill
        p = perturb.get((i, j))
        return v if p is None else v + p

    def support(j):
        s = j + depth
        if stair is not None:
            s = max(s, stair(j))
        return max(s, extra_rows.get(j, 0))

    return LazyMatrix(f, entry=entry, col_support=support, structure="general", provenance=f"family:{family}")


def lazy_decomposition_to_json(dec: LazyDecomposition, Ns, include_matrices=True) -> dict:
    report = dec.verify(Ns)
    out = {"k": dec.k, "count": len(dec), "counts": report["counts"], "report": report}
    if include_matrices:
        N = max(Ns)
        out["truncations"] = [
            {"provenance": s.provenance, "N": s.next_boundary(N), "matrix": matrix_to_json(s.dense(s.next_boundary(N)))}
            for s in dec.summands
        ]
    return out


def load_json(path):
    try:
        with open(path) as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise FormatError(f"cannot read {path}: {exc}") from exc


def dump_json(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=False, default=_json_default)


def _json_default(x):
    if isinstance(x, Fraction):
        return str(x) if x.denominator != 1 else x.numerator
    return str(x)
