"""Constructive decompositions of finite square matrices.

Every construction here follows the same skeleton: move A by a similarity to
a block form whose trailing columns vanish, prescribe the diagonal of the
leading block (Fillmore step), split the nonzero columns into single-column
matrices whose diagonal entry is a root of unity, and conjugate back.  A
single-column matrix X whose diagonal entry is a k-th root of unity lam
satisfies X^2 = lam X, hence X^(k+1) = X.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from math import comb

from .certificates import (
    InfeasibleError,
    MultiRootCertificate,
    NonIntegralError,
    SignedCertificate,
    TraceCertificate,
    find_certificate,
    verify_multiroot,
)
from .matrix import (
    DimensionError,
    Matrix,
    _complete_basis,
    kernel_block_form,
    matmul,
    matpow,
)

__all__ = [
    "Summand",
    "Decomposition",
    "HypothesisError",
    "PostconditionError",
    "FillmoreError",
    "lemma4_block",
    "identity_decomposition",
    "fillmore_diagonalize",
    "decompose_theorem1",
    "decompose_theorem4",
    "potent_from_order",
    "order_from_potent",
    "equation_coefficients",
    "equation_holds",
    "order_from_lemma4",
    "decompose_finite_order",
    "lemma1_pair",
    "lemma2_split",
    "lemma3_split",
    "decompose_rank1",
    "decompose_counted_general",
    "decompose_linear_combination",
    "gamma",
]


class HypothesisError(ValueError):
    pass


class PostconditionError(ArithmeticError):
    pass


class FillmoreError(ValueError):
    pass


@dataclass
class Summand:
    """One term of a decomposition.

    kind "potent": matrix^exponent == matrix.  kind "order": matrix^exponent == I.
    ``coefficient`` is set only in linear-combination mode.
    """

    matrix: Matrix
    kind: str
    exponent: int
    provenance: str = ""
    coefficient: object = None
    root: object = None

    def check(self) -> bool:
        P = matpow(self.matrix, self.exponent)
        if self.kind == "potent":
            return P == self.matrix
        if self.kind == "order":
            return P == Matrix.identity(self.matrix.field, self.matrix.rows)
        raise ValueError(f"unknown summand kind {self.kind!r}")

    @property
    def tag(self) -> str:
        if self.kind == "potent":
            return f"potent({self.exponent})"
        return f"order({self.exponent})"


@dataclass
class Decomposition:
    target: Matrix
    summands: list
    mode: str = "sum"
    verified: bool = False
    meta: dict = dc_field(default_factory=dict)

    def __len__(self):
        return len(self.summands)

    def total(self) -> Matrix:
        acc = Matrix.zeros(self.target.field, self.target.rows)
        for s in self.summands:
            m = s.matrix if s.coefficient is None else s.matrix.scale(s.coefficient)
            acc = acc + m
        return acc

    def report(self) -> dict:
        per = [s.check() for s in self.summands]
        sum_ok = self.total() == self.target
        return {
            "summands": per,
            "sum": sum_ok,
            "ok": sum_ok and all(per),
            "approximate": not self.target.field.exact,
        }

    def verify(self, strict: bool = True) -> dict:
        rep = self.report()
        self.verified = rep["ok"]
        if strict and not rep["ok"]:
            bad = [i for i, ok in enumerate(rep["summands"]) if not ok]
            raise PostconditionError(
                f"decomposition failed verification (sum ok={rep['sum']}, bad summands={bad})"
            )
        return rep

    def count(self, kind=None) -> int:
        return sum(1 for s in self.summands if kind is None or s.kind == kind)


# ---------------------------------------------------------------------------
# building blocks


def _is_root_of_unity(field, value, k) -> bool:
    return any(field.eq(value, field.root(k, j)) for j in range(k))


def lemma4_block(field, n, p, diag, above=None, below=None, k=None) -> Matrix:
    """n x n matrix whose only nonzero column is p, with diagonal entry ``diag``.

    ``above``/``below`` fill the column above/below the diagonal (defaults 0).
    The diagonal must be a k-th root of unity (1 gives an idempotent).
    """
    k = field.k if k is None else k
    diag = field(diag)
    if not _is_root_of_unity(field, diag, k):
        raise HypothesisError(f"diagonal entry {field.format(diag)} is not a {k}-th root of unity")
    above = list(above or [])
    below = list(below or [])
    if len(above) > p or len(below) > n - p - 1:
        raise DimensionError("column entries do not fit")
    col = [field.zero] * n
    for i, v in enumerate(reversed(above)):
        col[p - 1 - i] = field(v)
    for i, v in enumerate(below):
        col[p + 1 + i] = field(v)
    col[p] = diag
    return Matrix.zeros(field, n).with_column(p, col)


def identity_decomposition(field, n, alpha=1) -> Decomposition:
    """alpha * I_n as alpha * n * (k-1) single-entry potent matrices (k even).

    Uses 1 = -(w + w^2 + ... + w^(k-1)); each -w^i is again a k-th root
    because -1 = w^(k/2).
    """
    k = field.k
    if k % 2:
        raise HypothesisError("identity decomposition needs k even")
    if alpha < 1 or int(alpha) != alpha:
        raise HypothesisError("alpha must be a positive integer")
    summands = []
    for _ in range(int(alpha)):
        for i in range(1, k):
            lam = -field.omega_power(i)
            for j in range(n):
                summands.append(
                    Summand(Matrix.unit(field, n, j, j, lam), "potent", k + 1, "identity-remark", root=lam)
                )
    dec = Decomposition(Matrix.scalar(field, n, alpha), summands, meta={"claimed": int(alpha) * n * (k - 1)})
    dec.verify()
    return dec


# ---------------------------------------------------------------------------
# Fillmore step


def _candidate_vectors(field, n):
    for i in range(n):
        v = [field.zero] * n
        v[i] = field.one
        yield v
    for i in range(n):
        for j in range(i + 1, n):
            v = [field.zero] * n
            v[i] = v[j] = field.one
            yield v


def fillmore_diagonalize(B: Matrix, d) -> Matrix:
    """T with diag(T^-1 B T) == d.

    Needs sum(d) == tr(B) and B non-scalar (unless d already is B's diagonal).
    Induction: pick v with v, Bv independent; in a basis starting
    v, Bv - d_1 v the (1,1) entry is d_1.  If the trailing block comes out
    scalar while the remaining targets differ, shearing the third basis
    vector by v makes it non-scalar.
    """
    f = B.field
    n = B.rows
    d = [f(x) for x in d]
    if not B.is_square or len(d) != n:
        raise DimensionError("diagonal length must match the square matrix")
    total = f.zero
    for x in d:
        total = total + x
    if not f.eq(total, B.trace()):
        raise FillmoreError("prescribed diagonal does not sum to the trace")
    ident = Matrix.identity(f, n)
    if all(f.eq(B[i, i], d[i]) for i in range(n)):
        return ident
    if B.is_scalar_matrix():
        raise FillmoreError("a scalar matrix is similar only to itself")
    rest = d[1:]
    rest_const = all(f.eq(x, rest[0]) for x in rest)
    for v in _candidate_vectors(f, n):
        Bv = B.apply(v)
        if Matrix._wrap(f, [v, Bv]).rank() < 2:
            continue
        b2 = [x - d[0] * y for x, y in zip(Bv, v)]
        basis = _complete_basis(f, [v, b2], n)
        for shear in (0, 1):
            if shear and n < 3:
                break
            cols = list(basis)
            if shear:
                cols[2] = [x + y for x, y in zip(cols[2], v)]
            P = Matrix.from_columns(f, cols)
            M = matmul(matmul(P.inverse(), B), P)
            trailing = M.submatrix(1, n, 1, n)
            if n > 2 and trailing.is_scalar_matrix() and not rest_const:
                continue
            T = fillmore_diagonalize(trailing, rest)
            return matmul(P, Matrix.block_diag(f, [Matrix.identity(f, 1), T]))
    raise FillmoreError("no admissible basis vector found")


# ---------------------------------------------------------------------------
# the column-splitting engine


@dataclass(frozen=True)
class _Term:
    """coefficient * root, emitted as a summand that is ``exponent``-potent."""

    coef: object
    root: object
    exponent: int
    label: str


def _allocate(capacities, b):
    """r_j >= 1 per group summing to b; extras go to the largest spare capacity."""
    alloc = [1] * len(capacities)
    for _ in range(b - len(capacities)):
        j = max(range(len(capacities)), key=lambda i: (capacities[i] - alloc[i], -i))
        alloc[j] += 1
    return alloc


def _even_split(a, r):
    q, rem = divmod(a, r)
    return [q + 1] * rem + [q] * (r - rem)


def _sum_parts(groups, b):
    """groups: [(term, count)] -> b nonempty parts (lists of unit terms)."""
    if b >= len(groups):
        alloc = _allocate([c for _, c in groups], b)
        parts = []
        for (term, count), r in zip(groups, alloc):
            for piece in _even_split(count, r):
                parts.append([term] * piece)
        return parts
    parts = [[t] * c for t, c in groups[: b - 1]]
    last = []
    for t, c in groups[b - 1 :]:
        last.extend([t] * c)
    return parts + [last]


def _lincomb_parts(terms, b):
    if b >= len(terms):
        alloc = _allocate([abs(t.coef) for t in terms], b)
        parts = []
        for t, r in zip(terms, alloc):
            for _ in range(r):
                parts.append([_Term(t.coef / r, t.root, t.exponent, t.label)])
        return parts
    return [[t] for t in terms[: b - 1]] + [list(terms[b - 1 :])]


def _part_value(field, part):
    s = field.zero
    for t in part:
        s = s + field(t.coef) * t.root
    return s


def _unit_count(groups, mode):
    return sum(c for _, c in groups) if mode == "sum" else len(groups)


def _split_columns(A, groups, mode, provenance):
    """Return summands (with .root set) realizing A from the given terms."""
    f = A.field
    n = A.rows
    capacity = _unit_count(groups, mode)
    if capacity == 0:
        if A.is_zero():
            return []
        raise InfeasibleError("empty certificate for a nonzero matrix")
    form = kernel_block_form(A)
    S, C, r = form.S, form.C, form.r
    b = max(r, 1)
    if b > capacity and mode == "sum":
        raise InfeasibleError(f"F(1) = {capacity} < rank = {r}")
    while True:
        parts = _sum_parts(groups, b) if mode == "sum" else _lincomb_parts(groups, b)
        d = [_part_value(f, p) for p in parts]
        A1 = C.submatrix(0, b, 0, b)
        if b == 1 or not A1.is_scalar_matrix():
            T = fillmore_diagonalize(A1, d)
            break
        if all(f.eq(x, A1[0, 0]) for x in d):
            T = Matrix.identity(f, b)
            break
        if b < n and b + 1 <= capacity:
            b += 1  # a zero column makes the leading block non-scalar
            continue
        if b == n and capacity > n >= 2:
            return _peel_scalar(A, groups, mode, provenance)
        raise InfeasibleError(
            "leading block is the scalar %s and cannot carry the prescribed diagonal"
            % f.format(A1[0, 0])
        )
    Q = matmul(S, Matrix.block_diag(f, [T, Matrix.identity(f, n - b)]))
    Qinv = Q.inverse()
    Cp = matmul(matmul(Qinv, A), Q)
    out = []
    for p, part in enumerate(parts):
        col = Cp.column(p)
        m = len(part)
        for t in part:
            scale = f.one / (f(t.coef) * m)
            new = [x * scale for x in col]
            new[p] = t.root
            X = Matrix.zeros(f, n).with_column(p, new)
            E = matmul(matmul(Q, X), Qinv)
            out.append(
                Summand(
                    E,
                    "potent",
                    t.exponent,
                    f"{provenance}:col{p}:{t.label}",
                    coefficient=None if mode == "sum" else f(t.coef),
                    root=t.root,
                )
            )
    return out


def _peel_scalar(A, groups, mode, provenance):
    """A = cI: split off root * e_11 so the rest is non-scalar."""
    f = A.field
    n = A.rows
    if mode == "sum":
        (t, c), rest = groups[0], groups[1:]
        remaining = ([(t, c - 1)] if c > 1 else []) + rest
        coef = f.one
    else:
        t, remaining = groups[0], groups[1:]
        coef = f(t.coef)
    X = Matrix.unit(f, n, 0, 0, t.root)
    first = Summand(
        X, "potent", t.exponent, f"{provenance}:peel:{t.label}",
        coefficient=None if mode == "sum" else coef, root=t.root,
    )
    return [first] + _split_columns(A - X.scale(coef), remaining, mode, provenance)


# ---------------------------------------------------------------------------
# sums of (k+1)-potent matrices


def _check_exact_trace(field, value, trace, what):
    if not field.eq(value, trace):
        raise InfeasibleError(f"{what} evaluates to {field.format(value)}, trace is {field.format(trace)}")


def decompose_theorem1(A: Matrix, k: int, cert: TraceCertificate | None = None, budget: int = 64) -> Decomposition:
    """A as a sum of exactly F(1) rank-one (k+1)-potent matrices."""
    if k < 1:
        raise ValueError("k must be >= 1")
    if not A.is_square:
        raise DimensionError("square matrix required")
    f = A.field
    r = A.rank()
    t = A.trace()
    if cert is None:
        if not f.exact:
            raise HypothesisError("the float backend needs an explicit certificate")
        if f.k != k:
            raise HypothesisError(f"matrix entries live in Q(zeta_{f.k}); pass a certificate for k={k}")
        cert = find_certificate(t, k, r, budget)
    if cert.k != k:
        raise ValueError("certificate is for a different k")
    _check_exact_trace(f, cert.value(f), t, "F(w)")
    if cert.F1 < r:
        raise InfeasibleError(f"F(1) = {cert.F1} < rank = {r}")
    groups = [
        (_Term(1, f.root(k, j), k + 1, f"w^{j}"), a) for j, a in enumerate(cert.coeffs) if a
    ]
    summands = _split_columns(A, groups, "sum", "thm1")
    dec = Decomposition(A, summands, meta={"certificate": cert.to_json(), "rank": r})
    dec.verify()
    return dec


def decompose_theorem4(A: Matrix, cert: MultiRootCertificate) -> Decomposition:
    """Sum of (beta_i + 1)-potent matrices, one band of summands per root order."""
    f = A.field
    r = A.rank()
    t = A.trace()
    for p in cert.roots:
        if f.k % p.beta:
            raise HypothesisError(f"Q(zeta_{f.k}) has no primitive {p.beta}-th root; use order {cert.order}")
    ok, reason = verify_multiroot(cert, t, r) if f.exact else (True, "")
    if not ok:
        raise InfeasibleError(reason)
    groups = []
    if cert.a0:
        groups.append((_Term(1, f.one, 2, "a0"), int(cert.a0)))
    for p in cert.roots:
        for j, c in enumerate(p.coeffs):
            if c:
                groups.append((_Term(1, f.root(p.beta, j), p.beta + 1, f"beta{p.beta}:w^{j}"), int(c)))
    summands = _split_columns(A, groups, "sum", "thm4")
    dec = Decomposition(A, summands, meta={"certificate": cert.to_json(), "rank": r})
    dec.verify()
    return dec


# ---------------------------------------------------------------------------
# conversions between potent and finite-order matrices


def potent_from_order(A: Matrix, k: int) -> Matrix:
    """B = (I + A + ... + A^(k-1)) / k, which is k-potent when A^k = I."""
    f = A.field
    ident = Matrix.identity(f, A.rows)
    if matpow(A, k) != ident:
        raise HypothesisError(f"A is not of order dividing {k}")
    acc, P = ident, ident
    for _ in range(1, k):
        P = matmul(P, A)
        acc = acc + P
    B = acc.scale(f.one / k)
    if matpow(B, k) != B:
        raise PostconditionError("B^k != B")
    return B


def equation_coefficients(k: int, variant: str = "eq1"):
    """Coefficients (highest degree first) of the binomial equations.

    eq1: x^(k-1) + C(k,1) x^(k-2) + ... + C(k,k-1), satisfied by w - 1.
    eq2: x^(k-1) - C(k,1) x^(k-2) + ... - C(k,k-1), satisfied by 1 + w (k even).
    """
    if variant == "eq1":
        return [comb(k, m) for m in range(k)]
    if variant == "eq2":
        return [(-1) ** m * comb(k, m) for m in range(k)]
    raise ValueError(f"unknown variant {variant!r}")


def equation_holds(field, variant: str = "eq1") -> bool:
    k = field.k
    x = field.omega - 1 if variant == "eq1" else field.omega + 1
    acc = field.zero
    for c in equation_coefficients(k, variant):
        acc = acc * x + c
    return field.is_zero(acc)


def order_from_potent(A: Matrix, k: int, variant: str = "eq1") -> Matrix:
    """(w - 1) A^(k-1) + I (eq1) or (1 + w) A^(k-1) + I (eq2, k even) for k-potent A.

    "eq2-signed" uses I - (1 + w) A^(k-1) instead; the plain eq2 matrix has
    eigenvalue 2 + w, which is not a root of unity once k >= 4.

    The result is checked to satisfy B^k = I; a failure raises
    PostconditionError rather than returning an unverified matrix.
    """
    f = A.field
    if matpow(A, k) != A:
        raise HypothesisError(f"A is not {k}-potent")
    w = f.root(k, 1)
    if variant == "eq1":
        alpha = w - f.one
    elif variant in ("eq2", "eq2-signed"):
        if k % 2:
            raise HypothesisError("eq2 needs k even")
        alpha = f.one + w
        if variant == "eq2-signed":
            # eigenvalue 1 - (1 + w) = -w, of order k when k is even
            alpha = -alpha
    else:
        raise ValueError(f"unknown variant {variant!r}")
    ident = Matrix.identity(f, A.rows)
    B = matpow(A, k - 1).scale(alpha) + ident
    if matpow(B, k) != ident:
        raise PostconditionError(f"{variant}: B^{k} != I")
    return B


def _lemma4_column(E: Matrix):
    """Index of the single nonzero column of E, or None."""
    nz = [j for j in range(E.cols) if any(not E.field.is_zero(x) for x in E.column(j))]
    return nz[0] if len(nz) == 1 else None


def order_from_lemma4(E: Matrix, k: int) -> Matrix:
    """B = 2E - wI for a single-column E with diagonal w; B^k = I when k is even."""
    f = E.field
    if k % 2:
        raise HypothesisError("needs k even")
    w = f.root(k, 1)
    p = _lemma4_column(E)
    if p is None or not f.eq(E[p, p], w):
        raise HypothesisError("E must have one nonzero column with diagonal entry w")
    ident = Matrix.identity(f, E.rows)
    B = E.scale(2) - ident.scale(w)
    if matpow(B, k) != ident:
        raise PostconditionError("B^k != I")
    return B


def decompose_finite_order(A: Matrix, k: int, m_steps: int = 16, budget: int = 64) -> Decomposition:
    """A as a sum of matrices of order dividing k (k even).

    S = (A + m w I)/2 is decomposed into single-column potents E_i with
    diagonal roots lam_i; then B_i = 2E_i - lam_i I has B_i^2 = lam_i^2 I, and
    A = sum B_i + sum lam_i I - m w I, the scalar remainder being emitted as
    copies of +-lam I.  m starts at the smallest value with m >= 2 - F(1)/n
    and m = F(1) (mod 2) and moves in steps of 2 until S has an integral
    certificate.
    """
    f = A.field
    if k % 2:
        raise HypothesisError("finite-order decomposition needs k even")
    if f.k != k:
        raise HypothesisError(f"matrix must be over Q(zeta_{k})")
    n = A.rows
    t = A.trace()
    F = find_certificate(t, k, 0, budget)
    m = -((F.F1 - 2 * n) // n)  # ceil(2 - F1/n)
    if (m - F.F1) % 2:
        m += 1
    w = f.omega
    ident = Matrix.identity(f, n)
    reasons = []
    for _ in range(m_steps):
        S = (A + ident.scale(w * m)).scale(Fraction(1, 2))
        try:
            G = find_certificate(S.trace(), k, S.rank(), budget)
        except InfeasibleError as exc:
            reasons.append(f"m={m}: {exc.reason}")
            m += 2
            continue
        groups = [(_Term(1, f.root(k, j), k + 1, f"w^{j}"), a) for j, a in enumerate(G.coeffs) if a]
        potents = _split_columns(S, groups, "sum", "corol1")
        summands = []
        counts = {}
        for e in potents:
            B = e.matrix.scale(2) - ident.scale(e.root)
            summands.append(Summand(B, "order", k, "corol1:2E-lam", root=e.root))
            counts[e.root] = counts.get(e.root, 0) + 1
        counts[w] = counts.get(w, 0) - m
        for lam, c in counts.items():
            sign = 1 if c > 0 else -1
            for _ in range(abs(c)):
                summands.append(Summand(ident.scale(lam * sign), "order", k, "corol1:scalar", root=lam * sign))
        dec = Decomposition(A, summands, meta={"m": m, "F": F.to_json(), "G": G.to_json(), "r": len(potents)})
        dec.verify()
        return dec
    raise InfeasibleError("; ".join(reasons) or "no admissible m")


# ---------------------------------------------------------------------------
# 2 x 2 building blocks and counted constructions


def lemma1_pair(field, a, root=None):
    """B = [[a, -a], [a - w, w - a]] and C = [[a, a], [w - a, w - a]]; both satisfy X^2 = wX."""
    w = field.omega if root is None else field(root)
    a = field(a)
    B = Matrix._wrap(field, [[a, -a], [a - w, w - a]])
    C = Matrix._wrap(field, [[a, a], [w - a, w - a]])
    return B, C


def lemma2_split(field, x, root=None):
    """B + C = diag(x, 2w - x)."""
    return lemma1_pair(field, field(x) / 2, root)


def lemma3_split(A: Matrix, root=None):
    """Two potent 2n x 2n matrices summing to (wI + A) (+) (wI - A)."""
    f = A.field
    n = A.rows
    w = f.omega if root is None else f(root)
    ident = Matrix.identity(f, n)
    Y = (ident.scale(w) + A).scale(Fraction(1, 2))
    Wm = ident.scale(w)

    def blocks(tl, tr, bl, br):
        rows = [a.row(i) + b.row(i) for a, b in ((tl, tr),) for i in range(n)]
        rows += [a.row(i) + b.row(i) for a, b in ((bl, br),) for i in range(n)]
        return Matrix._wrap(f, rows)

    B = blocks(Y, -Y, Y - Wm, Wm - Y)
    C = blocks(Y, Y, Wm - Y, Wm - Y)
    return B, C


def gamma(alpha: int) -> int:
    return (alpha - 2) // 2 if alpha % 2 == 0 else (alpha - 3) // 2 + 3


def _claimed_rank1(alpha: int) -> int:
    return (alpha - 2) // 2 + 2 if alpha % 2 == 0 else (alpha - 3) // 2 + 3


def _rank1_diag_pieces(field, n, alpha, lam):
    """Summand matrices (in the basis where A = diag(alpha lam, 0, ...))."""
    if alpha % 2:
        return [(Matrix.unit(field, n, 0, 0, lam), "propo1:odd-peel")] + _rank1_diag_pieces(
            field, n, alpha - 1, lam
        )
    beta = (alpha - 2) // 2
    out = []
    for _ in range(beta):
        out.append((Matrix.unit(field, n, 0, 0, lam), "propo1:first"))
        out.append((Matrix.unit(field, n, 1, 1, lam), "propo1:first"))
    B, C = lemma2_split(field, lam * (alpha - beta), lam)
    out.append((B.embed(n), "propo1:lemma2-B"))
    out.append((C.embed(n), "propo1:lemma2-C"))
    return out


def _trace_as_multiple(field, t, k):
    for j in range(k):
        q = t / field.root(k, j)
        if field.exact and q.is_rational():
            q = q.to_fraction()
            if q.denominator == 1 and q > 0:
                return int(q), j
    return None


def _rank1_summands(Y: Matrix, alpha: int, lam, exponent: int, tag: str):
    f = Y.field
    n = Y.rows
    u_idx = next(j for j in range(n) if any(not f.is_zero(x) for x in Y.column(j)))
    u = Y.column(u_idx)
    P = Matrix.from_columns(f, [u] + Y.kernel_basis())
    Pinv = P.inverse()
    D = matmul(matmul(Pinv, Y), P)
    if D != Matrix.unit(f, n, 0, 0, lam * alpha):
        raise HypothesisError("rank-one matrix is not diagonalizable to diag(alpha w^j, 0, ...)")
    return [
        Summand(matmul(matmul(P, X), Pinv), "potent", exponent, f"{tag}:{prov}", root=lam)
        for X, prov in _rank1_diag_pieces(f, n, alpha, lam)
    ]


def decompose_rank1(A: Matrix, k: int | None = None) -> Decomposition:
    """Rank-one A with trace alpha w^j, alpha > 3: alpha explicit potent summands.

    The construction's count is reported next to the closed-form count
    ((alpha-2)/2 + 2 for even alpha, (alpha-3)/2 + 3 for odd alpha); the two
    are not asserted equal.
    """
    f = A.field
    k = f.k if k is None else k
    n = A.rows
    if n < 2:
        raise HypothesisError("needs n >= 2")
    if A.rank() != 1:
        raise HypothesisError("needs rank(A) == 1")
    found = _trace_as_multiple(f, A.trace(), k)
    if found is None or found[0] <= 3:
        raise HypothesisError("trace must be alpha * w^j with integer alpha > 3")
    alpha, j = found
    summands = _rank1_summands(A, alpha, f.root(k, j), k + 1, "rank1")
    claimed = _claimed_rank1(alpha)
    dec = Decomposition(
        A, summands,
        meta={"alpha": alpha, "j": j, "constructed": len(summands), "claimed": claimed,
              "discrepancy": len(summands) != claimed},
    )
    dec.verify()
    return dec


def decompose_counted_general(A: Matrix, cert) -> Decomposition:
    """Rank(A) equal to the number of trace terms, every coefficient > 3.

    The leading block is given diagonal (alpha_0, alpha_1 w, ...); each of its
    columns is a rank-one matrix handled like ``decompose_rank1``.
    Accepts a single-root TraceCertificate or a MultiRootCertificate.
    """
    f = A.field
    n = A.rows
    if n < 2:
        raise HypothesisError("needs n >= 2")
    if isinstance(cert, TraceCertificate):
        k = cert.k
        terms = [(a, f.root(k, j), k + 1, j) for j, a in enumerate(cert.coeffs) if a]
        zeros = sum(1 for a in cert.coeffs if a == 0)
    elif isinstance(cert, MultiRootCertificate):
        terms = [(int(cert.a0), f.one, 2, 0)] if cert.a0 else []
        for p in cert.roots:
            terms += [(int(c), f.root(p.beta, j), p.beta + 1, j) for j, c in enumerate(p.coeffs) if c]
        zeros = 0
    else:
        raise TypeError("certificate type not supported")
    if any(a <= 3 for a, *_ in terms):
        raise HypothesisError("every nonzero trace coefficient must exceed 3")
    r = A.rank()
    if r != len(terms):
        raise HypothesisError(f"rank(A) = {r} but the trace has {len(terms)} terms")
    value = f.zero
    for a, lam, _, _ in terms:
        value = value + lam * a
    _check_exact_trace(f, value, A.trace(), "certificate")
    form = kernel_block_form(A)
    d = [lam * a for a, lam, _, _ in terms]
    A1 = form.C.submatrix(0, r, 0, r)
    if r > 1 and A1.is_scalar_matrix() and not all(f.eq(x, d[0]) for x in d):
        raise HypothesisError("leading block is scalar; the diagonal cannot be prescribed")
    T = fillmore_diagonalize(A1, d)
    Q = matmul(form.S, Matrix.block_diag(f, [T, Matrix.identity(f, n - r)]))
    Qinv = Q.inverse()
    Cp = matmul(matmul(Qinv, A), Q)
    summands = []
    for p, (a, lam, exponent, _) in enumerate(terms):
        Y = Cp.column_matrix(p)
        for s in _rank1_summands(Y, a, lam, exponent, f"counted:slot{p}"):
            s.matrix = matmul(matmul(Q, s.matrix), Qinv)
            summands.append(s)
    gammas = [gamma(a) for a, *_ in terms]
    meta = {"constructed": len(summands), "alphas": [a for a, *_ in terms]}
    if isinstance(cert, TraceCertificate):
        if zeros == 0:
            meta["formula"] = "(sum gamma_i + 2) k"
            meta["claimed"] = (sum(gammas) + 2) * cert.k
        else:
            meta["formula"] = "sum_{alpha_i != 0} gamma_i (k - j)"
            meta["claimed"] = sum(gammas) * (cert.k - zeros)
    else:
        g0 = gamma(int(cert.a0)) if cert.a0 else 0
        rest = sum(g + 2 for g in (gammas[1:] if cert.a0 else gammas))
        meta["formula"] = "(gamma_0 + sum (gamma_ij + 2)) rank(A)"
        meta["claimed"] = (g0 + rest) * r
    meta["discrepancy"] = meta["claimed"] != meta["constructed"]
    dec = Decomposition(A, summands, meta=meta)
    dec.verify()
    return dec


def decompose_linear_combination(A: Matrix, scert: SignedCertificate) -> Decomposition:
    """A = sum c_i E_i with E_i (beta+1)-potent and c_i the certificate coefficients."""
    f = A.field
    r = A.rank()
    if scert.module < r:
        raise InfeasibleError(f"|F| = {scert.module} < rank = {r}")
    terms = []
    for c, beta, j in scert.terms():
        if f.k % beta:
            raise HypothesisError(f"Q(zeta_{f.k}) has no primitive {beta}-th root")
        terms.append(_Term(c, f.root(beta, j), beta + 1, f"beta{beta}:w^{j}"))
    _check_exact_trace(f, scert.value(f), A.trace(), "signed certificate")
    summands = _split_columns(A, terms, "lincomb", "lincomb")
    dec = Decomposition(A, summands, mode="linear-combination", meta={"certificate": scert.to_json(), "rank": r})
    dec.verify()
    return dec
