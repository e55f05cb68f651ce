"""Column-finite N x N matrices and their decomposition into <= 14 potent summands.

Indices are 1-based throughout this module.  A LazyMatrix is never
materialized; it is checked on leading N x N truncations.  For triangular
matrices truncation commutes with products, and for block-diagonal ones it
does so whenever N ends a block, which is what ``next_boundary`` reports.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass, field as dc_field

from .matrix import Matrix, matmul, matpow

__all__ = [
    "LazyMatrix",
    "TruncatedView",
    "StaircaseProfile",
    "LazyDecomposition",
    "ConjugatorError",
    "split_upper_lower_diag",
    "conjugator_to_bidiagonal",
    "upper_split_dense",
    "decompose_upper_2omega",
    "decompose_lower_3omega",
    "decompose_diagonal",
    "decompose14",
    "truncate",
]

STRUCTURES = ("upper", "lower", "diagonal", "general")


class ConjugatorError(ValueError):
    pass


def _identity_boundary(N):
    return N


class LazyMatrix:
    """Entry-on-demand matrix with a column-finiteness witness.

    Either ``entry(i, j)`` or ``dense_fn(N)`` must be given.  ``dense_fn(N)``
    must return the exact leading N x N block.
    """

    def __init__(self, field, entry=None, col_support=None, structure="general",
                 dense_fn=None, next_boundary=None, provenance="", exponent=None):
        if entry is None and dense_fn is None:
            raise ValueError("need an entry function or a dense builder")
        if structure not in STRUCTURES:
            raise ValueError(f"unknown structure {structure!r}")
        self.field = field
        self._entry = entry
        self._dense_fn = dense_fn
        self.col_support = col_support or (lambda j: j)
        self.structure = structure
        self.next_boundary = next_boundary or _identity_boundary
        self.provenance = provenance
        self.exponent = exponent
        self._memo = {}
        self._dense = None
        self._lock = threading.Lock()

    def entry(self, i, j):
        key = (i, j)
        hit = self._memo.get(key)
        if hit is not None:
            return hit
        if self._entry is not None:
            if i > self.col_support(j):
                v = self.field.zero
            else:
                v = self.field(self._entry(i, j))
        else:
            v = self.dense(max(i, j))[i - 1, j - 1]
        self._memo[key] = v
        return v

    __call__ = entry

    def uncached_entry(self, i, j):
        if self._entry is not None:
            return self.field.zero if i > self.col_support(j) else self.field(self._entry(i, j))
        return self._dense_fn(max(i, j))[i - 1, j - 1]

    def dense(self, N) -> Matrix:
        """Leading N x N block, reusing the largest block computed so far."""
        d = self._dense
        if d is not None and d.rows >= N:
            return d.submatrix(0, N, 0, N)
        if self._dense_fn is not None:
            M = self._dense_fn(N)
        else:
            f = self.field
            z = f.zero
            rows = [[z] * N for _ in range(N)]
            for j in range(1, N + 1):
                for i in range(1, min(N, self.col_support(j)) + 1):
                    rows[i - 1][j - 1] = self.entry(i, j)
            M = Matrix._wrap(f, rows)
        with self._lock:
            if self._dense is None or self._dense.rows < N:
                self._dense = M
        return M

    def __repr__(self):
        return f"LazyMatrix({self.structure}, {self.provenance or 'anonymous'})"


@dataclass
class TruncatedView:
    N: int
    matrix: Matrix
    boundary_safe: bool
    requested: int = 0


def truncate(A: LazyMatrix, N: int, boundary_safe: bool = False) -> TruncatedView:
    """Leading block of A; with boundary_safe, N is moved up to A's next block boundary."""
    if N < 1:
        raise ValueError("N must be >= 1")
    Np = A.next_boundary(N) if boundary_safe else N
    return TruncatedView(Np, A.dense(Np), boundary_safe, N)


# ---------------------------------------------------------------------------
# splitting A = t1 + t2 + d


def split_upper_lower_diag(A: LazyMatrix, k=None):
    f = A.field
    k = f.k if k is None else k
    w = f.root(k, 1)
    two, three = w * 2, w * 3

    t1 = LazyMatrix(f, entry=lambda i, j: two if i == j else (A.entry(i, j) if i < j else f.zero),
                    col_support=lambda j: j, structure="upper", provenance="t1")
    t2 = LazyMatrix(f, entry=lambda i, j: three if i == j else (A.entry(i, j) if i > j else f.zero),
                    col_support=lambda j: max(j, A.col_support(j)), structure="lower", provenance="t2")
    d = LazyMatrix(f, entry=lambda i, j: A.entry(i, i) - three - two if i == j else f.zero,
                   col_support=lambda j: j, structure="diagonal", provenance="d")
    return t1, t2, d


# ---------------------------------------------------------------------------
# upper triangular, diagonal 2w


def conjugator_dense(T: Matrix, w) -> Matrix:
    """Unitriangular S with S T = b S, b the bidiagonal part of T.

    T is upper triangular with diagonal w and nonzero superdiagonal.
    Row 1 of S is e_1; row i+1 follows from row i.
    """
    f = T.field
    n = T.rows
    rows = [[f.zero] * n for _ in range(n)]
    for i in range(n):
        if not f.eq(T[i, i], w):
            raise ConjugatorError(f"diagonal entry {i + 1} is not w")
        rows[i][i] = f.one
    # nonzero entries of each column of T strictly above the diagonal
    above = [[(l, T[l, j]) for l in range(j) if T[l, j]] for j in range(n)]
    for i in range(n - 1):
        di = T[i, i + 1]
        if f.is_zero(di):
            raise ConjugatorError(f"superdiagonal entry ({i + 1},{i + 2}) is zero")
        inv = f.one / di
        Si = rows[i]
        nxt = rows[i + 1]
        for j in range(i + 2, n):
            acc = f.zero
            for l, t in above[j]:
                if l >= i and Si[l]:
                    acc = acc + Si[l] * t
            nxt[j] = acc * inv
    return Matrix._wrap(f, rows)


def _unitriangular_inverse(S: Matrix) -> Matrix:
    f = S.field
    n = S.rows
    inv = [[f.zero] * n for _ in range(n)]
    for j in range(n):
        inv[j][j] = f.one
        for i in range(j - 1, -1, -1):
            acc = f.zero
            for l in range(i + 1, j + 1):
                if S[i, l] and inv[l][j]:
                    acc = acc + S[i, l] * inv[l][j]
            inv[i][j] = -acc
    return Matrix._wrap(f, inv)


def conjugator_to_bidiagonal(t: LazyMatrix, k=None) -> LazyMatrix:
    """Lazy unitriangular S with S t S^-1 = w I + sum t_{n,n+1} e_{n,n+1}."""
    f = t.field
    w = f.root(f.k if k is None else k, 1)
    return LazyMatrix(f, dense_fn=lambda N: conjugator_dense(t.dense(N), w),
                      col_support=lambda j: j, structure="upper", provenance="conjugator")


def _fill_superdiagonal(T: Matrix, w):
    """t1' (diag w, zero superdiagonal entries replaced by w) and t2' = T - t1'."""
    f = T.field
    n = T.rows
    rows = T.tolist()
    for i in range(n):
        rows[i][i] = w
        if i + 1 < n and f.is_zero(rows[i][i + 1]):
            rows[i][i + 1] = w
    t1p = Matrix._wrap(f, rows)
    return t1p, T - t1p


def _alternating_rows(f, t2p: Matrix):
    """Rows of the bidiagonal t2' assigned to v' or v'' by the sequential rule."""
    n = t2p.rows
    active = [True] * n
    for i in range(1, n):
        active[i] = not (active[i - 1] and not f.is_zero(t2p[i - 1, i]))
    vp = [[f.zero] * n for _ in range(n)]
    vpp = [[f.zero] * n for _ in range(n)]
    for i in range(n):
        target = vp if active[i] else vpp
        target[i][i] = t2p[i, i]
        if i + 1 < n:
            target[i][i + 1] = t2p[i, i + 1]
    return Matrix._wrap(f, vp), Matrix._wrap(f, vpp)


def upper_split_dense(T: Matrix, w):
    """Four matrices with M^2 = wM summing to the upper triangular T (diagonal 2w)."""
    f = T.field
    n = T.rows
    t1p, t2p = _fill_superdiagonal(T, w)
    S = conjugator_dense(t1p, w)
    Sinv = _unitriangular_inverse(S)
    u = [[f.zero] * n for _ in range(n)]
    u2 = [[f.zero] * n for _ in range(n)]
    for i in range(n):
        target = u if i % 2 == 0 else u2
        target[i][i] = w
        if i + 1 < n:
            target[i][i + 1] = t1p[i, i + 1]
    U = matmul(matmul(Sinv, Matrix._wrap(f, u)), S)
    U2 = matmul(matmul(Sinv, Matrix._wrap(f, u2)), S)
    vp, vpp = _alternating_rows(f, t2p)
    return U, U2, vp, vpp


def decompose_upper_2omega(t1: LazyMatrix, k=None):
    """Four lazy (k+1)-potent summands of an upper triangular matrix with diagonal 2w."""
    f = t1.field
    k = f.k if k is None else k
    w = f.root(k, 1)
    cache = {}

    def parts(N):
        best = max((m for m in cache if m >= N), default=None)
        if best is None:
            cache[N] = upper_split_dense(t1.dense(N), w)
            best = N
        return [P.submatrix(0, N, 0, N) for P in cache[best]]

    names = ["upper:u", "upper:u'", "upper:v'", "upper:v''"]
    return [
        LazyMatrix(f, dense_fn=(lambda N, q=q: parts(N)[q]), col_support=lambda j: j,
                   structure="upper", provenance=name, exponent=k + 1)
        for q, name in enumerate(names)
    ]


# ---------------------------------------------------------------------------
# lower triangular, diagonal 3w


class StaircaseProfile:
    """l_m (last nonzero row of column m), running maxima l'_m, and the blocks they cut."""

    def __init__(self, t: LazyMatrix):
        self.t = t
        self._l = {}
        self._lp = [0]  # _lp[m] for m >= 1
        self._blocks = []

    def l(self, m):
        if m not in self._l:
            f = self.t.field
            last = m
            for i in range(self.t.col_support(m), m - 1, -1):
                if not f.is_zero(self.t.entry(i, m)):
                    last = i
                    break
            self._l[m] = last
        return self._l[m]

    def lp(self, m):
        while len(self._lp) <= m:
            j = len(self._lp)
            self._lp.append(max(self._lp[-1], self.l(j)))
        return self._lp[m]

    def blocks(self, N):
        """Blocks (start, end), 1-based inclusive, until one ends at or beyond N."""
        while not self._blocks or self._blocks[-1][1] < N:
            start = self._blocks[-1][1] + 1 if self._blocks else 1
            self._blocks.append((start, self.lp(start)))
        return [b for b in self._blocks if b[0] <= N]

    def boundary(self, N):
        return self.blocks(N)[-1][1]


def decompose_lower_3omega(t2: LazyMatrix, k=None):
    """Six lazy summands: four from the block-diagonal part u, two from v = t2 - u."""
    f = t2.field
    k = f.k if k is None else k
    w = f.root(k, 1)
    two = w * 2
    prof = StaircaseProfile(t2)
    block_parts = {}

    def split_block(p, start, end):
        if p not in block_parts:
            s = end - start + 1
            rows = [[f.zero] * s for _ in range(s)]
            for a in range(s):
                rows[a][a] = two
                for b in range(a):
                    rows[a][b] = t2.entry(start + a, start + b)
            B = Matrix._wrap(f, rows)
            block_parts[p] = [P.transpose() for P in upper_split_dense(B.transpose(), w)]
        return block_parts[p]

    def u_dense(q):
        def build(N):
            blocks = prof.blocks(N)
            M = max(N, blocks[-1][1])
            rows = [[f.zero] * M for _ in range(M)]
            for p, (start, end) in enumerate(blocks):
                P = split_block(p, start, end)[q]
                for a in range(end - start + 1):
                    rows[start - 1 + a][start - 1 : end] = P.row(a)
            return Matrix._wrap(f, rows).submatrix(0, N, 0, N)
        return build

    def v_dense(parity):
        def build(N):
            blocks = prof.blocks(N)
            rows = [[f.zero] * N for _ in range(N)]
            for p, (start, end) in enumerate(blocks):
                if p % 2 != parity:
                    continue
                for j in range(start, min(end, N) + 1):
                    rows[j - 1][j - 1] = w
                    for i in range(end + 1, min(N, t2.col_support(j)) + 1):
                        x = t2.entry(i, j)
                        if f.is_zero(x):
                            continue
                        nxt = prof.blocks(i)[p + 1]
                        if not nxt[0] <= i <= nxt[1]:
                            raise AssertionError(f"entry ({i},{j}) escapes the next staircase block")
                        rows[i - 1][j - 1] = x
            return Matrix._wrap(f, rows)
        return build

    def next_support(j):
        end = prof.blocks(j)[-1][1]
        return prof.blocks(end + 1)[-1][1]

    out = []
    for q, name in enumerate(["lower:u-block:u", "lower:u-block:u'", "lower:u-block:v'", "lower:u-block:v''"]):
        out.append(LazyMatrix(f, dense_fn=u_dense(q), col_support=lambda j: prof.boundary(j),
                              structure="lower", next_boundary=prof.boundary, provenance=name, exponent=k + 1))
    for parity, name in ((0, "lower:v'"), (1, "lower:v''")):
        out.append(LazyMatrix(f, dense_fn=v_dense(parity), col_support=next_support,
                              structure="lower", next_boundary=prof.boundary, provenance=name, exponent=k + 1))
    return out


# ---------------------------------------------------------------------------
# diagonal


def _even_boundary(N):
    return N + (N % 2)


def _odd_boundary(N):
    return N + (1 - N % 2)


def decompose_diagonal(d: LazyMatrix, k=None):
    """Four block-diagonal summands: the 2x2 pair split of X (blocks at odd rows) and of Y (blocks at even rows)."""
    f = d.field
    k = f.k if k is None else k
    w = f.root(k, 1)
    two = w * 2
    xs = [None]
    ys = [None]

    def extend(n):
        while len(xs) <= n:
            m = len(xs)
            dm = d.entry(m, m)
            if m == 1:
                x, y = dm, f.zero
            elif m % 2 == 0:
                x = two - xs[m - 1]
                y = dm - x
            else:
                y = two - ys[m - 1]
                x = dm - y
            xs.append(x)
            ys.append(y)

    def pair_entry(seq, first_row, which):
        """Entry function for the B (which=0) or C (which=1) split of blocks starting at first_row parity."""
        def entry(i, j):
            if abs(i - j) > 1:
                return f.zero
            lo = min(i, j)
            if i != j and lo % 2 != first_row % 2:
                return f.zero
            if i == j:
                top = i if i % 2 == first_row % 2 else i - 1
            else:
                top = lo
            if top < first_row:
                return f.zero
            extend(top + 1)
            a = seq[top] / 2
            r, c = i - top, j - top
            if which == 0:
                block = ((a, -a), (a - w, w - a))
            else:
                block = ((a, a), (w - a, w - a))
            return block[r][c]
        return entry

    specs = [
        (xs, 1, 0, "diagonal:X:B", _even_boundary),
        (xs, 1, 1, "diagonal:X:C", _even_boundary),
        (ys, 2, 0, "diagonal:Y:B", _odd_boundary),
        (ys, 2, 1, "diagonal:Y:C", _odd_boundary),
    ]
    return [
        LazyMatrix(f, entry=pair_entry(seq, first, which), col_support=lambda j: j + 1,
                   structure="general", next_boundary=nb, provenance=name, exponent=k + 1)
        for seq, first, which, name, nb in specs
    ]


# ---------------------------------------------------------------------------
# the full pipeline


@dataclass
class LazyDecomposition:
    target: LazyMatrix
    summands: list
    k: int
    meta: dict = dc_field(default_factory=dict)

    def __len__(self):
        return len(self.summands)

    def counts(self):
        out = {}
        for s in self.summands:
            key = s.provenance.split(":")[0]
            out[key] = out.get(key, 0) + 1
        return out

    def check(self, N):
        """Reconstruction at N and potency of each summand at its own boundary >= N."""
        f = self.target.field
        total = Matrix.zeros(f, N)
        for s in self.summands:
            total = total + s.dense(N)
        recon = total == self.target.dense(N)
        potent = {}
        for s in self.summands:
            Ns = s.next_boundary(N)
            E = s.dense(Ns)
            potent[s.provenance] = {"N": Ns, "ok": matpow(E, s.exponent) == E}
        return {"N": N, "reconstruction": recon, "potency": potent,
                "ok": recon and all(v["ok"] for v in potent.values())}

    def verify(self, Ns):
        reports = [self.check(N) for N in Ns]
        return {"ok": all(r["ok"] for r in reports), "truncations": reports, "counts": self.counts()}


def decompose14(A: LazyMatrix, k=None) -> LazyDecomposition:
    """A = t1 + t2 + d, decomposed into 4 + 6 + 4 lazy (k+1)-potent summands."""
    f = A.field
    k = f.k if k is None else k
    if k < 2:
        raise ValueError("needs a root of unity w != 1 (k >= 2)")
    t1, t2, d = split_upper_lower_diag(A, k)
    summands = decompose_upper_2omega(t1, k) + decompose_lower_3omega(t2, k) + decompose_diagonal(d, k)
    return LazyDecomposition(A, summands, k, meta={"parts": {"upper": 4, "lower": 6, "diagonal": 4}})
