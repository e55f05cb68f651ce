"""Dense matrices over a scalar backend.

Matrices are immutable values; every operation returns a new matrix.  The
backend (``field``) supplies zero/one, ``is_zero``/``eq`` and the root of
unity; entries themselves support ``+ - * /``.
"""

from __future__ import annotations

from dataclasses import dataclass

__all__ = [
    "Matrix",
    "DimensionError",
    "SingularMatrixError",
    "KernelBlockForm",
    "DEFAULT_MAX_K",
    "matmul",
    "matpow",
    "rank",
    "kernel_basis",
    "is_kpotent",
    "order_of",
    "kernel_block_form",
    "conjugate_by",
]

DEFAULT_MAX_K = 64


class DimensionError(ValueError):
    pass


class SingularMatrixError(ArithmeticError):
    pass


class Matrix:
    __slots__ = ("field", "rows", "cols", "_e")

    def __init__(self, field, entries):
        self.field = field
        rows = [[field(x) for x in row] for row in entries]
        self.rows = len(rows)
        self.cols = len(rows[0]) if rows else 0
        if any(len(r) != self.cols for r in rows):
            raise DimensionError("ragged matrix rows")
        self._e = rows

    @classmethod
    def _wrap(cls, field, rows):
        self = object.__new__(cls)
        self.field = field
        self._e = rows
        self.rows = len(rows)
        self.cols = len(rows[0]) if rows else 0
        return self

    # -- constructors -------------------------------------------------------

    @classmethod
    def zeros(cls, field, rows, cols=None):
        cols = rows if cols is None else cols
        z = field.zero
        return cls._wrap(field, [[z] * cols for _ in range(rows)])

    @classmethod
    def identity(cls, field, n):
        return cls.scalar(field, n, field.one)

    @classmethod
    def scalar(cls, field, n, c):
        c = field(c)
        z = field.zero
        return cls._wrap(field, [[c if i == j else z for j in range(n)] for i in range(n)])

    @classmethod
    def diag(cls, field, values):
        values = [field(v) for v in values]
        n = len(values)
        z = field.zero
        return cls._wrap(field, [[values[i] if i == j else z for j in range(n)] for i in range(n)])

    @classmethod
    def from_columns(cls, field, columns):
        columns = [[field(x) for x in c] for c in columns]
        n = len(columns[0]) if columns else 0
        return cls._wrap(field, [[c[i] for c in columns] for i in range(n)])

    @classmethod
    def unit(cls, field, n, i, j, value=None):
        """n x n matrix with a single nonzero entry at (i, j)."""
        m = cls.zeros(field, n)
        m._e[i][j] = field.one if value is None else field(value)
        return m

    @classmethod
    def block_diag(cls, field, blocks):
        n = sum(b.rows for b in blocks)
        out = cls.zeros(field, n)
        off = 0
        for b in blocks:
            for i in range(b.rows):
                out._e[off + i][off : off + b.cols] = b._e[i]
            off += b.rows
        return out

    # -- access -------------------------------------------------------------

    @property
    def shape(self):
        return self.rows, self.cols

    @property
    def is_square(self):
        return self.rows == self.cols

    def __getitem__(self, idx):
        i, j = idx
        return self._e[i][j]

    def row(self, i):
        return list(self._e[i])

    def column(self, j):
        return [r[j] for r in self._e]

    def tolist(self):
        return [list(r) for r in self._e]

    def diagonal(self):
        return [self._e[i][i] for i in range(min(self.rows, self.cols))]

    def submatrix(self, r0, r1, c0, c1):
        return Matrix._wrap(self.field, [r[c0:c1] for r in self._e[r0:r1]])

    def embed(self, n, offset=0):
        """Place this matrix in the top-left (shifted by offset) of an n x n zero matrix."""
        out = Matrix.zeros(self.field, n)
        for i in range(self.rows):
            out._e[offset + i][offset : offset + self.cols] = self._e[i]
        return out

    def with_column(self, j, values):
        rows = [list(r) for r in self._e]
        for i, v in enumerate(values):
            rows[i][j] = self.field(v)
        return Matrix._wrap(self.field, rows)

    def column_matrix(self, j):
        """Same shape, keeping only column j."""
        z = self.field.zero
        return Matrix._wrap(
            self.field, [[r[j] if c == j else z for c in range(self.cols)] for r in self._e]
        )

    # -- arithmetic ---------------------------------------------------------

    def _check_same(self, other):
        if self.shape != other.shape:
            raise DimensionError(f"shape mismatch {self.shape} vs {other.shape}")

    def __add__(self, other):
        self._check_same(other)
        return Matrix._wrap(
            self.field, [[a + b for a, b in zip(r, s)] for r, s in zip(self._e, other._e)]
        )

    def __sub__(self, other):
        self._check_same(other)
        return Matrix._wrap(
            self.field, [[a - b for a, b in zip(r, s)] for r, s in zip(self._e, other._e)]
        )

    def __neg__(self):
        return Matrix._wrap(self.field, [[-a for a in r] for r in self._e])

    def scale(self, c):
        c = self.field(c)
        return Matrix._wrap(self.field, [[c * a for a in r] for r in self._e])

    def __mul__(self, other):
        if isinstance(other, Matrix):
            return matmul(self, other)
        return self.scale(other)

    def __rmul__(self, other):
        return self.scale(other)

    __matmul__ = __mul__

    def __pow__(self, e):
        return matpow(self, e)

    def __eq__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        if self.shape != other.shape:
            return False
        eq = self.field.eq
        return all(eq(a, b) for r, s in zip(self._e, other._e) for a, b in zip(r, s))

    __hash__ = None

    def is_zero(self):
        z = self.field.is_zero
        return all(z(a) for r in self._e for a in r)

    def transpose(self):
        return Matrix._wrap(self.field, [list(c) for c in zip(*self._e)]) if self.rows else self

    T = property(transpose)

    def trace(self):
        if not self.is_square:
            raise DimensionError("trace of a non-square matrix")
        t = self.field.zero
        for i in range(self.rows):
            t = t + self._e[i][i]
        return t

    def is_scalar_matrix(self):
        if not self.is_square:
            return False
        if self.rows == 0:
            return True
        return self == Matrix.scalar(self.field, self.rows, self._e[0][0])

    def apply(self, vec):
        out = []
        for r in self._e:
            s = self.field.zero
            for a, x in zip(r, vec):
                if a and x:
                    s = s + a * x
            out.append(s)
        return out

    # -- elimination --------------------------------------------------------

    def rref(self):
        """Reduced row echelon form and pivot columns."""
        f = self.field
        rows = [list(r) for r in self._e]
        pivots = []
        pr = 0
        for c in range(self.cols):
            if pr >= self.rows:
                break
            if f.exact:
                piv = next((i for i in range(pr, self.rows) if rows[i][c]), None)
            else:
                best = max(range(pr, self.rows), key=lambda i: abs(rows[i][c]))
                piv = None if f.is_zero(rows[best][c]) else best
            if piv is None:
                continue
            rows[pr], rows[piv] = rows[piv], rows[pr]
            inv = f.one / rows[pr][c]
            rows[pr] = [x * inv for x in rows[pr]]
            prow = rows[pr]
            for i in range(self.rows):
                if i != pr:
                    fac = rows[i][c]
                    if not f.is_zero(fac):
                        rows[i] = [a - fac * b if b else a for a, b in zip(rows[i], prow)]
                        if not f.exact:
                            rows[i][c] = f.zero
            pivots.append(c)
            pr += 1
        return Matrix._wrap(f, rows), pivots

    def rank(self):
        return len(self.rref()[1])

    def kernel_basis(self):
        R, pivots = self.rref()
        f = self.field
        free = [c for c in range(self.cols) if c not in pivots]
        basis = []
        for fc in free:
            v = [f.zero] * self.cols
            v[fc] = f.one
            for r, pc in enumerate(pivots):
                v[pc] = -R._e[r][fc]
            basis.append(v)
        return basis

    def inverse(self):
        if not self.is_square:
            raise DimensionError("inverse of a non-square matrix")
        n = self.rows
        aug = Matrix._wrap(
            self.field,
            [list(r) + [self.field.one if i == j else self.field.zero for j in range(n)]
             for i, r in enumerate(self._e)],
        )
        R, pivots = aug.rref()
        if pivots[:n] != list(range(n)):
            raise SingularMatrixError("matrix is singular")
        return Matrix._wrap(self.field, [r[n:] for r in R._e])

    # -- display ------------------------------------------------------------

    def to_strings(self):
        fmt = self.field.format
        return [[fmt(a) for a in r] for r in self._e]

    def __repr__(self):
        body = "; ".join(", ".join(r) for r in self.to_strings())
        return f"Matrix[{self.rows}x{self.cols}]({body})"


def matmul(A: Matrix, B: Matrix) -> Matrix:
    if A.cols != B.rows:
        raise DimensionError(f"cannot multiply {A.shape} by {B.shape}")
    f = A.field
    z = f.zero
    # sparse rows of B: skip zero entries entirely
    brows = [[(j, b) for j, b in enumerate(r) if b] for r in B._e]
    out = []
    for r in A._e:
        acc = [z] * B.cols
        for l, a in enumerate(r):
            if a:
                for j, b in brows[l]:
                    acc[j] = acc[j] + a * b
        out.append(acc)
    return Matrix._wrap(f, out)


def matpow(A: Matrix, e: int) -> Matrix:
    if not A.is_square:
        raise DimensionError("power of a non-square matrix")
    if e < 0:
        return matpow(A.inverse(), -e)
    result = None
    base = A
    while e:
        if e & 1:
            result = base if result is None else matmul(result, base)
        e >>= 1
        if e:
            base = matmul(base, base)
    return Matrix.identity(A.field, A.rows) if result is None else result


def rank(A: Matrix) -> int:
    return A.rank()


def kernel_basis(A: Matrix):
    return A.kernel_basis()


def is_kpotent(A: Matrix, k: int, max_k: int = DEFAULT_MAX_K) -> bool:
    """True iff A^k == A."""
    if not A.is_square:
        raise DimensionError("potency of a non-square matrix")
    if k < 1:
        raise ValueError("exponent must be >= 1")
    if k > max_k:
        raise ValueError(f"exponent {k} exceeds cap {max_k}")
    return matpow(A, k) == A


def order_of(A: Matrix, bound: int):
    """Smallest 1 <= m <= bound with A^m = I, else None."""
    if not A.is_square:
        raise DimensionError("order of a non-square matrix")
    ident = Matrix.identity(A.field, A.rows)
    P = A
    for m in range(1, bound + 1):
        if P == ident:
            return m
        P = matmul(P, A)
    return None


@dataclass(frozen=True)
class KernelBlockForm:
    """A = S C S^-1 where the last n - r columns of C are zero."""

    S: Matrix
    C: Matrix
    r: int


def _complete_basis(field, vectors, n):
    """Extend independent vectors to a basis of F^n with standard basis vectors."""
    basis = [list(v) for v in vectors]
    for i in range(n):
        if len(basis) == n:
            break
        e = [field.zero] * n
        e[i] = field.one
        trial = basis + [e]
        if Matrix._wrap(field, trial).rank() == len(trial):
            basis = trial
    return basis


def kernel_block_form(A: Matrix) -> KernelBlockForm:
    if not A.is_square:
        raise DimensionError("block form of a non-square matrix")
    n = A.rows
    ker = A.kernel_basis()
    r = n - len(ker)
    if r == n:
        return KernelBlockForm(Matrix.identity(A.field, n), A, n)
    # complement first, kernel last
    full = _complete_basis(A.field, ker, n)
    complement = full[len(ker):]
    S = Matrix.from_columns(A.field, complement + ker)
    C = matmul(matmul(S.inverse(), A), S)
    return KernelBlockForm(S, C, r)


def conjugate_by(S: Matrix, A: Matrix) -> Matrix:
    """S A S^-1."""
    return matmul(matmul(S, A), S.inverse())
