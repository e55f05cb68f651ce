import pytest

import gen
from kpotent import Matrix, cyclotomic_field, matmul, matpow
from kpotent.colfinite import (
    ConjugatorError,
    LazyMatrix,
    StaircaseProfile,
    conjugator_dense,
    conjugator_to_bidiagonal,
    decompose14,
    decompose_diagonal,
    decompose_lower_3omega,
    decompose_upper_2omega,
    split_upper_lower_diag,
    truncate,
    upper_split_dense,
)
from kpotent.formats import lazy_family


def lazy(f, fn, support=None):
    return LazyMatrix(f, entry=fn, col_support=support or (lambda j: j))


def banded(f, band):
    depth = max([0] + [-o for o in band])
    return lazy(f, lambda i, j: band.get(j - i, f.zero), lambda j: j + depth)


def dense_sum(parts, N):
    f = parts[0].field
    acc = Matrix.zeros(f, N)
    for p in parts:
        acc = acc + p.dense(N)
    return acc


def all_potent(parts, N):
    for p in parts:
        Np = p.next_boundary(N)
        E = p.dense(Np)
        if matpow(E, p.exponent) != E:
            return False
    return True


# -- LazyMatrix plumbing ---------------------------------------------------------


def test_memoization_transparent():
    f = cyclotomic_field(3)
    A = banded(f, {-1: f(2), 0: f.omega, 1: f(5)})
    for i in range(1, 12):
        for j in range(1, 12):
            assert A.entry(i, j) == A.uncached_entry(i, j)
            assert A.entry(i, j) == A.entry(i, j)


def test_truncate_examples():
    f = cyclotomic_field(3)
    d = lazy(f, lambda i, j: f(i) if i == j else f.zero)
    assert truncate(d, 1).matrix == Matrix(f, [[1]])
    parts = decompose_diagonal(d, 3)
    X = parts[0]
    view = truncate(X, 7, boundary_safe=True)
    assert view.N == 8 and view.requested == 7
    assert truncate(X, 7).N == 7


def test_staircase_boundary_forces_block_end():
    f = cyclotomic_field(3)
    # l'_m = 10 for m <= 10: one block [1, 10]
    t2 = lazy(f, lambda i, j: 3 * f.omega if i == j else (f.one if i == 10 and j == 1 else f.zero),
              lambda j: 10 if j == 1 else j)
    parts = decompose_lower_3omega(t2, 3)
    assert truncate(parts[0], 9, boundary_safe=True).N == 10


# -- the three-way split -----------------------------------------------------------


def test_split_examples():
    f = cyclotomic_field(3)
    w = f.omega
    A = lazy(f, lambda i, j: 5 * w if i == j else f.zero)
    t1, t2, d = split_upper_lower_diag(A, 3)
    assert t1.dense(6) == Matrix.scalar(f, 6, 2 * w)
    assert t2.dense(6) == Matrix.scalar(f, 6, 3 * w)
    assert d.dense(6).is_zero()
    Z = lazy(f, lambda i, j: f.zero)
    t1, t2, d = split_upper_lower_diag(Z, 3)
    assert d.dense(4) == Matrix.scalar(f, 4, -5 * w)
    assert (t1.dense(4) + t2.dense(4) + d.dense(4)).is_zero()


def test_split_banded_random():
    rng = gen.rng_for(4)
    f = cyclotomic_field(4)
    band = {o: gen.rand_scalar(f, rng) for o in range(-2, 3)}
    A = banded(f, band)
    t1, t2, d = split_upper_lower_diag(A, 4)
    for N in (1, 7, 32, 64):
        assert t1.dense(N) + t2.dense(N) + d.dense(N) == A.dense(N)


# -- conjugator ---------------------------------------------------------------------


def test_conjugator_bidiagonal_is_identity():
    f = cyclotomic_field(3)
    w = f.omega
    t = lazy(f, lambda i, j: w if i == j else (f(i) if j == i + 1 else f.zero))
    assert conjugator_to_bidiagonal(t, 3).dense(10) == Matrix.identity(f, 10)


def test_conjugator_3x3_oracle():
    """T = [[w,a,c],[0,w,b],[0,0,w]]: S = I + s e_23 with a s = c, from a hand solve of S T = B S."""
    f = cyclotomic_field(3)
    w = f.omega
    a, b, c = f(2), f(3), f(5)
    T = Matrix(f, [[w, a, c], [0, w, b], [0, 0, w]])
    S = conjugator_dense(T, w)
    expected = Matrix(f, [[1, 0, 0], [0, 1, c / a], [0, 0, 1]])
    assert S == expected
    B = Matrix(f, [[w, a, 0], [0, w, b], [0, 0, w]])
    assert matmul(matmul(S, T), S.inverse()) == B


def test_conjugator_random_n32():
    rng = gen.rng_for(12)
    f = cyclotomic_field(3)
    w = f.omega
    vals = {}

    def entry(i, j):
        if i == j:
            return w
        if j == i + 1:
            return f(1 + (i % 3))
        if j > i + 1 and j - i <= 4:
            return vals.setdefault((i, j), gen.rand_scalar(f, rng, -2, 2))
        return f.zero

    t = lazy(f, entry)
    S = conjugator_to_bidiagonal(t, 3).dense(32)
    T = t.dense(32)
    C = matmul(matmul(S, T), S.inverse())
    for i in range(32):
        for j in range(32):
            if j not in (i, i + 1):
                assert f.is_zero(C[i, j])
            else:
                assert C[i, j] == T[i, j]


def test_conjugator_rejects_zero_superdiagonal():
    f = cyclotomic_field(3)
    w = f.omega
    with pytest.raises(ConjugatorError):
        conjugator_dense(Matrix(f, [[w, 0], [0, w]]), w)


# -- upper part ----------------------------------------------------------------------


def test_upper_constant_diagonal():
    f = cyclotomic_field(3)
    w = f.omega
    t1 = lazy(f, lambda i, j: 2 * w if i == j else f.zero)
    parts = decompose_upper_2omega(t1, 3)
    assert len(parts) == 4
    N = 16
    alt = [Matrix.diag(f, [w if i % 2 == r else 0 for i in range(N)]) for r in (0, 1)]
    dense = [p.dense(N) for p in parts]
    assert dense_sum(parts, N) == t1.dense(N)
    assert all_potent(parts, N)
    # the u/u' pair are upper-bidiagonal alternations; v'/v'' alternate on the diagonal
    assert dense[2].diagonal() == alt[0].diagonal() and dense[3].diagonal() == alt[1].diagonal()


def test_upper_superdiagonal_zero_inserts_w():
    f = cyclotomic_field(4)
    w = f.omega
    t1 = lazy(f, lambda i, j: 2 * w if i == j else (f(7) if j == i + 3 else f.zero))
    parts = decompose_upper_2omega(t1, 4)
    for N in (5, 8, 17):
        assert dense_sum(parts, N) == t1.dense(N)
        assert all_potent(parts, N)
    vp = parts[2].dense(8)
    # rule: rows alternate between v' and v''
    assert [vp[i, i] for i in range(8)] == [w if i % 2 == 0 else 0 for i in range(8)]


def test_upper_bidiagonal_nonzero_superdiagonal():
    f = cyclotomic_field(3)
    w = f.omega
    t1 = lazy(f, lambda i, j: 2 * w if i == j else (f(i) if j == i + 1 else f.zero))
    parts = decompose_upper_2omega(t1, 3)
    assert parts[2].dense(10) + parts[3].dense(10) == Matrix.scalar(f, 10, w)
    assert dense_sum(parts, 10) == t1.dense(10)


@pytest.mark.parametrize("seed", range(5))
def test_upper_split_dense_random(seed):
    rng = gen.rng_for(seed)
    f = cyclotomic_field(rng.choice([2, 3, 4]))
    w = f.omega
    n = rng.randint(1, 9)
    rows = [[(2 * w if i == j else (gen.rand_scalar(f, rng) if j > i and rng.random() < 0.5 else f.zero))
             for j in range(n)] for i in range(n)]
    T = Matrix._wrap(f, rows)
    parts = upper_split_dense(T, w)
    assert sum(parts[1:], parts[0]) == T
    for P in parts:
        assert matmul(P, P) == P.scale(w)


# -- lower part ----------------------------------------------------------------------


def test_lower_constant():
    f = cyclotomic_field(3)
    w = f.omega
    t2 = lazy(f, lambda i, j: 3 * w if i == j else f.zero)
    prof = StaircaseProfile(t2)
    assert prof.blocks(5) == [(1, 1), (2, 2), (3, 3), (4, 4), (5, 5)]
    parts = decompose_lower_3omega(t2, 3)
    assert len(parts) == 6
    assert dense_sum(parts[:4], 16) == Matrix.scalar(f, 16, 2 * w)
    assert parts[4].dense(6).diagonal() == [w, 0, w, 0, w, 0]
    assert parts[5].dense(6).diagonal() == [0, w, 0, w, 0, w]
    assert dense_sum(parts, 16) == t2.dense(16) and all_potent(parts, 16)


def test_lower_bandwidth1_profile():
    f = cyclotomic_field(3)
    w = f.omega
    t2 = lazy(f, lambda i, j: 3 * w if i == j else (f.one if i == j + 1 else f.zero), lambda j: j + 1)
    prof = StaircaseProfile(t2)
    assert [prof.lp(m) for m in range(1, 8)] == [m + 1 for m in range(1, 8)]
    assert prof.blocks(6) == [(1, 2), (3, 4), (5, 6)]
    parts = decompose_lower_3omega(t2, 3)
    for N in (8, 16, 33):
        assert dense_sum(parts, N) == t2.dense(N) and all_potent(parts, N)


def test_lower_profile_against_direct_scan():
    rng = gen.rng_for(8)
    f = cyclotomic_field(4)
    w = f.omega
    depth = {j: rng.randint(0, 3) for j in range(1, 80)}
    t2 = lazy(f, lambda i, j: 3 * w if i == j else (f.one if j < i <= j + depth[j] else f.zero),
              lambda j: j + depth[j])
    prof = StaircaseProfile(t2)
    running = 0
    for m in range(1, 60):
        lm = max(i for i in range(m, m + 4) if not f.is_zero(t2.entry(i, m)))
        running = max(running, lm)
        assert prof.l(m) == lm and prof.lp(m) == running
    parts = decompose_lower_3omega(t2, 4)
    for N in (10, 32):
        assert dense_sum(parts, N) == t2.dense(N) and all_potent(parts, N)


def test_lower_finite_support_tail_blocks():
    f = cyclotomic_field(3)
    w = f.omega
    t2 = lazy(f, lambda i, j: 3 * w if i == j else (f(2) if (i, j) == (4, 1) else f.zero),
              lambda j: 4 if j == 1 else j)
    prof = StaircaseProfile(t2)
    assert prof.blocks(9)[-3:] == [(7, 7), (8, 8), (9, 9)]
    assert prof.blocks(9)[0] == (1, 4)


# -- diagonal part -------------------------------------------------------------------


def test_diagonal_zero():
    f = cyclotomic_field(3)
    d = lazy(f, lambda i, j: f.zero)
    parts = decompose_diagonal(d, 3)
    assert dense_sum(parts, 8).is_zero() and all_potent(parts, 8)


def test_diagonal_recurrence():
    f = cyclotomic_field(3)
    w = f.omega
    d = lazy(f, lambda i, j: 2 * w if i == j else f.zero)
    parts = decompose_diagonal(d, 3)
    X = parts[0].dense(8) + parts[1].dense(8)
    Y = parts[2].dense(9) + parts[3].dense(9)
    assert X.diagonal() == [2 * w, 0] * 4
    assert Y.diagonal() == [0, 2 * w, 0, 2 * w, 0, 2 * w, 0, 2 * w, 0]
    assert dense_sum(parts, 12) == d.dense(12)


def test_diagonal_single_entry():
    f = cyclotomic_field(5)
    w = f.omega
    c = f(7)
    d = lazy(f, lambda i, j: c if i == j == 1 else f.zero)
    parts = decompose_diagonal(d, 5)
    X = parts[0].dense(2) + parts[1].dense(2)
    assert X == Matrix.diag(f, [c, 2 * w - c])
    for N in (2, 3, 10, 11):
        assert dense_sum(parts, N) == d.dense(N) and all_potent(parts, N)


def test_diagonal_odd_cut_is_not_boundary_safe_for_x():
    """Cutting a 2x2 pair block is exactly what next_boundary avoids."""
    f = cyclotomic_field(3)
    d = lazy(f, lambda i, j: f(i) if i == j else f.zero)
    XB = decompose_diagonal(d, 3)[0]
    E = XB.dense(3)
    assert matpow(E, 4) != E
    assert XB.next_boundary(3) == 4


# -- full pipeline --------------------------------------------------------------------


def test_decompose14_zero():
    f = cyclotomic_field(3)
    dec = decompose14(lazy(f, lambda i, j: f.zero), 3)
    assert len(dec) == 14
    r = dec.check(16)
    assert r["ok"]


@pytest.mark.parametrize("k", [2, 3, 4])
def test_decompose14_tridiagonal(k):
    A = lazy_family({"family": "banded", "k": k, "band": {"-1": "1", "0": "2", "1": "w"}})
    dec = decompose14(A, k)
    rep = dec.verify([8, 16, 32, 64])
    assert rep["ok"] and rep["counts"] == {"upper": 4, "lower": 6, "diagonal": 4}


def test_decompose14_upper_input():
    A = lazy_family({"family": "banded", "k": 3, "band": {"0": "1", "1": "w", "3": "2"}})
    dec = decompose14(A, 3)
    assert len(dec) <= 14
    assert dec.verify([8, 17])["ok"]
