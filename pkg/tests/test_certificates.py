import itertools
from fractions import Fraction

import pytest

import gen
from kpotent import Matrix, cyclotomic_field
from kpotent.certificates import (
    InfeasibleError,
    MultiRootCertificate,
    NonIntegralError,
    NotPotentError,
    RootPart,
    SignedCertificate,
    TraceCertificate,
    extract_certificate_from_potent,
    find_certificate,
    verify_multiroot,
)


def brute_force(t, k, r, limit):
    """Oracle: scan all vectors by total, then lexicographically."""
    f = cyclotomic_field(k)
    for total in range(r, limit + 1):
        for vec in sorted(v for v in itertools.product(range(total + 1), repeat=k) if sum(v) == total):
            if sum((f.root(k, j) * a for j, a in enumerate(vec)), f.zero) == t:
                return vec
    return None


def test_extract_examples():
    f2 = cyclotomic_field(2)
    assert extract_certificate_from_potent(Matrix.identity(f2, 3), 2).coeffs == (3, 0)
    f3 = cyclotomic_field(3)
    w = f3.omega
    assert extract_certificate_from_potent(Matrix.diag(f3, [1, w, w, 0]), 3).coeffs == (1, 2, 0)
    for k in (2, 3, 4, 5):
        f = cyclotomic_field(k)
        E = Matrix(f, [[0, 3, 0], [0, f.omega, 0], [0, -1, 0]])
        c = extract_certificate_from_potent(E, k)
        assert c.coeffs == tuple(1 if j == 1 else 0 for j in range(k))


def test_extract_rejects_non_potent():
    f = cyclotomic_field(3)
    with pytest.raises(NotPotentError):
        extract_certificate_from_potent(Matrix(f, [[0, 1], [0, 0]]), 3)


@pytest.mark.parametrize("seed", range(25))
def test_extract_matches_planted_diagonal(seed):
    rng = gen.rng_for(seed)
    k = rng.choice([2, 3, 4, 5, 6])
    f = cyclotomic_field(k)
    n = rng.randint(1, 5)
    exps = [rng.randrange(k + 1) for _ in range(n)]  # k means eigenvalue 0
    D = Matrix.diag(f, [f.root(k, e) if e < k else f.zero for e in exps])
    E = gen.conjugate(gen.rand_invertible(f, n, rng), D)
    c = extract_certificate_from_potent(E, k)
    assert c.coeffs == tuple(exps.count(j) for j in range(k))
    assert c.value(f) == E.trace()


def test_find_examples():
    assert find_certificate(0, 3, 0).coeffs == (0, 0, 0)
    c = find_certificate(cyclotomic_field(2)(3), 2, 2)
    assert c.coeffs == (3, 0) and c.F1 == 3


def test_find_ex1_trace_has_a_nonnegative_certificate():
    """1 + w + w^2 = 0 lets any Z[w] element be shifted to nonnegative coordinates."""
    f = cyclotomic_field(3)
    w = f.omega
    t = 4 - 6 * w + 10 * w * w
    c = find_certificate(t, 3, 3)
    assert c.coeffs == (10, 0, 16)
    assert c.value(f) == t
    with pytest.raises(InfeasibleError):
        find_certificate(t, 3, 3, budget=20)
    s = SignedCertificate.single(3, [4, -6, 10])
    assert s.module == 20 and s.value(f) == t


@pytest.mark.parametrize("k", [2, 3, 4, 5, 6])
def test_find_is_minimal_against_brute_force(k):
    rng = gen.rng_for(k)
    f = cyclotomic_field(k)
    for _ in range(6):
        t = gen.rand_scalar(f, rng, -2, 2)
        r = rng.randint(0, 3)
        got = find_certificate(t, k, r)
        assert got.value(f) == t and got.F1 >= r
        expected = brute_force(t, k, r, got.F1)
        assert got.coeffs == expected


def test_find_non_integral():
    f = cyclotomic_field(3)
    with pytest.raises(NonIntegralError):
        find_certificate(f(Fraction(1, 2)), 3)


def test_certificate_json_roundtrip():
    c = TraceCertificate(3, (4, 0, 10))
    assert c.to_json() == {"k": 3, "coeffs": [4, 0, 10], "F1": 14}
    assert TraceCertificate.from_json(c.to_json()) == c
    m = MultiRootCertificate(1, [RootPart(3, [0, 2]), RootPart(4, [0, 0, 1])])
    assert MultiRootCertificate.from_json(m.to_json()) == m


def test_verify_multiroot():
    f = cyclotomic_field(12)
    w3, w4 = f.root(3, 1), f.root(4, 1)
    good = MultiRootCertificate(1, [RootPart(3, [0, 1]), RootPart(4, [0, 1])])
    t = f.one + w3 + w4
    assert verify_multiroot(good, t, 3) == (True, "")
    assert verify_multiroot(good, t, 4) == (False, "rank bound")
    dup = MultiRootCertificate(1, [RootPart(3, [0, 1]), RootPart(3, [0, 1])])
    assert verify_multiroot(dup, t, 0)[1] == "duplicate root order"
    const = MultiRootCertificate(0, [RootPart(3, [1, 1])])
    assert "constant term" in verify_multiroot(const, t, 0)[1]
    assert verify_multiroot(good, t + 1, 0)[1] == "trace mismatch"


def test_single_root_certificate_is_multiroot_special_case():
    f = cyclotomic_field(3)
    c = TraceCertificate(3, (2, 1, 3))
    m = MultiRootCertificate(2, [RootPart(3, [0, 1, 3])])
    assert m.value(f) == c.value(f) and m.F1 == c.F1
