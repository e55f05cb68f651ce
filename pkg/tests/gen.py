"""Seeded random instance generators shared by the test modules."""

import random
from fractions import Fraction

from kpotent import Matrix, cyclotomic_field, matmul
from kpotent.certificates import MultiRootCertificate, RootPart, TraceCertificate


def rand_scalar(f, rng, lo=-3, hi=3, rational=False):
    coeffs = [rng.randint(lo, hi) for _ in range(f.phi)]
    if rational:
        coeffs = [Fraction(c, rng.choice([1, 1, 2, 3])) for c in coeffs]
    return f.from_coeffs(coeffs)


def rand_matrix(f, n, rng, density=0.7, **kw):
    return Matrix._wrap(
        f, [[rand_scalar(f, rng, **kw) if rng.random() < density else f.zero for _ in range(n)] for _ in range(n)]
    )


def rand_invertible(f, n, rng):
    """Product of a random unit-lower and unit-upper triangular matrix."""
    L = Matrix.identity(f, n).tolist()
    U = Matrix.identity(f, n).tolist()
    for i in range(n):
        for j in range(n):
            if i > j:
                L[i][j] = rand_scalar(f, rng, -2, 2)
            elif i < j:
                U[i][j] = rand_scalar(f, rng, -2, 2)
    return matmul(Matrix._wrap(f, L), Matrix._wrap(f, U))


def conjugate(P, X):
    return matmul(matmul(P, X), P.inverse())


def column_potent(f, n, p, root, rng):
    """Single nonzero column p, diagonal ``root``, random off-diagonal entries."""
    col = [rand_scalar(f, rng, -2, 2) if i != p else root for i in range(n)]
    return Matrix.zeros(f, n).with_column(p, col)


def rand_potent(f, n, k, rng):
    """Random (k+1)-potent matrix: conjugated diagonal of k-th roots and zeros."""
    d = [f.root(k, rng.randrange(k)) if rng.random() < 0.6 else f.zero for _ in range(n)]
    return conjugate(rand_invertible(f, n, rng), Matrix.diag(f, d))


def rand_certificate(k, rng, max_f1=12, min_f1=1):
    total = rng.randint(min_f1, max_f1)
    coeffs = [0] * k
    for _ in range(total):
        coeffs[rng.randrange(k)] += 1
    return TraceCertificate(k, tuple(coeffs))


def planted_theorem1(rng, k, n, max_f1=12):
    """A = P (sum of single-column potents) P^-1 built from a random certificate."""
    f = cyclotomic_field(k)
    while True:
        cert = rand_certificate(k, rng, max_f1)
        X = Matrix.zeros(f, n)
        for j, a in enumerate(cert.coeffs):
            for _ in range(a):
                X = X + column_potent(f, n, rng.randrange(n), f.root(k, j), rng)
        A = conjugate(rand_invertible(f, n, rng), X)
        if not (A.is_scalar_matrix() and n > 1):
            return f, A, cert


def planted_multiroot(rng, betas, n):
    from math import lcm

    L = lcm(*betas)
    f = cyclotomic_field(L)
    a0 = rng.randint(0, 2)
    roots = []
    X = Matrix.zeros(f, n)
    for _ in range(a0):
        X = X + column_potent(f, n, rng.randrange(n), f.one, rng)
    for beta in betas:
        coeffs = [0] * beta
        for _ in range(rng.randint(1, 3)):
            coeffs[rng.randrange(1, beta)] += 1
        roots.append(RootPart(beta, coeffs))
        for j, c in enumerate(coeffs):
            for _ in range(c):
                X = X + column_potent(f, n, rng.randrange(n), f.root(beta, j), rng)
    A = conjugate(rand_invertible(f, n, rng), X)
    return f, A, MultiRootCertificate(a0, roots)


def rand_order_matrix(f, n, k, rng):
    """Conjugated diagonal of k-th roots of unity: order divides k."""
    d = [f.root(k, rng.randrange(k)) for _ in range(n)]
    return conjugate(rand_invertible(f, n, rng), Matrix.diag(f, d))


def rng_for(seed):
    return random.Random(seed)
