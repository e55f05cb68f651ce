"""Trace certificates: nonnegative integer polynomials F with F(w) = tr(A).

A certificate is always kept as an explicit coefficient vector
(a_0, ..., a_{k-1}).  As an element of Q(zeta_k) the value F(w) has many such
representations whenever phi(k) < k, so certificates are never compared as
field elements, only coefficient-wise.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from functools import reduce

from .matrix import Matrix, matmul
from .scalars import CycloNum, cyclotomic_field, cyclotomic_polynomial, embed

__all__ = [
    "TraceCertificate",
    "MultiRootCertificate",
    "SignedCertificate",
    "RootPart",
    "NotPotentError",
    "InfeasibleError",
    "NonIntegralError",
    "extract_certificate_from_potent",
    "find_certificate",
    "verify_multiroot",
]


class NotPotentError(ValueError):
    pass


class InfeasibleError(ValueError):
    """No construction exists within the given budget (``reason`` says why)."""

    def __init__(self, reason: str):
        super().__init__(reason)
        self.reason = reason


class NonIntegralError(InfeasibleError):
    pass


@dataclass(frozen=True)
class TraceCertificate:
    k: int
    coeffs: tuple
    target: CycloNum | None = None
    rank_bound: int = 0

    def __post_init__(self):
        object.__setattr__(self, "coeffs", tuple(int(c) for c in self.coeffs))
        if len(self.coeffs) != self.k:
            raise ValueError(f"need exactly k={self.k} coefficients, got {len(self.coeffs)}")
        if any(c < 0 for c in self.coeffs):
            raise ValueError("certificate coefficients must be nonnegative")

    @property
    def F1(self) -> int:
        return sum(self.coeffs)

    def value(self, field=None):
        """F(w) in Q(zeta_k) (or in ``field`` when given, w = its primitive k-th root)."""
        field = field or cyclotomic_field(self.k)
        out = field.zero
        for j, a in enumerate(self.coeffs):
            if a:
                out = out + field.root(self.k, j) * a
        return out

    def is_valid(self) -> bool:
        ok = self.F1 >= self.rank_bound
        if self.target is not None:
            ok = ok and self.value(self.target.field) == self.target
        return ok

    def __add__(self, other):
        if other.k != self.k:
            raise ValueError("certificates for different k")
        return TraceCertificate(self.k, [a + b for a, b in zip(self.coeffs, other.coeffs)])

    def to_json(self) -> dict:
        return {"k": self.k, "coeffs": list(self.coeffs), "F1": self.F1}

    @classmethod
    def from_json(cls, data: dict):
        return cls(int(data["k"]), data["coeffs"])

    def __str__(self):
        terms = [
            (str(a) if j == 0 else (("" if a == 1 else f"{a}*") + ("x" if j == 1 else f"x^{j}")))
            for j, a in enumerate(self.coeffs)
            if a
        ]
        return " + ".join(terms) if terms else "0"


@dataclass(frozen=True)
class RootPart:
    """One band of a multi-root certificate: F_i with root order beta."""

    beta: int
    coeffs: tuple

    def __post_init__(self):
        object.__setattr__(self, "coeffs", tuple(Fraction(c) for c in self.coeffs))

    @property
    def degree(self) -> int:
        nz = [j for j, c in enumerate(self.coeffs) if c]
        return nz[-1] if nz else -1


@dataclass(frozen=True)
class MultiRootCertificate:
    """tr(A) = a0 + sum_i F_i(w_i) with w_i a primitive beta_i-th root."""

    a0: int
    roots: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "roots", tuple(
            r if isinstance(r, RootPart) else RootPart(r[0], r[1]) for r in self.roots
        ))

    @property
    def order(self) -> int:
        """Smallest L such that Q(zeta_L) holds every root."""
        return reduce(math.lcm, (r.beta for r in self.roots), 1) if self.roots else 1

    @property
    def F1(self):
        return self.a0 + sum(sum(r.coeffs) for r in self.roots)

    def terms(self):
        """(coefficient, beta, exponent) triples for every nonzero coefficient."""
        out = []
        if self.a0:
            out.append((Fraction(self.a0), 1, 0))
        for r in self.roots:
            for j, c in enumerate(r.coeffs):
                if c:
                    out.append((c, r.beta, j))
        return out

    def value(self, field=None):
        field = field or cyclotomic_field(max(self.order, 1))
        out = field(self.a0)
        for c, beta, j in self.terms():
            if beta != 1 or j:
                out = out + field.root(beta, j) * c
        return out

    def to_json(self) -> dict:
        return {
            "a0": _num_json(self.a0),
            "roots": [{"beta": r.beta, "coeffs": [_num_json(c) for c in r.coeffs]} for r in self.roots],
            "F1": _num_json(self.F1),
        }

    @classmethod
    def from_json(cls, data: dict):
        return cls(
            _num_parse(data.get("a0", 0)),
            [RootPart(int(r["beta"]), [_num_parse(c) for c in r["coeffs"]]) for r in data.get("roots", [])],
        )


@dataclass(frozen=True)
class SignedCertificate:
    """Possibly negative (or rational) coefficients, for linear combinations.

    Zero coefficients mean "no term"; every stored term is nonzero.
    """

    a0: Fraction = Fraction(0)
    roots: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "a0", Fraction(self.a0))
        object.__setattr__(self, "roots", tuple(
            r if isinstance(r, RootPart) else RootPart(r[0], r[1]) for r in self.roots
        ))

    @classmethod
    def single(cls, k: int, coeffs):
        """a_0 + a_1 w + ... + a_{k-1} w^{k-1} for a single k-th root w."""
        coeffs = [Fraction(c) for c in coeffs]
        rest = [Fraction(0)] + coeffs[1:]
        return cls(coeffs[0] if coeffs else 0, [RootPart(k, rest)] if any(rest) else [])

    def terms(self):
        return MultiRootCertificate.terms(self)  # same layout

    @property
    def order(self) -> int:
        return MultiRootCertificate.order.fget(self)

    @property
    def module(self) -> Fraction:
        return sum((abs(c) for c, _, _ in self.terms()), Fraction(0))

    @property
    def minimum(self) -> Fraction:
        t = self.terms()
        return min(abs(c) for c, _, _ in t) if t else Fraction(0)

    def value(self, field=None):
        return MultiRootCertificate.value(self, field)

    def to_json(self) -> dict:
        return {
            "a0": _num_json(self.a0),
            "roots": [{"beta": r.beta, "coeffs": [_num_json(c) for c in r.coeffs]} for r in self.roots],
            "module": _num_json(self.module),
        }

    @classmethod
    def from_json(cls, data: dict):
        return cls(
            _num_parse(data.get("a0", 0)),
            [RootPart(int(r["beta"]), [_num_parse(c) for c in r["coeffs"]]) for r in data.get("roots", [])],
        )


def _num_json(x):
    x = Fraction(x)
    return x.numerator if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def _num_parse(x):
    return Fraction(x) if isinstance(x, str) else Fraction(x)


# ---------------------------------------------------------------------------


def extract_certificate_from_potent(E: Matrix, k: int) -> TraceCertificate:
    """Eigenvalue multiplicities of a (k+1)-potent matrix via spectral projectors.

    a_j = rank(P_j) with P_j = prod_{l != j} (E - l I) / (lam_j - l) over the
    candidate spectrum {0, 1, w, ..., w^(k-1)}.
    """
    from .matrix import is_kpotent

    if not is_kpotent(E, k + 1):
        raise NotPotentError(f"matrix is not {k + 1}-potent")
    f = E.field
    n = E.rows
    spectrum = [f.root(k, j) for j in range(k)]
    ident = Matrix.identity(f, n)
    shifted = [E - ident.scale(lam) for lam in spectrum]
    coeffs = []
    for j, lam in enumerate(spectrum):
        P = E.scale(f.one / lam)  # factor for eigenvalue 0
        for i, other in enumerate(spectrum):
            if i != j:
                P = matmul(P, shifted[i]).scale(f.one / (lam - other))
        coeffs.append(P.rank())
    return TraceCertificate(k, coeffs, E.trace() if f.exact else None, E.rank())


def _integer_coords(t: CycloNum, k: int):
    field = cyclotomic_field(k)
    t = embed(t, field) if t.field.k != k else t
    if t.den != 1:
        raise NonIntegralError(f"trace {t} is not in Z[w] (denominator {t.den})")
    return list(t.num)


def find_certificate(t, k: int, r: int = 0, budget: int = 64) -> TraceCertificate:
    """Nonnegative (a_0..a_{k-1}) with sum a_j w^j = t and sum a_j >= r.

    Minimizes F(1), then the coefficient vector lexicographically.  Every
    solution is a_base + (coefficients of Phi_k(x) * q(x)) for integer q of
    degree < k - phi(k); since Phi_k is monic with constant term 1, the
    leading free coordinates a_0..a_{k-phi-1} determine q one by one, so the
    search enumerates those coordinates with sum <= the current total.
    """
    field = cyclotomic_field(k)
    if not isinstance(t, CycloNum):
        t = field(t)
    coords = _integer_coords(t, k)
    phi = len(coords)
    dim = k - phi
    modulus = cyclotomic_polynomial(k)
    base = coords + [0] * dim
    phi1 = sum(modulus)  # Phi_k(1): the step by which totals move
    base_total = sum(base)

    def complete(free):
        # solve q from free coordinates, return full vector
        q = []
        for j in range(dim):
            acc = base[j] + sum(q[i] * modulus[j - i] for i in range(len(q)) if 0 <= j - i <= phi)
            q.append(free[j] - acc)  # modulus[0] == 1 for k >= 2
        vec = list(base)
        for i, qi in enumerate(q):
            if qi:
                for d, m in enumerate(modulus):
                    vec[i + d] += qi * m
        return vec

    if k == 1:
        total = coords[0]
        if total < 0 or total < r or total > budget:
            raise InfeasibleError(f"no certificate with {r} <= F(1) <= {budget}")
        return TraceCertificate(1, [total], t, r)

    for total in range(max(r, 0), budget + 1):
        # totals reachable: base_total + phi1 * s
        if phi1 and (total - base_total) % phi1:
            continue
        if phi1 == 0 and total != base_total:
            continue
        found = _search_free(dim, total, complete)
        if found is not None:
            return TraceCertificate(k, found, t, r)
    raise InfeasibleError(f"no nonnegative certificate with {r} <= F(1) <= {budget}")


def _search_free(dim, total, complete):
    """Lexicographically smallest valid vector whose coordinates sum to total."""
    free = []

    def rec(remaining):
        if len(free) == dim:
            vec = complete(free)
            if all(c >= 0 for c in vec) and sum(vec) == total:
                return vec
            return None
        for v in range(remaining + 1):
            free.append(v)
            got = rec(remaining - v)
            free.pop()
            if got is not None:
                return got
        return None

    return rec(total)


def verify_multiroot(cert: MultiRootCertificate, t, r: int):
    """Return (True, "") or (False, reason)."""
    betas = [p.beta for p in cert.roots]
    if len(set(betas)) != len(betas):
        return False, "duplicate root order"
    if any(b < 2 for b in betas):
        return False, "root order must be >= 2"
    if cert.a0 < 0 or Fraction(cert.a0).denominator != 1:
        return False, "a0 must be a nonnegative integer"
    for p in cert.roots:
        if p.coeffs and p.coeffs[0]:
            return False, f"band beta={p.beta} has a nonzero constant term"
        if not 1 <= p.degree <= p.beta - 1:
            return False, f"band beta={p.beta} has degree {p.degree} outside [1, {p.beta - 1}]"
        if any(c < 0 or c.denominator != 1 for c in p.coeffs):
            return False, f"band beta={p.beta} has a non-natural coefficient"
    L = cert.order
    if isinstance(t, CycloNum):
        L = math.lcm(L, t.field.k)
    field = cyclotomic_field(L)
    target = embed(t, field) if isinstance(t, CycloNum) else field(t)
    if cert.value(field) != target:
        return False, "trace mismatch"
    if cert.F1 < r:
        return False, "rank bound"
    return True, ""
