"""Scalar arithmetic: exact Q(zeta_k) and an approximate complex backend.

Elements of the cyclotomic field Q(zeta_k) are stored as integer numerator
vectors over a common positive denominator, in the power basis
1, zeta, ..., zeta^(phi(k)-1), reduced modulo the k-th cyclotomic polynomial.
That makes equality a plain tuple comparison.

Text syntax (used in every JSON file and in CLI output)::

    c0 + c1*w + c2*w^2 + ...

where each ``ci`` is an integer ``p`` or a rational ``p/q``.
"""

from __future__ import annotations

import cmath
import functools
import math
import re
from fractions import Fraction
from numbers import Rational as _RationalABC

__all__ = [
    "Rational",
    "CycloNum",
    "CyclotomicField",
    "FloatComplexField",
    "cyclotomic_polynomial",
    "cyclotomic_field",
    "omega_power",
    "invert",
    "embed",
    "euler_phi",
    "ScalarParseError",
]

Rational = Fraction


class ScalarParseError(ValueError):
    pass


# ---------------------------------------------------------------------------
# integer polynomial helpers (coefficient lists, lowest degree first)


def _trim(p):
    p = list(p)
    while p and p[-1] == 0:
        p.pop()
    return p


def _poly_mul(a, b):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return out


def _poly_divmod(num, den):
    """Exact division of polynomials with Fraction/int coefficients."""
    num = list(num)
    den = _trim(den)
    if not den:
        raise ZeroDivisionError("polynomial division by zero")
    q = [0] * max(len(num) - len(den) + 1, 1)
    lead = den[-1]
    for shift in range(len(num) - len(den), -1, -1):
        c = num[shift + len(den) - 1]
        if c:
            c = Fraction(c, lead) if isinstance(c, int) and isinstance(lead, int) else c / lead
            if isinstance(c, Fraction) and c.denominator == 1:
                c = c.numerator
            q[shift] = c
            for i, d in enumerate(den):
                num[shift + i] -= c * d
    return _trim(q), _trim(num)


@functools.lru_cache(maxsize=None)
def cyclotomic_polynomial(k: int) -> tuple:
    """Integer coefficients of Phi_k, lowest degree first.

    Computed by the recursive quotient (x^k - 1) / prod_{d | k, d < k} Phi_d.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    num = [-1] + [0] * (k - 1) + [1]
    for d in range(1, k):
        if k % d == 0:
            num, rem = _poly_divmod(num, cyclotomic_polynomial(d))
            if rem:
                raise ArithmeticError("non-exact cyclotomic division")
    return tuple(int(c) for c in num)


def euler_phi(k: int) -> int:
    return len(cyclotomic_polynomial(k)) - 1


# ---------------------------------------------------------------------------
# exact backend


class CyclotomicField:
    """The field Q(zeta_k) with zeta = exp(2 pi i / k)."""

    exact = True

    def __init__(self, k: int):
        if k < 1:
            raise ValueError("root order k must be >= 1")
        self.k = k
        self.modulus = cyclotomic_polynomial(k)
        self.phi = len(self.modulus) - 1
        phi = self.phi
        # x^e mod Phi_k for phi <= e <= 2*phi - 2, as integer vectors
        self._reduce = {}
        cur = [0] * phi
        if phi:
            cur = [-c for c in self.modulus[:phi]]  # x^phi
        for e in range(phi, max(2 * phi - 1, phi + 1)):
            self._reduce[e] = tuple(cur)
            # multiply by x
            top = cur[-1]
            cur = [0] + cur[:-1]
            if top:
                for i in range(phi):
                    cur[i] -= top * self.modulus[i]
        self.zero = CycloNum._make(self, (0,) * phi, 1)
        self.one = self(1)
        self._powers = [self._power_vector(j) for j in range(k)]
        self.omega = self.omega_power(1)

    def _power_vector(self, e):
        vec = [0] * self.phi
        if e < self.phi:
            vec[e] = 1
            return CycloNum._make(self, tuple(vec), 1)
        # reduce x^e by repeated multiplication by x
        cur = [0] * self.phi
        cur[self.phi - 1] = 1
        for _ in range(e - self.phi + 1):
            top = cur[-1]
            cur = [0] + cur[:-1]
            if top:
                for i in range(self.phi):
                    cur[i] -= top * self.modulus[i]
        return CycloNum._make(self, tuple(cur), 1)

    def __repr__(self):
        return f"CyclotomicField({self.k})"

    def __eq__(self, other):
        return isinstance(other, CyclotomicField) and other.k == self.k

    def __hash__(self):
        return hash(("cyclo", self.k))

    def __call__(self, value=0) -> CycloNum:
        """Coerce an int, Fraction, CycloNum of this field, or text."""
        if isinstance(value, CycloNum):
            if value.field.k != self.k:
                raise TypeError(f"element of Q(zeta_{value.field.k}) used in Q(zeta_{self.k})")
            return value
        if isinstance(value, str):
            return self.parse(value)
        if isinstance(value, bool):
            value = int(value)
        if isinstance(value, int):
            return CycloNum._make(self, (value,) + (0,) * (self.phi - 1), 1)
        if isinstance(value, _RationalABC):
            value = Fraction(value)
            return CycloNum._normalized(
                self, (value.numerator,) + (0,) * (self.phi - 1), value.denominator
            )
        raise TypeError(f"cannot coerce {type(value).__name__} into {self!r}")

    def from_coeffs(self, coeffs) -> CycloNum:
        """Element with the given power-basis coordinates.

        Longer vectors (e.g. a redundant basis 1, w, ..., w^(k-1)) are reduced.
        """
        fr = [Fraction(c) for c in coeffs]
        den = 1
        for c in fr:
            den = den * c.denominator // math.gcd(den, c.denominator)
        nums = [c.numerator * (den // c.denominator) for c in fr]
        return self._from_int_poly(nums, den)

    def _from_int_poly(self, nums, den):
        phi = self.phi
        low = list(nums[:phi]) + [0] * max(0, phi - len(nums))
        for e in range(phi, len(nums)):
            c = nums[e]
            if c:
                red = self._reduce.get(e)
                if red is None:
                    red = self._power_vector(e).num
                for i in range(phi):
                    low[i] += c * red[i]
        return CycloNum._normalized(self, tuple(low), den)

    def omega_power(self, j: int) -> CycloNum:
        return self._powers[j % self.k]

    def root(self, beta: int, j: int = 1) -> CycloNum:
        """The primitive beta-th root of unity zeta_k^(k/beta), raised to j."""
        if beta < 1 or self.k % beta:
            raise ValueError(f"Q(zeta_{self.k}) has no primitive {beta}-th root of unity")
        return self.omega_power((self.k // beta) * j)

    def is_zero(self, a) -> bool:
        return not any(a.num)

    def eq(self, a, b) -> bool:
        return self(a) == self(b)

    def conjugate(self, a) -> CycloNum:
        return self(a).conjugate()

    def parse(self, text: str) -> CycloNum:
        return _parse_cyclo(self, text)

    def format(self, a) -> str:
        return str(self(a))


@functools.lru_cache(maxsize=None)
def cyclotomic_field(k: int) -> CyclotomicField:
    return CyclotomicField(k)


class CycloNum:
    """An element of Q(zeta_k); immutable, canonical."""

    __slots__ = ("field", "num", "den", "_hash")

    @classmethod
    def _make(cls, field, num, den):
        self = object.__new__(cls)
        self.field = field
        self.num = num
        self.den = den
        self._hash = None
        return self

    @classmethod
    def _normalized(cls, field, num, den):
        if den < 0:
            num = tuple(-c for c in num)
            den = -den
        g = math.gcd(den, *num)
        if g > 1:
            num = tuple(c // g for c in num)
            den //= g
        return cls._make(field, num, den)

    @property
    def k(self) -> int:
        return self.field.k

    @property
    def coeffs(self) -> tuple:
        return tuple(Fraction(c, self.den) for c in self.num)

    def _coerce(self, other):
        if isinstance(other, CycloNum):
            if other.field is not self.field and other.field.k != self.field.k:
                raise TypeError(
                    f"mixing Q(zeta_{self.field.k}) and Q(zeta_{other.field.k}); embed first"
                )
            return other
        if isinstance(other, (int, Fraction)):
            return self.field(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if self.den == other.den:
            return CycloNum._normalized(
                self.field, tuple(a + b for a, b in zip(self.num, other.num)), self.den
            )
        d1, d2 = self.den, other.den
        return CycloNum._normalized(
            self.field, tuple(a * d2 + b * d1 for a, b in zip(self.num, other.num)), d1 * d2
        )

    __radd__ = __add__

    def __neg__(self):
        return CycloNum._make(self.field, tuple(-a for a in self.num), self.den)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other + (-self)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        a, b = self.num, other.num
        phi = self.field.phi
        if phi == 1:
            return CycloNum._normalized(self.field, (a[0] * b[0],), self.den * other.den)
        prod = [0] * (2 * phi - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    if y:
                        prod[i + j] += x * y
        low = prod[:phi]
        red = self.field._reduce
        for e in range(phi, 2 * phi - 1):
            c = prod[e]
            if c:
                r = red[e]
                for i in range(phi):
                    low[i] += c * r[i]
        return CycloNum._normalized(self.field, tuple(low), self.den * other.den)

    __rmul__ = __mul__

    def inverse(self) -> CycloNum:
        if not any(self.num):
            raise ZeroDivisionError("inverse of zero in Q(zeta_%d)" % self.field.k)
        phi = self.field.phi
        if phi == 1:
            return CycloNum._normalized(self.field, (self.den,), self.num[0])
        # extended Euclid on a(x) and Phi_k(x) over Q
        r0, r1 = [Fraction(c) for c in self.field.modulus], _trim(Fraction(c) for c in self.num)
        s0, s1 = [], [Fraction(1)]
        while len(r1) > 1:
            q, r = _poly_divmod(r0, r1)
            r0, r1 = r1, r
            s0, s1 = s1, _poly_sub(s0, _poly_mul(q, s1))
        # r1 is a nonzero constant c with s1 * a = c (mod Phi)
        c = Fraction(r1[0])
        inv_coeffs = [Fraction(x) / c * self.den for x in s1]
        return self.field.from_coeffs(inv_coeffs)

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self * other.inverse()

    def __rtruediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other * self.inverse()

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        result, base = self.field.one, self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, CycloNum):
            return self.field.k == other.field.k and self.den == other.den and self.num == other.num
        if isinstance(other, (int, Fraction)):
            return self == self.field(other)
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.field.k, self.num, self.den))
        return self._hash

    def __bool__(self):
        return any(self.num)

    def is_rational(self) -> bool:
        return not any(self.num[1:])

    def to_fraction(self) -> Fraction:
        if not self.is_rational():
            raise ValueError(f"{self} is not rational")
        return Fraction(self.num[0], self.den) if self.num else Fraction(0)

    def evaluate_at_power(self, target: CyclotomicField, step: int) -> CycloNum:
        """Image under zeta_k -> zeta_K^step (a field embedding when step is chosen right)."""
        out = target.zero
        for i, c in enumerate(self.num):
            if c:
                out = out + target.omega_power(step * i) * c
        return out / self.den if self.den != 1 else out

    def conjugate(self) -> CycloNum:
        return self.evaluate_at_power(self.field, self.field.k - 1)

    def __complex__(self):
        z = cmath.exp(2j * cmath.pi / self.field.k)
        return sum(complex(c) * z**i for i, c in enumerate(self.num)) / self.den

    def __str__(self):
        return _format_terms(self.coeffs)

    def __repr__(self):
        return f"CycloNum({self.field.k}, {str(self)!r})"


def _poly_sub(a, b):
    n = max(len(a), len(b))
    a = list(a) + [0] * (n - len(a))
    b = list(b) + [0] * (n - len(b))
    return _trim(x - y for x, y in zip(a, b))


def _format_coeff(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def _format_terms(coeffs) -> str:
    parts = []
    for e, c in enumerate(coeffs):
        if not c:
            continue
        mag = abs(c)
        if e == 0:
            body = _format_coeff(mag)
        else:
            mono = "w" if e == 1 else f"w^{e}"
            body = mono if mag == 1 else f"{_format_coeff(mag)}*{mono}"
        if not parts:
            parts.append(("-" if c < 0 else "") + body)
        else:
            parts.append((" - " if c < 0 else " + ") + body)
    return "".join(parts) if parts else "0"


_NUM = r"(?:\d+(?:\.\d+)?(?:/\d+)?)"
_TERM_RE = re.compile(
    rf"^(?P<coef>{_NUM})?(?:\*?(?P<w>w)(?:\^(?P<exp>\d+))?)?(?:\*(?P<coef2>{_NUM}))?$"
)


def _split_terms(text: str):
    s = re.sub(r"\s+", "", text)
    if not s:
        raise ScalarParseError("empty scalar")
    terms, sign, cur = [], 1, ""
    for i, ch in enumerate(s):
        if ch in "+-" and cur and not cur.endswith("^"):
            terms.append((sign, cur))
            sign, cur = (1 if ch == "+" else -1), ""
        elif ch in "+-" and not cur:
            sign = sign * (1 if ch == "+" else -1)
        else:
            cur += ch
    if not cur:
        raise ScalarParseError(f"dangling sign in {text!r}")
    terms.append((sign, cur))
    return terms


def _parse_number(tok: str) -> Fraction:
    if "." in tok:
        num, _, den = tok.partition("/")
        out = Fraction(num)
        return out / Fraction(den) if den else out
    return Fraction(tok)


def parse_terms(text: str) -> dict:
    """Parse ``c0 + c1*w + ...`` into {exponent: Fraction}."""
    out: dict = {}
    for sign, tok in _split_terms(text):
        m = _TERM_RE.match(tok)
        if not m or (m.group("coef") is None and m.group("w") is None):
            raise ScalarParseError(f"bad scalar term {tok!r} in {text!r}")
        coef = Fraction(1)
        if m.group("coef") is not None:
            coef *= _parse_number(m.group("coef"))
        if m.group("coef2") is not None:
            coef *= _parse_number(m.group("coef2"))
        exp = 0
        if m.group("w"):
            exp = int(m.group("exp")) if m.group("exp") else 1
        out[exp] = out.get(exp, Fraction(0)) + sign * coef
    return out


def _parse_cyclo(field: CyclotomicField, text: str) -> CycloNum:
    result = field.zero
    for e, c in parse_terms(text).items():
        result = result + field.omega_power(e) * c
    return result


def omega_power(field, j: int):
    return field.omega_power(j)


def invert(field, a):
    if field.is_zero(a):
        raise ZeroDivisionError("cannot invert zero")
    return field.one / a


def embed(a: CycloNum, target: CyclotomicField) -> CycloNum:
    """Embed Q(zeta_k) into Q(zeta_K) for k | K via zeta_k -> zeta_K^(K/k)."""
    if isinstance(a, (int, Fraction)):
        return target(a)
    k = a.field.k
    if target.k % k:
        raise ValueError(f"Q(zeta_{k}) does not embed in Q(zeta_{target.k})")
    if k == target.k:
        return a
    return a.evaluate_at_power(target, target.k // k)


# ---------------------------------------------------------------------------
# approximate backend


class FloatComplexField:
    """Double-precision complex numbers with one tolerance context.

    Equality means |a - b| <= eps * max(1, |a|, |b|); every comparison in
    matrices built over this backend goes through ``eq``/``is_zero``.
    """

    exact = False

    def __init__(self, k: int, eps: float = 1e-9):
        if k < 1:
            raise ValueError("root order k must be >= 1")
        self.k = k
        self.eps = eps
        self.zero = 0j
        self.one = 1 + 0j
        self.omega = cmath.exp(2j * cmath.pi / k)

    def __repr__(self):
        return f"FloatComplexField({self.k}, eps={self.eps})"

    def __eq__(self, other):
        return isinstance(other, FloatComplexField) and (other.k, other.eps) == (self.k, self.eps)

    def __hash__(self):
        return hash(("float", self.k, self.eps))

    def __call__(self, value=0) -> complex:
        if isinstance(value, str):
            return self.parse(value)
        if isinstance(value, CycloNum):
            return complex(value)
        return complex(value)

    def omega_power(self, j: int) -> complex:
        return cmath.exp(2j * cmath.pi * (j % self.k) / self.k)

    def root(self, beta: int, j: int = 1) -> complex:
        return cmath.exp(2j * cmath.pi * j / beta)

    def is_zero(self, a) -> bool:
        return abs(a) <= self.eps

    def eq(self, a, b) -> bool:
        a, b = complex(a), complex(b)
        return abs(a - b) <= self.eps * max(1.0, abs(a), abs(b))

    def conjugate(self, a) -> complex:
        return complex(a).conjugate()

    def parse(self, text: str) -> complex:
        try:
            return complex(text.replace(" ", ""))
        except ValueError:
            pass
        total = 0j
        for e, c in parse_terms(text).items():
            total += float(c) * self.omega_power(e)
        return total

    def format(self, a) -> str:
        a = complex(a)
        return repr(a)
