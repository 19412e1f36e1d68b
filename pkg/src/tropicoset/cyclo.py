"""Exact arithmetic in cyclotomic fields Q(zeta_m).

Elements are residues modulo the m-th cyclotomic polynomial, stored as
rational coefficient vectors of length phi(m) in the power basis
1, zeta, ..., zeta^(phi(m)-1).  Conductor 1 encodes plain rationals;
mixed conductors are lifted to the lcm on demand.
"""

from fractions import Fraction
from functools import lru_cache
from math import gcd, cos, sin, pi


def _poly_trim(p):
    while p and p[-1] == 0:
        p = p[:-1]
    return p


def _poly_mul(a, b):
    if not a or not b:
        return ()
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                if y:
                    out[i + j] += x * y
    return tuple(out)


def _poly_divmod(a, b):
    """Quotient and remainder in Q[x]; b must be nonzero."""
    a = list(a)
    b = _poly_trim(tuple(b))
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    inv_lead = Fraction(1) / b[-1]
    q = [Fraction(0)] * max(0, len(a) - len(b) + 1)
    while len(_poly_trim(tuple(a))) >= len(b):
        a = list(_poly_trim(tuple(a)))
        shift = len(a) - len(b)
        f = a[-1] * inv_lead
        q[shift] = f
        for i, y in enumerate(b):
            a[shift + i] -= f * y
    return tuple(q), _poly_trim(tuple(a))


@lru_cache(maxsize=None)
def cyclotomic_polynomial(m):
    """Coefficients (ascending) of Phi_m, via the recursive division
    Phi_m(x) = (x^m - 1) / prod_{d | m, d < m} Phi_d(x).

    All coefficients are integers; degree is phi(m).
    """
    if m < 1:
        raise ValueError("conductor must be >= 1")
    num = [Fraction(-1)] + [Fraction(0)] * (m - 1) + [Fraction(1)]
    den = (Fraction(1),)
    for d in range(1, m):
        if m % d == 0:
            den = _poly_mul(den, cyclotomic_polynomial(d))
    q, r = _poly_divmod(tuple(num), den)
    if r:
        raise AssertionError("cyclotomic division left a remainder")
    assert all(c.denominator == 1 for c in q)
    return tuple(int(c) for c in q)


@lru_cache(maxsize=None)
def euler_phi(m):
    return len(cyclotomic_polynomial(m)) - 1


def _reduce_mod_phi(coeffs, m):
    phi = cyclotomic_polynomial(m)
    _, r = _poly_divmod(tuple(coeffs), tuple(Fraction(c) for c in phi))
    deg = len(phi) - 1
    out = list(r) + [Fraction(0)] * (deg - len(r))
    return tuple(out)


def _poly_xgcd(a, b):
    """Extended Euclid in Q[x]: returns (g, s, t) with s a + t b = g."""
    r0, r1 = _poly_trim(tuple(a)), _poly_trim(tuple(b))
    s0, s1 = (Fraction(1),), ()
    t0, t1 = (), (Fraction(1),)
    while r1:
        q, r = _poly_divmod(r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, _poly_trim(tuple(x - y for x, y in
                                      _zip_pad(s0, _poly_mul(q, s1))))
        t0, t1 = t1, _poly_trim(tuple(x - y for x, y in
                                      _zip_pad(t0, _poly_mul(q, t1))))
    return r0, s0, t0


def _zip_pad(a, b):
    n = max(len(a), len(b))
    a = tuple(a) + (Fraction(0),) * (n - len(a))
    b = tuple(b) + (Fraction(0),) * (n - len(b))
    return zip(a, b)


class CycloNumber:
    """An element of Q(zeta_m), reduced modulo Phi_m."""

    __slots__ = ("conductor", "coeffs")

    def __init__(self, conductor, coeffs):
        if conductor < 1:
            raise ValueError("conductor must be >= 1")
        deg = euler_phi(conductor)
        coeffs = tuple(Fraction(c) for c in coeffs)
        if len(coeffs) > deg:
            coeffs = _reduce_mod_phi(coeffs, conductor)
        else:
            coeffs = coeffs + (Fraction(0),) * (deg - len(coeffs))
        self.conductor = conductor
        self.coeffs = coeffs

    @classmethod
    def from_rational(cls, q):
        return cls(1, (Fraction(q),))

    @classmethod
    def zeta(cls, m, k=1):
        """zeta_m^k as an element of Q(zeta_m)."""
        k %= m
        mono = [Fraction(0)] * k + [Fraction(1)]
        return cls(m, tuple(mono))

    def lift(self, conductor):
        """Image under zeta_m -> zeta_M^(M/m); m must divide conductor."""
        if conductor == self.conductor:
            return self
        if conductor % self.conductor:
            raise ValueError("can only lift to a multiple conductor")
        step = conductor // self.conductor
        out = [Fraction(0)] * ((len(self.coeffs) - 1) * step + 1 or 1)
        for i, c in enumerate(self.coeffs):
            if c:
                out[i * step] += c
        return CycloNumber(conductor, tuple(out))

    def _common(self, other):
        if not isinstance(other, CycloNumber):
            other = CycloNumber.from_rational(other)
        m = self.conductor * other.conductor // gcd(self.conductor,
                                                    other.conductor)
        return self.lift(m), other.lift(m)

    def is_zero(self):
        return all(c == 0 for c in self.coeffs)

    def is_rational(self):
        return all(c == 0 for c in self.coeffs[1:])

    def as_fraction(self):
        if not self.is_rational():
            raise ValueError("not a rational number")
        return self.coeffs[0]

    def __add__(self, other):
        a, b = self._common(other)
        return CycloNumber(a.conductor,
                           tuple(x + y for x, y in zip(a.coeffs, b.coeffs)))

    __radd__ = __add__

    def __neg__(self):
        return CycloNumber(self.conductor, tuple(-c for c in self.coeffs))

    def __sub__(self, other):
        return self + (-other if isinstance(other, CycloNumber)
                       else CycloNumber.from_rational(-Fraction(other)))

    def __rsub__(self, other):
        return CycloNumber.from_rational(other) - self

    def __mul__(self, other):
        a, b = self._common(other)
        prod = _poly_mul(a.coeffs, b.coeffs)
        return CycloNumber(a.conductor, prod)

    __rmul__ = __mul__

    def inv(self):
        """Multiplicative inverse via extended Euclid against Phi_m."""
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero")
        phi = tuple(Fraction(c) for c in cyclotomic_polynomial(self.conductor))
        g, s, _ = _poly_xgcd(self.coeffs, phi)
        # Phi_m is irreducible over Q, so g is a nonzero constant
        assert len(g) == 1 and g[0] != 0
        scale = Fraction(1) / g[0]
        return CycloNumber(self.conductor, tuple(x * scale for x in s))

    def __truediv__(self, other):
        if not isinstance(other, CycloNumber):
            other = CycloNumber.from_rational(other)
        return self * other.inv()

    def __rtruediv__(self, other):
        return CycloNumber.from_rational(other) * self.inv()

    def __pow__(self, k):
        if k == 0:
            return CycloNumber.from_rational(1)
        base = self if k > 0 else self.inv()
        out = CycloNumber.from_rational(1)
        for _ in range(abs(k)):
            out = out * base
        return out

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = CycloNumber.from_rational(other)
        if not isinstance(other, CycloNumber):
            return NotImplemented
        a, b = self._common(other)
        return a.coeffs == b.coeffs

    def __hash__(self):
        if self.is_rational():
            return hash(self.coeffs[0])
        return hash((self.conductor, self.coeffs))

    def to_complex(self):
        """Numeric image under zeta_m -> exp(2 pi i / m)."""
        z = complex(cos(2 * pi / self.conductor), sin(2 * pi / self.conductor))
        acc = 0j
        for c in reversed(self.coeffs):
            acc = acc * z + complex(c)
        return acc

    def __str__(self):
        parts = []
        for i, c in enumerate(self.coeffs):
            if not c:
                continue
            if i == 0:
                parts.append((c, ""))
            else:
                power = "zeta%d" % self.conductor
                if i > 1:
                    power += "^%d" % i
                parts.append((c, power))
        if not parts:
            return "0"
        pieces = []
        for idx, (c, power) in enumerate(parts):
            sign = "-" if c < 0 else "+"
            mag = -c if c < 0 else c
            if power and mag == 1:
                body = power
            elif power:
                body = "%s*%s" % (mag, power)
            else:
                body = str(mag)
            if idx == 0:
                pieces.append(body if sign == "+" else "-" + body)
            else:
                pieces.append("%s %s" % (sign, body))
        return " ".join(pieces)

    def __repr__(self):
        return "CycloNumber(%d, %r)" % (self.conductor, self.coeffs)


def cyclo_arith(a, b, op):
    """Field operation dispatch: op in {'add', 'mul', 'inv'}.

    'inv' ignores ``b`` and errors on zero input.
    """
    if op == "add":
        return a + b
    if op == "mul":
        return a * b
    if op == "inv":
        return a.inv()
    raise ValueError("unknown op %r" % (op,))


ZERO = CycloNumber.from_rational(0)
ONE = CycloNumber.from_rational(1)
