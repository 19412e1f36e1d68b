"""Subtori of the algebraic torus, cosets, and torsion points.

A subtorus is stored by its saturated character lattice A (the identity
component of {x : x^A = 1}) together with an integer parametrization
matrix B whose columns span ker(A); both sides are kept so consumers can
switch between equations and the monomial parametrization t -> t^B.
"""

from fractions import Fraction
from math import gcd

from .cyclo import CycloNumber
from .ratlin import (IntLattice, full_lattice, kernel_lattice, saturate,
                     integer_kernel_of_rational, l1_shortest_nonzero)
from .fan import lin_space


class Subtorus:
    """Connected algebraic subgroup of the n-torus."""

    __slots__ = ("ambient_dim", "char_lattice", "param")

    def __init__(self, ambient_dim, char_lattice, param):
        if not char_lattice.saturated:
            raise ValueError("character lattice must be saturated")
        self.ambient_dim = ambient_dim
        self.char_lattice = char_lattice
        self.param = tuple(tuple(int(x) for x in row) for row in param)
        if char_lattice.rank + self.dim != ambient_dim:
            raise ValueError("rank(A) + dim must equal n")
        for a in char_lattice.basis:
            for j in range(self.dim):
                if sum(a[i] * self.param[i][j]
                       for i in range(ambient_dim)) != 0:
                    raise ValueError("A * B != 0")

    @property
    def dim(self):
        return len(self.param[0]) if self.param else 0

    def param_columns(self):
        d = self.dim
        return [tuple(self.param[i][j] for i in range(self.ambient_dim))
                for j in range(d)]

    def __eq__(self, other):
        return (isinstance(other, Subtorus)
                and self.char_lattice == other.char_lattice)

    def __repr__(self):
        return "Subtorus(n=%d, dim=%d)" % (self.ambient_dim, self.dim)


def subtorus_from_equations(rows, ambient_dim=None):
    """Identity component of {x : x^rows = 1}.

    The row lattice is saturated first, so disconnected groups collapse
    to their connected component; B comes from the saturated kernel.
    """
    rows = [tuple(int(x) for x in r) for r in rows]
    if ambient_dim is None:
        if not rows:
            raise ValueError("empty equations need an explicit ambient_dim")
        ambient_dim = len(rows[0])
    rows = [r for r in rows if any(r)]
    if rows:
        a = saturate(IntLattice(ambient_dim, rows))
        ker = kernel_lattice(a.basis) if a.basis else full_lattice(ambient_dim)
    else:
        a = IntLattice(ambient_dim, (), _known_saturated=True)
        ker = full_lattice(ambient_dim)
    b_cols = list(ker.basis)
    param = [tuple(col[i] for col in b_cols) for i in range(ambient_dim)]
    return Subtorus(ambient_dim, a, param)


def j_tau(cone):
    """Identity component of the subgroup cut out by lin(tau).

    The equalities of a canonical cone span the annihilator of lin(tau),
    so saturating their row lattice gives the character data.
    """
    n = cone.ambient_dim
    span = lin_space(cone)
    ann = integer_kernel_of_rational(span.basis, n)
    return subtorus_from_equations(ann.basis, ambient_dim=n)


class TorsionPoint:
    """zeta = (zeta_m^a1, ..., zeta_m^an); m is the exact order (the lcm
    of the coordinate orders), enforced by dividing out gcd(a, m)."""

    __slots__ = ("order", "angles")

    def __init__(self, order, angles):
        if order < 1:
            raise ValueError("order must be >= 1")
        angles = [a % order for a in angles]
        g = order
        for a in angles:
            g = gcd(g, a)
        if g > 1:
            order //= g
            angles = [a // g for a in angles]
        self.order = order
        self.angles = tuple(angles)

    @property
    def dim(self):
        return len(self.angles)

    def coordinates(self):
        return tuple(CycloNumber.zeta(self.order, a) for a in self.angles)

    def inverse(self):
        return TorsionPoint(self.order, [-a for a in self.angles])

    def permuted(self, perm):
        return TorsionPoint(self.order, [self.angles[i] for i in perm])

    def __eq__(self, other):
        return (isinstance(other, TorsionPoint)
                and self.order == other.order
                and self.angles == other.angles)

    def __hash__(self):
        return hash((self.order, self.angles))

    def __repr__(self):
        return "TorsionPoint(order=%d, angles=%r)" % (self.order, self.angles)

    def to_json_dict(self):
        return {"order": self.order, "angles": list(self.angles)}


class Coset:
    """z * H for a subtorus H and a base point with invertible coords."""

    __slots__ = ("torus", "base")

    def __init__(self, torus, base):
        base = tuple(c if isinstance(c, CycloNumber)
                     else CycloNumber.from_rational(c) for c in base)
        if len(base) != torus.ambient_dim:
            raise ValueError("base point length mismatch")
        for c in base:
            if c.is_zero():
                raise ValueError("base point must have nonzero coordinates")
        self.torus = torus
        self.base = base

    def __repr__(self):
        return "Coset(dim=%d, base=%s)" % (
            self.torus.dim, "(" + ", ".join(str(c) for c in self.base) + ")")

    def to_json_dict(self):
        return {
            "base": [str(c) for c in self.base],
            "char_lattice": [list(r) for r in self.torus.char_lattice.basis],
        }


def script_N(point, bound=None):
    """Minimal L1 norm of a nonzero u with point^u = 1 (Lemma-style
    complexity of a torsion point).

    The relation lattice is {u : sum u_j a_j = 0 mod m}; u = (m, 0, ...)
    is always a relation, so the default bound m makes the search total.
    A user-supplied tighter bound returns None when exceeded.
    """
    m = point.order
    n = point.dim
    user_bound = bound
    if bound is None:
        bound = m
    row = list(point.angles) + [m]
    ker = kernel_lattice([row])
    proj = IntLattice(n, [r[:n] for r in ker.basis])
    v = l1_shortest_nonzero(proj, bound)
    if v is None:
        if user_bound is not None:
            return None
        raise AssertionError("total bound failed to find a relation")
    return sum(abs(x) for x in v)


def is_root_of_unity(c):
    """(order, exponent) with c = zeta_order^exponent, or None.

    The torsion units of Q(zeta_m) are exactly {+- zeta_m^j}, a cyclic
    group of order lcm(2, m) [Washington, Introduction to Cyclotomic
    Fields, Ch. 1], so comparing against that finite set is a complete
    test.
    """
    if c.is_zero():
        raise ValueError("zero is not a root of unity")
    m = c.conductor
    big = m if m % 2 == 0 else 2 * m
    for j in range(m):
        for sign in (1, -1):
            cand = CycloNumber.zeta(m, j)
            if sign < 0:
                cand = -cand
            if c == cand:
                # express sign * zeta_m^j as zeta_big^k
                k = j * (big // m) + (0 if sign > 0 else big // 2)
                k %= big
                g = gcd(k, big)
                order = big // g
                expo = (k // g) % order
                return (order, expo)
    return None


def enumerate_torsion(n, max_order):
    """All torsion points of exact order <= max_order in the n-torus.

    Exact order m means gcd(angles, m) = 1; each point appears once, in
    (order, angles) lexicographic order.  Restartable generator.
    """
    if max_order < 1:
        raise ValueError("max_order must be >= 1")

    def points_of_order(m):
        def rec(prefix, g):
            if len(prefix) == n:
                if g == 1:
                    yield TorsionPoint(m, prefix)
                return
            for a in range(m):
                yield from rec(prefix + [a], gcd(g, a))
        yield from rec([], m)

    for m in range(1, max_order + 1):
        yield from points_of_order(m)
