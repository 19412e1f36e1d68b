"""Laurent polynomials over cyclotomic fields, plus the text grammar.

Terms map integer exponent vectors to nonzero coefficients; the zero
polynomial is the empty map.  Structural equality holds because terms
are kept in sorted-key order and coefficients compare across conductors.

Grammar (whitespace insignificant)::

    poly     := term (('+'|'-') term)*
    term     := coeff ('*' factor)* | factor ('*' factor)*
    factor   := var ('^' int)?
    var      := 'x' index
    coeff    := rational | rational '*' zeta | zeta
    zeta     := 'zeta' conductor ('^' int)?
    rational := int ('/' posint)?

Examples: ``x1 + 2*x2 + x3 - 1``, ``zeta6^2*x1 - x2^-1``.
"""

from fractions import Fraction

from .cyclo import CycloNumber
from .ratlin import (IntLattice, full_lattice, kernel_lattice,
                     feasible_nonneg_combination)


def _coerce_coeff(c):
    if isinstance(c, CycloNumber):
        return c
    return CycloNumber.from_rational(c)


class LaurentPoly:
    """f = sum over u of c_u x^u with c_u in Q(zeta_m), u in Z^n."""

    __slots__ = ("num_vars", "_terms")

    def __init__(self, num_vars, terms):
        self.num_vars = num_vars
        items = []
        for exp, c in (terms.items() if isinstance(terms, dict) else terms):
            exp = tuple(int(e) for e in exp)
            if len(exp) != num_vars:
                raise ValueError("exponent length != num_vars")
            c = _coerce_coeff(c)
            if not c.is_zero():
                items.append((exp, c))
        items.sort(key=lambda t: t[0])
        merged = []
        for exp, c in items:
            if merged and merged[-1][0] == exp:
                s = merged[-1][1] + c
                if s.is_zero():
                    merged.pop()
                else:
                    merged[-1] = (exp, s)
            else:
                merged.append((exp, c))
        self._terms = tuple(merged)

    @property
    def terms(self):
        return dict(self._terms)

    def support(self):
        return [exp for exp, _ in self._terms]

    def is_zero(self):
        return not self._terms

    def coefficient(self, exp):
        exp = tuple(exp)
        for e, c in self._terms:
            if e == exp:
                return c
        return CycloNumber.from_rational(0)

    def __eq__(self, other):
        return (isinstance(other, LaurentPoly)
                and self.num_vars == other.num_vars
                and len(self._terms) == len(other._terms)
                and all(e1 == e2 and c1 == c2 for (e1, c1), (e2, c2)
                        in zip(self._terms, other._terms)))

    def __hash__(self):
        return hash((self.num_vars, tuple(e for e, _ in self._terms)))

    def __add__(self, other):
        if self.num_vars != other.num_vars:
            raise ValueError("variable count mismatch")
        return LaurentPoly(self.num_vars,
                           list(self._terms) + list(other._terms))

    def __neg__(self):
        return LaurentPoly(self.num_vars,
                           [(e, -c) for e, c in self._terms])

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if self.num_vars != other.num_vars:
            raise ValueError("variable count mismatch")
        out = {}
        for e1, c1 in self._terms:
            for e2, c2 in other._terms:
                e = tuple(a + b for a, b in zip(e1, e2))
                if e in out:
                    out[e] = out[e] + c1 * c2
                else:
                    out[e] = c1 * c2
        return LaurentPoly(self.num_vars, out)

    def evaluate(self, point):
        """Exact value at a point with nonzero CycloNumber coordinates."""
        point = [_coerce_coeff(z) for z in point]
        if len(point) != self.num_vars:
            raise ValueError("point length != num_vars")
        acc = CycloNumber.from_rational(0)
        for exp, c in self._terms:
            val = c
            for z, e in zip(point, exp):
                if e:
                    val = val * z ** e
            acc = acc + val
        return acc

    def evaluate_complex(self, point):
        """Floating-point value at a complex point (screening only)."""
        acc = 0j
        for exp, c in self._terms:
            val = c.to_complex()
            for z, e in zip(point, exp):
                if e:
                    val *= z ** e
            acc += val
        return acc

    def complex_terms(self):
        return [(exp, c.to_complex()) for exp, c in self._terms]

    def __str__(self):
        return poly_to_text(self)

    def __repr__(self):
        return "LaurentPoly(%d, %r)" % (self.num_vars, str(self))


class Polytope:
    """Lattice polytope stored by its vertex set (extreme points only)."""

    __slots__ = ("ambient_dim", "vertices")

    def __init__(self, ambient_dim, vertices):
        self.ambient_dim = ambient_dim
        self.vertices = tuple(sorted(tuple(int(x) for x in v)
                                     for v in vertices))

    def __eq__(self, other):
        return (isinstance(other, Polytope)
                and self.ambient_dim == other.ambient_dim
                and self.vertices == other.vertices)

    def __repr__(self):
        return "Polytope(%d, %r)" % (self.ambient_dim, self.vertices)


def is_monomial(f):
    """True iff f has exactly one term; the zero polynomial is not one."""
    return len(f._terms) == 1


def initial_form(f, gamma):
    """Terms of f attaining min <u, gamma>; constant-coefficient rule.

    The coefficients keep their values: with a trivial valuation on the
    ground field every coefficient has valuation zero, so only the
    exponent pairing matters.
    """
    if f.is_zero():
        raise ValueError("initial form of the zero polynomial")
    gamma = [Fraction(g) for g in gamma]
    if len(gamma) != f.num_vars:
        raise ValueError("gamma length != num_vars")
    best = None
    for exp, _ in f._terms:
        val = sum(e * g for e, g in zip(exp, gamma))
        if best is None or val < best:
            best = val
    keep = []
    for exp, c in f._terms:
        val = sum(e * g for e, g in zip(exp, gamma))
        if val == best:
            keep.append((exp, c))
    return LaurentPoly(f.num_vars, keep)


def substitute_monomial(f, z, b_matrix):
    """g(t) = f(z * t^B) for an integer n x d matrix B.

    Term exponents map to u^T B and coefficients pick up z^u; like terms
    are collected and zeros pruned, so g can be the zero polynomial when
    the whole coset sits inside V(f).
    """
    z = [_coerce_coeff(c) for c in z]
    if len(z) != f.num_vars:
        raise ValueError("base point length != num_vars")
    for c in z:
        if c.is_zero():
            raise ValueError("base point has a zero coordinate")
    b_rows = [tuple(int(x) for x in row) for row in b_matrix]
    if len(b_rows) != f.num_vars:
        raise ValueError("B must have one row per variable")
    d = len(b_rows[0]) if b_rows and b_rows[0] else (len(b_rows[0]) if b_rows else 0)
    for row in b_rows:
        if len(row) != d:
            raise ValueError("ragged B")
    out = []
    for exp, c in f._terms:
        t_exp = tuple(sum(exp[i] * b_rows[i][j] for i in range(f.num_vars))
                      for j in range(d))
        coeff = c
        for zi, e in zip(z, exp):
            if e:
                coeff = coeff * zi ** e
        out.append((t_exp, coeff))
    return LaurentPoly(d, out)


def stabilizer_lattice(f):
    """Saturated lattice of directions v with <u - u0, v> = 0 on supp(f).

    This is the character-free description of the connected stabilizer
    of V(f): the torus {t^v} fixes the hypersurface exactly when the
    pairing is constant on the support.
    """
    if f.is_zero():
        raise ValueError("stabilizer of the zero polynomial")
    supp = f.support()
    u0 = supp[0]
    diffs = [tuple(a - b for a, b in zip(u, u0)) for u in supp[1:]]
    diffs = [d for d in diffs if any(d)]
    if not diffs:
        return full_lattice(f.num_vars)
    return kernel_lattice(diffs)


def newton_polytope(f):
    """Convex hull of supp(f), vertices only.

    Extreme-point testing by exact LP feasibility: a support point is a
    vertex iff it is not a convex combination of the others.
    """
    if f.is_zero():
        raise ValueError("Newton polytope of the zero polynomial")
    supp = f.support()
    verts = []
    for i, p in enumerate(supp):
        others = [q for j, q in enumerate(supp) if j != i]
        if not others or not feasible_nonneg_combination(others, p,
                                                         affine=True):
            verts.append(p)
    return Polytope(f.num_vars, verts)


# ---------------------------------------------------------------------------
# text grammar


class PolyParseError(ValueError):
    def __init__(self, message, line, col):
        super().__init__("%s (line %d, column %d)" % (message, line, col))
        self.line = line
        self.col = col


class _Token:
    __slots__ = ("kind", "value", "line", "col")

    def __init__(self, kind, value, line, col):
        self.kind = kind
        self.value = value
        self.line = line
        self.col = col


def _tokenize(text):
    tokens = []
    line, col = 1, 1
    i = 0
    n = len(text)
    while i < n:
        ch = text[i]
        if ch == "\n":
            line += 1
            col = 1
            i += 1
            continue
        if ch.isspace():
            col += 1
            i += 1
            continue
        if ch in "+-*/^()":
            tokens.append(_Token(ch, ch, line, col))
            i += 1
            col += 1
            continue
        if ch.isdigit():
            j = i
            while j < n and text[j].isdigit():
                j += 1
            tokens.append(_Token("int", int(text[i:j]), line, col))
            col += j - i
            i = j
            continue
        if ch.isalpha():
            j = i
            while j < n and text[j].isalpha():
                j += 1
            word = text[i:j]
            k = j
            while k < n and text[k].isdigit():
                k += 1
            if word == "x":
                if k == j:
                    raise PolyParseError("variable needs an index", line, col)
                tokens.append(_Token("var", int(text[j:k]), line, col))
            elif word == "zeta":
                if k == j:
                    raise PolyParseError("zeta needs a conductor", line, col)
                tokens.append(_Token("zeta", int(text[j:k]), line, col))
            else:
                raise PolyParseError("unexpected word %r" % word, line, col)
            col += k - i
            i = k
            continue
        raise PolyParseError("unexpected character %r" % ch, line, col)
    tokens.append(_Token("end", None, line, col))
    return tokens


class _Parser:
    def __init__(self, tokens):
        self.tokens = tokens
        self.pos = 0

    def peek(self):
        return self.tokens[self.pos]

    def next(self):
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def error(self, message, tok=None):
        tok = tok or self.peek()
        raise PolyParseError(message, tok.line, tok.col)

    def parse_signed_int(self):
        sign = 1
        if self.peek().kind in "+-":
            if self.next().kind == "-":
                sign = -1
        tok = self.next()
        if tok.kind != "int":
            self.error("expected an integer", tok)
        return sign * tok.value

    def parse_rational(self, sign):
        tok = self.next()
        if tok.kind != "int":
            self.error("expected a number", tok)
        num = sign * tok.value
        if self.peek().kind == "/":
            self.next()
            dtok = self.next()
            if dtok.kind != "int":
                self.error("expected a denominator", dtok)
            if dtok.value == 0:
                self.error("zero denominator", dtok)
            return Fraction(num, dtok.value)
        return Fraction(num)

    def parse_zeta(self):
        tok = self.next()
        if tok.value == 0:
            self.error("conductor 0", tok)
        k = 1
        if self.peek().kind == "^":
            self.next()
            k = self.parse_signed_int()
        return CycloNumber.zeta(tok.value, k % tok.value)

    def parse_term(self, sign):
        coeff = CycloNumber.from_rational(sign)
        exps = {}
        saw_anything = False
        expect_factor = True
        while expect_factor:
            tok = self.peek()
            if tok.kind == "int":
                q = self.parse_rational(1)
                coeff = coeff * q
            elif tok.kind == "zeta":
                coeff = coeff * self.parse_zeta()
            elif tok.kind == "var":
                self.next()
                idx = tok.value
                if idx == 0:
                    self.error("variables are x1, x2, ...", tok)
                e = 1
                if self.peek().kind == "^":
                    self.next()
                    e = self.parse_signed_int()
                exps[idx] = exps.get(idx, 0) + e
            else:
                self.error("expected a factor", tok)
            saw_anything = True
            if self.peek().kind == "*":
                self.next()
            else:
                expect_factor = False
        if not saw_anything:
            self.error("empty term")
        return coeff, exps

    def parse_poly(self):
        terms = []
        sign = 1
        if self.peek().kind in "+-":
            sign = -1 if self.next().kind == "-" else 1
        terms.append(self.parse_term(sign))
        while self.peek().kind in "+-":
            sign = -1 if self.next().kind == "-" else 1
            terms.append(self.parse_term(sign))
        tok = self.peek()
        if tok.kind != "end":
            self.error("trailing input", tok)
        return terms


def parse_poly(text, num_vars=None):
    """Parse the grammar into a canonical LaurentPoly.

    The variable count is the largest index mentioned unless overridden.
    """
    raw = _Parser(_tokenize(text)).parse_poly()
    max_idx = 0
    for _, exps in raw:
        for idx in exps:
            max_idx = max(max_idx, idx)
    n = max_idx if num_vars is None else num_vars
    if n < max_idx:
        raise ValueError("num_vars=%d but x%d appears" % (n, max_idx))
    items = []
    for coeff, exps in raw:
        vec = [0] * n
        for idx, e in exps.items():
            vec[idx - 1] = e
        items.append((tuple(vec), coeff))
    return LaurentPoly(n, items)


def parse_cyclo(text):
    """Parse a constant of the grammar (no variables) into a CycloNumber."""
    f = parse_poly(text, num_vars=0)
    if f.is_zero():
        return CycloNumber.from_rational(0)
    return f.coefficient(())


def _frac_text(q):
    return str(q)


def poly_to_text(f):
    """Canonical printer; parse(poly_to_text(f)) == f structurally."""
    if f.is_zero():
        return "0"
    pieces = []
    for exp, coeff in f._terms:
        # one printed term per power-basis component of the coefficient
        for i, q in enumerate(coeff.coeffs):
            if not q:
                continue
            factors = []
            if i > 0:
                z = "zeta%d" % coeff.conductor
                if i > 1:
                    z += "^%d" % i
                factors.append(z)
            for v, e in enumerate(exp):
                if e:
                    factors.append("x%d" % (v + 1)
                                   + ("^%d" % e if e != 1 else ""))
            mag = -q if q < 0 else q
            if not factors:
                body = _frac_text(mag)
            elif mag == 1:
                body = "*".join(factors)
            else:
                body = "*".join([_frac_text(mag)] + factors)
            sign = "-" if q < 0 else "+"
            if not pieces:
                pieces.append(body if sign == "+" else "-" + body)
            else:
                pieces.append("%s %s" % (sign, body))
    return " ".join(pieces)
