"""Exact rational linear algebra and integer lattice kernels.

Everything here is arbitrary-precision: matrices over ``fractions.Fraction``,
lattices over Python ints.  No floating point enters this module; rank,
Smith form, kernels and feasibility are decided exactly.
"""

from fractions import Fraction
from math import gcd


def _frac_rows(rows):
    return tuple(tuple(Fraction(x) for x in row) for row in rows)


class RatMatrix:
    """Immutable matrix over Q; entries are Fractions in lowest terms."""

    __slots__ = ("rows", "num_rows", "num_cols")

    def __init__(self, rows, num_cols=None):
        self.rows = _frac_rows(rows)
        self.num_rows = len(self.rows)
        if self.num_rows:
            widths = {len(r) for r in self.rows}
            if len(widths) != 1:
                raise ValueError("ragged rows")
            self.num_cols = widths.pop()
            if num_cols is not None and num_cols != self.num_cols:
                raise ValueError("num_cols mismatch")
        else:
            if num_cols is None:
                raise ValueError("empty matrix needs explicit num_cols")
            self.num_cols = num_cols

    def __eq__(self, other):
        return (isinstance(other, RatMatrix) and self.rows == other.rows
                and self.num_cols == other.num_cols)

    def __hash__(self):
        return hash((self.rows, self.num_cols))

    def __repr__(self):
        return "RatMatrix(%r)" % (self.rows,)

    def transpose(self):
        return RatMatrix(tuple(zip(*self.rows)) if self.rows else (),
                         num_cols=self.num_rows)


def _as_rows(m):
    if isinstance(m, RatMatrix):
        return [list(r) for r in m.rows], m.num_cols
    rows = [list(map(Fraction, r)) for r in m]
    ncols = len(rows[0]) if rows else 0
    return rows, ncols


def rank(m):
    """Rank over Q by fraction-free (Bareiss-style) elimination."""
    rows, ncols = _as_rows(m)
    # clear denominators row by row; rank is scale-invariant
    irows = []
    for r in rows:
        den = 1
        for x in r:
            den = den * x.denominator // gcd(den, x.denominator)
        irows.append([int(x * den) for x in r])
    rk = 0
    col = 0
    prev = 1
    while rk < len(irows) and col < ncols:
        piv = None
        for i in range(rk, len(irows)):
            if irows[i][col]:
                piv = i
                break
        if piv is None:
            col += 1
            continue
        irows[rk], irows[piv] = irows[piv], irows[rk]
        p = irows[rk][col]
        for i in range(rk + 1, len(irows)):
            f = irows[i][col]
            new_row = []
            for j in range(ncols):
                num = p * irows[i][j] - f * irows[rk][j]
                q, rem = divmod(num, prev)
                if rem:
                    raise AssertionError("Bareiss division not exact")
                new_row.append(q)
            irows[i] = new_row
        prev = p
        rk += 1
        col += 1
    return rk


def rref(rows, ncols):
    """Reduced row echelon form over Q.

    Returns (reduced nonzero rows, pivot column list).
    """
    rows = [list(map(Fraction, r)) for r in rows]
    pivots = []
    r = 0
    for c in range(ncols):
        piv = None
        for i in range(r, len(rows)):
            if rows[i][c]:
                piv = i
                break
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = 1 / rows[r][c]
        rows[r] = [x * inv for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c]:
                f = rows[i][c]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
    return [tuple(row) for row in rows[:r]], pivots


def solve_linear(a_rows, b, ncols):
    """Solve A x = b over Q.

    Returns (particular solution, nullspace basis rows) or None when
    inconsistent.  The nullspace basis is the canonical RREF one.
    """
    aug = [list(map(Fraction, row)) + [Fraction(v)]
           for row, v in zip(a_rows, b)]
    red, pivots = rref(aug, ncols + 1)
    if ncols in pivots:
        return None
    part = [Fraction(0)] * ncols
    for row, c in zip(red, pivots):
        part[c] = row[ncols]
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fc in free:
        vec = [Fraction(0)] * ncols
        vec[fc] = Fraction(1)
        for row, c in zip(red, pivots):
            vec[c] = -row[fc]
        basis.append(tuple(vec))
    return tuple(part), basis


def nullspace(rows, ncols):
    """Canonical basis of {x : A x = 0} over Q."""
    sol = solve_linear(rows, [0] * len(list(rows)), ncols)
    return sol[1]


def invert(m):
    """Inverse of a square RatMatrix; raises on singular input."""
    rows, ncols = _as_rows(m)
    n = len(rows)
    if n != ncols:
        raise ValueError("not square")
    aug = [rows[i] + [Fraction(int(i == j)) for j in range(n)]
           for i in range(n)]
    red, pivots = rref(aug, 2 * n)
    if pivots[:n] != list(range(n)):
        raise ValueError("singular matrix")
    return RatMatrix([row[n:] for row in red])


class RatSubspace:
    """Linear subspace of Q^n with a canonical (RREF) basis.

    The zero subspace has an empty basis but keeps its ambient dimension.
    """

    __slots__ = ("ambient_dim", "basis")

    def __init__(self, ambient_dim, spanning_rows=()):
        self.ambient_dim = ambient_dim
        red, _ = rref(list(spanning_rows), ambient_dim)
        self.basis = tuple(red)

    @property
    def dim(self):
        return len(self.basis)

    def contains(self, vec):
        if self.dim == 0:
            return all(Fraction(x) == 0 for x in vec)
        stacked = list(self.basis) + [tuple(map(Fraction, vec))]
        return rank(stacked) == self.dim

    def __eq__(self, other):
        return (isinstance(other, RatSubspace)
                and self.ambient_dim == other.ambient_dim
                and self.basis == other.basis)

    def __hash__(self):
        return hash((self.ambient_dim, self.basis))

    def __repr__(self):
        return "RatSubspace(dim=%d, ambient=%d)" % (self.dim, self.ambient_dim)


def sum_dim(a, b):
    """dim(a + b), the rank of the stacked basis matrices."""
    if a.ambient_dim != b.ambient_dim:
        raise ValueError("ambient dimension mismatch")
    stacked = list(a.basis) + list(b.basis)
    if not stacked:
        return 0
    return rank(stacked)


def intersection_dim(a, b):
    """dim(a meet b) via the rank identity dim a + dim b - dim(a+b)."""
    return a.dim + b.dim - sum_dim(a, b)


# ---------------------------------------------------------------------------
# integer lattices


def hermite_normal_form(rows, ncols):
    """Row-style HNF: canonical basis of the integer row lattice.

    Pivots positive, entries above each pivot reduced into [0, pivot).
    Zero rows are dropped; the result is unique for the lattice.
    """
    work = [list(map(int, r)) for r in rows if any(r)]
    r = 0
    for c in range(ncols):
        while True:
            nz = [i for i in range(r, len(work)) if work[i][c]]
            if not nz:
                break
            i0 = min(nz, key=lambda i: abs(work[i][c]))
            work[r], work[i0] = work[i0], work[r]
            done = True
            for i in range(r + 1, len(work)):
                if work[i][c]:
                    q = work[i][c] // work[r][c]
                    work[i] = [a - q * b for a, b in zip(work[i], work[r])]
                    if work[i][c]:
                        done = False
            if done:
                break
        nz = work[r][c] if r < len(work) else 0
        if r < len(work) and work[r][c]:
            if work[r][c] < 0:
                work[r] = [-x for x in work[r]]
            for i in range(r):
                q = work[i][c] // work[r][c]
                if q:
                    work[i] = [a - q * b for a, b in zip(work[i], work[r])]
            r += 1
    return [tuple(row) for row in work[:r]]


class IntLattice:
    """Sublattice of Z^n, stored by its canonical HNF basis.

    ``saturated`` records whether the lattice equals its saturation;
    the flag is computed at construction unless the caller already knows.
    """

    __slots__ = ("ambient_dim", "basis", "saturated")

    def __init__(self, ambient_dim, rows=(), _known_saturated=None):
        self.ambient_dim = ambient_dim
        for row in rows:
            if len(row) != ambient_dim:
                raise ValueError("row length != ambient_dim")
        self.basis = tuple(hermite_normal_form(rows, ambient_dim))
        if _known_saturated is None:
            self.saturated = (saturate(self).basis == self.basis)
        else:
            self.saturated = _known_saturated

    @property
    def rank(self):
        return len(self.basis)

    def contains(self, vec):
        """Exact membership via the Smith form of the basis."""
        if len(vec) != self.ambient_dim:
            raise ValueError("length mismatch")
        if not self.basis:
            return all(x == 0 for x in vec)
        _, d, v = smith_normal_form(self.basis)
        r = len(self.basis)
        w = [sum(vec[i] * v[i][j] for i in range(self.ambient_dim))
             for j in range(self.ambient_dim)]
        for j in range(self.ambient_dim):
            dj = d[j][j] if j < r else 0
            if j < r:
                if w[j] % dj:
                    return False
            elif w[j]:
                return False
        return True

    def rational_span(self):
        return RatSubspace(self.ambient_dim, self.basis)

    def __eq__(self, other):
        return (isinstance(other, IntLattice)
                and self.ambient_dim == other.ambient_dim
                and self.basis == other.basis)

    def __hash__(self):
        return hash((self.ambient_dim, self.basis))

    def __repr__(self):
        return "IntLattice(ambient=%d, basis=%r)" % (self.ambient_dim, self.basis)


def smith_normal_form(m):
    """Smith normal form of an integer matrix.

    Returns (U, D, V) with U*m*V = D, U and V unimodular, D diagonal with
    d1 | d2 | ... and nonnegative diagonal.  Pivot choice: minimal nonzero
    absolute value, adequate at desk scale.
    """
    a = [list(map(int, row)) for row in m]
    nr = len(a)
    nc = len(a[0]) if nr else 0
    u = [[int(i == j) for j in range(nr)] for i in range(nr)]
    v = [[int(i == j) for j in range(nc)] for i in range(nc)]

    def row_sub(i, j, q):  # row_i -= q * row_j
        a[i] = [x - q * y for x, y in zip(a[i], a[j])]
        u[i] = [x - q * y for x, y in zip(u[i], u[j])]

    def col_sub(i, j, q):  # col_i -= q * col_j
        for row in a:
            row[i] -= q * row[j]
        for row in v:
            row[i] -= q * row[j]

    def row_swap(i, j):
        a[i], a[j] = a[j], a[i]
        u[i], u[j] = u[j], u[i]

    def col_swap(i, j):
        for row in a:
            row[i], row[j] = row[j], row[i]
        for row in v:
            row[i], row[j] = row[j], row[i]

    k = 0
    while k < nr and k < nc:
        # pivot: minimal nonzero absolute value in the trailing block
        piv = None
        best = None
        for i in range(k, nr):
            for j in range(k, nc):
                x = a[i][j]
                if x and (best is None or abs(x) < best):
                    best = abs(x)
                    piv = (i, j)
        if piv is None:
            break
        row_swap(k, piv[0])
        col_swap(k, piv[1])
        while True:
            # clear column k
            dirty = False
            for i in range(k + 1, nr):
                if a[i][k]:
                    q = a[i][k] // a[k][k]
                    row_sub(i, k, q)
                    if a[i][k]:
                        row_swap(k, i)
                        dirty = True
            if dirty:
                continue
            # clear row k
            for j in range(k + 1, nc):
                if a[k][j]:
                    q = a[k][j] // a[k][k]
                    col_sub(j, k, q)
                    if a[k][j]:
                        col_swap(k, j)
                        dirty = True
            if dirty:
                continue
            # divisibility: pivot must divide the trailing block
            bad = None
            for i in range(k + 1, nr):
                for j in range(k + 1, nc):
                    if a[i][j] % a[k][k]:
                        bad = i
                        break
                if bad is not None:
                    break
            if bad is None:
                break
            # fold the offending row into row k and restart the clearing
            a[k] = [x + y for x, y in zip(a[k], a[bad])]
            u[k] = [x + y for x, y in zip(u[k], u[bad])]
        if a[k][k] < 0:
            a[k] = [-x for x in a[k]]
            u[k] = [-x for x in u[k]]
        k += 1
    return ([tuple(r) for r in u],
            [tuple(r) for r in a],
            [tuple(r) for r in v])


def kernel_lattice(m):
    """Saturated lattice {v in Z^n : m v = 0} for an integer matrix m.

    ``m`` is given by rows; n is the number of columns.  The basis has
    rank n - rank(m) and is saturated because it comes from unimodular
    columns of the Smith decomposition.
    """
    m = [list(map(int, row)) for row in m]
    if not m:
        raise ValueError("kernel_lattice needs at least the column count; "
                         "use full_lattice(n) for the empty system")
    nc = len(m[0])
    _, d, v = smith_normal_form(m)
    rk = sum(1 for i in range(min(len(m), nc)) if d[i][i])
    cols = []
    for j in range(rk, nc):
        cols.append(tuple(v[i][j] for i in range(nc)))
    return IntLattice(nc, cols, _known_saturated=True)


def full_lattice(n):
    """Z^n itself."""
    eye = [[int(i == j) for j in range(n)] for i in range(n)]
    return IntLattice(n, eye, _known_saturated=True)


def zero_lattice(n):
    return IntLattice(n, (), _known_saturated=True)


def saturate(l):
    """(Q tensor l) meet Z^n, computed by a double kernel.

    Idempotent; the zero lattice and Z^n are fixed points.
    """
    if not l.basis:
        return zero_lattice(l.ambient_dim)
    ker = kernel_lattice(l.basis)
    if not ker.basis:
        return full_lattice(l.ambient_dim)
    return kernel_lattice(ker.basis)


def integer_kernel_of_rational(rows, ncols):
    """Saturated lattice {v in Z^ncols : rows * v = 0} for rational rows."""
    scaled = []
    for row in rows:
        fr = [Fraction(x) for x in row]
        den = 1
        for x in fr:
            den = den * x.denominator // gcd(den, x.denominator)
        scaled.append([int(x * den) for x in fr])
    if not scaled:
        return full_lattice(ncols)
    return kernel_lattice(scaled)


def _norm_k_vectors(n, k):
    """All v in Z^n with L1 norm exactly k, in lexicographic order."""
    if n == 1:
        if k == 0:
            yield (0,)
        else:
            yield (-k,)
            yield (k,)
        return
    for first in range(-k, k + 1):
        rest = k - abs(first)
        for tail in _norm_k_vectors(n - 1, rest):
            yield (first,) + tail


def l1_shortest_nonzero(l, bound):
    """Shortest nonzero lattice vector by L1 norm, within ``bound``.

    Exhaustive enumeration of the L1 ball; deterministic tie-break by
    lexicographic order on (norm, vector).  None when the ball contains
    no nonzero lattice vector.
    """
    if bound < 1:
        raise ValueError("bound must be >= 1")
    if l.rank == 0:
        return None
    n = l.ambient_dim
    for k in range(1, bound + 1):
        for v in _norm_k_vectors(n, k):
            if l.contains(v):
                return v
    return None


# ---------------------------------------------------------------------------
# exact feasibility of linear systems (used for cones, hulls, covers)


class Constraint:
    """coeffs . x <= rhs, or < rhs when strict."""

    __slots__ = ("coeffs", "rhs", "strict")

    def __init__(self, coeffs, rhs, strict=False):
        self.coeffs = tuple(Fraction(c) for c in coeffs)
        self.rhs = Fraction(rhs)
        self.strict = bool(strict)


def _normalize_constraint(coeffs, rhs, strict):
    den = 1
    for x in coeffs + (rhs,):
        den = den * x.denominator // gcd(den, x.denominator)
    ints = [int(x * den) for x in coeffs] + [int(rhs * den)]
    g = 0
    for x in ints:
        g = gcd(g, abs(x))
    if g > 1:
        ints = [x // g for x in ints]
    return tuple(Fraction(x) for x in ints[:-1]), Fraction(ints[-1]), strict


def _fm_eliminate(constraints, nvars, max_constraints=200000):
    """Fourier-Motzkin elimination with witness reconstruction.

    ``constraints``: list of (coeffs, rhs, strict) over nvars free
    variables.  Returns a witness tuple or None.
    """
    levels = []
    cur = constraints
    for var in range(nvars - 1, -1, -1):
        levels.append(cur)
        lows, highs, rest = [], [], []
        for (c, r, s) in cur:
            if c[var] > 0:
                highs.append((c, r, s))
            elif c[var] < 0:
                lows.append((c, r, s))
            else:
                rest.append((c, r, s))
        new = {}
        for (cl, rl, sl) in lows:
            for (ch, rh, sh) in highs:
                al, ah = cl[var], ch[var]
                coeffs = tuple(ah * cl[j] - al * ch[j] for j in range(nvars))
                rhs = ah * rl - al * rh
                key = _normalize_constraint(coeffs, rhs, sl or sh)
                prev = new.get(key[:2])
                if prev is None or key[2]:
                    new[key[:2]] = key[2]
        for (c, r, s) in rest:
            key = _normalize_constraint(c, r, s)
            prev = new.get(key[:2])
            if prev is None or key[2]:
                new[key[:2]] = key[2]
        cur = [(c, r, s) for (c, r), s in new.items()]
        if len(cur) > max_constraints:
            raise RuntimeError("Fourier-Motzkin blow-up; system too large")
    for (c, r, s) in cur:
        # all coefficients are zero at this point
        if any(c):
            raise AssertionError("elimination left a variable")
        if r < 0 or (s and r == 0):
            return None
    # back-substitute in reverse elimination order: var 0 first, whose
    # level retains no other active variables, then upward
    point = [None] * nvars
    for var in range(0, nvars):
        level = levels[nvars - 1 - var]
        lo = hi = None
        lo_strict = hi_strict = False
        for (c, r, s) in level:
            if not c[var]:
                continue
            acc = r
            for j in range(var):
                if c[j]:
                    acc -= c[j] * point[j]
            bound = acc / c[var]
            if c[var] > 0:
                if hi is None or bound < hi or (bound == hi and s):
                    hi, hi_strict = bound, s
            else:
                if lo is None or bound > lo or (bound == lo and s):
                    lo, lo_strict = bound, s
        if lo is None and hi is None:
            val = Fraction(0)
        elif lo is None:
            val = hi if not hi_strict else hi - 1
            if not hi_strict and Fraction(0) <= hi:
                val = Fraction(0)
        elif hi is None:
            val = lo if not lo_strict else lo + 1
            if not lo_strict and Fraction(0) >= lo:
                val = Fraction(0)
        else:
            if lo == hi:
                val = lo
            else:
                val = (lo + hi) / 2
        point[var] = val
    return tuple(point)


def linear_feasible(nvars, equalities=(), inequalities=()):
    """Exact witness for {x : E x = f, A x <= b (< when strict)}.

    ``equalities``: (coeffs, rhs) pairs.  ``inequalities``: (coeffs, rhs,
    strict) triples.  Returns a rational point or None.  Equalities are
    eliminated by substitution first, Fourier-Motzkin handles the rest.
    """
    eq_rows = [list(c) for c, _ in equalities]
    eq_rhs = [r for _, r in equalities]
    if eq_rows:
        sol = solve_linear(eq_rows, eq_rhs, nvars)
        if sol is None:
            return None
        part, basis = sol
    else:
        part = tuple(Fraction(0) for _ in range(nvars))
        basis = [tuple(Fraction(int(i == j)) for j in range(nvars))
                 for i in range(nvars)]
    k = len(basis)
    reduced = []
    for (c, r, s) in inequalities:
        c = [Fraction(x) for x in c]
        r = Fraction(r)
        shift = r - sum(ci * pi for ci, pi in zip(c, part))
        coeffs = tuple(sum(c[j] * basis[i][j] for j in range(nvars))
                       for i in range(k))
        if any(coeffs):
            reduced.append((coeffs, shift, bool(s)))
        else:
            if shift < 0 or (s and shift == 0):
                return None
    if k == 0:
        return tuple(part)
    y = _fm_eliminate(reduced, k)
    if y is None:
        return None
    return tuple(part[j] + sum(basis[i][j] * y[i] for i in range(k))
                 for j in range(nvars))


def feasible_nonneg_combination(columns, target, affine=True):
    """Is ``target`` a (convex when affine) nonnegative combination?

    Decides feasibility of {lam >= 0 : sum lam_i columns_i = target,
    (sum lam_i = 1 when affine)} with a Phase-1 simplex under Bland's
    rule, exactly over Q.
    """
    ncols = len(columns)
    if ncols == 0:
        return all(Fraction(x) == 0 for x in target) and not affine
    dim = len(target)
    rows = []
    for i in range(dim):
        rows.append([Fraction(col[i]) for col in columns])
    rhs = [Fraction(x) for x in target]
    if affine:
        rows.append([Fraction(1)] * ncols)
        rhs.append(Fraction(1))
    m = len(rows)
    for i in range(m):
        if rhs[i] < 0:
            rows[i] = [-x for x in rows[i]]
            rhs[i] = -rhs[i]
    # tableau: columns = original vars + artificials, objective = sum of
    # artificials (to be driven to zero)
    total = ncols + m
    tab = [rows[i] + [Fraction(int(i == j)) for j in range(m)] + [rhs[i]]
           for i in range(m)]
    basis = [ncols + i for i in range(m)]
    obj = [Fraction(0)] * (total + 1)
    for i in range(m):
        for j in range(total + 1):
            obj[j] += tab[i][j]
    for j in range(ncols, total):
        obj[j] -= 1
    while True:
        enter = None
        for j in range(total):
            if obj[j] > 0:
                enter = j
                break
        if enter is None:
            break
        leave = None
        best = None
        for i in range(m):
            if tab[i][enter] > 0:
                ratio = tab[i][total] / tab[i][enter]
                if best is None or ratio < best or \
                        (ratio == best and basis[i] < basis[leave]):
                    best = ratio
                    leave = i
        if leave is None:
            # unbounded phase-1 objective cannot happen; defensive
            raise RuntimeError("phase-1 simplex unbounded")
        piv = tab[leave][enter]
        tab[leave] = [x / piv for x in tab[leave]]
        for i in range(m):
            if i != leave and tab[i][enter]:
                f = tab[i][enter]
                tab[i] = [a - f * b for a, b in zip(tab[i], tab[leave])]
        f = obj[enter]
        obj = [a - f * b for a, b in zip(obj, tab[leave])]
        basis[leave] = enter
    return obj[total] == 0
