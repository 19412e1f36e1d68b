"""Rational polyhedral cones and tropical hypersurface fans.

Cones live in H-representation (integer rows a meaning <a,.> = 0 or
<a,.> <= 0) and are canonicalized at construction: implicit equalities
are promoted, redundant inequalities dropped, rows reduced against the
equality space and scaled primitive.  Tropical fans are built from the
support of a Laurent polynomial: the cone of a tie set E is

    sigma_E = {gamma : <u,gamma> = <u',gamma> <= <u'',gamma>
               for u,u' in E and u'' in the support},

and each cone is labeled by its maximal tie set (the argmin pattern on
the relative interior), which makes initial forms constant on relints.
"""

from fractions import Fraction
from math import gcd

from .laurent import initial_form, is_monomial
from .ratlin import (RatSubspace, linear_feasible, nullspace, rank, rref,
                     integer_kernel_of_rational)
from .rng import SplitMix64

SAMPLE_DENOMINATOR = 64  # rational sample coordinates are k / 64


def _primitive(row):
    """Scale a rational row to a primitive integer row (positive gcd)."""
    den = 1
    fr = [Fraction(x) for x in row]
    for x in fr:
        den = den * x.denominator // gcd(den, x.denominator)
    ints = [int(x * den) for x in fr]
    g = 0
    for x in ints:
        g = gcd(g, abs(x))
    if g > 1:
        ints = [x // g for x in ints]
    return tuple(ints)


def _sign_canonical(row):
    for x in row:
        if x > 0:
            return tuple(row)
        if x < 0:
            return tuple(-y for y in row)
    return tuple(row)


def _dot(a, b):
    return sum(Fraction(x) * Fraction(y) for x, y in zip(a, b))


class Cone:
    """Polyhedral cone {gamma : E gamma = 0, A gamma <= 0}, irredundant."""

    __slots__ = ("ambient_dim", "equalities", "inequalities", "label",
                 "tie_set", "relint_point", "_lin")

    def __init__(self, ambient_dim, equalities=(), inequalities=(),
                 label="", tie_set=None, _canonical=False,
                 relint_point=None):
        self.ambient_dim = ambient_dim
        self.label = label
        self.tie_set = tie_set
        self._lin = None
        if _canonical:
            self.equalities = tuple(equalities)
            self.inequalities = tuple(inequalities)
            self.relint_point = relint_point
            return
        eqs = [tuple(map(Fraction, e)) for e in equalities]
        ineqs = [tuple(map(Fraction, a)) for a in inequalities]
        # promote implicit equalities (inequalities tight on the whole cone)
        kept = []
        for i, a in enumerate(ineqs):
            system = [(b, Fraction(0), False) for j, b in enumerate(ineqs)
                      if j != i]
            system.append((a, Fraction(0), True))
            if linear_feasible(ambient_dim,
                               [(e, Fraction(0)) for e in eqs],
                               system) is None:
                eqs.append(a)
            else:
                kept.append(a)
        eq_red, _ = rref(eqs, ambient_dim)
        eq_rows = tuple(_sign_canonical(_primitive(r)) for r in eq_red)
        # reduce inequalities against the equality space and dedupe
        seen = {}
        for a in kept:
            r = self._reduce_row(a, eq_red, ambient_dim)
            if any(r):
                seen[_primitive(r)] = True
        ineq_rows = list(seen)
        # drop redundant inequalities one at a time
        changed = True
        while changed:
            changed = False
            for i in range(len(ineq_rows)):
                a = ineq_rows[i]
                # redundant iff the cone without a cannot go strictly
                # positive on a
                pos = linear_feasible(
                    ambient_dim, [(e, Fraction(0)) for e in eq_rows],
                    [(b, Fraction(0), False)
                     for j, b in enumerate(ineq_rows) if j != i]
                    + [(tuple(-x for x in a), Fraction(0), True)])
                if pos is None:
                    ineq_rows.pop(i)
                    changed = True
                    break
        self.equalities = eq_rows
        self.inequalities = tuple(sorted(ineq_rows))
        self.relint_point = relint_point or self._compute_relint()

    @staticmethod
    def _reduce_row(a, eq_rref, n):
        a = list(map(Fraction, a))
        pivots = []
        for row in eq_rref:
            for c in range(n):
                if row[c]:
                    pivots.append((c, row))
                    break
        for c, row in pivots:
            if a[c]:
                f = a[c] / row[c]
                a = [x - f * y for x, y in zip(a, row)]
        return a

    def _compute_relint(self):
        pt = linear_feasible(
            self.ambient_dim,
            [(e, Fraction(0)) for e in self.equalities],
            [(a, Fraction(0), True) for a in self.inequalities])
        if pt is None:
            raise AssertionError("canonical cone has empty relint")
        return pt

    @property
    def dim(self):
        if not self.equalities:
            return self.ambient_dim
        return self.ambient_dim - rank(self.equalities)

    def contains(self, gamma):
        gamma = [Fraction(g) for g in gamma]
        if len(gamma) != self.ambient_dim:
            raise ValueError("point length mismatch")
        return (all(_dot(e, gamma) == 0 for e in self.equalities)
                and all(_dot(a, gamma) <= 0 for a in self.inequalities))

    def key(self):
        """Canonical H-form identity (used to deduplicate cones)."""
        return (self.equalities, self.inequalities)

    def __repr__(self):
        return "Cone(%r, dim=%d)" % (self.label, self.dim)


def lin_space(c):
    """Linear span of the cone: the solution space of its equalities.

    Implicit equalities were promoted at construction, so the cone has a
    relatively open subset of this subspace and the span is exact.
    """
    if not c.equalities:
        return RatSubspace(c.ambient_dim,
                           [[int(i == j) for j in range(c.ambient_dim)]
                            for i in range(c.ambient_dim)])
    return RatSubspace(c.ambient_dim, nullspace(c.equalities, c.ambient_dim))


def relint_contains(c, gamma):
    """Equalities exactly, irredundant inequalities strictly."""
    gamma = [Fraction(g) for g in gamma]
    if len(gamma) != c.ambient_dim:
        raise ValueError("point length mismatch")
    return (all(_dot(e, gamma) == 0 for e in c.equalities)
            and all(_dot(a, gamma) < 0 for a in c.inequalities))


class Fan:
    """A fan as a labeled cone list, closed under nonempty faces."""

    __slots__ = ("ambient_dim", "cones", "incidence", "support_points",
                 "_by_label")

    def __init__(self, ambient_dim, cones, incidence, support_points=None):
        self.ambient_dim = ambient_dim
        self.cones = tuple(cones)
        self.incidence = tuple(incidence)
        self.support_points = (tuple(support_points)
                               if support_points is not None else None)
        self._by_label = {c.label: c for c in self.cones}

    def cone(self, label):
        return self._by_label[label]

    def maximal_cones(self):
        faces = {face for face, _ in self.incidence}
        return [c for c in self.cones if c.label not in faces]

    def supports(self, gamma):
        """Is gamma in the support (union of the cones)?"""
        return any(c.contains(gamma) for c in self.maximal_cones())

    def __repr__(self):
        return "Fan(ambient=%d, cones=%d)" % (self.ambient_dim,
                                              len(self.cones))


def _tie_cone_system(support, tie, ambient_dim):
    """(equalities, inequalities) for the tie-set cone sigma_tie."""
    tie = sorted(tie)
    u0 = tie[0]
    eqs = []
    for u in tie[1:]:
        row = tuple(Fraction(a - b) for a, b in zip(u, u0))
        if any(row):
            eqs.append(row)
    ineqs = []
    for u in support:
        if tuple(u) not in set(map(tuple, tie)):
            ineqs.append(tuple(Fraction(a - b) for a, b in zip(u0, u)))
    return eqs, ineqs


def _canonical_tie(support, tie, ambient_dim):
    """Close a tie set under implied equalities; None if empty relint.

    Returns (maximal tie set, relint point).  The maximal tie set is the
    argmin pattern of <u, .> on the relative interior of sigma_tie.
    """
    tie = sorted(set(map(tuple, tie)))
    rest = [u for u in support if u not in set(tie)]
    eqs, ineqs = _tie_cone_system(support, tie, ambient_dim)
    eq_pairs = [(e, Fraction(0)) for e in eqs]
    # fast path: relint point with every inequality strict
    pt = linear_feasible(ambient_dim, eq_pairs,
                         [(a, Fraction(0), True) for a in ineqs])
    if pt is not None:
        return tuple(tie), pt
    # otherwise decide per support point whether its inequality is an
    # implicit equality on sigma_tie
    u0 = tie[0]
    extra = []
    base_ineqs = [(a, Fraction(0), False) for a in ineqs]
    for u in rest:
        row = tuple(Fraction(a - b) for a, b in zip(u0, u))
        test = [c for c in base_ineqs if c[0] != row]
        test.append((row, Fraction(0), True))
        if linear_feasible(ambient_dim, eq_pairs, test) is None:
            extra.append(u)
    full = tuple(sorted(set(tie) | set(extra)))
    eqs2, ineqs2 = _tie_cone_system(support, full, ambient_dim)
    pt = linear_feasible(ambient_dim, [(e, Fraction(0)) for e in eqs2],
                         [(a, Fraction(0), True) for a in ineqs2])
    if pt is None:
        raise AssertionError("tie closure still has empty relint")
    return full, pt


def _build_tie_fan(ambient_dim, support):
    """Fan of all tie-set cones over the given support points."""
    support = sorted(set(map(tuple, support)))
    if len(support) < 2:
        raise ValueError("support must contain at least two points")
    canon = {}
    cones_by_tie = {}
    queue = [frozenset((support[i], support[j]))
             for i in range(len(support)) for j in range(i + 1, len(support))]
    seen_inputs = set()
    while queue:
        raw = queue.pop()
        if raw in seen_inputs:
            continue
        seen_inputs.add(raw)
        if raw in canon:
            continue
        full, pt = _canonical_tie(support, raw, ambient_dim)
        canon[raw] = full
        if full in cones_by_tie:
            continue
        cones_by_tie[full] = pt
        full_set = frozenset(full)
        for u in support:
            if u not in full_set:
                bigger = frozenset(full_set | {u})
                if bigger not in seen_inputs:
                    queue.append(bigger)
    ordered = sorted(cones_by_tie, key=lambda t: (len(t), t))
    cones = []
    for idx, tie in enumerate(ordered):
        eqs, ineqs = _tie_cone_system(support, tie, ambient_dim)
        eq_red, _ = rref(eqs, ambient_dim)
        eq_rows = tuple(_sign_canonical(_primitive(r)) for r in eq_red)
        seen = {}
        for a in ineqs:
            r = Cone._reduce_row(a, eq_red, ambient_dim)
            if any(r):
                seen[_primitive(r)] = True
        cone = Cone(ambient_dim, eq_rows, tuple(sorted(seen)),
                    label="c%d" % idx, tie_set=tie, _canonical=True,
                    relint_point=cones_by_tie[tie])
        cones.append(cone)
    incidence = []
    for face in cones:
        fset = set(face.tie_set)
        for cone in cones:
            if cone is face:
                continue
            if fset > set(cone.tie_set):
                incidence.append((face.label, cone.label))
    return Fan(ambient_dim, cones, sorted(incidence), support)


def tropical_hypersurface(f):
    """The fan of gamma where min <u, gamma> over supp(f) ties.

    Cones are tie-set cones labeled by the maximal tie set; the initial
    form of f is constant on each relative interior by construction.
    """
    if f.is_zero():
        raise ValueError("tropical hypersurface of the zero polynomial")
    if is_monomial(f):
        raise ValueError("monomial has an empty tropical hypersurface")
    return _build_tie_fan(f.num_vars, f.support())


def star(fan, tau):
    """Fan of {sigma + lin(tau) : sigma in fan, tau a face of sigma}.

    For cones containing tau this equals cone(sigma - gamma) for any
    gamma in relint(tau): adding lin(tau) drops exactly the inequalities
    coming from support points outside tau's tie set, because on those
    the pairing can be pushed arbitrarily far using a relint direction.
    Implemented by rebuilding the tie fan over tau's tie set.
    """
    if tau.label not in fan._by_label or \
            fan.cone(tau.label).key() != tau.key():
        raise ValueError("cone %r is not in the fan" % (tau.label,))
    if tau.tie_set is None:
        raise ValueError("star needs tie-set labeled fans")
    if len(tau.tie_set) < 2:
        raise ValueError("tie sets always have >= 2 points")
    return _build_tie_fan(fan.ambient_dim, tau.tie_set)


def exists_full_sum(fan, subspace):
    """Label of the first cone with dim(lin(tau) + L) = n, if any."""
    if subspace.ambient_dim != fan.ambient_dim:
        raise ValueError("ambient dimension mismatch")
    from .ratlin import sum_dim
    for c in fan.cones:
        if sum_dim(lin_space(c), subspace) == fan.ambient_dim:
            return c.label
    return None


def _annihilator_rows(subspace):
    """Integer rows C with {x : C x = 0} = the subspace."""
    lat = integer_kernel_of_rational(subspace.basis, subspace.ambient_dim)
    return lat.basis


def cone_plus_subspace_contains(cone, subspace, gamma):
    """Exact membership of gamma in cone + L, by LP feasibility."""
    n = cone.ambient_dim
    gamma = [Fraction(g) for g in gamma]
    c_rows = _annihilator_rows(subspace)
    eqs = [(e, Fraction(0)) for e in cone.equalities]
    for row in c_rows:
        eqs.append((tuple(map(Fraction, row)), _dot(row, gamma)))
    ineqs = [(a, Fraction(0), False) for a in cone.inequalities]
    return linear_feasible(n, eqs, ineqs) is not None


def covering_check_sampled(fan, subspace, samples, box, seed):
    """Fraction of random rational points of [-box, box]^n in U (tau + L).

    Membership is decided exactly per cone; sampling uses splitmix64
    with coordinates k / SAMPLE_DENOMINATOR, so runs are reproducible.
    """
    if samples < 1:
        raise ValueError("samples must be >= 1")
    rng = SplitMix64(seed)
    n = fan.ambient_dim
    box = Fraction(box)
    maximal = fan.maximal_cones()
    c_cache = _annihilator_rows(subspace)
    hits = 0
    for _ in range(samples):
        gamma = [rng.fraction(-box, box, SAMPLE_DENOMINATOR)
                 for _ in range(n)]
        for cone in maximal:
            eqs = [(e, Fraction(0)) for e in cone.equalities]
            for row in c_cache:
                eqs.append((tuple(map(Fraction, row)), _dot(row, gamma)))
            ineqs = [(a, Fraction(0), False) for a in cone.inequalities]
            if linear_feasible(n, eqs, ineqs) is not None:
                hits += 1
                break
    return Fraction(hits, samples)


def project_support_dim(fan, projection_rows):
    """Max over cones of the rank of P restricted to lin(tau)."""
    p_rows = [tuple(map(Fraction, r)) for r in projection_rows]
    for r in p_rows:
        if len(r) != fan.ambient_dim:
            raise ValueError("projection must have ambient_dim columns")
    best = 0
    for c in fan.cones:
        basis = lin_space(c).basis
        if not basis:
            continue
        imgs = [tuple(_dot(p, b) for p in p_rows) for b in basis]
        best = max(best, rank(imgs))
    return best


def initial_form_on_cone(f, cone):
    """in_gamma(f) for gamma in relint(cone); constant there."""
    return initial_form(f, cone.relint_point)


# ---------------------------------------------------------------------------
# serialization


def _rat_str(q):
    q = Fraction(q)
    return "%d/%d" % (q.numerator, q.denominator)


def fan_to_json_dict(fan):
    cones = []
    for c in fan.cones:
        cones.append({
            "label": c.label,
            "equalities": [[_rat_str(x) for x in row]
                           for row in c.equalities],
            "inequalities": [[_rat_str(x) for x in row]
                             for row in c.inequalities],
            "dim": c.dim,
            "lin_basis": [[_rat_str(x) for x in row]
                          for row in lin_space(c).basis],
        })
    return {
        "ambient_dim": fan.ambient_dim,
        "cones": cones,
        "incidence": [[a, b] for a, b in fan.incidence],
    }
