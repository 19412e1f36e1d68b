"""Decision layer: coset intersection, non-degeneracy, rotundity,
surjectivity of monomial maps, and torsion-coset enumeration.

The engine behind every verdict is one exact fact: a Laurent polynomial
has no zero on the torus over an algebraically closed field iff it is a
single monomial (monomials are the units of the Laurent ring; a
non-monomial with a unit-normalized term is a nonconstant polynomial
with nonzero constant term after clearing, so it has a root, and that
root can be completed to a torus point).  Substituting a coset
parametrization therefore turns intersection questions into term
counting, with no tolerance anywhere.
"""

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import gcd
from typing import Optional

from .cyclo import CycloNumber
from .laurent import (LaurentPoly, is_monomial, initial_form,
                      substitute_monomial, stabilizer_lattice, poly_to_text)
from .fan import tropical_hypersurface, exists_full_sum, lin_space
from .ratlin import rank, kernel_lattice, smith_normal_form
from .torus import Coset, Subtorus, TorsionPoint, subtorus_from_equations, \
    j_tau, enumerate_torsion
from .rng import SplitMix64

EMPTY = "Empty"
NON_EMPTY = "NonEmpty"
COSET_CONTAINED = "CosetContained"
SURJECTIVE = "Surjective"
NOT_SURJECTIVE = "NotSurjective"
UNKNOWN = "Unknown"

COMPONENT_CAP = 64
EXHAUSTIVE_CAP = 25000


@lru_cache(maxsize=64)
def _fan_of(f):
    return tropical_hypersurface(f)


@dataclass(frozen=True)
class IntersectionVerdict:
    """Outcome of W(C) meet z.H(C); evidence is the substituted poly."""

    status: str
    substituted: LaurentPoly
    monomial: Optional[tuple] = None   # (exponent, coefficient) for Empty
    root: Optional[Fraction] = None    # rational root for NonEmpty, if found

    def to_json_dict(self):
        out = {"status": self.status,
               "substituted": poly_to_text(self.substituted)}
        if self.monomial is not None:
            exp, coeff = self.monomial
            out["monomial"] = {"exponent": list(exp),
                               "coefficient": str(coeff)}
        if self.root is not None:
            out["root"] = str(self.root)
        return out


@dataclass(frozen=True)
class SurjectivityVerdict:
    """Is x -> x^A surjective from W onto the quotient torus?"""

    status: str
    kernel: Optional[tuple] = None
    witness_base: Optional[tuple] = None     # z in the n-torus
    witness_target: Optional[tuple] = None   # y = z^A missing the image
    witness_verdicts: tuple = ()             # per-component Empty verdicts
    certificate: Optional[tuple] = None      # ((e, p_e), (e', p_e'))
    span_certificate: Optional[tuple] = None  # (monomial u, combination)
    detail: str = ""

    def to_json_dict(self):
        out = {"status": self.status, "detail": self.detail}
        if self.kernel is not None:
            out["kernel"] = list(self.kernel)
        if self.witness_base is not None:
            out["witness_base"] = [str(c) for c in self.witness_base]
        if self.witness_target is not None:
            out["witness_target"] = [str(c) for c in self.witness_target]
        if self.certificate is not None:
            out["certificate"] = [
                {"value": e, "polynomial": poly_to_text(p)}
                for e, p in self.certificate]
        if self.span_certificate is not None:
            out["span_certificate"] = [
                {"survivors": list(prefix),
                 "monomial": list(u),
                 "combination": [{"value": e, "component": j,
                                  "coefficient": str(lam)}
                                 for (e, j), lam in combo]}
                for prefix, u, combo in self.span_certificate]
        if self.witness_verdicts:
            out["witness_verdicts"] = [v.to_json_dict()
                                       for v in self.witness_verdicts]
        return out


@dataclass(frozen=True)
class DensityReport:
    n: int
    N: int
    total: int
    surjective: int
    not_surjective: int
    unknown: int
    seed: int
    fiber_samples: int
    mode: str = "exhaustive"

    def to_json_dict(self):
        return {"n": self.n, "N": self.N, "total": self.total,
                "surjective": self.surjective,
                "not_surjective": self.not_surjective,
                "unknown": self.unknown, "seed": self.seed,
                "fiber_samples": self.fiber_samples, "mode": self.mode}


@dataclass(frozen=True)
class Effort:
    """Witness-search budget.

    quick: a coarse deterministic grid.  search: denser rationals with
    numerators and denominators up to ``grid_bound``, torsion
    coordinates up to ``torsion_order``, and finite-field screening over
    the given primes (a finder only; hits are re-verified exactly).
    """

    kind: str = "quick"
    grid_bound: int = 2
    torsion_order: int = 4
    primes: tuple = ()
    max_candidates: int = 3000

    @classmethod
    def quick(cls):
        return cls()

    @classmethod
    def search(cls, bound=8, primes=(7, 11), torsion_order=12,
               max_candidates=20000):
        return cls("search", bound, torsion_order, tuple(primes),
                   max_candidates)


# ---------------------------------------------------------------------------
# basic decisions


def coset_intersects(f, coset):
    """Exact trichotomy for W(C) meet z.H(C).

    Empty iff the substituted polynomial is a nonzero monomial;
    CosetContained iff it is identically zero; NonEmpty otherwise.
    """
    if f.is_zero():
        raise ValueError("zero polynomial")
    if coset.torus.ambient_dim != f.num_vars:
        raise ValueError("ambient dimension mismatch")
    g = substitute_monomial(f, coset.base, coset.torus.param)
    if g.is_zero():
        return IntersectionVerdict(COSET_CONTAINED, g)
    if is_monomial(g):
        (exp, coeff), = g.terms.items()
        return IntersectionVerdict(EMPTY, g, monomial=(exp, coeff))
    return IntersectionVerdict(NON_EMPTY, g,
                               root=_rational_root(g))


def _rational_root(g):
    """A rational root of a univariate g with rational coefficients, if
    one is easy to find (numerator divides the constant, denominator the
    leading coefficient, after normalizing exponents)."""
    if g.num_vars != 1:
        return None
    terms = g.terms
    if any(not c.is_rational() for c in terms.values()):
        return None
    exps = sorted(e[0] for e in terms)
    lo, hi = exps[0], exps[-1]
    coeffs = {e - lo: terms[(e,)].as_fraction() for (e,) in terms}
    den = 1
    for c in coeffs.values():
        den = den * c.denominator // gcd(den, c.denominator)
    ic = {e: int(c * den) for e, c in coeffs.items()}
    a0 = ic.get(0, 0)
    lead = ic[hi - lo]
    if a0 == 0:
        return None
    for p in _divisors(abs(a0)):
        for q in _divisors(abs(lead)):
            for sign in (1, -1):
                t = Fraction(sign * p, q)
                if sum(c * t ** e for e, c in ic.items()) == 0:
                    return t
    return None


def _divisors(x):
    out = [d for d in range(1, x + 1) if x % d == 0]
    return out


def is_geometrically_non_degenerate(f):
    """Hypersurface criterion: trivial connected stabilizer.

    Applied to the hypersurface as given; irreducibility is not checked
    (no factorization in scope).
    """
    if f.is_zero() or is_monomial(f):
        raise ValueError("need a nonzero non-monomial polynomial")
    return stabilizer_lattice(f).rank == 0


def is_rotund_product(f, subspace):
    """Rotundity of L x V(f) via the full-sum cone criterion."""
    if subspace.dim < 1:
        raise ValueError("trivial L")
    if f.is_zero() or is_monomial(f):
        raise ValueError("need a nonzero non-monomial polynomial")
    return exists_full_sum(_fan_of(f), subspace) is not None


def check_j_tau_stabilizes(f, tau, fan=None):
    """Does the torus of tau's span stabilize the initial variety?

    Checked on the lattice side: every parametrization generator of
    j_tau(tau) must lie in the rational span of the stabilizer lattice
    of in_gamma(f), gamma in relint(tau).  True for every cone of a
    correctly built tropical fan; kept as a cross-module oracle.
    """
    if fan is None:
        fan = _fan_of(f)
    if tau.label not in {c.label for c in fan.cones} or \
            fan.cone(tau.label).key() != tau.key():
        raise ValueError("cone is not in the tropical fan")
    jt = j_tau(tau)
    stab = stabilizer_lattice(initial_form(f, tau.relint_point))
    span = stab.rational_span()
    return all(span.contains([Fraction(x) for x in col])
               for col in jt.param_columns())


def group_polynomials(f, v):
    """Partition of f's terms by the pairing value e = <u, v>.

    The coset z.{t^v} has fiber polynomial sum_e p_e(z) t^e; the keys
    are the attained values, the values the nonzero p_e in the original
    n variables.
    """
    v = tuple(int(x) for x in v)
    if not any(v):
        raise ValueError("v must be nonzero")
    if len(v) != f.num_vars:
        raise ValueError("v length mismatch")
    buckets = {}
    for exp, c in f.terms.items():
        e = sum(u * w for u, w in zip(exp, v))
        buckets.setdefault(e, []).append((exp, c))
    return {e: LaurentPoly(f.num_vars, items)
            for e, items in sorted(buckets.items())}


# ---------------------------------------------------------------------------
# surjectivity of monomial maps


def _transpose(rows):
    return [tuple(r[i] for r in rows) for i in range(len(rows[0]))]


def _component_reps(a_rows, n):
    """Torsion representatives of the components of {x : x^A = 1}.

    Via Smith form U A V = D: substituting w = x^(V^-1) turns the
    equations into w_i^(d_i) = 1, so components are indexed by roots of
    unity in the first d slots and mapped back through x = w^V.
    Returns a list of coordinate tuples (CycloNumbers); [ones] when the
    group is connected.  None when the component count exceeds the cap.
    """
    d = len(a_rows)
    _, dd, v = smith_normal_form(a_rows)
    divisors = [dd[i][i] for i in range(min(d, n))]
    if any(x == 0 for x in divisors):
        raise ValueError("matrix must have full row rank")
    count = 1
    for x in divisors:
        count *= x
    if count > COMPONENT_CAP:
        return None
    big = 1
    for x in divisors:
        big = big * x // gcd(big, x)
    reps = [tuple([0] * n)]  # exponent vectors over zeta_big
    for i, di in enumerate(divisors):
        if di == 1:
            continue
        new = []
        step = big // di
        for base in reps:
            for k in range(di):
                cand = tuple((base[j] + k * step * v[j][i]) % big
                             for j in range(n))
                new.append(cand)
        reps = new
    out = []
    for angles in reps:
        out.append(tuple(CycloNumber.zeta(big, a) if a else
                         CycloNumber.from_rational(1) for a in angles))
    return out


def _coordinate_pool(effort):
    """Deterministic candidate coordinates: small rationals by height,
    then torsion values by order."""
    vals = []
    seen = set()
    bound = effort.grid_bound
    for h in range(1, bound + 1):
        block = []
        for q in range(1, h + 1):
            for p in list(range(-h, 0)) + list(range(1, h + 1)):
                if max(abs(p), q) != h or gcd(abs(p), q) != 1:
                    continue
                block.append(Fraction(p, q))
        block.sort(key=lambda x: (x.denominator, abs(x), x < 0))
        for x in block:
            if x not in seen:
                seen.add(x)
                vals.append(CycloNumber.from_rational(x))
    for m in range(3, effort.torsion_order + 1):
        for k in range(1, m):
            if gcd(k, m) == 1:
                vals.append(CycloNumber.zeta(m, k))
    return vals


def _spiral_tuples(n, pool_size, cap):
    """Index tuples ordered by max index (deterministic spiral)."""
    emitted = 0
    for radius in range(pool_size):
        def rec(prefix, used_radius):
            if len(prefix) == n:
                if used_radius:
                    yield tuple(prefix)
                return
            for i in range(radius + 1):
                yield from rec(prefix + [i], used_radius or i == radius)
        for tup in rec([], False):
            yield tup
            emitted += 1
            if emitted >= cap:
                return


def _exactly_one_nonzero(groups, point):
    """Exact count check: is exactly one group polynomial nonzero here?"""
    nonzero = 0
    for p in groups.values():
        if not p.evaluate(point).is_zero():
            nonzero += 1
            if nonzero > 1:
                return False
    return nonzero == 1


def _verify_witness(f, v, base, components):
    """Exact verification: every component coset must verdict Empty."""
    n = f.num_vars
    h0 = subtorus_from_equations(kernel_lattice([v]).basis, ambient_dim=n)
    verdicts = []
    for comp in components:
        point = tuple(b * c for b, c in zip(base, comp))
        verdict = coset_intersects(f, Coset(h0, point))
        if verdict.status != EMPTY:
            return None
        verdicts.append(verdict)
    return tuple(verdicts)


def _witness_search(f, v, groups, components, effort):
    """Deterministic search for z whose whole fiber misses V(f).

    Floating-point screening proposes candidates (exactly one group
    visibly nonzero at every component); each candidate is re-verified
    exactly before being returned.
    """
    n = f.num_vars
    pool = _coordinate_pool(effort)
    pool_c = [c.to_complex() for c in pool]
    group_list = list(groups.values())
    group_terms = [p.complex_terms() for p in group_list]
    comp_c = [[c.to_complex() for c in comp] for comp in components]
    for idx in _spiral_tuples(n, len(pool), effort.max_candidates):
        ok = True
        for comp in comp_c:
            zc = [pool_c[i] * w for i, w in zip(idx, comp)]
            visible = 0
            for terms in group_terms:
                val = 0j
                for exp, coeff in terms:
                    term = coeff
                    for z, e in zip(zc, exp):
                        if e:
                            term *= z ** e
                    val += term
                if abs(val) > 1e-7:
                    visible += 1
                    if visible > 1:
                        break
            if visible > 1:
                ok = False
                break
        if not ok:
            continue
        base = tuple(pool[i] for i in idx)
        comp_points = [tuple(b * c for b, c in zip(base, comp))
                       for comp in components]
        if all(_exactly_one_nonzero(groups, pt) for pt in comp_points):
            verdicts = _verify_witness(f, v, base, components)
            if verdicts is not None:
                return base, verdicts
    return None


def _field_screen(f, v, groups, components, effort):
    """Finite-field finder: scan (F_q^x)^n for one-nonzero-group points,
    lift balanced residues to Q, and verify exactly.

    Only runs for rational coefficients; purely heuristic, never a
    proof (positive characteristic behaves differently).
    """
    n = f.num_vars
    if any(not c.is_rational() for p in groups.values()
           for c in p.terms.values()):
        return None
    int_groups = []
    for p in groups.values():
        terms = []
        den = 1
        for c in p.terms.values():
            fr = c.as_fraction()
            den = den * fr.denominator // gcd(den, fr.denominator)
        for exp, c in p.terms.items():
            terms.append((exp, int(c.as_fraction() * den)))
        int_groups.append(terms)
    for q in effort.primes:
        def eval_mod(terms, point):
            acc = 0
            for exp, c in terms:
                t = c % q
                for z, e in zip(point, exp):
                    # Fermat: z^(q-1) = 1, so reduce exponents mod q-1
                    t = t * pow(z, e % (q - 1), q) % q
                acc = (acc + t) % q
            return acc

        def points(prefix):
            if len(prefix) == n:
                yield tuple(prefix)
                return
            for z in range(1, q):
                yield from points(prefix + [z])

        for pt in points([]):
            visible = sum(1 for terms in int_groups
                          if eval_mod(terms, pt) != 0)
            if visible != 1:
                continue
            lifted = tuple(
                CycloNumber.from_rational(z if z <= (q - 1) // 2 else z - q)
                for z in pt)
            if any(c.is_zero() for c in lifted):
                continue
            comp_points = [tuple(b * c for b, c in zip(lifted, comp))
                           for comp in components]
            if all(_exactly_one_nonzero(groups, p) for p in comp_points):
                verdicts = _verify_witness(f, v, lifted, components)
                if verdicts is not None:
                    return lifted, verdicts
    return None


def _power_point(f, v, groups, components, base_int):
    """Fallback candidate (p, p^2, ..., p^n) for the one-group case."""
    n = f.num_vars
    base = tuple(CycloNumber.from_rational(Fraction(base_int) ** (i + 1))
                 for i in range(n))
    comp_points = [tuple(b * c for b, c in zip(base, comp))
                   for comp in components]
    if all(_exactly_one_nonzero(groups, p) for p in comp_points):
        verdicts = _verify_witness(f, v, base, components)
        if verdicts is not None:
            return base, verdicts
    return None


def _cyclo_solve(matrix_rows, rhs):
    """Solve M x = rhs by Gaussian elimination over a cyclotomic field."""
    aug = [list(row) + [b] for row, b in zip(matrix_rows, rhs)]
    nrows = len(aug)
    ncols = len(matrix_rows[0]) if matrix_rows else 0
    piv_cols = []
    r = 0
    for c in range(ncols):
        piv = None
        for i in range(r, nrows):
            if not aug[i][c].is_zero():
                piv = i
                break
        if piv is None:
            continue
        aug[r], aug[piv] = aug[piv], aug[r]
        inv = aug[r][c].inv()
        aug[r] = [x * inv for x in aug[r]]
        for i in range(nrows):
            if i != r and not aug[i][c].is_zero():
                f = aug[i][c]
                aug[i] = [a - f * b for a, b in zip(aug[i], aug[r])]
        piv_cols.append(c)
        r += 1
        if r == nrows:
            break
    for i in range(r, nrows):
        if not aug[i][ncols].is_zero():
            return None
    x = [CycloNumber.from_rational(0)] * ncols
    for row_i, c in enumerate(piv_cols):
        x[c] = aug[row_i][ncols]
    return x


def _twisted_rows(groups, components, support):
    """Coefficient vector of p_e(z * zeta_j) for every group and
    component, over the union support."""
    col = {u: i for i, u in enumerate(support)}
    zero = CycloNumber.from_rational(0)
    rows = {}
    for e, p in groups.items():
        for j, comp in enumerate(components):
            vec = [zero] * len(support)
            for u, c in p.terms.items():
                tw = c
                for z, uu in zip(comp, u):
                    if uu:
                        tw = tw * z ** uu
                vec[col[u]] = tw
            rows[(e, j)] = vec
    return rows


def _span_monomial(rows, tags, support):
    """A field-linear combination of the rows equal to one monomial.

    Such a combination proves the corresponding polynomials cannot all
    vanish at a torus point.  Returns (exponent, combination) or None.
    """
    zero = CycloNumber.from_rational(0)
    one = CycloNumber.from_rational(1)
    for u_idx, u in enumerate(support):
        target = [one if i == u_idx else zero
                  for i in range(len(support))]
        matrix = [[rows[t][c] for t in tags] for c in range(len(support))]
        lam = _cyclo_solve(matrix, target)
        if lam is not None:
            combo = tuple((tags[i], lam[i]) for i in range(len(tags))
                          if not lam[i].is_zero())
            return (u, combo)
    return None


def _surjectivity_obstruction(groups, components, node_cap=800):
    """Prove that no fiber can miss the hypersurface, by case split.

    A witness base z would give, on every component j, a surviving group
    (nonzero there) with all other groups vanishing at z * zeta_j.  The
    backtracking enumerates survivor assignments component by component
    and prunes a branch as soon as the accumulated vanishing system has
    a monomial in its span (then it has no zero on the torus).  If every
    branch is pruned, the map is surjective; each pruned branch carries
    its exact combination as the certificate.

    Returns a tuple of (survivor-prefix, monomial, combination) entries,
    or None when some assignment cannot be obstructed or the node budget
    runs out.
    """
    keys = sorted(groups)
    support = sorted({u for p in groups.values() for u in p.support()})
    rows = _twisted_rows(groups, components, support)
    entries = []
    budget = [node_cap]

    def rec(depth, prefix, system_tags):
        for e in keys:
            if budget[0] <= 0:
                return False
            budget[0] -= 1
            tags2 = system_tags + [(e2, depth) for e2 in keys if e2 != e]
            cert = _span_monomial(rows, tags2, support)
            if cert is not None:
                entries.append((prefix + (e,),) + cert)
                continue
            if depth + 1 == len(components):
                return False
            if not rec(depth + 1, prefix + (e,), tags2):
                return False
        return True

    if len(keys) < 2:
        return None
    if rec(0, (), []):
        return tuple(entries)
    return None


def _target_of(base, a_rows):
    out = []
    for row in a_rows:
        acc = CycloNumber.from_rational(1)
        for b, e in zip(base, row):
            if e:
                acc = acc * b ** e
        out.append(acc)
    return tuple(out)


def surjectivity_decide(f, a_rows, effort=None):
    """Decide whether x -> x^A maps V(f) onto the full quotient torus.

    Restricted to d = n-1 (one-dimensional fibers).  Surjective needs a
    symbolic certificate: two pairing groups whose polynomials are
    single monomials, hence nonvanishing on the torus, so every fiber
    polynomial keeps at least two terms.  NotSurjective needs an exact
    witness whose full fiber (all components of {x : x^A = 1}) misses
    V(f).  Unknown is an honest in-between.
    """
    if effort is None:
        effort = Effort.quick()
    a_rows = [tuple(int(x) for x in r) for r in a_rows]
    n = f.num_vars
    d = len(a_rows)
    if d != n - 1:
        raise ValueError("only fiber dimension 1 (d = n-1) is supported")
    if f.is_zero() or is_monomial(f):
        raise ValueError("need a nonzero non-monomial polynomial")
    if rank(a_rows) < d:
        # image lies in a proper subtorus: pick a relation r among the
        # rows and a target violating it
        rel = kernel_lattice(_transpose(a_rows)).basis[0]
        target = tuple(CycloNumber.from_rational(Fraction(2) ** r)
                       for r in rel)
        return SurjectivityVerdict(
            NOT_SURJECTIVE, kernel=None, witness_target=target,
            detail="rank-deficient exponent matrix; image lies in a "
                   "proper subtorus")
    v = kernel_lattice(a_rows).basis[0]
    for x in v:
        if x:
            if x < 0:
                v = tuple(-y for y in v)
            break
    groups = group_polynomials(f, v)
    mono = [(e, p) for e, p in groups.items() if is_monomial(p)]
    if len(mono) >= 2:
        mono.sort(key=lambda ep: (not _is_constant(ep[1]), ep[0]))
        cert = (mono[0], mono[1])
        return SurjectivityVerdict(
            SURJECTIVE, kernel=v, certificate=cert,
            detail="two pairing groups are single monomials, so every "
                   "fiber polynomial has at least two terms")
    components = _component_reps(a_rows, n)
    if components is None:
        return SurjectivityVerdict(
            UNKNOWN, kernel=v,
            detail="component count of the fiber group exceeds the cap")
    obstruction = _surjectivity_obstruction(groups, components)
    if obstruction is not None:
        return SurjectivityVerdict(
            SURJECTIVE, kernel=v, span_certificate=obstruction,
            detail="every survivor assignment is obstructed by a monomial "
                   "combination of twisted groups (%d branches)"
                   % len(obstruction))
    found = _witness_search(f, v, groups, components, effort)
    if found is None and effort.primes:
        found = _field_screen(f, v, groups, components, effort)
    if found is None and len(groups) == 1:
        for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29):
            found = _power_point(f, v, groups, components, p)
            if found:
                break
    if found is not None:
        base, verdicts = found
        return SurjectivityVerdict(
            NOT_SURJECTIVE, kernel=v, witness_base=base,
            witness_target=_target_of(base, a_rows),
            witness_verdicts=verdicts,
            detail="fiber through the witness misses the hypersurface "
                   "(all %d component(s) verified)" % len(components))
    return SurjectivityVerdict(
        UNKNOWN, kernel=v,
        detail="no certificate and no witness within the search budget")


def _is_constant(p):
    return p.support() == [tuple([0] * p.num_vars)]


# ---------------------------------------------------------------------------
# density harness


def _matrices_exhaustive(d, n, bound):
    total = (2 * bound + 1) ** (d * n)
    for code in range(total):
        entries = []
        x = code
        for _ in range(d * n):
            entries.append(x % (2 * bound + 1) - bound)
            x //= 2 * bound + 1
        yield [tuple(entries[i * n:(i + 1) * n]) for i in range(d)]


def density_estimate(f, N, mode="exhaustive", seed=0, effort=None,
                     sample_count=500, cap=EXHAUSTIVE_CAP):
    """Tally surjectivity verdicts over exponent matrices with entries
    in [-N, N]; the probabilistic-density harness.

    Deterministic given (seed, effort): sampled matrices come from
    per-index substreams, so the report does not depend on evaluation
    order.
    """
    if effort is None:
        effort = Effort.quick()
    n = f.num_vars
    d = n - 1
    counts = {SURJECTIVE: 0, NOT_SURJECTIVE: 0, UNKNOWN: 0}
    cache = {}

    def decide(a_rows):
        key = tuple(a_rows)
        if key not in cache:
            cache[key] = surjectivity_decide(f, a_rows, effort).status
        return cache[key]

    if mode == "exhaustive":
        total = (2 * N + 1) ** (d * n)
        if total > cap:
            raise ValueError("exhaustive space %d exceeds cap %d"
                             % (total, cap))
        for a_rows in _matrices_exhaustive(d, n, N):
            counts[decide(a_rows)] += 1
        return DensityReport(n, N, total, counts[SURJECTIVE],
                             counts[NOT_SURJECTIVE], counts[UNKNOWN],
                             seed, total, mode="exhaustive")
    if mode == "sample":
        rng = SplitMix64(seed)
        for idx in range(sample_count):
            sub = rng.split(idx)
            a_rows = [tuple(sub.randint(-N, N) for _ in range(n))
                      for _ in range(d)]
            counts[decide(a_rows)] += 1
        return DensityReport(n, N, sample_count, counts[SURJECTIVE],
                             counts[NOT_SURJECTIVE], counts[UNKNOWN],
                             seed, sample_count, mode="sample")
    raise ValueError("mode must be 'exhaustive' or 'sample'")


# ---------------------------------------------------------------------------
# bad subtori and torsion cosets


def _primitive_directions(n, norm_bound):
    """Primitive integer vectors with sup-norm <= bound, one per +-pair,
    in deterministic order."""
    def rec(prefix):
        if len(prefix) == n:
            yield tuple(prefix)
            return
        for x in range(-norm_bound, norm_bound + 1):
            yield from rec(prefix + [x])
    for v in rec([]):
        if not any(v):
            continue
        g = 0
        for x in v:
            g = gcd(g, abs(x))
        if g != 1:
            continue
        lead = next(x for x in v if x)
        if lead < 0:
            continue
        yield v


def bad_subtorus_search(f, norm_bound, effort=None):
    """Candidate obstruction subtori: 1-dimensional directions whose
    generic translate misses the hypersurface.

    Requires geometrical non-degeneracy (otherwise the phenomenon is
    explained by the stabilizer and the premise of the finiteness
    statement fails); refuses with a diagnostic if not.
    """
    if not is_geometrically_non_degenerate(f):
        raise ValueError(
            "hypersurface is geometrically degenerate (infinite "
            "stabilizer); the finite-obstruction framework does not apply")
    if norm_bound < 1:
        raise ValueError("norm_bound must be >= 1")
    if effort is None:
        effort = Effort.search()
    n = f.num_vars
    out = []
    for v in _primitive_directions(n, norm_bound):
        a_rows = kernel_lattice([v]).basis
        verdict = surjectivity_decide(f, a_rows, effort)
        if verdict.status == NOT_SURJECTIVE and verdict.witness_base:
            h0 = subtorus_from_equations(a_rows, ambient_dim=n)
            out.append((h0, Coset(h0, verdict.witness_base)))
    return out


def torsion_cosets_on_hypersurface(f, max_order, direction_bound,
                                   max_vars=4, order_cap=48):
    """All torsion points of order <= max_order on V(f), each with a
    contained 1-dimensional torsion-coset direction when one exists.

    Desk-scale enumeration; caps guard the combinatorial explosion.
    """
    n = f.num_vars
    if n > max_vars:
        raise ValueError("variable count exceeds cap %d" % max_vars)
    if max_order > order_cap:
        raise ValueError("max_order exceeds cap %d" % order_cap)
    if f.is_zero():
        raise ValueError("zero polynomial")
    directions = list(_primitive_directions(n, direction_bound))
    results = []
    for pt in enumerate_torsion(n, max_order):
        coords = pt.coordinates()
        if not f.evaluate(coords).is_zero():
            continue
        found = None
        for v in directions:
            g = substitute_monomial(f, coords, [(x,) for x in v])
            if g.is_zero():
                found = subtorus_from_equations(
                    kernel_lattice([v]).basis, ambient_dim=n)
                break
        results.append((pt, found))
    return results
