"""Floating-point amoeba sampling and numeric cross-checks.

Everything here is deliberately approximate and seeded; the exact
modules never depend on it.  Convention: the amoeba is the image of the
variety under MINUS Log coordinatewise (most plotting literature uses
+Log; the sign matters when comparing against tropical fans).
"""

import cmath
import json
import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .fan import lin_space
from .ratlin import RatMatrix, invert
from .rng import SplitMix64

DEFAULT_RESIDUAL_TOL = 1e-8
_DK_MAX_ITER = 500


def univariate_roots(coeffs, tol=1e-12):
    """All complex roots by Durand-Kerner simultaneous iteration.

    ``coeffs`` ascending; leading coefficient must be nonzero.  Starting
    points sit on a circle of radius 1 + max |c_i / c_lead| with a fixed
    angular offset, so runs are deterministic.  Raises on
    non-convergence or when a residual exceeds tol * (1 + scale).
    """
    coeffs = [complex(c) for c in coeffs]
    while len(coeffs) > 1 and coeffs[-1] == 0:
        coeffs = coeffs[:-1]
    deg = len(coeffs) - 1
    if deg < 1:
        raise ValueError("degree must be >= 1")
    lead = coeffs[-1]
    monic = [c / lead for c in coeffs]
    scale = 1.0 + max(abs(c) for c in monic[:-1]) if deg else 1.0

    def poly(z):
        acc = 0j
        for c in reversed(monic):
            acc = acc * z + c
        return acc

    roots = [scale * cmath.exp(2j * math.pi * (k / deg) + 0.4j)
             for k in range(deg)]
    for _ in range(_DK_MAX_ITER):
        moved = 0.0
        for k in range(deg):
            denom = 1.0 + 0j
            for j in range(deg):
                if j != k:
                    denom *= roots[k] - roots[j]
            if denom == 0:
                roots[k] += 1e-6 * (1 + 1j)
                moved = float("inf")
                continue
            delta = poly(roots[k]) / denom
            roots[k] -= delta
            moved = max(moved, abs(delta))
        if moved < tol * scale:
            break
    else:
        raise RuntimeError("Durand-Kerner did not converge")
    for r in roots:
        if abs(poly(r)) > tol * (1 + scale) * 100:
            raise RuntimeError("root residual too large")
    return roots


@dataclass
class PointCloud:
    """Sampled amoeba points (-log |w| per coordinate) plus provenance.

    ``witnesses`` keeps the complex torus point behind each sample so
    the residual invariant can be re-audited after the fact; they are
    not serialized.
    """

    ambient_dim: int
    points: list
    meta: dict = field(default_factory=dict)
    witnesses: list = field(default_factory=list)

    def __len__(self):
        return len(self.points)

    def to_json_dict(self):
        return {"ambient_dim": self.ambient_dim,
                "points": [["%.17g" % x for x in p] for p in self.points],
                "meta": self.meta}

    def to_csv(self, fh):
        for p in self.points:
            fh.write(",".join("%.17g" % x for x in p) + "\n")


def _solve_variable(f, override=None):
    if override is not None:
        sv = override
    else:
        sv = None
        for i in range(f.num_vars - 1, -1, -1):
            if any(exp[i] for exp in f.support()):
                sv = i
                break
        if sv is None:
            raise ValueError("polynomial has no variable to solve for")
    if not any(exp[sv] for exp in f.support()):
        raise ValueError("polynomial does not depend on the solve variable")
    return sv


def sample_amoeba(f, count, log_box, seed, solve_var=None,
                  tol=DEFAULT_RESIDUAL_TOL):
    """Sample the amoeba of V(f): draw all-but-one coordinate on an
    annulus, solve for the last, keep -Log of verified torus solutions.

    f must have rational coefficients; every emitted point's witness w
    satisfies |f(w)| <= tol.
    """
    for c in f.terms.values():
        if not c.is_rational():
            raise ValueError("amoeba sampling needs rational coefficients")
    if f.is_zero() or len(f.terms) == 1:
        raise ValueError("need a nonzero non-monomial polynomial")
    n = f.num_vars
    sv = _solve_variable(f, solve_var)
    terms = [(exp, float(c.as_fraction())) for exp, c in f.terms.items()]
    rng = SplitMix64(seed)
    points = []
    witnesses = []
    attempts = 0
    max_attempts = 60 * count + 100
    while len(points) < count and attempts < max_attempts:
        attempts += 1
        w = [None] * n
        for i in range(n):
            if i == sv:
                continue
            rho = rng.uniform(-log_box, log_box)
            theta = rng.uniform(0.0, 2 * math.pi)
            w[i] = cmath.exp(complex(rho, theta))
        by_power = {}
        for exp, c in terms:
            val = c
            for i in range(n):
                if i != sv and exp[i]:
                    val *= w[i] ** exp[i]
            by_power[exp[sv]] = by_power.get(exp[sv], 0j) + val
        emin = min(by_power)
        emax = max(by_power)
        if emax == emin:
            continue
        coeffs = [by_power.get(e, 0j) for e in range(emin, emax + 1)]
        if abs(coeffs[-1]) < 1e-250:
            continue
        try:
            roots = univariate_roots(coeffs, tol=1e-12)
        except RuntimeError:
            continue
        for r in roots:
            if len(points) >= count:
                break
            if abs(r) < 1e-12:
                continue
            w[sv] = r
            residual = abs(sum(
                c * _monomial_value(w, exp) for exp, c in terms))
            if residual <= tol:
                points.append(tuple(-math.log(abs(z)) for z in w))
                witnesses.append(tuple(w))
    if len(points) < count:
        raise RuntimeError("amoeba sampling starved: %d/%d points"
                           % (len(points), count))
    return PointCloud(n, points, meta={
        "poly": str(f), "seed": seed, "count": count,
        "residual_tol": tol, "log_box": log_box, "solve_var": sv},
        witnesses=witnesses)


def sample_amoeba_union(f, count, log_box, seed, tol=DEFAULT_RESIDUAL_TOL):
    """Chart-balanced amoeba cloud: the count is split across solve
    variables so tentacles in every coordinate direction get sampled.

    A single-chart cloud systematically misses the tentacles of its own
    solve variable (hitting them needs a free coordinate to land
    exponentially close to a root), which starves covering checks.
    """
    n = f.num_vars
    vars_used = [i for i in range(n) if any(exp[i] for exp in f.support())]
    share = count // len(vars_used)
    sizes = [share] * len(vars_used)
    sizes[0] += count - share * len(vars_used)
    points = []
    witnesses = []
    for k, (sv, size) in enumerate(zip(vars_used, sizes)):
        if size == 0:
            continue
        part = sample_amoeba(f, size, log_box,
                             SplitMix64(seed).split(k).next_u64(),
                             solve_var=sv, tol=tol)
        points.extend(part.points)
        witnesses.extend(part.witnesses)
    return PointCloud(n, points, meta={
        "poly": str(f), "seed": seed, "count": count,
        "residual_tol": tol, "log_box": log_box,
        "solve_var": "union"}, witnesses=witnesses)


def _monomial_value(w, exp):
    val = 1.0 + 0j
    for z, e in zip(w, exp):
        if e:
            val *= z ** e
    return val


def check_residuals(cloud, f):
    """Post-hoc residual audit over the stored witnesses.

    Returns the worst |f(w)|; also confirms each point really is
    -Log|witness|.
    """
    worst = 0.0
    for p, w in zip(cloud.points, cloud.witnesses):
        val = abs(f.evaluate_complex(list(w)))
        worst = max(worst, val)
        for x, z in zip(p, w):
            if abs(x + math.log(abs(z))) > 1e-9:
                raise AssertionError("point does not match its witness")
    return worst


def _complement_basis(subspace, n):
    """Orthonormal basis (rows) of the orthogonal complement of L."""
    if subspace.dim == 0:
        return np.eye(n)
    b = np.array([[float(x) for x in row] for row in subspace.basis],
                 dtype=float)
    _, s, vh = np.linalg.svd(b, full_matrices=True)
    rank = int(np.sum(s > 1e-12))
    return vh[rank:]


def covering_deficiency(cloud, subspace, grid_half_width, grid_step,
                        radius):
    """Fraction of grid points farther than ``radius`` from cloud + L.

    Distance is measured after orthogonal projection onto the complement
    of L, so translation along L is free.
    """
    if radius <= 0:
        raise ValueError("radius must be positive")
    n = cloud.ambient_dim
    q = _complement_basis(subspace, n)
    if q.shape[0] == 0:
        return 0.0
    if not cloud.points:
        return 1.0
    pts = np.array(cloud.points, dtype=float) @ q.T
    ticks = np.arange(-grid_half_width, grid_half_width + 1e-9, grid_step)
    grids = np.meshgrid(*([ticks] * n), indexing="ij")
    grid = np.stack([g.ravel() for g in grids], axis=1) @ q.T
    # pairwise squared distances in the quotient
    d2 = (np.sum(grid ** 2, axis=1)[:, None]
          + np.sum(pts ** 2, axis=1)[None, :]
          - 2.0 * grid @ pts.T)
    nearest = np.sqrt(np.maximum(d2.min(axis=1), 0.0))
    return float(np.mean(nearest > radius))


def _projection_matrix(cone):
    """Exact orthogonal projection onto lin(cone), as Fraction rows."""
    basis = lin_space(cone).basis
    if not basis:
        return None
    b = [list(row) for row in basis]
    k = len(b)
    n = len(b[0])
    gram = [[sum(b[i][t] * b[j][t] for t in range(n)) for j in range(k)]
            for i in range(k)]
    ginv = invert(RatMatrix(gram))
    # P = B^T (B B^T)^-1 B
    rows = []
    for s in range(n):
        row = []
        for t in range(n):
            acc = Fraction(0)
            for i in range(k):
                for j in range(k):
                    acc += b[i][s] * ginv.rows[i][j] * b[j][t]
            row.append(acc)
        rows.append(tuple(row))
    return tuple(rows)


def trop_consistency(cloud, fan, scale):
    """Max distance from scaled cloud points to the fan support.

    Projects each point exactly onto every cone's span, keeps the
    projections that land inside their cone, and takes the best; the
    nearest support point always arises this way.
    """
    if scale <= 0:
        raise ValueError("scale must be positive")
    if not cloud.points:
        return 0.0
    projections = [(c, _projection_matrix(c)) for c in fan.cones]
    worst = 0.0
    for p in cloud.points:
        x = [Fraction(v / scale).limit_denominator(10 ** 9) for v in p]
        best = None
        for cone, proj in projections:
            if proj is None:
                cand = [Fraction(0)] * fan.ambient_dim
            else:
                cand = [sum(proj[i][j] * x[j]
                            for j in range(fan.ambient_dim))
                        for i in range(fan.ambient_dim)]
            if not cone.contains(cand):
                continue
            dist = math.sqrt(sum(float(a - b) ** 2
                                 for a, b in zip(x, cand)))
            if best is None or dist < best:
                best = dist
        if best is None:
            # fall back to the origin, which every fan supports
            best = math.sqrt(sum(float(a) ** 2 for a in x))
        worst = max(worst, best)
    return worst


def cloud_to_json(cloud, fh):
    json.dump(cloud.to_json_dict(), fh, indent=2, sort_keys=True)
    fh.write("\n")
