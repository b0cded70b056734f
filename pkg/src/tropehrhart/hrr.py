"""Todd-operator Riemann-Roch machinery for convex chains of bundles.

The function z -> I(alpha[z]) (integral of the chain convolved with the
virtual polytope of support numbers z) is a polynomial of total degree at
most the ambient dimension.  It is recovered by exact interpolation from
evaluations at honest-polytope configurations: every branch of the bundle's
support function is written as a difference of convex support functions on a
zonotopal refinement of the fan, so each evaluation reduces to signed volumes
of genuine Minkowski sums.  Applying the truncated Todd operator
prod_rho T(d/dz_rho), T(t) = t / (1 - e^{-t}), at z = 0 then turns the
integral polynomial into the lattice sum, i.e. the Euler characteristic.
"""

from __future__ import annotations

import itertools
from fractions import Fraction
from functools import cmp_to_key
from math import ceil, comb, factorial

from .chains import invert_polytope, split_branches
from .errors import (
    InterpolationFailureError,
    UnsupportedDimensionError,
)
from .lattice import (
    Fan,
    HPolyhedron,
    VPolytope,
    minkowski_sum,
    refine_by_hyperplanes,
    vertex_enumeration,
    volume,
)
from .linalg import dot, solve_unique

HRR_MAX_DIM = 2


# ---------------------------------------------------------------------------
# Bernoulli numbers and the Todd series
# ---------------------------------------------------------------------------

def bernoulli(n: int) -> Fraction:
    """Bernoulli number B_n in the convention with B_1 = +1/2.

    Computed from the recurrence sum_{j<=n} C(n+1, j) B_j = 0 (which yields
    B_1 = -1/2) and flipping the sign of the odd entries.
    """
    if n < 0:
        raise ValueError("n must be nonnegative")
    b = [Fraction(1)]
    for m in range(1, n + 1):
        acc = Fraction(0)
        for j in range(m):
            acc += comb(m + 1, j) * b[j]
        b.append(-acc / (m + 1))
    return -b[n] if n % 2 else b[n]


def todd_coeffs(deg: int):
    """Coefficients of T(t) = t / (1 - e^{-t}) up to degree deg.

    Obtained by inverting the power series (1 - e^{-t})/t exactly, so the
    first few values are [1, 1/2, 1/12, 0, -1/720, ...].
    """
    a = [Fraction((-1) ** k, factorial(k + 1)) for k in range(deg + 1)]
    b = [Fraction(1)]
    for k in range(1, deg + 1):
        acc = Fraction(0)
        for j in range(1, k + 1):
            acc += a[j] * b[k - j]
        b.append(-acc)
    return b


# ---------------------------------------------------------------------------
# Exact multivariate polynomials
# ---------------------------------------------------------------------------

class MultiPoly:
    """Polynomial over Q in one variable per fan ray, stored sparsely."""

    def __init__(self, num_vars: int, coeffs=()):
        self.num_vars = num_vars
        self.coeffs = {}
        for mono, c in dict(coeffs).items():
            c = Fraction(c)
            if c != 0:
                self.coeffs[tuple(mono)] = c

    @property
    def total_degree(self) -> int:
        if not self.coeffs:
            return 0
        return max(sum(m) for m in self.coeffs)

    def evaluate(self, z) -> Fraction:
        z = tuple(Fraction(x) for x in z)
        total = Fraction(0)
        for mono, c in self.coeffs.items():
            term = c
            for zi, e in zip(z, mono):
                term *= zi**e
            total += term
        return total

    def compose_shift(self, delta) -> "MultiPoly":
        """The polynomial q with q(z) = p(z + delta)."""
        delta = tuple(Fraction(x) for x in delta)
        out = {}
        for mono, c in self.coeffs.items():
            # expand prod_i (z_i + delta_i)^{mono_i}
            expansions = []
            for e, d in zip(mono, delta):
                expansions.append(
                    [(k, comb(e, k) * d ** (e - k)) for k in range(e + 1)]
                )
            for picks in itertools.product(*expansions):
                new_mono = tuple(k for k, _ in picks)
                factor = c
                for _, f in picks:
                    factor *= f
                out[new_mono] = out.get(new_mono, Fraction(0)) + factor
        return MultiPoly(self.num_vars, out)

    def __eq__(self, other):
        return (
            isinstance(other, MultiPoly)
            and self.num_vars == other.num_vars
            and self.coeffs == other.coeffs
        )

    def __repr__(self):
        if not self.coeffs:
            return "MultiPoly(0)"
        parts = []
        for mono in sorted(self.coeffs, key=lambda m: (sum(m), m)):
            parts.append(f"{self.coeffs[mono]}*z^{mono}")
        return "MultiPoly(" + " + ".join(parts) + ")"


def apply_todd(p: MultiPoly) -> Fraction:
    """Evaluate prod_rho T(d/dz_rho) p at z = 0, truncated at deg(p)."""
    b = todd_coeffs(p.total_degree)
    total = Fraction(0)
    for mono, c in p.coeffs.items():
        term = c
        for e in mono:
            term *= b[e] * factorial(e)
        total += term
    return total


# ---------------------------------------------------------------------------
# Exact interpolation of z -> I(alpha[z])
# ---------------------------------------------------------------------------

def _sort_rays_ccw(rays):
    def half(v):
        return 0 if (v[1] > 0 or (v[1] == 0 and v[0] > 0)) else 1

    def compare(u, v):
        hu, hv = half(u), half(v)
        if hu != hv:
            return hu - hv
        cr = u[0] * v[1] - u[1] * v[0]
        return -1 if cr > 0 else (1 if cr < 0 else 0)

    return sorted(rays, key=cmp_to_key(compare))


def _walls(fan: Fan):
    """Convexity data per wall: (prev ray, next ray, a, b, wall ray).

    A support function h is convex across the wall w iff
    h(prev) + a*h(next) >= b*h(w), where prev + a*next = b*w with a, b > 0.
    In dimension one the single wall is the origin and the condition reads
    h(r0) + h(r1) >= 0.
    """
    if fan.ambient_dim == 1:
        r0, r1 = fan.rays
        return [(r0, r1, Fraction(1), Fraction(0), None)]
    ordered = _sort_rays_ccw(fan.rays)
    k = len(ordered)
    walls = []
    for i in range(k):
        prev = ordered[(i - 1) % k]
        w = ordered[i]
        nxt = ordered[(i + 1) % k]
        sol = solve_unique(
            [(nxt[0], -w[0]), (nxt[1], -w[1])], (-prev[0], -prev[1])
        )
        a, b = sol
        # b = 0 happens when prev and next are antipodal (a straight angle);
        # rays of a zonotopal fan are closed under negation, so b < 0 cannot
        if a <= 0 or b < 0:
            raise InterpolationFailureError(
                f"degenerate wall data at ray {w}"
            )
        walls.append((prev, w, nxt, a, b))
    return [(p, n, a, b, w) for p, w, n, a, b in walls]


def _wall_deficit(values, walls, ray_index):
    """Largest convexity violation of ray values across the walls."""
    worst = Fraction(0)
    for prev, nxt, a, b, w in walls:
        hw = values[ray_index[w]] if w is not None else Fraction(0)
        deficit = b * hw - values[ray_index[prev]] - a * values[ray_index[nxt]]
        if deficit > worst:
            worst = deficit
    return worst


def _honest_polytope(fan: Fan, values) -> VPolytope:
    """Polytope of convex support numbers, with attainment verified."""
    ineqs = [(fan.rays[i], values[i]) for i in range(len(fan.rays))]
    p = vertex_enumeration(HPolyhedron(ineqs, (), fan.ambient_dim))
    if p.is_empty():
        raise InterpolationFailureError("support numbers cut out no polytope")
    for i, r in enumerate(fan.rays):
        if max(dot(r, v) for v in p.vertices) != values[i]:
            raise InterpolationFailureError(
                f"support number on ray {r} is not attained; "
                "the numbers are not convex on this fan"
            )
    return p


def _zonotopal_fan(fan: Fan) -> Fan:
    """Refine a 2d fan so a strictly convex support function is available."""
    if fan.ambient_dim == 1:
        return fan
    normals = [(-r[1], r[0]) for r in fan.rays]
    return refine_by_hyperplanes(fan, normals)


def _reference_values(fan: Fan):
    """Strictly convex support numbers on a zonotopal fan.

    Sum of max(0, <s, x>) over the rotated ray normals s; every wall of the
    zonotopal fan lies on a kink line of one summand.
    """
    if fan.ambient_dim == 1:
        return [Fraction(1), Fraction(1)]
    normals = {(-r[1], r[0]) for r in fan.rays}
    normals = {n if _positive(n) else (-n[0], -n[1]) for n in normals}

    def g(x):
        return sum(max(0, dot(s, x)) for s in normals)

    return [Fraction(g(r)) for r in fan.rays]


def _positive(v):
    for x in v:
        if x != 0:
            return x > 0
    return False


def interpolate_volume_polynomial(h, base=None) -> MultiPoly:
    """Exact polynomial z -> I(alpha_h * 1_{P(z)}) in ray coordinates.

    h is a multi-valued support function on a smooth complete fan of
    dimension at most two.  Evaluations happen at z-offsets around a deep
    base point c (default 3*(n+1)*max|branch value|): each branch plus the
    linear extension of z + c is convexified by a large multiple of a
    strictly convex reference function on a zonotopal refinement, reducing
    every evaluation to signed volumes of honest Minkowski sums.  The fitted
    polynomial is verified on extra off-grid points, then recentered to
    absolute coordinates.
    """
    fan = h.fan
    n = fan.ambient_dim
    s = len(fan.rays)
    if n > HRR_MAX_DIM:
        raise UnsupportedDimensionError(
            f"volume interpolation capped at dimension {HRR_MAX_DIM}"
        )

    fan_r, _ = split_branches(h)
    fan_z = _zonotopal_fan(fan_r)
    # branch values on the zonotopal fan's rays
    branch_vals = []
    for i in range(h.rank):
        branch_vals.append([h.values_at(v)[i] for v in fan_z.rays])
    gvals = _reference_values(fan_z)
    walls = _walls(fan_z)
    ray_index = {r: i for i, r in enumerate(fan_z.rays)}

    if base is None:
        scale = max(
            (abs(v) for vals in branch_vals for v in vals), default=Fraction(0)
        )
        base = tuple([3 * (n + 1) * (int(scale) + 1)] * s)
    else:
        base = tuple(Fraction(x) for x in base)

    # the grid {z >= 0, sum z <= n} is poised for total degree n
    grid = [
        z
        for z in itertools.product(range(n + 1), repeat=s)
        if sum(z) <= n
    ]
    extra = _offgrid_points(s, n)

    def extend(zvec):
        """Values on fan_z rays of the piecewise linear extension of zvec."""
        out = []
        for v in fan_z.rays:
            key = None
            for mkey in fan.maximal_keys:
                if fan.cone(mkey).contains(v):
                    key = mkey
                    break
            idx = sorted(key)
            u = solve_unique(
                [fan.rays[i] for i in idx], [zvec[i] for i in idx]
            )
            out.append(dot(u, v))
        return out

    shifted = [tuple(Fraction(z[i]) + base[i] for i in range(s)) for z in grid]
    shifted_extra = [
        tuple(Fraction(z[i]) + base[i] for i in range(s)) for z in extra
    ]
    extensions = [extend(z) for z in shifted + shifted_extra]

    # one convexification factor covering every branch and every grid shift
    worst = Fraction(0)
    for vals in branch_vals:
        worst = max(worst, _wall_deficit(vals, walls, ray_index))
    for ext in extensions:
        worst = max(worst, _wall_deficit(ext, walls, ray_index))
    surplus = _wall_surplus(gvals, walls, ray_index)
    if surplus <= 0:
        raise InterpolationFailureError("reference function is not strictly convex")
    t = 2 * (ceil(worst / surplus) + 1)
    tg = [t * gv for gv in gvals]

    inv_chain = invert_polytope(_honest_polytope(fan_z, tg))

    def evaluate_at(ext_vals) -> Fraction:
        total = Fraction(0)
        for vals in branch_vals:
            numbers = [
                vals[i] + ext_vals[i] + tg[i] for i in range(len(fan_z.rays))
            ]
            big = _honest_polytope(fan_z, numbers)
            for coef, piece in inv_chain.terms:
                total += coef * volume(minkowski_sum(big, piece))
        return total

    values = [evaluate_at(ext) for ext in extensions[: len(grid)]]

    monos = sorted(
        (m for m in itertools.product(range(n + 1), repeat=s) if sum(m) <= n),
        key=lambda m: (sum(m), m),
    )
    rows = []
    for z in grid:
        rows.append([_mono_eval(m, z) for m in monos])
    coeffs = solve_unique(rows, values)
    if coeffs is None:
        raise InterpolationFailureError("interpolation system is singular")
    p_shifted = MultiPoly(s, dict(zip(monos, coeffs)))

    for z, ext in zip(extra, extensions[len(grid):]):
        if p_shifted.evaluate(z) != evaluate_at(ext):
            raise InterpolationFailureError(
                f"polynomial check failed at off-grid point {z}"
            )

    return p_shifted.compose_shift(tuple(-Fraction(c) for c in base))


def _wall_surplus(values, walls, ray_index):
    surplus = None
    for prev, nxt, a, b, w in walls:
        hw = values[ray_index[w]] if w is not None else Fraction(0)
        gain = values[ray_index[prev]] + a * values[ray_index[nxt]] - b * hw
        surplus = gain if surplus is None else min(surplus, gain)
    return surplus


def _mono_eval(mono, z):
    out = Fraction(1)
    for e, x in zip(mono, z):
        out *= Fraction(x) ** e
    return out


def _offgrid_points(s, n):
    import random

    rng = random.Random(20240 + s + n)
    pts = []
    while len(pts) < 5:
        z = tuple(rng.randint(n + 1, n + 6) for _ in range(s))
        if z not in pts:
            pts.append(z)
    return pts


# ---------------------------------------------------------------------------
# The Riemann-Roch check for bundles
# ---------------------------------------------------------------------------

def interpolate_I(bundle) -> MultiPoly:
    """Polynomial z -> I(alpha_E[z]) for a bundle on a fan of dimension <= 2."""
    return interpolate_volume_polynomial(bundle.support_function())


def hrr_verify(bundle) -> dict:
    """Compare Todd(d/dz) I(alpha_E[z]) at z = 0 with the Euler characteristic."""
    lhs = apply_todd(interpolate_I(bundle))
    rhs = bundle.euler_char_total()
    return {"lhs": lhs, "rhs": rhs, "equal": lhs == rhs}
