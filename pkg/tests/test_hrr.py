import random
from fractions import Fraction
from math import comb

import pytest

from tropehrhart.chains import MultiValuedSupportFunction
from tropehrhart.errors import InterpolationFailureError, UnsupportedDimensionError
from tropehrhart.hrr import (
    MultiPoly,
    _honest_polytope,
    apply_todd,
    bernoulli,
    hrr_verify,
    interpolate_I,
    interpolate_volume_polynomial,
    todd_coeffs,
)
from tropehrhart.lattice import Fan, HPolyhedron, lattice_points, vertex_enumeration
from tropehrhart.linalg import solve_unique
from tropehrhart.matroid import uniform_matroid
from tropehrhart.tropvb import validate

from conftest import zonotope_support_numbers


# ---------------------------------------------------------------------------
# Bernoulli numbers and Todd coefficients
# ---------------------------------------------------------------------------

def test_todd_coeffs_frozen_values():
    assert todd_coeffs(4) == [
        Fraction(1),
        Fraction(1, 2),
        Fraction(1, 12),
        Fraction(0),
        Fraction(-1, 720),
    ]


def test_bernoulli_convention():
    assert bernoulli(0) == 1
    assert bernoulli(1) == Fraction(1, 2)
    assert bernoulli(2) == Fraction(1, 6)
    assert bernoulli(3) == 0
    assert bernoulli(4) == Fraction(-1, 30)


def test_todd_matches_bernoulli_recurrence():
    # independent route: the recurrence sum C(n+1, j) B_j = 0 with B_0 = 1
    # gives the first-kind values; the series coefficients are
    # (-1)^k B_k / k!
    deg = 8
    b = [Fraction(1)]
    for m in range(1, deg + 1):
        acc = Fraction(0)
        for j in range(m):
            acc += comb(m + 1, j) * b[j]
        b.append(-acc / (m + 1))
    fact = 1
    expected = []
    for k in range(deg + 1):
        if k:
            fact *= k
        expected.append((-1) ** k * b[k] / fact)
    assert todd_coeffs(deg) == expected


# ---------------------------------------------------------------------------
# the Todd operator on polynomials
# ---------------------------------------------------------------------------

def test_apply_todd_linear():
    assert apply_todd(MultiPoly(2, {(1, 0): 1, (0, 1): 1})) == 1


def test_apply_todd_affine():
    for d in range(6):
        p = MultiPoly(2, {(0, 0): d, (1, 0): 1, (0, 1): 1})
        assert apply_todd(p) == d + 1


def test_apply_todd_constant():
    assert apply_todd(MultiPoly(3, {(0, 0, 0): Fraction(7, 3)})) == Fraction(7, 3)


def test_multipoly_shift():
    p = MultiPoly(2, {(2, 0): 1, (1, 1): 2})
    q = p.compose_shift((1, -1))
    for z in [(0, 0), (3, 2), (-1, 5)]:
        assert q.evaluate(z) == p.evaluate((z[0] + 1, z[1] - 1))


# ---------------------------------------------------------------------------
# interpolation of the integral polynomial
# ---------------------------------------------------------------------------

def test_interpolate_trivial_bundle_on_p1(p1_fan):
    bundle = validate(p1_fan, uniform_matroid(1, 1), [(0,), (0,)])
    poly = interpolate_I(bundle)
    assert poly == MultiPoly(2, {(1, 0): 1, (0, 1): 1})


def test_interpolate_line_bundles_on_p1(p1_fan):
    for d in range(6):
        bundle = validate(p1_fan, uniform_matroid(1, 1), [(d,), (0,)])
        poly = interpolate_I(bundle)
        assert poly == MultiPoly(2, {(0, 0): d, (1, 0): 1, (0, 1): 1})


def test_interpolate_fano_polynomial(fano_bundle):
    poly = interpolate_I(fano_bundle)
    assert poly.total_degree == 2
    # value at zero is the integral of the chain: the two honest branch
    # polytopes contribute 9/2 and 12, the inverted branch -6
    assert poly.evaluate((0, 0, 0)) == Fraction(21, 2)


def test_top_degree_part_is_degree_times_volume_polynomial(fano_bundle, p1_fan,
                                                           u23_bundle):
    # the quadratic part of I(alpha[z]) is deg(alpha) times the volume
    # polynomial of P(z); the latter is the whole polynomial of the trivial
    # rank-one bundle (alpha = 1_{origin}, degree 1)
    p2_fan = fano_bundle.fan
    trivial = validate(p2_fan, uniform_matroid(1, 1), [(0,), (0,), (0,)])
    vol_poly = interpolate_I(trivial)
    for bundle, deg in ((fano_bundle, 3), (u23_bundle, 2), (trivial, 1)):
        poly = interpolate_I(bundle)
        top = {m: c for m, c in poly.coeffs.items() if sum(m) == 2}
        expected = {
            m: deg * c for m, c in vol_poly.coeffs.items() if sum(m) == 2
        }
        assert top == expected


def test_interpolation_dimension_cap():
    rays = [(1, 0, 0), (0, 1, 0), (0, 0, 1), (-1, -1, -1)]
    fan = Fan(rays, [[0, 1, 2], [0, 1, 3], [0, 2, 3], [1, 2, 3]])
    bundle = validate(fan, uniform_matroid(1, 1), [(0,)] * 4)
    with pytest.raises(UnsupportedDimensionError):
        interpolate_I(bundle)


def test_honest_polytope_guard(hexagon_fan):
    # non-convex support numbers must be caught by the attainment check
    values = [0, 0, 0, 2, 2, 2]
    ordered = dict(zip([(1, 0), (0, 1), (-1, -1), (-1, 0), (0, -1), (1, 1)], values))
    with pytest.raises(InterpolationFailureError):
        _honest_polytope(
            hexagon_fan, [ordered[r] for r in hexagon_fan.rays]
        )


def test_todd_counts_lattice_points_of_random_polygons(hexagon_fan):
    # Riemann-Roch for honest polygons: the Todd operator applied to the
    # volume polynomial returns the number of lattice points
    rng = random.Random(97)
    checked = 0
    while checked < 20:
        values = zonotope_support_numbers(hexagon_fan, rng, coeff_max=2)
        poly = vertex_enumeration(
            HPolyhedron(list(zip(hexagon_fan.rays, values)))
        )
        if poly.dim < 2:
            continue
        branches = {}
        for key in hexagon_fan.maximal_keys:
            idx = sorted(key)
            u = solve_unique(
                [hexagon_fan.rays[i] for i in idx], [values[i] for i in idx]
            )
            branches[key] = (tuple(u),)
        h = MultiValuedSupportFunction(hexagon_fan, branches)
        p = interpolate_volume_polynomial(h)
        assert apply_todd(p) == len(lattice_points(poly))
        checked += 1


# ---------------------------------------------------------------------------
# the Riemann-Roch identity for bundles
# ---------------------------------------------------------------------------

def test_hrr_line_bundles_on_p1(p1_fan):
    for d in range(6):
        bundle = validate(p1_fan, uniform_matroid(1, 1), [(d,), (0,)])
        result = hrr_verify(bundle)
        assert result["equal"] and result["lhs"] == d + 1


def test_hrr_u23_bundle(u23_bundle):
    result = hrr_verify(u23_bundle)
    assert result["equal"]
    assert result["lhs"] == 8


def test_hrr_fano(fano_bundle):
    result = hrr_verify(fano_bundle)
    assert result["equal"]
    assert result["lhs"] == 27


def test_hrr_random_bundles_on_p1xp1(p1xp1_fan):
    from conftest import random_split_bundle

    rng = random.Random(151)
    for _ in range(3):
        bundle = random_split_bundle(p1xp1_fan, uniform_matroid(2, 3), rng)
        result = hrr_verify(bundle)
        assert result["equal"]


def test_hrr_on_hirzebruch_fan():
    # asymmetric smooth fan; the last case has negative Euler characteristic,
    # so the associated chain is genuinely virtual
    fan = Fan([(1, 0), (0, 1), (-1, 2), (0, -1)], [[0, 1], [1, 2], [2, 3], [3, 0]])
    assert fan.is_smooth() and fan.is_complete()
    cases = [
        ([(0,), (0,), (0,), (0,)], 1),
        ([(1,), (0,), (0,), (0,)], 2),
        ([(2,), (1,), (0,), (1,)], 9),
        ([(0,), (3,), (1,), (0,)], -4),
    ]
    for rows, chi in cases:
        bundle = validate(fan, uniform_matroid(1, 1), rows)
        assert bundle.euler_char_total() == chi
        result = hrr_verify(bundle)
        assert result["equal"] and result["lhs"] == chi
