"""Shared fixtures: the standard fans, the Fano-plane bundle, the rank-2
uniform bundle on the projective plane, and independent geometric oracles
used to cross-check the exact machinery."""

import itertools
from fractions import Fraction

import pytest

from tropehrhart.lattice import Fan, VPolytope
from tropehrhart.linalg import solve
from tropehrhart.matroid import (
    Matroid,
    bergman_project,
    circuit_extension,
    uniform_matroid,
)
from tropehrhart.tropvb import validate


# ---------------------------------------------------------------------------
# Fans
# ---------------------------------------------------------------------------

@pytest.fixture(scope="session")
def p1_fan():
    return Fan([(1,), (-1,)], [[0], [1]])


@pytest.fixture(scope="session")
def p2_fan():
    return Fan([(1, 0), (0, 1), (-1, -1)], [[0, 1], [1, 2], [0, 2]])


@pytest.fixture(scope="session")
def p1xp1_fan():
    return Fan([(1, 0), (0, 1), (-1, 0), (0, -1)], [[0, 1], [1, 2], [2, 3], [3, 0]])


@pytest.fixture(scope="session")
def hexagon_fan():
    return Fan(
        [(1, 0), (0, 1), (-1, -1), (-1, 0), (0, -1), (1, 1)],
        [[0, 5], [5, 1], [1, 3], [3, 2], [2, 4], [4, 0]],
    )


# ---------------------------------------------------------------------------
# Matroids and bundles
# ---------------------------------------------------------------------------

FANO_LINES = [
    {2, 3, 4}, {1, 3, 5}, {1, 2, 6}, {1, 4, 7}, {2, 5, 7}, {3, 6, 7}, {4, 5, 6}
]
# ground set order: y1 y2 y3 z1 z2 z3 w
FANO_DIAGRAM = [
    (2, 0, 0, 1, 0, 0, 1),
    (0, 2, 0, 0, 1, 0, 1),
    (0, 0, 2, 0, 0, 1, 1),
]


@pytest.fixture(scope="session")
def fano_matroid():
    bases = [
        set(b)
        for b in itertools.combinations(range(1, 8), 3)
        if set(b) not in FANO_LINES
    ]
    return Matroid(7, bases)


@pytest.fixture(scope="session")
def u23_matroid():
    return uniform_matroid(2, 3)


@pytest.fixture(scope="session")
def fano_bundle(p2_fan, fano_matroid):
    return validate(p2_fan, fano_matroid, FANO_DIAGRAM)


@pytest.fixture(scope="session")
def u23_bundle(p2_fan, u23_matroid):
    return validate(p2_fan, u23_matroid, [(1, 0, 0), (0, 1, 0), (0, 0, 1)])


# ---------------------------------------------------------------------------
# Independent oracles
# ---------------------------------------------------------------------------

def caratheodory_contains(points, p):
    """Is p in the convex hull of the points?  Exact, by enumerating
    barycentric subsystems of size at most dim + 1."""
    pts = [tuple(Fraction(x) for x in q) for q in points]
    p = tuple(Fraction(x) for x in p)
    if not pts:
        return False
    d = len(p)
    for size in range(1, d + 2):
        for sub in itertools.combinations(pts, size):
            rows = [tuple(q) for q in zip(*sub)] + [tuple([1] * size)]
            rhs = list(p) + [Fraction(1)]
            lam = solve(rows, rhs)
            if lam is None:
                continue
            if all(
                sum(r[j] * lam[j] for j in range(size)) == b
                for r, b in zip(rows, rhs)
            ) and all(x >= 0 for x in lam):
                return True
    return False


def oracle_hull_vertices(points):
    """Extreme points by the direct definition: p is a vertex iff it is not
    in the hull of the other points."""
    pts = sorted(set(tuple(Fraction(x) for x in q) for q in points))
    return [
        p for p in pts if not caratheodory_contains([q for q in pts if q != p], p)
    ]


def random_lattice_polytope(rng, dim, spread=2, npoints=5):
    pts = [
        tuple(rng.randint(-spread, spread) for _ in range(dim))
        for _ in range(npoints)
    ]
    return VPolytope(pts, dim)


def zonotope_support_numbers(fan, rng, coeff_max=2):
    """Convex support numbers on a fan refined by the lines of its rays.

    Sum of segments along rotated ray directions plus a translation; the
    result is an honest support vector on any fan containing those lines.
    """
    segs = [(-r[1], r[0]) for r in fan.rays]
    coeffs = [rng.randint(0, coeff_max) for _ in segs]
    shift = (rng.randint(-2, 2), rng.randint(-2, 2))
    values = []
    for r in fan.rays:
        v = sum(c * max(0, s[0] * r[0] + s[1] * r[1]) for c, s in zip(coeffs, segs))
        values.append(v + shift[0] * r[0] + shift[1] * r[1])
    return values


def random_split_bundle(fan, matroid, rng, lo=-2, hi=2):
    """Valid bundle whose rows all sit in one apartment."""
    basis = rng.choice(sorted(matroid.bases, key=sorted))
    rows = []
    for _ in fan.rays:
        coords = {e: rng.randint(lo, hi) for e in basis}
        row = circuit_extension(matroid, basis, coords)
        rows.append(tuple(int(x) for x in row))
    return validate(fan, matroid, rows)


def random_p1_bundle(fan, matroid, rng, lo=-2, hi=2):
    """On the line every Bergman row list is a valid bundle."""
    rows = []
    for _ in fan.rays:
        w = [rng.randint(lo, hi) for _ in range(matroid.m)]
        rows.append(tuple(int(x) for x in bergman_project(matroid, w)))
    return validate(fan, matroid, rows)


def random_bundle(fan, matroid, rng, tries=80, lo=-2, hi=2):
    """Random valid bundle by rejection over random Bergman rows.

    Most draws on the small matroids used in tests are compatible; if none
    of the tries validates, fall back to a split bundle.
    """
    from tropehrhart.errors import BundleValidationError

    for _ in range(tries):
        rows = []
        for _ in fan.rays:
            w = [rng.randint(lo, hi) for _ in range(matroid.m)]
            rows.append(tuple(int(x) for x in bergman_project(matroid, w)))
        try:
            return validate(fan, matroid, rows)
        except BundleValidationError:
            continue
    return random_split_bundle(fan, matroid, rng, lo, hi)


def grid_points(dim, radius):
    return itertools.product(range(-radius, radius + 1), repeat=dim)
