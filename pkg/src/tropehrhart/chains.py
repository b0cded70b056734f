"""The algebra of convex chains: integer combinations of polyhedron indicators.

A chain is a finite formal sum sum_i n_i * 1_{P_i} with integer coefficients.
Pieces are closed rational polyhedra: bounded ones as VPolytope, unbounded
ones (tangent cones from the Brianchon-Gram expansion) as HPolyhedron.
Chains are treated extensionally; two term lists representing the same
function are equal pointwise but are not canonicalized.

Convolution extends Minkowski summation bilinearly; 1_{{0}} is the identity.
The inverse of 1_P is the alternating sum of closed faces of -P.
"""

from __future__ import annotations

from fractions import Fraction

from .errors import (
    BoxTooSmallError,
    InvalidSupportFunctionError,
    NotPiecewiseLinearError,
    UnboundedPolyhedronError,
    UnsupportedOperandError,
    ValidationError,
)
from .lattice import (
    Fan,
    HPolyhedron,
    VPolytope,
    box_points,
    refine_by_hyperplanes,
    vertex_enumeration,
    volume,
)
from .linalg import clear_denominators, dot, is_zero, vec_sub


def _piece_key(piece):
    if isinstance(piece, VPolytope):
        return ("v", piece.vertices)
    return ("h", piece.inequalities, piece.equalities)


class ConvexChain:
    """Finite signed formal sum of indicator functions of closed polyhedra."""

    def __init__(self, terms=()):
        merged = {}
        pieces = {}
        for coeff, piece in terms:
            if coeff == 0:
                continue
            key = _piece_key(piece)
            merged[key] = merged.get(key, 0) + int(coeff)
            pieces[key] = piece
        self.terms = tuple(
            (c, pieces[k]) for k, c in merged.items() if c != 0
        )

    def evaluate(self, u) -> int:
        return sum(c for c, piece in self.terms if piece.contains(u))

    def __add__(self, other):
        return ConvexChain(self.terms + other.terms)

    def __sub__(self, other):
        return ConvexChain(self.terms + tuple((-c, p) for c, p in other.terms))

    def __neg__(self):
        return ConvexChain(tuple((-c, p) for c, p in self.terms))

    def scale(self, k: int):
        return ConvexChain(tuple((k * c, p) for c, p in self.terms))

    def __len__(self):
        return len(self.terms)

    def __repr__(self):
        return f"ConvexChain({len(self.terms)} terms)"


def point_chain(coords) -> ConvexChain:
    """The indicator chain of a single point; 1_{{0}} is the unit."""
    return ConvexChain([(1, VPolytope([tuple(coords)], trusted=True))])


def evaluate(a: ConvexChain, u) -> int:
    return a.evaluate(u)


def degree(a: ConvexChain) -> int:
    """Sum of coefficients over nonempty pieces."""
    total = 0
    for c, piece in a.terms:
        if isinstance(piece, VPolytope):
            if not piece.is_empty():
                total += c
        else:
            if not piece.is_empty():
                total += c
    return total


def _as_vpolytope(piece) -> VPolytope:
    if isinstance(piece, VPolytope):
        return piece
    try:
        return vertex_enumeration(piece)
    except UnboundedPolyhedronError as exc:
        raise UnsupportedOperandError(
            "operation requires bounded chain pieces"
        ) from exc


def convolve(a: ConvexChain, b: ConvexChain) -> ConvexChain:
    """Bilinear extension of Minkowski summation to chains."""
    from .lattice import minkowski_sum

    a_pieces = [(c, _as_vpolytope(p)) for c, p in a.terms]
    b_pieces = [(c, _as_vpolytope(p)) for c, p in b.terms]
    terms = []
    for ca, pa in a_pieces:
        for cb, pb in b_pieces:
            terms.append((ca * cb, minkowski_sum(pa, pb)))
    return ConvexChain(terms)


def invert_polytope(p: VPolytope) -> ConvexChain:
    """Convolution inverse of 1_P, in closed form.

    The inverse is the alternating sum of indicator functions of the closed
    faces of -P, each face weighted by (-1)^dim.
    """
    neg = p.negate()
    terms = [((-1) ** dim, face) for face, dim, _ in neg.faces()]
    return ConvexChain(terms)


class SupportNumbers:
    """Values of a (possibly virtual) support function on the rays of a fan."""

    def __init__(self, fan: Fan, values):
        values = tuple(Fraction(v) for v in values)
        if len(values) != len(fan.rays):
            raise ValidationError(
                f"expected {len(fan.rays)} support numbers, got {len(values)}"
            )
        self.fan = fan
        self.values = values

    def __getitem__(self, ray_index: int) -> Fraction:
        return self.values[ray_index]

    def __repr__(self):
        return f"SupportNumbers({self.values})"


def brianchon_gram(sn: SupportNumbers) -> ConvexChain:
    """Chain of tangent-cone indicators for given support numbers.

    For each cone of the (complete) fan, the piece is the polyhedron cut out
    by the cone's ray inequalities, weighted by (-1)^codim.  For convex
    support numbers the chain evaluates pointwise to the indicator function
    of the corresponding polytope.
    """
    fan = sn.fan
    if not fan.is_complete():
        raise ValidationError("Brianchon-Gram expansion requires a complete fan")
    d = fan.ambient_dim
    terms = []
    for key in fan.cone_keys:
        rays = [fan.rays[i] for i in sorted(key)]
        vals = [sn[i] for i in sorted(key)]
        if len(rays) > fan.dim(key):
            # non-simplicial cone: the ray values must extend linearly
            from .linalg import solve

            sol = solve(rays, vals)
            if sol is None or any(
                dot(sol, r) != v for r, v in zip(rays, vals)
            ):
                raise NotPiecewiseLinearError(
                    f"ray values do not extend linearly on cone {sorted(key)}"
                )
        piece = HPolyhedron(list(zip(rays, vals)), (), d)
        terms.append(((-1) ** fan.codim(key), piece))
    return ConvexChain(terms)


def lattice_sum(a: ConvexChain, box) -> int:
    """Sum of chain values over the integer points of a box.

    The box must have a zero margin: the chain is required to evaluate to 0
    everywhere on the outermost shell of the box, which makes "the box is
    large enough" a checked precondition rather than an assumption.
    """
    lo, hi = box
    total = 0
    for u in box_points(lo, hi):
        val = a.evaluate(u)
        if val != 0 and any(x == l or x == h for x, l, h in zip(u, lo, hi)):
            raise BoxTooSmallError(
                f"chain is nonzero at {u} on the box margin"
            )
        total += val
    return total


def integral(a: ConvexChain) -> Fraction:
    """Integral of the chain; lower-dimensional pieces contribute nothing."""
    total = Fraction(0)
    for c, piece in a.terms:
        total += c * volume(_as_vpolytope(piece))
    return total


def chain_box(a: ConvexChain, pad: int = 1):
    """Bounding box of all bounded pieces' vertices, padded outward."""
    points = []
    for _, piece in a.terms:
        if isinstance(piece, VPolytope):
            points.extend(piece.vertices)
    if not points:
        raise ValidationError("chain has no bounded pieces to bound")
    from .lattice import bounding_box

    return bounding_box(points, pad)


# ---------------------------------------------------------------------------
# Multi-valued support functions
# ---------------------------------------------------------------------------

class MultiValuedSupportFunction:
    """A piecewise linear function with r linear branches per maximal cone.

    Branches are linear functionals (elements of the character space) given
    per maximal cone; multisets of branch restrictions must agree on shared
    faces of adjacent cones, which is verified at construction.
    """

    def __init__(self, fan: Fan, branches):
        self.fan = fan
        self.branches = {
            frozenset(k): tuple(tuple(u) for u in us) for k, us in branches.items()
        }
        if set(self.branches) != set(fan.maximal_keys):
            raise InvalidSupportFunctionError(
                "branches must be given for exactly the maximal cones"
            )
        ranks = {len(us) for us in self.branches.values()}
        if len(ranks) != 1:
            raise InvalidSupportFunctionError("branch count differs between cones")
        self.rank = ranks.pop()
        self._check_face_agreement()

    def _check_face_agreement(self):
        fan = self.fan
        keys = list(fan.maximal_keys)
        for i in range(len(keys)):
            for j in range(i + 1, len(keys)):
                inter = fan.cone(keys[i]).intersect(fan.cone(keys[j]))
                if not inter.rays:
                    continue
                sig_i = sorted(
                    tuple(dot(u, r) for r in inter.rays)
                    for u in self.branches[keys[i]]
                )
                sig_j = sorted(
                    tuple(dot(u, r) for r in inter.rays)
                    for u in self.branches[keys[j]]
                )
                if sig_i != sig_j:
                    raise InvalidSupportFunctionError(
                        f"branch multisets disagree on the face shared by "
                        f"{sorted(keys[i])} and {sorted(keys[j])}"
                    )

    def values_at(self, x):
        """Sorted tuple of branch values at a point of the fan support."""
        from .lattice import min_containing_cone

        key = min_containing_cone(self.fan, x)
        for mkey in self.fan.maximal_keys:
            if key <= mkey:
                return tuple(sorted(dot(u, x) for u in self.branches[mkey]))
        raise ValidationError("point lies in no maximal cone")


def split_branches(h: MultiValuedSupportFunction, extra_normals=()):
    """Separate a multi-valued support function into one-valued branches.

    Refines the fan by all pairwise difference hyperplanes of the branch
    functionals (so the i-th smallest branch value is linear on every cone)
    and returns (refined_fan, [SupportNumbers for branch 1 .. r]).
    """
    fan = h.fan
    normals = []
    for us in h.branches.values():
        for a in range(len(us)):
            for b in range(a + 1, len(us)):
                diff = vec_sub(us[a], us[b])
                if not is_zero(diff):
                    normals.append(clear_denominators(diff))
    normals.extend(tuple(n) for n in extra_normals)
    refined = refine_by_hyperplanes(fan, normals)
    per_branch = [[] for _ in range(h.rank)]
    for v in refined.rays:
        vals = h.values_at(v)
        for i in range(h.rank):
            per_branch[i].append(vals[i])
    return refined, [SupportNumbers(refined, vals) for vals in per_branch]


def support_function_chain(
    h: MultiValuedSupportFunction, extra_normals=()
) -> ConvexChain:
    """Convex chain of a multi-valued support function.

    Sum of the Brianchon-Gram chains of the one-valued branches on the
    refined fan.  The result does not depend on extra refinements.
    """
    _, branch_numbers = split_branches(h, extra_normals)
    chain = ConvexChain()
    for sn in branch_numbers:
        chain = chain + brianchon_gram(sn)
    return chain
