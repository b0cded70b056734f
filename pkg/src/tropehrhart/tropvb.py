"""Tropical vector bundles on complete toric varieties.

A bundle is a complete fan together with a matroid and an integer diagram:
one row per fan ray, one column per ground set element.  Each row must be a
point of the lifted Bergman fan of the matroid (all level sets of the row are
flats), and the rows attached to the rays of any single cone must lie in a
common apartment, i.e. admit a common adapted basis.  Validation finds the
lexicographically smallest adapted basis per cone; every quantity computed
from that choice (section flats, ranks, Euler characteristics, character
multisets) is independent of it.

Sections and Euler characteristics are computed from the induced filtrations
by flats; on smooth complete fans the bundle also has per-cone character
multisets, a multi-valued support function and an associated convex chain
whose values reproduce the equivariant Euler characteristic.
"""

from __future__ import annotations

import itertools
from fractions import Fraction

from .chains import ConvexChain, MultiValuedSupportFunction, support_function_chain
from .errors import (
    BoxTooSmallError,
    BundleValidationError,
    InvalidBoundError,
    NoCommonApartmentError,
    RowNotInBergmanError,
    UnsupportedConeError,
    ValidationError,
)
from .lattice import (
    Fan,
    HPolyhedron,
    bounding_box,
    box_points,
    cone_is_smooth,
    is_refinement,
    min_containing_cone,
    vertex_enumeration,
)
from .linalg import dot, solve, solve_unique
from .matroid import Matroid, apartment_contains, circuit_extension, in_lifted_bergman
from ._util import pmap


class TropicalVectorBundle:
    """Fan + matroid + diagram, validated; see the module docstring.

    Use :func:`validate` to construct one.
    """

    def __init__(self, fan: Fan, matroid: Matroid, diagram, adapted_bases):
        self.fan = fan
        self.matroid = matroid
        self.diagram = tuple(tuple(int(x) for x in row) for row in diagram)
        self.adapted_bases = dict(adapted_bases)
        self.rank = matroid.rank_total
        self._flat_cache = {}
        self._char_cache = {}

    # -- filtrations ----------------------------------------------------

    def klyachko_flat(self, ray_index: int, i: int) -> frozenset:
        """The flat of elements whose diagram entry on this ray is >= i."""
        row = self.diagram[ray_index]
        lo = min(row)
        hi = max(row)
        i = max(lo, min(i, hi + 1))
        key = (ray_index, i)
        if key not in self._flat_cache:
            level = frozenset(
                e for e in range(1, self.matroid.m + 1) if row[e - 1] >= i
            )
            self._flat_cache[key] = self.matroid.closure(level)
        return self._flat_cache[key]

    def section_flat(self, cone_key, u) -> frozenset:
        """Intersection of the ray flats at levels <u, v_rho> over the cone."""
        flat = self.matroid.ground
        for i in sorted(cone_key):
            flat = flat & self.klyachko_flat(i, dot(u, self.fan.rays[i]))
        return flat

    def h0_local(self, cone_key, u) -> int:
        return self.matroid.rank(self.section_flat(frozenset(cone_key), u))

    def h0_global(self, u) -> int:
        return self.h0_local(frozenset(range(len(self.fan.rays))), u)

    def global_section_flat(self, u) -> frozenset:
        return self.section_flat(frozenset(range(len(self.fan.rays))), u)

    # -- parliament -------------------------------------------------------

    def parliament(self):
        """Polyhedron P_e = {y : <y, v_rho> <= D[rho, e]} per ground element."""
        out = {}
        for e in range(1, self.matroid.m + 1):
            ineqs = [
                (self.fan.rays[i], self.diagram[i][e - 1])
                for i in range(len(self.fan.rays))
            ]
            out[e] = HPolyhedron(ineqs, (), self.fan.ambient_dim)
        return out

    def h0_global_parliament(self, u) -> int:
        """Rank of the set of parliament members containing u (cross path)."""
        members = frozenset(
            e for e, p in self.parliament().items() if p.contains(u)
        )
        return self.matroid.rank(members)

    # -- Euler characteristic ----------------------------------------------

    def euler_char_u(self, u) -> int:
        total = 0
        for key in self.fan.cone_keys:
            total += (-1) ** self.fan.codim(key) * self.h0_local(key, u)
        return total

    def euler_char_by_codim(self, u):
        """Per-codimension totals of rank h^0 over cones; sums to chi_u."""
        n = self.fan.ambient_dim
        byc = [0] * (n + 1)
        for key in self.fan.cone_keys:
            byc[self.fan.codim(key)] += self.h0_local(key, u)
        return byc

    def chi_box(self, pad: int = 1):
        """Box guaranteed (and then checked) to contain the support of chi."""
        pts = [tuple(0 for _ in range(self.fan.ambient_dim))]
        if self.fan.is_smooth():
            for key in self.fan.maximal_keys:
                pts.extend(self.characters(key))
        else:
            for p in self.parliament().values():
                pts.extend(vertex_enumeration(p).vertices)
        return bounding_box(pts, pad)

    def euler_char_total(self, box=None) -> int:
        """Sum of chi_u over a box whose margin shell must be chi-free."""
        if box is None:
            box = self.chi_box()
        lo, hi = box
        points = list(box_points(lo, hi))
        values = pmap(self.euler_char_u, points)
        total = 0
        for u, val in zip(points, values):
            if val != 0 and any(
                x == l or x == h for x, l, h in zip(u, lo, hi)
            ):
                raise BoxTooSmallError(f"chi is nonzero at {u} on the box margin")
            total += val
        return total

    def h0_total(self, box=None) -> int:
        """Sum of global section ranks over all characters."""
        if box is None:
            pts = []
            for p in self.parliament().values():
                pts.extend(vertex_enumeration(p).vertices)
            box = bounding_box(pts, 1)
        return sum(self.h0_global(u) for u in box_points(*box))

    # -- characters and the associated chain --------------------------------

    def characters(self, cone_key):
        """Character multiset of a maximal smooth cone.

        Entry j solves <u_j, v_rho> = D[rho, b_j] over the cone's rays, where
        b_j runs over the adapted basis; for smooth cones the solution is an
        integer vector.  The multiset does not depend on the chosen basis.
        """
        key = frozenset(cone_key)
        if key in self._char_cache:
            return self._char_cache[key]
        if key not in self.fan.cone_dims:
            raise KeyError(f"no cone {sorted(key)}")
        if self.fan.cone_dims[key] != self.fan.ambient_dim:
            raise UnsupportedConeError("characters are defined on maximal cones")
        cone = self.fan.cone(key)
        if not cone_is_smooth(cone):
            raise UnsupportedConeError("characters need a smooth cone")
        idx = sorted(key)
        rows = [self.fan.rays[i] for i in idx]
        chars = []
        for b in sorted(self.adapted_bases[key]):
            rhs = [self.diagram[i][b - 1] for i in idx]
            sol = solve_unique(rows, rhs)
            vec = tuple(int(x) for x in sol)
            chars.append(vec)
        result = tuple(sorted(chars))
        self._char_cache[key] = result
        return result

    def support_function(self) -> MultiValuedSupportFunction:
        """Multi-valued support function with the characters as branches."""
        if not self.fan.is_smooth() or not self.fan.is_complete():
            raise UnsupportedConeError(
                "the support function needs a smooth complete fan"
            )
        branches = {key: self.characters(key) for key in self.fan.maximal_keys}
        return MultiValuedSupportFunction(self.fan, branches)

    def chain_alpha(self, verify: bool = True) -> ConvexChain:
        """Convex chain whose values equal the equivariant Euler characteristic.

        With verify=True the pointwise identity against euler_char_u is
        checked on the chi box.
        """
        chain = support_function_chain(self.support_function())
        if verify:
            lo, hi = self.chi_box()
            for u in box_points(lo, hi):
                if chain.evaluate(u) != self.euler_char_u(u):
                    raise BundleValidationError(
                        f"chain value and chi disagree at {u}"
                    )
        return chain

    # -- pull-back -----------------------------------------------------------

    def pullback(self, refined: Fan) -> "TropicalVectorBundle":
        """Bundle induced on a refinement of the fan.

        Rows for surviving rays are copied; a new ray gets the linear
        interpolation of its containing cone's rows in adapted-basis
        coordinates, extended to the other columns by the circuit-minimum
        formula.
        """
        if not is_refinement(refined, self.fan):
            raise ValidationError("pullback target does not refine the fan")
        new_rows = []
        for v in refined.rays:
            if v in self.fan.rays:
                new_rows.append(self.diagram[self.fan.rays.index(v)])
                continue
            key = min_containing_cone(self.fan, v)
            lam = self._barycentric(key, v)
            basis = self.adapted_bases[key]
            coords = {}
            for b in basis:
                coords[b] = sum(
                    l * self.diagram[i][b - 1] for l, i in zip(lam, sorted(key))
                )
            row = circuit_extension(self.matroid, basis, coords)
            if any(x.denominator != 1 for x in row):
                raise ValidationError(
                    f"pullback row for {v} is not integral "
                    "(refined ray in a non-smooth cone)"
                )
            new_rows.append(tuple(int(x) for x in row))
        return validate(refined, self.matroid, new_rows)

    def _barycentric(self, cone_key, v):
        """Nonnegative coordinates of v over the cone's rays, in sorted order."""
        idx = sorted(cone_key)
        rays = [self.fan.rays[i] for i in idx]
        cols = list(zip(*rays))
        lam = solve(cols, v)
        if lam is not None and all(x >= 0 for x in lam):
            return tuple(lam)
        k = self.fan.cone_dims[frozenset(cone_key)]
        for subset in itertools.combinations(range(len(rays)), k):
            sub = [rays[i] for i in subset]
            lam = solve_unique(list(zip(*sub)), v)
            if lam is None or any(x < 0 for x in lam):
                continue
            full = [Fraction(0)] * len(rays)
            for pos, x in zip(subset, lam):
                full[pos] = x
            return tuple(full)
        raise ValidationError(f"{v} admits no conic combination in {sorted(cone_key)}")

    def __repr__(self):
        return (
            f"TropicalVectorBundle(rank={self.rank}, rays={len(self.fan.rays)}, "
            f"ground={self.matroid.m})"
        )


def validate(fan: Fan, matroid: Matroid, diagram) -> TropicalVectorBundle:
    """Check a diagram against a fan and matroid and build the bundle.

    Verifies that the fan is complete, that every row lies in the lifted
    Bergman fan of the matroid, and that the rows of every cone admit a
    common adapted basis (recorded per cone, lexicographically smallest).
    """
    diagram = tuple(tuple(int(x) for x in row) for row in diagram)
    if len(diagram) != len(fan.rays):
        raise BundleValidationError(
            f"diagram has {len(diagram)} rows for {len(fan.rays)} rays"
        )
    for row in diagram:
        if len(row) != matroid.m:
            raise BundleValidationError(
                f"diagram row has {len(row)} columns for ground size {matroid.m}"
            )
    if not fan.is_complete():
        raise BundleValidationError("bundles require a complete fan")

    for ri, row in enumerate(diagram):
        if not in_lifted_bergman(matroid, row):
            offending = None
            for k in set(row):
                level = frozenset(
                    e for e in range(1, matroid.m + 1) if row[e - 1] >= k
                )
                if not matroid.is_flat(level):
                    offending = level
                    break
            raise RowNotInBergmanError(ri + 1, row, offending)

    sorted_bases = sorted(matroid.bases, key=sorted)
    adapted = {}
    for key in fan.cone_keys:
        rows = [diagram[i] for i in sorted(key)]
        found = None
        for b in sorted_bases:
            if apartment_contains(matroid, b, rows):
                found = b
                break
        if found is None:
            raise NoCommonApartmentError(frozenset(sorted(key)))
        adapted[key] = found
        cone_dim = fan.cone_dims[key]
        if len(key) > cone_dim:
            # non-simplicial cone: adapted coordinates must extend linearly
            rays = [fan.rays[i] for i in sorted(key)]
            for b in found:
                vals = [diagram[i][b - 1] for i in sorted(key)]
                sol = solve(rays, vals)
                if sol is None or any(
                    dot(sol, r) != v for r, v in zip(rays, vals)
                ):
                    raise NoCommonApartmentError(frozenset(sorted(key)))
    return TropicalVectorBundle(fan, matroid, diagram, adapted)


# ---------------------------------------------------------------------------
# Split resolutions and K-classes
# ---------------------------------------------------------------------------

class SplitBundle:
    """Direct sum of rank-one pieces, recorded by character multisets.

    For each maximal cone the multiset of characters of all summands is
    stored; this is the data entering the alternating K-class identity.
    """

    def __init__(self, codim: int, fan: Fan, characters):
        self.codim = codim
        self.fan = fan
        self.characters = {
            frozenset(k): tuple(sorted(v)) for k, v in characters.items()
        }

    @property
    def rank(self) -> int:
        return len(next(iter(self.characters.values())))

    def __repr__(self):
        return f"SplitBundle(codim={self.codim}, rank={self.rank})"


def _pairing_values(bundle: TropicalVectorBundle, cone_key):
    """List over the adapted basis of dicts {ray index: diagram entry}."""
    basis = sorted(bundle.adapted_bases[frozenset(cone_key)])
    return [
        {i: bundle.diagram[i][b - 1] for i in sorted(cone_key)} for b in basis
    ]


def split_resolution(bundle: TropicalVectorBundle, f=None, check_bound=False):
    """Sequence of split bundles whose signed K-classes sum to the bundle's.

    For k = 0..n the k-th bundle collects one rank-r summand per codimension-k
    cone sigma; on a maximal cone tau its j-th character pairs with v_rho to
    the sigma-pairing for rays of sigma and to f(v_rho) for the other rays of
    tau.  The twisting numbers f default to the row maxima of the diagram.
    With check_bound=True, f must dominate every row's largest non-loop entry
    (the condition making each summand's filtrations taper to the loop flat).
    """
    fan = bundle.fan
    if not fan.is_smooth() or not fan.is_complete():
        raise UnsupportedConeError("split resolutions need a smooth complete fan")
    n = fan.ambient_dim
    nonloops = bundle.matroid.ground - bundle.matroid.loops
    if f is None:
        f = tuple(max(row) for row in bundle.diagram)
    else:
        f = tuple(Fraction(x) for x in f)
        if len(f) != len(fan.rays):
            raise ValidationError("f must give one value per fan ray")
    if check_bound:
        for i, row in enumerate(bundle.diagram):
            limit = max(row[e - 1] for e in nonloops)
            if f[i] < limit:
                raise InvalidBoundError(
                    f"f({fan.rays[i]}) = {f[i]} is below the row bound {limit}"
                )

    by_codim = {k: [] for k in range(n + 1)}
    for key in fan.cone_keys:
        by_codim[fan.codim(key)].append(key)

    result = []
    for k in range(n + 1):
        chars = {}
        for tau in fan.maximal_keys:
            idx = sorted(tau)
            rows = [fan.rays[i] for i in idx]
            multiset = []
            for sigma in by_codim[k]:
                for pairing in _pairing_values(bundle, sigma):
                    rhs = [
                        pairing[i] if i in sigma else f[i] for i in idx
                    ]
                    sol = solve_unique(rows, rhs)
                    multiset.append(_intify(sol))
            chars[tau] = tuple(sorted(multiset))
        result.append(SplitBundle(k, fan, chars))
    return result


def _intify(vec):
    out = []
    for x in vec:
        fx = Fraction(x)
        out.append(int(fx) if fx.denominator == 1 else fx)
    return tuple(out)


def k_class(bundle: TropicalVectorBundle):
    """Character multiset per maximal cone (the equivariant K-class data)."""
    return {
        key: bundle.characters(key) for key in bundle.fan.maximal_keys
    }


def k_class_identity(bundle: TropicalVectorBundle, resolution) -> bool:
    """Does the alternating sum of the resolution's K-classes equal the bundle's?

    Checked per maximal cone as a signed multiset identity on the character
    vectors (formal exponents).
    """
    from collections import Counter

    target = k_class(bundle)
    for key in bundle.fan.maximal_keys:
        acc = Counter()
        for piece in resolution:
            sign = (-1) ** piece.codim
            for u in piece.characters[key]:
                acc[u] += sign
        acc = {u: c for u, c in acc.items() if c != 0}
        want = Counter(target[key])
        if acc != dict(want):
            return False
    return True
