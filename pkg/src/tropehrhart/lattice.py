"""Exact rational polyhedral geometry: cones, fans, polytopes.

All computations use integer and Fraction arithmetic.  Cones are stored by
primitive integer ray generators (plus explicit lineality generators where
needed, e.g. for dual cones of low-dimensional cones).  Polytopes carry exact
rational vertices; half-space descriptions use integer normals with rational
bounds, read as <y, normal> <= bound.

Dimension caps: vertex enumeration works up to ambient dimension 4 and fan
refinement up to 3, enforced with explicit errors.  Everything is brute-force
subsystem enumeration, which is fine at the scale this package targets.
"""

from __future__ import annotations

import itertools
from fractions import Fraction
from math import ceil, floor, gcd

from .errors import (
    NotInSupportError,
    UnboundedPolyhedronError,
    UnsupportedDimensionError,
    ValidationError,
)
from .linalg import (
    affine_rank,
    clear_denominators,
    cross_nullvec,
    det,
    dot,
    in_span,
    is_zero,
    nullspace,
    primitive,
    rank,
    reduce_mod_span,
    rref,
    solve,
    vec_neg,
    vec_sub,
)

VERTEX_ENUM_MAX_DIM = 4
REFINE_MAX_DIM = 3


# ---------------------------------------------------------------------------
# Half-space representation to generators (double description by enumeration)
# ---------------------------------------------------------------------------

def vcone_from_halfspaces(normals, dim):
    """Extreme rays and lineality of the cone {x : <n, x> >= 0 for all n}.

    Rays are primitive integer vectors, reduced modulo the lineality space so
    the output is canonical.  Brute force over rank-(r-1) subsystems.
    """
    rows = []
    seen = set()
    for n in normals:
        p = primitive(tuple(n))
        if not is_zero(p) and p not in seen:
            seen.add(p)
            rows.append(p)
    if not rows:
        basis = tuple(tuple(1 if j == i else 0 for j in range(dim)) for i in range(dim))
        return (), basis
    r = rank(rows)
    lin = nullspace(rows, dim)
    if lin:
        lin_red, lin_pivots = rref(lin)
    else:
        lin_red, lin_pivots = [], []
    rays = set()
    tested = set()
    for subset in itertools.combinations(rows, r - 1):
        if r == dim:
            w = cross_nullvec(subset, dim)
            if is_zero(w):
                continue
        else:
            ns = nullspace(list(subset), dim)
            if len(ns) != dim - r + 1:
                continue
            w = None
            for cand in ns:
                if not in_span(cand, lin):
                    w = cand
                    break
            if w is None:
                continue
        w = primitive(w)
        if w in tested:
            continue
        tested.add(w)
        tested.add(vec_neg(w))
        for cand in (w, vec_neg(w)):
            if all(dot(row, cand) >= 0 for row in rows):
                if lin:
                    red = clear_denominators(reduce_mod_span(cand, lin_red, lin_pivots))
                else:
                    red = cand
                if not is_zero(red):
                    rays.add(red)
                break
    return tuple(sorted(rays)), tuple(lin)


# ---------------------------------------------------------------------------
# Cones
# ---------------------------------------------------------------------------

class Cone:
    """Rational polyhedral cone, generated by rays plus a lineality space."""

    def __init__(self, rays, ambient_dim, lineality=(), canonicalize=False):
        rays = tuple(primitive(tuple(r)) for r in rays)
        lineality = tuple(primitive(tuple(v)) for v in lineality)
        if any(is_zero(r) for r in rays):
            raise ValidationError("zero vector is not a valid ray generator")
        self.ambient_dim = ambient_dim
        if canonicalize and (rays or lineality):
            halfspaces, lin2 = _dual_data(rays, lineality, ambient_dim)
            rays, lineality = vcone_from_halfspaces(
                list(halfspaces) + [v for l in lin2 for v in (l, vec_neg(l))],
                ambient_dim,
            )
        else:
            if len(set(rays)) != len(rays):
                raise ValidationError("repeated ray generator")
        self.rays = tuple(rays)
        self.lineality = tuple(lineality)
        self._dual = None
        self._faces = None

    @property
    def dim(self) -> int:
        vecs = list(self.rays) + list(self.lineality)
        if not vecs:
            return 0
        return rank(vecs)

    @property
    def generators(self):
        """All generators: rays plus both signs of every lineality vector."""
        gens = list(self.rays)
        for l in self.lineality:
            gens.append(l)
            gens.append(vec_neg(l))
        return tuple(gens)

    def is_pointed(self) -> bool:
        return not self.lineality

    @property
    def dual(self) -> "Cone":
        """The dual cone {u : <u, x> >= 0 for all x in this cone}."""
        if self._dual is None:
            rays, lin = vcone_from_halfspaces(self.generators, self.ambient_dim)
            self._dual = Cone(rays, self.ambient_dim, lineality=lin)
            self._dual._dual = self  # duality is involutive for closed cones
        return self._dual

    def contains(self, x) -> bool:
        d = self.dual
        return all(dot(g, x) >= 0 for g in d.rays) and all(
            dot(l, x) == 0 for l in d.lineality
        )

    def relint_contains(self, x) -> bool:
        d = self.dual
        return all(dot(g, x) > 0 for g in d.rays) and all(
            dot(l, x) == 0 for l in d.lineality
        )

    def intersect(self, other: "Cone") -> "Cone":
        normals = list(self.dual.generators) + list(other.dual.generators)
        rays, lin = vcone_from_halfspaces(normals, self.ambient_dim)
        return Cone(rays, self.ambient_dim, lineality=lin)

    def intersect_halfspace(self, normal) -> "Cone":
        normals = list(self.dual.generators) + [tuple(normal)]
        rays, lin = vcone_from_halfspaces(normals, self.ambient_dim)
        return Cone(rays, self.ambient_dim, lineality=lin)

    def face_ray_sets(self):
        """All faces of a pointed cone, as frozensets of local ray indices."""
        if not self.is_pointed():
            raise ValidationError("face enumeration requires a pointed cone")
        if self._faces is not None:
            return self._faces
        n = len(self.rays)
        full = frozenset(range(n))
        zero_sets = []
        for g in self.dual.rays:
            zero_sets.append(frozenset(i for i in range(n) if dot(g, self.rays[i]) == 0))
        faces = {full}
        frontier = [full]
        while frontier:
            face = frontier.pop()
            for z in zero_sets:
                sub = face & z
                if sub not in faces:
                    faces.add(sub)
                    frontier.append(sub)
        self._faces = sorted(faces, key=lambda s: (len(s), sorted(s)))
        return self._faces

    def key(self):
        if self.lineality:
            lin_red, _ = rref(self.lineality)
            return (frozenset(self.rays), frozenset(lin_red))
        return frozenset(self.rays)

    def __repr__(self):
        s = f"Cone(rays={list(self.rays)}"
        if self.lineality:
            s += f", lineality={list(self.lineality)}"
        return s + ")"

    def __eq__(self, other):
        return isinstance(other, Cone) and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())


def _dual_data(rays, lineality, dim):
    """Half-space normals (and equations) cutting out the given cone."""
    gens = list(rays)
    for l in lineality:
        gens.append(l)
        gens.append(vec_neg(l))
    dual_rays, dual_lin = vcone_from_halfspaces(gens, dim)
    return dual_rays, dual_lin


def dual_cone(c: Cone) -> Cone:
    """Generators of {u : <u, x> >= 0 on c}, by double description."""
    if c.ambient_dim > VERTEX_ENUM_MAX_DIM:
        raise UnsupportedDimensionError(
            f"dual cone computation capped at ambient dimension {VERTEX_ENUM_MAX_DIM}"
        )
    return c.dual


# ---------------------------------------------------------------------------
# Fans
# ---------------------------------------------------------------------------

class Fan:
    """Rational polyhedral fan, closed under taking faces.

    Rays are indexed; cones are stored as frozensets of ray indices.  The fan
    property (any two cones intersect in a common face) is verified at
    construction.
    """

    def __init__(self, rays, maximal_cones, ambient_dim=None, *, validate=True):
        rays = [primitive(tuple(r)) for r in rays]
        if any(is_zero(r) for r in rays):
            raise ValidationError("zero vector cannot be a fan ray")
        if len(set(rays)) != len(rays):
            raise ValidationError("repeated fan ray")
        if ambient_dim is None:
            if not rays:
                raise ValidationError("ambient dimension required for a trivial fan")
            ambient_dim = len(rays[0])
        self.ambient_dim = ambient_dim
        self.rays = tuple(rays)

        maximal = []
        for c in maximal_cones:
            key = frozenset(c)
            if any(i < 0 or i >= len(rays) for i in key):
                raise ValidationError("cone refers to a missing ray index")
            if key not in maximal:
                maximal.append(key)
        # drop cones that are faces of other listed cones
        maximal = [k for k in maximal if not any(k < other for other in maximal)]

        self._cone_cache = {}
        cone_dims = {}
        for key in maximal:
            cone = self._make_cone(key)
            ordered = sorted(key)
            for local in cone.face_ray_sets():
                face_key = frozenset(ordered[i] for i in local)
                if face_key not in cone_dims:
                    face_cone = self._make_cone(face_key)
                    cone_dims[face_key] = face_cone.dim
        self.cone_dims = cone_dims
        self.maximal_keys = tuple(
            sorted(maximal, key=lambda k: sorted(k))
        )
        self.cone_keys = tuple(
            sorted(cone_dims, key=lambda k: (cone_dims[k], sorted(k)))
        )
        self._complete = None
        self._smooth = None
        if validate:
            self._validate()

    def _make_cone(self, key) -> Cone:
        if key not in self._cone_cache:
            self._cone_cache[key] = Cone(
                tuple(self.rays[i] for i in sorted(key)), self.ambient_dim
            )
        return self._cone_cache[key]

    def cone(self, key) -> Cone:
        key = frozenset(key)
        if key not in self.cone_dims:
            raise KeyError(f"no cone with ray indices {sorted(key)}")
        return self._make_cone(key)

    def dim(self, key) -> int:
        return self.cone_dims[frozenset(key)]

    def codim(self, key) -> int:
        return self.ambient_dim - self.cone_dims[frozenset(key)]

    def _validate(self):
        for key in self.maximal_keys:
            cone = self._make_cone(key)
            if cone.lineality:
                raise ValidationError("fan cones must be strictly convex")
            canonical = Cone(cone.rays, self.ambient_dim, canonicalize=True)
            if canonical.lineality or set(canonical.rays) != set(cone.rays):
                raise ValidationError(
                    f"rays of cone {sorted(key)} are not all extreme"
                )
        for a, b in itertools.combinations(self.maximal_keys, 2):
            inter = self._make_cone(a).intersect(self._make_cone(b))
            if inter.lineality:
                raise ValidationError("cone intersection has lineality")
            try:
                ikey = frozenset(self.rays.index(r) for r in inter.rays)
            except ValueError:
                raise ValidationError(
                    f"cones {sorted(a)} and {sorted(b)} do not meet in a face"
                ) from None
            if not (ikey <= a and ikey <= b) or ikey not in self.cone_dims:
                raise ValidationError(
                    f"cones {sorted(a)} and {sorted(b)} do not meet in a face"
                )

    # -- global predicates --------------------------------------------------

    def is_complete(self) -> bool:
        """Do the maximal cones cover the whole space?

        Checked by facet pairing: every facet of a maximal cone must be
        shared by exactly two maximal cones.
        """
        if self._complete is None:
            self._complete = self._check_complete()
        return self._complete

    def _check_complete(self) -> bool:
        if not self.maximal_keys:
            return False
        n = self.ambient_dim
        for key in self.maximal_keys:
            if self.cone_dims[key] != n:
                return False
        for key in self.maximal_keys:
            cone = self._make_cone(key)
            ordered = sorted(key)
            for local in cone.face_ray_sets():
                face_key = frozenset(ordered[i] for i in local)
                if self.cone_dims.get(face_key) != n - 1:
                    continue
                count = sum(1 for m in self.maximal_keys if face_key <= m)
                if count != 2:
                    return False
        return True

    def is_smooth(self) -> bool:
        """Does every maximal cone's ray set extend to a lattice basis?"""
        if self._smooth is None:
            self._smooth = all(
                cone_is_smooth(self._make_cone(k)) for k in self.maximal_keys
            )
        return self._smooth

    def support_contains(self, x) -> bool:
        return any(self._make_cone(k).contains(x) for k in self.maximal_keys)

    def __repr__(self):
        return (
            f"Fan(ambient_dim={self.ambient_dim}, rays={len(self.rays)}, "
            f"maximal={len(self.maximal_keys)}, cones={len(self.cone_keys)})"
        )


def cone_is_smooth(c: Cone) -> bool:
    if c.lineality:
        return False
    k = len(c.rays)
    if k == 0:
        return True
    if rank(list(c.rays)) != k:
        return False
    minors = []
    for cols in itertools.combinations(range(c.ambient_dim), k):
        m = [[r[j] for j in cols] for r in c.rays]
        minors.append(abs(det(m)))
    g = 0
    for m in minors:
        g = gcd(g, m)
    return g == 1


def is_smooth(f: Fan) -> bool:
    return f.is_smooth()


def is_complete(f: Fan) -> bool:
    return f.is_complete()


def is_refinement(f2: Fan, f1: Fan) -> bool:
    """Does every cone of f2 sit inside a cone of f1 (with equal support)?"""
    if f2.ambient_dim != f1.ambient_dim:
        return False
    for key in f2.maximal_keys:
        cone = f2.cone(key)
        if not any(
            all(f1.cone(k1).contains(r) for r in cone.rays)
            for k1 in f1.maximal_keys
        ):
            return False
    if f1.is_complete() and not f2.is_complete():
        return False
    # original rays must survive in the refinement
    for r in f1.rays:
        if not f2.support_contains(r):
            return False
    return True


def min_containing_cone(f: Fan, x) -> frozenset:
    """Ray-index key of the unique smallest cone of f containing x."""
    for key in f.cone_keys:  # sorted by dimension
        if f.cone(key).contains(x):
            return key
    raise NotInSupportError(f"point {tuple(x)} is outside the fan support")


def refine_by_hyperplanes(f: Fan, normals) -> Fan:
    """Common refinement of f with the sign cells of linear hyperplanes."""
    if f.ambient_dim > REFINE_MAX_DIM:
        raise UnsupportedDimensionError(
            f"hyperplane refinement capped at ambient dimension {REFINE_MAX_DIM}"
        )
    todo = []
    seen = set()
    for n in normals:
        p = primitive(tuple(n))
        if is_zero(p):
            continue
        canon = p if _sign_key(p) > 0 else vec_neg(p)
        if canon not in seen:
            seen.add(canon)
            todo.append(canon)
    if not todo:
        return f

    pieces = []
    for key in f.maximal_keys:
        stack = [f.cone(key)]
        for n in todo:
            nxt = []
            for c in stack:
                signs = [dot(n, r) for r in c.rays]
                if all(s >= 0 for s in signs) or all(s <= 0 for s in signs):
                    nxt.append(c)
                else:
                    nxt.append(c.intersect_halfspace(n))
                    nxt.append(c.intersect_halfspace(vec_neg(n)))
            stack = nxt
        pieces.extend(stack)

    new_rays = list(f.rays)
    for c in pieces:
        for r in c.rays:
            if r not in new_rays:
                new_rays.append(r)
    old = len(f.rays)
    new_rays = new_rays[:old] + sorted(new_rays[old:])
    maximal = [frozenset(new_rays.index(r) for r in c.rays) for c in pieces]
    return Fan(new_rays, maximal, f.ambient_dim)


def _sign_key(v) -> int:
    for x in v:
        if x != 0:
            return 1 if x > 0 else -1
    return 0


def stellar_subdivision(f: Fan, v) -> Fan:
    """Star subdivision of f at the primitive lattice point v."""
    v = primitive(tuple(v))
    if is_zero(v):
        raise ValidationError("cannot subdivide at the origin")
    if not f.support_contains(v):
        raise NotInSupportError(f"{v} is outside the fan support")
    if v in f.rays:
        return f
    new_rays = list(f.rays) + [v]
    vi = len(f.rays)
    maximal = []
    for key in f.maximal_keys:
        cone = f.cone(key)
        if not cone.contains(v):
            maximal.append(key)
            continue
        ordered = sorted(key)
        for local in cone.face_ray_sets():
            face_key = frozenset(ordered[i] for i in local)
            if f.cone_dims[face_key] != f.cone_dims[key] - 1:
                continue
            if f.cone(face_key).contains(v):
                continue
            maximal.append(face_key | {vi})
    return Fan(new_rays, maximal, f.ambient_dim)


# ---------------------------------------------------------------------------
# Polyhedra
# ---------------------------------------------------------------------------

class HPolyhedron:
    """Intersection of half-spaces <y, v> <= d and hyperplanes <y, v> = d."""

    def __init__(self, inequalities=(), equalities=(), ambient_dim=None):
        ineqs = []
        for n, b in inequalities:
            ineqs.append((tuple(int(x) for x in n), Fraction(b)))
        eqs = []
        for n, b in equalities:
            eqs.append((tuple(int(x) for x in n), Fraction(b)))
        if ambient_dim is None:
            if ineqs:
                ambient_dim = len(ineqs[0][0])
            elif eqs:
                ambient_dim = len(eqs[0][0])
            else:
                raise ValidationError("ambient dimension required")
        self.ambient_dim = ambient_dim
        self.inequalities = tuple(ineqs)
        self.equalities = tuple(eqs)
        self._generators = None

    def contains(self, y) -> bool:
        return all(dot(n, y) <= b for n, b in self.inequalities) and all(
            dot(n, y) == b for n, b in self.equalities
        )

    def generators(self):
        """(vertices, rays, lineality) via homogenization.

        Vertices are exact rational points (representatives of minimal faces
        when the polyhedron has lineality); rays and lineality are primitive
        integer vectors.
        """
        if self._generators is not None:
            return self._generators
        d = self.ambient_dim
        rows = []
        for n, b in self.inequalities:
            q = b.denominator
            rows.append(tuple(-q * x for x in n) + (int(b * q),))
        for n, b in self.equalities:
            q = b.denominator
            row = tuple(q * x for x in n) + (-int(b * q),)
            rows.append(row)
            rows.append(vec_neg(row))
        rows.append(tuple([0] * d + [1]))
        crays, clin = vcone_from_halfspaces(rows, d + 1)
        verts = []
        rec_rays = []
        rec_lin = [l[:d] for l in clin]
        for r in crays:
            t = r[d]
            if t > 0:
                verts.append(tuple(Fraction(x, t) for x in r[:d]))
            else:
                rec_rays.append(primitive(r[:d]))
        self._generators = (tuple(sorted(verts)), tuple(sorted(rec_rays)),
                            tuple(sorted(rec_lin)))
        return self._generators

    def is_empty(self) -> bool:
        return not self.generators()[0]

    def is_bounded(self) -> bool:
        verts, rays, lin = self.generators()
        return not rays and not lin

    def __repr__(self):
        return (
            f"HPolyhedron({len(self.inequalities)} inequalities, "
            f"{len(self.equalities)} equalities, dim<={self.ambient_dim})"
        )


class VPolytope:
    """Bounded polytope given by its exact rational vertex set."""

    def __init__(self, vertices, ambient_dim=None, *, trusted=False):
        pts = [tuple(Fraction(x) for x in p) for p in vertices]
        if ambient_dim is None:
            if not pts:
                raise ValidationError("ambient dimension required for empty polytope")
            ambient_dim = len(pts[0])
        self.ambient_dim = ambient_dim
        if pts and not trusted:
            pts = convex_hull_vertices(pts)
        self.vertices = tuple(sorted(set(pts)))
        self._hrep = None
        self._faces = None

    @property
    def dim(self) -> int:
        return affine_rank(self.vertices)

    def is_empty(self) -> bool:
        return not self.vertices

    def translate(self, t) -> "VPolytope":
        return VPolytope(
            [tuple(x + Fraction(dt) for x, dt in zip(v, t)) for v in self.vertices],
            self.ambient_dim,
            trusted=True,
        )

    def negate(self) -> "VPolytope":
        return VPolytope(
            [tuple(-x for x in v) for v in self.vertices],
            self.ambient_dim,
            trusted=True,
        )

    def hrep(self):
        """(inequalities, equalities) cutting out this polytope."""
        if self._hrep is None:
            if not self.vertices:
                # canonical empty system: 0 <= -1
                self._hrep = (((tuple([0] * self.ambient_dim), Fraction(-1)),), ())
            else:
                _, ineqs, eqs = _hull_data(self.vertices, self.ambient_dim)
                self._hrep = (tuple(ineqs), tuple(eqs))
        return self._hrep

    def contains(self, y) -> bool:
        ineqs, eqs = self.hrep()
        return all(dot(n, y) <= b for n, b in ineqs) and all(
            dot(n, y) == b for n, b in eqs
        )

    def faces(self):
        """Full face lattice (this polytope included, empty face excluded).

        Returns a list of (face, dim, tangent_cone) triples; the tangent cone
        of a face is the intersection of the supporting half-spaces active on
        it, as an HPolyhedron.
        """
        if self._faces is not None:
            return self._faces
        if not self.vertices:
            self._faces = []
            return self._faces
        ineqs, eqs = self.hrep()
        verts = self.vertices
        incidences = []
        for n, b in ineqs:
            incidences.append(frozenset(
                i for i, v in enumerate(verts) if dot(n, v) == b
            ))
        full = frozenset(range(len(verts)))
        face_sets = {full}
        frontier = [full]
        while frontier:
            face = frontier.pop()
            for z in incidences:
                sub = face & z
                if sub and sub not in face_sets:
                    face_sets.add(sub)
                    frontier.append(sub)
        result = []
        for fs in sorted(face_sets, key=lambda s: (len(s), sorted(s))):
            pts = [verts[i] for i in sorted(fs)]
            face = VPolytope(pts, self.ambient_dim, trusted=True)
            active = [
                (n, b) for (n, b), inc in zip(ineqs, incidences) if fs <= inc
            ]
            tangent = HPolyhedron(active, eqs, self.ambient_dim)
            result.append((face, affine_rank(pts), tangent))
        result.sort(key=lambda t: (t[1], t[0].vertices))
        self._faces = result
        return self._faces

    def __eq__(self, other):
        return isinstance(other, VPolytope) and self.vertices == other.vertices

    def __hash__(self):
        return hash(self.vertices)

    def __repr__(self):
        return f"VPolytope({len(self.vertices)} vertices in dim {self.ambient_dim})"


# ---------------------------------------------------------------------------
# Convex hulls
# ---------------------------------------------------------------------------

def _hull2d(points):
    """Monotone chain; returns hull vertices in counterclockwise order."""
    pts = sorted(set(points))
    if len(pts) <= 2:
        return pts

    def cross(o, a, b):
        return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])

    lower = []
    for p in pts:
        while len(lower) >= 2 and cross(lower[-2], lower[-1], p) <= 0:
            lower.pop()
        lower.append(p)
    upper = []
    for p in reversed(pts):
        while len(upper) >= 2 and cross(upper[-2], upper[-1], p) <= 0:
            upper.pop()
        upper.append(p)
    return lower[:-1] + upper[:-1]


def convex_hull_vertices(points):
    """Extreme points of a finite point set (exact, any small dimension)."""
    pts = sorted(set(tuple(Fraction(x) for x in p) for p in points))
    if not pts:
        return []
    d = len(pts[0])
    ar = affine_rank(pts)
    if ar <= 0:
        return [pts[0]]
    if ar == 1:
        base = pts[0]
        direction = None
        for p in pts[1:]:
            diff = vec_sub(p, base)
            if not is_zero(diff):
                direction = diff
                break
        idx = next(i for i, x in enumerate(direction) if x != 0)
        lo = min(pts, key=lambda p: p[idx] * (1 if direction[idx] > 0 else -1))
        hi = max(pts, key=lambda p: p[idx] * (1 if direction[idx] > 0 else -1))
        return sorted({lo, hi})
    if ar == 2:
        if d == 2:
            return sorted(_hull2d(pts))
        return _hull_planar(pts)
    verts, _, _ = _hull_data(pts, d)
    return verts


def _hull_planar(points):
    """Hull of coplanar points in a higher-dimensional ambient space."""
    base = points[0]
    basis = []
    for p in points[1:]:
        diff = vec_sub(p, base)
        if not is_zero(diff) and not in_span(diff, basis):
            basis.append(diff)
            if len(basis) == 2:
                break
    coords = {}
    for p in points:
        lam = solve(list(zip(*basis)), vec_sub(p, base))
        coords[(lam[0], lam[1])] = p
    hull2 = _hull2d(list(coords))
    return sorted(coords[c] for c in hull2)


def _hull_data(points, d):
    """(vertices, inequalities, equalities) of the hull of a point set."""
    pts = sorted(set(tuple(Fraction(x) for x in p) for p in points))
    hom_rows = []
    for p in pts:
        hom_rows.append(clear_denominators(tuple(p) + (Fraction(1),)))
    dual_rays, dual_lin = vcone_from_halfspaces(hom_rows, d + 1)
    eqs = [(g[:d], Fraction(-g[d])) for g in dual_lin]
    ineqs = [
        (vec_neg(g[:d]), Fraction(g[d]))
        for g in dual_rays
        if not is_zero(g[:d])
    ]
    verts = []
    for p, h in zip(pts, hom_rows):
        active = list(dual_lin) + [g for g in dual_rays if dot(g, h) == 0]
        if active and rank(active) == d:
            verts.append(p)
    if not verts and pts:
        # single point (or hull degenerate to one point)
        verts = [pts[0]]
    return verts, ineqs, eqs


# ---------------------------------------------------------------------------
# Polytope operations
# ---------------------------------------------------------------------------

def vertex_enumeration(p: HPolyhedron) -> VPolytope:
    """Exact vertex set of a bounded H-polyhedron.

    Raises UnboundedPolyhedronError for unbounded input; an infeasible system
    yields the empty polytope.
    """
    if p.ambient_dim > VERTEX_ENUM_MAX_DIM:
        raise UnsupportedDimensionError(
            f"vertex enumeration capped at ambient dimension {VERTEX_ENUM_MAX_DIM}"
        )
    verts, rays, lin = p.generators()
    if not verts:
        return VPolytope([], p.ambient_dim)
    if rays or lin:
        raise UnboundedPolyhedronError("polyhedron is unbounded")
    return VPolytope(verts, p.ambient_dim, trusted=True)


def minkowski_sum(a: VPolytope, b: VPolytope) -> VPolytope:
    if a.ambient_dim != b.ambient_dim:
        raise ValidationError("Minkowski sum needs equal ambient dimensions")
    if a.is_empty() or b.is_empty():
        return VPolytope([], a.ambient_dim)
    sums = {
        tuple(x + y for x, y in zip(u, v))
        for u in a.vertices
        for v in b.vertices
    }
    return VPolytope(convex_hull_vertices(sums), a.ambient_dim, trusted=True)


def volume(p: VPolytope) -> Fraction:
    """Exact Euclidean volume; zero for polytopes of less than full dimension."""
    d = p.ambient_dim
    if p.dim < d:
        return Fraction(0)
    return _volume_by_pulling(p)


def _volume_by_pulling(p: VPolytope, use_max_vertex=False) -> Fraction:
    d = p.ambient_dim
    if d == 1:
        xs = [v[0] for v in p.vertices]
        return max(xs) - min(xs)
    if d == 2:
        ordered = _hull2d(p.vertices)
        s = Fraction(0)
        for i in range(len(ordered)):
            x1, y1 = ordered[i]
            x2, y2 = ordered[(i + 1) % len(ordered)]
            s += x1 * y2 - x2 * y1
        return abs(s) / 2
    total = Fraction(0)
    fac = 1
    for k in range(2, d + 1):
        fac *= k
    for simplex in _pulling_triangulation(p, use_max_vertex):
        base = simplex[0]
        mat = [vec_sub(v, base) for v in simplex[1:]]
        total += abs(_frac_det(mat))
    return total / fac


def _frac_det(rows):
    n = len(rows)
    mat = [list(map(Fraction, r)) for r in rows]
    sign = 1
    result = Fraction(1)
    for k in range(n):
        pivot = None
        for i in range(k, n):
            if mat[i][k] != 0:
                pivot = i
                break
        if pivot is None:
            return Fraction(0)
        if pivot != k:
            mat[k], mat[pivot] = mat[pivot], mat[k]
            sign = -sign
        result *= mat[k][k]
        inv = mat[k][k]
        for i in range(k + 1, n):
            if mat[i][k] != 0:
                f = mat[i][k] / inv
                mat[i] = [x - f * y for x, y in zip(mat[i], mat[k])]
    return sign * result


def _pulling_triangulation(p: VPolytope, use_max_vertex=False):
    """Triangulate by recursively pulling an extreme vertex of every face."""
    faces = p.faces()
    by_verts = {}
    for face, dim, _ in faces:
        by_verts[face.vertices] = dim
    children = {vs: [] for vs in by_verts}
    for vs, dim in by_verts.items():
        sset = set(vs)
        for vs2, dim2 in by_verts.items():
            if dim2 == dim - 1 and set(vs2) <= sset:
                children[vs].append(vs2)

    def pull(vs):
        dim = by_verts[vs]
        v = max(vs) if use_max_vertex else min(vs)
        if dim == 0:
            return [(v,)]
        simplices = []
        for sub in children[vs]:
            if v in sub:
                continue
            for s in pull(sub):
                simplices.append(s + (v,))
        return simplices

    top = max(by_verts, key=lambda vs: by_verts[vs])
    return pull(top)


def lattice_points(p: VPolytope):
    """All integer points of a bounded polytope, by box scan."""
    if p.is_empty():
        return []
    lo = [min(v[i] for v in p.vertices) for i in range(p.ambient_dim)]
    hi = [max(v[i] for v in p.vertices) for i in range(p.ambient_dim)]
    ineqs, eqs = p.hrep()
    pts = []
    ranges = [range(ceil(l), floor(h) + 1) for l, h in zip(lo, hi)]
    for u in itertools.product(*ranges):
        if all(dot(n, u) <= b for n, b in ineqs) and all(
            dot(n, u) == b for n, b in eqs
        ):
            pts.append(u)
    return pts


def faces(p: VPolytope):
    return p.faces()


def face_alternating_sum(p: HPolyhedron) -> int:
    """Sum of (-1)^dim over all nonempty faces of a line-free polyhedron.

    Equals 1 for bounded and 0 for unbounded polyhedra.
    """
    verts, rays, lin = p.generators()
    if lin:
        raise ValidationError("face sum requires a polyhedron without lineality")
    if not verts:
        return 0
    d = p.ambient_dim
    gens = []
    for v in verts:
        gens.append(clear_denominators(tuple(v) + (Fraction(1),)))
    for r in rays:
        gens.append(tuple(r) + (0,))
    dual_rays, _ = vcone_from_halfspaces(gens, d + 1)
    n = len(gens)
    zero_sets = [
        frozenset(i for i in range(n) if dot(g, gens[i]) == 0) for g in dual_rays
    ]
    full = frozenset(range(n))
    face_sets = {full}
    frontier = [full]
    while frontier:
        face = frontier.pop()
        for z in zero_sets:
            sub = face & z
            if sub not in face_sets:
                face_sets.add(sub)
                frontier.append(sub)
    total = 0
    for fs in face_sets:
        members = [gens[i] for i in fs]
        if not any(g[d] > 0 for g in members):
            continue  # empty face or a face at infinity
        total += (-1) ** (rank(members) - 1)
    return total


def bounding_box(points, pad=0):
    """Integer bounding box of a set of rational points, padded outward."""
    pts = list(points)
    d = len(pts[0])
    lo = tuple(floor(min(p[i] for p in pts)) - pad for i in range(d))
    hi = tuple(ceil(max(p[i] for p in pts)) + pad for i in range(d))
    return lo, hi


def box_points(lo, hi):
    return itertools.product(*(range(l, h + 1) for l, h in zip(lo, hi)))
