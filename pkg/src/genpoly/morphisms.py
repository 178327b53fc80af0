"""Collineations and dualities: displacement profiles, domesticity, fixed structures.

A morphism is a pair of index maps.  For a collineation, point_map sends
points to points and line_map lines to lines; for a duality, point_map sends
points to lines and line_map lines to points.  Internally every morphism also
acts as a permutation of the combined vertex set (points first), which makes
group arithmetic uniform across kinds.

Displacement bookkeeping follows the distance-class decomposition of element
orbits: for a collineation of a 2m-gon, an element at displacement 2k < 2m is
graded by how deep the map fixes the (reversed) geodesic to its image, giving
the refined classes indexed by r = 1..k+1.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .geometry import (
    GeometryError,
    IncidenceGeometry,
    POINT,
    LINE,
    Element,
)

COLLINEATION = "collineation"
DUALITY = "duality"


class MorphismError(GeometryError):
    pass


def _as_perm_array(seq, size):
    arr = np.asarray(seq, dtype=np.int32)
    if arr.shape != (size,):
        raise MorphismError("map has length %d, expected %d" % (arr.size, size))
    if np.any(np.sort(arr) != np.arange(size)):
        raise MorphismError("map is not a bijection")
    return arr


class Morphism:
    """A collineation or duality of a fixed geometry."""

    def __init__(self, geometry, kind, point_map, line_map, check=True):
        if kind not in (COLLINEATION, DUALITY):
            raise MorphismError("bad morphism kind %r" % kind)
        if kind == DUALITY and geometry.point_count != geometry.line_count:
            raise MorphismError("dualities need equally many points and lines")
        self.geometry = geometry
        self.kind = kind
        size_p = geometry.point_count if kind == COLLINEATION else geometry.line_count
        size_l = geometry.line_count if kind == COLLINEATION else geometry.point_count
        # image index ranges: for a duality point_map lands in lines and vice versa
        self.point_map = _as_perm_array(point_map, geometry.point_count) if kind == COLLINEATION \
            else _as_perm_array(point_map, geometry.point_count)
        self.line_map = _as_perm_array(line_map, geometry.line_count)
        pc = geometry.point_count
        if kind == COLLINEATION:
            self.perm = np.concatenate([self.point_map, pc + self.line_map])
        else:
            self.perm = np.concatenate([pc + self.point_map, self.line_map])
        self.perm = self.perm.astype(np.int32)
        if check and not self.preserves_incidence():
            raise MorphismError("maps do not preserve incidence")
        self._key = None

    # -- basics --------------------------------------------------------------

    def preserves_incidence(self):
        g = self.geometry
        if self.kind == COLLINEATION:
            lineset = {row: i for i, row in enumerate(g.lines)}
            for li, row in enumerate(g.lines):
                img = tuple(sorted(int(self.point_map[p]) for p in row))
                if lineset.get(img) != int(self.line_map[li]):
                    return False
            return True
        # duality: points of a line map to lines through the image point
        for li, row in enumerate(g.lines):
            q = int(self.line_map[li])
            pen = set(g.point_pencils[q])
            if any(int(self.point_map[p]) not in pen for p in row):
                return False
        return True

    def key(self):
        if self._key is None:
            self._key = (self.kind, self.perm.tobytes())
        return self._key

    def __eq__(self, other):
        return isinstance(other, Morphism) and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def is_identity(self):
        return self.kind == COLLINEATION and bool(
            np.all(self.perm == np.arange(self.geometry.vertex_count))
        )

    def __repr__(self):
        return "<%s of %d+%d geometry>" % (
            self.kind, self.geometry.point_count, self.geometry.line_count)


def identity(geometry):
    return Morphism(
        geometry, COLLINEATION,
        np.arange(geometry.point_count), np.arange(geometry.line_count),
        check=False,
    )


def from_vertex_perm(geometry, perm, check=True):
    """Rebuild a Morphism from a permutation of the combined vertex set."""
    pc = geometry.point_count
    perm = np.asarray(perm, dtype=np.int32)
    first = int(perm[0]) if pc else pc
    swaps = first >= pc
    if swaps:
        pmap = perm[:pc] - pc
        lmap = perm[pc:]
        return Morphism(geometry, DUALITY, pmap, lmap, check=check)
    return Morphism(geometry, COLLINEATION, perm[:pc], perm[pc:] - pc, check=check)


def compose(f, g):
    """Apply f first, then g."""
    if f.geometry is not g.geometry:
        raise MorphismError("morphisms live on different geometries")
    return from_vertex_perm(f.geometry, g.perm[f.perm], check=False)


def inverse(f):
    inv = np.empty_like(f.perm)
    inv[f.perm] = np.arange(f.perm.size, dtype=np.int32)
    return from_vertex_perm(f.geometry, inv, check=False)


def order(f):
    """Least k >= 1 with f^k the identity."""
    ident = np.arange(f.perm.size, dtype=np.int32)
    cur = f.perm.copy()
    k = 1
    while not np.array_equal(cur, ident):
        cur = f.perm[cur]
        k += 1
        if k > f.perm.size ** 2:
            raise MorphismError("runaway order computation")
    return k


# -- displacement profiles ----------------------------------------------------


@dataclass
class DisplacementProfile:
    """Counts of elements by displacement, refined for collineations.

    point_counts/line_counts map displacement -> count (even displacements for
    collineations, odd for dualities).  refined_points/refined_lines map
    (2k, r) -> count for 1 <= k <= m-1, 1 <= r <= k+1 (collineations of
    2m-gons only; opposite elements stay unrefined).
    """

    kind: str
    point_counts: dict
    line_counts: dict
    refined_points: dict = field(default_factory=dict)
    refined_lines: dict = field(default_factory=dict)
    opposite_chamber_count: int = 0
    chamber_count: int = 0

    def point_class(self, d, r=None):
        if r is None:
            return self.point_counts.get(d, 0)
        return self.refined_points.get((d, r), 0)

    def line_class(self, d, r=None):
        if r is None:
            return self.line_counts.get(d, 0)
        return self.refined_lines.get((d, r), 0)

    def line_distance_vector(self):
        """d_0..d_N with d_k the number of lines at displacement 2k."""
        n = max(self.line_counts) if self.line_counts else 0
        return [self.line_counts.get(2 * k, 0) for k in range(n // 2 + 1)]


def _refined_counts(g, perm, side_offset, count, m):
    """Refined displacement classes of one side under a collineation."""
    nxt = g.next_step_table()
    dist = g.dist
    idx = np.arange(count, dtype=np.int32) + side_offset
    img = perm[idx]
    disp = dist[idx, img]
    refined = {}
    for k in range(1, m):
        mask = disp == 2 * k
        if not np.any(mask):
            continue
        fwd = idx[mask]            # x_j walking from x toward x^theta
        bwd = img[mask]            # x_{2k-j} walking from x^theta toward x
        target = img[mask]
        source = idx[mask]
        depth = np.zeros(fwd.shape, dtype=np.int32)
        alive = np.ones(fwd.shape, dtype=bool)
        xj = fwd
        yj = bwd
        for j in range(1, k + 1):
            xj = np.where(alive, nxt[xj, target], xj)
            yj = np.where(alive, nxt[yj, source], yj)
            good = alive & (perm[xj] == yj)
            depth[good] = j
            alive = good
        r = k + 1 - depth
        for rv in range(1, k + 2):
            c = int(np.count_nonzero(r == rv))
            if c:
                refined[(2 * k, rv)] = c
    return refined


def _opposite_chambers_mask(g, f):
    cp, cl = g.chambers()
    pc = g.point_count
    n = g.gon
    perm = f.perm
    if f.kind == COLLINEATION:
        img_point, img_line = perm[cp], perm[pc + cl]
    else:
        img_point, img_line = perm[pc + cl], perm[cp]
    if n % 2 == 0:
        return (g.dist[cp, img_point] == n) & (g.dist[pc + cl, img_line] == n)
    return (g.dist[cp, img_line] == n) & (g.dist[pc + cl, img_point] == n)


def displacement_profile(g, f):
    """Full displacement profile of an automorphism."""
    pc = g.point_count
    perm = f.perm
    pidx = np.arange(pc, dtype=np.int32)
    lidx = np.arange(g.line_count, dtype=np.int32) + pc
    pd = g.dist[pidx, perm[pidx]]
    ld = g.dist[lidx, perm[lidx]]
    point_counts = {int(d): int(c) for d, c in zip(*np.unique(pd, return_counts=True))}
    line_counts = {int(d): int(c) for d, c in zip(*np.unique(ld, return_counts=True))}
    prof = DisplacementProfile(
        kind=f.kind,
        point_counts=point_counts,
        line_counts=line_counts,
    )
    if f.kind == COLLINEATION and g.gon % 2 == 0:
        m = g.gon // 2
        prof.refined_points = _refined_counts(g, perm, 0, pc, m)
        prof.refined_lines = _refined_counts(g, perm, pc, g.line_count, m)
    opp = _opposite_chambers_mask(g, f)
    prof.opposite_chamber_count = int(np.count_nonzero(opp))
    prof.chamber_count = int(opp.size)
    return prof


# -- domesticity ---------------------------------------------------------------


@dataclass(frozen=True)
class DomesticityVerdict:
    trivial: bool
    domestic: bool
    point_domestic: bool
    line_domestic: bool
    exceptional_domestic: bool
    anisotropic: bool

    def flags(self):
        return {
            "trivial": self.trivial,
            "domestic": self.domestic,
            "point_domestic": self.point_domestic,
            "line_domestic": self.line_domestic,
            "exceptional_domestic": self.exceptional_domestic,
            "anisotropic": self.anisotropic,
        }


def domesticity(g, f, profile=None):
    n = g.gon
    if profile is not None:
        point_opp = profile.point_counts.get(n, 0) > 0
        line_opp = profile.line_counts.get(n, 0) > 0
        opp = profile.opposite_chamber_count
        total = profile.chamber_count
    else:
        # cheap path: no refined classes needed for the verdict
        pc = g.point_count
        perm = f.perm
        pidx = np.arange(pc, dtype=np.int32)
        lidx = np.arange(g.line_count, dtype=np.int32) + pc
        point_opp = bool(np.any(g.dist[pidx, perm[pidx]] == n))
        line_opp = bool(np.any(g.dist[lidx, perm[lidx]] == n))
        mask = _opposite_chambers_mask(g, f)
        opp = int(np.count_nonzero(mask))
        total = int(mask.size)
    domestic = opp == 0
    return DomesticityVerdict(
        trivial=f.is_identity(),
        domestic=domestic,
        point_domestic=not point_opp,
        line_domestic=not line_opp,
        exceptional_domestic=domestic and point_opp and line_opp,
        anisotropic=opp == total,
    )


# -- fixed element structures ---------------------------------------------------

FIXED_EMPTY = "Empty"
FIXED_OPPOSITE_SET = "OppositeSet"
FIXED_TREE = "Tree"
FIXED_SUBPOLYGON = "SubPolygon"


@dataclass
class FixedStructure:
    fixed_points: tuple
    fixed_lines: tuple
    category: str
    diameter: int | None = None       # for trees
    params: tuple | None = None       # for subpolygons, when regular

    def size(self):
        return len(self.fixed_points) + len(self.fixed_lines)


def fixed_structure(g, f):
    """Fixed elements plus their category in the standard trichotomy."""
    if f.kind == DUALITY:
        return FixedStructure((), (), FIXED_EMPTY)
    pc = g.point_count
    fp = tuple(int(i) for i in np.flatnonzero(f.point_map == np.arange(pc)))
    fl = tuple(int(i) for i in np.flatnonzero(f.line_map == np.arange(g.line_count)))
    if not fp and not fl:
        return FixedStructure((), (), FIXED_EMPTY)
    verts = [*fp, *(pc + li for li in fl)]
    vset = set(verts)
    edges = 0
    for li in fl:
        edges += sum(1 for p in g.lines[li] if p in vset)
    n_comp = _component_count(g, verts, vset)
    if edges >= len(verts):  # a cycle inside the fixed substructure
        return FixedStructure(fp, fl, FIXED_SUBPOLYGON, params=_induced_params(g, fp, fl))
    if n_comp == 1:
        diam = 0
        if len(verts) > 1:
            sub = g.dist[np.ix_(verts, verts)]
            diam = int(sub.max())
        return FixedStructure(fp, fl, FIXED_TREE, diameter=diam)
    # disconnected and acyclic: the trichotomy leaves only mutually opposite sets
    sub = g.dist[np.ix_(verts, verts)]
    off = sub[~np.eye(len(verts), dtype=bool)]
    if off.size and int(off.min()) == g.gon:
        return FixedStructure(fp, fl, FIXED_OPPOSITE_SET)
    raise MorphismError("fixed structure violates the trichotomy; not an automorphism?")


def _component_count(g, verts, vset):
    pc = g.point_count
    seen = set()
    comps = 0
    for v0 in verts:
        if v0 in seen:
            continue
        comps += 1
        stack = [v0]
        seen.add(v0)
        while stack:
            v = stack.pop()
            for w in g.neighbours(v):
                if w in vset and w not in seen:
                    seen.add(w)
                    stack.append(w)
    return comps


def _induced_params(g, fp, fl):
    pset = set(fp)
    line_sizes = {sum(1 for p in g.lines[li] if p in pset) for li in fl}
    lset = set(fl)
    pencil_sizes = {sum(1 for li in g.point_pencils[p] if li in lset) for p in fp}
    if len(line_sizes) == 1 and len(pencil_sizes) == 1:
        return (g.gon, line_sizes.pop() - 1, pencil_sizes.pop() - 1)
    return None


# -- counting identities ----------------------------------------------------------


def check_counting_identities(g, f, profile=None):
    """Verify the displacement-class identities of a collineation of a 2m-gon.

    Returns the list of violated identity names (empty for every genuine
    automorphism).  The two grand identities tying opposite elements to the
    deepest non-opposite classes are checked only for domestic collineations.
    """
    if f.kind != COLLINEATION or g.gon % 2:
        raise MorphismError("counting identities apply to collineations of 2m-gons")
    from .geometry import validate_polygon

    params = validate_polygon(g)
    s, t = params.s, params.t
    m = g.gon // 2
    prof = profile if profile is not None else displacement_profile(g, f)
    P = prof.point_class
    L = prof.line_class
    bad = []

    def expect(name, lhs, rhs):
        if lhs != rhs:
            bad.append(name)

    for k in range(1, m):
        for r in range(1, k + 2):
            if r == k + 1:
                expect("|P_%d^%d| = |L_%d^%d|" % (2 * k, r, 2 * k, r),
                       P(2 * k, r), L(2 * k, r))
            elif (k, r) == (1, 1):
                # the r = k case degenerates at k = 1: the count over a fixed
                # line depends on its number of fixed points, so no identity
                continue
            elif r == k:
                expect("|P_%d^%d| = (s-1)|L_%d^%d|" % (2 * k, r, 2 * k - 2, r),
                       P(2 * k, r), (s - 1) * L(2 * k - 2, r))
                expect("|L_%d^%d| = (t-1)|P_%d^%d|" % (2 * k, r, 2 * k - 2, r),
                       L(2 * k, r), (t - 1) * P(2 * k - 2, r))
            else:
                expect("|P_%d^%d| = s|L_%d^%d|" % (2 * k, r, 2 * k - 2, r),
                       P(2 * k, r), s * L(2 * k - 2, r))
                expect("|L_%d^%d| = t|P_%d^%d|" % (2 * k, r, 2 * k - 2, r),
                       L(2 * k, r), t * P(2 * k - 2, r))
    if prof.opposite_chamber_count == 0:
        lhs = (t + 1) * P(2 * m)
        rhs = sum(s * L(2 * m - 2, r) for r in range(1, m)) + (s - 1) * L(2 * m - 2, m)
        expect("(t+1)|P_%d| = sum s|L_%d^r| + (s-1)|L_%d^%d|" % (2 * m, 2 * m - 2, 2 * m - 2, m),
               lhs, rhs)
        lhs = (s + 1) * L(2 * m)
        rhs = sum(t * P(2 * m - 2, r) for r in range(1, m)) + (t - 1) * P(2 * m - 2, m)
        expect("(s+1)|L_%d| = sum t|P_%d^r| + (t-1)|P_%d^%d|" % (2 * m, 2 * m - 2, 2 * m - 2, m),
               lhs, rhs)
    return bad


def chamber_opposite_count_via_formula(params, fixed_is_tree, cardinalities):
    """Closed-form count of chambers sent to opposite chambers (hexagons).

    cardinalities holds |L_0|, |P_0|, |L_2^1|, |L_2^2|, |L_4^1|, |L_4^2|,
    |L_4^3| under those exact keys.  Valid whenever the fixed structure is a
    nonempty tree; the collineation need not be domestic.
    """
    if params.n != 6:
        raise MorphismError("the chamber formula is for hexagons")
    if not fixed_is_tree:
        raise MorphismError("the chamber formula needs a (nonempty) tree of fixed elements")
    s, t = params.s, params.t
    c = {k: Fraction(v) for k, v in cardinalities.items()}
    total = (s + 1) * (t + 1) * (s * s * t * t + s * t + 1)
    val = (
        Fraction(total) + 1
        - c["L_0"] - c["P_0"]
        - (s * t + s + 1) * c["L_2^1"]
        - (s * t + s - t + 1) * c["L_2^2"]
        - (s + Fraction(1, t) + 1) * c["L_4^1"]
        - (s + 1) * c["L_4^2"]
        - (s + t) * c["L_4^3"]
    )
    if val.denominator != 1:
        raise MorphismError("chamber formula produced a non-integer: %s" % val)
    return int(val)


# -- text format -----------------------------------------------------------------

AUT_MAGIC = "GPAUT 1"


def write_morphism(f):
    return "\n".join([
        AUT_MAGIC,
        "KIND %s" % f.kind,
        "PMAP %s" % " ".join(str(int(i)) for i in f.point_map),
        "LMAP %s" % " ".join(str(int(i)) for i in f.line_map),
    ]) + "\n"


def read_morphism(g, text):
    lines = text.splitlines()
    if len(lines) != 4 or lines[0].strip() != AUT_MAGIC:
        raise MorphismError("bad automorphism payload")
    kind_parts = lines[1].split()
    if len(kind_parts) != 2 or kind_parts[0] != "KIND" or kind_parts[1] not in (COLLINEATION, DUALITY):
        raise MorphismError("bad KIND record")
    if not lines[2].startswith("PMAP ") or not lines[3].startswith("LMAP "):
        raise MorphismError("bad map records")
    pmap = [int(x) for x in lines[2].split()[1:]]
    lmap = [int(x) for x in lines[3].split()[1:]]
    return Morphism(g, kind_parts[1], pmap, lmap)
