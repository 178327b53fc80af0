"""Ovoidal subspaces of generalised 2n-gons and their trichotomy.

A subspace is closed under joining collinear points and under taking all
points of its lines.  An ovoidal subspace additionally covers the geometry
within radius n (half the gonality) and grants every element strictly inside
that radius a unique nearest member.  Every ovoidal subspace is one of: a
distance-n ovoid, a large full subpolygon, or a ball of radius n whose centre
type is forced by the parity of n.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .geometry import GeometryError, Element, POINT, LINE


DISTANCE_OVOID = "DistanceOvoid"
LARGE_FULL_SUBPOLYGON = "LargeFullSubpolygon"
BALL = "Ball"


class NotASubspace(GeometryError):
    pass


@dataclass
class ElementSet:
    points: tuple
    lines: tuple

    @classmethod
    def make(cls, points=(), lines=()):
        return cls(tuple(sorted(set(points))), tuple(sorted(set(lines))))

    def vertices(self, g):
        return [*self.points, *(g.point_count + li for li in self.lines)]

    def __contains__(self, el):
        if el.kind == POINT:
            return el.index in set(self.points)
        return el.index in set(self.lines)


def is_subspace(g, S):
    """Both closure conditions: joins of collinear point pairs, full lines."""
    pset = set(S.points)
    lset = set(S.lines)
    for li in lset:
        if not set(g.lines[li]) <= pset:
            return False
    pts = sorted(pset)
    for i, p in enumerate(pts):
        for q in pts[i + 1:]:
            if g.dist[p, q] == 2:
                join = _joining_line(g, p, q)
                if join not in lset:
                    return False
    return True


def _joining_line(g, p, q):
    for li in g.point_pencils[p]:
        if q in g.lines[li]:
            return li
    raise GeometryError("points %d,%d are not collinear" % (p, q))


def is_ovoidal(g, S):
    """Radius-n covering plus the unique-nearest condition (n = gon/2)."""
    if g.gon % 2:
        raise GeometryError("ovoidal subspaces live in 2n-gons")
    if not is_subspace(g, S):
        raise NotASubspace("element set is not a subspace")
    half = g.gon // 2
    verts = S.vertices(g)
    if not verts:
        return False
    dmat = g.dist[:, verts]
    dmin = dmat.min(axis=1)
    if int(dmin.max()) > half:
        return False
    inside = dmin < half
    nearest_count = (dmat == dmin[:, None]).sum(axis=1)
    return bool(np.all(nearest_count[inside] == 1))


def ball(g, x, radius):
    """The closed ball of the given radius around an element."""
    if radius > g.gon:
        raise GeometryError("radius exceeds the diameter")
    v = g.vertex(x)
    close = np.flatnonzero(g.dist[v] <= radius)
    pts = [int(w) for w in close if w < g.point_count]
    lns = [int(w) - g.point_count for w in close if w >= g.point_count]
    return ElementSet.make(pts, lns)


def classify_ovoidal(g, S):
    """Sort an ovoidal subspace into the trichotomy; returns (category, centre).

    centre is the ball centre Element for the Ball case and None otherwise.
    The parity rule is enforced: radius-n balls have point centres for n even
    and line centres for n odd.
    """
    if not is_ovoidal(g, S):
        raise NotASubspace("set is not an ovoidal subspace")
    half = g.gon // 2
    if not S.lines:
        # mutually opposite points covering the geometry
        pts = list(S.points)
        sub = g.dist[np.ix_(pts, pts)]
        off = sub[~np.eye(len(pts), dtype=bool)]
        if off.size == 0 or int(off.min()) == g.gon:
            return DISTANCE_OVOID, None
        raise NotASubspace("point set is neither an ovoid nor a ball")
    if _contains_polygon_cycle(g, S):
        return LARGE_FULL_SUBPOLYGON, None
    for x in _candidate_centres(g, S):
        b = ball(g, x, half)
        if b.points == S.points and b.lines == S.lines:
            want = POINT if half % 2 == 0 else LINE
            if x.kind != want:
                raise GeometryError("ball centre violates the parity rule")
            return BALL, x
    raise NotASubspace("ovoidal subspace matches no category; classification defect")


def _contains_polygon_cycle(g, S):
    verts = set(S.vertices(g))
    # cycle detection in the induced subgraph: edges >= vertices in a component
    seen = set()
    for v0 in verts:
        if v0 in seen:
            continue
        comp = []
        stack = [v0]
        seen.add(v0)
        while stack:
            v = stack.pop()
            comp.append(v)
            for w in g.neighbours(v):
                if w in verts and w not in seen:
                    seen.add(w)
                    stack.append(w)
        edges = sum(1 for v in comp for w in g.neighbours(v) if w in verts) // 2
        if edges >= len(comp):
            return True
    return False


def _candidate_centres(g, S):
    half = g.gon // 2
    verts = S.vertices(g)
    sub = g.dist[np.ix_(verts, verts)]
    ecc = sub.max(axis=1)
    for i in np.flatnonzero(ecc <= half):
        yield g.element(verts[int(i)])
