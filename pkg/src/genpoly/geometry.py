"""Finite point-line geometries on incidence graphs.

A geometry is stored as the list of its lines (each line an ascending tuple of
point indices).  All distance queries run against a dense all-pairs distance
table over the bipartite incidence graph, with vertices indexed points first
and then lines.  A generalised n-gon is a connected bipartite geometry whose
incidence graph has diameter n and girth 2n; `validate_polygon` checks exactly
that characterisation plus regularity.
"""

from __future__ import annotations

from dataclasses import dataclass
from collections import deque

import numpy as np


class GeometryError(ValueError):
    pass


class AxiomViolation(GeometryError):
    """The incidence graph fails a generalised-polygon axiom."""


class NonThick(AxiomViolation):
    """Valid polygon but some point or line has fewer than 3 neighbours."""


class NotUnique(GeometryError):
    """Geodesic/projection undefined: the pair is opposite."""


POINT = "point"
LINE = "line"


@dataclass(frozen=True)
class Element:
    """A point or a line, indexed 0-based within its own side."""

    kind: str
    index: int

    def __post_init__(self):
        if self.kind not in (POINT, LINE):
            raise GeometryError("element kind must be %r or %r" % (POINT, LINE))

    def __repr__(self):
        return "%s(%d)" % (self.kind, self.index)


def point(i):
    return Element(POINT, i)


def line(i):
    return Element(LINE, i)


@dataclass(frozen=True)
class PolygonParams:
    """Gonality and order: lines carry s+1 points, points carry t+1 lines."""

    n: int
    s: int
    t: int

    @property
    def thick(self):
        return self.s >= 2 and self.t >= 2


@dataclass(frozen=True)
class Chamber:
    """An incident point-line pair."""

    point: int
    line: int


class IncidenceGeometry:
    """Immutable geometry with precomputed incidence-graph distances."""

    def __init__(self, gon, lines, _dist=None):
        if gon < 2:
            raise GeometryError("gonality must be at least 2")
        if not lines:
            raise GeometryError("empty line set")
        pts = set()
        canon = []
        for li, row in enumerate(lines):
            row = tuple(int(p) for p in row)
            if len(set(row)) != len(row):
                raise GeometryError("duplicate point within line %d" % li)
            if len(row) < 2:
                raise GeometryError("line %d has fewer than 2 points" % li)
            canon.append(tuple(sorted(row)))
            pts.update(row)
        nump = max(pts) + 1
        if pts != set(range(nump)):
            raise GeometryError("point indices are not dense 0..P-1")
        self.gon = int(gon)
        self.lines = tuple(canon)
        self.point_count = nump
        self.line_count = len(canon)
        pencils = [[] for _ in range(nump)]
        for li, row in enumerate(self.lines):
            for p in row:
                pencils[p].append(li)
        self.point_pencils = tuple(tuple(pen) for pen in pencils)
        self.vertex_count = self.point_count + self.line_count
        self._adj = self._adjacency()
        self.dist = self._all_pairs_bfs() if _dist is None else _dist
        if int(self.dist.max()) >= self.vertex_count:
            raise GeometryError("disconnected incidence graph")
        self._next_step = None
        self._chambers = None

    # -- vertex bookkeeping -------------------------------------------------

    def vertex(self, el):
        """Global vertex index of an element (points first, then lines)."""
        if el.kind == POINT:
            if not 0 <= el.index < self.point_count:
                raise GeometryError("point index out of range: %d" % el.index)
            return el.index
        if not 0 <= el.index < self.line_count:
            raise GeometryError("line index out of range: %d" % el.index)
        return self.point_count + el.index

    def element(self, v):
        if v < self.point_count:
            return Element(POINT, v)
        return Element(LINE, v - self.point_count)

    def _adjacency(self):
        adj = [[] for _ in range(self.vertex_count)]
        for li, row in enumerate(self.lines):
            lv = self.point_count + li
            for p in row:
                adj[p].append(lv)
                adj[lv].append(p)
        return tuple(tuple(sorted(a)) for a in adj)

    def neighbours(self, v):
        return self._adj[v]

    def _all_pairs_bfs(self):
        n = self.vertex_count
        unreached = n  # sentinel larger than any true distance
        dist = np.full((n, n), unreached, dtype=np.int16)
        for src in range(n):
            row = dist[src]
            row[src] = 0
            queue = deque([src])
            while queue:
                u = queue.popleft()
                du = row[u]
                for w in self._adj[u]:
                    if row[w] == unreached:
                        row[w] = du + 1
                        queue.append(w)
        return dist

    # -- queries ------------------------------------------------------------

    def distance(self, x, y):
        return int(self.dist[self.vertex(x), self.vertex(y)])

    def _descending_neighbours(self, v, target):
        d = self.dist[v, target]
        return [w for w in self._adj[v] if self.dist[w, target] == d - 1]

    def geodesic(self, x, y):
        """The unique geodesic from x to y inclusive; NotUnique if opposite."""
        xv, yv = self.vertex(x), self.vertex(y)
        if self.dist[xv, yv] >= self.gon:
            raise NotUnique("opposite elements admit several geodesics")
        path = [xv]
        v = xv
        while v != yv:
            steps = self._descending_neighbours(v, yv)
            if len(steps) != 1:
                raise NotUnique("geodesic is not unique")
            v = steps[0]
            path.append(v)
        return [self.element(v) for v in path]

    def projection(self, x, y):
        """proj_x y: penultimate element of the geodesic from x to y."""
        xv, yv = self.vertex(x), self.vertex(y)
        d = int(self.dist[xv, yv])
        if d >= self.gon:
            raise NotUnique("projection onto an opposite element is undefined")
        if d == 0:
            raise GeometryError("projection of an element onto itself is undefined")
        steps = self._descending_neighbours(yv, xv)
        if len(steps) != 1:
            raise NotUnique("projection is not unique")
        return self.element(steps[0])

    def is_opposite(self, x, y):
        return self.distance(x, y) == self.gon

    def chamber(self, p, li):
        if li not in self.point_pencils[p]:
            raise GeometryError("point %d is not on line %d" % (p, li))
        return Chamber(p, li)

    def chamber_opposite(self, c1, c2):
        """Chamber opposition, branching on the parity of the gonality."""
        n = self.gon
        d = self.dist
        pc = self.point_count
        if n % 2 == 0:
            return (
                d[c1.point, c2.point] == n and d[pc + c1.line, pc + c2.line] == n
            )
        return d[c1.point, pc + c2.line] == n and d[pc + c1.line, c2.point] == n

    def chambers(self):
        """All chambers as parallel numpy arrays (point index, line index)."""
        if self._chambers is None:
            ps, ls = [], []
            for li, row in enumerate(self.lines):
                for p in row:
                    ps.append(p)
                    ls.append(li)
            self._chambers = (np.array(ps, dtype=np.int32), np.array(ls, dtype=np.int32))
        return self._chambers

    def next_step_table(self):
        """next[v, w] = the unique neighbour of v one step closer to w.

        Entries are -1 on the diagonal and wherever the step is not unique
        (in a valid n-gon: exactly the opposite pairs).  Built lazily.
        """
        if self._next_step is None:
            n = self.vertex_count
            nxt = np.full((n, n), -1, dtype=np.int16)
            cnt = np.zeros((n, n), dtype=np.int8)
            for u in range(n):
                du = self.dist[u]
                for w in self._adj[u]:
                    closer = self.dist[w] == du - 1  # targets reached one step via w
                    nxt[u][closer] = w
                    cnt[u] += closer.astype(np.int8)
            nxt[cnt != 1] = -1
            np.fill_diagonal(nxt, -1)
            self._next_step = nxt
        return self._next_step

    def sphere(self, x, k):
        """All elements at distance exactly k from x."""
        v = self.vertex(x)
        return [self.element(w) for w in np.flatnonzero(self.dist[v] == k)]

    def dual(self):
        """Swap the roles of points and lines.

        Dual points are the old lines (same indices); dual line i is the
        pencil of old point i.
        """
        dual_lines = [self.point_pencils[p] for p in range(self.point_count)]
        return IncidenceGeometry(self.gon, dual_lines)


def build_geometry(gon, lines):
    """Build a geometry and precompute its distance table (no axiom checks)."""
    return IncidenceGeometry(gon, lines)


def _girth(g):
    """Shortest cycle length of the incidence graph (inf if a forest)."""
    best = g.vertex_count + 1
    for src in range(g.vertex_count):
        lev = {src: 0}
        parent = {src: -1}
        queue = deque([src])
        while queue:
            u = queue.popleft()
            if 2 * lev[u] >= best - 1:
                break
            for w in g.neighbours(u):
                if w not in lev:
                    lev[w] = lev[u] + 1
                    parent[w] = u
                    queue.append(w)
                elif parent[u] != w:
                    # cross edge closes a cycle through src
                    best = min(best, lev[u] + lev[w] + 1)
    return best


def validate_polygon(g, require_thick=False):
    """Check the n-gon characterisation (diameter n, girth 2n, regularity).

    Returns the PolygonParams.  Thickness violations raise NonThick only when
    require_thick is set; weak geometries (grids, fixed substructures) are
    otherwise accepted.
    """
    diam = int(g.dist.max())
    if diam != g.gon:
        raise AxiomViolation("diameter %d, expected %d" % (diam, g.gon))
    girth = _girth(g)
    if girth != 2 * g.gon:
        raise AxiomViolation("girth %d, expected %d" % (girth, 2 * g.gon))
    line_sizes = {len(row) for row in g.lines}
    if len(line_sizes) != 1:
        raise AxiomViolation("lines have varying sizes %s" % sorted(line_sizes))
    pencil_sizes = {len(pen) for pen in g.point_pencils}
    if len(pencil_sizes) != 1:
        raise AxiomViolation("points have varying degrees %s" % sorted(pencil_sizes))
    s = line_sizes.pop() - 1
    t = pencil_sizes.pop() - 1
    params = PolygonParams(g.gon, s, t)
    if require_thick and not params.thick:
        raise NonThick("parameters (%d,%d) are not thick" % (s, t))
    return params


# -- text format -------------------------------------------------------------

FORMAT_MAGIC = "GP 1"


def write_geometry(g):
    """Serialise to the line-oriented geometry text format."""
    out = [FORMAT_MAGIC, "GON %d" % g.gon, "POINTS %d" % g.point_count,
           "LINES %d" % g.line_count]
    for i, row in enumerate(g.lines):
        out.append("L %d: %s" % (i, " ".join(str(p) for p in row)))
    return "\n".join(out) + "\n"


def read_geometry(text):
    """Parse the geometry text format, rejecting trailing garbage."""
    lines = text.splitlines()
    if len(lines) < 4:
        raise GeometryError("truncated geometry file")
    if lines[0].strip() != FORMAT_MAGIC:
        raise GeometryError("bad magic, expected %r" % FORMAT_MAGIC)

    def field(idx, key):
        parts = lines[idx].split()
        if len(parts) != 2 or parts[0] != key:
            raise GeometryError("expected '%s <int>' on line %d" % (key, idx + 1))
        return int(parts[1])

    gon = field(1, "GON")
    npts = field(2, "POINTS")
    nlns = field(3, "LINES")
    if len(lines) != 4 + nlns:
        raise GeometryError("expected %d line records, found %d" % (nlns, len(lines) - 4))
    rows = []
    for i in range(nlns):
        rec = lines[4 + i]
        head, sep, tail = rec.partition(":")
        if not sep or head.split() != ["L", str(i)]:
            raise GeometryError("bad line record %d: %r" % (i, rec))
        row = tuple(int(tok) for tok in tail.split())
        if list(row) != sorted(set(row)):
            raise GeometryError("line %d is not strictly ascending" % i)
        rows.append(row)
    g = build_geometry(gon, rows)
    if g.point_count != npts:
        raise GeometryError("POINTS header %d, found %d" % (npts, g.point_count))
    return g
