"""Automorphism/correlation groups of small geometries by partition backtracking.

The search acts on the combined vertex set of the incidence graph.  States are
pairs of aligned ordered partitions (domain, image); refinement splits cells by
the multiset of distances to every cell, which is a sharp invariant on these
highly regular graphs.  The group is assembled level by level: the orbit of a
base vertex is determined by complete extension searches, and the stabiliser
is built recursively, so the reported order is certified by the orbit chain
(and cross-checked against a Schreier-Sims computation on the generators).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .geometry import GeometryError
from . import morphisms as M


class BudgetExceeded(GeometryError):
    pass


DEFAULT_BUDGET = 10 ** 7


# -- partition refinement -----------------------------------------------------


def _signatures(g, cells):
    """Per-vertex invariant: distance histogram against every cell."""
    nb = g.gon + 1
    V = g.vertex_count
    rows = np.arange(V, dtype=np.int64)[:, None] * nb
    parts = []
    for c in cells:
        block = g.dist[:, c].astype(np.int64)
        cnt = np.bincount((block + rows).ravel(), minlength=V * nb).reshape(V, nb)
        parts.append(cnt)
    sig = np.concatenate(parts, axis=1).astype(np.int32)
    return [sig[v].tobytes() for v in range(V)]


def _group_cell(cell, sigs):
    groups = {}
    for v in cell:
        groups.setdefault(sigs[v], []).append(int(v))
    return groups


def _refine(g, dom, img):
    """Refine aligned partitions to a common fixpoint; None on mismatch."""
    while True:
        if all(len(c) == 1 for c in dom):
            return dom, img
        sig_dom = _signatures(g, dom)
        sig_img = _signatures(g, img) if img is not dom else sig_dom
        newd, newi = [], []
        changed = False
        for cd, ci in zip(dom, img):
            if len(cd) == 1 and len(ci) == 1:
                newd.append(cd)
                newi.append(ci)
                continue
            gd = _group_cell(cd, sig_dom)
            gi = _group_cell(ci, sig_img)
            if sorted((k, len(v)) for k, v in gd.items()) != sorted(
                (k, len(v)) for k, v in gi.items()
            ):
                return None
            keys = sorted(gd)
            if len(keys) > 1:
                changed = True
            for key in keys:
                newd.append(gd[key])
                newi.append(gi[key])
        dom, img = newd, newi
        if not changed:
            return dom, img


def _individualize(parts, ci, v):
    out = list(parts)
    cell = [w for w in parts[ci] if w != v]
    out[ci:ci + 1] = [[v], cell]
    return out


def _target_cell(dom):
    best = None
    for i, c in enumerate(dom):
        if len(c) > 1 and (best is None or len(c) < len(dom[best])):
            best = i
    return best


def _is_graph_automorphism(g, perm):
    for li, row in enumerate(g.lines):
        lv = g.point_count + li
        for p in row:
            if g.dist[perm[p], perm[lv]] != 1:
                return False
    return True


def _extract_map(g, dom, img):
    perm = np.empty(g.vertex_count, dtype=np.int32)
    for cd, ci in zip(dom, img):
        perm[cd[0]] = ci[0]
    if len(set(int(v) for v in perm)) != g.vertex_count:
        return None
    if not _is_graph_automorphism(g, perm):
        return None
    return perm


def _extend(g, dom, img):
    """Complete search for one automorphism respecting the aligned partitions."""
    state = _refine(g, dom, img)
    if state is None:
        return None
    dom, img = state
    ci = _target_cell(dom)
    if ci is None:
        return _extract_map(g, dom, img)
    b = min(dom[ci])
    for w in sorted(img[ci]):
        res = _extend(g, _individualize(dom, ci, b), _individualize(img, ci, w))
        if res is not None:
            return res
    return None


def _orbit(start, gens):
    seen = {start}
    frontier = [start]
    while frontier:
        v = frontier.pop()
        for p in gens:
            w = int(p[v])
            if w not in seen:
                seen.add(w)
                frontier.append(w)
    return seen


def _level(g, dom, img):
    """Generators and certified order of the automorphisms fixing the state."""
    state = _refine(g, dom, img)
    assert state is not None
    dom, img = state
    ci = _target_cell(dom)
    if ci is None:
        return [], 1
    b = min(dom[ci])
    sub_gens, sub_order = _level(
        g, _individualize(dom, ci, b), _individualize(img, ci, b)
    )
    gens = list(sub_gens)
    orbit = _orbit(b, gens)
    for w in sorted(img[ci]):
        if w in orbit:
            continue
        perm = _extend(g, _individualize(dom, ci, b), _individualize(img, ci, w))
        if perm is not None:
            gens.append(perm)
            orbit = _orbit(b, gens)
    return gens, len(orbit) * sub_order


# -- Schreier-Sims ---------------------------------------------------------------


class PermGroup:
    """Deterministic BSGS over vertex permutations (numpy int32 arrays)."""

    def __init__(self, degree, gens):
        self.degree = degree
        self.gens = [np.asarray(p, dtype=np.int32) for p in gens]
        self.base = []
        self.strong = []          # per level: list of generators fixing the prefix
        self.transversals = []    # per level: dict image -> permutation
        self._build()

    def _build(self):
        ident = np.arange(self.degree, dtype=np.int32)
        level_gens = [list(self.gens)]
        while True:
            gens = level_gens[-1]
            moved = None
            for p in gens:
                diff = np.flatnonzero(p != ident)
                if diff.size:
                    moved = int(diff[0])
                    break
            if moved is None:
                break
            self.base.append(moved)
            self.strong.append(gens)
            # orbit of the base point with transversal
            trans = {moved: ident}
            frontier = [moved]
            while frontier:
                v = frontier.pop(0)
                for p in gens:
                    w = int(p[v])
                    if w not in trans:
                        trans[w] = p[trans[v]]
                        frontier.append(w)
            self.transversals.append(trans)
            # Schreier generators for the stabiliser
            stab = []
            seen = set()
            for v, tv in trans.items():
                for p in gens:
                    w = int(p[v])
                    tw_inv = _inv(trans[w])
                    s = tw_inv[p[tv]]
                    key = s.tobytes()
                    if key not in seen and np.any(s != ident):
                        seen.add(key)
                        stab.append(s)
            level_gens.append(stab)

    @property
    def order(self):
        n = 1
        for t in self.transversals:
            n *= len(t)
        return n

    def contains(self, perm):
        p = np.asarray(perm, dtype=np.int32)
        for b, trans in zip(self.base, self.transversals):
            w = int(p[b])
            if w not in trans:
                return False
            p = _inv(trans[w])[p]
        return bool(np.all(p == np.arange(self.degree)))

    def elements(self):
        """All elements, one per transversal-product; caller sorts as needed."""
        out = [np.arange(self.degree, dtype=np.int32)]
        for trans in reversed(self.transversals):
            reps = [trans[k] for k in sorted(trans)]
            out = [rep[e] for e in out for rep in reps]
        return out


def _inv(p):
    inv = np.empty_like(p)
    inv[p] = np.arange(p.size, dtype=np.int32)
    return inv


# -- public API --------------------------------------------------------------------


@dataclass
class GroupDescription:
    geometry: object
    generators: list
    order: int
    includes_dualities: bool
    _perm_group: PermGroup = None
    _elements: list = None

    def element_count(self):
        return self.order


def automorphism_group(g, include_dualities=False, budget=DEFAULT_BUDGET):
    """Full collineation group, optionally extended by dualities.

    Dualities are searched as incidence-graph automorphisms swapping the two
    sides; they can only exist when the geometry has as many points as lines,
    and they form a single coset of the collineation group when present.
    """
    points = list(range(g.point_count))
    lines = list(range(g.point_count, g.vertex_count))
    gens, order = _level(g, [points, lines], [points, lines])
    duality = None
    if include_dualities and g.point_count == g.line_count:
        duality = _extend(g, [points, lines], [lines, points])
    if duality is not None:
        gens = gens + [duality]
        order *= 2
    pg = PermGroup(g.vertex_count, gens) if gens else PermGroup(g.vertex_count, [])
    if pg.order != order:
        raise GeometryError(
            "stabiliser chain disagrees with search order: %d vs %d" % (pg.order, order)
        )
    if order > budget:
        raise BudgetExceeded("group order %d exceeds budget %d" % (order, budget))
    morphs = sorted(
        (M.from_vertex_perm(g, p) for p in gens),
        key=lambda f: tuple(int(v) for v in f.perm),
    )
    return GroupDescription(g, morphs, order, duality is not None, pg)


def enumerate_elements(G, budget=DEFAULT_BUDGET):
    """All group elements exactly once, sorted by image-array key."""
    if G.order > budget:
        raise BudgetExceeded("enumeration of %d elements exceeds budget %d" % (G.order, budget))
    if G._elements is None:
        perms = G._perm_group.elements()
        perms.sort(key=lambda p: p.tobytes())
        if len(perms) != G.order:
            raise GeometryError("enumeration produced %d of %d elements" % (len(perms), G.order))
        G._elements = [M.from_vertex_perm(G.geometry, p, check=False) for p in perms]
    return G._elements


def conjugacy_classes(G, budget=DEFAULT_BUDGET):
    """Partition of the full element list into conjugacy classes.

    Conjugation runs over the whole group (dualities included when present),
    via closure under the generators.  Classes are sorted by (size, key of the
    minimal representative); members stay in canonical order.
    """
    elements = enumerate_elements(G, budget=budget)
    gen_perms = [f.perm for f in G.generators]
    gen_invs = [np.argsort(p).astype(np.int32) for p in gen_perms]
    index = {f.perm.tobytes(): i for i, f in enumerate(elements)}
    unassigned = set(range(len(elements)))
    classes = []
    while unassigned:
        seed = min(unassigned)
        block = {seed}
        frontier = [seed]
        while frontier:
            i = frontier.pop()
            p = elements[i].perm
            for gp, gi in zip(gen_perms, gen_invs):
                q = gp[p[gi]]  # conjugate: g^-1 then p then g, acting left to right
                j = index[q.tobytes()]
                if j not in block:
                    block.add(j)
                    frontier.append(j)
        unassigned -= block
        classes.append(sorted(block))
    classes.sort(key=lambda c: (len(c), elements[c[0]].perm.tobytes()))
    return [[elements[i] for i in c] for c in classes]


def centralizer_order(G, f, budget=DEFAULT_BUDGET):
    """Size of the centraliser of f, by direct count over all elements."""
    elements = enumerate_elements(G, budget=budget)
    fp = f.perm
    count = 0
    for h in elements:
        hp = h.perm
        if np.array_equal(fp[hp], hp[fp]):
            count += 1
    return count


def scan(G, predicate, budget=DEFAULT_BUDGET):
    """All elements satisfying predicate(geometry, morphism), canonical order."""
    g = G.geometry
    return [f for f in enumerate_elements(G, budget=budget) if predicate(g, f)]


def derived_subgroup(G):
    """BSGS for the commutator subgroup (normal closure of generator commutators)."""
    deg = G.geometry.vertex_count
    gens = [f.perm for f in G.generators]
    invs = [_inv(p) for p in gens]
    comms = []
    seen = set()
    ident = np.arange(deg, dtype=np.int32)
    for a, ai in zip(gens, invs):
        for b, bi in zip(gens, invs):
            c = b[a[bi[ai]]]  # a^-1 b^-1 a b acting left to right
            key = c.tobytes()
            if key not in seen and np.any(c != ident):
                seen.add(key)
                comms.append(c)
    # close under conjugation by the group generators
    work = list(comms)
    sub = PermGroup(deg, comms)
    while work:
        c = work.pop()
        for p, pi in zip(gens, invs):
            d = p[c[pi]]
            if not sub.contains(d):
                comms.append(d)
                work.append(d)
                sub = PermGroup(deg, comms)
    return sub


def find_isomorphism(g, h):
    """An isomorphism between two geometries as a vertex map, or None.

    Used for self-duality witnesses: pass h = g.dual().  Both geometries must
    have identical (gon, point_count, line_count).
    """
    if (g.gon, g.point_count, g.line_count) != (h.gon, h.point_count, h.line_count):
        return None
    # search inside the disjoint union graph: map vertices of g to vertices of h
    return _extend_iso(g, h)


def _extend_iso(g, h):
    # reuse the two-partition machinery with signatures computed per graph
    points_g = list(range(g.point_count))
    lines_g = list(range(g.point_count, g.vertex_count))
    points_h = list(range(h.point_count))
    lines_h = list(range(h.point_count, h.vertex_count))
    return _extend_pair(g, h, [points_g, lines_g], [points_h, lines_h])


def _refine_pair(g, h, dom, img):
    while True:
        if all(len(c) == 1 for c in dom):
            return dom, img
        sd = _signatures(g, dom)
        si = _signatures(h, img)
        newd, newi = [], []
        changed = False
        for cd, ci in zip(dom, img):
            if len(cd) == 1 and len(ci) == 1:
                newd.append(cd)
                newi.append(ci)
                continue
            gd = _group_cell(cd, sd)
            gi = _group_cell(ci, si)
            if sorted((k, len(v)) for k, v in gd.items()) != sorted(
                (k, len(v)) for k, v in gi.items()
            ):
                return None
            for key in sorted(gd):
                newd.append(gd[key])
                newi.append(gi[key])
            if len(gd) > 1:
                changed = True
        dom, img = newd, newi
        if not changed:
            return dom, img


def _extend_pair(g, h, dom, img):
    state = _refine_pair(g, h, dom, img)
    if state is None:
        return None
    dom, img = state
    ci = _target_cell(dom)
    if ci is None:
        perm = np.empty(g.vertex_count, dtype=np.int32)
        for cd, cc in zip(dom, img):
            perm[cd[0]] = cc[0]
        for li, row in enumerate(g.lines):
            lv = g.point_count + li
            for p in row:
                if h.dist[perm[p], perm[lv]] != 1:
                    return None
        return perm
    b = min(dom[ci])
    for w in sorted(img[ci]):
        res = _extend_pair(g, h, _individualize(dom, ci, b), _individualize(img, ci, w))
        if res is not None:
            return res
    return None
