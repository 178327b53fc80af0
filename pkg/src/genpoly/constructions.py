"""Canonical models of the small generalised polygons used throughout.

    fano     projective plane PG(2,2), parameters (3; 2,2)
    gq_2_2   symplectic quadrangle W(2): PG(3,2) with a symplectic form
    gq_2_4   elliptic-quadric quadrangle Q-(5,2)
    gq_3_5   linear representation over AG(3,4) of a PG(2,4) hyperoval
    hex_2_2  split Cayley hexagon on the parabolic quadric in PG(6,2)

All labellings are canonical (lexicographic on coordinate tuples) so repeated
construction is byte-identical.  hex_2_2 uses the split-octonion model: points
are the singular trace-zero Zorn matrices, lines the 2-spaces on which the
octonion product vanishes identically; the generalised-hexagon axiom check is
the acceptance oracle for the line filter.
"""

from __future__ import annotations

from itertools import product

from .geometry import build_geometry, validate_polygon, GeometryError

NAMES = ("fano", "gq_2_2", "gq_2_4", "gq_3_5", "hex_2_2")

EXPECTED_PARAMS = {
    "fano": (3, 2, 2),
    "gq_2_2": (4, 2, 2),
    "gq_2_4": (4, 2, 4),
    "gq_3_5": (4, 3, 5),
    "hex_2_2": (6, 2, 2),
}


# -- GF(4) as residues mod x^2 + x + 1, elements encoded 0,1,2,3 (bit pairs) --

GF4_ADD = tuple(tuple(a ^ b for b in range(4)) for a in range(4))

def _gf4_mul(a, b):
    # carry-free multiply then reduce by x^2 = x + 1
    r = 0
    for i in range(2):
        if b & (1 << i):
            r ^= a << i
    if r & 4:
        r ^= 0b111  # clear the x^2 bit and add x + 1
    return r & 3

GF4_MUL = tuple(tuple(_gf4_mul(a, b) for b in range(4)) for a in range(4))


def gf4_add(a, b):
    return a ^ b


def gf4_mul(a, b):
    return GF4_MUL[a][b]


# -- small projective/affine helpers -----------------------------------------


def _gf2_vectors(dim):
    return [v for v in product((0, 1), repeat=dim) if any(v)]


def _fano_lines():
    pts = sorted(_gf2_vectors(3))
    index = {v: i for i, v in enumerate(pts)}
    lines = set()
    for i, u in enumerate(pts):
        for v in pts[i + 1:]:
            w = tuple(a ^ b for a, b in zip(u, v))
            lines.add(tuple(sorted((index[u], index[v], index[w]))))
    return sorted(lines)


def _w2_lines():
    # totally isotropic lines of the symplectic form x0y1+x1y0+x2y3+x3y2
    pts = sorted(_gf2_vectors(4))
    index = {v: i for i, v in enumerate(pts)}

    def form(x, y):
        return (x[0] & y[1]) ^ (x[1] & y[0]) ^ (x[2] & y[3]) ^ (x[3] & y[2])

    lines = set()
    for i, u in enumerate(pts):
        for v in pts[i + 1:]:
            if form(u, v) == 0:
                w = tuple(a ^ b for a, b in zip(u, v))
                lines.add(tuple(sorted((index[u], index[v], index[w]))))
    return sorted(lines)


def _q5minus_lines():
    # elliptic quadric x0x1 + x2x3 + x4^2 + x4x5 + x5^2 over GF(2)
    def q(v):
        return (v[0] & v[1]) ^ (v[2] & v[3]) ^ v[4] ^ (v[4] & v[5]) ^ v[5]

    pts = sorted(v for v in _gf2_vectors(6) if q(v) == 0)
    index = {v: i for i, v in enumerate(pts)}
    lines = set()
    for i, u in enumerate(pts):
        for v in pts[i + 1:]:
            w = tuple(a ^ b for a, b in zip(u, v))
            if w in index:
                lines.add(tuple(sorted((index[u], index[v], index[w]))))
    return sorted(lines)


# canonical hyperoval of PG(2,4): the conic X0*X2 = X1^2 plus its nucleus
HYPEROVAL = ((0, 0, 1), (0, 1, 0), (1, 0, 0), (1, 1, 1), (1, 2, 3), (1, 3, 2))


def _gq35_lines():
    # linear representation: points AG(3,4), lines the affine lines whose
    # direction lies in the hyperoval at infinity
    pts = sorted(product(range(4), repeat=3))
    index = {v: i for i, v in enumerate(pts)}
    for d in HYPEROVAL:
        # direction vectors are projective points: check conic + nucleus shape
        assert any(d)
    lines = set()
    for base in pts:
        for d in HYPEROVAL:
            row = []
            for lam in range(4):
                q = tuple(gf4_add(b, gf4_mul(lam, c)) for b, c in zip(base, d))
                row.append(index[q])
            lines.add(tuple(sorted(row)))
    return sorted(lines)


# -- split Cayley hexagon over GF(2) ------------------------------------------
#
# Zorn vector matrices [[a, v], [w, b]] with a,b in GF(2), v,w in GF(2)^3:
#   M*M' = [[aa' + v.w',  av' + b'v - w x w'], [a'w + bw' + v x v',  bb' + w.v']]
# Trace-zero part (b = a over GF(2)) is 7-dimensional with norm a^2 + v.w,
# matching the quadric X0X4+X1X5+X2X6 = X3^2 under
#   (X0,X1,X2) = v, X3 = a, (X4,X5,X6) = w.


def _dot(u, v):
    return (u[0] & v[0]) ^ (u[1] & v[1]) ^ (u[2] & v[2])


def _cross(u, v):
    return (
        (u[1] & v[2]) ^ (u[2] & v[1]),
        (u[2] & v[0]) ^ (u[0] & v[2]),
        (u[0] & v[1]) ^ (u[1] & v[0]),
    )


def _zorn_mul(x, y):
    # x = (a, v, w, b) with entries over GF(2)
    a1, v1, w1, b1 = x
    a2, v2, w2, b2 = y
    a = (a1 & a2) ^ _dot(v1, w2)
    b = (b1 & b2) ^ _dot(w1, v2)
    cv = _cross(w1, w2)
    cw = _cross(v1, v2)
    v = tuple((a1 & v2[i]) ^ (b2 & v1[i]) ^ cv[i] for i in range(3))
    w = tuple((a2 & w1[i]) ^ (b1 & w2[i]) ^ cw[i] for i in range(3))
    return (a, v, w, b)


def _hex22_data():
    def coords(x):
        a, v, w, _ = x
        return (v[0], v[1], v[2], a, w[0], w[1], w[2])

    def from_coords(c):
        return (c[3], (c[0], c[1], c[2]), (c[4], c[5], c[6]), c[3])

    singular = []
    for c in product((0, 1), repeat=7):
        if not any(c):
            continue
        # quadric X0X4 + X1X5 + X2X6 = X3^2
        if ((c[0] & c[4]) ^ (c[1] & c[5]) ^ (c[2] & c[6])) == (c[3] & 1):
            singular.append(c)
    singular.sort()
    index = {c: i for i, c in enumerate(singular)}

    def zero(x):
        return all(t == 0 for t in (x[0], *x[1], *x[2], x[3]))

    lines = set()
    for i, ci in enumerate(singular):
        xi = from_coords(ci)
        for cj in singular[i + 1:]:
            xj = from_coords(cj)
            if zero(_zorn_mul(xi, xj)) and zero(_zorn_mul(xj, xi)):
                ck = tuple(a ^ b for a, b in zip(ci, cj))
                lines.add(tuple(sorted((index[ci], index[cj], index[ck]))))
    return singular, sorted(lines)


def quadric_points():
    """The 63 singular points of the parabolic quadric, as coordinate tuples."""
    return _hex22_data()[0]


def quadric_lines():
    """Hexagon lines on the quadric: product-vanishing 2-spaces (index triples)."""
    return _hex22_data()[1]


_BUILDERS = {
    "fano": lambda: (3, _fano_lines()),
    "gq_2_2": lambda: (4, _w2_lines()),
    "gq_2_4": lambda: (4, _q5minus_lines()),
    "gq_3_5": lambda: (4, _gq35_lines()),
    "hex_2_2": lambda: (6, _hex22_data()[1]),
}

_CACHE = {}


def construct(name):
    """Build a named geometry; the polygon axiom check is run on every build."""
    if name not in _BUILDERS:
        raise GeometryError("unknown construction %r (choose from %s)" % (name, ", ".join(NAMES)))
    if name not in _CACHE:
        gon, rows = _BUILDERS[name]()
        g = build_geometry(gon, rows)
        params = validate_polygon(g, require_thick=True)
        n, s, t = EXPECTED_PARAMS[name]
        if (params.n, params.s, params.t) != (n, s, t):
            raise GeometryError(
                "construction %s yielded parameters %s" % (name, (params.n, params.s, params.t))
            )
        _CACHE[name] = g
    return _CACHE[name]
