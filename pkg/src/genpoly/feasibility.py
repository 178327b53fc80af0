"""Exact feasibility engines: eigenvalue integrality and displacement counting.

Everything here runs in exact rational arithmetic (fractions.Fraction, plus a
small u+v*sqrt(2) ring for the Fano representation check).  The spectral
functions evaluate the line-graph multiplicity formulas of the Bose-Mesner
algebra of a distance-regular graph; the counting engines solve the closed
displacement-class systems for quadrangles, hexagons and octagons rooted at a
fixed element.  Infeasibility is always a failed integrality or nonnegativity
verdict, never floating-point.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction


class FeasibilityError(ValueError):
    pass


class IrrationalEigenvalueGuard(FeasibilityError):
    """sqrt(st) (hexagon) or sqrt(2st) (octagon) is not an integer."""


class DegenerateDenominator(FeasibilityError):
    pass


# -- report plumbing -----------------------------------------------------------


@dataclass
class Quantity:
    name: str
    value: Fraction
    require_integral: bool = True
    require_nonnegative: bool = False

    @property
    def integral(self):
        return self.value.denominator == 1

    @property
    def nonnegative(self):
        return self.value >= 0

    @property
    def ok(self):
        return (self.integral or not self.require_integral) and (
            self.nonnegative or not self.require_nonnegative
        )

    def as_dict(self):
        return {
            "name": self.name,
            "value_num": self.value.numerator,
            "value_den": self.value.denominator,
            "integral": self.integral,
            "nonnegative": self.nonnegative,
        }


@dataclass
class ConstraintReport:
    quantities: list
    notes: list = field(default_factory=list)
    forced_infeasible: bool = False

    @property
    def feasible(self):
        return not self.forced_infeasible and all(q.ok for q in self.quantities)

    def get(self, name):
        for q in self.quantities:
            if q.name == name:
                return q.value
        raise KeyError(name)

    def as_dict(self, inputs=None):
        return {
            "inputs": inputs or {},
            "quantities": [q.as_dict() for q in self.quantities],
            "feasible": self.feasible,
            "notes": list(self.notes),
        }


def _frac(x):
    return x if isinstance(x, Fraction) else Fraction(x)


# -- spectral formulas (line graph of the polygon) -----------------------------


def spectral_quadrangle(s, t, d0, d1, d2):
    """Multiplicity-like integers n_1, n_2 from the line displacement vector."""
    s, t = int(s), int(t)
    d0, d1 = _frac(d0), _frac(d1)
    n1 = (s * t + 1 + (t - 1) * d0 - d1) / (s + t)
    n2 = -(s * t + s + t + 1 - (s + 1) * d0 - d1) / (s + t)
    return ConstraintReport([
        Quantity("n_1", n1),
        Quantity("n_2", n2),
    ])


def spectral_hexagon(s, t, d0, d1, d2, d3):
    s, t = int(s), int(t)
    r2 = s * t
    r = math.isqrt(r2)
    if r * r != r2:
        raise IrrationalEigenvalueGuard("sqrt(st) is irrational for (%d,%d)" % (s, t))
    d0, d1, d2 = _frac(d0), _frac(d1), _frac(d2)
    den = s * s + s * t + t * t
    n1 = ((t * t - t + 1) * d0 - (t - 1) * d1 + d2 - (s * s * t * t + s * t + 1)) / den
    p = (s + 1) * (t + 1) * (s + t) * (s * t + 1) - (s + 1) * (t + 1) * s * t
    nsum = ((s * s - 1) * (t * t - 1) + (s + 1) * (s + t - 1) * d0 + (t - 1) * d1 - d2) / den
    ndiff = (p + (s * s * t - s * s - s - t) * d0 - (s * s + s + t) * d1 - (s + t) * d2) / (r * den)
    n2 = (nsum - ndiff) / 2
    n3 = (nsum + ndiff) / 2
    return ConstraintReport([
        Quantity("n_1", n1),
        Quantity("n_2", n2),
        Quantity("n_3", n3),
    ])


def spectral_octagon(s, t, d0, d1, d2, d3, d4):
    s, t = int(s), int(t)
    r2 = 2 * s * t
    r = math.isqrt(r2)
    if r * r != r2:
        raise IrrationalEigenvalueGuard("sqrt(2st) is irrational for (%d,%d)" % (s, t))
    d0, d1, d2, d3 = _frac(d0), _frac(d1), _frac(d2), _frac(d3)
    q1 = (s * t + 1) * (s * s * t * t + 1)
    q2 = (s + 1) * (t + 1) * (s * s * t * t + 1)
    q3 = (s + 1) * (t + 1) * (s * t + 1) * (s * s * t + s * t * t + s + t - 2 * s * t)
    q4 = (s * s - 1) * (t * t - 1) * (s * t + 1)
    q5 = (s + 1) * (s + t + s * s * t + s * t * t - 2 * s * t)
    q6 = s * t * t - s * s * t - s * t + s + t + s * s
    n1 = (q1 + (t * t + 1) * (t - 1) * d0 - (t * t - t + 1) * d1 + (t - 1) * d2 - d3) / (
        (s + t) * (s * s + t * t)
    )
    n2 = (q2 + (s + 1) * (s * t - 1) * d0 + (s * t - s - 1) * d1 - (s + 1) * d2 - d3) / (
        2 * s * t * (s + t)
    )
    nsum = (-q3 + q5 * d0 + q6 * d1 + (s + s * s + t - s * t) * d2 + (s + t) * d3) / (
        2 * s * t * (s * s + t * t)
    )
    ndiff = (q4 - (s * s - 1) * (t - 1) * d0 + (s * s + t - 1) * d1 + (t - 1) * d2 - d3) / (
        r * (s * s + t * t)
    )
    n3 = (nsum + ndiff) / 2
    n4 = (nsum - ndiff) / 2
    return ConstraintReport([
        Quantity("n_1", n1),
        Quantity("n_2", n2),
        Quantity("n_3", n3),
        Quantity("n_4", n4),
    ])


def spectral(gon, s, t, d):
    d = list(d)
    if gon == 4:
        if len(d) != 3:
            raise FeasibilityError("quadrangle needs d_0..d_2")
        return spectral_quadrangle(s, t, *d)
    if gon == 6:
        if len(d) != 4:
            raise FeasibilityError("hexagon needs d_0..d_3")
        return spectral_hexagon(s, t, *d)
    if gon == 8:
        if len(d) != 5:
            raise FeasibilityError("octagon needs d_0..d_4")
        return spectral_octagon(s, t, *d)
    raise FeasibilityError("spectral formulas exist for gon 4, 6, 8")


# -- quadrangles ----------------------------------------------------------------


def quadrangle_no_fixed_check(s, t):
    """Fixed-element-free domestic collineation screen: s+t must divide st+1."""
    s, t = int(s), int(t)
    p4 = Fraction((s * s - 1) * (s * t + 1), s + t)
    ratio = Fraction(s * t + 1, s + t)
    return ConstraintReport([
        Quantity("|P_4|", p4, require_nonnegative=True),
        Quantity("(st+1)/(s+t)", ratio),
    ])


def quadrangle_classification_solve(s, t):
    """Solve the fixed-tree system: a = s-t extra fixed points, alpha = st^2(t-1)."""
    s, t = int(s), int(t)
    a = Fraction(s - t)
    alpha = Fraction(s * t * t * (t - 1))
    p21 = Fraction(2 * s * t * t + t - s * t ** 3)
    rep = ConstraintReport([
        Quantity("a", a, require_nonnegative=True),
        Quantity("alpha", alpha, require_nonnegative=True),
        Quantity("|P_2^1|", p21, require_nonnegative=True),
    ])
    return rep


# -- hexagons --------------------------------------------------------------------


def hexagon_no_fixed_line_check(s, t):
    """Domestic collineation with a fixed point but no fixed line: count |P_0|.

    For s = t the system forces |P_0| = 1 + s^3 and then |P_6| = 0, which is
    flagged as the contradiction; otherwise |P_0| has an explicit rational
    closed form which must be a feasible count.
    """
    s, t = int(s), int(t)
    quantities = []
    notes = []
    if s == t:
        quantities.append(Quantity("|P_0|", Fraction(1 + s ** 3), require_nonnegative=True))
        quantities.append(Quantity("|P_6|", Fraction(0)))
        notes.append("s = t forces |P_6| = 0: no exceptional domestic collineation")
        return ConstraintReport(quantities, notes, forced_infeasible=True)
    den = s * t - 2 * t - s + 1
    if den == 0:
        raise DegenerateDenominator("st-2t-s+1 vanishes for (%d,%d)" % (s, t))
    p0 = 1 + Fraction(s * s * t * (s * t - 2 * s - t + 1), den)
    quantities.append(Quantity("|P_0|", p0, require_nonnegative=True))
    forced = False
    if p0.denominator == 1 and p0 >= 1:
        p0i = int(p0)
        derived = {
            "|L_2^1|": (t + 1) * p0i,
            "|L_4^3|": 2 * (t + 1) * (s * s * t + 1 - p0i),
            "|L_6|": (t + 1) * (s * s * t * t - 2 * s * s * t + s * t - 1 + p0i),
            "|P_4^1|": s * (t + 1) * p0i,
            "|P_4^3|": 2 * (t + 1) * (s * s * t + 1) - 2 * (t + 1) * p0i,
            "|P_6|": 2 * (s - 1) * (s * s * t + 1) - 2 * (s - 1) * p0i,
        }
        for name, val in derived.items():
            quantities.append(Quantity(name, Fraction(val), require_nonnegative=True))
        if derived["|P_6|"] <= 0:
            forced = True
            notes.append("infeasible: |P_6| <= 0")
    return ConstraintReport(quantities, notes, forced_infeasible=forced)


def hexagon_tree_counts(s, t, a1, a2, a3, a4):
    """Line displacement classes of a domestic collineation from its fixed tree.

    The a_k count fixed elements on the sphere of radius k around a fixed
    point root whose radius-5/6 spheres carry no fixed elements.  Returns the
    seven line-class cardinalities together with alpha = |L_2^2|.
    """
    s, t = int(s), int(t)
    a1, a2, a3, a4 = (_frac(v) for v in (a1, a2, a3, a4))
    den = s * t - t * t - s - t
    if den == 0:
        raise DegenerateDenominator("st-t^2-s-t vanishes for (%d,%d)" % (s, t))
    alpha = (
        s * t * (
            s * (s * t * t - t * t - s * t - 2 * s + 1)
            + a1 * s * (2 * s + 2 * t - s * t - t * t - 1)
            + a2 * t * (s + t - 1)
            - a3 * s
            - a4 * t
        )
    ) / den
    cards = {
        "L_0": a1 + a3,
        "L_2^1": 1 + t * (1 + a2 + a4) - (a1 + a3),
        "L_2^2": alpha,
        "L_4^1": s * t * (a1 + a3) - t * (a2 + a4),
        "L_4^2": (t - 1) * alpha,
        "L_4^3": 2 * (t + 1) * s * s * t + a1 * s * s * t * (t - 2) - a2 * s * t * t
                 - (t + 1) * alpha,
        "L_6": (t + 1) * s * t * (s * t + 1 - 2 * s) - a1 * s * t * (s * t + 1 - 2 * s)
               + a2 * s * t * t - a3 * s * t + alpha,
    }
    rep = ConstraintReport(
        [Quantity(k, _frac(v), require_nonnegative=True) for k, v in cards.items()]
    )
    return rep


def _hexagon_point_card_from_lines(s, t, cards):
    """Point classes implied by line classes via the class identities."""
    out = {
        "P_2^2": cards["L_2^2"],
        "P_4^1": s * cards["L_2^1"],
        "P_4^2": (s - 1) * cards["L_2^2"],
        "P_4^3": cards["L_4^3"],
        "P_6": (s * cards["L_4^1"] + s * cards["L_4^2"] + (s - 1) * cards["L_4^3"])
               / Fraction(t + 1),
    }
    return out


def hexagon_tree_solve(s, t):
    """Integer solutions (A, B, C, alpha) of the diameter->=2 fixed-tree system.

    Conventions: the tree is rooted at a fixed point with A+1 fixed lines
    through it, B fixed points at distance 2, and a chosen fixed line L_0
    through the root carrying C+1 fixed points in total.  The three counting
    equations are

        B t = A s (t-2) + C t
        A s^2 t + (s-t) alpha = C s t^2 (s-1)
        s t (C-s)(st-2s-2t+2) = 2 alpha

    augmented by the tree-count nonnegativity screens at all three roots and
    the impossibility of fixing exactly t of t+1 lines (or s of s+1 points).
    Solutions are returned for both root orientations (point / line).
    """
    sols = []
    for root, (ss, tt) in (("point", (int(s), int(t))), ("line", (int(t), int(s)))):
        for sol in _hex_solve_oriented(ss, tt):
            sols.append({"root": root, **sol})
    return sols


def _hex_solve_oriented(s, t):
    out = []
    for A in range(0, t + 1):
        if A + 1 == t:  # cannot fix exactly t of the t+1 lines through the root
            continue
        for C in range(1, s + 1):
            if C + 1 == s:
                continue
            # eq (iii) pins alpha; eq (ii) then constrains (A, C); eq (i) gives B
            alpha2 = s * t * (C - s) * (s * t - 2 * s - 2 * t + 2)
            if alpha2 % 2 or alpha2 < 0:
                continue
            alpha = alpha2 // 2
            if A * s * s * t + (s - t) * alpha != C * s * t * t * (s - 1):
                continue
            bt = A * s * (t - 2) + C * t
            if bt % t or bt < 0:
                continue
            B = bt // t
            if B < C or B > (A + 1) * s:
                continue
            if not _hex_screens(s, t, A, B, C, alpha):
                continue
            out.append({"A": A, "B": B, "C": C, "alpha": alpha})
    return out


def _hex_screens(s, t, A, B, C, alpha):
    """Nonnegativity + consistency of all three tree counts, and |P_6|,|L_6|>0."""
    counts = [
        (s, t, (A + 1, B, 0, 0)),           # rooted at the central point
        (t, s, (C + 1, A, B - C, 0)),       # rooted at L_0 (dual)
        (s, t, (1, C, A, B - C)),           # rooted at a second fixed point on L_0
    ]
    alphas = []
    reps = []
    for ss, tt, a in counts:
        rep = hexagon_tree_counts(ss, tt, *a)
        if not rep.feasible:
            return False
        alphas.append(rep.get("L_2^2"))
        reps.append(rep)
    if any(av != alpha for av in alphas):
        return False
    # primal counts must agree between the two point roots
    for key in ("L_0", "L_2^1", "L_4^3", "L_6"):
        if reps[0].get(key) != reps[2].get(key):
            return False
    # exceptional domesticity: both sides must reach opposition
    cards0 = {k: reps[0].get(k) for k in
              ("L_0", "L_2^1", "L_2^2", "L_4^1", "L_4^2", "L_4^3", "L_6")}
    pts = _hexagon_point_card_from_lines(s, t, cards0)
    if reps[0].get("L_6") <= 0 or pts["P_6"] <= 0:
        return False
    if any(v.denominator != 1 or v < 0 for v in pts.values()):
        return False
    return True


# -- octagons: global counts and root functionals ---------------------------------


def octagon_global_counts(s, t, p0, l0, x, y):
    """The ten line-class cardinalities of a domestic octagon collineation."""
    s, t, p0, l0 = int(s), int(t), int(p0), int(l0)
    x, y = _frac(x), _frac(y)
    st = s * t
    cards = {
        "L_2^1": Fraction(1 + p0 * t - l0),
        "L_2^2": x,
        "L_4^1": Fraction(l0 * st - (p0 - 1) * t),
        "L_4^2": (t - 1) * x,
        "L_4^3": y,
        "L_6^1": Fraction(st + p0 * s * t * t - l0 * st),
        "L_6^2": (s - 1) * t * x,
        "L_6^3": (t - 1) * y,
        "L_6^4": (
            Fraction(s * s * t * t) * ((st + 1) * (st + s + t + 1) - (p0 + l0 - 1))
            - st * (s + t) * x - 2 * st * y
        ) / (s + t),
        "L_8": (
            Fraction((st + 1) * (t * t - 1) * s * s * t * t + l0 * s * s * t * t
                     - (p0 - 1) * s * t ** 3) + (s - t) * t * y
        ) / (s + t),
    }
    quantities = [Quantity("L_0", Fraction(l0), require_nonnegative=True),
                  Quantity("P_0", Fraction(p0), require_nonnegative=True)]
    quantities += [Quantity(k, v, require_nonnegative=True) for k, v in cards.items()]
    return ConstraintReport(quantities)


def _oct_chain(s, t, a, x, y):
    """Sphere-by-sphere count from a fixed point root of an octagon.

    a = (a_0..a_8) are the fixed elements per sphere (a_0 = 1).  Returns the
    six branch unknowns X_1..X_6 (alpha_3, alpha_4, beta_3, beta_4, gamma_3,
    gamma_4 of the count) plus all line-class cardinalities, as Fractions.
    """
    s, t = int(s), int(t)
    a = [_frac(v) for v in a]
    if len(a) != 9:
        raise FeasibilityError("need a_0..a_8")
    if a[0] != 1:
        raise FeasibilityError("a_0 must be 1 (the root)")
    x, y = _frac(x), _frac(y)
    st = s * t
    P0 = 1 + a[2] + a[4] + a[6] + a[8]
    L0 = a[1] + a[3] + a[5] + a[7]
    alpha1 = t * a[8]
    beta1 = (s * a[7] - a[8]) * t
    gamma1 = s * t * t * (a[6] + a[8]) - st * a[7] - t * t * a[8]
    alpha2 = x
    beta2 = (t - 1) * x
    gamma2 = (s - 2) * t * x

    l41 = st * (a[1] + a[3] + a[5]) - t * (a[2] + a[4] + a[6]) + beta1
    l42 = beta2

    def closing_gap(alpha3):
        beta3 = y - 2 * alpha3
        gamma3 = (t - 1) * (y - alpha3)
        alpha4 = (t + 1 - a[1]) * s * s * t * t - alpha1 - alpha2 - alpha3
        beta4 = (s * a[1] - a[2]) * s * s * t * t - beta1 - beta2 - beta3
        gamma_sum = (t * a[2] - a[3]) * s * s * t * t \
            + (s - 1) * t * (alpha1 + alpha2 + alpha3) + (s - 2) * t * alpha4
        gamma4 = gamma_sum - gamma1 - gamma2 - gamma3
        l64 = 3 * alpha4 + 2 * beta4 + gamma4
        l8 = s * s * t * t * (a[1] + a[3]) - s * t * t * (a[2] + a[4]) \
            + (t - 2) * beta4 + (t - 1) * (2 * alpha4 + beta1 + beta2 + beta3)
        lhs = (s + 1) * l8
        rhs = st * l41 + st * l42 + (s - 1) * t * y + (t - 1) * l64
        return lhs - rhs, (beta3, gamma3, alpha4, beta4, gamma4, l64, l8)

    g0, _ = closing_gap(Fraction(0))
    g1, _ = closing_gap(Fraction(1))
    slope = g1 - g0
    if slope == 0:
        raise DegenerateDenominator("closing equation degenerates at (%d,%d)" % (s, t))
    alpha3 = -g0 / slope
    _, (beta3, gamma3, alpha4, beta4, gamma4, l64, l8) = closing_gap(alpha3)
    cards = {
        "L_0": L0,
        "L_2^1": 1 + t * (1 + a[2] + a[4] + a[6]) - L0 + alpha1,
        "L_2^2": x,
        "L_4^1": l41,
        "L_4^2": l42,
        "L_4^3": y,
        "L_6^1": s * t * t * (1 + a[2] + a[4]) - st * (a[1] + a[3] + a[5]) + st
                 + t * alpha1 + gamma1,
        "L_6^2": t * alpha2 + gamma2,
        "L_6^3": (t - 1) * alpha3 + gamma3,
        "L_6^4": l64,
        "L_8": l8,
        "P_0": P0,
    }
    X = (alpha3, alpha4, beta3, beta4, gamma3, gamma4)
    return X, cards


def octagon_root_constraints(s, t, a, x, y, dual=False):
    """The six root functionals X_1..X_6 at a fixed point (dual: fixed line).

    All must be nonnegative integers for a domestic collineation whose fixed
    tree has the given sphere counts around the root.
    """
    if dual:
        s, t = t, s
    X, _ = _oct_chain(s, t, a, x, y)
    names = ["X_1", "X_2", "X_3", "X_4", "X_5", "X_6"]
    return ConstraintReport(
        [Quantity(n, v, require_nonnegative=True) for n, v in zip(names, X)]
    )


def octagon_line_constraints(s, t, a, x, y, dual=False):
    """X'_1..X'_3 for a displaced line through the root (Prop-level guard at (2,4))."""
    if dual:
        s, t = t, s
    s, t = int(s), int(t)
    if (s, t) == (2, 4):
        raise DegenerateDenominator("(2,4): the X' denominator 2st-2s-t vanishes")
    a = [_frac(v) for v in a]
    x, y = _frac(x), _frac(y)
    st = s * t
    s2t2 = s * s * t * t
    p = [
        -(s - 1) * (t - 1) * (st - 2 * s - 2 * t + 1) * s2t2,
        (st + s * s - 2 * s - 2 * t + 1) * s2t2,
        -(s + t - 1) * s2t2,
        s2t2,
        s2t2,
        -(s ** 3) * t,
        (st - s - t) * st,
        -(s * s * t - 2 * s - 2 * t) * s,
        s2t2 - 3 * s * t * t + 2 * t * t - 3 * s * s * t + 6 * st - 4 * t - 4 * s + 4 * s * s,
    ]
    total = sum(pk * ak for pk, ak in zip(p, a))
    den = 2 * (s + t) * (st - 2 * s - t)
    x1 = (total - (s - 1) * (t - 1) * (s + t) * x + (st - s - t - s * s) * y) / den
    x2 = s2t2 - a[8] - x / 2 - x1
    x3 = y - 3 * x1
    return ConstraintReport([
        Quantity("X'_1", x1, require_nonnegative=True),
        Quantity("X'_2", x2, require_nonnegative=True),
        Quantity("X'_3", x3, require_nonnegative=True),
    ])


def _oct_weight_sum(s, t, a):
    """sum_k p_k(s,t) a_k recovered from the counting chain at x = y = 0."""
    X, _ = _oct_chain(s, t, a, 0, 0)
    return X[0] * 2 * t * (s + t)


def octagon_special_y(s, t, a, branch):
    """Forced value of y (and x = 0) in the two distinguished root shapes.

    branch "a1_full": every line through the root is fixed (a_1 = t+1); the
    value of y is pinned unless st-s-t-t^2 = 0 ((6,3) shape), in which case
    the weighted sphere-count sum itself must vanish and that identity is
    returned instead.  branch "a1_single": a_1 = 1, a_2 = s, a_8 = s a_7.
    """
    s, t = int(s), int(t)
    a = [int(v) for v in a]
    if branch == "a1_full":
        if a[1] != t + 1:
            raise FeasibilityError("branch a1_full needs a_1 = t+1")
        if a[8] != 0:
            raise FeasibilityError("a_1 = t+1 forces a_8 = 0")
        total = _oct_weight_sum(s, t, a)
        den = s * t - s - t - t * t
        if den == 0:
            return {"x": 0, "identity_sum": total, "y": None,
                    "identity_holds": total == 0}
        y = total / den
        return {"x": 0, "y": y, "identity_sum": None, "identity_holds": None}
    if branch == "a1_single":
        if not (a[1] == 1 and a[2] == s and a[8] == s * a[7]):
            raise FeasibilityError("branch a1_single needs a_1=1, a_2=s, a_8=s*a_7")
        total = _oct_weight_sum(s, t, a)
        y = total / (2 * s * t - s - t)
        return {"x": 0, "y": y, "identity_sum": None, "identity_holds": None}
    raise FeasibilityError("unknown branch %r" % branch)


def octagon_congruence(s, t, p0, l0, x):
    """Residue class of y and the divisibility screen on x for (2t,t)/(s,2s)."""
    s, t, p0, l0, x = int(s), int(t), int(p0), int(l0), int(x)
    if s == 2 * t:
        mod = 360 * t * t
        res = (8 * t * t * l0 + 260 * t * t * p0 + 184 * t ** 6 + 4 * t ** 4
               + 180 * t ** 3 + 92 * t * t + 90 * t * x) % mod
        return {"modulus": mod, "residue": res, "x_divisor": 2 * t,
                "x_ok": x % (2 * t) == 0}
    if t == 2 * s:
        mod = 360 * s * s
        res = (8 * s * s * p0 + 260 * s * s * l0 + 184 * s ** 6 + 4 * s ** 4
               + 180 * s ** 3 + 92 * s * s + 90 * s * x) % mod
        return {"modulus": mod, "residue": res, "x_divisor": 2 * s,
                "x_ok": x % (2 * s) == 0}
    raise FeasibilityError("congruence applies to parameter shapes (2t,t) and (s,2s)")


# -- parameter screens --------------------------------------------------------------


def _divisibility_ok(m, s, t):
    if m == 2:
        return (s <= t * t and t <= s * s
                and (s * s * (s * t + 1)) % (s + t) == 0)
    if m == 3:
        r = math.isqrt(s * t)
        return (s <= t ** 3 and t <= s ** 3 and r * r == s * t
                and (s ** 3 * (s * s * t * t + s * t + 1)) % (s * s + s * t + t * t) == 0)
    if m == 4:
        r = math.isqrt(2 * s * t)
        return (s <= t * t and t <= s * s and r * r == 2 * s * t
                and (s ** 4 * (s ** 3 * t ** 3 + s * s * t * t + s * t + 1))
                % (s ** 3 + s * s * t + s * t * t + t ** 3) == 0)
    raise FeasibilityError("m must be 2, 3 or 4")


def _exceptional_inequality(m, s, t):
    """Both displacement layers of an exceptional domestic map must fit.

    Counting away from an opposite-mapped line forces at least
    (s+1) * sum (s(t-2))^k elements in the penultimate class, and counting
    away from a penultimate line forces (s-1) * sum ((s-2)t)^k opposite
    points; their sum is bounded by the point count.
    """
    low = (s + 1) * sum((s * (t - 2)) ** k for k in range(m))
    high = (s - 1) * sum(((s - 2) * t) ** k for k in range(m))
    total_pts = (s + 1) * sum((s * t) ** k for k in range(m))
    return low + high <= total_pts


def parameter_candidates(m, limit=512):
    """Duality-closed parameter list passing the inequality and divisibility screens."""
    if m not in (2, 3, 4):
        raise FeasibilityError("m must be 2, 3 or 4")
    found = set()
    for s in range(2, limit + 1):
        for t in range(2, limit + 1):
            if not _divisibility_ok(m, s, t):
                continue
            if _exceptional_inequality(m, s, t) and _exceptional_inequality(m, t, s):
                found.add((s, t))
    out = sorted(found)
    notes = []
    if m == 2 and (6, 3) in found:
        notes.append("(6,3): no quadrangle with these parameters exists")
    return {"pairs": out, "notes": notes}


def central_collineation_feasible(gon, s, t):
    """The ball-of-radius-n fixed structure integrality screen (hexagon/octagon)."""
    s, t = int(s), int(t)
    if gon == 6:
        n1 = Fraction(t ** 3 * (s * t + s * s + 1), s * s + s * t + t * t)
        rep = ConstraintReport([Quantity("n_1", n1)])
        return rep
    if gon == 8:
        n1 = -Fraction(t ** 4 * (s - 1) * (s * t + s * s + s + 1),
                       s ** 3 + s * t * t + s * s * t + t ** 3)
        quantities = [Quantity("n_1", n1)]
        notes = []
        if s == 2 * t:
            ok = t % 15 in (0, 3, 4, 5, 8, 9, 10, 13, 14)
            notes.append("shape (2t,t): t mod 15 = %d admissible=%s" % (t % 15, ok))
        if t == 2 * s:
            ok = s % 15 in (0, 1, 2, 5, 6, 7, 10, 11, 12)
            notes.append("shape (s,2s): s mod 15 = %d admissible=%s" % (s % 15, ok))
        return ConstraintReport(quantities, notes)
    raise FeasibilityError("central collineation screen exists for gon 6 and 8")


# -- anisotropic machinery -------------------------------------------------------------


def divisibility_pairs(kind, bound):
    """Solutions of the mutual-divisibility systems, by recurrence + verification.

    fibonacci: a | b^2+1 and b | a^2+1 with a <= b  (consecutive odd-index pairs)
    pell: 2a | b^2+1 and b | 2a^2+1, two branches by the sign of b - sqrt(2) a
    """
    out = []
    if kind == "fibonacci":
        a, b = 1, 2
        while a <= bound:
            if (b * b + 1) % a or (a * a + 1) % b:
                raise FeasibilityError("recurrence produced a non-solution (%d,%d)" % (a, b))
            out.append((a, b))
            a, b = b, (b * b + 1) // a
        return out
    if kind == "pell":
        pell = [0, 1]
        while pell[-1] <= 4 * bound:
            pell.append(2 * pell[-1] + pell[-2])
        n = 1
        while True:
            lo = pell[2 * n + 1], pell[2 * n] + pell[2 * n - 1]      # b < sqrt2 a
            hi = pell[2 * n - 1], pell[2 * n] + pell[2 * n - 1]      # b > sqrt2 a
            emitted = False
            for (a, b), branch in ((hi, "b>sqrt2a"), (lo, "b<sqrt2a")):
                if a <= bound and b <= bound:
                    if (b * b + 1) % (2 * a) or (2 * a * a + 1) % b:
                        raise FeasibilityError(
                            "recurrence produced a non-solution (%d,%d)" % (a, b))
                    out.append((a, b, branch))
                    emitted = True
            if not emitted:
                return out
            n += 1
    raise FeasibilityError("kind must be 'fibonacci' or 'pell'")


def anisotropic_feasibility(gon, scan_bound):
    """Feasibility of anisotropic (or nearly anisotropic) collineations by gon.

    quadrangle: reports the coprimality condition.  hexagon: scans the
    Fibonacci-derived square parameter pairs and reports the integrality
    obstruction.  octagon: scans Pell-derived pairs and reports the violated
    global divisibility.  Every report carries the codistance table row.
    """
    rows = {
        4: {"codist_0": "gcd(s,t)=1", "codist_0_2": "possible", "codist_0_2_4": "possible"},
        6: {"codist_0": "impossible", "codist_0_2": "gcd(s,t)=1", "codist_0_2_4": "possible"},
        8: {"codist_0": "impossible", "codist_0_2": "impossible", "codist_0_2_4": "gcd(s,t)=1"},
    }
    if gon == 4:
        return {"gon": 4, "condition": "anisotropic needs gcd(s,t) = 1",
                "admissible": [], "table_row": rows[4]}
    if gon == 6:
        admissible = []
        scanned = []
        for a, b in divisibility_pairs("fibonacci", math.isqrt(scan_bound) + 1):
            sq, tq = a * a, b * b
            if sq > scan_bound or tq > scan_bound:
                continue
            F = b - a  # the intermediate Fibonacci number
            num = 21 * (6 * F * F + 11)
            den = (4 * F * F + 3) * (2 * F * F + 1)
            integral = num % den == 0
            thick = sq >= 2
            scanned.append({"s": sq, "t": tq, "value": Fraction(num, den),
                            "integral": integral, "thick": thick})
            if integral and thick:
                admissible.append((sq, tq))
        return {"gon": 6, "scanned": scanned, "admissible": admissible,
                "table_row": rows[6]}
    if gon == 8:
        admissible = []
        scanned = []
        for a, b, branch in divisibility_pairs("pell", math.isqrt(scan_bound) + 1):
            sq, tq = 2 * a * a, b * b
            if sq > scan_bound or tq > scan_bound:
                continue
            num = (2 * a * a * b * b + 1) * (4 * a ** 4 * b ** 4 + 1)
            den = (2 * a * a + b * b) * (4 * a ** 4 + b ** 4)
            integral = num % den == 0
            thick = min(sq, tq) >= 2
            scanned.append({"s": sq, "t": tq, "branch": branch,
                            "value": Fraction(num, den), "integral": integral})
            if integral and thick:
                admissible.append((sq, tq))
        return {"gon": 8, "scanned": scanned, "admissible": admissible,
                "table_row": rows[8]}
    raise FeasibilityError("anisotropic feasibility exists for gon 4, 6, 8")


# -- the Fano representation check ---------------------------------------------------


@dataclass(frozen=True)
class Sqrt2:
    """Exact numbers u + v*sqrt(2) with rational u, v."""

    u: Fraction
    v: Fraction

    @classmethod
    def of(cls, u, v=0):
        return cls(Fraction(u), Fraction(v))

    def __add__(self, o):
        return Sqrt2(self.u + o.u, self.v + o.v)

    def __sub__(self, o):
        return Sqrt2(self.u - o.u, self.v - o.v)

    def __mul__(self, o):
        return Sqrt2(self.u * o.u + 2 * self.v * o.v, self.u * o.v + self.v * o.u)

    def is_rational(self):
        return self.v == 0


def fano_representation_check():
    """Verify the 7x7 sqrt(2)-matrix model of the order-8 domestic duality.

    Checks orthogonality, eighth power = identity, trace 1+sqrt2, and that the
    square is the 0/1 permutation matrix of the squared duality acting on the
    points (p q1)(p2 q3 p3 q2) with p1 fixed, in the basis order
    (p, p1, p2, p3, q1, q2, q3).
    """
    a = Sqrt2(Fraction(2, 14), Fraction(-3, 14))
    b = Sqrt2(Fraction(1, 7), Fraction(2, 7))
    A, B = a, b
    pattern = [
        [A, B, A, A, A, B, B],
        [B, B, A, A, B, A, A],
        [B, A, B, A, A, B, A],
        [B, A, A, B, A, A, B],
        [A, B, B, B, A, A, A],
        [A, A, A, B, B, B, A],
        [A, A, B, A, B, A, B],
    ]
    zero, one = Sqrt2.of(0), Sqrt2.of(1)

    def matmul(X, Y):
        return [[_dot_row(X[i], [Y[k][j] for k in range(7)]) for j in range(7)]
                for i in range(7)]

    def _dot_row(row, col):
        acc = zero
        for rv, cv in zip(row, col):
            acc = acc + rv * cv
        return acc

    def transpose(X):
        return [[X[j][i] for j in range(7)] for i in range(7)]

    ident = [[one if i == j else zero for j in range(7)] for i in range(7)]
    results = {}
    results["orthogonal"] = matmul(pattern, transpose(pattern)) == ident
    sq = matmul(pattern, pattern)
    # theta^2 on points: p->q1, p1->p1, p2->q3, p3->q2, q1->p, q2->p2, q3->p3
    perm = [4, 1, 6, 5, 0, 2, 3]
    perm_matrix = [[one if perm[i] == j else zero for j in range(7)] for i in range(7)]
    perm_matrix_t = transpose(perm_matrix)
    results["square_is_perm"] = sq in (perm_matrix, perm_matrix_t)
    power = pattern
    for _ in range(3):
        power = matmul(power, power)
    results["eighth_power_identity"] = power == ident
    trace = zero
    for i in range(7):
        trace = trace + pattern[i][i]
    results["trace"] = trace
    results["trace_ok"] = trace == Sqrt2.of(1, 1)
    p4 = matmul(sq, sq)
    tr4 = zero
    for i in range(7):
        tr4 = tr4 + p4[i][i]
    results["fourth_power_trace"] = tr4
    results["fourth_power_trace_rational"] = tr4.is_rational()
    results["ok"] = all((
        results["orthogonal"], results["square_is_perm"],
        results["eighth_power_identity"], results["trace_ok"],
        results["fourth_power_trace_rational"],
    ))
    return results


# re-export: the nonexistence drivers live in their own module
from .octagon_search import octagon_nonexistence_search  # noqa: E402,F401
