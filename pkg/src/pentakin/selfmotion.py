"""Self-motion synthesis and analysis: the Duporcq-condition levels, leg
parameter formulas for the three mobile types, reality classification,
configuration-curve tracing, compatible-leg generation, and the planar
circular-translation criterion.

Canonical frames for the mobile types place the first finite base point at
the origin, the real ideal direction of the base locus along the z-axis,
and the conjugate complex ideal directions at (1, +-i, 0).
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
import sympy as sp

from .archsing import WrongBranchError, _cross, _dot, _sub
from .geom import ProjPoint
from .kinmap import (ConstraintHyperplane, Leg, MotionParams, Pentapod,
                     phi_residuals)
from .polyalg import (GaussRat, exactify, mat_solve_general, to_float,
                      to_sympy)
from .rearrange import (CubicCorrespondence, PentapodClass, classify_type,
                        require_member, A_SYM)

_I = GaussRat(0, 1)


class SelfMotionError(ValueError):
    pass


class DegenerateDesignError(SelfMotionError):
    pass


class NotASelfMotionError(SelfMotionError):
    pass


class Duporcq(enum.Enum):
    NONE = "none"
    FIRST_ONLY = "first_only"
    FULL = "full"


class Reality(enum.Enum):
    REAL = "real"
    COMPLEX = "complex"


# ---------------------------------------------------------------------------
# designs
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SelfMotionDesign:
    """Canonical-frame self-motion design for Types 1, 2 and 5.

    Types 1/2 carry constraints (sphere, two conjugate Darboux, one real
    Darboux, Mannheim); Type 5 carries (sphere, two conjugate Darboux,
    angle, sphere).  p3 is always the conjugate of p2.
    """

    type: int
    a2: GaussRat
    a4: Fraction | None         # types 1, 2 (a4 = 0 for type 2)
    a5: Fraction | None         # type 5
    m5: tuple                   # (A5, B5, C5): Mannheim point or second center
    r1sq: Fraction
    p2: GaussRat
    p4: Fraction | None         # types 1, 2
    w: Fraction | None          # type 5 angle constant
    p5: Fraction | None         # types 1, 2
    r5sq: Fraction | None       # type 5
    special_branch: bool = False

    @property
    def a3(self):
        return self.a2.conjugate()

    @property
    def p3(self):
        return self.p2.conjugate()

    def constraints(self):
        """The five canonical constraint hyperplanes of the design."""
        lam1 = ConstraintHyperplane(
            "sphere", (Fraction(4), -self.r1sq / 2, Fraction(0), Fraction(0),
                       Fraction(0), Fraction(0), Fraction(0), Fraction(0),
                       Fraction(0)))
        om2 = ConstraintHyperplane(
            "darboux", (0, self.p2, self.a2, self.a2 * (-_I), 0, 0,
                        GaussRat(1), -_I, 0))
        om3 = om2.conjugate()
        A5, B5, C5 = self.m5
        if self.type in (1, 2):
            om4 = ConstraintHyperplane(
                "darboux", (0, self.p4, 0, 0, self.a4, 0, 0, 0, Fraction(1)))
            pi5 = ConstraintHyperplane(
                "mannheim", (0, self.p5, A5, B5, C5, Fraction(1), 0, 0, 0))
            return [lam1, om2, om3, om4, pi5]
        ang4 = ConstraintHyperplane(
            "angle", (0, self.w, 0, 0, Fraction(1), 0, 0, 0, 0))
        lam5 = ConstraintHyperplane(
            "sphere", (Fraction(4),
                       (self.a5 ** 2 + A5 * A5 + B5 * B5 + C5 * C5
                        - self.r5sq) / 2,
                       self.a5 * A5, self.a5 * B5, self.a5 * C5,
                       self.a5, A5, B5, C5))
        return [lam1, om2, om3, ang4, lam5]


def synth_leg_params(design_type: int, *, a2, a4=None, a5=None, m5,
                     r1sq, p5=None) -> SelfMotionDesign:
    """Leg parameters of a self-motion design in the canonical frame.

    Type 1 needs (a2, a4, m5, r1sq); type 2 needs (a2, m5 with C5 = 0,
    r1sq); type 5 needs (a2, a5, m5, r1sq).  The remaining scalar relation
    is solved for p5 (types 1, 2) or the second squared leg length (type 5).
    """
    a2 = _as_gauss(a2)
    if a2.im == 0:
        raise DegenerateDesignError("a2 must have nonzero imaginary part")
    a3 = a2.conjugate()
    A5, B5, C5 = (exactify(c) for c in m5)
    r1sq = exactify(r1sq)
    two_re = a2.re * 2  # a2 + a3
    norm = a2.abs2()    # a2 * a3

    if design_type == 1:
        a4 = exactify(a4)
        if (a2 - a4).abs2() == 0 or (a3 - a4).abs2() == 0:
            raise DegenerateDesignError("a4 coincides with a2 or a3")
        k = norm - a4 * a4          # a2*a3 - a4^2, real
        p2 = -(GaussRat(A5) * k - _I * GaussRat(B5) * k) / ((a3 - a4) ** 2)
        p4 = k * C5 / ((a2 - a4) * (a3 - a4))
        assert p4.im == 0
        p4 = p4.re
        if k != 0:
            # remaining relation, solved for p5
            s = two_re - 2 * a4
            bracket_known = (-(s) * r1sq
                             - (2 * norm - two_re * a4) * a4)
            lead = ((a2 - a4) ** 2 * (a3 - a4) ** 2).re
            rest = k * k * s * (A5 * A5 + B5 * B5 + C5 * C5)
            # lead * (2 k p5 + bracket_known) + rest = 0
            p5v = (-(rest / lead) - bracket_known) / (2 * k)
            return SelfMotionDesign(1, a2, a4, None, (A5, B5, C5), r1sq,
                                    p2, p4, None, p5v, None)
        # special branch a2*a3 = a4^2: the relation forces r1sq = a4^2
        if r1sq != a4 * a4:
            raise DegenerateDesignError(
                "a2*a3 = a4^2 requires the squared first leg length a4^2")
        p5v = exactify(p5) if p5 is not None else Fraction(0)
        return SelfMotionDesign(1, a2, a4, None, (A5, B5, C5), r1sq,
                                p2, p4, None, p5v, None, special_branch=True)

    if design_type == 2:
        if C5 != 0:
            raise DegenerateDesignError("type 2 requires C5 = 0")
        if norm == 0:
            raise DegenerateDesignError("a2 must be nonzero for type 2")
        p2 = -a2 * (GaussRat(A5) - _I * GaussRat(B5)) / a3
        if two_re == 0:
            raise DegenerateDesignError("a2 + a3 = 0 degenerates type 2")
        p5v = (r1sq * two_re - (A5 * A5 + B5 * B5) * two_re) / (2 * norm)
        return SelfMotionDesign(2, a2, Fraction(0), None, (A5, B5, C5), r1sq,
                                p2, Fraction(0), None, p5v, None)

    if design_type == 5:
        a5 = exactify(a5)
        if a5 == 0:
            raise DegenerateDesignError("a5 must be nonzero for type 5")
        w = C5 / a5
        p2 = -(a3 - a5) * (GaussRat(A5) - _I * GaussRat(B5)) / a5
        r5sq = (r1sq - (two_re) * a5 + a5 * a5
                + (a5 * a5 + B5 * B5 + C5 * C5) * (two_re - a5) / a5)
        if to_float(r5sq) <= 0:
            raise DegenerateDesignError(
                f"the remaining relation gives a nonpositive squared length {r5sq}")
        return SelfMotionDesign(5, a2, None, a5, (A5, B5, C5), r1sq,
                                p2, None, w, None, r5sq)

    raise SelfMotionError(f"unknown design type {design_type}")


def remaining_relation_residual(d: SelfMotionDesign):
    """Exact residual of the type-specific closing relation; zero for a
    valid design."""
    a2, a3 = d.a2, d.a3
    A5, B5, C5 = d.m5
    if d.type == 1:
        a4 = d.a4
        k = a2.abs2() - a4 * a4
        if d.special_branch:
            return d.r1sq - a4 * a4
        lead = ((a2 - a4) ** 2 * (a3 - a4) ** 2).re
        s = 2 * a2.re - 2 * a4
        return (lead * (2 * k * d.p5 - s * d.r1sq
                        - (2 * a2.abs2() - 2 * a2.re * a4) * a4)
                + k * k * s * (A5 * A5 + B5 * B5 + C5 * C5))
    if d.type == 2:
        s = 2 * a2.re
        return ((A5 * A5 + B5 * B5) * s + 2 * a2.abs2() * d.p5 - d.r1sq * s)
    if d.type == 5:
        a5 = d.a5
        s = 2 * a2.re
        return ((a5 * a5 + B5 * B5 + C5 * C5) * (s - a5)
                + (d.r1sq - d.r5sq - s * a5 + a5 * a5) * a5)
    raise SelfMotionError(f"unknown design type {d.type}")


def _as_gauss(x) -> GaussRat:
    e = exactify(x)
    return e if isinstance(e, GaussRat) else GaussRat(e)


# ---------------------------------------------------------------------------
# Duporcq condition on user pentapods
# ---------------------------------------------------------------------------

def duporcq_check(p: Pentapod, tol: float = 1e-9) -> Duporcq:
    """Geometric levels of the replacement-locus condition for Types 1/2/5:
    FIRST_ONLY when the locus lies on a cylinder of revolution, FULL when
    it is a straight cubic circle (circle + orthogonal line for Type 2)."""
    cls = classify_type(p)
    if cls.kind == "type1":
        return _duporcq_cubic(cls.correspondence, reduced=False)
    if cls.kind == "type2":
        return _duporcq_conic(cls)
    if cls.kind == "type5":
        return _duporcq_cubic(cls.correspondence, reduced=False)
    raise SelfMotionError(
        f"Duporcq levels are defined for types 1, 2, 5; got {cls.kind}")


def _duporcq_cubic(corr: CubicCorrespondence, reduced: bool) -> Duporcq:
    """Cubic locus: one real ideal direction W, conjugate complex ideal
    directions D.  FULL iff D.D = 0 and D.W = 0; FIRST iff
    (D.D)(W.W) = (D.W)^2."""
    d0, d1, d2, d3 = (q.as_expr() for q in corr.polys())
    a = A_SYM
    if corr.affine_relation:
        # the real ideal direction is the image of the platform ideal point
        deg = 3
        W = tuple(sp.Poly(dk, a).as_expr().coeff(a, deg) for dk in (d1, d2, d3))
        if all(c == 0 for c in W):
            return Duporcq.NONE
        qpoly = sp.Poly(d0, a)
    else:
        d0p = sp.Poly(d0, a)
        if d0p.degree() != 3:
            return Duporcq.NONE
        fac = [(f, m) for f, m in sp.factor_list(d0, a)[1]]
        lin = [f for f, m in fac for _ in range(m) if f.as_poly(a).degree() == 1]
        quad = [f for f, _ in fac if f.as_poly(a).degree() == 2]
        if len(quad) == 1 and len(lin) == 1:
            q = quad[0].as_poly(a)
            if sp.discriminant(q.as_expr(), a) >= 0:
                return Duporcq.NONE  # three real ideal points
            r = sp.roots(lin[0].as_poly(a), a).popitem()[0]
            W = tuple(sp.Rational(dk.subs(a, r)) for dk in (d1, d2, d3))
            if all(c == 0 for c in W):
                return Duporcq.NONE
            qpoly = q
        elif not lin and not quad:
            # irreducible cubic: numeric evaluation
            return _duporcq_numeric(d0, (d1, d2, d3))
        else:
            return Duporcq.NONE  # three real or repeated ideal points
    if qpoly.degree() != 2 or sp.discriminant(qpoly.as_expr(), a) >= 0:
        return Duporcq.NONE
    return _cylinder_levels(qpoly, (d1, d2, d3), W)


def _cylinder_levels(qpoly, dk_exprs, W) -> Duporcq:
    """Exact divisibility tests: for each complex ideal root of qpoly, the
    direction D = (d1, d2, d3) is tested against the axis direction W."""
    a = A_SYM
    d1, d2, d3 = dk_exprs
    Wx, Wy, Wz = (sp.Rational(c) for c in W)
    WW = Wx * Wx + Wy * Wy + Wz * Wz
    u = sp.rem(sp.expand(d1 * d1 + d2 * d2 + d3 * d3), qpoly.as_expr(), a)
    v = sp.rem(sp.expand(d1 * Wx + d2 * Wy + d3 * Wz), qpoly.as_expr(), a)
    if sp.expand(u) == 0 and sp.expand(v) == 0:
        return Duporcq.FULL
    T = sp.rem(sp.expand((d1 * d1 + d2 * d2 + d3 * d3) * WW
                         - (d1 * Wx + d2 * Wy + d3 * Wz) ** 2),
               qpoly.as_expr(), a)
    if sp.expand(T) == 0:
        return Duporcq.FIRST_ONLY
    return Duporcq.NONE


def _duporcq_numeric(d0, dk_exprs, tol: float = 1e-25) -> Duporcq:
    import mpmath
    a = A_SYM
    mpmath.mp.dps = 40
    coeffs = [mpmath.mpf(str(sp.Rational(c))) for c in sp.Poly(d0, a).all_coeffs()]
    rts = mpmath.polyroots(coeffs, maxsteps=200, extraprec=80)
    real = [r for r in rts if abs(mpmath.im(r)) < 1e-25]
    cplx = [r for r in rts if mpmath.im(r) > 1e-25]
    if len(real) != 1 or len(cplx) != 1:
        return Duporcq.NONE
    dk = [sp.lambdify(a, e, "mpmath") for e in dk_exprs]
    W = [mpmath.mpc(f(real[0])) for f in dk]
    D = [mpmath.mpc(f(cplx[0])) for f in dk]
    # normalize projectively so the residual tests are scale-free
    nD = mpmath.sqrt(sum(abs(z) ** 2 for z in D))
    nW = mpmath.sqrt(sum(abs(z) ** 2 for z in W))
    if nD == 0 or nW == 0:
        return Duporcq.NONE
    D = [z / nD for z in D]
    W = [z / nW for z in W]
    DD = sum(z * z for z in D)
    DW = sum(z * wv for z, wv in zip(D, W))
    WW = sum(wv * wv for wv in W)
    if abs(DD) <= tol and abs(DW) <= tol:
        return Duporcq.FULL
    if abs(DD * WW - DW * DW) <= tol:
        return Duporcq.FIRST_ONLY
    return Duporcq.NONE


def _duporcq_conic(cls: PentapodClass) -> Duporcq:
    """Type 2: conic on a cylinder of revolution with the exceptional line
    as a generator; FULL when the conic is a circle and the line is
    orthogonal to its plane."""
    corr = cls.correspondence
    a = A_SYM
    red = corr.reduced_polys()
    e0, e1, e2, e3 = (q.as_expr() for q in red)
    exc = cls.exceptional_points[0]
    if exc.direction is None:
        return Duporcq.NONE
    G = tuple(sp.Rational(c) for c in exc.direction)
    q0 = sp.Poly(e0, a)
    if q0.degree() != 2 or sp.discriminant(e0, a) >= 0:
        return Duporcq.NONE  # not an ellipse/circle
    level = _cylinder_levels(q0, (e1, e2, e3), G)
    if level is Duporcq.NONE:
        return Duporcq.NONE
    # FULL additionally needs the line orthogonal to the conic's plane
    normal = _conic_plane_normal(corr)
    if normal is None:
        return Duporcq.FIRST_ONLY
    DD = sp.expand(sp.rem(sp.expand(e1 * e1 + e2 * e2 + e3 * e3), e0, a))
    is_circle = DD == 0
    ortho = all(c == 0 for c in _cross(G, normal))
    return Duporcq.FULL if (is_circle and ortho) else Duporcq.FIRST_ONLY


def _conic_plane_normal(corr: CubicCorrespondence):
    from .rearrange import sigma
    pts = []
    t = 0
    while len(pts) < 3 and t < 50:
        try:
            pt = sigma(corr, Fraction(t))
        except Exception:
            t += 1
            continue
        if isinstance(pt, ProjPoint) and not pt.is_ideal:
            pts.append(pt.affine())
        t += 1
    if len(pts) < 3:
        return None
    n = _cross(_sub(pts[1], pts[0]), _sub(pts[2], pts[0]))
    return n if any(n) else None


# ---------------------------------------------------------------------------
# reality
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class RealityVerdict:
    reality: Reality
    method: str  # "formula" | "empirical" | "fiber-distance"

    def __eq__(self, other):
        if isinstance(other, Reality):
            return self.reality is other
        return NotImplemented


def reality(design) -> RealityVerdict:
    """Real-vs-complex verdict for a self-motion.

    Type 5 has the closed criterion |C5| < |a5|; planar affine-relation
    pentapods use the fiber-distance criterion; Types 1 and 2 are decided
    empirically by a nonempty real trace.
    """
    if isinstance(design, Pentapod):
        out = circular_translation_check(design)
        return RealityVerdict(
            Reality.REAL if out.verdict is Reality.REAL else Reality.COMPLEX,
            "fiber-distance")
    if design.type == 5:
        C5 = design.m5[2]
        return RealityVerdict(Reality.REAL if C5 * C5 < design.a5 * design.a5
                              else Reality.COMPLEX, "formula")
    tr = trace(design, samples=16)
    return RealityVerdict(Reality.REAL if tr.samples else Reality.COMPLEX,
                          "empirical")


# ---------------------------------------------------------------------------
# tracing
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class MotionCurveSample:
    t: float
    params: MotionParams
    branch: str


@dataclass(frozen=True)
class TraceResult:
    samples: tuple
    is_real: bool
    intervals: tuple      # real intervals of the curve parameter
    parameter: str        # which motion coordinate parametrizes the curve

    def __iter__(self):
        return iter(self.samples)

    def branches(self):
        out = {}
        for s in self.samples:
            out.setdefault(s.branch, []).append(s)
        return out


def trace(design: SelfMotionDesign, samples: int = 200,
          tol: float = 1e-9) -> TraceResult:
    """Sample the configuration curve of a valid design.

    The five linear constraints are solved exactly, the three image-variety
    quadrics are reduced to the remaining coordinates, and both branches are
    evaluated over the real parameter interval(s).  Returns an empty sample
    list flagged complex when no real branch exists.
    """
    res = remaining_relation_residual(design)
    if res != 0:
        raise NotASelfMotionError(
            f"the leg-parameter relation has residual {res}")
    if design.type in (1, 2):
        return _trace_type12(design, samples, tol)
    return _trace_type5(design, samples, tol)


def _reduced_quadrics(design):
    """Solve the 5 linear constraints exactly and return the reduced
    quadrics in the remaining coordinates (sympy exprs) plus the coordinate
    map as sympy expressions."""
    cons = design.constraints()
    rows = [[to_sympy(c) for c in hp.coeffs] for hp in cons]
    M = sp.Matrix(rows)
    if design.type in (1, 2):
        piv = [0, 5, 6, 7, 8]            # n0, y0, y1, y2, y3
        free = [2, 3, 4]                 # x1, x2, x3
    else:
        piv = [0, 4, 6, 7, 8] if design.m5[2] != 0 else [0, 4, 5, 6, 7]
        free = [c for c in (2, 3, 5, 8) if c not in piv][:3]
        # type 5: x3 is pinned by the angle condition, so solve for it
    fsyms = sp.symbols("s1 s2 s3")
    coords = [sp.Integer(0)] * 9
    coords[1] = sp.Integer(1)            # x0 = 1 chart
    for c, s in zip(free, fsyms):
        coords[c] = s
    A = M[:, piv]
    rhs = -sum((M[:, c] * coords[c] for c in free + [1]), sp.zeros(5, 1))
    sol = A.LUsolve(rhs)
    for k, c in enumerate(piv):
        coords[c] = sp.expand(sol[k])
    n0, x0, x1, x2, x3, y0, y1, y2, y3 = coords
    Q1 = sp.expand(x1 * x1 + x2 * x2 + x3 * x3 - x0 * x0)
    Q2 = sp.expand(y1 * y1 + y2 * y2 + y3 * y3 - 8 * x0 * n0)
    Q3 = sp.expand(x1 * y1 + x2 * y2 + x3 * y3 - x0 * y0)
    return coords, (Q1, Q2, Q3), fsyms, free


def _trace_type12(design, samples, tol):
    coords, (Q1, Q2, Q3), (s1, s2, s3), free = _reduced_quadrics(design)
    # s1, s2, s3 = x1, x2, x3; parameter t = x3, branches in x2
    xi = [sp.expand(sp.resultant(Q2, Q3, s1)),
          sp.expand(sp.resultant(Q1, Q3, s1)),
          sp.expand(sp.resultant(Q1, Q2, s1))]
    g = sp.gcd(sp.gcd(xi[0], xi[1]), xi[2])
    gp = sp.Poly(g, s2)
    if gp.degree() != 2:
        raise NotASelfMotionError(
            "the reduced system does not contain the two-branch curve")
    c2, c1, c0 = [sp.expand(c) for c in gp.all_coeffs()]
    disc = sp.expand(c1 * c1 - 4 * c2 * c0)
    intervals = _real_intervals(disc, s3)
    if not intervals:
        return TraceResult((), False, (), "x3")
    out = []
    for (lo, hi) in intervals:
        for t in np.linspace(lo, hi, max(2, samples)):
            tq = sp.Rational(Fraction(float(t)))
            c2v, c1v, c0v, dv = (complex(sp.N(e.subs(s3, tq), 25)).real
                                 for e in (c2, c1, c0, disc))
            if dv < 0 or c2v == 0:
                continue
            for sign, branch in ((1.0, "upper"), (-1.0, "lower")):
                x2v = (-c1v + sign * math.sqrt(max(dv, 0.0))) / (2 * c2v)
                smp = _complete_sample(design, coords, (s1, s2, s3),
                                       x2v, float(t), tol)
                if smp is not None:
                    out.append(MotionCurveSample(float(t), smp, branch))
    return TraceResult(tuple(out), bool(out), tuple(intervals), "x3")


def _complete_sample(design, coords, syms, x2v, tv, tol):
    """Solve for x1 given (x2, x3) and build the full motion parameters."""
    s1, s2, s3 = syms
    rad = 1.0 - x2v * x2v - tv * tv
    if rad < -tol:
        return None
    rad = max(rad, 0.0)
    best = None
    for x1v in (math.sqrt(rad), -math.sqrt(rad)):
        subs = {s1: x1v, s2: x2v, s3: tv}
        vals = [complex(sp.N(c.subs(subs), 20)) for c in coords]
        m = MotionParams(*[v.real for v in vals])
        res = [abs(r) for r in phi_residuals(m)]
        err = max(res)
        if err <= tol * 10 and (best is None or err < best[0]):
            best = (err, m)
    return best[1] if best else None


def _real_intervals(disc_expr, t_sym):
    """Intervals where the branch discriminant is nonnegative."""
    from .polyalg import real_roots
    p = sp.Poly(sp.expand(disc_expr), t_sym)
    if p.degree() == 0:
        return [(-1.0, 1.0)] if p.all_coeffs()[0] >= 0 else []
    rts = [r for r, _ in real_roots(p)]
    rts.sort()
    bounds = [rts[0] - 1.0] + rts + [rts[-1] + 1.0] if rts else [-1.0, 1.0]
    out = []
    f = sp.lambdify(t_sym, disc_expr, "math")
    for lo, hi in zip(bounds[:-1], bounds[1:]):
        mid = 0.5 * (lo + hi)
        if f(mid) >= 0:
            # clip unbounded outer cells to the sampled roots
            out.append((lo if lo in rts else lo, hi if hi in rts else hi))
    # merge: keep only cells between consecutive roots plus finite padding
    cells = []
    for lo, hi in out:
        cells.append((float(lo), float(hi)))
    return _merge_cells(cells)


def _merge_cells(cells):
    if not cells:
        return []
    cells.sort()
    merged = [list(cells[0])]
    for lo, hi in cells[1:]:
        if lo <= merged[-1][1] + 1e-12:
            merged[-1][1] = max(merged[-1][1], hi)
        else:
            merged.append([lo, hi])
    return [tuple(c) for c in merged]


def _trace_type5(design, samples, tol):
    coords, (Q1, Q2, Q3), fsyms, free = _reduced_quadrics(design)
    s1, s2, s3 = fsyms
    # free coordinates: x1, x2 and one leftover y; the platform direction
    # circle is x1^2 + x2^2 = 1 - w^2
    w = to_float(design.w)
    rad2 = 1.0 - w * w
    if rad2 <= tol:
        return TraceResult((), False, (), "x1")
    lim = math.sqrt(rad2)
    out = []
    for t in np.linspace(-lim, lim, max(2, samples)):
        x2abs = math.sqrt(max(rad2 - t * t, 0.0))
        for sx, tagx in ((x2abs, "a"), (-x2abs, "b")):
            sols = _solve_leftover(design, coords, fsyms, float(t), sx, Q1, Q2, Q3, tol)
            for k, m in enumerate(sols):
                out.append(MotionCurveSample(float(t), m, f"{tagx}{k}"))
    return TraceResult(tuple(out), bool(out), ((-lim, lim),), "x1")


def _solve_leftover(design, coords, fsyms, x1v, x2v, Q1, Q2, Q3, tol):
    s1, s2, s3 = fsyms
    sols = []
    # the leftover symbol s3 appears in the quadrics; solve the first that
    # contains it and filter on the rest
    target = next((Q for Q in (Q2, Q3, Q1) if Q.has(s3)), None)
    if target is None:
        return sols
    pol = sp.Poly(sp.expand(target.subs({s1: sp.Float(x1v, 20),
                                         s2: sp.Float(x2v, 20)})), s3)
    if pol.degree() < 1:
        return sols
    roots = np.roots([complex(c) for c in pol.all_coeffs()])
    for r in roots:
        if abs(r.imag) > 1e-8 * (1 + abs(r)):
            continue
        subs = {s1: x1v, s2: x2v, s3: float(r.real)}
        vals = [complex(sp.N(c.subs(subs), 20)) for c in coords]
        m = MotionParams(*[v.real for v in vals])
        res = [abs(x) for x in phi_residuals(m)]
        if max(res) <= max(tol * 100, 1e-7):
            sols.append(m)
    return sols


# ---------------------------------------------------------------------------
# compatible legs from a canonical constraint system
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class LegGenerationError:
    a: object
    reason: str


def real_legs_from_design(design: SelfMotionDesign, a_values):
    """Sphere legs compatible with the same self-motion: for each platform
    coordinate the new sphere condition is matched as an exact linear
    combination of the five canonical constraints, yielding the base point
    and the squared leg length.  Exceptional coordinates produce per-value
    error entries."""
    cons = design.constraints()
    rows = [hp.coeffs for hp in cons]
    out = []
    for a_in in a_values:
        a = exactify(a_in)
        res = _match_sphere(rows, a)
        if res is None:
            out.append(LegGenerationError(a, "exceptional platform point: no "
                                             "unique compatible base point"))
            continue
        base, r2 = res
        if any(isinstance(c, GaussRat) and c.im != 0 for c in base) or \
                (isinstance(r2, GaussRat) and r2.im != 0):
            out.append(LegGenerationError(a, "complex compatible leg"))
            continue
        base = tuple(c.re if isinstance(c, GaussRat) else c for c in base)
        r2 = r2.re if isinstance(r2, GaussRat) else r2
        if to_float(r2) <= 0:
            out.append(LegGenerationError(a, f"nonpositive squared length {r2}"))
            continue
        out.append(Leg(a, base, r2))
    return out


def _match_sphere(rows, a, pick=None):
    """Solve for (mu1..mu5, A, B, C) from the eight linear coefficient
    equations, then recover the squared length from the x0 coefficient.

    A unique solution gives the compatible base point; at exceptional
    platform points the solutions form a family and None is returned unless
    `pick` selects the family member particular + pick * basis_vector."""
    zero = GaussRat(0)
    one = GaussRat(1)
    cols = []
    for k in range(5):
        cols.append([_g(rows[k][j]) for j in range(9)])
    # unknown order: mu1..mu5, A, B, C
    eq_rows = []
    rhs = []
    # coefficient indices and their targets:
    targets = {
        0: (zero, None, GaussRat(4)),      # n0: sum mu c0 = 4
        2: (GaussRat(a), 5, zero),         # x1: sum = a*A  -> sum - a*A = 0
        3: (GaussRat(a), 6, zero),         # x2: a*B
        4: (GaussRat(a), 7, zero),         # x3: a*C
        5: (zero, None, GaussRat(a)),      # y0: sum = a
        6: (one, 5, zero),                 # y1: sum = A
        7: (one, 6, zero),                 # y2: B
        8: (one, 7, zero),                 # y3: C
    }
    for j, (fac, unk_col, const) in targets.items():
        row = [cols[k][j] for k in range(5)] + [zero, zero, zero]
        if unk_col is not None:
            row[unk_col] = -fac
        eq_rows.append(row)
        rhs.append(const)
    sol = mat_solve_general(eq_rows, rhs)
    if sol is None:
        return None
    if sol[1]:
        if pick is None or len(sol[1]) != 1:
            return None
        vec = [p_ + _g(pick) * b for p_, b in zip(sol[0], sol[1][0])]
    else:
        vec = sol[0]
    mus = vec[:5]
    A, B, C = vec[5], vec[6], vec[7]
    x0sum = sum(m * cols[k][1] for k, m in enumerate(mus))
    # x0 coefficient: sum mu c1 = (a^2 + |M|^2 - r2) / 2
    r2 = GaussRat(a) * GaussRat(a) + A * A + B * B + C * C - 2 * x0sum
    return (A, B, C), r2


def _g(x) -> GaussRat:
    e = exactify(x)
    return e if isinstance(e, GaussRat) else GaussRat(e)


def canonical_pentapod(design: SelfMotionDesign, a_values) -> Pentapod:
    """Pentapod whose five legs are compatible with the design's self-motion."""
    legs = real_legs_from_design(design, a_values)
    bad = [l for l in legs if isinstance(l, LegGenerationError)]
    if bad:
        raise SelfMotionError(f"cannot realize legs: {bad[0].reason} "
                              f"at a = {bad[0].a}")
    return Pentapod(tuple(legs))


# ---------------------------------------------------------------------------
# planar circular translation
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CircularTranslationResult:
    verdict: Reality
    direction: tuple | None = None       # platform direction u (float 3-tuple)
    leg_vector_direction: tuple | None = None  # common direction of M_i m_i

    def motion(self, p: Pentapod, radius: float = 1.0):
        """Explicit circular translation m_i(t) = M1 + a_i u + r delta(t)
        with delta on the circle orthogonal to the common leg direction."""
        if self.verdict is not Reality.REAL:
            raise SelfMotionError("no real circular translation exists")
        u = np.array(self.direction, dtype=float)
        h = np.array(self.leg_vector_direction, dtype=float)
        h = h / np.linalg.norm(h)
        seed = np.array([1.0, 0.0, 0.0])
        if abs(h @ seed) > 0.9:
            seed = np.array([0.0, 1.0, 0.0])
        e1 = np.cross(h, seed)
        e1 /= np.linalg.norm(e1)
        e2 = np.cross(h, e1)
        M1 = np.array([to_float(c) for c in p.legs[0].base])
        a1 = to_float(p.legs[0].a)

        def pose(t):
            delta = radius * (math.cos(t) * e1 + math.sin(t) * e2)
            return [tuple(M1 + (to_float(leg.a) - a1) * u + delta)
                    for leg in p.legs]

        return pose


def circular_translation_check(p: Pentapod) -> CircularTranslationResult:
    """Whether a planar pentapod admits a circular translation: an in-plane
    unit platform direction u making all leg vectors a_i u - (M_i - M_1)
    parallel.  Exact consistency solve plus an exact norm test."""
    require_member(p)
    if not p.is_base_planar():
        raise WrongBranchError("circular_translation_check needs a planar base")
    a1 = p.legs[0].a
    M1 = p.legs[0].base
    avals = [leg.a - a1 for leg in p.legs]
    V = [tuple(_sub(leg.base, M1)) for leg in p.legs]
    normal = _plane_normal(V)
    e1 = next(d for d in V[1:] if any(d))
    e2 = _cross(normal, e1)
    E1 = _dot(e1, e1)
    E2 = _dot(e2, e2)
    # u = alpha e1 + beta e2; for each pair the 3D cross product is normal-
    # parallel and bilinear, giving one linear condition in (alpha, beta)
    rows = []
    rhs = []
    n2 = _dot(normal, normal)
    for i in range(5):
        for j in range(i + 1, 5):
            # [(a_i u - V_i) x (a_j u - V_j)] . n = 0
            P = tuple(avals[j] * V[i][c] - avals[i] * V[j][c] for c in range(3))
            coef_a = _dot(_cross(e1, P), normal)
            coef_b = _dot(_cross(e2, P), normal)
            const = _dot(_cross(V[i], V[j]), normal)
            rows.append([coef_a, coef_b])
            rhs.append(-const)
    sol = mat_solve_general(rows, rhs)
    if sol is None:
        return CircularTranslationResult(Reality.COMPLEX)
    (alpha, beta), basis = sol
    if not basis:
        # unique candidate direction: real iff exactly unit
        if alpha * alpha * E1 + beta * beta * E2 == 1:
            return _ct_result(p, avals, V, e1, e2, alpha, beta)
        return CircularTranslationResult(Reality.COMPLEX)
    if len(basis) >= 2:
        # any direction works; pick e1 normalized
        return _ct_result(p, avals, V, e1, e2,
                          Fraction(1), Fraction(0), force_unit=True)
    (da, db), = basis
    # minimize q(s) = (alpha + s da)^2 E1 + (beta + s db)^2 E2 exactly
    denom = da * da * E1 + db * db * E2
    if denom == 0:
        qmin = alpha * alpha * E1 + beta * beta * E2
        smin = Fraction(0)
    else:
        smin = -(alpha * da * E1 + beta * db * E2) / denom
        qmin = ((alpha + smin * da) ** 2 * E1 + (beta + smin * db) ** 2 * E2)
    if qmin > 1:
        return CircularTranslationResult(Reality.COMPLEX)
    # solve q(s) = 1 for s (real by qmin <= 1)
    qa = denom
    qb = 2 * (alpha * da * E1 + beta * db * E2)
    qc = alpha * alpha * E1 + beta * beta * E2 - 1
    if qa == 0:
        s = -qc / qb if qb else Fraction(0)
        alpha2, beta2 = alpha + s * da, beta + s * db
        return _ct_result(p, avals, V, e1, e2, alpha2, beta2)
    disc = qb * qb - 4 * qa * qc
    sroot = (-to_float(qb) + math.sqrt(to_float(disc))) / (2 * to_float(qa))
    alpha2 = to_float(alpha) + sroot * to_float(da)
    beta2 = to_float(beta) + sroot * to_float(db)
    return _ct_result(p, avals, V, e1, e2, alpha2, beta2)


def _plane_normal(V):
    e1 = next((d for d in V if any(d)), None)
    if e1 is None:
        raise SelfMotionError("degenerate base")
    for d in V:
        n = _cross(e1, d)
        if any(n):
            return n
    raise SelfMotionError("base points are collinear")


def _ct_result(p, avals, V, e1, e2, alpha, beta, force_unit=False):
    u = tuple(to_float(alpha) * to_float(c1) + to_float(beta) * to_float(c2)
              for c1, c2 in zip(e1, e2))
    nu = math.sqrt(sum(c * c for c in u))
    if force_unit and nu:
        u = tuple(c / nu for c in u)
    h = None
    for av, Vi in zip(avals, V):
        wv = tuple(to_float(av) * uc - to_float(vc) for uc, vc in zip(u, Vi))
        if any(abs(c) > 1e-12 for c in wv):
            h = wv
            break
    if h is None:
        h = tuple(float(c) for c in _cross(u, _plane_normal(V)))
    return CircularTranslationResult(Reality.REAL, u, h)
