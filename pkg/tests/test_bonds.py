from fractions import Fraction as F

import pytest

from conftest import random_member
from helpers import (ar_planar_pentapod, cylinder_only_constraints,
                     finite_vertex_pentapod, ideal_vertex_pentapod,
                     type3_pentapod, type4_pentapod)
from pentakin.bonds import (Bond, BondError, DependentConstraintsError,
                            constraints_of, find_bonds, necessity_verdict,
                            phi_gradient_rank, tangency_rank)
from pentakin.geom import mobius_equivalent
from pentakin.kinmap import (ConstraintHyperplane, Leg, MotionParams,
                             Pentapod, gamma_residuals)
from pentakin.polyalg import GaussRat, to_complex

_I = GaussRat(0, 1)


def _proj_key(m: MotionParams):
    vals = [to_complex(c) for c in m.coords()]
    lead = next(v for v in vals if v)
    return tuple(complex(round((v / lead).real, 8), round((v / lead).imag, 8))
                 for v in vals)


class TestFindBonds:

    def test_reference_bond_pattern(self, type1_reference_pentapod):
        bonds = find_bonds(constraints_of(type1_reference_pentapod))
        assert len(bonds) == 2
        keys = {_proj_key(b.params) for b in bonds}
        # closed form: x = (-conj(B2), 1, A4 conj(B2) - B4) = (i, 1, 0) and
        # y = conj(a2) * (B2bar, -1, 0), y0 = conj(B2) A5 - B5, n0 = 0
        expected = MotionParams(0, 0, _I, GaussRat(1), GaussRat(0),
                                GaussRat(-1, -1), GaussRat(-1), _I,
                                GaussRat(0))
        assert _proj_key(expected) in keys
        for b in bonds:
            assert b.exact
            assert b.multiplicity >= 2

    def test_conjugate_closure(self, type1_reference_pentapod):
        bonds = find_bonds(constraints_of(type1_reference_pentapod))
        for i, b in enumerate(bonds):
            assert b.conjugate_index is not None
            other = bonds[b.conjugate_index]
            assert _proj_key(other.params) == _proj_key(b.params.conjugate())

    def test_length_invariance(self, rng, type1_reference_pentapod):
        base = find_bonds(constraints_of(type1_reference_pentapod))
        ref_keys = sorted(map(str, (_proj_key(b.params) for b in base)))
        for _ in range(10):
            lengths2 = [F(rng.randint(1, 30)) for _ in range(5)]
            p = type1_reference_pentapod.with_lengths2(lengths2)
            bonds = find_bonds([c for c in constraints_of(p)])
            keys = sorted(map(str, (_proj_key(b.params) for b in bonds)))
            assert keys == ref_keys

    def test_bond_residuals_exact_zero(self, type1_reference_pentapod):
        cons = constraints_of(type1_reference_pentapod)
        for b in find_bonds(cons):
            assert all(not g for g in gamma_residuals(b.params))
            assert all(not hp.evaluate(b.params) for hp in cons)

    def test_generic_planar_no_bond(self):
        assert find_bonds(constraints_of(finite_vertex_pentapod())) == []

    def test_planar_bond_iff_ideal_vertex(self):
        assert find_bonds(constraints_of(ideal_vertex_pentapod()))
        assert not find_bonds(constraints_of(finite_vertex_pentapod()))

    def test_type3_empty(self):
        assert find_bonds(constraints_of(type3_pentapod())) == []

    def test_type4_empty(self):
        assert find_bonds(constraints_of(type4_pentapod())) == []

    def test_dependent_constraints_rejected(self):
        hp = ConstraintHyperplane("mannheim", (0, 1, 2, 3, 4, 1, 0, 0, 0))
        with pytest.raises(DependentConstraintsError):
            find_bonds([hp] * 5)

    def test_random_members_bondless(self, rng):
        for _ in range(8):
            assert find_bonds(constraints_of(random_member(rng))) == []


class TestTangencyRank:

    def test_reference_rank_seven(self, type1_reference_pentapod):
        cons = constraints_of(type1_reference_pentapod)
        for b in find_bonds(cons):
            assert tangency_rank(cons, b) == 7

    def test_cylinder_only_rank_eight(self):
        for kind in (1, 2, 5):
            cons = cylinder_only_constraints(kind)
            bonds = find_bonds(cons)
            assert bonds
            assert all(tangency_rank(cons, b) == 8 for b in bonds)

    def test_ar_bond_is_singular_variety_point(self):
        p = ar_planar_pentapod()
        cons = constraints_of(p)
        bonds = find_bonds(cons)
        assert bonds
        for b in bonds:
            assert phi_gradient_rank(b) < 3
            assert tangency_rank(cons, b) < 8

    def test_non_bond_rejected(self, type1_reference_pentapod):
        cons = constraints_of(type1_reference_pentapod)
        fake = Bond(MotionParams(0, 0, 1, 0, 0, 0, 0, 0, 0))
        with pytest.raises(BondError):
            tangency_rank(cons, fake)


class TestNecessityVerdict:

    def test_reference(self, type1_reference_pentapod):
        v = necessity_verdict(type1_reference_pentapod)
        assert v.has_bond and v.tangency_rank_deficient
        assert v.jacobian_rank == 7
        assert all(b.multiplicity >= 2 for b in v.bonds)

    def test_perturbed_reference_loses_bond(self, type1_reference_pentapod):
        # breaking the concyclicity of the projections kills the bond
        legs = list(type1_reference_pentapod.legs)
        a, (A, B, C) = legs[2].a, legs[2].base
        legs[2] = Leg(a, (A + F(1, 10), B, C), legs[2].r2)
        v = necessity_verdict(Pentapod(tuple(legs)))
        assert not v.has_bond

    def test_type4_no_self_motion(self):
        v = necessity_verdict(type4_pentapod())
        assert not v.has_bond

    def test_first_condition_matches_mobius_equivalence(self):
        # canonical first-condition system: platform points and projected
        # ideal/base data are Moebius equivalent exactly when a bond exists
        cons = cylinder_only_constraints(1)
        assert find_bonds(cons)
        # perturb the conjugate Darboux pair direction: B2 off the closed form
        bad = GaussRat(F(4, 5), F(2, 5))
        a2 = GaussRat(1, 2)
        p2 = GaussRat(F(1, 3), F(1, 5))
        om2 = ConstraintHyperplane(
            "darboux", (0, p2, a2, a2 * bad.conjugate(), 0, 0,
                        GaussRat(1), bad.conjugate(), 0))
        cons_bad = [cons[0], om2, om2.conjugate(), cons[3], cons[4]]
        assert not find_bonds(cons_bad)


class TestMobiusCrossCheck:

    def test_reference_projections_mobius_equivalent(
            self, type1_reference_pentapod):
        # project the base points along the real ideal direction (z-axis in
        # the reference frame); the result must correspond to the platform
        # points under a Moebius map, matching the bond existence
        p = type1_reference_pentapod
        plat = [GaussRat(leg.a) for leg in p.legs[:4]]
        proj = [GaussRat(leg.base[0], leg.base[1]) for leg in p.legs[:4]]
        assert mobius_equivalent(plat, proj)

    def test_perturbed_projections_not_equivalent(
            self, type1_reference_pentapod):
        p = type1_reference_pentapod
        plat = [GaussRat(leg.a) for leg in p.legs[:4]]
        proj = [GaussRat(leg.base[0], leg.base[1]) for leg in p.legs[:4]]
        proj[3] = proj[3] + GaussRat(F(1, 7))
        assert not mobius_equivalent(plat, proj)

    def test_reference_projections_concyclic(self, type1_reference_pentapod):
        # base points projected along the real ideal direction of the locus
        # (the z-axis in this frame) land on one circle
        from pentakin.geom import concyclic
        pts = [(leg.base[0], leg.base[1])
               for leg in type1_reference_pentapod.legs]
        assert concyclic(pts).concyclic
        # and breaking one projection breaks the circle
        pts[4] = (pts[4][0] + F(1, 9), pts[4][1])
        assert not concyclic(pts).concyclic
