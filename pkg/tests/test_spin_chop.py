import numpy as np
import pytest

from weylcurves import clifford_exact as ce
from weylcurves import signed_perm as sp
from weylcurves import spin_chop as sc


class TestAElement:
    def test_projects_to_a(self):
        for m in (2, 3, 4):
            assert ce.pi(sc.a_element(m)) == sp.make_a(m)

    def test_chop_of_one_is_a(self):
        for m in (2, 3, 4):
            assert sc.chop_spin(ce.one(m)) == sc.a_element(m)

    def test_a_is_unit(self):
        for m in (2, 3, 4):
            assert ce.is_unit(sc.a_element(m))


class TestChopSpin:
    def test_covers_matrix_chop_exhaustive(self):
        for m in (2, 3, 4):
            for z in ce.enumerate_tilde_d(m):
                assert ce.pi(sc.chop_spin(z)) == sp.chop_rep(ce.pi(z))

    def test_antipode_equivariance(self):
        for z in ce.enumerate_tilde_d(3):
            assert sc.chop_spin(ce.neg(z)) == ce.neg(sc.chop_spin(z))

    def test_coset_reuse_matches_direct_germ(self):
        # The cached coset-based chop must equal the from-scratch germ
        # computation: exhaustive at m=3, sampled at m=4.
        for z in ce.enumerate_tilde_d(3):
            assert sc.chop_spin(z) == sc.chop_spin_direct(z)
        rng = np.random.default_rng(0)
        elements = list(ce.enumerate_tilde_d(4))
        for idx in rng.choice(len(elements), 20, replace=False):
            z = elements[idx]
            assert sc.chop_spin(z) == sc.chop_spin_direct(z)

    def test_rejects_generic_input(self):
        half = ce.ExactCoefficient(0, 1, 1)
        non_unit = ce.blade(3, (1, 2), ce.ExactCoefficient(2, 0, 0))
        with pytest.raises(ValueError):
            sc.chop_spin(non_unit)

    def test_projection_shortcut(self):
        for z in list(ce.enumerate_tilde_d(3))[:16]:
            q = ce.pi(z)
            assert sc.chop_spin(z, projection=q) == sc.chop_spin(z)


class TestDeltaSpin:
    def test_covers_matrix_delta(self):
        for m in (2, 3):
            for z in ce.enumerate_tilde_d(m):
                expected = sp.delta(ce.pi(z)).to_perm()
                assert ce.pi(sc.delta_spin(z)) == expected

    def test_antipode_equivariance(self):
        for z in ce.enumerate_tilde_d(3):
            assert sc.delta_spin(ce.neg(z)) == ce.neg(sc.delta_spin(z))

    def test_chop_equals_delta_times_a(self):
        for z in ce.enumerate_tilde_d(3):
            assert sc.chop_spin(z) == ce.mul(sc.delta_spin(z), sc.a_element(3))

    def test_s_spin(self):
        assert ce.s_spin(ce.one(3)) == 3
        assert ce.s_spin(ce.neg_one(3)) == 3
        assert ce.s_spin(ce.w(3, -1)) == -1
        for z in ce.enumerate_tilde_d(3):
            assert ce.s_spin(z) == sp.s_invariant(sp.delta(ce.pi(z)).to_perm())
