import itertools

import numpy as np
import pytest

from weylcurves import classify as cl
from weylcurves import clifford_exact as ce
from weylcurves import signed_perm as sp
from weylcurves import spin_chop as sc


def diagonals(m):
    for signs in itertools.product((1, -1), repeat=m):
        if np.prod(signs) == 1:
            yield sp.DiagonalSigns(signs)


class TestSoClasses:
    @pytest.mark.parametrize("m,count", [(3, 2), (4, 3), (5, 3)])
    def test_counts(self, m, count):
        report = cl.so_classes(m)
        assert report.class_count() == count
        assert sum(c.size for c in report.classes) == report.group_order

    def test_each_class_contains_one_named_m(self):
        for m in (3, 4, 5, 6):
            report = cl.so_classes(m)
            for info in report.classes:
                named = [x for x in info.named_reps if x.startswith("M(")]
                assert len(named) == 1

    def test_classes_are_s_level_sets_on_diagonals(self):
        # Every class has a single s value among its diagonal members, with
        # s = m mod 4.
        for m in (3, 4, 5):
            report = cl.so_classes(m)
            for info in report.classes:
                [name] = [x for x in info.named_reps]
                s = int(name.split(",")[1].rstrip(")"))
                assert (m - s) % 4 == 0

    def test_guard(self):
        with pytest.raises(sp.SizeGuardError):
            cl.so_classes(8)


class TestSpinClasses:
    @pytest.mark.parametrize("m,count", [(3, 3), (4, 5), (5, 4)])
    def test_counts(self, m, count):
        report = cl.spin_classes(m)
        assert report.class_count() == count
        assert sum(c.size for c in report.classes) == 2 ** m * int(
            np.prod(range(1, m + 1))
        )

    def test_named_representatives_distinct(self):
        for m in (3, 4, 5):
            report = cl.spin_classes(m)
            seen = []
            for info in report.classes:
                seen.extend(info.named_reps)
            expected = sorted(cl._spin_named(m))
            assert sorted(seen) == expected
            # exactly one named representative per class
            assert all(len(info.named_reps) == 1 for info in report.classes)

    def test_center_never_merges(self):
        for m in (3, 4, 5):
            report = cl.spin_classes(m)
            homes = {
                name: i
                for i, info in enumerate(report.classes)
                for name in info.named_reps
            }
            assert homes["one"] != homes["-one"]

    def test_antipodal_quotient_refines_so(self):
        for m in (3, 4):
            spin = cl.spin_classes(m).class_count()
            so = cl.so_classes(m).class_count()
            assert spin >= so


class TestTransitWitness:
    def test_identity_pair(self):
        d = sp.DiagonalSigns((1,) * 4)
        q = cl.transit_witness(d, d)
        assert sp.delta(q).signs == d.signs
        assert sp.delta(sp.tr(q)).signs == d.signs

    def test_worked_pair(self):
        d1 = sp.DiagonalSigns((-1, -1, 1, 1))
        d2 = sp.DiagonalSigns((1, 1, -1, -1))
        q = cl.transit_witness(d1, d2)
        assert sp.delta(q).signs == d1.signs
        assert sp.delta(sp.tr(q)).signs == d2.signs

    def test_exhaustive(self):
        for m in (2, 3, 4, 5):
            for d1 in diagonals(m):
                for d2 in diagonals(m):
                    if sum(d1.signs) != sum(d2.signs):
                        continue
                    q = cl.transit_witness(d1, d2)
                    assert q.in_d()
                    assert sp.delta(q).signs == d1.signs
                    assert sp.delta(sp.tr(q)).signs == d2.signs

    def test_trace_mismatch_rejected(self):
        with pytest.raises(cl.TransitError):
            cl.transit_witness(
                sp.DiagonalSigns((1, 1, 1, 1)), sp.DiagonalSigns((1, -1, -1, 1))
            )


class TestBlockWitness:
    def test_anti_self_dual(self):
        for m in (3, 4, 5, 6):
            for s in range(4 - m, m - 3):
                if (m - s) % 4:
                    continue
                z = cl.block_witness(m, s)
                assert ce.tr_spin(z) == ce.neg(z)
                q = ce.pi(z)
                assert all(abs(x) == i + 1 for i, x in enumerate(q.word))
                assert sp.s_invariant(q) == s

    def test_range_check(self):
        with pytest.raises(cl.TransitError):
            cl.block_witness(4, -4)
        with pytest.raises(cl.TransitError):
            cl.block_witness(4, 4)


class TestJumpChains:
    def test_empty_chain(self):
        z = ce.lift_signed_perm(sp.make_m(3, -1))
        assert cl.spin_transit_chain(z, z) == []

    def test_all_pairs_within_three_jumps_m3(self):
        lifts = []
        for d in diagonals(3):
            z = ce.lift_signed_perm(d.to_perm())
            s = sum(d.signs)
            lifts.extend((s, e) for e in (z, ce.neg(z)))
        for s1, z1 in lifts:
            for s2, z2 in lifts:
                if s1 != s2 or abs(s1) == 3:
                    continue
                chain = cl.spin_transit_chain(z1, z2)
                assert len(chain) <= 3
                for x, witness, y in chain:
                    jump = {
                        sc.delta_spin(witness).key(),
                        sc.delta_spin(ce.tr_spin(witness)).key(),
                    }
                    assert {x.key(), y.key()} == jump or x.key() == y.key()

    def test_single_jump_insufficient_example(self):
        # Both lifts over diag(-1,-1,1) are same-s but not one jump apart.
        z = ce.lift_signed_perm(sp.make_m(3, -1))
        graph = cl.jump_graph(3)
        assert ce.neg(z).key() not in graph.adjacency.get(z.key(), ())
        chain = cl.spin_transit_chain(z, ce.neg(z))
        assert 2 <= len(chain) <= 3

    def test_center_unreachable(self):
        with pytest.raises(cl.TransitError):
            cl.spin_transit_chain(ce.one(3), ce.neg_one(3))
        # and the full jump closure never reaches the antipode
        graph = cl.jump_graph(3)
        seen = {ce.one(3).key()}
        frontier = [ce.one(3).key()]
        while frontier:
            nxt = []
            for node in frontier:
                for nbr in graph.adjacency.get(node, ()):
                    if nbr not in seen:
                        seen.add(nbr)
                        nxt.append(nbr)
            frontier = nxt
        assert ce.neg_one(3).key() not in seen

    def test_requires_diagonal_lifts(self):
        with pytest.raises(cl.TransitError):
            cl.spin_transit_chain(
                ce.lift_signed_perm(sp.SignedPermutation((2, -1, 3))), ce.one(3)
            )
