import mpmath
import numpy as np
import pytest
from scipy.linalg import expm, logm

from weylcurves import bruhat as br
from weylcurves import clifford_exact as ce
from weylcurves import signed_perm as sp
from weylcurves import spin_numeric as sn


class TestDecompose:
    def test_identity_on_representatives(self):
        for m in (2, 3):
            for q0 in sp.enumerate_d(m):
                mat = np.asarray(q0.matrix(), dtype=np.float64)
                factors = br.decompose(mat)
                assert factors.q0 == q0
                assert np.allclose(factors.u1, np.eye(m))
                assert np.allclose(factors.u2, np.eye(m))

    def test_roundtrip_random(self):
        rng = np.random.default_rng(0)
        for m in range(2, 7):
            for _ in range(100):
                q = br.random_so(m, rng)
                factors = br.decompose(q)
                assert factors.residual(q) < 1e-8
                assert factors.q0.in_d()
                assert np.all(np.diag(factors.u1) > 0)
                assert np.all(np.diag(factors.u2) > 0)
                assert np.allclose(np.tril(factors.u1, -1), 0)
                assert np.allclose(np.tril(factors.u2, -1), 0)

    def test_worked_germ_example(self):
        q = sp.SignedPermutation((2, -1, 3))
        log = np.array([[0.0, -1, 0], [1, 0, -1], [0, 1, 0]])
        germ = np.asarray(q.matrix(), float) @ expm(-1e-3 * log)
        factors = br.decompose(germ, pivot_floor=1e-12)
        assert factors.q0.word == (3, -2, 1)

    def test_uniqueness_under_triangular_perturbation(self):
        rng = np.random.default_rng(1)
        for _ in range(200):
            m = int(rng.integers(2, 7))
            q = br.random_so(m, rng)
            u = br.random_unipotent(m, rng)
            assert br.decompose(br.bruhat_action(u, q)).q0 == br.decompose(q).q0

    def test_rank_pattern_matches_cell(self):
        # The signless permutation is determined by ranks of lower-left
        # submatrices: an elimination-order-independence check.
        rng = np.random.default_rng(2)
        for _ in range(100):
            m = int(rng.integers(2, 7))
            q = br.random_so(m, rng)
            q0 = br.decompose(q).q0
            pattern = np.abs(np.asarray(q0.matrix()))
            for i in range(m):
                for j in range(m):
                    rank = np.linalg.matrix_rank(q[i:, : j + 1], tol=1e-9)
                    assert rank == int(pattern[i:, : j + 1].sum())

    def test_cell_boundary_error(self):
        with pytest.raises(br.CellBoundaryError):
            br.decompose(np.eye(3), pivot_floor=2.0)

    def test_object_dtype_elimination(self):
        with mpmath.workdps(40):
            q = sp.SignedPermutation((2, -1, 3))
            log = np.array(
                [[mpmath.mpf(x) for x in row]
                 for row in [[0, -1, 0], [1, 0, -1], [0, 1, 0]]],
                dtype=object,
            )
            h = mpmath.mpf("1e-6")
            germ = np.asarray(q.matrix(), dtype=object) @ _mp_expm(-h * log)
            factors = br.decompose(germ, pivot_floor=mpmath.mpf("1e-30"), check=False)
            assert factors.q0.word == (3, -2, 1)
            assert factors.residual(germ) < 1e-20

    def test_orthogonality_check(self):
        with pytest.raises(ValueError):
            br.decompose(np.eye(3) * 1.5)


def _mp_expm(mat):
    from weylcurves.curves import _mp_expm as impl

    return impl(mat)


class TestBruhatAction:
    def test_identity(self):
        rng = np.random.default_rng(3)
        q = br.random_so(4, rng)
        assert np.allclose(br.bruhat_action(np.eye(4), q), q)

    def test_result_orthogonal(self):
        rng = np.random.default_rng(4)
        for _ in range(100):
            m = int(rng.integers(2, 7))
            q = br.random_so(m, rng)
            u = br.random_unipotent(m, rng)
            b = br.bruhat_action(u, q)
            assert np.max(np.abs(b.T @ b - np.eye(m))) < 1e-8

    def test_composition_law(self):
        rng = np.random.default_rng(5)
        for _ in range(200):
            m = int(rng.integers(2, 7))
            q = br.random_so(m, rng)
            u1 = br.random_unipotent(m, rng)
            u2 = br.random_unipotent(m, rng)
            lhs = br.bruhat_action(u1 @ u2, q)
            rhs = br.bruhat_action(u1, br.bruhat_action(u2, q))
            assert np.max(np.abs(lhs - rhs)) < 1e-8


def lifted_random(m, rng):
    q = br.random_so(m, rng)
    log = logm(q).real
    times = np.linspace(0, 1, 64)
    frames = np.array([expm(t * log) for t in times])
    if np.max(np.abs(frames[-1] - q)) > 1e-8:
        return None
    return sn.lift_path(sn.FramePath(times, frames), sn.SpinNumeric.one(m)).lifts[-1]


class TestDecomposeSpin:
    def test_exact_representative_fixed(self):
        for z in (ce.w(3, -1), ce.neg(ce.w(3, -1)), ce.one(4), ce.w(4, 0)):
            assert br.decompose_spin(sn.SpinNumeric.from_exact(z)) == z

    def test_antipodal_consistency_d3(self):
        for z in ce.enumerate_tilde_d(3):
            num = sn.SpinNumeric.from_exact(z)
            rep = br.decompose_spin(num)
            assert rep == z  # representatives decompose to themselves
            assert br.decompose_spin(num.neg()) == ce.neg(z)

    def test_commutes_with_projection(self):
        rng = np.random.default_rng(6)
        done = 0
        while done < 25:
            m = int(rng.integers(2, 6))
            z = lifted_random(m, rng)
            if z is None:
                continue
            rep = br.decompose_spin(z)
            assert ce.pi(rep) == br.decompose(z.so_matrix()).q0
            assert br.decompose_spin(z.neg()) == ce.neg(rep)
            done += 1


class TestIO:
    def test_text_matrix(self):
        mat = br.parse_float_matrix("1 0\n0 1")
        assert np.allclose(mat, np.eye(2))
        with pytest.raises(ValueError):
            br.parse_float_matrix("1 0 0\n0 1 0")

    def test_json_roundtrip(self):
        rng = np.random.default_rng(7)
        q = br.random_so(3, rng)
        assert np.allclose(br.matrix_from_json(br.matrix_to_json(q)), q)
