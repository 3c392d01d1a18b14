"""
소형 밀집 대칭 선형대수 테스트
sym_solve 와 sym_solve_skipping 의 예제 및 성질 검증
"""

import numpy as np
import pytest

from regqn.core.exceptions import AllSkipped, DimensionMismatch, SingularMatrix
from regqn.utils.densecore import SymMatrix, sym_solve, sym_solve_skipping

from .conftest import random_indefinite, random_spd


class TestSymMatrix:
    """대칭 행렬 래퍼"""

    def test_symmetrizes_within_tolerance(self):
        m = SymMatrix(np.array([[1.0, 2.0], [2.0 + 1e-15, 3.0]]))
        assert np.array_equal(m.entries, m.entries.T)
        assert m.order == 2

    def test_rejects_non_symmetric(self):
        with pytest.raises(ValueError):
            SymMatrix(np.array([[1.0, 2.0], [0.0, 1.0]]))

    def test_rejects_non_square(self):
        with pytest.raises(DimensionMismatch):
            SymMatrix(np.ones((2, 3)))


class TestSymSolve:
    """Bunch–Kaufman 기반 대칭 풀이"""

    def test_spd_example(self):
        x = sym_solve(np.array([[4.0, 1.0], [1.0, 3.0]]), [1.0, 2.0])
        np.testing.assert_allclose(x, [1.0 / 11.0, 7.0 / 11.0], rtol=1e-12)

    def test_indefinite_example(self):
        x = sym_solve(np.array([[0.0, 1.0], [1.0, 0.0]]), [2.0, 3.0])
        np.testing.assert_allclose(x, [3.0, 2.0], rtol=1e-12)

    def test_singular_raises(self):
        with pytest.raises(SingularMatrix) as info:
            sym_solve(np.array([[1.0, 1.0], [1.0, 1.0]]), [1.0, 0.0])
        assert info.value.pivot <= info.value.threshold

    def test_rhs_length_checked(self):
        with pytest.raises(DimensionMismatch):
            sym_solve(np.eye(3), [1.0, 2.0])

    @pytest.mark.parametrize("s", [1, 2, 5, 10])
    def test_recovers_solution_spd(self, rng, s):
        for _ in range(20):
            M = random_spd(rng, s)
            x_true = rng.standard_normal(s)
            x = sym_solve(M, M @ x_true)
            assert np.linalg.norm(x - x_true) <= 1e-10 * max(
                1.0, np.linalg.norm(x_true)
            )

    @pytest.mark.parametrize("s", [2, 4, 10])
    def test_recovers_solution_indefinite(self, rng, s):
        for _ in range(20):
            M = random_indefinite(rng, s)
            x_true = rng.standard_normal(s)
            x = sym_solve(M, M @ x_true)
            np.testing.assert_allclose(x, x_true, rtol=1e-9, atol=1e-9)

    def test_permutation_invariance(self, rng):
        """(PᵀMP)⁻¹Pᵀb = Pᵀ(M⁻¹b)"""
        s = 6
        M = random_indefinite(rng, s)
        b = rng.standard_normal(s)
        perm = rng.permutation(s)
        x = sym_solve(M, b)
        x_perm = sym_solve(M[np.ix_(perm, perm)], b[perm])
        np.testing.assert_allclose(x_perm, x[perm], rtol=1e-9, atol=1e-12)


class TestSymSolveSkipping:
    """피벗 건너뛰기 풀이"""

    def test_skips_zero_leading_pivot(self):
        x, skipped = sym_solve_skipping(
            np.array([[0.0, 0.0], [0.0, 1.0]]), [1.0, 1.0], tol=1e-8
        )
        np.testing.assert_allclose(x, [0.0, 1.0])
        assert skipped == [0]

    def test_all_skipped_raises(self):
        with pytest.raises(AllSkipped):
            sym_solve_skipping(np.zeros((3, 3)), np.ones(3), tol=1e-8)

    def test_negative_tol_rejected(self):
        with pytest.raises(ValueError):
            sym_solve_skipping(np.eye(2), np.ones(2), tol=-1.0)

    def test_zero_tol_matches_sym_solve(self, rng):
        """tol = 0 이고 자연 순서 피벗이 모두 0 이 아니면 sym_solve 와 같음"""
        for _ in range(20):
            M = random_spd(rng, 5)
            b = rng.standard_normal(5)
            x, skipped = sym_solve_skipping(M, b, tol=0.0)
            assert skipped == []
            np.testing.assert_allclose(x, sym_solve(M, b), rtol=1e-10, atol=1e-12)

    def test_skipped_entries_are_zero(self):
        M = np.array([[1.0, 0.0, 0.0], [0.0, 1e-20, 0.0], [0.0, 0.0, 2.0]])
        x, skipped = sym_solve_skipping(M, [1.0, 1.0, 1.0], tol=1e-8)
        assert skipped == [1]
        np.testing.assert_allclose(x, [1.0, 0.0, 0.5])
