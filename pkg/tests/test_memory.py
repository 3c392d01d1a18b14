"""
(s, y) 저장소 테스트
push 예제, 조심스러운 거부, FIFO, 캐시 일관성, 계수 형태 갱신, 비용 장부
"""

import numpy as np
import pytest

from regqn.core.exceptions import DimensionMismatch, EmptyMemory
from regqn.models.memory import MemoryState
from regqn.schemas.solver import Scheme
from regqn.services.compact import bfgs_step, sr1_step
from regqn.utils.opcount import OpCounter

from .conftest import build_store, random_spd


def assert_caches_coherent(mem: MemoryState, g: np.ndarray, rtol: float = 1e-10):
    """캐시가 S, Y, g 로부터 직접 계산한 값과 일치하는지 확인"""
    S, Y = mem.S, mem.Y
    np.testing.assert_allclose(mem.gram_ss, S.T @ S, rtol=rtol, atol=1e-10)
    np.testing.assert_allclose(mem.gram_sy, S.T @ Y, rtol=rtol, atol=1e-10)
    np.testing.assert_allclose(mem.gram_yy, Y.T @ Y, rtol=rtol, atol=1e-10)
    np.testing.assert_allclose(mem.sg, S.T @ g, rtol=rtol, atol=1e-10)
    np.testing.assert_allclose(mem.yg, Y.T @ g, rtol=rtol, atol=1e-10)
    assert mem.gg == pytest.approx(float(g @ g), rel=rtol)


class TestPushExamples:
    """push_pair 예제"""

    def test_first_pair(self):
        mem = MemoryState(2, 3)
        assert mem.push_pair([1.0, 0.0], [2.0, 0.0], [0.5, 0.5])
        assert mem.cols == 1
        np.testing.assert_array_equal(mem.gram_ss, [[1.0]])
        np.testing.assert_array_equal(mem.gram_sy, [[2.0]])
        np.testing.assert_array_equal(mem.gram_yy, [[4.0]])
        assert mem.gamma == 2.0
        np.testing.assert_array_equal(mem.sg, [0.5])
        np.testing.assert_array_equal(mem.yg, [1.0])
        assert mem.gg == 0.5

    def test_second_pair_cross_terms(self):
        mem = MemoryState(2, 3)
        mem.push_pair([1.0, 0.0], [2.0, 0.0], [0.5, 0.5])
        mem.push_pair([0.0, 1.0], [1.0, 3.0], [0.0, 1.0])
        np.testing.assert_allclose(mem.gram_ss, np.eye(2))
        np.testing.assert_allclose(mem.gram_sy, [[2.0, 1.0], [0.0, 3.0]])
        np.testing.assert_allclose(mem.gram_yy, [[4.0, 2.0], [2.0, 10.0]])
        assert mem.gamma == pytest.approx(10.0 / 3.0)

    def test_cautious_rejection(self):
        mem = MemoryState(2, 3, Scheme.BFGS)
        assert not mem.push_pair([1.0, 0.0], [-1.0, 0.0], [0.3, 0.4])
        assert mem.cols == 0
        assert mem.gamma == 1.0
        assert mem.gg == pytest.approx(0.25)

    def test_sr1_store_keeps_negative_curvature(self):
        mem = MemoryState(2, 3, Scheme.SR1)
        assert mem.push_pair([1.0, 0.0], [-1.0, 0.0], [0.3, 0.4])
        assert mem.cols == 1
        assert mem.gamma == 1.0

    def test_zero_step_rejected(self):
        with pytest.raises(ValueError):
            MemoryState(2, 3).push_pair(np.zeros(2), np.ones(2), np.ones(2))

    def test_dimension_checked(self):
        with pytest.raises(DimensionMismatch):
            MemoryState(2, 3).push_pair(np.ones(3), np.ones(3), np.ones(3))

    def test_tiny_curvature_is_bit_identical_reject(self, rng):
        """yᵀs = 1e-10‖s‖² 는 거부되고 쌍 상태는 비트 단위로 그대로"""
        mem, g, _ = build_store(rng, 6, 3, Scheme.BFGS, pairs=2)
        before = mem.snapshot()
        s = rng.standard_normal(6)
        e = rng.standard_normal(6)
        e -= (e @ s) / (s @ s) * s
        y = e + 1e-10 * s
        g_new = rng.standard_normal(6)
        assert not mem.push_pair(s, y, g_new)
        after = mem.snapshot()
        for key, value in before.items():
            if isinstance(value, np.ndarray):
                assert np.array_equal(after[key], value), key
            else:
                assert after[key] == value
        assert_caches_coherent(mem, g_new)


class TestFifo:
    """가장 오래된 쌍부터 제거"""

    def test_oldest_dropped(self, rng):
        mem = MemoryState(4, 2)
        steps = [rng.standard_normal(4) for _ in range(3)]
        g = rng.standard_normal(4)
        mem.register_gradient(g)
        for s in steps:
            g_new = g + 2.0 * s
            mem.push_pair(s, g_new - g, g_new)
            g = g_new
        assert mem.cols == 2
        np.testing.assert_array_equal(mem.S[:, 0], steps[1])
        np.testing.assert_array_equal(mem.S[:, 1], steps[2])
        assert_caches_coherent(mem, g)


class TestCacheCoherence:
    """임의 push 순서 후 캐시 일관성"""

    @pytest.mark.parametrize("scheme", list(Scheme))
    def test_random_sequences(self, rng, scheme):
        for _ in range(10):
            mem, g, _ = build_store(rng, 7, 3, scheme, pairs=6)
            assert mem.cols == 3
            assert_caches_coherent(mem, g)

    def test_direct_cross_terms_when_y_is_not_gradient_difference(self, rng):
        mem = MemoryState(5, 3)
        H = random_spd(rng, 5)
        g = rng.standard_normal(5)
        for _ in range(4):
            s = rng.standard_normal(5)
            g = rng.standard_normal(5)
            mem.push_pair(s, H @ s, g)
        assert_caches_coherent(mem, g)

    def test_register_gradient(self, rng):
        mem, _, _ = build_store(rng, 5, 3, Scheme.BFGS)
        g = rng.standard_normal(5)
        mem.register_gradient(g)
        assert_caches_coherent(mem, g)


class TestStepCoefficientUpdate:
    """SMW 단계의 p 로 Sᵀs, Yᵀs 를 얻는 경로"""

    def test_matches_direct_update(self, rng):
        for mu in (0.0, 1e-3, 1.0, 100.0):
            seed = int(rng.integers(1 << 30))
            mem_a, g, H = build_store(np.random.default_rng(seed), 8, 4, Scheme.BFGS)
            mem_b, _, _ = build_store(np.random.default_rng(seed), 8, 4, Scheme.BFGS)
            step = bfgs_step(mem_a, g, mu)
            g_new = g + H @ step.d
            y = g_new - g
            mem_a.push_pair(step.d, y, g_new, p_prev=step.p, gamma_hat=step.gamma_hat)
            mem_b.push_pair(step.d, y, g_new)
            for key in ("gram_ss", "gram_sy", "gram_yy"):
                np.testing.assert_allclose(
                    getattr(mem_a, key), getattr(mem_b, key), rtol=1e-8, atol=1e-10
                )
            assert_caches_coherent(mem_a, g_new, rtol=1e-8)

    def test_p_prev_requires_gamma_hat(self, rng):
        mem, g, _ = build_store(rng, 4, 2, Scheme.BFGS)
        with pytest.raises(ValueError):
            mem.push_pair(np.ones(4), np.ones(4), g, p_prev=np.zeros(4))


class TestOperationCounts:
    """길이 n 곱셈 장부"""

    def test_push_with_step_coefficients(self, rng):
        n, m = 30, 4
        mem, g, H = build_store(rng, n, m, Scheme.BFGS)
        step = bfgs_step(mem, g, 1.0)
        g_new = g + H @ step.d
        gg = float(g_new @ g_new)
        mark = mem.ops.snapshot()
        mem.push_pair(
            step.d, g_new - g, g_new, p_prev=step.p, gamma_hat=step.gamma_hat,
            g_norm_sq=gg,
        )
        assert mem.ops.since(mark) <= 2 * m * n + 3 * n

    def test_full_successful_iteration(self, rng):
        n, m = 30, 4
        mem, g, H = build_store(rng, n, m, Scheme.BFGS)
        ops = mem.ops
        mark = ops.snapshot()
        step = bfgs_step(mem, g, 0.5)
        g_new = g + H @ step.d
        gg = ops.dot(g_new, g_new)
        mem.push_pair(
            step.d, g_new - g, g_new, p_prev=step.p, gamma_hat=step.gamma_hat,
            g_norm_sq=gg,
        )
        assert ops.since(mark) <= 4 * m * n + 5 * n

    def test_sr1_iteration_builds_matrix_once(self, rng):
        n, m = 30, 4
        mem, g, H = build_store(rng, n, m, Scheme.SR1)
        ops = mem.ops
        mark = ops.snapshot()
        step = sr1_step(mem, g, 0.5)
        g_new = g + H @ step.d
        gg = ops.dot(g_new, g_new)
        push_mark = ops.snapshot()
        mem.push_pair(
            step.d, g_new - g, g_new, p_prev=step.p, gamma_hat=step.gamma_hat,
            g_norm_sq=gg,
        )
        assert ops.since(push_mark) <= 2 * m * n + 3 * n
        assert ops.since(mark) <= 4 * m * n + 5 * n
        assert_caches_coherent(mem, g_new, rtol=1e-8)


class TestAssemble:
    """A 서술자 조립"""

    def test_empty_memory(self):
        with pytest.raises(EmptyMemory):
            MemoryState(3, 2).assemble_A_blocks()

    def test_bfgs_and_sr1_blocks(self):
        mem = MemoryState(2, 2, Scheme.SR1, ops=OpCounter())
        mem.register_gradient([1.0, 1.0])
        mem.push_pair([1.0, 0.0], [0.0, 1.0], [1.0, 2.0])
        assert mem.gamma == 1.0

        blocks = mem.assemble_A_blocks(Scheme.BFGS)
        assert blocks.width == 2
        np.testing.assert_allclose(blocks.ata, [[1.0, 0.0], [0.0, 1.0]])
        np.testing.assert_allclose(blocks.atg, [1.0, 2.0])

        sr1 = mem.assemble_A_blocks(Scheme.SR1)
        assert sr1.width == 1
        # A = y − s = (−1, 1)
        np.testing.assert_allclose(sr1.ata, [[2.0]])
        np.testing.assert_allclose(sr1.atg, [1.0])
        np.testing.assert_allclose(sr1.matvec(np.array([2.0])), [-2.0, 2.0])

    def test_assemble_is_free_of_length_n_work(self, rng):
        mem, _, _ = build_store(rng, 20, 3, Scheme.BFGS)
        mark = mem.ops.snapshot()
        mem.assemble_A_blocks()
        assert mem.ops.since(mark) == 0
