"""
선탐색 테스트
Armijo 역추적, Moré–Thuente, 초기 정규화 기울기 탐색
"""

import numpy as np
import pytest

from regqn.core.exceptions import NotDescent
from regqn.models.problems import ConvexQuadratic, ExtendedRosenbrock, Raydan1
from regqn.services.linesearch import (
    armijo_backtrack,
    initial_seed_search,
    more_thuente,
)

from .conftest import Parabola


class TestArmijo:
    """Armijo 역추적"""

    def test_full_step_accepted(self):
        p = Parabola()
        out = armijo_backtrack(p, np.array([1.0]), np.array([-1.0]), 1.0, -2.0)
        assert out.converged
        assert out.t == 1.0
        assert out.f_new == 0.0
        assert out.fevals == 1
        assert out.g_new is None

    def test_halving(self):
        p = Parabola()
        out = armijo_backtrack(p, np.array([1.0]), np.array([-4.0]), 1.0, -8.0)
        assert out.converged
        assert out.t == 0.25
        assert out.fevals == 3
        np.testing.assert_allclose(out.x_new, [0.0])

    def test_not_descent(self):
        with pytest.raises(NotDescent):
            armijo_backtrack(Parabola(), np.array([1.0]), np.array([1.0]), 1.0, 2.0)

    def test_fails_below_minimum_step(self):
        p = Parabola()
        out = armijo_backtrack(
            p, np.array([1.0]), np.array([-1.0]), -1.0, -2.0, t_min=1e-3
        )
        assert not out.converged
        assert out.fevals == 10
        assert out.fevals == p.feval_count
        assert p.geval_count == 0

    def test_non_finite_trial_backtracks(self):
        p = Raydan1(1)
        x = np.array([0.0])
        with np.errstate(over="ignore"):
            out = armijo_backtrack(p, x, np.array([2000.0]), p.objective(x), -1.0)
        # 방향 미분을 속였으므로 유한한 시험점까지 줄어들기만 확인
        assert out.t < 1.0
        assert np.isfinite(out.f_new)


class TestMoreThuente:
    """강한 Wolfe 탐색"""

    def test_exact_minimizer_at_unit_step(self):
        p = Parabola()
        out = more_thuente(p, np.array([1.0]), np.array([-1.0]), 1.0, -2.0)
        assert out.converged
        assert out.t == 1.0
        assert out.fevals == 1
        np.testing.assert_allclose(out.g_new, [0.0])

    def test_overshoot_satisfies_strong_wolfe(self):
        p = Parabola()
        d = np.array([-4.0])
        out = more_thuente(p, np.array([1.0]), d, 1.0, -8.0)
        assert out.converged
        assert out.f_new <= 1.0 + 1e-4 * out.t * -8.0
        assert abs(float(out.g_new @ d)) <= 0.9 * 8.0
        assert out.fevals == p.feval_count == p.geval_count

    def test_not_descent(self):
        with pytest.raises(NotDescent):
            more_thuente(Parabola(), np.array([1.0]), np.array([1.0]), 1.0, 0.0)

    def test_curvature_pair_is_positive(self):
        p = ExtendedRosenbrock(2)
        x = p.x0
        f, g = p.evaluate(x)
        d = -g / np.linalg.norm(g)
        out = more_thuente(p, x, d, f, float(g @ d))
        assert out.converged
        s = out.x_new - x
        y = out.g_new - g
        assert float(y @ s) > 0.0

    def test_reference_value_relaxes_decrease_test(self):
        """f_ref > f(x) 이면 단조 기준보다 같거나 큰 단계가 허용됨"""
        p = ExtendedRosenbrock(2)
        x = p.x0
        f, g = p.evaluate(x)
        d = -g
        mono = more_thuente(p, x, d, f, float(g @ d))
        relaxed = more_thuente(p, x, d, f + 100.0, float(g @ d), f0=f)
        assert relaxed.converged
        assert relaxed.f_new <= f + 100.0 + 1e-4 * relaxed.t * float(g @ d)
        assert mono.converged


class TestSeedSearch:
    """초기 정규화 기울기 탐색"""

    def test_unit_step_on_identity_quadratic(self):
        p = ConvexQuadratic(2, diagonal=np.ones(2))
        seed = initial_seed_search(p, np.array([3.0, 4.0]))
        assert seed.t == 1.0
        np.testing.assert_allclose(seed.x1, [2.4, 3.2])
        np.testing.assert_allclose(seed.s0, [-0.6, -0.8])
        np.testing.assert_allclose(seed.y0, [-0.6, -0.8])
        assert seed.fevals == 2
        x1, s0, y0 = seed
        assert float(y0 @ s0) > 0.0

    def test_reuses_given_evaluation(self):
        p = ConvexQuadratic(2, diagonal=np.ones(2))
        x0 = np.array([3.0, 4.0])
        f0, g0 = p.evaluate(x0)
        seed = initial_seed_search(p, x0, f0, g0)
        assert seed.fevals == 1

    def test_stationary_start(self):
        p = ConvexQuadratic(2)
        with pytest.raises(ValueError):
            initial_seed_search(p, np.zeros(2))

    @pytest.mark.parametrize("n", [2, 10])
    def test_positive_curvature_on_rosenbrock(self, n):
        p = ExtendedRosenbrock(n)
        seed = initial_seed_search(p, p.x0)
        assert float(seed.y0 @ seed.s0) > 0.0
        assert seed.f1 < p.objective(p.x0)
