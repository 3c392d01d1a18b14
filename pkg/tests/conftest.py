# tests/conftest.py
"""
테스트 공용 픽스처와 도우미
무작위 저장소 생성, 1차원 포물선 문제, 가파른 벽 문제
"""

import numpy as np
import pytest

from regqn.models.memory import MemoryState
from regqn.models.problem import Problem
from regqn.schemas.solver import Scheme


class Parabola(Problem):
    """f(x) = Σ x_i² (선탐색 스칼라 예제용)"""

    name = "parabola"

    def __init__(self, n: int = 1, start: float = 1.0):
        super().__init__(n)
        self.start = start

    def objective(self, x):
        return float(x @ x)

    def gradient_of(self, x):
        return 2.0 * x

    def initial_point(self):
        return np.full(self.n, self.start)


class SteepWall(Problem):
    """f(x) = cᵀx + K‖x‖², 큰 K 에서 짧지 않은 모든 단계가 거부됨"""

    name = "steepwall"

    def __init__(self, n: int = 3, wall: float = 1e20):
        super().__init__(n)
        self.c = np.arange(1.0, n + 1.0)
        self.wall = wall

    def objective(self, x):
        return float(self.c @ x + self.wall * (x @ x))

    def gradient_of(self, x):
        return self.c + 2.0 * self.wall * x

    def initial_point(self):
        return np.zeros(self.n)


def random_spd(rng, n, low=1.0, high=10.0):
    """고유값이 [low, high] 인 무작위 대칭 양정치 행렬"""
    q, _ = np.linalg.qr(rng.standard_normal((n, n)))
    return (q * rng.uniform(low, high, size=n)) @ q.T


def random_indefinite(rng, n):
    """고유값 크기가 [1, 5] 인 무작위 대칭 부정치 행렬"""
    q, _ = np.linalg.qr(rng.standard_normal((n, n)))
    signs = np.where(np.arange(n) % 2 == 0, 1.0, -1.0)
    return (q * (signs * rng.uniform(1.0, 5.0, size=n))) @ q.T


def build_store(rng, n, m, scheme, pairs=None, hessian=None):
    """
    무작위 곡률 행렬 H 에 대해 y = H s 쌍을 push 한 저장소

    y 는 g_new − g 로 다시 계산하여 w 곱 경로를 그대로 사용한다.

    Returns:
        (MemoryState, 마지막 그래디언트 g, H)
    """
    scheme = Scheme(scheme)
    if hessian is None:
        hessian = (
            random_indefinite(rng, n) if scheme is Scheme.SR1 else random_spd(rng, n)
        )
    mem = MemoryState(n, m, scheme)
    g = rng.standard_normal(n)
    mem.register_gradient(g)
    for _ in range(m if pairs is None else pairs):
        s = rng.standard_normal(n)
        g_new = g + hessian @ s
        y = g_new - g
        mem.push_pair(s, y, g_new)
        g = g_new
    return mem, g, hessian


def rel_err(a, b):
    """상대 오차 ‖a − b‖ / max(1, ‖b‖)"""
    return float(np.linalg.norm(np.asarray(a) - np.asarray(b)) / max(1.0, np.linalg.norm(b)))


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)
