# regqn/models/problem.py
"""
미분 가능한 테스트 문제 기반 모델
목적 함수/그래디언트 평가와 평가 횟수 집계
"""

from abc import ABC, abstractmethod
from typing import Tuple

import numpy as np

from ..core.exceptions import DimensionMismatch, InvalidDimension, NonFiniteValue
from ..utils.constants import Messages


class Problem(ABC):
    """
    테스트 문제 기반 클래스

    하위 클래스는 objective / gradient_of / initial_point 만 구현한다.
    value / gradient / evaluate 는 카운터를 올리는 공개 진입점이다.
    """

    name: str = "problem"
    min_dimension: int = 1
    dimension_multiple: int = 1

    def __init__(self, n: int, start_seed: int = 0):
        self.check_dimension(n)
        self.n = n
        self.start_seed = start_seed
        self.feval_count = 0
        self.geval_count = 0

    @classmethod
    def check_dimension(cls, n: int) -> None:
        """지원 차원 검증"""
        if n < cls.min_dimension or n % cls.dimension_multiple != 0:
            raise InvalidDimension(
                f"{cls.name}: n={n} 은 지원되지 않습니다 "
                f"(n ≥ {cls.min_dimension}, {cls.dimension_multiple} 의 배수)"
            )

    @abstractmethod
    def objective(self, x: np.ndarray) -> float:
        """목적 함수 값 (카운터 미집계)"""

    @abstractmethod
    def gradient_of(self, x: np.ndarray) -> np.ndarray:
        """해석적 그래디언트 (카운터 미집계)"""

    @abstractmethod
    def initial_point(self) -> np.ndarray:
        """문헌 표준 초기점"""

    @property
    def x0(self) -> np.ndarray:
        """
        실행 초기점

        start_seed 가 0 이면 문헌 표준 초기점, 그 외에는 시드로 재현 가능한
        상대 크기 0.1 의 균등 섭동을 더한 점
        """
        start = self.initial_point()
        if self.start_seed == 0:
            return start
        rng = np.random.default_rng(self.start_seed)
        scale = 0.1 * np.maximum(1.0, np.abs(start))
        return start + scale * rng.uniform(-1.0, 1.0, size=self.n)

    def _check_point(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        if x.shape != (self.n,):
            raise DimensionMismatch(
                f"{Messages.DIMENSION_MISMATCH}: {x.shape} != ({self.n},)"
            )
        return x

    def value(self, x) -> float:
        """목적 함수 값만 평가 (feval_count + 1)"""
        x = self._check_point(x)
        self.feval_count += 1
        f = float(self.objective(x))
        if not np.isfinite(f):
            raise NonFiniteValue(f"{Messages.NON_FINITE}: {self.name} f={f}")
        return f

    def gradient(self, x) -> np.ndarray:
        """그래디언트만 평가 (geval_count + 1)"""
        x = self._check_point(x)
        self.geval_count += 1
        g = np.asarray(self.gradient_of(x), dtype=float)
        if not np.all(np.isfinite(g)):
            raise NonFiniteValue(f"{self.name}: 그래디언트가 유한하지 않습니다")
        return g

    def evaluate(self, x) -> Tuple[float, np.ndarray]:
        """
        목적 함수와 그래디언트 동시 평가

        Returns:
            Tuple[float, np.ndarray]: (f, g), 두 카운터 모두 1 증가
        """
        return self.value(x), self.gradient(x)

    def grad_check(self, x, h: float = 1e-6) -> float:
        """
        중앙 차분 그래디언트 검사 (카운터 미집계)

        Args:
            x: 검사 지점
            h: 차분 간격 (> 0)

        Returns:
            float: max_i |g_i − fd_i| / max(1, |g_i|)
        """
        if h <= 0.0:
            raise ValueError("h 는 양수여야 합니다")
        x = self._check_point(x)
        g = np.asarray(self.gradient_of(x), dtype=float)
        fd = np.empty(self.n)
        point = x.copy()
        for i in range(self.n):
            point[i] = x[i] + h
            f_plus = self.objective(point)
            point[i] = x[i] - h
            f_minus = self.objective(point)
            point[i] = x[i]
            fd[i] = (f_plus - f_minus) / (2.0 * h)
        return float(np.max(np.abs(g - fd) / np.maximum(1.0, np.abs(g))))

    def reset_counters(self) -> None:
        self.feval_count = 0
        self.geval_count = 0

    def __repr__(self):
        return f"<{type(self).__name__}(n={self.n}, fevals={self.feval_count})>"
