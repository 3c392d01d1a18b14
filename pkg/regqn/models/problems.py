# regqn/models/problems.py
"""
차원 확장 가능한 테스트 문제 모음
문제 이름 레지스트리와 "이름:차원" 명세 파싱
"""

from typing import Dict, List, Optional, Tuple, Type

import numpy as np

from ..core.exceptions import UnknownProblem
from ..utils.constants import Messages
from .problem import Problem


class ExtendedRosenbrock(Problem):
    """확장 Rosenbrock: 독립된 (x_{2i-1}, x_{2i}) 쌍의 합 (n 짝수)"""

    name = "extrosenbrock"
    min_dimension = 2
    dimension_multiple = 2

    def objective(self, x: np.ndarray) -> float:
        odd, even = x[0::2], x[1::2]
        return float(np.sum(100.0 * (even - odd**2) ** 2 + (1.0 - odd) ** 2))

    def gradient_of(self, x: np.ndarray) -> np.ndarray:
        odd, even = x[0::2], x[1::2]
        t = even - odd**2
        g = np.empty_like(x)
        g[0::2] = -400.0 * odd * t - 2.0 * (1.0 - odd)
        g[1::2] = 200.0 * t
        return g

    def initial_point(self) -> np.ndarray:
        return np.tile([-1.2, 1.0], self.n // 2)


class ChainedRosenbrock(Problem):
    """연쇄 Rosenbrock: Σ 100(x_{i+1} − x_i²)² + (1 − x_i)²"""

    name = "chainrosenbrock"
    min_dimension = 2

    def objective(self, x: np.ndarray) -> float:
        head, tail = x[:-1], x[1:]
        return float(np.sum(100.0 * (tail - head**2) ** 2 + (1.0 - head) ** 2))

    def gradient_of(self, x: np.ndarray) -> np.ndarray:
        head, tail = x[:-1], x[1:]
        t = tail - head**2
        g = np.zeros_like(x)
        g[:-1] += -400.0 * head * t - 2.0 * (1.0 - head)
        g[1:] += 200.0 * t
        return g

    def initial_point(self) -> np.ndarray:
        start = np.ones(self.n)
        start[0::2] = -1.2
        return start


class BroydenTridiagonal(Problem):
    """Broyden 삼중대각: r_i = (3 − 2x_i)x_i − x_{i−1} − 2x_{i+1} + 1 의 제곱합"""

    name = "broydentri"

    def _residual(self, x: np.ndarray) -> np.ndarray:
        padded = np.concatenate(([0.0], x, [0.0]))
        return (3.0 - 2.0 * x) * x - padded[:-2] - 2.0 * padded[2:] + 1.0

    def objective(self, x: np.ndarray) -> float:
        r = self._residual(x)
        return float(r @ r)

    def gradient_of(self, x: np.ndarray) -> np.ndarray:
        r = self._residual(x)
        # g = 2Jᵀr, J 는 (3 − 4x_i, −1, −2) 삼중대각
        jtr = (3.0 - 4.0 * x) * r
        jtr[:-1] -= r[1:]
        jtr[1:] -= 2.0 * r[:-1]
        return 2.0 * jtr

    def initial_point(self) -> np.ndarray:
        return -np.ones(self.n)


class ExtendedPowellSingular(Problem):
    """확장 Powell 특이 함수 (n 은 4 의 배수, 최소점에서 헤시안 특이)"""

    name = "extpowell"
    min_dimension = 4
    dimension_multiple = 4

    def objective(self, x: np.ndarray) -> float:
        x1, x2, x3, x4 = x[0::4], x[1::4], x[2::4], x[3::4]
        return float(
            np.sum(
                (x1 + 10.0 * x2) ** 2
                + 5.0 * (x3 - x4) ** 2
                + (x2 - 2.0 * x3) ** 4
                + 10.0 * (x1 - x4) ** 4
            )
        )

    def gradient_of(self, x: np.ndarray) -> np.ndarray:
        x1, x2, x3, x4 = x[0::4], x[1::4], x[2::4], x[3::4]
        a = x1 + 10.0 * x2
        b = x3 - x4
        c = (x2 - 2.0 * x3) ** 3
        e = (x1 - x4) ** 3
        g = np.empty_like(x)
        g[0::4] = 2.0 * a + 40.0 * e
        g[1::4] = 20.0 * a + 4.0 * c
        g[2::4] = 10.0 * b - 8.0 * c
        g[3::4] = -10.0 * b - 40.0 * e
        return g

    def initial_point(self) -> np.ndarray:
        return np.tile([3.0, -1.0, 0.0, 1.0], self.n // 4)


class Trigonometric(Problem):
    """삼각 함수: r_i = n − Σcos x_j + i(1 − cos x_i) − sin x_i 의 제곱합"""

    name = "trigonometric"

    def _residual(self, x: np.ndarray) -> np.ndarray:
        idx = np.arange(1, self.n + 1)
        cos_x = np.cos(x)
        return self.n - np.sum(cos_x) + idx * (1.0 - cos_x) - np.sin(x)

    def objective(self, x: np.ndarray) -> float:
        r = self._residual(x)
        return float(r @ r)

    def gradient_of(self, x: np.ndarray) -> np.ndarray:
        idx = np.arange(1, self.n + 1)
        r = self._residual(x)
        sin_x = np.sin(x)
        return 2.0 * sin_x * np.sum(r) + 2.0 * r * (idx * sin_x - np.cos(x))

    def initial_point(self) -> np.ndarray:
        return np.full(self.n, 1.0 / self.n)


class Raydan1(Problem):
    """Raydan 1: Σ (i/10)(e^{x_i} − x_i), 비이차 볼록"""

    name = "raydan1"

    def _weights(self) -> np.ndarray:
        return np.arange(1, self.n + 1) / 10.0

    def objective(self, x: np.ndarray) -> float:
        return float(self._weights() @ (np.exp(x) - x))

    def gradient_of(self, x: np.ndarray) -> np.ndarray:
        return self._weights() * (np.exp(x) - 1.0)

    def initial_point(self) -> np.ndarray:
        return np.ones(self.n)


class ConvexQuadratic(Problem):
    """
    볼록 이차 함수 f = ½ Σ d_i x_i²

    diagonal 을 주면 그대로 사용하고, condition 을 주면 1 부터 condition 까지
    로그 간격 대각을 사용한다. 둘 다 없으면 d_i = i.
    """

    name = "quadratic"

    def __init__(
        self,
        n: int,
        start_seed: int = 0,
        diagonal: Optional[np.ndarray] = None,
        condition: Optional[float] = None,
    ):
        super().__init__(n, start_seed)
        if diagonal is not None:
            diag = np.asarray(diagonal, dtype=float)
            if diag.shape != (n,) or np.any(diag <= 0.0):
                raise ValueError("diagonal 은 길이 n 의 양수 벡터여야 합니다")
        elif condition is not None:
            if condition < 1.0:
                raise ValueError("condition 은 1 이상이어야 합니다")
            diag = np.logspace(0.0, np.log10(condition), n)
        else:
            diag = np.arange(1, n + 1, dtype=float)
        self.diagonal = diag

    def objective(self, x: np.ndarray) -> float:
        return float(0.5 * (self.diagonal @ (x * x)))

    def gradient_of(self, x: np.ndarray) -> np.ndarray:
        return self.diagonal * x

    def initial_point(self) -> np.ndarray:
        return np.ones(self.n)


PROBLEM_REGISTRY: Dict[str, Type[Problem]] = {
    cls.name: cls
    for cls in (
        ExtendedRosenbrock,
        ChainedRosenbrock,
        BroydenTridiagonal,
        ExtendedPowellSingular,
        Trigonometric,
        Raydan1,
        ConvexQuadratic,
    )
}


def make_problem(name: str, n: int, start_seed: int = 0) -> Problem:
    """
    이름과 차원으로 문제 인스턴스 생성

    Raises:
        UnknownProblem: 등록되지 않은 이름
        InvalidDimension: 문제가 지원하지 않는 차원
    """
    cls = PROBLEM_REGISTRY.get(name.strip().lower())
    if cls is None:
        raise UnknownProblem(f"{Messages.UNKNOWN_PROBLEM}: {name}")
    return cls(n, start_seed=start_seed)


def parse_problem_specs(text: str, default_n: int) -> List[Tuple[str, int]]:
    """
    "extrosenbrock:1000,quadratic:10" 형식의 문제 명세 파싱

    차원이 생략된 항목은 default_n 을 사용하고, "all" 은 모든 등록 문제를
    default_n 차원으로 펼친다. 각 항목의 차원은 여기서 검증한다.

    Returns:
        List[Tuple[str, int]]: (이름, 차원) 목록 (입력 순서, 중복 제거)
    """
    specs: List[Tuple[str, int]] = []
    for token in (part.strip() for part in text.split(",")):
        if not token:
            continue
        name, _, dim = token.partition(":")
        name = name.strip().lower()
        try:
            n = int(dim) if dim else default_n
        except ValueError as exc:
            raise UnknownProblem(f"{Messages.UNKNOWN_PROBLEM}: {token}") from exc
        names = list(PROBLEM_REGISTRY) if name == "all" else [name]
        for item in names:
            cls = PROBLEM_REGISTRY.get(item)
            if cls is None:
                raise UnknownProblem(f"{Messages.UNKNOWN_PROBLEM}: {item}")
            cls.check_dimension(n)
            if (item, n) not in specs:
                specs.append((item, n))
    if not specs:
        raise UnknownProblem(Messages.EMPTY_PROBLEMS)
    return specs
