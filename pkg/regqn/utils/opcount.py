# regqn/utils/opcount.py
"""
n 차원 곱셈 횟수 장부
S, Y, A 와의 행렬-벡터 곱 및 길이 n 내적만 집계
"""

from dataclasses import dataclass

import numpy as np


@dataclass
class OpCounter:
    """곱셈 횟수 집계기"""

    mults: int = 0

    def dot(self, a: np.ndarray, b: np.ndarray) -> float:
        """길이 n 내적 (n 회)"""
        self.mults += a.shape[0]
        return float(a @ b)

    def matvec(self, mat: np.ndarray, vec: np.ndarray) -> np.ndarray:
        """n×k 행렬과 k 벡터의 곱 (k·n 회)"""
        self.mults += mat.size
        return mat @ vec

    def rmatvec(self, mat: np.ndarray, vec: np.ndarray) -> np.ndarray:
        """n×k 행렬의 전치와 n 벡터의 곱 (k·n 회)"""
        self.mults += mat.size
        return mat.T @ vec

    def snapshot(self) -> int:
        return self.mults

    def since(self, mark: int) -> int:
        """기준 시점 이후 곱셈 횟수"""
        return self.mults - mark
