# regqn/utils/densecore.py
"""
소형 밀집 대칭 선형대수
2m×2m 이하 대칭 (부정치) 시스템 풀이와 SR1 용 피벗 건너뛰기 삼각화
"""

from dataclasses import dataclass
from typing import List, Optional, Tuple, Union

import numpy as np
from scipy import linalg

from ..core.config import settings
from ..core.exceptions import AllSkipped, DimensionMismatch, SingularMatrix


@dataclass(frozen=True)
class SymMatrix:
    """대칭 행렬 래퍼 (order ≥ 1)"""

    entries: np.ndarray

    def __post_init__(self):
        arr = np.asarray(self.entries, dtype=float)
        if arr.ndim != 2 or arr.shape[0] != arr.shape[1] or arr.shape[0] < 1:
            raise DimensionMismatch(f"정사각 행렬이 아닙니다: shape={arr.shape}")
        if not np.array_equal(arr, arr.T):
            scale = max(1.0, float(np.max(np.abs(arr))))
            if not np.allclose(arr, arr.T, rtol=0.0, atol=1e-12 * scale):
                raise ValueError("대칭 행렬이 아닙니다")
            arr = 0.5 * (arr + arr.T)
        object.__setattr__(self, "entries", arr)

    @property
    def order(self) -> int:
        return self.entries.shape[0]


MatrixLike = Union[SymMatrix, np.ndarray]


def _as_array(M: MatrixLike) -> np.ndarray:
    if isinstance(M, SymMatrix):
        return M.entries
    return SymMatrix(M).entries


def _check_rhs(a: np.ndarray, rhs) -> np.ndarray:
    b = np.asarray(rhs, dtype=float)
    if b.ndim != 1 or b.shape[0] != a.shape[0]:
        raise DimensionMismatch(
            f"우변 길이 {b.shape} 가 행렬 차수 {a.shape[0]} 와 다릅니다"
        )
    return b


def pivot_scale(a: np.ndarray) -> float:
    """특이성 판정 기준 크기: 최대 대각 성분 (대각이 모두 0 이면 최대 성분)"""
    scale = float(np.max(np.abs(np.diag(a))))
    if scale == 0.0:
        scale = float(np.max(np.abs(a)))
    return scale


def sym_solve(M: MatrixLike, rhs, tol_pivot: Optional[float] = None) -> np.ndarray:
    """
    대칭 (부정치) 선형 시스템 풀이

    Bunch–Kaufman 피벗팅 LDLᵀ 분해(LAPACK sytrf)를 사용한다.

    Args:
        M: s×s 대칭 행렬
        rhs: 길이 s 우변
        tol_pivot: 상대 피벗 임계값 (기본값: settings.pivot_tol)

    Returns:
        np.ndarray: 해 x

    Raises:
        SingularMatrix: 1×1 피벗 또는 2×2 블록 고유값 크기가 임계값 이하인 경우
    """
    a = _as_array(M)
    b = _check_rhs(a, rhs)
    tol = settings.pivot_tol if tol_pivot is None else tol_pivot
    threshold = tol * pivot_scale(a)

    lu, d, perm = linalg.ldl(a, lower=True, hermitian=True)

    s = a.shape[0]
    i = 0
    while i < s:
        if i + 1 < s and d[i + 1, i] != 0.0:
            magnitude = float(np.min(np.abs(np.linalg.eigvalsh(d[i : i + 2, i : i + 2]))))
            width = 2
        else:
            magnitude = abs(float(d[i, i]))
            width = 1
        if not magnitude > threshold:
            raise SingularMatrix(magnitude, threshold, i)
        i += width

    # lu[perm] 는 단위 하삼각
    lower = lu[perm]
    z = linalg.solve_triangular(lower, b[perm], lower=True, unit_diagonal=True)
    w = linalg.solve(d, z, assume_a="sym")
    u = linalg.solve_triangular(lower, w, lower=True, trans="T", unit_diagonal=True)

    x = np.empty_like(u)
    x[perm] = u
    return x


def sym_solve_skipping(
    M: MatrixLike, rhs, tol: float
) -> Tuple[np.ndarray, List[int]]:
    """
    자연 순서 삼각화 중 사라지는 피벗을 건너뛰며 풀이

    인덱스 k 의 피벗 크기가 tol·max(1, 지금까지의 최대 대각 크기) 보다 작으면
    k 의 행/열을 제외하고 분해를 계속한다. 축소 시스템의 해를 건너뛴 위치에
    0 을 채워 반환한다.

    Args:
        M: s×s 대칭 행렬
        rhs: 길이 s 우변
        tol: 상대 피벗 임계값 (≥ 0)

    Returns:
        Tuple[np.ndarray, List[int]]: (해, 건너뛴 인덱스 목록)

    Raises:
        AllSkipped: 모든 인덱스가 건너뛰어진 경우
    """
    a = _as_array(M)
    b = _check_rhs(a, rhs)
    if tol < 0.0:
        raise ValueError("tol 은 음수일 수 없습니다")

    s = a.shape[0]
    work = a.copy()
    unit_lower = np.eye(s)
    pivots = np.zeros(s)
    skipped: List[int] = []
    diag_scale = 0.0

    for k in range(s):
        diag_scale = max(diag_scale, abs(float(a[k, k])))
        pivot = float(work[k, k])
        if pivot == 0.0 or abs(pivot) < tol * max(1.0, diag_scale):
            skipped.append(k)
            continue
        pivots[k] = pivot
        column = work[k + 1 :, k] / pivot
        unit_lower[k + 1 :, k] = column
        work[k + 1 :, k + 1 :] -= np.outer(column, work[k, k + 1 :])

    keep = [k for k in range(s) if k not in skipped]
    if not keep:
        raise AllSkipped(f"{s} 개 인덱스가 모두 건너뛰어졌습니다")

    reduced = unit_lower[np.ix_(keep, keep)]
    z = linalg.solve_triangular(reduced, b[keep], lower=True, unit_diagonal=True)
    u = linalg.solve_triangular(
        reduced, z / pivots[keep], lower=True, trans="T", unit_diagonal=True
    )

    x = np.zeros(s)
    x[keep] = u
    return x, skipped
