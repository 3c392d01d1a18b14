# regqn/models/memory.py
"""
제한 메모리 (s, y) 쌍 저장소
Gram 블록 / 그래디언트 곱 캐시의 블록 단위 갱신과 조심스러운 갱신 규칙
"""

from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from ..core.exceptions import DimensionMismatch, EmptyMemory
from ..schemas.solver import Scheme
from ..utils.constants import CAUTIOUS_EPS, DEFAULT_GAMMA, Messages
from ..utils.opcount import OpCounter


@dataclass
class ABlocks:
    """
    압축 표현의 A 행렬 서술자

    ata / atg 는 캐시에서만 조립되며, A 와의 곱은 matvec 으로만 수행한다.
    """

    scheme: Scheme
    cols: int
    gamma: float
    ata: np.ndarray
    atg: np.ndarray
    memory: "MemoryState"

    @property
    def width(self) -> int:
        """A 의 열 수 (BFGS/PSB 는 2·cols, SR1 은 cols)"""
        return self.atg.shape[0]

    def matvec(self, p: np.ndarray) -> np.ndarray:
        """A·p (BFGS/PSB 2·cols·n 회, SR1 cols·n 회)"""
        mem = self.memory
        ops = mem.ops
        if self.scheme is Scheme.SR1:
            return ops.matvec(mem.sr1_matrix(self.gamma), p)
        return ops.matvec(mem.S, p[: self.cols]) + ops.matvec(mem.Y, p[self.cols :])


class MemoryState:
    """
    최근 m 개 수용 쌍 저장소

    gram_ss = SᵀS, gram_sy = SᵀY, gram_yy = YᵀY 와 sg = Sᵀg, yg = Yᵀg, gg = gᵀg
    를 마지막으로 등록된 그래디언트 g 에 대해 유지한다. 열은 오래된 순서이다.
    """

    def __init__(
        self,
        n: int,
        m_max: int,
        scheme: Scheme = Scheme.BFGS,
        eps: float = CAUTIOUS_EPS,
        ops: Optional[OpCounter] = None,
    ):
        if n < 1 or m_max < 1:
            raise ValueError("n, m_max 는 1 이상이어야 합니다")
        self.n = n
        self.m_max = m_max
        self.scheme = Scheme(scheme)
        self.eps = eps
        self.ops = ops if ops is not None else OpCounter()

        self.S = np.empty((n, 0))
        self.Y = np.empty((n, 0))
        self.gram_ss = np.empty((0, 0))
        self.gram_sy = np.empty((0, 0))
        self.gram_yy = np.empty((0, 0))
        self.sg = np.empty(0)
        self.yg = np.empty(0)
        self.gg = 0.0
        self.gamma = DEFAULT_GAMMA

        self._g_last: Optional[np.ndarray] = None
        self._sr1_a: Optional[np.ndarray] = None
        self._sr1_gamma: Optional[float] = None

    @property
    def cols(self) -> int:
        return self.S.shape[1]

    def __repr__(self):
        return (
            f"<MemoryState(scheme={self.scheme.value}, cols={self.cols}/{self.m_max}, "
            f"gamma={self.gamma:.3e})>"
        )

    def _check_vector(self, v, label: str) -> np.ndarray:
        arr = np.asarray(v, dtype=float)
        if arr.shape != (self.n,):
            raise DimensionMismatch(
                f"{Messages.DIMENSION_MISMATCH}: {label} {arr.shape} != ({self.n},)"
            )
        return arr

    def register_gradient(self, g, g_norm_sq: Optional[float] = None) -> None:
        """
        그래디언트 캐시 갱신 (sg, yg, gg)

        Args:
            g: 새 그래디언트
            g_norm_sq: 호출자가 이미 계산한 ‖g‖² (없으면 여기서 계산)
        """
        g = self._check_vector(g, "g")
        self.sg = self.ops.rmatvec(self.S, g)
        self.yg = self.ops.rmatvec(self.Y, g)
        self.gg = self.ops.dot(g, g) if g_norm_sq is None else float(g_norm_sq)
        self._g_last = g

    def sr1_matrix(self, gamma: Optional[float] = None) -> np.ndarray:
        """
        SR1 의 A = Y − γS

        현재 γ 에 대한 행렬은 처음 요청될 때 만들고 (cols·n 회) 다음 push 까지
        재사용한다.
        """
        gamma = self.gamma if gamma is None else gamma
        if self._sr1_a is not None and self._sr1_gamma == gamma:
            return self._sr1_a
        self.ops.mults += self.S.size
        a = self.Y - gamma * self.S
        if gamma == self.gamma:
            self._sr1_a, self._sr1_gamma = a, gamma
        return a

    def _a_coefficients(self, scheme: Scheme, gamma: float) -> Tuple[np.ndarray, np.ndarray]:
        """SᵀA, YᵀA 를 캐시에서 조립"""
        if scheme is Scheme.SR1:
            return (
                self.gram_sy - gamma * self.gram_ss,
                self.gram_yy - gamma * self.gram_sy.T,
            )
        return (
            np.hstack([self.gram_ss, self.gram_sy]),
            np.hstack([self.gram_sy.T, self.gram_yy]),
        )

    def assemble_A_blocks(self, scheme: Optional[Scheme] = None) -> ABlocks:
        """
        A 서술자와 AᵀA, Aᵀg 를 캐시에서 조립 (길이 n 연산 없음)

        Args:
            scheme: 조립 방식 (기본값: 저장소 방식)

        Raises:
            EmptyMemory: 저장된 쌍이 없는 경우
        """
        if self.cols == 0:
            raise EmptyMemory(Messages.EMPTY_MEMORY)
        scheme = self.scheme if scheme is None else Scheme(scheme)
        gamma = self.gamma

        if scheme is Scheme.SR1:
            cross = self.gram_sy + self.gram_sy.T
            ata = self.gram_yy - gamma * cross + gamma**2 * self.gram_ss
            atg = self.yg - gamma * self.sg
        else:
            ata = np.block(
                [[self.gram_ss, self.gram_sy], [self.gram_sy.T, self.gram_yy]]
            )
            atg = np.concatenate([self.sg, self.yg])

        return ABlocks(
            scheme=scheme,
            cols=self.cols,
            gamma=gamma,
            ata=0.5 * (ata + ata.T),
            atg=atg,
            memory=self,
        )

    def push_pair(
        self,
        s,
        y,
        g_new,
        p_prev: Optional[np.ndarray] = None,
        gamma_hat: Optional[float] = None,
        g_norm_sq: Optional[float] = None,
    ) -> bool:
        """
        새 (s, y) 쌍 추가

        Args:
            s: 단계 x_{k+1} − x_k
            y: 그래디언트 차이 g_new − g_k
            g_new: 새 그래디언트
            p_prev: s 가 현재 저장소의 SMW 단계 d = −γ̂⁻¹g + γ̂⁻²Ap 일 때의 내부 해 p
            gamma_hat: 그 단계의 γ + μ
            g_norm_sq: 호출자가 계산한 ‖g_new‖²

        Returns:
            bool: 쌍이 저장되었는지 여부 (BFGS 계열은 조심스러운 규칙 위반 시 False)
        """
        s = self._check_vector(s, "s")
        y = self._check_vector(y, "y")
        g_new = self._check_vector(g_new, "g_new")

        ss = self.ops.dot(s, s)
        if ss == 0.0:
            raise ValueError("s 는 0 벡터일 수 없습니다")
        sy = self.ops.dot(s, y)
        curvature_ok = sy > 0.0 and sy >= self.eps * ss

        if not curvature_ok and self.scheme.requires_positive_curvature:
            # 쌍은 버리고 그래디언트 캐시만 갱신
            self.register_gradient(g_new, g_norm_sq)
            return False

        yy = self.ops.dot(y, y)
        cols = self.cols
        keep = np.arange(1 if cols == self.m_max else 0, cols)

        if cols == 0:
            v_s = v_y = np.empty(0)
        elif p_prev is not None:
            if gamma_hat is None:
                raise ValueError("p_prev 를 주면 gamma_hat 도 필요합니다")
            # Sᵀs, Yᵀs 를 계수 형태 −γ̂⁻¹(·ᵀg) + γ̂⁻²(·ᵀA)p 로 계산
            coef_s, coef_y = self._a_coefficients(self.scheme, self.gamma)
            p = np.asarray(p_prev, dtype=float)
            v_s = (-self.sg + coef_s @ p / gamma_hat) / gamma_hat
            v_y = (-self.yg + coef_y @ p / gamma_hat) / gamma_hat
            v_s, v_y = v_s[keep], v_y[keep]
        else:
            v_s = self.ops.rmatvec(self.S[:, keep], s)
            v_y = self.ops.rmatvec(self.Y[:, keep], s)

        # Y 열과 새 y 의 교차항은 y = g_new − g_old 일 때 w 로부터 얻는다
        w_trick = self._g_last is not None and np.array_equal(
            y, g_new - self._g_last
        )
        sg_old, yg_old = self.sg[keep], self.yg[keep]
        if not w_trick:
            s_y_new = self.ops.rmatvec(self.S[:, keep], y)
            y_y_new = self.ops.rmatvec(self.Y[:, keep], y)

        self.S = np.column_stack([self.S[:, keep], s])
        self.Y = np.column_stack([self.Y[:, keep], y])

        # w = A_newᵀ g_new
        self.sg = self.ops.rmatvec(self.S, g_new)
        self.yg = self.ops.rmatvec(self.Y, g_new)
        self.gg = self.ops.dot(g_new, g_new) if g_norm_sq is None else float(g_norm_sq)
        self._g_last = g_new

        if w_trick:
            s_y_new = self.sg[:-1] - sg_old
            y_y_new = self.yg[:-1] - yg_old

        k = keep.shape[0]
        block = np.ix_(keep, keep)
        self.gram_ss = self._grown(self.gram_ss[block], v_s, v_s, ss, k)
        self.gram_sy = self._grown(self.gram_sy[block], s_y_new, v_y, sy, k)
        self.gram_yy = self._grown(self.gram_yy[block], y_y_new, y_y_new, yy, k)

        if curvature_ok:
            self.gamma = yy / sy

        # SR1 행렬 캐시 무효화
        self._sr1_a = None
        return True

    @staticmethod
    def _grown(
        kept: np.ndarray, column: np.ndarray, row: np.ndarray, corner: float, k: int
    ) -> np.ndarray:
        """[[kept, column], [row, corner]] 블록 행렬"""
        grown = np.empty((k + 1, k + 1))
        grown[:k, :k] = kept
        grown[:k, k] = column
        grown[k, :k] = row
        grown[k, k] = corner
        return grown

    def snapshot(self) -> dict:
        """저장소 상태 복사본 (테스트 비교용)"""
        return {
            "S": self.S.copy(),
            "Y": self.Y.copy(),
            "gram_ss": self.gram_ss.copy(),
            "gram_sy": self.gram_sy.copy(),
            "gram_yy": self.gram_yy.copy(),
            "gamma": self.gamma,
        }
