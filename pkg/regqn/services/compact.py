# regqn/services/compact.py
"""
압축 표현 기반 정규화 단계 계산
BFGS / SR1 / PSB 의 SMW 단계, 정규화 할선 two-loop 단계, 밀집 검증용 오라클
"""

from dataclasses import dataclass, field
from typing import Iterable, List

import numpy as np
from scipy import linalg

from ..core.config import settings
from ..core.exceptions import AllSkipped, BreakdownDenominator, SingularMatrix
from ..models.memory import MemoryState
from ..schemas.solver import Scheme
from ..utils.constants import NORM_CANCELLATION_TOL, SR1_BREAKDOWN_TOL, Messages
from ..utils.densecore import SymMatrix, sym_solve, sym_solve_skipping


@dataclass(frozen=True)
class StepResult:
    """정규화 준뉴턴 방정식 (B + μI)d = −g 의 풀이 결과"""

    d: np.ndarray
    p: np.ndarray
    pred: float
    solvable: bool
    gamma_hat: float
    d_norm: float = 0.0
    g_dot_d: float = 0.0
    skipped: List[int] = field(default_factory=list)


def pred(d: np.ndarray, g: np.ndarray, mu: float) -> float:
    """예측 감소량 (μ/2)‖d‖² − ½gᵀd (B 를 사용하지 않음)"""
    d = np.asarray(d, dtype=float)
    g = np.asarray(g, dtype=float)
    return 0.5 * mu * float(d @ d) - 0.5 * float(g @ d)


def _check_mu(mem: MemoryState, mu: float) -> float:
    if mu < 0.0:
        raise ValueError(f"mu 는 음수일 수 없습니다: {mu}")
    gamma_hat = mem.gamma + mu
    if not gamma_hat > 0.0:
        raise ValueError(f"gamma + mu 는 양수여야 합니다: {gamma_hat}")
    return gamma_hat


def _scaled_gradient_step(
    mem: MemoryState, g: np.ndarray, mu: float, gamma_hat: float, skipped=()
) -> StepResult:
    """B = γI 일 때의 단계 d = −g/(γ + μ)"""
    d = -g / gamma_hat
    g_dot_d = -mem.gg / gamma_hat
    dd = mem.gg / gamma_hat**2
    return StepResult(
        d=d,
        p=np.empty(0),
        pred=0.5 * mu * dd - 0.5 * g_dot_d,
        solvable=True,
        gamma_hat=gamma_hat,
        d_norm=float(np.sqrt(dd)),
        g_dot_d=g_dot_d,
        skipped=list(skipped),
    )


def _unsolvable(mem: MemoryState, gamma_hat: float) -> StepResult:
    return StepResult(
        d=np.zeros(mem.n), p=np.empty(0), pred=0.0, solvable=False, gamma_hat=gamma_hat
    )


def bfgs_middle(mem: MemoryState) -> np.ndarray:
    """L-BFGS 중간 행렬 Q = [[−γ⁻¹SᵀS, −γ⁻¹L], [−γ⁻¹Lᵀ, D]]"""
    gamma = mem.gamma
    lower = np.tril(mem.gram_sy, -1)
    return np.block(
        [
            [-mem.gram_ss / gamma, -lower / gamma],
            [-lower.T / gamma, np.diag(np.diag(mem.gram_sy))],
        ]
    )


def sr1_middle(mem: MemoryState) -> np.ndarray:
    """L-SR1 중간 행렬 Q = D + L + Lᵀ − γSᵀS"""
    lower = np.tril(mem.gram_sy, -1)
    return (
        np.diag(np.diag(mem.gram_sy)) + lower + lower.T - mem.gamma * mem.gram_ss
    )


def psb_middle(mem: MemoryState) -> np.ndarray:
    """
    L-PSB 중간 행렬 (A = [S, Y])

    Q = [[0, U], [Uᵀ, D(SᵀY) + γD(SᵀS) + L(SᵀY) + L(SᵀY)ᵀ]],
    U 는 SᵀS 의 대각 포함 상삼각
    """
    upper = np.triu(mem.gram_ss)
    lower = np.tril(mem.gram_sy, -1)
    corner = (
        np.diag(np.diag(mem.gram_sy) + mem.gamma * np.diag(mem.gram_ss))
        + lower
        + lower.T
    )
    return np.block([[np.zeros_like(upper), upper], [upper.T, corner]])


MIDDLE_BUILDERS = {
    Scheme.BFGS: bfgs_middle,
    Scheme.BFGS_SECANT: bfgs_middle,
    Scheme.SR1: sr1_middle,
    Scheme.PSB: psb_middle,
}


def _smw_step(mem: MemoryState, g, mu: float, scheme: Scheme) -> StepResult:
    """
    SMW 로 d = −γ̂⁻¹g + γ̂⁻²Ap, p = (Q + γ̂⁻¹AᵀA)⁻¹Aᵀg 계산

    ‖d‖², gᵀd 는 캐시된 소형 양으로부터 계산하므로 길이 n 연산은 A·p 한 번뿐이다.
    ‖d‖² 가 소거로 유효 자릿수를 잃은 경우에만 d 로부터 다시 계산한다.
    g 는 mem 에 마지막으로 등록된 그래디언트여야 한다.
    """
    g = np.asarray(g, dtype=float)
    gamma_hat = _check_mu(mem, mu)
    if mem.cols == 0:
        return _scaled_gradient_step(mem, g, mu, gamma_hat)

    blocks = mem.assemble_A_blocks(scheme)
    inner = MIDDLE_BUILDERS[scheme](mem) + blocks.ata / gamma_hat
    if not np.all(np.isfinite(inner)):
        return _unsolvable(mem, gamma_hat)

    # A 의 열 노름으로 대칭 스케일링
    col = np.sqrt(np.abs(np.diag(blocks.ata)))
    col[col == 0.0] = 1.0
    scaled = inner / np.outer(col, col)
    rhs = blocks.atg / col

    skipped: List[int] = []
    try:
        if scheme is Scheme.SR1:
            p, skipped = sym_solve_skipping(
                SymMatrix(scaled), rhs, settings.sr1_skip_tol
            )
        else:
            p = sym_solve(SymMatrix(scaled), rhs)
        p = p / col
    except AllSkipped:
        return _scaled_gradient_step(
            mem, g, mu, gamma_hat, skipped=range(blocks.cols)
        )
    except SingularMatrix:
        return _unsolvable(mem, gamma_hat)

    if not np.all(np.isfinite(p)):
        return _unsolvable(mem, gamma_hat)

    ap = blocks.matvec(p)
    d = -g / gamma_hat + ap / gamma_hat**2

    atg_p = float(blocks.atg @ p)
    p_ata_p = float(p @ blocks.ata @ p)
    g_dot_d = -mem.gg / gamma_hat + atg_p / gamma_hat**2
    dd_scale = mem.gg / gamma_hat**2 + p_ata_p / gamma_hat**4
    dd = dd_scale - 2.0 * atg_p / gamma_hat**3
    if dd <= NORM_CANCELLATION_TOL * dd_scale:
        dd = mem.ops.dot(d, d)
    return StepResult(
        d=d,
        p=p,
        pred=0.5 * mu * dd - 0.5 * g_dot_d,
        solvable=True,
        gamma_hat=gamma_hat,
        d_norm=float(np.sqrt(dd)),
        g_dot_d=g_dot_d,
        skipped=skipped,
    )


def bfgs_step(mem: MemoryState, g, mu: float) -> StepResult:
    """L-BFGS 정규화 단계 (조심스러운 저장소에서는 항상 풀림)"""
    return _smw_step(mem, g, mu, Scheme.BFGS)


def sr1_step(mem: MemoryState, g, mu: float) -> StepResult:
    """L-SR1 정규화 단계 (사라지는 피벗의 쌍은 즉석에서 건너뜀)"""
    return _smw_step(mem, g, mu, Scheme.SR1)


def psb_step(mem: MemoryState, g, mu: float) -> StepResult:
    """L-PSB 정규화 단계 (작은 μ 에서 풀리지 않을 수 있음)"""
    return _smw_step(mem, g, mu, Scheme.PSB)


def secant_two_loop_step(mem: MemoryState, g, mu: float) -> StepResult:
    """
    정규화 할선 L-BFGS 단계

    변형 쌍 (s_i, y_i + μs_i) 와 초기 역스케일 1/(γ + μ) 로 two-loop 재귀를
    적용해 d = −H̃g 를 계산한다. 변형 곡률 yᵀs + μ‖s‖² 는 캐시에서 얻는다.
    """
    g = np.asarray(g, dtype=float)
    gamma_hat = _check_mu(mem, mu)
    if mem.cols == 0:
        return _scaled_gradient_step(mem, g, mu, gamma_hat)

    ops = mem.ops
    S = mem.S
    if mu != 0.0:
        ops.mults += S.size
        y_mod = mem.Y + mu * S
    else:
        y_mod = mem.Y
    rho = 1.0 / (np.diag(mem.gram_sy) + mu * np.diag(mem.gram_ss))

    q = g.copy()
    alpha = np.zeros(mem.cols)
    for i in reversed(range(mem.cols)):
        alpha[i] = rho[i] * ops.dot(S[:, i], q)
        q -= alpha[i] * y_mod[:, i]

    r = q / gamma_hat
    for i in range(mem.cols):
        beta = rho[i] * ops.dot(y_mod[:, i], r)
        r += (alpha[i] - beta) * S[:, i]

    d = -r
    g_dot_d = ops.dot(g, d)
    dd = ops.dot(d, d)
    return StepResult(
        d=d,
        p=np.empty(0),
        pred=0.5 * mu * dd - 0.5 * g_dot_d,
        solvable=bool(np.all(np.isfinite(d))),
        gamma_hat=gamma_hat,
        d_norm=float(np.sqrt(dd)),
        g_dot_d=g_dot_d,
    )


STEP_ENGINES = {
    Scheme.BFGS: bfgs_step,
    Scheme.BFGS_SECANT: secant_two_loop_step,
    Scheme.SR1: sr1_step,
    Scheme.PSB: psb_step,
}


def _check_dense_dim(n: int) -> None:
    if n > settings.dense_oracle_max_dim:
        raise ValueError(
            f"{Messages.DENSE_TOO_LARGE}: n={n} > {settings.dense_oracle_max_dim}"
        )


def dense_oracle_update(
    scheme: Scheme,
    B0: np.ndarray,
    S: np.ndarray,
    Y: np.ndarray,
    skip: Iterable[int] = (),
) -> np.ndarray:
    """
    쌍별 재귀 갱신으로 밀집 B 구성 (테스트 오라클)

    Args:
        scheme: 갱신 방식 (BFGS-secant 는 BFGS 와 동일)
        B0: n×n 초기 행렬
        S, Y: n×k 쌍 행렬 (열 순서대로 적용)
        skip: 적용하지 않을 쌍 인덱스

    Raises:
        BreakdownDenominator: 분모가 상대 1e-12 아래로 사라진 경우
    """
    scheme = Scheme(scheme)
    B = SymMatrix(B0).entries.copy()
    S = np.asarray(S, dtype=float).reshape(B.shape[0], -1)
    Y = np.asarray(Y, dtype=float).reshape(B.shape[0], -1)
    _check_dense_dim(B.shape[0])
    if S.shape != Y.shape:
        raise ValueError("S, Y 의 크기가 다릅니다")
    skip = set(skip)

    for i in range(S.shape[1]):
        if i in skip:
            continue
        s, y = S[:, i], Y[:, i]
        bs = B @ s
        if scheme in (Scheme.BFGS, Scheme.BFGS_SECANT):
            sbs, sy = float(s @ bs), float(s @ y)
            if sbs <= 0.0 or sy <= 0.0:
                raise BreakdownDenominator(i, min(sbs, sy))
            B = B - np.outer(bs, bs) / sbs + np.outer(y, y) / sy
        elif scheme is Scheme.SR1:
            r = y - bs
            denom = float(r @ s)
            if abs(denom) < SR1_BREAKDOWN_TOL * np.linalg.norm(r) * np.linalg.norm(s):
                raise BreakdownDenominator(i, denom)
            B = B + np.outer(r, r) / denom
        else:
            r = y - bs
            ss = float(s @ s)
            B = (
                B
                + (np.outer(r, s) + np.outer(s, r)) / ss
                - float(r @ s) * np.outer(s, s) / ss**2
            )
        B = 0.5 * (B + B.T)
    return B


def materialize_dense(
    mem: MemoryState, scheme: Scheme = None, skipped: Iterable[int] = ()
) -> np.ndarray:
    """
    압축 표현 B = γI + AQ⁻¹Aᵀ 를 밀집 행렬로 구성 (테스트 전용, 작은 n 만 허용)

    Args:
        mem: 저장소
        scheme: 조립 방식 (기본값: 저장소 방식)
        skipped: SR1 에서 제외할 쌍 인덱스
    """
    _check_dense_dim(mem.n)
    scheme = mem.scheme if scheme is None else Scheme(scheme)
    B = mem.gamma * np.eye(mem.n)
    if mem.cols == 0:
        return B

    middle = MIDDLE_BUILDERS[scheme](mem)
    if scheme is Scheme.SR1:
        A = mem.Y - mem.gamma * mem.S
        keep = [i for i in range(mem.cols) if i not in set(skipped)]
        if not keep:
            return B
        A = A[:, keep]
        middle = middle[np.ix_(keep, keep)]
    else:
        A = np.hstack([mem.S, mem.Y])

    B = B + A @ linalg.solve(middle, A.T, assume_a="sym")
    return 0.5 * (B + B.T)
