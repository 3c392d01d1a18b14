# regqn/services/linesearch.py
"""
선탐색 서비스
Armijo 역추적, Moré–Thuente 강한 Wolfe 탐색, 초기 정규화 기울기 탐색
"""

from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from ..core.config import settings
from ..core.exceptions import LineSearchFailed, NonFiniteValue, NotDescent
from ..core.logging import get_logger
from ..models.problem import Problem
from ..utils.constants import (
    ARMIJO_C1,
    BACKTRACK_FACTOR,
    MT_XTOL,
    MT_XTRAPL,
    WOLFE_C2,
    Messages,
)

logger = get_logger(__name__)


@dataclass(frozen=True)
class SearchOutcome:
    """선탐색 결과"""

    t: float
    f_new: float
    g_new: Optional[np.ndarray]
    fevals: int
    converged: bool
    x_new: Optional[np.ndarray] = None
    reason: str = ""


@dataclass(frozen=True)
class SeedOutcome:
    """초기 탐색 결과와 첫 (s, y) 쌍"""

    x1: np.ndarray
    s0: np.ndarray
    y0: np.ndarray
    f1: float
    g1: np.ndarray
    t: float
    fevals: int

    def __iter__(self):
        return iter((self.x1, self.s0, self.y0))


def _check_descent(g_dot_d: float) -> None:
    if not g_dot_d < 0.0:
        raise NotDescent(f"{Messages.NOT_DESCENT}: gᵀd = {g_dot_d:.3e}")


def armijo_backtrack(
    problem: Problem,
    x: np.ndarray,
    d: np.ndarray,
    f_ref: float,
    g_dot_d: float,
    c1: float = ARMIJO_C1,
    t_min: Optional[float] = None,
) -> SearchOutcome:
    """
    Armijo 역추적 선탐색

    t = 1 부터 반씩 줄이며 f(x + td) ≤ f_ref + c1·t·gᵀd 를 만족하는 첫 t 를 찾는다.
    시험점에서는 목적 함수만 평가한다.

    Args:
        problem: 문제
        x: 현재 점
        d: 하강 방향
        f_ref: 기준값 (단조: f(x), 비단조: 최근 최대값)
        g_dot_d: 방향 미분 gᵀd (< 0)
        c1: 충분 감소 상수
        t_min: 최소 단계 (기본값: settings.step_min)

    Returns:
        SearchOutcome: t < t_min 이 되면 converged = False

    Raises:
        NotDescent: gᵀd ≥ 0
    """
    _check_descent(g_dot_d)
    t_min = settings.step_min if t_min is None else t_min
    start_count = problem.feval_count

    t = 1.0
    f_trial = float("inf")
    while t >= t_min:
        trial = x + t * d
        try:
            f_trial = problem.value(trial)
        except NonFiniteValue:
            f_trial = float("inf")
        if f_trial <= f_ref + c1 * t * g_dot_d:
            return SearchOutcome(
                t=t,
                f_new=f_trial,
                g_new=None,
                fevals=problem.feval_count - start_count,
                converged=True,
                x_new=trial,
            )
        t *= BACKTRACK_FACTOR

    return SearchOutcome(
        t=t,
        f_new=f_trial,
        g_new=None,
        fevals=problem.feval_count - start_count,
        converged=False,
        reason="step below minimum",
    )


def _cubic_gamma(theta: float, s: float, da: float, db: float) -> float:
    return s * np.sqrt(max(0.0, (theta / s) ** 2 - (da / s) * (db / s)))


def _cstep(
    stx: float,
    fx: float,
    dx: float,
    sty: float,
    fy: float,
    dy: float,
    stp: float,
    fp: float,
    dp: float,
    brackt: bool,
    stpmin: float,
    stpmax: float,
) -> Tuple[float, float, float, float, float, float, float, bool]:
    """
    안전장치가 있는 3차/2차 보간 단계와 불확실 구간 갱신

    stx 는 최소 함수값을 준 단계, sty 는 구간의 다른 끝점, stp 는 현재 단계이다.

    Returns:
        (stx, fx, dx, sty, fy, dy, 다음 단계, brackt)
    """
    opposite = (dx < 0.0 < dp) or (dp < 0.0 < dx)

    if fp > fx:
        # 함수값 증가: 최소점이 구간 안에 있음
        theta = 3.0 * (fx - fp) / (stp - stx) + dx + dp
        s = max(abs(theta), abs(dx), abs(dp))
        gamma = _cubic_gamma(theta, s, dx, dp)
        if stp < stx:
            gamma = -gamma
        p = (gamma - dx) + theta
        q = ((gamma - dx) + gamma) + dp
        stpc = stx + (p / q) * (stp - stx)
        stpq = stx + ((dx / ((fx - fp) / (stp - stx) + dx)) / 2.0) * (stp - stx)
        if abs(stpc - stx) < abs(stpq - stx):
            stpf = stpc
        else:
            stpf = stpc + (stpq - stpc) / 2.0
        brackt = True
    elif opposite:
        # 함수값 감소, 미분 부호 반대: 최소점이 구간 안에 있음
        theta = 3.0 * (fx - fp) / (stp - stx) + dx + dp
        s = max(abs(theta), abs(dx), abs(dp))
        gamma = _cubic_gamma(theta, s, dx, dp)
        if stp > stx:
            gamma = -gamma
        p = (gamma - dp) + theta
        q = ((gamma - dp) + gamma) + dx
        stpc = stp + (p / q) * (stx - stp)
        stpq = stp + (dp / (dp - dx)) * (stx - stp)
        stpf = stpc if abs(stpc - stp) > abs(stpq - stp) else stpq
        brackt = True
    elif abs(dp) < abs(dx):
        # 함수값 감소, 같은 부호, 미분 크기 감소
        theta = 3.0 * (fx - fp) / (stp - stx) + dx + dp
        s = max(abs(theta), abs(dx), abs(dp))
        t = (theta / s) ** 2 - (dx / s) * (dp / s)
        gamma = s * np.sqrt(t) if t > 0.0 else 0.0
        if stp > stx:
            gamma = -gamma
        p = (gamma - dp) + theta
        q = (gamma + (dx - dp)) + gamma
        r = p / q
        if r < 0.0 and gamma != 0.0:
            stpc = stp + r * (stx - stp)
        elif stp > stx:
            stpc = stpmax
        else:
            stpc = stpmin
        stpq = stp + (dp / (dp - dx)) * (stx - stp)
        if brackt:
            stpf = stpc if abs(stpc - stp) < abs(stpq - stp) else stpq
            bound = stp + 0.66 * (sty - stp)
            stpf = min(bound, stpf) if stp > stx else max(bound, stpf)
        else:
            stpf = stpc if abs(stpc - stp) > abs(stpq - stp) else stpq
            stpf = max(stpmin, min(stpf, stpmax))
    else:
        # 함수값 감소, 같은 부호, 미분 크기 비감소
        if brackt:
            theta = 3.0 * (fp - fy) / (sty - stp) + dy + dp
            s = max(abs(theta), abs(dy), abs(dp))
            gamma = _cubic_gamma(theta, s, dy, dp)
            if stp > sty:
                gamma = -gamma
            p = (gamma - dp) + theta
            q = ((gamma - dp) + gamma) + dy
            stpf = stp + (p / q) * (sty - stp)
        elif stp > stx:
            stpf = stpmax
        else:
            stpf = stpmin

    if fp > fx:
        sty, fy, dy = stp, fp, dp
    else:
        if opposite:
            sty, fy, dy = stx, fx, dx
        stx, fx, dx = stp, fp, dp

    return stx, fx, dx, sty, fy, dy, stpf, brackt


def more_thuente(
    problem: Problem,
    x: np.ndarray,
    d: np.ndarray,
    f_ref: float,
    g_dot_d: float,
    f0: Optional[float] = None,
    c1: float = ARMIJO_C1,
    c2: float = WOLFE_C2,
    t0: float = 1.0,
) -> SearchOutcome:
    """
    Moré–Thuente 강한 Wolfe 선탐색

    f(x + td) ≤ f_ref + c1·t·gᵀd 와 |∇f(x + td)ᵀd| ≤ −c2·gᵀd 를 동시에 만족하는 t 를
    보간 구간 축소로 찾는다. 충분 감소 판정은 f_ref 를, 보간은 실제 f(x) (f0) 를
    사용한다. 시험점마다 목적 함수와 그래디언트를 함께 평가한다.

    Args:
        problem: 문제
        x: 현재 점
        d: 하강 방향
        f_ref: 충분 감소 기준값
        g_dot_d: 방향 미분 gᵀd (< 0)
        f0: f(x) (기본값: f_ref)
        c1: 충분 감소 상수
        c2: 곡률 상수
        t0: 첫 시험 단계

    Returns:
        SearchOutcome: 평가 한도 / 최소·최대 단계 / 반올림 한계 도달 시 converged = False

    Raises:
        NotDescent: gᵀd ≥ 0
    """
    _check_descent(g_dot_d)
    stepmin, stepmax = settings.step_min, settings.step_max
    xtrapu = settings.mt_extrapolation
    start_count = problem.feval_count

    finit = f_ref if f0 is None else f0
    ginit = g_dot_d
    gtest = c1 * ginit

    stx, fx, gx = 0.0, finit, ginit
    sty, fy, gy = 0.0, finit, ginit
    stmin, stmax = 0.0, t0 + xtrapu * t0
    width = stepmax - stepmin
    width1 = 2.0 * width
    brackt = False
    stage1 = True

    stp = min(max(t0, stepmin), stepmax)
    last = (stp, float("inf"), None, None)
    reason = "evaluation limit"

    for _ in range(settings.mt_max_evals):
        trial = x + stp * d
        try:
            f, g = problem.evaluate(trial)
        except NonFiniteValue:
            # 정의역 밖: 가장 좋은 점 쪽으로 되돌아감
            stmax = stp
            stp = stx + 0.5 * (stp - stx)
            if stp < stepmin:
                reason = "non-finite values"
                break
            continue
        dg = float(g @ d)
        last = (stp, f, g, trial)

        ftest = f_ref + stp * gtest
        if stage1 and f <= ftest and dg >= min(c1, c2) * ginit:
            stage1 = False

        if f <= ftest and abs(dg) <= -c2 * ginit:
            return SearchOutcome(
                t=stp,
                f_new=f,
                g_new=g,
                fevals=problem.feval_count - start_count,
                converged=True,
                x_new=trial,
            )

        if brackt and (stp <= stmin or stp >= stmax):
            reason = "rounding errors prevent progress"
            break
        if brackt and stmax - stmin <= MT_XTOL * stmax:
            reason = "interval width below tolerance"
            break
        if stp == stepmax and f <= ftest and dg <= gtest:
            reason = "step at maximum"
            break
        if stp == stepmin and (f > ftest or dg >= gtest):
            reason = "step at minimum"
            break

        try:
            if stage1 and f <= fx and f > ftest:
                # 수정 함수 ψ(t) = f(t) − t·gtest 로 단계 예측
                stx, fxm, gxm, sty, fym, gym, stp, brackt = _cstep(
                    stx, fx - stx * gtest, gx - gtest,
                    sty, fy - sty * gtest, gy - gtest,
                    stp, f - stp * gtest, dg - gtest,
                    brackt, stmin, stmax,
                )
                fx, fy = fxm + stx * gtest, fym + sty * gtest
                gx, gy = gxm + gtest, gym + gtest
            else:
                stx, fx, gx, sty, fy, gy, stp, brackt = _cstep(
                    stx, fx, gx, sty, fy, gy, stp, f, dg, brackt, stmin, stmax
                )
        except (ZeroDivisionError, FloatingPointError):
            reason = "degenerate interpolation"
            break

        if brackt:
            if abs(sty - stx) >= 0.66 * width1:
                stp = stx + 0.5 * (sty - stx)
            width1 = width
            width = abs(sty - stx)
            stmin, stmax = min(stx, sty), max(stx, sty)
        else:
            stmin = stp + MT_XTRAPL * (stp - stx)
            stmax = stp + xtrapu * (stp - stx)

        stp = min(max(stp, stepmin), stepmax)
        if not np.isfinite(stp):
            reason = "degenerate interpolation"
            break
        if brackt and (stp <= stmin or stp >= stmax or stmax - stmin <= MT_XTOL * stmax):
            stp = stx

    t_last, f_last, g_last, x_last = last
    logger.debug("more_thuente_failed", reason=reason, t=t_last)
    return SearchOutcome(
        t=t_last,
        f_new=f_last,
        g_new=g_last,
        fevals=problem.feval_count - start_count,
        converged=False,
        x_new=x_last,
        reason=reason,
    )


def initial_seed_search(
    problem: Problem,
    x0: np.ndarray,
    f0: Optional[float] = None,
    g0: Optional[np.ndarray] = None,
) -> SeedOutcome:
    """
    정규화 음의 기울기 방향 −g/‖g‖ 로 한 번의 Moré–Thuente 탐색

    Args:
        problem: 문제
        x0: 초기점
        f0, g0: 이미 평가된 f(x0), ∇f(x0) (없으면 여기서 평가)

    Returns:
        SeedOutcome: 새 점과 첫 쌍 (s0, y0), 곡률 조건으로 y0ᵀs0 > 0

    Raises:
        ValueError: ∇f(x0) = 0
        LineSearchFailed: 탐색이 수렴하지 않은 경우
    """
    x0 = np.asarray(x0, dtype=float)
    start_count = problem.feval_count
    if f0 is None or g0 is None:
        f0, g0 = problem.evaluate(x0)

    g_norm = float(np.linalg.norm(g0))
    if g_norm == 0.0:
        raise ValueError("x0 가 정류점입니다")
    direction = -g0 / g_norm

    outcome = more_thuente(problem, x0, direction, f0, -g_norm, f0=f0)
    if not outcome.converged:
        raise LineSearchFailed(f"{Messages.SEED_SEARCH_FAILED}: {outcome.reason}")

    return SeedOutcome(
        x1=outcome.x_new,
        s0=outcome.x_new - x0,
        y0=outcome.g_new - g0,
        f1=outcome.f_new,
        g1=outcome.g_new,
        t=outcome.t,
        fevals=problem.feval_count - start_count,
    )
