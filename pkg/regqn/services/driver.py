# regqn/services/driver.py
"""
정규화 준뉴턴 외부 반복과 선탐색 L-BFGS 기준선
μ 제어, 단계 분류, 단조/비단조 기준값, 종료 판정
"""

from collections import deque
from typing import Deque, List, Optional, Sequence, Tuple

import numpy as np

from ..core.exceptions import LineSearchFailed, NonFiniteValue, NotDescent, UnknownAlgo
from ..core.logging import get_logger
from ..models.memory import MemoryState
from ..models.problem import Problem
from ..schemas.solver import (
    RunReport,
    RunStatus,
    Scheme,
    SearchKind,
    SolverConfig,
    StepClass,
    TraceRecord,
)
from ..utils.constants import Algorithms, Messages
from ..utils.opcount import OpCounter
from .compact import STEP_ENGINES, StepResult, secant_two_loop_step
from .linesearch import armijo_backtrack, initial_seed_search, more_thuente

logger = get_logger(__name__)


def passes_sufficient_decrease(
    pred: float, d_norm: float, g_norm: float, cfg: SolverConfig, solvable: bool = True
) -> bool:
    """pred > p_min·‖g‖·‖d‖ (풀리지 않은 단계는 항상 False)"""
    return solvable and pred > cfg.p_min * g_norm * d_norm


def classify_and_update_mu(
    pred: float,
    ared: Optional[float],
    d_norm: float,
    g_norm: float,
    mu: float,
    cfg: SolverConfig,
    solvable: bool = True,
) -> Tuple[StepClass, float]:
    """
    단계 분류와 다음 μ

    Args:
        pred: 예측 감소량
        ared: 실제 감소량 (충분 감소 실패 시 평가하지 않으므로 None 가능)
        d_norm, g_norm: ‖d‖₂, ‖g‖₂
        mu: 현재 정규화 계수
        cfg: 설정
        solvable: 정규화 방정식이 풀렸는지 여부

    Returns:
        Tuple[StepClass, float]: (분류, 다음 μ)
    """
    if not passes_sufficient_decrease(pred, d_norm, g_norm, cfg, solvable):
        return StepClass.UNSUCCESSFUL, cfg.sigma2 * mu

    rho = ared / pred if ared is not None else float("-inf")
    if not rho > cfg.c1:
        return StepClass.UNSUCCESSFUL, cfg.sigma2 * mu
    if rho <= cfg.c2:
        return StepClass.SUCCESSFUL, mu
    return StepClass.HIGHLY_SUCCESSFUL, max(cfg.sigma1 * mu, cfg.mu_min)


def nonmonotone_ref(f_history: Sequence[float], k: int, M: int) -> float:
    """
    비단조 기준값

    Args:
        f_history: 반복 번호 순 목적 함수 값 (가장 최근 값이 마지막)
        k: 현재 반복 번호
        M: 비단조 창 크기 (0 = 단조)

    Returns:
        float: k < M 또는 M = 0 이면 f(x_k), 그 외에는 최근 M 개의 최대값
    """
    if M == 0 or k < M:
        return f_history[-1]
    return max(list(f_history)[-M:])


class _RunState:
    """실행 중 공유 상태 (반복점, 카운터, 기록)"""

    def __init__(self, problem: Problem, cfg: SolverConfig):
        self.problem = problem
        self.cfg = cfg
        self.ops = OpCounter()
        self.fevals_start = problem.feval_count
        self.gevals_start = problem.geval_count
        self.seed_fevals = 0
        self.history: Deque[float] = deque(maxlen=max(cfg.nonmonotone_M, 1))
        self.trace: Optional[List[TraceRecord]] = [] if cfg.record_trace else None
        self.x: np.ndarray = np.empty(0)
        self.f = float("nan")
        self.g: np.ndarray = np.empty(0)

    @property
    def g_inf(self) -> float:
        return float(np.max(np.abs(self.g))) if self.g.size else float("inf")

    def record(self, k, mu_or_t, step_class, rho=None) -> None:
        if self.trace is not None:
            self.trace.append(
                TraceRecord(
                    k=k,
                    f=self.f,
                    g_inf=self.g_inf,
                    mu_or_t=mu_or_t,
                    step_class=step_class,
                    rho=rho,
                )
            )

    def report(self, status, iters, accepted, final_mu=None) -> RunReport:
        return RunReport(
            status=status,
            iters=iters,
            fevals=self.problem.feval_count - self.fevals_start,
            gevals=self.problem.geval_count - self.gevals_start,
            accepted_steps=accepted,
            seed_fevals=self.seed_fevals,
            final_g_inf=self.g_inf,
            final_f=self.f,
            final_mu=final_mu,
            trace=self.trace,
        )


class _SolverBase:
    """초기 평가와 초기 탐색을 공유하는 솔버 기반 클래스"""

    scheme: Scheme = Scheme.BFGS

    def __init__(self, problem: Problem, cfg: SolverConfig):
        self.problem = problem
        self.cfg = cfg
        self.state = _RunState(problem, cfg)
        self.memory = MemoryState(
            problem.n, cfg.m, self.scheme, cfg.eps_cautious, self.state.ops
        )

    def _start(self) -> bool:
        """
        x0 평가와 초기 탐색

        Returns:
            bool: 초기점에서 목적 함수가 유한하면 True
        """
        state = self.state
        state.x = self.problem.x0
        try:
            state.f, state.g = self.problem.evaluate(state.x)
        except NonFiniteValue:
            logger.warning("non_finite_start", problem=self.problem.name)
            return False
        state.history.append(state.f)

        if not self.cfg.seed_search or state.g_inf < self.cfg.tol_g:
            self.memory.register_gradient(state.g)
            return True

        before = self.problem.feval_count
        try:
            seed = initial_seed_search(self.problem, state.x, state.f, state.g)
        except LineSearchFailed as exc:
            logger.warning(
                "seed_search_failed", problem=self.problem.name, error=str(exc)
            )
            state.seed_fevals = self.problem.feval_count - before
            self.memory.register_gradient(state.g)
            return True

        state.seed_fevals = seed.fevals
        self.memory.push_pair(seed.s0, seed.y0, seed.g1)
        state.x, state.f, state.g = seed.x1, seed.f1, seed.g1
        # 초기 탐색 이후를 반복 0 으로 본다
        state.history.clear()
        state.history.append(state.f)
        return True


class RegularizedSolver(_SolverBase):
    """정규화 준뉴턴 방법 (μ 제어 외부 반복)"""

    def __init__(self, problem: Problem, cfg: SolverConfig):
        self.scheme = cfg.scheme
        super().__init__(problem, cfg)
        self.engine = STEP_ENGINES[cfg.scheme]

    def _push(self, step: StepResult, g_new: np.ndarray) -> None:
        state = self.state
        gg_new = state.ops.dot(g_new, g_new)
        p_prev = step.p if step.p.size else None
        self.memory.push_pair(
            step.d,
            g_new - state.g,
            g_new,
            p_prev=p_prev,
            gamma_hat=step.gamma_hat,
            g_norm_sq=gg_new,
        )

    def run(self) -> RunReport:
        cfg, state, problem = self.cfg, self.state, self.problem
        logger.info(
            "run_started", scheme=cfg.scheme.value, problem=problem.name, n=problem.n
        )
        if not self._start():
            return state.report(RunStatus.NUMERICAL_ERROR, 0, 0, cfg.mu0)

        mu = cfg.mu0
        k = 0
        accepted = 0
        status = RunStatus.MAX_ITERS
        while True:
            if state.g_inf < cfg.tol_g:
                status = RunStatus.CONVERGED
                break
            if k >= cfg.max_iters:
                status = RunStatus.MAX_ITERS
                break
            if mu > cfg.mu_max:
                status = RunStatus.MU_OVERFLOW
                break

            step = self.engine(self.memory, state.g, mu)
            g_norm = float(np.sqrt(self.memory.gg))
            f_ref = nonmonotone_ref(state.history, k, cfg.nonmonotone_M)

            ared = None
            rho = None
            x_trial = None
            f_trial = float("nan")
            if passes_sufficient_decrease(
                step.pred, step.d_norm, g_norm, cfg, step.solvable
            ):
                x_trial = state.x + step.d
                try:
                    f_trial = problem.value(x_trial)
                except NonFiniteValue:
                    f_trial = float("inf")
                ared = f_ref - f_trial
                rho = ared / step.pred

            step_class, mu_next = classify_and_update_mu(
                step.pred, ared, step.d_norm, g_norm, mu, cfg, step.solvable
            )

            if step_class.accepted:
                try:
                    g_new = problem.gradient(x_trial)
                except NonFiniteValue:
                    state.x, state.f = x_trial, f_trial
                    status = RunStatus.NUMERICAL_ERROR
                    logger.warning("non_finite_gradient", problem=problem.name, k=k)
                    k += 1
                    break
                self._push(step, g_new)
                state.x, state.f, state.g = x_trial, f_trial, g_new
                accepted += 1

            state.history.append(state.f)
            state.record(k, mu, step_class, rho)
            mu = mu_next
            k += 1

        if status is RunStatus.MU_OVERFLOW:
            logger.warning("mu_overflow", problem=problem.name, mu=mu, iters=k)
        report = state.report(status, k, accepted, mu)
        logger.info(
            "run_finished",
            scheme=cfg.scheme.value,
            problem=problem.name,
            status=status.value,
            iters=k,
            fevals=report.fevals,
        )
        return report


class LineSearchSolver(_SolverBase):
    """선탐색 L-BFGS 기준선 (two-loop 방향, 조심스러운 갱신)"""

    scheme = Scheme.BFGS

    def __init__(self, problem: Problem, cfg: SolverConfig, search: SearchKind):
        super().__init__(problem, cfg)
        self.search = SearchKind(search)

    def search_direction(self, g: np.ndarray) -> Tuple[np.ndarray, float]:
        """two-loop 방향 d = −Hg 와 gᵀd"""
        step = secant_two_loop_step(self.memory, g, 0.0)
        return step.d, step.g_dot_d

    def run(self) -> RunReport:
        cfg, state, problem = self.cfg, self.state, self.problem
        logger.info(
            "run_started", search=self.search.value, problem=problem.name, n=problem.n
        )
        if not self._start():
            return state.report(RunStatus.NUMERICAL_ERROR, 0, 0)

        k = 0
        trials = 0
        status = RunStatus.MAX_ITERS
        while True:
            if state.g_inf < cfg.tol_g:
                status = RunStatus.CONVERGED
                break
            if k >= cfg.max_iters:
                status = RunStatus.MAX_ITERS
                break

            d, g_dot_d = self.search_direction(state.g)
            f_ref = nonmonotone_ref(state.history, k, cfg.nonmonotone_M)
            try:
                if self.search is SearchKind.ARMIJO:
                    outcome = armijo_backtrack(
                        problem, state.x, d, f_ref, g_dot_d, cfg.c1, cfg.t_min
                    )
                else:
                    outcome = more_thuente(
                        problem, state.x, d, f_ref, g_dot_d, f0=state.f, c1=cfg.c1
                    )
            except NotDescent:
                logger.warning("not_descent", problem=problem.name, k=k)
                status = RunStatus.LINE_SEARCH_FAIL
                break

            trials += outcome.fevals
            if not outcome.converged or outcome.t < cfg.t_min:
                status = RunStatus.LINE_SEARCH_FAIL
                break

            x_new = outcome.x_new
            g_new = outcome.g_new
            if g_new is None:
                try:
                    g_new = problem.gradient(x_new)
                except NonFiniteValue:
                    state.x, state.f = x_new, outcome.f_new
                    status = RunStatus.NUMERICAL_ERROR
                    break

            self.memory.push_pair(x_new - state.x, g_new - state.g, g_new)
            state.x, state.f, state.g = x_new, outcome.f_new, g_new
            state.history.append(state.f)
            state.record(k, outcome.t, StepClass.SUCCESSFUL)
            k += 1

        report = state.report(status, max(trials, k), k)
        logger.info(
            "run_finished",
            search=self.search.value,
            problem=problem.name,
            status=status.value,
            iters=report.iters,
            fevals=report.fevals,
        )
        return report


def run_regularized(problem: Problem, cfg: SolverConfig) -> RunReport:
    """정규화 준뉴턴 방법 실행"""
    return RegularizedSolver(problem, cfg).run()


def run_linesearch_lbfgs(
    problem: Problem, cfg: SolverConfig, search: SearchKind
) -> RunReport:
    """선탐색 L-BFGS 기준선 실행"""
    return LineSearchSolver(problem, cfg, search).run()


ALGO_SCHEMES = {
    Algorithms.REG_LBFGS: Scheme.BFGS,
    Algorithms.REG_LBFGS_SEC: Scheme.BFGS_SECANT,
    Algorithms.REG_LSR1: Scheme.SR1,
    Algorithms.REG_LPSB: Scheme.PSB,
}

ALGO_SEARCHES = {
    Algorithms.ARMIJO_LBFGS: SearchKind.ARMIJO,
    Algorithms.WOLFE_LBFGS: SearchKind.WOLFE,
}


def run_algorithm(algo: str, problem: Problem, cfg: SolverConfig) -> RunReport:
    """
    알고리즘 이름으로 실행

    Raises:
        UnknownAlgo: 등록되지 않은 알고리즘 이름
    """
    if algo in ALGO_SCHEMES:
        scheme_cfg = cfg.model_copy(update={"scheme": ALGO_SCHEMES[algo]})
        return run_regularized(problem, scheme_cfg)
    if algo in ALGO_SEARCHES:
        return run_linesearch_lbfgs(problem, cfg, ALGO_SEARCHES[algo])
    raise UnknownAlgo(f"{Messages.UNKNOWN_ALGO}: {algo}")
