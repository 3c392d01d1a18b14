# regqn/schemas/bench.py
"""
벤치마크 결과 스키마
결과 행과 성능 프로파일 곡선
"""

from typing import List, Tuple

from pydantic import BaseModel, ConfigDict, Field, field_validator

from .solver import RunReport, RunStatus


class ResultRow(BaseModel):
    """(문제, 알고리즘) 하나의 실행 결과 행"""

    model_config = ConfigDict(frozen=True)

    problem: str
    n: int = Field(ge=1)
    algo: str
    status: str
    fevals: int = Field(ge=1)
    gevals: int = Field(ge=0)
    iters: int = Field(ge=0)
    accepted_ratio: float = Field(ge=0.0, le=1.0)
    final_g_inf: float
    final_f: float
    wall_ms: float = Field(ge=0.0)

    @field_validator("status")
    @classmethod
    def validate_status(cls, v):
        """상태 문자열 검증"""
        return RunStatus(v).value

    @property
    def converged(self) -> bool:
        return self.status == RunStatus.CONVERGED.value

    @property
    def key(self) -> Tuple[str, int, str]:
        return (self.problem, self.n, self.algo)

    @classmethod
    def from_report(
        cls, problem: str, n: int, algo: str, report: RunReport, wall_ms: float
    ) -> "ResultRow":
        """RunReport 로부터 결과 행 생성"""
        return cls(
            problem=problem,
            n=n,
            algo=algo,
            status=report.status.value,
            fevals=report.fevals,
            gevals=report.gevals,
            iters=report.iters,
            accepted_ratio=report.accepted_ratio,
            final_g_inf=report.final_g_inf,
            final_f=report.final_f,
            wall_ms=wall_ms,
        )


class ProfileCurve(BaseModel):
    """알고리즘 하나의 성능 프로파일 ρ_a(τ)"""

    model_config = ConfigDict(frozen=True)

    algo: str
    points: List[Tuple[float, float]] = Field(default_factory=list)

    @field_validator("points")
    @classmethod
    def validate_points(cls, v):
        """τ ≥ 1 오름차순, ρ ∈ [0, 1] 비감소 검증"""
        previous_tau, previous_rho = 1.0, 0.0
        for tau, rho in v:
            if tau < previous_tau:
                raise ValueError("tau 는 1 이상 오름차순이어야 합니다")
            if not previous_rho <= rho <= 1.0:
                raise ValueError("rho 는 [0, 1] 에서 비감소여야 합니다")
            previous_tau, previous_rho = tau, rho
        return v

    def rho_at(self, tau: float) -> float:
        """오른쪽 연속 계단 함수 값 ρ_a(τ)"""
        value = 0.0
        for point_tau, rho in self.points:
            if point_tau > tau:
                break
            value = rho
        return value
