# regqn/schemas/solver.py
"""
솔버 설정 및 실행 결과 스키마
SolverConfig 검증, RunReport / TraceRecord 직렬화
"""

from enum import Enum
from typing import Any, Dict, List, Optional

import orjson
from pydantic import BaseModel, ConfigDict, Field, model_validator

from ..utils.constants import CAUTIOUS_EPS


class Scheme(str, Enum):
    """준뉴턴 갱신 방식"""

    BFGS = "BFGS"
    BFGS_SECANT = "BFGS-secant"
    SR1 = "SR1"
    PSB = "PSB"

    @property
    def requires_positive_curvature(self) -> bool:
        """조심스러운 규칙을 만족하지 않는 쌍을 거부하는 방식인지 여부"""
        return self in (Scheme.BFGS, Scheme.BFGS_SECANT)


class SearchKind(str, Enum):
    """기준선 선탐색 종류"""

    ARMIJO = "Armijo"
    WOLFE = "Wolfe"


class StepClass(str, Enum):
    """단계 분류"""

    UNSUCCESSFUL = "Unsuccessful"
    SUCCESSFUL = "Successful"
    HIGHLY_SUCCESSFUL = "HighlySuccessful"

    @property
    def accepted(self) -> bool:
        return self is not StepClass.UNSUCCESSFUL


class RunStatus(str, Enum):
    """실행 종료 상태"""

    CONVERGED = "Converged"
    MAX_ITERS = "MaxIters"
    MU_OVERFLOW = "MuOverflow"
    LINE_SEARCH_FAIL = "LineSearchFail"
    NUMERICAL_ERROR = "NumericalError"


class SolverConfig(BaseModel):
    """정규화 준뉴턴 / 선탐색 기준선 공통 설정"""

    model_config = ConfigDict(frozen=True, extra="forbid")

    m: int = Field(default=5, ge=1, description="메모리 크기")
    mu0: float = Field(default=1.0, gt=0.0)
    p_min: float = Field(default=1e-4, gt=0.0, lt=1.0)
    c1: float = Field(default=1e-4, gt=0.0, lt=1.0)
    c2: float = Field(default=0.9, gt=0.0, lt=1.0)
    sigma1: float = Field(default=0.5, gt=0.0, lt=1.0)
    sigma2: float = Field(default=4.0, gt=1.0)
    mu_min: float = Field(default=1e-4, gt=0.0)
    mu_max: float = Field(default=1e15, gt=0.0)
    eps_cautious: float = Field(default=CAUTIOUS_EPS, ge=0.0)
    tol_g: float = Field(default=1e-4, gt=0.0, description="‖g‖_∞ 수렴 임계값")
    max_iters: int = Field(default=100_000, ge=0)
    nonmonotone_M: int = Field(default=0, ge=0, description="0 = 단조")
    scheme: Scheme = Field(default=Scheme.BFGS)
    t_min: float = Field(default=1e-15, gt=0.0)
    seed_search: bool = Field(
        default=True, description="정규화 기울기 방향 초기 Moré–Thuente 탐색 사용"
    )
    record_trace: bool = Field(default=False)

    @model_validator(mode="after")
    def validate_constants(self):
        """상수 간 관계 검증"""
        if not self.c1 < self.c2:
            raise ValueError("0 < c1 < c2 < 1 이어야 합니다")
        if not self.mu0 >= self.mu_min:
            raise ValueError("mu0 ≥ mu_min 이어야 합니다")
        if not self.mu_min < self.mu_max:
            raise ValueError("mu_min < mu_max 이어야 합니다")
        return self


class TraceRecord(BaseModel):
    """반복별 기록"""

    model_config = ConfigDict(frozen=True)

    k: int
    f: float
    g_inf: float
    mu_or_t: float
    step_class: StepClass
    rho: Optional[float] = None


class RunReport(BaseModel):
    """단일 실행 결과"""

    model_config = ConfigDict(frozen=True)

    status: RunStatus
    iters: int = Field(ge=0)
    fevals: int = Field(ge=0)
    gevals: int = Field(ge=0)
    accepted_steps: int = Field(ge=0)
    seed_fevals: int = Field(default=0, ge=0)
    final_g_inf: float
    final_f: float
    final_mu: Optional[float] = None
    trace: Optional[List[TraceRecord]] = None

    @model_validator(mode="after")
    def validate_counts(self):
        if self.accepted_steps > self.iters:
            raise ValueError("accepted_steps 는 iters 를 넘을 수 없습니다")
        return self

    @property
    def accepted_ratio(self) -> float:
        """수용 단계 비율 (iters = 0 이면 0)"""
        if self.iters == 0:
            return 0.0
        return self.accepted_steps / self.iters

    def to_dict(self, include_trace: bool = False) -> Dict[str, Any]:
        """딕셔너리 변환 (JSON 직렬화용)"""
        data = self.model_dump(mode="json", exclude={"trace"})
        data["accepted_ratio"] = self.accepted_ratio
        if include_trace and self.trace is not None:
            data["trace"] = [record.model_dump(mode="json") for record in self.trace]
        return data

    def to_json(self, include_trace: bool = False) -> bytes:
        return orjson.dumps(
            self.to_dict(include_trace=include_trace), option=orjson.OPT_INDENT_2
        )
