# regqn/schemas/__init__.py
"""
스키마 패키지
솔버 설정, 실행 결과, 벤치마크 결과 Pydantic 모델
"""

from .bench import ProfileCurve, ResultRow
from .solver import (
    RunReport,
    RunStatus,
    Scheme,
    SearchKind,
    SolverConfig,
    StepClass,
    TraceRecord,
)

__all__ = [
    "ProfileCurve",
    "ResultRow",
    "RunReport",
    "RunStatus",
    "Scheme",
    "SearchKind",
    "SolverConfig",
    "StepClass",
    "TraceRecord",
]
