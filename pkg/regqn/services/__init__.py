# regqn/services/__init__.py
"""
서비스 레이어 패키지
단계 계산, 선탐색, 외부 반복, 벤치마크
"""

from .bench import BenchService, perf_profile, run_suite
from .driver import LineSearchSolver, RegularizedSolver, run_algorithm

__all__ = [
    "BenchService",
    "perf_profile",
    "run_suite",
    "LineSearchSolver",
    "RegularizedSolver",
    "run_algorithm",
]
