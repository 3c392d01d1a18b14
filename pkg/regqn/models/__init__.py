# regqn/models/__init__.py
"""
모델 패키지
테스트 문제와 (s, y) 쌍 저장소
"""

from .memory import ABlocks, MemoryState
from .problem import Problem
from .problems import (
    PROBLEM_REGISTRY,
    BroydenTridiagonal,
    ChainedRosenbrock,
    ConvexQuadratic,
    ExtendedPowellSingular,
    ExtendedRosenbrock,
    Raydan1,
    Trigonometric,
    make_problem,
    parse_problem_specs,
)

__all__ = [
    "ABlocks",
    "MemoryState",
    "Problem",
    "PROBLEM_REGISTRY",
    "BroydenTridiagonal",
    "ChainedRosenbrock",
    "ConvexQuadratic",
    "ExtendedPowellSingular",
    "ExtendedRosenbrock",
    "Raydan1",
    "Trigonometric",
    "make_problem",
    "parse_problem_specs",
]
