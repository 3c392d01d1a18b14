# regqn/core/exceptions.py
"""
예외 계층 정의
선형대수, 문제 평가, 선탐색, 설정 오류를 구분
"""

from typing import Optional


class RegQNError(Exception):
    """패키지 공통 기반 예외"""


# 선형대수 관련 예외
class LinAlgError(RegQNError):
    """소형 밀집 선형대수 오류"""


class SingularMatrix(LinAlgError):
    """피벗이 임계값 아래로 떨어져 방정식의 해가 없음"""

    def __init__(self, pivot: float, threshold: float, index: Optional[int] = None):
        self.pivot = pivot
        self.threshold = threshold
        self.index = index
        super().__init__(
            f"특이 행렬: 피벗 {pivot:.3e} <= 임계값 {threshold:.3e} (index={index})"
        )


class AllSkipped(LinAlgError):
    """모든 인덱스가 건너뛰어짐"""


class BreakdownDenominator(LinAlgError):
    """SR1 분모가 사라짐"""

    def __init__(self, index: int, denominator: float):
        self.index = index
        self.denominator = denominator
        super().__init__(f"SR1 분모 붕괴: pair {index}, 분모 {denominator:.3e}")


# 문제/메모리 관련 예외
class ProblemError(RegQNError):
    """목적 함수 평가 오류"""


class NonFiniteValue(ProblemError):
    """목적 함수 또는 그래디언트가 NaN/Inf"""


class DimensionMismatch(ProblemError):
    """벡터 길이 불일치"""


class EmptyMemory(RegQNError):
    """저장된 (s, y) 쌍이 없음"""


# 선탐색 관련 예외
class LineSearchError(RegQNError):
    """선탐색 오류"""


class NotDescent(LineSearchError):
    """하강 방향이 아님"""


class LineSearchFailed(LineSearchError):
    """선탐색이 수렴하지 않음"""


# 설정 관련 예외
class ConfigError(RegQNError):
    """실행 설정 오류 (CLI 종료 코드 1)"""


class UnknownAlgo(ConfigError):
    """알 수 없는 알고리즘 이름"""


class UnknownProblem(ConfigError):
    """알 수 없는 문제 이름"""


class DuplicateRow(ConfigError):
    """동일한 (문제, 알고리즘) 결과가 중복됨"""


class InvalidDimension(ProblemError, ConfigError):
    """문제가 지원하지 않는 차원"""
