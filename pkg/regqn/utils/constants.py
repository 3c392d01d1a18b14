# regqn/utils/constants.py
"""
정규화 준뉴턴 라이브러리 상수 정의
알고리즘 전체에서 사용되는 상수들을 정의
"""

# 조심스러운(cautious) 갱신 상수
CAUTIOUS_EPS = 1e-8

# 선탐색 상수
ARMIJO_C1 = 1e-4
WOLFE_C2 = 0.9
BACKTRACK_FACTOR = 0.5

# Moré–Thuente 구간 갱신 상수 (하한 외삽 계수, 상대 구간 폭 허용치)
MT_XTRAPL = 1.1
MT_XTOL = 1e-14

# 밀집 오라클 SR1 분모 붕괴 임계값 (상대값)
SR1_BREAKDOWN_TOL = 1e-12

# 초기 스케일링 (쌍이 하나도 없을 때)
DEFAULT_GAMMA = 1.0

# 캐시로 조립한 ‖d‖² 의 상대 소거 허용치 (이하이면 d 로부터 다시 계산)
NORM_CANCELLATION_TOL = 1e-8


class Algorithms:
    """알고리즘 이름 상수 클래스"""

    REG_LBFGS = "regLBFGS"
    REG_LBFGS_SEC = "regLBFGSsec"
    REG_LSR1 = "regLSR1"
    REG_LPSB = "regLPSB"
    ARMIJO_LBFGS = "armijoLBFGS"
    WOLFE_LBFGS = "wolfeLBFGS"

    REGULARIZED = (REG_LBFGS, REG_LBFGS_SEC, REG_LSR1, REG_LPSB)
    LINESEARCH = (ARMIJO_LBFGS, WOLFE_LBFGS)
    ALL = REGULARIZED + LINESEARCH


class CsvHeaders:
    """CSV 헤더 상수 클래스"""

    RESULTS = (
        "problem",
        "n",
        "algo",
        "status",
        "fevals",
        "gevals",
        "iters",
        "accepted_ratio",
        "final_g_inf",
        "final_f",
        "wall_ms",
    )
    PROFILE = ("algo", "tau", "rho")
    TRACE = ("k", "f", "g_inf", "mu_or_t", "step_class", "rho")


class ExitCode:
    """CLI 종료 코드 상수 클래스"""

    OK = 0
    CONFIG_ERROR = 1
    INTERNAL_ERROR = 2


class Messages:
    """로그/오류 메시지 상수 클래스"""

    EMPTY_ALGOS = "알고리즘 목록이 비어 있습니다"
    EMPTY_PROBLEMS = "문제 목록이 비어 있습니다"
    UNKNOWN_ALGO = "알 수 없는 알고리즘입니다"
    UNKNOWN_PROBLEM = "알 수 없는 문제입니다"
    DUPLICATE_ROW = "동일한 (문제, 알고리즘) 결과가 이미 존재합니다"
    NOT_DESCENT = "하강 방향이 아닙니다"
    SEED_SEARCH_FAILED = "초기 선탐색이 수렴하지 않았습니다"
    NON_FINITE = "목적 함수 값이 유한하지 않습니다"
    DIMENSION_MISMATCH = "벡터 길이가 문제 차원과 다릅니다"
    EMPTY_MEMORY = "저장된 (s, y) 쌍이 없습니다"
    DENSE_TOO_LARGE = "밀집 행렬 구성은 작은 차원에서만 허용됩니다"
