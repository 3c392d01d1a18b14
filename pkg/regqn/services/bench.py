# regqn/services/bench.py
"""
벤치마크 서비스
알고리즘 × 문제 실행, 결과 CSV 입출력, 성능 프로파일, 수용 비율 요약
"""

import csv
import time
from collections import defaultdict
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path
from typing import Dict, Iterable, List, Optional, Sequence, Tuple, Union

from ..core.config import settings
from ..core.exceptions import ConfigError, DuplicateRow, UnknownAlgo, UnknownProblem
from ..core.logging import get_logger
from ..models.problems import make_problem
from ..schemas.bench import ProfileCurve, ResultRow
from ..schemas.solver import RunReport, SolverConfig
from ..utils.constants import Algorithms, CsvHeaders, Messages
from .driver import run_algorithm

logger = get_logger(__name__)

ProblemSpec = Tuple[str, int]


def _run_task(
    algo: str, problem: str, n: int, cfg_data: dict, seed: int
) -> ResultRow:
    """단일 (알고리즘, 문제) 실행 (작업자 프로세스에서도 호출됨)"""
    cfg = SolverConfig(**cfg_data)
    instance = make_problem(problem, n, start_seed=seed)
    started = time.perf_counter()
    report = run_algorithm(algo, instance, cfg)
    wall_ms = (time.perf_counter() - started) * 1000.0
    return ResultRow.from_report(problem, n, algo, report, wall_ms)


class BenchService:
    """벤치마크 서비스 클래스"""

    def __init__(
        self, cfg: Optional[SolverConfig] = None, workers: Optional[int] = None
    ):
        self.cfg = cfg if cfg is not None else SolverConfig()
        self.workers = settings.bench_workers if workers is None else workers

    @staticmethod
    def validate_algos(algos: Sequence[str]) -> List[str]:
        """알고리즘 이름 검증"""
        if not algos:
            raise UnknownAlgo(Messages.EMPTY_ALGOS)
        unknown = [algo for algo in algos if algo not in Algorithms.ALL]
        if unknown:
            raise UnknownAlgo(f"{Messages.UNKNOWN_ALGO}: {', '.join(unknown)}")
        return list(dict.fromkeys(algos))

    def run_suite(
        self, algos: Sequence[str], problems: Sequence[ProblemSpec], seed: int = 0
    ) -> List[ResultRow]:
        """
        알고리즘 × 문제 전체 실행

        Args:
            algos: 알고리즘 이름 목록
            problems: (문제 이름, 차원) 목록
            seed: 초기점 섭동 시드 (0 = 문헌 초기점)

        Returns:
            List[ResultRow]: (문제, 차원, 알고리즘) 순으로 정렬된 결과 행

        Raises:
            UnknownAlgo: 빈 목록 또는 알 수 없는 알고리즘
            UnknownProblem: 빈 목록 또는 알 수 없는 문제
        """
        algos = self.validate_algos(algos)
        if not problems:
            raise UnknownProblem(Messages.EMPTY_PROBLEMS)
        for name, n in problems:
            make_problem(name, n)

        cfg_data = self.cfg.model_dump()
        tasks = [
            (algo, name, n, cfg_data, seed) for name, n in problems for algo in algos
        ]

        if self.workers > 1 and len(tasks) > 1:
            with ProcessPoolExecutor(max_workers=self.workers) as pool:
                rows = list(pool.map(_run_task, *zip(*tasks)))
        else:
            rows = [_run_task(*task) for task in tasks]

        for row in rows:
            log = logger.info if row.converged else logger.warning
            log(
                "bench_run_finished",
                algo=row.algo,
                problem=row.problem,
                n=row.n,
                status=row.status,
                fevals=row.fevals,
            )
        return sorted(rows, key=lambda row: row.key)


def run_suite(
    algos: Sequence[str],
    problems: Sequence[ProblemSpec],
    cfg: Optional[SolverConfig] = None,
    seed: int = 0,
    workers: int = 1,
) -> List[ResultRow]:
    """알고리즘 × 문제 전체 실행 (BenchService 단축 함수)"""
    return BenchService(cfg, workers).run_suite(algos, problems, seed)


def perf_profile(
    rows: Iterable[ResultRow], drop_all_fail: bool = False
) -> List[ProfileCurve]:
    """
    함수 평가 횟수 기반 Dolan–Moré 성능 프로파일

    r_{p,a} = fevals_{p,a} / min_a fevals_{p,a} (수렴하지 않았거나 행이 없으면 +∞),
    ρ_a(τ) = r_{p,a} ≤ τ 인 문제 비율. 모든 유한 비율, τ = 1, 최대 유한 비율의
    2 배에서 표본화한다.

    Args:
        rows: 결과 행
        drop_all_fail: 모든 알고리즘이 실패한 문제를 제외할지 여부

    Raises:
        DuplicateRow: 같은 (문제, 차원, 알고리즘) 행이 두 번 이상 있는 경우
    """
    costs: Dict[Tuple[str, int], Dict[str, float]] = defaultdict(dict)
    algos: List[str] = []
    for row in rows:
        problem_key = (row.problem, row.n)
        if row.algo in costs[problem_key]:
            raise DuplicateRow(f"{Messages.DUPLICATE_ROW}: {row.key}")
        costs[problem_key][row.algo] = (
            float(row.fevals) if row.converged else float("inf")
        )
        if row.algo not in algos:
            algos.append(row.algo)

    ratios: Dict[str, List[float]] = {algo: [] for algo in algos}
    for problem_key, by_algo in costs.items():
        best = min(by_algo.values())
        if best == float("inf") and drop_all_fail:
            continue
        for algo in algos:
            cost = by_algo.get(algo, float("inf"))
            ratios[algo].append(cost / best if cost != float("inf") else float("inf"))

    n_problems = len(next(iter(ratios.values()), []))
    finite = sorted(
        {r for values in ratios.values() for r in values if r != float("inf")}
    )
    cap = 2.0 * finite[-1] if finite else 2.0
    taus = sorted(set(finite) | {1.0, cap})

    curves = []
    for algo in algos:
        values = ratios[algo]
        points = [
            (tau, sum(r <= tau for r in values) / n_problems if n_problems else 0.0)
            for tau in taus
        ]
        curves.append(ProfileCurve(algo=algo, points=points))
    return curves


def acceptance_summary(rows: Iterable[ResultRow]) -> Dict[str, float]:
    """알고리즘별 평균 수용 단계 비율"""
    grouped: Dict[str, List[float]] = defaultdict(list)
    for row in rows:
        grouped[row.algo].append(row.accepted_ratio)
    return {algo: sum(values) / len(values) for algo, values in grouped.items()}


def _format_value(value) -> str:
    if isinstance(value, float):
        return repr(value)
    return str(value)


def write_results(rows: Iterable[ResultRow], path: Union[str, Path]) -> None:
    """결과 CSV 쓰기 (실수는 repr 로 정확히 기록, 무한대는 inf)"""
    with open(path, "w", newline="", encoding="utf-8") as handle:
        writer = csv.writer(handle)
        writer.writerow(CsvHeaders.RESULTS)
        for row in rows:
            data = row.model_dump()
            writer.writerow(
                [_format_value(data[column]) for column in CsvHeaders.RESULTS]
            )


def read_results(path: Union[str, Path]) -> List[ResultRow]:
    """결과 CSV 읽기"""
    with open(path, newline="", encoding="utf-8") as handle:
        reader = csv.DictReader(handle)
        missing = set(CsvHeaders.RESULTS) - set(reader.fieldnames or ())
        if missing:
            raise ConfigError(f"결과 CSV 헤더 누락: {sorted(missing)}")
        return [ResultRow(**record) for record in reader]


def write_profile(curves: Iterable[ProfileCurve], path: Union[str, Path]) -> None:
    """프로파일 CSV 쓰기 (algo, tau, rho)"""
    with open(path, "w", newline="", encoding="utf-8") as handle:
        writer = csv.writer(handle)
        writer.writerow(CsvHeaders.PROFILE)
        for curve in curves:
            for tau, rho in curve.points:
                writer.writerow([curve.algo, repr(tau), repr(rho)])


def write_trace(report: RunReport, path: Union[str, Path]) -> None:
    """반복 기록 CSV 쓰기"""
    with open(path, "w", newline="", encoding="utf-8") as handle:
        writer = csv.writer(handle)
        writer.writerow(CsvHeaders.TRACE)
        for record in report.trace or ():
            writer.writerow(
                [
                    record.k,
                    repr(record.f),
                    repr(record.g_inf),
                    repr(record.mu_or_t),
                    record.step_class.value,
                    "" if record.rho is None else repr(record.rho),
                ]
            )
