# regqn/cli/bench.py
"""
벤치마크 명령행
bench run: 알고리즘 × 문제 실행 후 결과 CSV 기록
bench profile: 결과 CSV 로부터 성능 프로파일 CSV 생성
"""

import argparse
import sys
from typing import List, Optional

from ..core.config import settings
from ..core.logging import get_logger
from ..models.problems import parse_problem_specs
from ..schemas.solver import SolverConfig
from ..services.bench import (
    BenchService,
    acceptance_summary,
    perf_profile,
    read_results,
    write_profile,
    write_results,
)
from ..utils.constants import Algorithms
from . import CommandParser, run_command

logger = get_logger(__name__)


def _split(text: str) -> List[str]:
    return [item.strip() for item in text.split(",") if item.strip()]


def build_parser() -> argparse.ArgumentParser:
    """bench 명령 파서 생성"""
    parser = CommandParser(
        prog="bench", description="정규화 준뉴턴 벤치마크 실행 및 성능 프로파일"
    )
    commands = parser.add_subparsers(dest="command", required=True)

    run = commands.add_parser("run", help="알고리즘 × 문제 실행")
    run.add_argument("--algos", default=",".join(Algorithms.ALL))
    run.add_argument(
        "--problems", default="all", help="예: extrosenbrock:1000,broydentri:1000"
    )
    run.add_argument("--n", type=int, default=1000, help="차원이 생략된 문제의 차원")
    run.add_argument("--memory", type=int, default=5)
    run.add_argument("--nonmonotone", type=int, default=0)
    run.add_argument("--tol", type=float, default=1e-4)
    run.add_argument("--max-iters", type=int, default=100_000)
    run.add_argument("--seed", type=int, default=0, help="0 = 문헌 초기점")
    run.add_argument("--workers", type=int, default=settings.bench_workers)
    run.add_argument("--out", default="results.csv")

    profile = commands.add_parser("profile", help="성능 프로파일 계산")
    profile.add_argument("--in", dest="input", required=True)
    profile.add_argument("--out", default="profile.csv")
    profile.add_argument(
        "--drop-all-fail",
        action="store_true",
        help="모든 알고리즘이 실패한 문제 제외",
    )
    return parser


def _run(args: argparse.Namespace) -> None:
    cfg = SolverConfig(
        m=args.memory,
        nonmonotone_M=args.nonmonotone,
        tol_g=args.tol,
        max_iters=args.max_iters,
    )
    problems = parse_problem_specs(args.problems, args.n)
    service = BenchService(cfg, workers=args.workers)
    rows = service.run_suite(_split(args.algos), problems, seed=args.seed)
    write_results(rows, args.out)
    logger.info(
        "bench_results_written",
        path=args.out,
        rows=len(rows),
        acceptance=acceptance_summary(rows),
    )


def _profile(args: argparse.Namespace) -> None:
    rows = read_results(args.input)
    curves = perf_profile(rows, drop_all_fail=args.drop_all_fail)
    write_profile(curves, args.out)
    logger.info("profile_written", path=args.out, algos=[c.algo for c in curves])


def main(argv: Optional[List[str]] = None) -> int:
    """bench 진입점"""

    def handler() -> None:
        args = build_parser().parse_args(argv)
        (_run if args.command == "run" else _profile)(args)

    return run_command(handler)


if __name__ == "__main__":
    sys.exit(main())
