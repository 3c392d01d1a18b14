# regqn/cli/solve.py
"""
단일 실행 명령행
solve: 알고리즘 하나로 문제 하나를 풀고 RunReport 를 JSON 으로 출력
"""

import argparse
import sys
from typing import List, Optional

from ..core.logging import get_logger
from ..models.problems import PROBLEM_REGISTRY, make_problem
from ..schemas.solver import SolverConfig
from ..services.bench import write_trace
from ..services.driver import run_algorithm
from ..utils.constants import Algorithms
from . import CommandParser, run_command

logger = get_logger(__name__)


def build_parser() -> argparse.ArgumentParser:
    """solve 명령 파서 생성"""
    parser = CommandParser(prog="solve", description="단일 문제 풀이")
    parser.add_argument(
        "--algo", default=Algorithms.REG_LBFGS, help=", ".join(Algorithms.ALL)
    )
    parser.add_argument(
        "--problem", required=True, help=", ".join(sorted(PROBLEM_REGISTRY))
    )
    parser.add_argument("--n", type=int, default=1000)
    parser.add_argument("--memory", type=int, default=5)
    parser.add_argument("--nonmonotone", type=int, default=0)
    parser.add_argument("--tol", type=float, default=1e-4)
    parser.add_argument("--max-iters", type=int, default=100_000)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--trace", default=None, help="반복 기록 CSV 경로")
    return parser


def _solve(args: argparse.Namespace) -> None:
    cfg = SolverConfig(
        m=args.memory,
        nonmonotone_M=args.nonmonotone,
        tol_g=args.tol,
        max_iters=args.max_iters,
        record_trace=args.trace is not None,
    )
    problem = make_problem(args.problem, args.n, start_seed=args.seed)
    report = run_algorithm(args.algo, problem, cfg)
    if args.trace:
        write_trace(report, args.trace)
        logger.info("trace_written", path=args.trace, records=len(report.trace or ()))
    sys.stdout.write(report.to_json().decode("utf-8") + "\n")


def main(argv: Optional[List[str]] = None) -> int:
    """solve 진입점"""
    return run_command(lambda: _solve(build_parser().parse_args(argv)))


if __name__ == "__main__":
    sys.exit(main())
