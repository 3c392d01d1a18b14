# main.py
"""
정규화 준뉴턴 벤치마크 메인 진입점
python main.py {bench,solve} ... 형태로 하위 명령 실행
"""

import sys

from regqn.cli import bench, solve

COMMANDS = {
    "bench": bench.main,
    "solve": solve.main,
}


def main(argv=None) -> int:
    """하위 명령 분기"""
    argv = sys.argv[1:] if argv is None else argv
    if not argv or argv[0] not in COMMANDS:
        sys.stderr.write("사용법: python main.py {bench,solve} [옵션]\n")
        return 1
    return COMMANDS[argv[0]](argv[1:])


if __name__ == "__main__":
    sys.exit(main())
