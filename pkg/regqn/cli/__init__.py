# regqn/cli/__init__.py
"""
명령행 인터페이스 패키지
bench / solve 명령과 공통 종료 코드 처리
"""

import argparse
from typing import Callable, NoReturn

from pydantic import ValidationError

from ..core.exceptions import ConfigError
from ..core.logging import configure_logging, get_logger
from ..utils.constants import ExitCode

logger = get_logger(__name__)


class CommandParser(argparse.ArgumentParser):
    """사용법 오류를 SystemExit(2) 대신 ConfigError 로 알리는 파서"""

    def error(self, message: str) -> NoReturn:
        raise ConfigError(f"{self.prog}: {message}")


def run_command(handler: Callable[[], None]) -> int:
    """
    명령 실행과 전역 예외 처리

    인자 파싱도 handler 안에서 수행해야 사용법 오류가 종료 코드 1 로 매핑된다.

    Returns:
        int: 0 정상, 1 설정 오류, 2 내부 오류
    """
    configure_logging()
    try:
        handler()
    except (ConfigError, ValidationError, FileNotFoundError) as exc:
        logger.error("config_error", error=str(exc))
        return ExitCode.CONFIG_ERROR
    except Exception as exc:
        logger.error("internal_error", error=str(exc), exc_info=True)
        return ExitCode.INTERNAL_ERROR
    return ExitCode.OK
