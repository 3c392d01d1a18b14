# regqn/core/logging.py
"""
구조화 로깅 설정
표준 logging dictConfig 위에 structlog 를 얹어 사용
"""

import logging
import logging.config

import structlog

from .config import get_logging_config, settings

_configured = False


def configure_logging(force: bool = False) -> None:
    """
    로깅 초기화

    Args:
        force: 이미 설정된 경우에도 다시 설정할지 여부
    """
    global _configured
    if _configured and not force:
        return

    logging.config.dictConfig(get_logging_config())

    renderer = (
        structlog.processors.JSONRenderer()
        if settings.log_json
        else structlog.dev.ConsoleRenderer(colors=False)
    )

    structlog.configure(
        processors=[
            structlog.stdlib.filter_by_level,
            structlog.stdlib.add_logger_name,
            structlog.stdlib.add_log_level,
            structlog.processors.TimeStamper(fmt="iso"),
            structlog.processors.StackInfoRenderer(),
            structlog.processors.format_exc_info,
            renderer,
        ],
        logger_factory=structlog.stdlib.LoggerFactory(),
        wrapper_class=structlog.stdlib.BoundLogger,
        cache_logger_on_first_use=True,
    )
    _configured = True


def get_logger(name: str) -> structlog.stdlib.BoundLogger:
    """모듈 로거 반환"""
    return structlog.get_logger(name)
