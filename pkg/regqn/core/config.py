# regqn/core/config.py
"""
정규화 준뉴턴 벤치마크 설정 관리
환경 변수 및 실행 설정을 중앙 집중화
"""

from typing import Optional

from pydantic import Field
from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    """애플리케이션 설정 클래스"""

    model_config = SettingsConfigDict(
        env_prefix="REGQN_",
        env_file=".env",
        env_file_encoding="utf-8",
        case_sensitive=False,
        extra="ignore",
    )

    # 개발 모드 (로그 레벨 DEBUG)
    debug: bool = Field(default=False)

    # 로깅 설정
    log_level: str = Field(default="INFO")
    log_format: str = Field(default="%(levelname)s:     %(message)s")
    log_json: bool = Field(default=False)
    log_file: Optional[str] = Field(default=None)

    # 벤치마크 실행 설정
    bench_workers: int = Field(default=1, ge=1)

    # 소형 밀집 선형대수 임계값 (민감도 실험용으로 환경 변수에서 조정 가능)
    pivot_tol: float = Field(default=1e-12, gt=0.0)
    sr1_skip_tol: float = Field(default=1e-8, gt=0.0)
    dense_oracle_max_dim: int = Field(default=64, ge=1)

    # Moré–Thuente 선탐색 설정
    mt_max_evals: int = Field(default=50, ge=1)
    mt_extrapolation: float = Field(default=2.0, gt=1.0)
    step_min: float = Field(default=1e-15, gt=0.0)
    step_max: float = Field(default=1e15, gt=0.0)


# 전역 설정 인스턴스
settings = Settings()


def is_development() -> bool:
    """개발 환경 여부 확인"""
    return settings.debug


def get_logging_config() -> dict:
    """로깅 설정 딕셔너리 반환"""
    handlers = ["default"]
    handler_config = {
        "default": {
            "formatter": "default",
            "class": "logging.StreamHandler",
            "stream": "ext://sys.stderr",
        },
    }
    if settings.log_file:
        handler_config["file"] = {
            "formatter": "detailed",
            "class": "logging.FileHandler",
            "filename": settings.log_file,
        }
        handlers.append("file")

    return {
        "version": 1,
        "disable_existing_loggers": False,
        "formatters": {
            "default": {
                "format": settings.log_format,
            },
            "detailed": {
                "format": "%(asctime)s - %(name)s - %(levelname)s - %(message)s",
            },
        },
        "handlers": handler_config,
        "root": {
            "level": "DEBUG" if is_development() else settings.log_level,
            "handlers": handlers,
        },
    }
