import os
from functools import lru_cache

from pydantic import Field
from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    """Runtime configuration read from ``FORMALITY_*`` environment variables."""

    model_config = SettingsConfigDict(env_prefix="FORMALITY_", extra="ignore")

    threads: int = Field(0, ge=0)  # 0 = one worker per CPU
    log_level: str = "INFO"
    default_truncation: int = Field(8, ge=1)
    progress: bool = False
    completion_passes: int = Field(200, ge=1)  # degree passes allowed to change one model


@lru_cache(maxsize=1)
def get_settings() -> Settings:
    return Settings()


def worker_count(settings: Settings | None = None) -> int:
    settings = settings or get_settings()
    if settings.threads:
        return settings.threads
    return os.cpu_count() or 1
