"""Environment-driven defaults (prefix SCPCC_)."""

from functools import lru_cache
from typing import Optional

from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    model_config = SettingsConfigDict(env_prefix="SCPCC_", extra="ignore")

    threads: int = 1
    log_dir: Optional[str] = None
    default_seed: int = 0
    batch_size: int = 10


@lru_cache
def get_settings() -> Settings:
    return Settings()
