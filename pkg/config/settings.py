"""
Configuration settings for fibcat
"""
from functools import lru_cache

from pydantic import Field
from pydantic_settings import BaseSettings, SettingsConfigDict

MAX_BOUND = 6


class Settings(BaseSettings):
    """Settings loaded from environment variables (prefix FIBCAT_)"""

    model_config = SettingsConfigDict(
        env_prefix="FIBCAT_",
        env_file=".env",
        env_file_encoding="utf-8",
        extra="ignore",
    )

    # Application
    app_name: str = "fibcat"
    app_version: str = "0.1.0"

    # Verification
    default_bound: int = Field(default=3, ge=0, le=MAX_BOUND)
    max_category_morphisms: int = 64

    # Logging
    log_level: str = "INFO"
    log_json: bool = False

    # Execution
    parallel_workers: int = Field(default=4, ge=1)

    # Reports
    report_schema_version: str = "1.0"


@lru_cache()
def get_settings() -> Settings:
    """Get cached settings instance"""
    return Settings()
