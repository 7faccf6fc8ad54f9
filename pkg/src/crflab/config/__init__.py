"""Process settings via Pydantic Settings."""

from __future__ import annotations

from pydantic import Field
from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    """Settings loaded from environment variables and .env file.

    All variables are prefixed with ``CRF_`` (e.g. ``CRF_THREADS``). Run
    parameters live in :class:`crflab.config.models.RunConfig` instead.
    """

    model_config = SettingsConfigDict(
        env_prefix="CRF_",
        env_file=".env",
        env_file_encoding="utf-8",
        extra="ignore",
    )

    # Logging
    log_level: str = "INFO"
    log_format: str = "json"  # "json" or "text"

    # Data-parallel width for FFT work
    threads: int = Field(default=1, ge=1)
