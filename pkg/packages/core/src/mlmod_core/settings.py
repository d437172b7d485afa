from __future__ import annotations

import os

from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    model_config = SettingsConfigDict(
        env_prefix="MLMOD_",
        extra="ignore",
        env_file=".env",
        env_file_encoding="utf-8",
    )

    # q_oracle enumerates O(n^2 l^2) terms; refuse anything larger than n*l occurrences.
    oracle_max_occurrences: int = 64
    workers: int = os.cpu_count() or 1
    decomposition_tolerance: float = 1e-12


settings = Settings()
