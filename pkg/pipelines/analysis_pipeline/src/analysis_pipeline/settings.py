from __future__ import annotations

from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    model_config = SettingsConfigDict(
        env_prefix="MLMOD_",
        extra="ignore",
        env_file=".env",
        env_file_encoding="utf-8",
    )

    default_seed: int = 0
    table_decimals: int = 3
    # 0 disables progress lines on stderr
    progress_every: int = 0
    debug_merges: bool = False


settings = Settings()
