from __future__ import annotations

import os
from pathlib import Path

from dotenv import load_dotenv
from pydantic import field_validator
from pydantic_settings import BaseSettings, SettingsConfigDict

# Load .env file explicitly
ENV_FILE_NAME = ".env"
env_path = Path(__file__).parent.parent.parent / ENV_FILE_NAME
load_dotenv(env_path, override=False)


class Settings(BaseSettings):
    RCG_OUTPUT_DIR: str = "results"
    RCG_DATABASE_URL: str = ""  # Optional, enables the SQLite run store
    RCG_WORKERS: int = 1
    RCG_DEBUG: bool = False
    RCG_LOG_FILE: bool = False

    @field_validator("RCG_WORKERS", mode="before")
    @classmethod
    def parse_workers(cls, v):  # type: ignore
        if v in (None, ""):
            return 1
        workers = int(v)
        if workers == 0:
            # 0 means one worker per CPU
            workers = os.cpu_count() or 1
        if workers < 0:
            raise ValueError("RCG_WORKERS must be >= 0")
        return workers

    model_config = SettingsConfigDict(
        env_file=ENV_FILE_NAME,
        env_file_encoding="utf-8",
        extra="ignore",
    )


settings = Settings()
