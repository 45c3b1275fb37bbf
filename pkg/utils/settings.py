"""
Runtime settings
PATHLINK_* environment variables (or a .env file next to the repo root) override the defaults.
"""
from functools import lru_cache
from pathlib import Path

from pydantic import Field
from pydantic_settings import BaseSettings, SettingsConfigDict

REPO_ROOT = Path(__file__).parent.parent


class Settings(BaseSettings):
    model_config = SettingsConfigDict(
        env_prefix="PATHLINK_",
        env_file=REPO_ROOT / ".env",
        env_file_encoding="utf-8",
        extra="ignore",
    )

    catalog: Path = REPO_ROOT / "data" / "catalog"
    seed: int = 1729
    oracle_max_nodes: int = Field(default=10_000_000, gt=0)
    oracle_max_seconds: float = Field(default=120.0, gt=0)
    # largest host (in edges) the catalog hands to the oracle
    oracle_edge_limit: int = Field(default=40, gt=0)
    log_level: str = "WARNING"


@lru_cache()
def get_settings() -> Settings:
    return Settings()
