from pydantic_settings import BaseSettings, SettingsConfigDict
from typing import Optional
from functools import lru_cache


class Settings(BaseSettings):
    # General Settings
    PROJECT_NAME: str = "ssok"
    DEBUG: bool = False
    LOG_LEVEL: str = "INFO"

    # Parallelism
    SSOK_THREADS: int = 1

    # Isomorphism Search
    ISO_SIMPLEX_BUDGET: int = 5000

    # Anodyne Search Budgets
    SEARCH_STEP_BUDGET: int = 10_000
    SEARCH_NODE_BUDGET: int = 1_000_000
    KAN_DIM_BOUND: int = 2

    # Categories
    NERVE_DIM_DEFAULT: int = 3

    # Operads
    ARITY_BOUND: int = 4
    MORPHISM_GUARD: int = 1_000_000

    # Suite
    SUITE_SEED: int = 0
    REPORT_PATH: Optional[str] = None

    model_config = SettingsConfigDict(env_file=".env", case_sensitive=True)


@lru_cache()
def get_settings() -> Settings:
    return Settings()


settings = get_settings()
