from pydantic import field_validator
from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    PROJECT_NAME: str = "GolayKS"

    # Codeword counts (q^k). Above STREAM_THRESHOLD lists are never built.
    ENUMERATION_LIMIT: int = 2 ** 26
    STREAM_THRESHOLD: int = 2 ** 20

    # Node budgets
    CLIQUE_BUDGET: int = 10 ** 9
    SEED_BUDGET: int = 10 ** 6
    ORACLE_BUDGET: int = 20_000
    # The exact-cover oracle is not run on systems with more basis-ray incidences
    ORACLE_INCIDENCE_LIMIT: int = 200_000

    # Ray systems larger than this keep no adjacency bitsets
    MAX_RAY_SYSTEM: int = 8192
    # Full basis enumeration above this many rays needs --override-expensive
    EXPENSIVE_RAY_LIMIT: int = 1024

    THREADS: int = 1
    OUTPUT_DIR: str = "out"
    LOG_LEVEL: str = "INFO"

    @field_validator(
        "ENUMERATION_LIMIT",
        "STREAM_THRESHOLD",
        "CLIQUE_BUDGET",
        "SEED_BUDGET",
        "ORACLE_BUDGET",
        "ORACLE_INCIDENCE_LIMIT",
        "MAX_RAY_SYSTEM",
        "EXPENSIVE_RAY_LIMIT",
        "THREADS",
    )
    @classmethod
    def must_be_positive(cls, v: int) -> int:
        if v <= 0:
            raise ValueError(f"must be positive, got {v}")
        return v

    @field_validator("LOG_LEVEL")
    @classmethod
    def normalize_log_level(cls, v: str) -> str:
        level = v.strip().upper()
        if level not in {"DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"}:
            raise ValueError(f"unknown log level {v!r}")
        return level

    model_config = SettingsConfigDict(case_sensitive=True, env_file=".env")

settings = Settings()
