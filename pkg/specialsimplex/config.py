"""
Settings and logging setup
"""

import sys
from fractions import Fraction
from functools import lru_cache

from loguru import logger
from pydantic import field_validator
from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    """Runtime limits and defaults, overridable through SPECIALSIMPLEX_* variables"""

    model_config = SettingsConfigDict(
        env_prefix="SPECIALSIMPLEX_", env_file=".env", extra="ignore"
    )

    log_level: str = "WARNING"
    max_search_vertices: int = 30
    max_isomorphism_vertices: int = 14
    max_birkhoff_n: int = 4
    max_poset_elements: int = 5
    max_wild_gon: int = 10
    max_wild_k: int = 3
    projection_epsilon: str = "1"
    max_hull_subsets: int = 200_000

    @field_validator("projection_epsilon")
    @classmethod
    def _positive_rational(cls, value: str) -> str:
        if Fraction(value) <= 0:
            raise ValueError("projection_epsilon must be a positive rational")
        return value

    @property
    def epsilon(self) -> Fraction:
        return Fraction(self.projection_epsilon)


@lru_cache(maxsize=1)
def get_settings() -> Settings:
    return Settings()


LOG_FORMAT = "<green>{time:HH:mm:ss}</green> | <level>{level: <7}</level> | {name}:{function} - {message}"


def setup_logging(level: str | None = None) -> None:
    """Route loguru output to stderr at the configured level"""
    logger.remove()
    logger.add(sys.stderr, level=(level or get_settings().log_level).upper(), format=LOG_FORMAT)
