"""
Application configuration using Pydantic Settings
"""

import os
from functools import lru_cache

from pydantic import Field
from pydantic_settings import BaseSettings


class Settings(BaseSettings):
    """Laboratory settings"""

    # Logging
    LOG_LEVEL: str = "INFO"
    LOG_JSON: bool = True

    # Execution
    MAASSLAB_WORKERS: int = Field(default=min(8, os.cpu_count() or 1), ge=1)
    DEFAULT_SEED: int = 20240917

    # K-Bessel kernel
    BESSEL_CUTOFF: float = 3.0
    BESSEL_MAX_TERMS: int = 12
    TRANSITION_BOUND_CONSTANT: float = 3.0
    ORACLE_MAX_ORDER: float = 250.0
    ORACLE_REL_TOLERANCE: float = 1e-13
    ORACLE_ANGLE_CONSTANT: float = 2.0
    ORACLE_DECAY_TARGET: float = 45.0
    ORACLE_MAX_NODES: int = 400_000

    # Hecke table
    HECKE_THETA: float = 7.0 / 64.0
    HECKE_BOUND_SLACK: float = 0.01
    TABLE_MARGIN: int = 64

    # Norms and quadrature
    PARSEVAL_EPS: float = 0.05
    PARSEVAL_CONSTANT: float = 10.0
    QUAD_PANEL_TOL: float = 1e-9
    QUAD_MIN_PANELS_PER_UNIT: int = 8
    QUAD_ORDER: int = 32
    QUAD_LIMIT: int = 2000
    DEFAULT_Y_MAX: float = 10.0
    EXPONENTIAL_MAJORANT_SAFETY: float = 1.5

    # Sign changes
    SIGN_SAMPLES_PER_OSCILLATION: int = 40
    SIGN_BISECTION_DEPTH: int = 40
    SIGN_MAX_DOUBLINGS: int = 6

    # Eigensolver
    SOLVER_SCAN_STEP: float = 1e-3
    SOLVER_DIP_RATIO: float = 1e-3
    SOLVER_RESIDUAL_TARGET: float = 1e-8
    SOLVER_HEIGHT_OFFSET: float = 0.05

    # Nodal domains
    NODAL_ZERO_FRACTION: float = 1e-3
    NODAL_COURANT_SLACK: float = 0.5

    class Config:
        env_file = ".env"
        case_sensitive = True
        extra = "ignore"


@lru_cache()
def get_settings() -> Settings:
    """Get cached settings instance"""
    return Settings()


settings = get_settings()
