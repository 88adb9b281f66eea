"""
MUBTRIO Configuration Settings
"""
# Load .env before the settings object is built
from dotenv import load_dotenv
load_dotenv()

import math
from pathlib import Path
from typing import Optional

from pydantic import Field
from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    """Toolkit settings loaded from environment variables."""

    model_config = SettingsConfigDict(
        env_file=".env",
        env_file_encoding="utf-8",
        extra="ignore",
        populate_by_name=True,
    )

    version: str = "1.0.0"

    # Run persistence
    run_log: Path = Field(default=Path("./chm-runs.jsonl"), alias="CHM_RUN_LOG")
    log_level: str = Field(default="WARNING", alias="CHM_LOG_LEVEL")

    # Tolerance policy (entry <= orth <= match)
    eps_entry: float = 1e-9
    eps_orth: float = 1e-8
    eps_match: float = 1e-6

    # Analysis
    fingerprint_quantum: float = 2 * math.pi / 1e6

    # ===========================================
    # EIGHTEEN-CASE VERIFIER
    # ===========================================
    eighteen_grid: int = 64                 # points per continuous axis
    eighteen_polish_iters: int = 200        # coordinate-descent sweeps per candidate
    eighteen_max_polish: Optional[int] = None  # cap on near-solutions refined; None refines all
    eighteen_screen: float = 0.05           # summed residual that qualifies a cell

    # ===========================================
    # TRIO SEARCH
    # ===========================================
    search_restarts: int = 8
    search_max_iters: int = 10_000
    search_target_defect: float = 1e-8
    search_stagnation_window: int = 500
    search_workers: int = 4


# Global settings instance
settings = Settings()
