"""
Configuration module for Groupoid Lab.

Uses Pydantic Settings to manage environment variables and configuration.
"""

from pathlib import Path
from typing import Optional

from pydantic import Field
from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    """Application settings loaded from environment variables."""

    model_config = SettingsConfigDict(
        env_prefix="GPDLAB_",
        env_file=".env",
        env_file_encoding="utf-8",
        case_sensitive=False,
    )

    # Logging Configuration
    log_level: str = Field(
        default="INFO",
        description="Logging level (DEBUG, INFO, WARNING, ERROR)"
    )
    log_file: Optional[Path] = Field(
        default=None,
        description="Optional log file path"
    )

    # Search and enumeration limits
    closure_max_elements: int = Field(
        default=256,
        gt=0,
        description="Maximum number of elements a table completion may reach"
    )
    subgroupoid_enum_max: int = Field(
        default=12,
        gt=0,
        description="Largest parent size for exhaustive subgroupoid enumeration"
    )
    brute_force_map_limit: int = Field(
        default=200_000,
        gt=0,
        description="Maximum number of candidate maps examined by exhaustive searches"
    )
    automorphism_limit: int = Field(
        default=500,
        gt=0,
        description="Maximum number of automorphisms enumerated for one table"
    )

    # Reporting
    report_witness_limit: int = Field(
        default=25,
        gt=0,
        description="Maximum violations stored per axiom tag in a report"
    )

    # Random corpus
    random_seed: int = Field(
        default=20240611,
        description="Seed for the random fixture generators"
    )


# Global settings instance
_settings: Optional[Settings] = None


def get_settings() -> Settings:
    """
    Get application settings singleton.

    Returns:
        Settings: Application configuration object
    """
    global _settings
    if _settings is None:
        _settings = Settings()

        # Ensure log directory exists
        if _settings.log_file:
            _settings.log_file.parent.mkdir(parents=True, exist_ok=True)

    return _settings


def reload_settings() -> Settings:
    """
    Force reload of settings (useful for testing).

    Returns:
        Settings: Fresh application configuration object
    """
    global _settings
    _settings = None
    return get_settings()
