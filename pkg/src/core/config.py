"""
Configuration management for the Hardy constant verification suite.
"""
from pydantic_settings import BaseSettings
from pydantic import Field


class Settings(BaseSettings):
    """Numerical tolerances, grid defaults and run options."""

    # Quadrature
    quad_level: int = Field(default=10, description="Initial tanh-sinh level (step h = 1/level)")
    quad_max_level: int = Field(default=160, description="Largest level tried before giving up")
    quad_tol: float = Field(default=1e-10, description="Relative agreement between successive levels")

    # Profile B boundary-value solve
    bvp_nodes: int = Field(default=256, description="Chebyshev collocation nodes")
    bvp_tol: float = Field(default=1e-9, description="Spectral tail tolerance for the collocated solution")

    # Hypergeometric function
    f21_eps: float = Field(default=1e-6, description="Parameter shift for degenerate inversion")
    f21_tol: float = Field(default=1e-15, description="Series truncation tolerance")

    # Spectral basis
    spectral_modes: int = Field(default=256, description="Default number of sine modes")

    # Dirichlet forms in the plane
    form_resolution: int = Field(default=64, description="Radial Gauss-Legendre nodes per piece; twice as many angles")
    qmc_points: int = Field(default=4096, description="Sobol points of the plane form cross-check")

    # Quarter-plane grid
    grid_nx: int = Field(default=96)
    grid_ny: int = Field(default=96)
    grid_x: float = Field(default=8.0)
    grid_y: float = Field(default=8.0)
    grid_grading: float = Field(default=2.0)

    # Limits
    richardson_levels: int = Field(default=8, description="Number of geometric samples in Richardson tables")

    # Run options
    log_level: str = Field(default="INFO")
    threads: int = Field(default=1, ge=1)
    seed: int = Field(default=0)
    output_format: str = Field(default="json")

    class Config:
        env_prefix = "HARDY_"
        env_file = ".env"
        env_file_encoding = "utf-8"
        case_sensitive = False
        extra = "ignore"  # Ignore extra fields from .env

    def quick(self) -> "Settings":
        """Return a copy with halved levels and grids and doubled tolerances."""
        return self.model_copy(
            update={
                "quad_level": max(4, self.quad_level // 2),
                "bvp_nodes": max(64, self.bvp_nodes // 2),
                "grid_nx": max(16, self.grid_nx // 2),
                "grid_ny": max(16, self.grid_ny // 2),
                "spectral_modes": max(16, self.spectral_modes // 2),
                "form_resolution": max(16, self.form_resolution // 2),
                "qmc_points": max(512, self.qmc_points // 2),
                "quad_tol": self.quad_tol * 2,
                "bvp_tol": self.bvp_tol * 2,
            }
        )


# Global settings instance
settings = Settings()


def get_settings() -> Settings:
    """Get application settings."""
    return settings


def configure(new_settings: Settings) -> Settings:
    """Replace the global settings (used by --quick and by tests)."""
    global settings
    settings = new_settings
    return settings
