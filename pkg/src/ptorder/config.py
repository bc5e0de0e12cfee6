from typing import Optional
from pydantic import BaseModel, Field

from ptorder.errors import ResourceLimitError

DEFAULT_SEED = 1729

class EngineConfig(BaseModel):
    """
    Resource caps and run options shared by every computation.
    """
    # Brute-force center enumeration runs over l^N residues
    max_center: int = Field(default=100_000, gt=0)

    # Transversal size of a central subalgebra (rank of R over C)
    max_basis: int = Field(default=4096, gt=0)

    # Number of determinants evaluated while assembling an ideal
    max_det: int = Field(default=200_000, gt=0)
    max_det_size: int = Field(default=16, gt=0)

    # Buchberger critical pairs processed
    max_gb_steps: int = Field(default=20_000, gt=0)

    seed: int = DEFAULT_SEED
    log_level: str = "WARNING"
    progress: bool = False

    def check(self, cap: str, value: int) -> None:
        """Raises ResourceLimitError if ``value`` exceeds the cap named ``cap``."""
        limit = getattr(self, cap)
        if value > limit:
            raise ResourceLimitError(cap, value, limit)

    def merged(self, overrides: Optional[dict]) -> "EngineConfig":
        """Returns a copy with non-None overrides applied."""
        if not overrides:
            return self
        updates = {k: v for k, v in overrides.items() if v is not None}
        return self.model_copy(update=updates)


DEFAULT_CONFIG = EngineConfig()
