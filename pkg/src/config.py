"""Environment-driven budgets and defaults."""

import os

from pydantic import BaseModel, Field


def _env_int(name: str, default: int) -> int:
    raw = os.getenv(name)
    if raw is None or raw.strip() == "":
        return default
    try:
        return int(raw, 0)
    except ValueError:
        raise ValueError(f"{name} must be an integer, got {raw!r}") from None


class Budgets(BaseModel):
    """Limits that keep every enumeration at desk scale."""

    max_evals: int = Field(default=2**26, gt=0)
    max_order: int = Field(default=2**12, gt=0)
    max_points: int = Field(default=2**20, gt=0)
    max_btuples: int = Field(default=2**20, gt=0)
    workers: int = Field(default=1, ge=1)
    chunk_size: int = Field(default=2**16, gt=0)
    lifts: int = Field(default=3, ge=0)

    @classmethod
    def from_env(cls) -> "Budgets":
        """Read WORDMAP_* variables; call after load_dotenv()."""
        return cls(
            max_evals=_env_int("WORDMAP_MAX_EVALS", 2**26),
            max_order=_env_int("WORDMAP_MAX_ORDER", 2**12),
            max_points=_env_int("WORDMAP_MAX_POINTS", 2**20),
            max_btuples=_env_int("WORDMAP_MAX_BTUPLES", 2**20),
            workers=_env_int("WORDMAP_WORKERS", 1),
            chunk_size=_env_int("WORDMAP_CHUNK_SIZE", 2**16),
            lifts=_env_int("WORDMAP_LIFTS", 3),
        )

    def override(self, **changes) -> "Budgets":
        """Copy with the non-None keyword values applied (CLI flags win over env)."""
        updates = {k: v for k, v in changes.items() if v is not None}
        return type(self).model_validate({**self.model_dump(), **updates})


DEFAULT_BUDGETS = Budgets()
