import os
from dataclasses import dataclass
from typing import Optional

from core.logger import setup_logger

logger = setup_logger(__name__)

DEFAULT_INITIAL_PRECISION_BITS = 64
DEFAULT_MAX_PRECISION_BITS = 4096
PRECISION_ENV_VAR = "BEURLING_MAX_PRECISION_BITS"


@dataclass(frozen=True)
class Settings:
    """Precision policy shared by every certified comparison.

    Escalation starts at ``initial_precision_bits`` and doubles up to
    ``max_precision_bits``.
    """

    initial_precision_bits: int = DEFAULT_INITIAL_PRECISION_BITS
    max_precision_bits: int = DEFAULT_MAX_PRECISION_BITS

    @classmethod
    def from_env(cls, max_precision_bits: Optional[int] = None) -> "Settings":
        """Build settings; an explicit argument wins over the environment."""
        if max_precision_bits is None:
            raw = os.environ.get(PRECISION_ENV_VAR)
            if raw:
                try:
                    max_precision_bits = int(raw)
                except ValueError:
                    logger.warning("Ignoring malformed %s=%r", PRECISION_ENV_VAR, raw)
        if max_precision_bits is None:
            max_precision_bits = DEFAULT_MAX_PRECISION_BITS
        if max_precision_bits < DEFAULT_INITIAL_PRECISION_BITS:
            logger.warning(
                "Precision cap %d below the initial working precision; using %d",
                max_precision_bits,
                DEFAULT_INITIAL_PRECISION_BITS,
            )
            max_precision_bits = DEFAULT_INITIAL_PRECISION_BITS
        return cls(max_precision_bits=max_precision_bits)

    def precisions(self, budget: Optional[int] = None):
        """Yield the escalation ladder 64, 128, ... up to the cap (inclusive)."""
        cap = budget if budget is not None else self.max_precision_bits
        prec = self.initial_precision_bits
        while prec < cap:
            yield prec
            prec *= 2
        yield cap


def default_budget() -> int:
    return Settings.from_env().max_precision_bits
