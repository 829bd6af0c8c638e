from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional

SCHEMA_VERSION = 1


@dataclass
class RunReport:
    """Everything one CLI invocation prints; ``timing_seconds`` is the only non-deterministic field."""

    command: List[str]
    config: Dict[str, Any] = field(default_factory=dict)
    result: Optional[Dict[str, Any]] = None
    error: Optional[Dict[str, Any]] = None
    unresolved_count: int = 0
    timing_seconds: float = 0.0
    exit_code: int = 0
    # flat rows for the csv rendering; never part of the json document
    rows: List[Dict[str, str]] = field(default_factory=list)

    def as_dict(self) -> Dict[str, Any]:
        return {
            "schema": SCHEMA_VERSION,
            "command": list(self.command),
            "config": self.config,
            "result": self.result,
            "error": self.error,
            "unresolved_count": self.unresolved_count,
            "exit_code": self.exit_code,
            "timing_seconds": round(self.timing_seconds, 6),
        }
