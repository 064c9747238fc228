"""Structured outcomes of exact and numeric checks."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Dict, List, Optional, Tuple


def fmt(value: Any) -> Any:
    """JSON-friendly rendering: exact rationals become 'p/q' strings."""
    if isinstance(value, Fraction):
        return str(value)
    if isinstance(value, complex):
        return [value.real, value.imag]
    if isinstance(value, (list, tuple)):
        return [fmt(v) for v in value]
    if isinstance(value, dict):
        return {str(k): fmt(v) for k, v in value.items()}
    return value


@dataclass
class VerificationReport:
    check_id: str
    params: Dict[str, Any]
    range: Tuple[int, int]
    first_failure: Optional[Tuple[Any, Any, Any]] = None
    checked: int = 0
    rows: List[Tuple[Any, Any, Any]] = field(default_factory=list)
    details: Dict[str, Any] = field(default_factory=dict)

    @property
    def status(self) -> str:
        return "pass" if self.first_failure is None else "fail"

    @property
    def passed(self) -> bool:
        return self.first_failure is None

    def to_dict(self) -> Dict[str, Any]:
        return {
            "kind": "verification",
            "check_id": self.check_id,
            "params": fmt(self.params),
            "range": list(self.range),
            "status": self.status,
            "first_failure": fmt(self.first_failure),
            "checked": self.checked,
            "rows": fmt(self.rows),
            "details": fmt(self.details),
        }


@dataclass
class ResidualRecord:
    """One floating-point identity check: pass iff residual < tolerance."""

    check: str
    tau: complex
    residual: float
    tolerance: float
    config: Dict[str, Any] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return bool(self.residual < self.tolerance)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "kind": "residual",
            "check": self.check,
            "tau": [self.tau.real, self.tau.imag],
            "config": fmt(self.config),
            "residual": float(self.residual),
            "tolerance": self.tolerance,
            "pass": self.passed,
        }
