"""Check outcomes and per-check pass/fail tallies."""

from dataclasses import dataclass, field
from enum import Enum
from typing import Any


class CheckStatus(str, Enum):
    PASS = "pass"
    FAIL = "fail"
    NOT_APPLICABLE = "not_applicable"


@dataclass
class CheckOutcome:
    name: str
    status: CheckStatus
    detail: dict[str, Any] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.status is CheckStatus.PASS

    @property
    def failed(self) -> bool:
        return self.status is CheckStatus.FAIL

    def to_dict(self) -> dict:
        return {"name": self.name, "status": self.status.value, "detail": self.detail}


@dataclass
class CheckTally:
    name: str
    passed: int = 0
    failed: int = 0
    not_applicable: int = 0

    @property
    def total(self) -> int:
        return self.passed + self.failed + self.not_applicable

    def record(self, outcome: CheckOutcome) -> None:
        if outcome.status is CheckStatus.PASS:
            self.passed += 1
        elif outcome.status is CheckStatus.FAIL:
            self.failed += 1
        else:
            self.not_applicable += 1

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "pass": self.passed,
            "fail": self.failed,
            "not_applicable": self.not_applicable,
            "total": self.total,
        }

    def __str__(self) -> str:
        return (
            f"{self.name:<24} "
            f"pass={self.passed}  "
            f"fail={self.failed}  "
            f"n/a={self.not_applicable}"
        )
