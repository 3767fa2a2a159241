from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Any


class Status(str, Enum):
    SATISFIES = "satisfies"
    VIOLATES = "violates"
    RESOURCE_EXCEEDED = "resource-exceeded"


@dataclass(frozen=True)
class Verdict:
    """Outcome of a security check.

    ``evidence`` is the violation witness for ``VIOLATES``; for RES it is the
    largest unwinding partition when the property holds.
    """

    prop: str
    status: Status
    evidence: Any = None
    stats: dict = field(default_factory=dict, compare=False)

    @property
    def satisfied(self) -> bool:
        return self.status is Status.SATISFIES

    @property
    def violated(self) -> bool:
        return self.status is Status.VIOLATES

    @property
    def exceeded(self) -> bool:
        return self.status is Status.RESOURCE_EXCEEDED

    def __str__(self):
        return f"{self.prop}: {self.status.value}"
