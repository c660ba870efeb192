"""
Base Check Interface - Strategy Pattern
"""

import logging
import time
from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class CheckResult:
    """Outcome of one verification check"""

    name: str
    instances: int
    passed: bool
    detail: Optional[str] = None
    elapsed: float = 0.0
    notes: int = 0

    def to_dict(self) -> Dict[str, Any]:
        return {
            "name": self.name,
            "instances": self.instances,
            "passed": self.passed,
            "first_failure": None if self.passed else self.detail,
            "notes": self.notes,
            "first_note": self.detail if self.passed else None,
            "elapsed_seconds": round(self.elapsed, 3),
        }


@dataclass
class Evaluation:
    instances: int = 0
    failures: List[str] = field(default_factory=list)
    notes: List[str] = field(default_factory=list)

    def expect(self, condition: bool, description: str) -> None:
        """Count one instance, recording ``description`` when it fails"""
        self.instances += 1
        if not condition:
            self.failures.append(description)


class BaseCheck(ABC):
    """
    Abstract base class for verification checks

    Each check implements:
    1. How many instances it examines
    2. Which of them fail, described for the report
    """

    def __init__(self, max_workers: int = 1):
        self.max_workers = max_workers
        self.logger = logger

    @property
    @abstractmethod
    def name(self) -> str:
        """Check identifier used in the verification report"""
        pass

    @abstractmethod
    def evaluate(self) -> Evaluation:
        """Examine every instance and collect failure descriptions"""
        pass

    def run(self) -> CheckResult:
        """
        Main entry point: evaluate, time and summarise
        """
        self.logger.info(f"Running check {self.name}...")
        start = time.perf_counter()
        evaluation = self.evaluate()
        elapsed = time.perf_counter() - start
        passed = not evaluation.failures
        marker = "✓" if passed else "✗"
        self.logger.info(
            f"{marker} {self.name}: {evaluation.instances} instance(s), "
            f"{len(evaluation.failures)} failure(s) in {elapsed:.2f}s"
        )
        findings = evaluation.failures or evaluation.notes
        detail = findings[0] if findings else None
        return CheckResult(self.name, evaluation.instances, passed, detail, elapsed, len(evaluation.notes))

