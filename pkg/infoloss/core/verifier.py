"""
Verification Suite - runs oracle checks and assembles the report
"""

import json
import logging
from typing import Any, Dict, List, Optional

from infoloss.checks.base import BaseCheck, CheckResult
from infoloss.checks.equivalence import (
    CovarianceFormsCheck,
    NonnegativeWeightsCheck,
    OracleFusionCheck,
    ReductionCheck,
    ThreeLayerTestCheck,
)
from infoloss.checks.exhaustive import (
    MaxVarianceCheck,
    OracleExhaustiveCheck,
    ThreeLayerTestExhaustiveCheck,
    WMotifCounterexampleCheck,
    four_layer_specs,
    three_layer_specs,
)
from infoloss.checks.goldens import OverlapPairCheck, RingFormulaCheck, TriangleCheck
from infoloss.checks.montecarlo import MonteCarloVarianceCheck
from infoloss.core.ensembles import DEFAULT_SEED
from infoloss.core.errors import ContractViolation

logger = logging.getLogger(__name__)

LEVELS = ("quick", "full")
QUICK_RANDOM_COUNT = 200
FULL_RANDOM_COUNT = 1000


class VerificationSuite:
    """
    Runs verification checks and collects their results

    Responsibilities:
    1. Assemble the checks of a verification level
    2. Run them one at a time, isolating failures of individual checks
    3. Produce a JSON-ready report
    """

    def __init__(self, seed: int = DEFAULT_SEED, max_workers: int = 1):
        self.seed = seed
        self.max_workers = max_workers
        self.level: Optional[str] = None
        self.checks: List[BaseCheck] = []

    def add_check(self, check: BaseCheck):
        self.checks.append(check)
        logger.debug(f"Added check: {check.name}")

    def load_level(self, level: str):
        """
        Add the checks of a level

        quick: closed-form goldens, randomised cross-checks and Monte Carlo.
        full: the same with more random instances, plus exhaustive enumeration.
        """
        if level not in LEVELS:
            raise ContractViolation(f"Unknown verification level '{level}', expected one of {LEVELS}")
        self.level = level
        workers = self.max_workers
        full = level == "full"
        count = FULL_RANDOM_COUNT if full else QUICK_RANDOM_COUNT

        self.add_check(OverlapPairCheck(workers))
        self.add_check(TriangleCheck(workers))
        self.add_check(RingFormulaCheck(max_n=100 if full else 30, max_workers=workers))
        self.add_check(OracleFusionCheck(count, seed=self.seed, max_workers=workers))
        self.add_check(ThreeLayerTestCheck(count, seed=self.seed, max_workers=workers))
        self.add_check(ReductionCheck(count, seed=self.seed, max_workers=workers))
        self.add_check(CovarianceFormsCheck(count, seed=self.seed, max_workers=workers))
        self.add_check(NonnegativeWeightsCheck(count, seed=self.seed, max_workers=workers))
        self.add_check(MonteCarloVarianceCheck(seed=self.seed, max_workers=workers))
        if full:
            self.add_check(MaxVarianceCheck(max_workers=workers))
            self.add_check(WMotifCounterexampleCheck(three_layer_specs() + four_layer_specs(), workers))
            self.add_check(ThreeLayerTestExhaustiveCheck(three_layer_specs(full_columns=False), workers))
            self.add_check(OracleExhaustiveCheck(three_layer_specs() + four_layer_specs(), workers))

    def run_all(self) -> List[CheckResult]:
        """
        Run every check in the order added; a check that raises is reported as failed

        Checks run one after another. Each may open its own process pool of
        ``max_workers``, so at most that many workers exist at any time.
        """
        results: List[CheckResult] = []
        for check in self.checks:
            logger.info(f"Running {check.name}")
            try:
                results.append(check.run())
            except Exception as e:
                logger.error(f"Check {check.name} raised: {e}")
                results.append(CheckResult(check.name, 0, False, f"{type(e).__name__}: {e}"))
        return results

    def report(self, results: List[CheckResult]) -> Dict[str, Any]:
        return {
            "level": self.level,
            "seed": self.seed,
            "passed": all(r.passed for r in results),
            "checks": [r.to_dict() for r in results],
        }

    def report_json(self, results: List[CheckResult]) -> str:
        return json.dumps(self.report(results), indent=2) + "\n"
