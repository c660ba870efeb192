"""
Verification checks - Strategy Pattern Implementation
"""

from .base import BaseCheck, CheckResult, Evaluation
from .equivalence import (
    CovarianceFormsCheck,
    NonnegativeWeightsCheck,
    OracleFusionCheck,
    ReductionCheck,
    ThreeLayerTestCheck,
)
from .exhaustive import (
    MaxVarianceCheck,
    OracleExhaustiveCheck,
    ThreeLayerTestExhaustiveCheck,
    WMotifCounterexampleCheck,
)
from .goldens import OverlapPairCheck, RingFormulaCheck, TriangleCheck
from .montecarlo import MonteCarloVarianceCheck

__all__ = [
    "BaseCheck",
    "CheckResult",
    "Evaluation",
    "CovarianceFormsCheck",
    "MaxVarianceCheck",
    "MonteCarloVarianceCheck",
    "NonnegativeWeightsCheck",
    "OracleExhaustiveCheck",
    "OracleFusionCheck",
    "OverlapPairCheck",
    "ReductionCheck",
    "RingFormulaCheck",
    "ThreeLayerTestCheck",
    "ThreeLayerTestExhaustiveCheck",
    "TriangleCheck",
    "WMotifCounterexampleCheck",
]
