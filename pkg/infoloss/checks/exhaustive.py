"""
Exhaustive checks over every network of a few small sizes
"""

from fractions import Fraction
from typing import Iterable, List, Optional, Sequence

from infoloss.core.oracle import (
    EnumerationSpec,
    enumerate_max_variance,
    scan_three_layer_test_equivalence,
    scan_oracle_equivalence,
    scan_w_motif_counterexamples,
)

from .base import BaseCheck, Evaluation


def three_layer_specs(max_l1: int = 4, max_l2: int = 3, full_columns: bool = True) -> List[EnumerationSpec]:
    return [
        EnumerationSpec(l1, l2, full_columns)
        for l1 in range(1, max_l1 + 1)
        for l2 in range(1, max_l2 + 1)
    ]


def four_layer_specs(max_size: int = 3, full_columns: bool = True) -> List[EnumerationSpec]:
    return [
        EnumerationSpec(l1, l2, full_columns, L3=l3)
        for l1 in range(1, max_size + 1)
        for l2 in range(1, max_size + 1)
        for l3 in range(1, max_size + 1)
    ]


def is_star(rows: Iterable[Sequence[int]], width: int) -> bool:
    """Are the distinct nonzero rows exactly {hub, j} for one hub and every other j?"""
    distinct = {tuple(row) for row in rows if any(row)}
    for hub in range(width):
        star = {tuple(1 if c in (hub, j) else 0 for c in range(width)) for j in range(width) if j != hub}
        if distinct == star:
            return True
    return False


class MaxVarianceCheck(BaseCheck):
    """
    The largest final variance at each size, attained only by relabelled rings

    ``expected`` maps (L1, L2) to (max variance, number of raw maximisers).
    """

    # (5, 5) has 25 edge slots, one over the enumeration guard
    DEFAULT_EXPECTED = {
        (2, 1): (Fraction(1, 2), 1),
        (4, 3): (Fraction(1, 3), 24),
        (4, 4): (Fraction(1, 3), 240),
        (5, 4): (Fraction(5, 16), 120),
    }

    def __init__(self, expected: Optional[dict] = None, max_workers: int = 1):
        super().__init__(max_workers)
        self.expected = expected or self.DEFAULT_EXPECTED

    @property
    def name(self) -> str:
        return "max_variance_exhaustive"

    def evaluate(self) -> Evaluation:
        result = Evaluation()
        for (l1, l2), (variance, count) in sorted(self.expected.items()):
            found = enumerate_max_variance(EnumerationSpec(l1, l2), self.max_workers)
            result.expect(
                found.max_variance == variance and len(found.maximizers) == count,
                f"({l1},{l2}): max {found.max_variance} with {len(found.maximizers)} maximiser(s), "
                f"expected {variance} with {count}",
            )
            if l1 >= 4:
                odd = [net for net in found.maximizers if not is_star(net.matrix(1), l1)]
                result.expect(not odd, f"({l1},{l2}): maximiser {odd[:1]} is not a relabelled ring")
        return result


class _ScanCheck(BaseCheck):

    def __init__(self, specs: Sequence[EnumerationSpec], max_workers: int = 1):
        super().__init__(max_workers)
        self.specs = list(specs)

    def scan(self, spec: EnumerationSpec):
        raise NotImplementedError

    def evaluate(self) -> Evaluation:
        result = Evaluation()
        for spec in self.specs:
            outcome = self.scan(spec)
            result.instances += outcome.instances
            result.failures.extend(f"sizes {spec.layer_sizes}: {item}" for item in outcome.failures)
        return result


class WMotifCounterexampleCheck(_ScanCheck):
    """No fully communicating network is non-ideal without a W-motif"""

    @property
    def name(self) -> str:
        return "w_motif_counterexamples_exhaustive"

    def scan(self, spec: EnumerationSpec):
        return scan_w_motif_counterexamples(spec, self.max_workers)


class ThreeLayerTestExhaustiveCheck(_ScanCheck):
    """The C^(1) test and the general test agree on every three-layer network"""

    @property
    def name(self) -> str:
        return "three_layer_test_exhaustive"

    def scan(self, spec: EnumerationSpec):
        return scan_three_layer_test_equivalence(spec, self.max_workers)


class OracleExhaustiveCheck(_ScanCheck):
    """fuse and oracle_fuse agree at every agent of every enumerated network"""

    @property
    def name(self) -> str:
        return "oracle_fusion_exhaustive"

    def scan(self, spec: EnumerationSpec):
        return scan_oracle_equivalence(spec, self.max_workers)
