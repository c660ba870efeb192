"""
Golden checks - small networks whose estimates are known in closed form
"""

from fractions import Fraction

from infoloss.core.analysis import has_w_motif, is_ideal, ring_network, ring_variance
from infoloss.core.estimation import final_bias, final_estimate
from infoloss.core.network import LayeredNetwork, PrecisionVector

from .base import BaseCheck, Evaluation

F = Fraction


def overlap_pair_network() -> LayeredNetwork:
    """Three sources, two listeners sharing the middle source"""
    return LayeredNetwork.from_matrices([[1, 1, 0], [0, 1, 1]])


def triangle_network() -> LayeredNetwork:
    """Three sources, three listeners each hearing a different pair"""
    return LayeredNetwork.from_matrices([[1, 1, 0], [1, 0, 1], [0, 1, 1]])


class OverlapPairCheck(BaseCheck):
    """Two overlapping listeners: non-ideal, with a W-motif and a biased middle source"""

    @property
    def name(self) -> str:
        return "overlap_pair_golden"

    def evaluate(self) -> Evaluation:
        result = Evaluation()
        net = overlap_pair_network()
        ones = PrecisionVector.ones(3)
        estimate = final_estimate(net, ones)
        result.expect(estimate.alpha == (F(1, 4), F(1, 2), F(1, 4)), f"alpha {estimate.alpha}")
        result.expect(estimate.variance == F(3, 8), f"variance {estimate.variance}")
        result.expect(estimate.ideal_variance == F(1, 3), f"ideal variance {estimate.ideal_variance}")
        result.expect(not is_ideal(net, ones).ideal, "reported ideal")
        witness = has_w_motif(net)
        result.expect(witness is not None and witness.sources == (1, 2, 3), f"witness {witness}")
        bias = final_bias(estimate.alpha, [0, 1, 0])
        result.expect(bias == F(1, 2), f"bias {bias}")
        return result


class TriangleCheck(BaseCheck):
    """Three pairwise listeners: ideal even though a W-motif is present"""

    @property
    def name(self) -> str:
        return "triangle_golden"

    def evaluate(self) -> Evaluation:
        result = Evaluation()
        net = triangle_network()
        ones = PrecisionVector.ones(3)
        estimate = final_estimate(net, ones)
        result.expect(estimate.alpha == (F(1, 3),) * 3, f"alpha {estimate.alpha}")
        result.expect(estimate.variance == F(1, 3), f"variance {estimate.variance}")
        result.expect(is_ideal(net, ones).ideal, "reported non-ideal")
        result.expect(has_w_motif(net) is not None, "no W-motif found")
        return result


class RingFormulaCheck(BaseCheck):
    """Ring networks follow 1/4 + 1/(4n), weights (1/2, 1/(2n), ...) and hub bias 1/2"""

    def __init__(self, max_n: int = 100, max_workers: int = 1):
        super().__init__(max_workers)
        self.max_n = max_n

    @property
    def name(self) -> str:
        return "ring_formula"

    def evaluate(self) -> Evaluation:
        result = Evaluation()
        for n in range(1, self.max_n + 1):
            estimate = final_estimate(ring_network(n), PrecisionVector.ones(n + 1))
            expected_alpha = (F(1, 2),) + (F(1, 2 * n),) * n
            hub_bias = final_bias(estimate.alpha, [1] + [0] * n)
            result.expect(
                estimate.variance == ring_variance(n)
                and estimate.alpha == expected_alpha
                and hub_bias == F(1, 2),
                f"n={n}: variance {estimate.variance}, hub bias {hub_bias}",
            )
        return result
