"""
Monte Carlo check of the exact variance on a few reference networks
"""

from typing import List, Optional, Tuple

from infoloss.core.analysis import ring_network
from infoloss.core.ensembles import DEFAULT_SEED
from infoloss.core.network import LayeredNetwork, PrecisionVector
from infoloss.core.oracle import mc_variance_check

from .base import BaseCheck, Evaluation
from .goldens import overlap_pair_network, triangle_network


def reference_networks() -> List[Tuple[str, LayeredNetwork]]:
    return [
        ("overlap_pair", overlap_pair_network()),
        ("triangle", triangle_network()),
        ("ring(10)", ring_network(10)),
        ("single", LayeredNetwork((1,))),
    ]


class MonteCarloVarianceCheck(BaseCheck):
    """Simulated variance lies within three standard errors of the exact one"""

    def __init__(self, trials: int = 100000, seed: Optional[int] = None, max_workers: int = 1):
        super().__init__(max_workers)
        self.trials = trials
        self.seed = DEFAULT_SEED if seed is None else seed

    @property
    def name(self) -> str:
        return "monte_carlo_variance"

    def evaluate(self) -> Evaluation:
        result = Evaluation()
        for label, net in reference_networks():
            check = mc_variance_check(
                net, PrecisionVector.ones(net.layer_sizes[0]), self.trials, self.seed, self.max_workers
            )
            result.expect(
                check.passed,
                f"{label}: empirical {check.empirical:.6f} vs analytic {check.analytic:.6f} "
                f"(stderr {check.stderr:.6f})",
            )
        return result
