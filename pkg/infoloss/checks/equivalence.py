"""
Randomised cross-checks between independent computations

Instances are drawn from ``numpy.random.default_rng([seed, index])`` so each
one is reproducible on its own and the set does not depend on worker count.
"""

from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

import numpy as np

from infoloss.core.analysis import is_ideal, is_ideal_three_layer, is_reduced, nonnegative_weights, reduce
from infoloss.core.ensembles import DEFAULT_SEED, random_network
from infoloss.core.errors import NoInformationError
from infoloss.core.estimation import covariance, covariance_entrywise, final_estimate, weight_profiles
from infoloss.core.network import LayeredNetwork, PrecisionVector
from infoloss.core.oracle import fusion_mismatches
from infoloss.core.parallel import run_ordered

from .base import BaseCheck, Evaluation

PROBABILITIES = (0.3, 0.5, 0.8)
MAX_PRECISION_TERM = 9

Instance = Tuple[LayeredNetwork, PrecisionVector]


def random_instance(seed: int, index: int, max_size: int, depth: int) -> Instance:
    """
    A random network with ``depth - 1`` explicit layers and random rational precisions

    Layer sizes are uniform on 1..max_size, p is drawn from PROBABILITIES and
    each precision is a ratio of integers in 1..9.
    """
    rng = np.random.default_rng([seed, index])
    sizes = [int(s) for s in rng.integers(1, max_size + 1, size=depth - 1)]
    p = float(rng.choice(PROBABILITIES))
    net = random_network(sizes, p, int(rng.integers(0, 2**63 - 1)))
    terms = rng.integers(1, MAX_PRECISION_TERM + 1, size=(sizes[0], 2))
    precisions = PrecisionVector(tuple(Fraction(int(a), int(b)) for a, b in terms))
    return net, precisions


def _describe(net: LayeredNetwork, precisions: PrecisionVector) -> str:
    return f"layers={list(net.layer_sizes)} C={[list(map(list, m)) for m in net.connectivity]} " \
           f"w={[str(w) for w in precisions]}"


def _oracle_task(task: Tuple[int, int, int, int]) -> List[str]:
    net, precisions = random_instance(*task)
    return [
        f"{_describe(net, precisions)}: layer {layer} agent {agent}"
        for layer, agent in fusion_mismatches(net, precisions)
    ]


def _three_layer_test_task(task: Tuple[int, int, int, int]) -> List[str]:
    net, precisions = random_instance(*task)
    general = is_ideal(net, precisions).ideal
    if general != is_ideal_three_layer(net):
        return [f"{_describe(net, precisions)}: general test says {general}"]
    return []


def _reduction_task(task: Tuple[int, int, int, int]) -> List[str]:
    net, precisions = random_instance(*task)
    reduced = reduce(net)
    problems = []
    for layer, agent in fusion_mismatches(net, precisions):
        problems.append(f"{_describe(net, precisions)}: fusion routes differ at layer {layer} agent {agent}")
    if not is_reduced(reduced):
        problems.append(f"{_describe(net, precisions)}: output still has a containment")
    try:
        before = final_estimate(net, precisions).alpha
    except NoInformationError:
        return problems
    if final_estimate(reduced, precisions).alpha != before:
        problems.append(f"{_describe(net, precisions)}: reduction changed the final weights")
    for layer, agent in fusion_mismatches(reduced, precisions):
        problems.append(f"{_describe(reduced, precisions)}: fusion routes differ at layer {layer} agent {agent}")
    return problems


def _covariance_task(task: Tuple[int, int, int, int]) -> List[str]:
    net, precisions = random_instance(*task)
    for k, profile in enumerate(weight_profiles(net, precisions), start=1):
        if covariance(profile, precisions) != covariance_entrywise(profile, precisions):
            return [f"{_describe(net, precisions)}: covariance forms differ at layer {k}"]
    return []


class _RandomCheck(BaseCheck):
    """Shared driver: one task per random instance, run on a process pool"""

    task = staticmethod(_oracle_task)
    depths: Sequence[int] = (3,)

    def __init__(self, count: int = 1000, max_size: int = 8, seed: Optional[int] = None,
                 max_workers: int = 1):
        super().__init__(max_workers)
        self.count = count
        self.max_size = max_size
        self.seed = DEFAULT_SEED if seed is None else seed

    def evaluate(self) -> Evaluation:
        tasks = [
            (self.seed, index, self.max_size, self.depths[index % len(self.depths)])
            for index in range(self.count)
        ]
        result = Evaluation()
        for problems in run_ordered(self.task, tasks, self.max_workers, use_processes=True):
            result.instances += 1
            result.failures.extend(problems)
        return result


class OracleFusionCheck(_RandomCheck):
    """fuse and oracle_fuse agree exactly at every agent of random three- and four-layer networks"""

    task = staticmethod(_oracle_task)
    depths = (3, 4)

    @property
    def name(self) -> str:
        return "oracle_fusion_random"


class ThreeLayerTestCheck(_RandomCheck):
    """The precision-free C^(1) test matches the general ideality test"""

    task = staticmethod(_three_layer_test_task)

    @property
    def name(self) -> str:
        return "three_layer_test_random"


class ReductionCheck(_RandomCheck):
    """reduce leaves no containment, keeps the final weights, and both fusion routes agree before and after"""

    task = staticmethod(_reduction_task)

    @property
    def name(self) -> str:
        return "reduction_random"


class CovarianceFormsCheck(_RandomCheck):
    """Product and entrywise covariance formulas agree"""

    task = staticmethod(_covariance_task)
    depths = (3, 4)

    @property
    def name(self) -> str:
        return "covariance_forms_random"


def _nonnegativity_task(task: Tuple[int, int, int, int]) -> List[str]:
    net, precisions = random_instance(*task)
    try:
        estimate = final_estimate(net, precisions)
    except NoInformationError:
        return []
    if nonnegative_weights(estimate):
        return []
    return [f"{_describe(net, precisions)}: alpha {[str(a) for a in estimate.alpha]}"]


class NonnegativeWeightsCheck(_RandomCheck):
    """
    Looks for final estimates with a negative weight

    Nonnegativity is an open conjecture, so violations are reported as notes
    and never fail the check.
    """

    task = staticmethod(_nonnegativity_task)
    depths = (3, 4)

    @property
    def name(self) -> str:
        return "nonnegative_weights_random"

    def evaluate(self) -> Evaluation:
        result = super().evaluate()
        result.notes.extend(result.failures)
        result.failures = []
        return result
