"""
Independent verification paths

- ``oracle_fuse`` minimises the variance over the span of the provider rows
  through normal equations on a reduced-echelon basis, a different algebraic
  route from the inverse-covariance weights of ``fuse``.
- Exhaustive enumeration of small networks stands in for the analytic
  arguments about extremal variance and W-motifs.
- Monte Carlo checks the analytic variance numerically.

Enumeration only visits networks whose last connectivity matrix has its rows
in sorted order: the order of last-layer agents does not matter to the
aggregator, so every other network is a relabelling of a visited one.
"""

import itertools
import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Callable, Dict, Iterator, List, NamedTuple, Optional, Sequence, Tuple

from infoloss.core.analysis import equal_outdegree_components, has_w_motif, is_ideal, is_ideal_three_layer
from infoloss.core.errors import ContractViolation, EnumerationTooLarge, NoInformationError
from infoloss.core.estimation import final_estimate, fuse, simulate, weight_profiles
from infoloss.core.linalg import Vector, row_echelon_basis, solve
from infoloss.core.network import LayeredNetwork, PrecisionVector, validate
from infoloss.core.parallel import chunked, run_ordered

logger = logging.getLogger(__name__)

MAX_EDGE_SLOTS = 24
MIN_MC_TRIALS = 10**4
CHUNK_SIZE = 512


@dataclass(frozen=True)
class EnumerationSpec:
    """Sizes of the networks to enumerate; ``L3`` set means four layers"""

    L1: int
    L2: int
    require_full_columns: bool = True
    L3: Optional[int] = None

    def __post_init__(self):
        sizes = [self.L1, self.L2] + ([self.L3] if self.L3 is not None else [])
        if any(s < 1 for s in sizes):
            raise ContractViolation(f"Enumeration sizes must be positive, got {sizes}")
        if self.edge_slots > MAX_EDGE_SLOTS:
            raise EnumerationTooLarge(
                f"{self.edge_slots} edge slots exceed the enumeration guard of {MAX_EDGE_SLOTS}"
            )

    @property
    def layer_sizes(self) -> Tuple[int, ...]:
        if self.L3 is None:
            return (self.L1, self.L2)
        return (self.L1, self.L2, self.L3)

    @property
    def edge_slots(self) -> int:
        slots = self.L1 * self.L2
        if self.L3 is not None:
            slots += self.L2 * self.L3
        return slots


class EnumerationOutcome(NamedTuple):
    instances: int
    failures: List[Any]


class MaxVarianceResult(NamedTuple):
    max_variance: Fraction
    maximizers: List[LayeredNetwork]
    instances: int


@dataclass(frozen=True)
class MonteCarloCheck:
    empirical: float
    analytic: float
    stderr: float
    passed: bool

    def to_dict(self) -> Dict[str, Any]:
        return {
            "empirical": self.empirical,
            "analytic": self.analytic,
            "stderr": self.stderr,
            "passed": self.passed,
        }


def oracle_fuse(
    provider_rows: Sequence[Sequence[Fraction]], precisions: PrecisionVector
) -> Vector:
    """
    Minimum of sum a_l^2 / w_l over unit-sum vectors a in the span of the rows

    With B a reduced-echelon basis of the span and s its row sums, the
    minimiser is a = B^T c with c = G^-1 s / (s^T G^-1 s), G = B diag(1/w) B^T.

    Raises:
        NoInformationError: If the rows span nothing
        ContractViolation: If a row does not sum to 1
    """
    rows = [tuple(Fraction(v) for v in row) for row in provider_rows]
    for i, row in enumerate(rows, start=1):
        if len(row) != len(precisions):
            raise ContractViolation(f"Provider row {i} has length {len(row)}, expected {len(precisions)}")
        if sum(row) != 1:
            raise ContractViolation(f"Provider row {i} sums to {sum(row)}, expected 1")
    basis = row_echelon_basis(rows)
    if not basis:
        raise NoInformationError("Provider rows span nothing")

    inverse = [1 / w for w in precisions]
    gram = [
        [sum((x * y * d for x, y, d in zip(bi, bj, inverse) if x and y), Fraction(0)) for bj in basis]
        for bi in basis
    ]
    sums = [sum(b, Fraction(0)) for b in basis]
    c = solve(gram, sums)
    denominator = sum((ci * si for ci, si in zip(c, sums)), Fraction(0))
    if denominator == 0:
        raise NoInformationError("No unbiased combination exists in the span")
    width = len(precisions)
    return tuple(
        sum((ci * b[l] for ci, b in zip(c, basis)), Fraction(0)) / denominator for l in range(width)
    )


def _full_columns(matrix: Sequence[Sequence[int]], width: int) -> bool:
    return all(any(row[j] for row in matrix) for j in range(width))


def enumerate_networks(spec: EnumerationSpec) -> Iterator[LayeredNetwork]:
    """All networks of the given sizes, last matrix taken with sorted rows"""
    first_rows = list(itertools.product((0, 1), repeat=spec.L1))
    if spec.L3 is None:
        for matrix in itertools.combinations_with_replacement(first_rows, spec.L2):
            if spec.require_full_columns and not _full_columns(matrix, spec.L1):
                continue
            yield LayeredNetwork((spec.L1, spec.L2), (matrix,))
        return

    second_rows = list(itertools.product((0, 1), repeat=spec.L2))
    last_matrices = list(itertools.combinations_with_replacement(second_rows, spec.L3))
    for first in itertools.product(first_rows, repeat=spec.L2):
        if spec.require_full_columns and not _full_columns(first, spec.L1):
            continue
        for last in last_matrices:
            yield LayeredNetwork(spec.layer_sizes, (first, last))


def expand_row_orders(net: LayeredNetwork) -> List[LayeredNetwork]:
    """Every distinct ordering of the last-layer agents of ``net``"""
    k = net.num_layers - 1
    orders = sorted(set(itertools.permutations(net.matrix(k))))
    return [net.with_matrix(k, order) for order in orders]


def _scan(
    spec: EnumerationSpec,
    worker: Callable[[List[LayeredNetwork]], List[Any]],
    max_workers: int,
) -> EnumerationOutcome:
    networks = list(enumerate_networks(spec))
    logger.info(f"Enumerating {len(networks)} networks of sizes {spec.layer_sizes}")
    batches = run_ordered(worker, chunked(networks, CHUNK_SIZE), max_workers, use_processes=True)
    return EnumerationOutcome(len(networks), [item for batch in batches for item in batch])


def _max_variance_batch(networks: List[LayeredNetwork]) -> List[Tuple[Fraction, LayeredNetwork]]:
    best: Optional[Fraction] = None
    winners: List[Tuple[Fraction, LayeredNetwork]] = []
    for net in networks:
        try:
            variance = final_estimate(net, PrecisionVector.ones(net.layer_sizes[0])).variance
        except NoInformationError:
            continue
        if best is None or variance > best:
            best = variance
            winners = [(variance, net)]
        elif variance == best:
            winners.append((variance, net))
    return winners


def enumerate_max_variance(spec: EnumerationSpec, max_workers: int = 1) -> MaxVarianceResult:
    """
    Largest final variance (unit precisions) over all admissible networks

    Maximisers are reported in raw form: every row ordering of each
    canonical maximiser.
    """
    outcome = _scan(spec, _max_variance_batch, max_workers)
    if not outcome.failures:
        raise NoInformationError(f"No admissible networks of sizes {spec.layer_sizes}")
    best = max(v for v, _ in outcome.failures)
    canonical = [net for v, net in outcome.failures if v == best]
    raw = [order for net in canonical for order in expand_row_orders(net)]
    logger.info(f"Max variance {best} at sizes {spec.layer_sizes}, {len(raw)} maximiser(s)")
    return MaxVarianceResult(best, raw, outcome.instances)


def _w_motif_batch(networks: List[LayeredNetwork]) -> List[LayeredNetwork]:
    counterexamples = []
    for net in networks:
        if not validate(net).ok or has_w_motif(net) is not None:
            continue
        if not is_ideal(net, PrecisionVector.ones(net.layer_sizes[0]), with_certificate=False).ideal:
            counterexamples.append(net)
    return counterexamples


def scan_w_motif_counterexamples(spec: EnumerationSpec, max_workers: int = 1) -> EnumerationOutcome:
    return _scan(spec, _w_motif_batch, max_workers)


def enumerate_w_motif_counterexamples(spec: EnumerationSpec, max_workers: int = 1) -> List[LayeredNetwork]:
    """Fully communicating networks that are non-ideal yet free of W-motifs (expected: none)"""
    return scan_w_motif_counterexamples(spec, max_workers).failures


def skewed_precisions(n: int) -> PrecisionVector:
    """A fixed, deliberately uneven precision vector: w_i = (2i - 1) / (i + 1)"""
    return PrecisionVector(tuple(Fraction(2 * i - 1, i + 1) for i in range(1, n + 1)))


def _three_layer_test_batch(networks: List[LayeredNetwork]) -> List[LayeredNetwork]:
    disagreements = []
    for net in networks:
        expected = is_ideal_three_layer(net)
        if equal_outdegree_components(net) and not expected:
            disagreements.append(net)
            continue
        n = net.layer_sizes[0]
        for precisions in (PrecisionVector.ones(n), skewed_precisions(n)):
            if is_ideal(net, precisions).ideal != expected:
                disagreements.append(net)
                break
    return disagreements


def scan_three_layer_test_equivalence(spec: EnumerationSpec, max_workers: int = 1) -> EnumerationOutcome:
    """
    Three-layer networks where the C^(1) test and the general test disagree,
    or where equal out-degrees per component fail to give ideality
    """
    if spec.L3 is not None:
        raise ContractViolation("The C^(1) ideality test applies to three-layer networks only")
    return _scan(spec, _three_layer_test_batch, max_workers)


def enumerate_three_layer_test_equivalence(spec: EnumerationSpec, max_workers: int = 1) -> List[LayeredNetwork]:
    return scan_three_layer_test_equivalence(spec, max_workers).failures


def fusion_mismatches(net: LayeredNetwork, precisions: PrecisionVector) -> List[Tuple[int, int]]:
    """
    (layer, agent) pairs where fuse and oracle_fuse disagree

    The final aggregator is reported as layer ``num_layers + 1``, agent 1.
    """
    profiles = weight_profiles(net, precisions)
    mismatches = []
    for k in range(1, net.num_layers):
        previous = profiles[k - 1]
        for i, row in enumerate(net.matrix(k)):
            inputs = [previous.rows[j] for j, v in enumerate(row) if v and previous.valid[j]]
            if inputs and fuse(inputs, precisions).fused_row != oracle_fuse(inputs, precisions):
                mismatches.append((k + 1, i + 1))
    last = profiles[-1].valid_rows()
    if last and fuse(last, precisions).fused_row != oracle_fuse(last, precisions):
        mismatches.append((net.num_layers + 1, 1))
    return mismatches


def _oracle_batch(networks: List[LayeredNetwork]) -> List[Tuple[LayeredNetwork, int, int]]:
    failures = []
    for net in networks:
        n = net.layer_sizes[0]
        for precisions in (PrecisionVector.ones(n), skewed_precisions(n)):
            for layer, agent in fusion_mismatches(net, precisions):
                failures.append((net, layer, agent))
    return failures


def scan_oracle_equivalence(spec: EnumerationSpec, max_workers: int = 1) -> EnumerationOutcome:
    return _scan(spec, _oracle_batch, max_workers)


def enumerate_oracle_equivalence(
    spec: EnumerationSpec, max_workers: int = 1
) -> List[Tuple[LayeredNetwork, int, int]]:
    """(network, layer, agent) triples where the two fusion routes disagree (expected: none)"""
    return scan_oracle_equivalence(spec, max_workers).failures


def mc_variance_check(
    net: LayeredNetwork,
    precisions: PrecisionVector,
    trials: int,
    seed: int,
    max_workers: int = 1,
) -> MonteCarloCheck:
    """
    Compare the simulated variance with the exact one

    Passes when they differ by at most three standard errors, the standard
    error coming from the sample's fourth central moment.
    """
    if trials < MIN_MC_TRIALS:
        raise ContractViolation(f"Monte Carlo check needs at least {MIN_MC_TRIALS} trials, got {trials}")
    analytic = float(final_estimate(net, precisions).variance)
    result = simulate(net, precisions, 0.0, trials=trials, seed=seed, max_workers=max_workers)
    passed = abs(result.variance - analytic) <= 3 * result.variance_stderr
    return MonteCarloCheck(result.variance, analytic, result.variance_stderr, passed)
