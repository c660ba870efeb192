"""
Estimate propagation - weights, covariances, final estimate, bias, simulation

Every agent's estimate is a linear combination of the first-layer
measurements. An agent's weight vector over those measurements is computed
exactly from its in-neighbours' vectors by minimum-variance unbiased fusion;
the final aggregator fuses the whole last explicit layer.

Agents that receive nothing (zero in-degree, or only invalid in-neighbours)
have no estimate under a flat prior. They are marked invalid, carry a zero
row, and are ignored downstream.
"""

import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import partial
from typing import Any, Dict, List, NamedTuple, Optional, Sequence, Tuple

import numpy as np

from infoloss.core.errors import ContractViolation, NoInformationError
from infoloss.core.linalg import Vector, format_rational, independent_rows, matmul, solve, transpose
from infoloss.core.network import LayeredNetwork, PrecisionVector
from infoloss.core.parallel import run_ordered

logger = logging.getLogger(__name__)

GENERATOR_NAME = "numpy.PCG64"
SIMULATION_CHUNK = 8192

ZERO = Fraction(0)
ONE = Fraction(1)


@dataclass(frozen=True)
class WeightProfile:
    """Rows of the cumulative weight product for one layer, with validity flags"""

    rows: Tuple[Vector, ...]
    valid: Tuple[bool, ...]

    @property
    def size(self) -> int:
        return len(self.rows)

    def valid_rows(self) -> List[Vector]:
        return [row for row, ok in zip(self.rows, self.valid) if ok]

    def valid_indices(self) -> List[int]:
        return [i for i, ok in enumerate(self.valid) if ok]


@dataclass(frozen=True)
class CovarianceMatrix:
    """Exact covariance of one layer's estimates"""

    entries: Tuple[Vector, ...]

    def submatrix(self, indices: Sequence[int]) -> List[List[Fraction]]:
        return [[self.entries[i][j] for j in indices] for i in indices]


@dataclass(frozen=True)
class FinalEstimate:
    """The implicit aggregator's weights on first-layer measurements"""

    alpha: Vector
    variance: Fraction
    ideal_variance: Fraction

    @property
    def efficiency(self) -> Fraction:
        """Ideal variance over achieved variance, 1 exactly for ideal networks"""
        return self.ideal_variance / self.variance

    @property
    def is_ideal_variance(self) -> bool:
        return self.variance == self.ideal_variance

    def to_dict(self) -> Dict[str, Any]:
        return {
            "alpha": [format_rational(a) for a in self.alpha],
            "alpha_float": [float(a) for a in self.alpha],
            "variance": format_rational(self.variance),
            "variance_float": float(self.variance),
            "ideal_variance": format_rational(self.ideal_variance),
            "ideal_variance_float": float(self.ideal_variance),
        }


class Fusion(NamedTuple):
    beta: Vector
    fused_row: Vector


class Propagation(NamedTuple):
    profiles: List[WeightProfile]
    covariances: List[CovarianceMatrix]


@dataclass(frozen=True)
class SimulationResult:
    """Empirical moments of the simulated final estimate"""

    mean: float
    variance: float
    variance_stderr: float
    trials: int
    seed: int
    generator: str = GENERATOR_NAME

    @property
    def mean_stderr(self) -> float:
        return math.sqrt(self.variance / self.trials)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "mean": self.mean,
            "variance": self.variance,
            "variance_stderr": self.variance_stderr,
            "trials": self.trials,
            "seed": self.seed,
            "generator": self.generator,
        }


def _check_precisions(width: int, precisions: PrecisionVector) -> None:
    if len(precisions) != width:
        raise ContractViolation(
            f"{len(precisions)} precisions given for {width} first-layer measurements"
        )


def _covariance_of(rows: Sequence[Sequence[Fraction]], precisions: PrecisionVector) -> List[List[Fraction]]:
    """rows @ diag(1/w) @ rows^T, skipping zero entries"""
    inverse = [1 / w for w in precisions]
    support = [[(l, v) for l, v in enumerate(row) if v] for row in rows]
    n = len(rows)
    cov = [[ZERO] * n for _ in range(n)]
    for a in range(n):
        row_a = rows[a]
        for b in range(a, n):
            value = sum((row_a[l] * v * inverse[l] for l, v in support[b] if row_a[l]), ZERO)
            cov[a][b] = value
            cov[b][a] = value
    return cov


def fuse(
    provider_rows: Sequence[Sequence[Fraction]], precisions: PrecisionVector
) -> Fusion:
    """
    Minimum-variance unbiased combination of correlated estimates

    Each provider row is that provider's weight vector over the first-layer
    measurements. Redundant providers (rows dependent on earlier ones) get
    zero weight; the rest are combined with weights proportional to
    R^-1 1, R being their covariance.

    Raises:
        NoInformationError: If there are no provider rows
        ContractViolation: If a row does not sum to 1 or lengths disagree
    """
    if not provider_rows:
        raise NoInformationError("Cannot fuse an empty set of estimates")
    rows = [tuple(Fraction(v) for v in row) for row in provider_rows]
    width = len(precisions)
    for i, row in enumerate(rows, start=1):
        if len(row) != width:
            raise ContractViolation(f"Provider row {i} has length {len(row)}, expected {width}")
        if sum(row) != ONE:
            raise ContractViolation(f"Provider row {i} sums to {sum(row)}, expected 1")

    kept = independent_rows(rows)
    kept_rows = [rows[i] for i in kept]
    if len(kept) == 1:
        coefficients = [ONE]
    else:
        covariance = _covariance_of(kept_rows, precisions)
        x = solve(covariance, [ONE] * len(kept))
        total = sum(x, ZERO)
        coefficients = [v / total for v in x]

    beta = [ZERO] * len(rows)
    for i, c in zip(kept, coefficients):
        beta[i] = c
    fused = [ZERO] * width
    for c, row in zip(coefficients, kept_rows):
        if not c:
            continue
        for l, v in enumerate(row):
            if v:
                fused[l] += c * v
    return Fusion(tuple(beta), tuple(fused))


def weight_profiles(net: LayeredNetwork, precisions: PrecisionVector) -> List[WeightProfile]:
    """Per-layer weight profiles, first layer being the identity"""
    n = net.layer_sizes[0]
    _check_precisions(n, precisions)
    identity = tuple(tuple(ONE if i == j else ZERO for j in range(n)) for i in range(n))
    profiles = [WeightProfile(identity, tuple(True for _ in range(n)))]

    for k in range(1, net.num_layers):
        previous = profiles[-1]
        zero_row = tuple(ZERO for _ in range(n))
        rows: List[Vector] = []
        valid: List[bool] = []
        for agent_row in net.matrix(k):
            inputs = [previous.rows[j] for j, v in enumerate(agent_row) if v and previous.valid[j]]
            if not inputs:
                rows.append(zero_row)
                valid.append(False)
                continue
            rows.append(fuse(inputs, precisions).fused_row)
            valid.append(True)
        profiles.append(WeightProfile(tuple(rows), tuple(valid)))
        invalid = valid.count(False)
        if invalid:
            logger.debug(f"Layer {k + 1}: {invalid} agent(s) receive no information")
    return profiles


def covariance(profile: WeightProfile, precisions: PrecisionVector) -> CovarianceMatrix:
    """Layer covariance as the product A diag(1/w) A^T"""
    _check_precisions(len(profile.rows[0]), precisions)
    scaled = [[v / w for v, w in zip(row, precisions)] for row in profile.rows]
    product = matmul(scaled, transpose(profile.rows))
    return CovarianceMatrix(tuple(tuple(row) for row in product))


def covariance_entrywise(profile: WeightProfile, precisions: PrecisionVector) -> CovarianceMatrix:
    """Layer covariance entry by entry, xi_ij = sum_l A_il A_jl / w_l"""
    _check_precisions(len(profile.rows[0]), precisions)
    entries = _covariance_of(profile.rows, precisions)
    return CovarianceMatrix(tuple(tuple(row) for row in entries))


def propagate(net: LayeredNetwork, precisions: PrecisionVector) -> Propagation:
    """Weight profiles and covariance matrices for every explicit layer"""
    profiles = weight_profiles(net, precisions)
    covariances = [covariance(p, precisions) for p in profiles]
    return Propagation(profiles, covariances)


def estimate_from_rows(rows: Sequence[Sequence[Fraction]], precisions: PrecisionVector) -> FinalEstimate:
    """Final estimate of an aggregator listening to estimates with the given rows"""
    if not rows:
        raise NoInformationError("No agent of the last explicit layer carries an estimate")
    alpha = fuse(rows, precisions).fused_row
    variance = sum((a * a / w for a, w in zip(alpha, precisions) if a), ZERO)
    return FinalEstimate(alpha, variance, 1 / precisions.total)


def final_estimate(net: LayeredNetwork, precisions: PrecisionVector) -> FinalEstimate:
    """
    The implicit aggregator's estimate and its variance

    Raises:
        NoInformationError: If every last-layer agent is invalid
    """
    last = weight_profiles(net, precisions)[-1]
    return estimate_from_rows(last.valid_rows(), precisions)


def final_bias(alpha: Sequence[Fraction], biases: Sequence[Fraction]) -> Fraction:
    """
    Bias of the final estimate under constant additive first-layer biases

    Raises:
        ContractViolation: On length mismatch or weights not summing to 1
    """
    if len(alpha) != len(biases):
        raise ContractViolation(f"{len(alpha)} weights but {len(biases)} biases")
    if sum((Fraction(a) for a in alpha), ZERO) != ONE:
        raise ContractViolation("Final weights must sum to 1")
    return sum((Fraction(a) * Fraction(b) for a, b in zip(alpha, biases)), ZERO)


def _simulate_chunk(
    chunk: Tuple[int, int],
    seed: int,
    weights: np.ndarray,
    sigmas: np.ndarray,
    offsets: np.ndarray,
) -> np.ndarray:
    index, size = chunk
    rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence([seed, index])))
    noise = rng.standard_normal((size, len(weights)))
    measurements = offsets + noise * sigmas
    return measurements @ weights


def simulate_alpha(
    alpha: Sequence[Fraction],
    precisions: PrecisionVector,
    true_s: float,
    biases: Optional[Sequence[Fraction]] = None,
    trials: int = 100000,
    seed: int = 0,
    max_workers: int = 1,
) -> SimulationResult:
    """
    Monte Carlo of a fixed linear estimator on Gaussian measurements

    Trials are cut into fixed-size chunks; chunk ``c`` draws from
    ``PCG64(SeedSequence([seed, c]))``. The output therefore depends on the
    seed and trial count only, never on ``max_workers``.
    """
    if trials < 2:
        raise ContractViolation(f"Simulation needs at least 2 trials, got {trials}")
    n = len(alpha)
    _check_precisions(n, precisions)
    if biases is None:
        biases = [ZERO] * n
    if len(biases) != n:
        raise ContractViolation(f"{len(biases)} biases for {n} first-layer agents")

    weights = np.array([float(a) for a in alpha])
    sigmas = np.array([math.sqrt(float(v)) for v in precisions.variances])
    offsets = np.array([true_s + float(b) for b in biases])

    chunks = [
        (c, min(SIMULATION_CHUNK, trials - start))
        for c, start in enumerate(range(0, trials, SIMULATION_CHUNK))
    ]
    worker = partial(_simulate_chunk, seed=seed, weights=weights, sigmas=sigmas, offsets=offsets)
    samples = np.concatenate(run_ordered(worker, chunks, max_workers=max_workers))

    mean = float(samples.mean())
    variance = float(samples.var(ddof=1))
    fourth = float(np.mean((samples - mean) ** 4))
    variance_stderr = math.sqrt(max(fourth - variance**2, 0.0) / trials)
    logger.debug(f"Simulated {trials} trials: mean={mean:.6f}, variance={variance:.6f}")
    return SimulationResult(mean, variance, variance_stderr, trials, seed)


def simulate(
    net: LayeredNetwork,
    precisions: PrecisionVector,
    true_s: float,
    biases: Optional[Sequence[Fraction]] = None,
    trials: int = 100000,
    seed: int = 0,
    max_workers: int = 1,
) -> SimulationResult:
    """Draw first-layer measurements and report moments of the final estimate"""
    estimate = final_estimate(net, precisions)
    return simulate_alpha(estimate.alpha, precisions, true_s, biases, trials, seed, max_workers)
