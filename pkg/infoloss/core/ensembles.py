"""
Random layered networks and the probability that they are ideal

Trial seeds are derived from the master seed and the *content* of a sweep
cell (layer sizes and p), never from its position in the grid, so adding
cells to a sweep leaves the trials of existing cells untouched.
"""

import logging
import math
import os
import tempfile
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Sequence, Tuple, Union

import numpy as np
import pandas as pd
import yaml

from infoloss.core.analysis import is_ideal, is_ideal_three_layer
from infoloss.core.errors import ContractViolation
from infoloss.core.estimation import GENERATOR_NAME
from infoloss.core.linalg import rank
from infoloss.core.network import LayeredNetwork, PrecisionVector
from infoloss.core.parallel import run_ordered

logger = logging.getLogger(__name__)

DEFAULT_SEED = 20170612
DEFAULT_TRIALS = 200
P_RESOLUTION = 10**9
Z_95 = 1.959963984540054


def _check_probability(p: float) -> None:
    if not 0 < p <= 1:
        raise ContractViolation(f"Connection probability must be in (0, 1], got {p}")


def _check_sizes(layer_sizes: Sequence[int]) -> Tuple[int, ...]:
    sizes = tuple(int(s) for s in layer_sizes)
    if not sizes or any(s < 1 for s in sizes):
        raise ContractViolation(f"Layer sizes must be positive, got {list(layer_sizes)}")
    return sizes


def _is_int(value: Any) -> bool:
    return isinstance(value, int) and not isinstance(value, bool)


def _int_field(data: Dict[str, Any], key: str, default: int) -> int:
    value = data.get(key, default)
    if not _is_int(value):
        raise ContractViolation(f"{key} must be an integer, got {value!r}")
    return value


def derive_seed(master_seed: int, layer_sizes: Sequence[int], p: float, trial: int) -> int:
    """
    64-bit seed of one trial

    The entropy words (master seed, depth, each layer size, p in units of
    1e-9, trial index) are mixed by numpy's ``SeedSequence`` hash and the
    first 64-bit word of its state is used.
    """
    entropy = [int(master_seed), len(layer_sizes), *map(int, layer_sizes),
               int(round(p * P_RESOLUTION)), int(trial)]
    state = np.random.SeedSequence(entropy).generate_state(1, dtype=np.uint64)
    return int(state[0])


def random_network(layer_sizes: Sequence[int], p: float, seed: int) -> LayeredNetwork:
    """
    Every edge between consecutive layers present independently with probability p

    Raises:
        ContractViolation: If p is outside (0, 1] or a layer size is not positive
    """
    _check_probability(p)
    sizes = _check_sizes(layer_sizes)
    rng = np.random.default_rng(seed)
    matrices = []
    for k in range(len(sizes) - 1):
        draws = rng.random((sizes[k + 1], sizes[k])) < p
        matrices.append(tuple(tuple(int(v) for v in row) for row in draws))
    return LayeredNetwork(sizes, tuple(matrices))


@dataclass(frozen=True)
class SweepSpec:
    """Grid of layer sizes x connection probabilities, with trial count and master seed"""

    layer_size_grid: List[Tuple[int, ...]]
    probabilities: List[float]
    trials: int = DEFAULT_TRIALS
    master_seed: int = DEFAULT_SEED

    def __post_init__(self):
        grid = [_check_sizes(sizes) for sizes in self.layer_size_grid]
        object.__setattr__(self, "layer_size_grid", grid)
        object.__setattr__(self, "probabilities", [float(p) for p in self.probabilities])
        if self.trials < 1:
            raise ContractViolation(f"A sweep needs at least one trial, got {self.trials}")
        for p in self.probabilities:
            _check_probability(p)

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "SweepSpec":
        """
        Build a spec from a mapping

        Example YAML:
            layer_size_grid: [[100, 90], [100, 110]]
            probabilities: [0.1, 0.5, 0.9]
            trials: 100
            master_seed: 7

        Raises:
            ContractViolation: Unknown keys or values of the wrong shape
        """
        unknown = sorted(set(data) - {"layer_size_grid", "probabilities", "trials", "master_seed"})
        if unknown:
            raise ContractViolation(f"Unknown sweep spec key(s): {', '.join(unknown)}")

        grid = data.get("layer_size_grid", [])
        if not isinstance(grid, list):
            raise ContractViolation(f"layer_size_grid must be a list of size lists, got {grid!r}")
        for entry in grid:
            if not isinstance(entry, list) or not all(_is_int(s) for s in entry):
                raise ContractViolation(f"layer_size_grid entry must be a list of integers, got {entry!r}")

        probabilities = data.get("probabilities", [])
        if not isinstance(probabilities, list) or not all(
            isinstance(p, (int, float)) and not isinstance(p, bool) for p in probabilities
        ):
            raise ContractViolation(f"probabilities must be a list of numbers, got {probabilities!r}")

        return cls(
            layer_size_grid=[tuple(sizes) for sizes in grid],
            probabilities=list(probabilities),
            trials=_int_field(data, "trials", DEFAULT_TRIALS),
            master_seed=_int_field(data, "master_seed", DEFAULT_SEED),
        )

    @classmethod
    def from_yaml(cls, path: Union[str, Path]) -> "SweepSpec":
        with open(path, "r", encoding="utf-8") as f:
            data = yaml.safe_load(f) or {}
        if not isinstance(data, dict):
            raise ContractViolation(f"Sweep spec {path} must be a mapping")
        return cls.from_dict(data)


@dataclass(frozen=True)
class EnsembleResult:
    """One sweep cell"""

    layer_sizes: Tuple[int, ...]
    p: float
    trials: int
    ideal_count: int
    seed: int
    generator: str = field(default=GENERATOR_NAME)

    @property
    def fraction(self) -> float:
        return self.ideal_count / self.trials

    @property
    def ci95_halfwidth(self) -> float:
        """Normal-approximation binomial half-width"""
        f = self.fraction
        return Z_95 * math.sqrt(f * (1 - f) / self.trials)

    def to_row(self, max_layers: int) -> Dict[str, Any]:
        row: Dict[str, Any] = {"n_layers": len(self.layer_sizes) + 1}
        for k in range(max_layers):
            row[f"L{k + 1}"] = self.layer_sizes[k] if k < len(self.layer_sizes) else ""
        row.update({
            "p": self.p,
            "trials": self.trials,
            "ideal_count": self.ideal_count,
            "fraction": self.fraction,
            "ci95_halfwidth": self.ci95_halfwidth,
            "master_seed": self.seed,
            "generator_name": self.generator,
        })
        return row


def _trial_is_ideal(task: Tuple[Tuple[int, ...], float, int]) -> bool:
    sizes, p, seed = task
    net = random_network(sizes, p, seed)
    if net.num_layers == 2:
        return is_ideal_three_layer(net)
    return is_ideal(net, PrecisionVector.ones(sizes[0]), with_certificate=False).ideal


def _trial_is_full_rank(task: Tuple[Tuple[int, ...], float, int]) -> bool:
    sizes, p, seed = task
    net = random_network(sizes, p, seed)
    return rank(net.matrix(1)) == sizes[0]


def _trial_tasks(sizes: Tuple[int, ...], p: float, trials: int, master_seed: int) -> list:
    return [(sizes, p, derive_seed(master_seed, sizes, p, t)) for t in range(trials)]


def p_ideal(
    layer_sizes: Sequence[int],
    p: float,
    trials: int,
    master_seed: int = DEFAULT_SEED,
    max_workers: int = 1,
) -> EnsembleResult:
    """
    Fraction of random networks that are ideal

    Three-layer networks use the precision-free row-space test on C^(1);
    deeper stacks use the general test with unit precisions.
    """
    _check_probability(p)
    sizes = _check_sizes(layer_sizes)
    if trials < 1:
        raise ContractViolation(f"p_ideal needs at least one trial, got {trials}")
    tasks = _trial_tasks(sizes, p, trials, master_seed)
    outcomes = run_ordered(_trial_is_ideal, tasks, max_workers=max_workers, use_processes=True)
    return EnsembleResult(sizes, float(p), trials, sum(outcomes), master_seed)


def full_rank_count(
    layer_sizes: Sequence[int],
    p: float,
    trials: int,
    master_seed: int = DEFAULT_SEED,
    max_workers: int = 1,
) -> int:
    """
    Trials whose C^(1) has full column rank, on the same trial set as p_ideal

    Full column rank means C^(1) has an invertible L1 x L1 submatrix, which
    puts the all-ones vector in its row space, so this count never exceeds
    the three-layer ideal count.
    """
    _check_probability(p)
    sizes = _check_sizes(layer_sizes)
    if len(sizes) < 2:
        raise ContractViolation("full_rank_count needs at least two explicit layers")
    tasks = _trial_tasks(sizes, p, trials, master_seed)
    return sum(run_ordered(_trial_is_full_rank, tasks, max_workers=max_workers, use_processes=True))


def sweep_grid(
    first_layer_sizes: Sequence[int], offsets: Sequence[int], depth: int = 3
) -> List[Tuple[int, ...]]:
    """
    Layer-size tuples for a transition sweep

    ``depth`` counts the aggregator: depth 3 varies L2 = L1 + offset; depth 4
    keeps L2 = L1 and varies L3 = L1 + offset. Non-positive sizes are skipped.
    """
    if depth not in (3, 4):
        raise ContractViolation(f"Sweep depth must be 3 or 4, got {depth}")
    grid = []
    for first in first_layer_sizes:
        for offset in offsets:
            varied = first + offset
            if varied < 1:
                continue
            grid.append((first, varied) if depth == 3 else (first, first, varied))
    return grid


def sweep(spec: SweepSpec, max_workers: int = 1) -> List[EnsembleResult]:
    """Evaluate every (layer sizes, p) cell of the spec in grid order"""
    results = []
    total = len(spec.layer_size_grid) * len(spec.probabilities)
    for sizes in spec.layer_size_grid:
        for p in spec.probabilities:
            result = p_ideal(sizes, p, spec.trials, spec.master_seed, max_workers)
            results.append(result)
            logger.info(
                f"[{len(results)}/{total}] layers={sizes} p={p:g}: "
                f"{result.ideal_count}/{result.trials} ideal"
            )
    return results


def results_frame(results: Sequence[EnsembleResult]) -> pd.DataFrame:
    max_layers = max((len(r.layer_sizes) for r in results), default=2)
    max_layers = max(max_layers, 2)
    columns = (["n_layers"] + [f"L{k + 1}" for k in range(max_layers)] +
               ["p", "trials", "ideal_count", "fraction", "ci95_halfwidth",
                "master_seed", "generator_name"])
    return pd.DataFrame([r.to_row(max_layers) for r in results], columns=columns)


def results_csv(results: Sequence[EnsembleResult]) -> str:
    return results_frame(results).to_csv(index=False, float_format="%.6f", lineterminator="\n")


def write_csv(results: Sequence[EnsembleResult], path: Union[str, Path]) -> Path:
    """Write the CSV through a temporary file and an atomic rename"""
    path = atomic_write_text(path, results_csv(results))
    logger.info(f"Wrote {len(results)} sweep rows to {path}")
    return path


def atomic_write_text(path: Union[str, Path], text: str) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp_name = tempfile.mkstemp(dir=str(path.parent), prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as f:
            f.write(text)
        os.replace(tmp_name, path)
    except BaseException:
        if os.path.exists(tmp_name):
            os.unlink(tmp_name)
        raise
    return path
