"""
Layered feedforward networks - representation, validation, queries and file I/O

Layers and agents are 1-indexed in every public function, report and file,
matching the usual a_j^(k) notation. The final aggregating agent is never
stored: it is implicit and always listens to every agent of the last
explicit layer.
"""

import json
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Any, Dict, FrozenSet, Iterator, List, Optional, Sequence, Tuple, Union

import numpy as np

from infoloss.core.errors import ContractViolation, NetworkFormatError, NetworkStructureError
from infoloss.core.linalg import format_rational, parse_rational

logger = logging.getLogger(__name__)

BinaryMatrix = Tuple[Tuple[int, ...], ...]
Agent = Tuple[int, int]

FILE_KEYS = {"layers", "connectivity", "precisions", "variances"}


@dataclass(frozen=True)
class LayeredNetwork:
    """
    Explicit layers L_1 .. L_m and the 0/1 matrices between them

    ``connectivity[k - 1]`` is C^(k), of shape L_{k+1} x L_k, with entry
    (i, j) = 1 iff agent j of layer k talks to agent i of layer k+1.
    """

    layer_sizes: Tuple[int, ...]
    connectivity: Tuple[BinaryMatrix, ...] = ()

    def __post_init__(self):
        sizes = tuple(self.layer_sizes)
        matrices = tuple(
            tuple(tuple(row) for row in matrix) for matrix in self.connectivity
        )
        object.__setattr__(self, "layer_sizes", sizes)
        object.__setattr__(self, "connectivity", matrices)
        self._check_structure()

    def _check_structure(self):
        if not self.layer_sizes:
            raise NetworkStructureError("A network needs at least one layer")
        for k, size in enumerate(self.layer_sizes, start=1):
            if isinstance(size, bool) or not isinstance(size, (int, np.integer)) or size < 1:
                raise NetworkStructureError(f"Layer {k} size must be a positive integer, got {size!r}")
        if len(self.connectivity) != len(self.layer_sizes) - 1:
            raise NetworkStructureError(
                f"Expected {len(self.layer_sizes) - 1} connectivity matrices for "
                f"{len(self.layer_sizes)} layers, got {len(self.connectivity)}"
            )
        for k, matrix in enumerate(self.connectivity, start=1):
            rows, cols = self.layer_sizes[k], self.layer_sizes[k - 1]
            if len(matrix) != rows or any(len(row) != cols for row in matrix):
                raise NetworkStructureError(
                    f"Connectivity matrix C^({k}) must have shape {rows}x{cols}"
                )
            for row in matrix:
                for entry in row:
                    if entry not in (0, 1) or isinstance(entry, bool):
                        raise NetworkStructureError(
                            f"Connectivity matrix C^({k}) has entry {entry!r}, expected 0 or 1"
                        )

    @property
    def num_layers(self) -> int:
        """Number of explicit layers (the implicit aggregator is not counted)"""
        return len(self.layer_sizes)

    def matrix(self, k: int) -> BinaryMatrix:
        """C^(k), the matrix from layer k to layer k+1"""
        if not 1 <= k < self.num_layers:
            raise NetworkStructureError(
                f"No connectivity matrix C^({k}) in a {self.num_layers}-layer network"
            )
        return self.connectivity[k - 1]

    def to_numpy(self, k: int) -> np.ndarray:
        return np.array(self.matrix(k), dtype=np.int64).reshape(
            self.layer_sizes[k], self.layer_sizes[k - 1]
        )

    def edge_count(self) -> int:
        return sum(sum(sum(row) for row in matrix) for matrix in self.connectivity)

    def with_matrix(self, k: int, matrix: Sequence[Sequence[int]]) -> "LayeredNetwork":
        """Copy of this network with C^(k) replaced"""
        self.matrix(k)
        matrices = list(self.connectivity)
        matrices[k - 1] = tuple(tuple(row) for row in matrix)
        return LayeredNetwork(self.layer_sizes, tuple(matrices))

    def to_dict(self) -> Dict[str, Any]:
        return {
            "layers": list(self.layer_sizes),
            "connectivity": [[list(row) for row in matrix] for matrix in self.connectivity],
        }

    @classmethod
    def from_matrices(cls, *matrices: Sequence[Sequence[int]]) -> "LayeredNetwork":
        """
        Build a network from its connectivity matrices alone

        Example:
            >>> net = LayeredNetwork.from_matrices([[1, 1, 0], [0, 1, 1]])
            >>> net.layer_sizes
            (3, 2)
        """
        if not matrices:
            raise NetworkStructureError("from_matrices() needs at least one matrix")
        sizes = [len(matrices[0][0]) if matrices[0] else 0]
        for matrix in matrices:
            sizes.append(len(matrix))
        return cls(tuple(sizes), tuple(tuple(tuple(r) for r in m) for m in matrices))


@dataclass(frozen=True)
class PrecisionVector:
    """Exact inverse variances w_i = 1/sigma_i^2 of the first-layer measurements"""

    values: Tuple[Fraction, ...]

    def __post_init__(self):
        values = tuple(Fraction(v) for v in self.values)
        for i, v in enumerate(values, start=1):
            if v <= 0:
                raise ContractViolation(f"Precision w_{i} must be positive, got {v}")
        object.__setattr__(self, "values", values)

    @classmethod
    def ones(cls, n: int) -> "PrecisionVector":
        return cls(tuple(Fraction(1) for _ in range(n)))

    @classmethod
    def from_variances(cls, variances: Sequence[Union[int, Fraction, str]]) -> "PrecisionVector":
        parsed = [parse_rational(v) for v in variances]
        for i, v in enumerate(parsed, start=1):
            if v <= 0:
                raise ContractViolation(f"Variance sigma_{i}^2 must be positive, got {v}")
        return cls(tuple(1 / v for v in parsed))

    @property
    def variances(self) -> Tuple[Fraction, ...]:
        return tuple(1 / v for v in self.values)

    @property
    def total(self) -> Fraction:
        return sum(self.values, Fraction(0))

    def __len__(self) -> int:
        return len(self.values)

    def __iter__(self) -> Iterator[Fraction]:
        return iter(self.values)

    def __getitem__(self, index: int) -> Fraction:
        return self.values[index]


@dataclass
class ValidationReport:
    """Agents that are cut off from the flow of information"""

    no_inputs: List[Agent] = field(default_factory=list)
    no_outputs: List[Agent] = field(default_factory=list)

    @property
    def isolated_agents(self) -> List[Agent]:
        return sorted(set(self.no_inputs) | set(self.no_outputs))

    @property
    def ok(self) -> bool:
        return not self.no_inputs and not self.no_outputs

    def to_dict(self) -> Dict[str, Any]:
        return {
            "ok": self.ok,
            "no_inputs": [list(a) for a in self.no_inputs],
            "no_outputs": [list(a) for a in self.no_outputs],
        }


def _check_layer(net: LayeredNetwork, layer: int) -> None:
    if not 1 <= layer <= net.num_layers:
        raise NetworkStructureError(
            f"Layer {layer} out of range for a {net.num_layers}-layer network"
        )


def _check_agent(net: LayeredNetwork, layer: int, agent: int) -> None:
    _check_layer(net, layer)
    if not 1 <= agent <= net.layer_sizes[layer - 1]:
        raise NetworkStructureError(
            f"Agent {agent} out of range for layer {layer} of size {net.layer_sizes[layer - 1]}"
        )


def validate(net: LayeredNetwork) -> ValidationReport:
    """
    List agents with no inputs (layers 2..m) or no outputs (layers 1..m-1)

    Structural problems were already rejected when the network was built.
    """
    report = ValidationReport()
    for k in range(1, net.num_layers):
        matrix = net.to_numpy(k)
        for j in np.flatnonzero(matrix.sum(axis=0) == 0):
            report.no_outputs.append((k, int(j) + 1))
        for i in np.flatnonzero(matrix.sum(axis=1) == 0):
            report.no_inputs.append((k + 1, int(i) + 1))
    report.no_inputs.sort()
    report.no_outputs.sort()
    return report


def path_matrix(net: LayeredNetwork, from_layer: int, to_layer: int) -> BinaryMatrix:
    """
    Reachability from ``from_layer`` to ``to_layer``

    Entry (i, j) is 1 iff there is a directed path from agent j of
    ``from_layer`` to agent i of ``to_layer``: the boolean product of the
    connectivity matrices in between.
    """
    _check_layer(net, from_layer)
    _check_layer(net, to_layer)
    if from_layer >= to_layer:
        raise NetworkStructureError(
            f"path_matrix needs from_layer < to_layer, got {from_layer} -> {to_layer}"
        )
    reach = net.to_numpy(from_layer) > 0
    for k in range(from_layer + 1, to_layer):
        reach = (net.to_numpy(k).astype(bool).astype(np.int64) @ reach.astype(np.int64)) > 0
    return tuple(tuple(int(v) for v in row) for row in reach)


def out_degrees(net: LayeredNetwork, layer: int) -> Tuple[int, ...]:
    """
    Column sums of C^(layer)

    Agents of the last explicit layer all report to the implicit aggregator,
    so their out-degree is 1.
    """
    _check_layer(net, layer)
    if layer == net.num_layers:
        return tuple(1 for _ in range(net.layer_sizes[-1]))
    return tuple(int(v) for v in net.to_numpy(layer).sum(axis=0))


def in_degrees(net: LayeredNetwork, layer: int) -> Tuple[int, ...]:
    _check_layer(net, layer)
    if layer == 1:
        return tuple(0 for _ in range(net.layer_sizes[0]))
    return tuple(int(v) for v in net.to_numpy(layer - 1).sum(axis=1))


def input_set(net: LayeredNetwork, layer: int, agent: int) -> FrozenSet[int]:
    """Agents of ``layer - 1`` that send to ``agent`` of ``layer``"""
    _check_agent(net, layer, agent)
    if layer == 1:
        raise NetworkStructureError("First-layer agents have no inputs")
    row = net.matrix(layer - 1)[agent - 1]
    return frozenset(j + 1 for j, v in enumerate(row) if v)


def output_set(net: LayeredNetwork, layer: int, agent: int) -> FrozenSet[int]:
    """Agents of ``layer + 1`` that listen to ``agent`` of ``layer``"""
    _check_agent(net, layer, agent)
    if layer == net.num_layers:
        raise NetworkStructureError("The last explicit layer only reports to the aggregator")
    matrix = net.matrix(layer)
    return frozenset(i + 1 for i, row in enumerate(matrix) if row[agent - 1])


def first_layer_inputs(net: LayeredNetwork, layer: int, agent: int) -> FrozenSet[int]:
    """The input map g: first-layer agents with a directed path to ``agent``"""
    _check_agent(net, layer, agent)
    if layer == 1:
        return frozenset({agent})
    row = path_matrix(net, 1, layer)[agent - 1]
    return frozenset(j + 1 for j, v in enumerate(row) if v)


# ---------------------------------------------------------------------------
# File format
# ---------------------------------------------------------------------------


def _require_int_list(value: Any, field_name: str, path: Optional[str]) -> List[int]:
    if not isinstance(value, list):
        raise NetworkFormatError("expected an array", path=path, field=field_name)
    for i, v in enumerate(value):
        if isinstance(v, bool) or not isinstance(v, int):
            raise NetworkFormatError(
                f"expected an integer, got {v!r}", path=path, field=f"{field_name}[{i}]"
            )
    return value


def network_from_dict(
    data: Any, path: Optional[str] = None
) -> Tuple[LayeredNetwork, PrecisionVector]:
    """
    Build a network and its precisions from the parsed JSON object

    Raises:
        NetworkFormatError: Unknown keys, missing keys, wrong types or shapes
    """
    if not isinstance(data, dict):
        raise NetworkFormatError("top level must be a JSON object", path=path)
    unknown = sorted(set(data) - FILE_KEYS)
    if unknown:
        raise NetworkFormatError(f"unknown key(s): {', '.join(unknown)}", path=path, field=unknown[0])
    for required in ("layers", "connectivity"):
        if required not in data:
            raise NetworkFormatError("missing required key", path=path, field=required)
    if "precisions" in data and "variances" in data:
        raise NetworkFormatError(
            "give either precisions or variances, not both", path=path, field="variances"
        )

    layers = _require_int_list(data["layers"], "layers", path)
    connectivity = data["connectivity"]
    if not isinstance(connectivity, list):
        raise NetworkFormatError("expected an array of matrices", path=path, field="connectivity")
    for k, matrix in enumerate(connectivity):
        if not isinstance(matrix, list):
            raise NetworkFormatError("expected a matrix", path=path, field=f"connectivity[{k}]")
        for i, row in enumerate(matrix):
            _require_int_list(row, f"connectivity[{k}][{i}]", path)
            for j, v in enumerate(row):
                if v not in (0, 1):
                    raise NetworkFormatError(
                        f"entry must be 0 or 1, got {v}",
                        path=path,
                        field=f"connectivity[{k}][{i}][{j}]",
                    )

    try:
        net = LayeredNetwork(tuple(layers), tuple(tuple(tuple(r) for r in m) for m in connectivity))
    except NetworkStructureError as e:
        raise NetworkFormatError(str(e), path=path) from e

    precisions = PrecisionVector.ones(net.layer_sizes[0])
    for key in ("precisions", "variances"):
        if key not in data:
            continue
        raw = data[key]
        if not isinstance(raw, list) or len(raw) != net.layer_sizes[0]:
            raise NetworkFormatError(
                f"expected an array of {net.layer_sizes[0]} rationals", path=path, field=key
            )
        parsed = []
        for i, text in enumerate(raw):
            try:
                parsed.append(parse_rational(text))
            except (ValueError, ZeroDivisionError) as e:
                raise NetworkFormatError(str(e), path=path, field=f"{key}[{i}]") from e
        try:
            if key == "precisions":
                precisions = PrecisionVector(tuple(parsed))
            else:
                precisions = PrecisionVector.from_variances(parsed)
        except ContractViolation as e:
            raise NetworkFormatError(str(e), path=path, field=key) from e

    return net, precisions


def network_to_dict(
    net: LayeredNetwork, precisions: Optional[PrecisionVector] = None
) -> Dict[str, Any]:
    data = net.to_dict()
    if precisions is not None:
        if len(precisions) != net.layer_sizes[0]:
            raise ContractViolation(
                f"{len(precisions)} precisions for a first layer of {net.layer_sizes[0]} agents"
            )
        data["precisions"] = [format_rational(w) for w in precisions]
    return data


def loads(text: str, path: Optional[str] = None) -> Tuple[LayeredNetwork, PrecisionVector]:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise NetworkFormatError(e.msg, path=path, line=e.lineno) from e
    return network_from_dict(data, path=path)


def dumps(net: LayeredNetwork, precisions: Optional[PrecisionVector] = None) -> str:
    """Serialize with one matrix row per line so files stay readable"""
    data = network_to_dict(net, precisions)
    lines = ["{", f'  "layers": {json.dumps(data["layers"])},', '  "connectivity": [']
    for k, matrix in enumerate(data["connectivity"]):
        lines.append("    [")
        for i, row in enumerate(matrix):
            comma = "," if i < len(matrix) - 1 else ""
            lines.append(f"      {json.dumps(row)}{comma}")
        lines.append("    ]" + ("," if k < len(data["connectivity"]) - 1 else ""))
    if "precisions" in data:
        lines.append("  ],")
        lines.append(f'  "precisions": {json.dumps(data["precisions"])}')
    else:
        lines.append("  ]")
    lines.append("}")
    return "\n".join(lines) + "\n"


def load(path: Union[str, Path]) -> Tuple[LayeredNetwork, PrecisionVector]:
    """
    Load a network file

    Missing precisions default to all ones; ``variances`` are converted to
    precisions exactly.
    """
    path = Path(path)
    with open(path, "r", encoding="utf-8") as f:
        text = f.read()
    net, precisions = loads(text, path=str(path))
    logger.debug(f"Loaded {net.num_layers}-layer network {net.layer_sizes} from {path}")
    return net, precisions


def save(
    net: LayeredNetwork, precisions: Optional[PrecisionVector], path: Union[str, Path]
) -> None:
    path = Path(path)
    if path.parent and not path.parent.exists():
        path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8") as f:
        f.write(dumps(net, precisions))
    logger.debug(f"Saved network {net.layer_sizes} to {path}")
