"""
Network analysis - ideality, W-motifs, reduction and extremal networks
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Dict, Iterator, List, Optional, Sequence, Tuple

import networkx as nx

from infoloss.core.errors import ContractViolation
from infoloss.core.estimation import FinalEstimate, weight_profiles
from infoloss.core.linalg import Vector, format_rational, in_row_space, solve_combination
from infoloss.core.network import LayeredNetwork, PrecisionVector, out_degrees, path_matrix

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class IdealityVerdict:
    """
    Whether the final estimate equals the ideal one

    ``certificate`` holds one coefficient per last-layer agent (zero for
    invalid agents) such that certificate^T A = w, A being the last layer's
    weight profile. It is ``None`` for non-ideal networks or when the check
    was run without asking for it.
    """

    ideal: bool
    certificate: Optional[Vector] = None
    precisions: Optional[Tuple[Fraction, ...]] = None

    def ideal_weights(self, profile_rows: Sequence[Sequence[Fraction]]) -> Optional[Vector]:
        """The weights the certificate reproduces, i.e. w / sum(w)"""
        if self.certificate is None or self.precisions is None:
            return None
        total = sum(self.precisions, Fraction(0))
        width = len(self.precisions)
        combined = [Fraction(0)] * width
        for c, row in zip(self.certificate, profile_rows):
            if c:
                for l in range(width):
                    combined[l] += c * row[l]
        return tuple(v / total for v in combined)

    def to_dict(self) -> Dict[str, Any]:
        data: Dict[str, Any] = {"ideal": self.ideal}
        if self.certificate is not None:
            data["certificate"] = [format_rational(c) for c in self.certificate]
        return data


@dataclass(frozen=True)
class WMotifWitness:
    """Two layer-k agents sharing source m, each with a private source n1 / n2"""

    to_layer: int
    agents: Tuple[int, int]
    sources: Tuple[int, int, int]

    def to_dict(self) -> Dict[str, Any]:
        return {"to_layer": self.to_layer, "agents": list(self.agents), "sources": list(self.sources)}


def _require_three_layers(net: LayeredNetwork, operation: str) -> None:
    if net.num_layers != 2:
        raise ContractViolation(
            f"{operation} needs a three-layer network (two explicit layers plus the "
            f"aggregator), got {net.num_layers} explicit layers"
        )


def is_ideal(
    net: LayeredNetwork, precisions: PrecisionVector, with_certificate: bool = True
) -> IdealityVerdict:
    """
    Exact test of whether w lies in the row space of the last layer's weights

    A first-layer measurement nobody listens to makes the network non-ideal
    without any special casing: its w coordinate can never be matched.
    """
    last = weight_profiles(net, precisions)[-1]
    rows = last.valid_rows()
    target = precisions.values
    if not rows:
        return IdealityVerdict(False)

    if not with_certificate:
        return IdealityVerdict(in_row_space(rows, target))

    coefficients = solve_combination(rows, target)
    if coefficients is None:
        return IdealityVerdict(False)
    certificate = [Fraction(0)] * last.size
    for index, c in zip(last.valid_indices(), coefficients):
        certificate[index] = c
    return IdealityVerdict(True, tuple(certificate), target)


def is_ideal_three_layer(net: LayeredNetwork) -> bool:
    """
    Three-layer ideality from C^(1) alone: is the all-ones vector in its row space?

    This does not depend on the precisions.
    """
    _require_three_layers(net, "is_ideal_three_layer")
    return in_row_space(net.matrix(1), [1] * net.layer_sizes[0])


def iter_w_motifs(net: LayeredNetwork) -> Iterator[WMotifWitness]:
    """Every W-motif witness, in lexicographic (layer, agents, sources) order"""
    for k in range(2, net.num_layers + 1):
        reach = path_matrix(net, 1, k)
        supports = [frozenset(j + 1 for j, v in enumerate(row) if v) for row in reach]
        for i1 in range(len(supports)):
            for i2 in range(i1 + 1, len(supports)):
                a, b = supports[i1], supports[i2]
                shared = a & b
                if not shared:
                    continue
                only_a, only_b = a - b, b - a
                if not only_a or not only_b:
                    continue
                for n1 in sorted(only_a):
                    for m in sorted(shared):
                        for n2 in sorted(only_b):
                            yield WMotifWitness(k, (i1 + 1, i2 + 1), (n1, m, n2))


def has_w_motif(net: LayeredNetwork) -> Optional[WMotifWitness]:
    return next(iter_w_motifs(net), None)


def _input_sets(rows: Sequence[Sequence[int]]) -> List[frozenset]:
    return [frozenset(j for j, v in enumerate(row) if v) for row in rows]


def _first_containment(rows: Sequence[Sequence[int]]) -> Optional[Tuple[int, int]]:
    sets = _input_sets(rows)
    for i, contained in enumerate(sets):
        if not contained:
            continue
        for j, container in enumerate(sets):
            if i != j and contained <= container:
                return i, j
    return None


def is_reduced(net: LayeredNetwork) -> bool:
    """No nonempty second-layer input set is contained in another's"""
    _require_three_layers(net, "is_reduced")
    return _first_containment(net.matrix(1)) is None


def reduce(net: LayeredNetwork) -> LayeredNetwork:
    """
    Remove input-set containments from a three-layer network

    While some nonempty input set g(i) is contained in g(j), the edges from
    g(i) into agent j are deleted (row j minus row i). The row space of C^(1),
    and with it the final estimate, is unchanged. Two identical input sets
    leave the later agent with no inputs at all.
    """
    _require_three_layers(net, "reduce")
    rows = [list(row) for row in net.matrix(1)]
    steps = 0
    while True:
        pair = _first_containment(rows)
        if pair is None:
            break
        i, j = pair
        rows[j] = [b - a for a, b in zip(rows[i], rows[j])]
        steps += 1
        logger.debug(f"Reduction step {steps}: removed inputs of agent {i + 1} from agent {j + 1}")
    if steps:
        logger.info(f"Reduced network in {steps} step(s): {net.edge_count()} -> "
                    f"{sum(map(sum, rows))} edges")
    return net.with_matrix(1, rows)


def equal_outdegree_components(net: LayeredNetwork) -> bool:
    """
    Do first-layer agents have equal out-degree within every connected component?

    Components are taken in the undirected graph of the first two layers. A
    first-layer agent with no outputs makes the answer false.
    """
    _require_three_layers(net, "equal_outdegree_components")
    degrees = out_degrees(net, 1)
    if 0 in degrees:
        return False

    graph = nx.Graph()
    graph.add_nodes_from((1, j) for j in range(1, net.layer_sizes[0] + 1))
    graph.add_nodes_from((2, i) for i in range(1, net.layer_sizes[1] + 1))
    for i, row in enumerate(net.matrix(1), start=1):
        for j, v in enumerate(row, start=1):
            if v:
                graph.add_edge((1, j), (2, i))

    for component in nx.connected_components(graph):
        seen = {degrees[j - 1] for layer, j in component if layer == 1}
        if len(seen) > 1:
            return False
    return True


def ring_network(n: int) -> LayeredNetwork:
    """
    A hub feeding n second-layer agents, each also fed by its own private source

    The hub is first-layer agent 1; agent i of layer 2 listens to agents 1
    and i + 1.
    """
    if n < 1:
        raise ContractViolation(f"Ring network needs n >= 1, got {n}")
    rows = tuple(
        tuple(1 if c == 0 or c == i + 1 else 0 for c in range(n + 1)) for i in range(n)
    )
    return LayeredNetwork((n + 1, n), (rows,))


def ring_variance(n: int) -> Fraction:
    """Closed-form final variance of ring_network(n) with unit precisions"""
    if n < 1:
        raise ContractViolation(f"Ring network needs n >= 1, got {n}")
    return Fraction(1, 4) + Fraction(1, 4 * n)


def naive_weights(net: LayeredNetwork) -> Vector:
    """
    Out-degree weighted average of the first-layer measurements

    The final aggregator can always form this estimate, so its variance bounds
    the final variance from above.
    """
    _require_three_layers(net, "naive_weights")
    degrees = out_degrees(net, 1)
    if 0 in degrees:
        raise ContractViolation(
            f"First-layer agent {degrees.index(0) + 1} has out-degree 0"
        )
    total = sum(degrees)
    return tuple(Fraction(d, total) for d in degrees)


def naive_variance(net: LayeredNetwork, precisions: PrecisionVector) -> Fraction:
    weights = naive_weights(net)
    return sum((a * a / w for a, w in zip(weights, precisions)), Fraction(0))


def nonnegative_weights(estimate: FinalEstimate) -> bool:
    """Is the final estimate a convex combination of the measurements?"""
    return all(a >= 0 for a in estimate.alpha)
