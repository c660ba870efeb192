"""
Bernoulli Generator - random layered networks

Each edge between consecutive layers is present independently with
probability p; the draw is fully determined by the seed.
"""

from typing import Any, Dict, Sequence

from infoloss.core.ensembles import DEFAULT_SEED, random_network
from infoloss.core.network import LayeredNetwork

from .base import BaseGenerator


class BernoulliGenerator(BaseGenerator):

    def __init__(self, layer_sizes: Sequence[int], p: float, seed: int = DEFAULT_SEED, **kwargs):
        super().__init__(**kwargs)
        self.layer_sizes = tuple(int(s) for s in layer_sizes)
        self.p = float(p)
        self.seed = int(seed)

    @property
    def kind(self) -> str:
        return "random"

    def build(self) -> LayeredNetwork:
        self.logger.debug(f"Drawing random network {self.layer_sizes} with p={self.p}, seed={self.seed}")
        return random_network(self.layer_sizes, self.p, self.seed)

    def describe(self) -> Dict[str, Any]:
        return {"kind": self.kind, "layer_sizes": list(self.layer_sizes), "p": self.p, "seed": self.seed}
