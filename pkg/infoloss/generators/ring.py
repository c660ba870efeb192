"""
Ring Generator - the extremal hub-and-private-source topology
"""

from typing import Any, Dict

from infoloss.core.analysis import ring_network
from infoloss.core.network import LayeredNetwork

from .base import BaseGenerator


class RingGenerator(BaseGenerator):
    """One hub feeding n second-layer agents, each with its own private source"""

    def __init__(self, n: int, **kwargs):
        super().__init__(**kwargs)
        self.n = int(n)

    @property
    def kind(self) -> str:
        return "ring"

    def build(self) -> LayeredNetwork:
        return ring_network(self.n)

    def describe(self) -> Dict[str, Any]:
        return {"kind": self.kind, "n": self.n}
