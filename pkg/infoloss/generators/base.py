"""
Base Generator Interface - Strategy Pattern
"""

import logging
from abc import ABC, abstractmethod
from pathlib import Path
from typing import Any, Dict, Optional, Tuple, Union

from infoloss.core.network import LayeredNetwork, PrecisionVector, save

logger = logging.getLogger(__name__)

Generated = Tuple[LayeredNetwork, PrecisionVector]


class BaseGenerator(ABC):
    """
    Abstract base class for network sources

    Each generator implements:
    1. How to build a network (closed form, random draw, or file)
    2. Which precisions go with it (unit precisions unless given)
    """

    def __init__(self, precisions: Optional[PrecisionVector] = None):
        self.precisions = precisions
        self.logger = logger

    @property
    @abstractmethod
    def kind(self) -> str:
        """Generator identifier (e.g., 'ring', 'random')"""
        pass

    @abstractmethod
    def build(self) -> LayeredNetwork:
        """Construct the network topology"""
        pass

    def describe(self) -> Dict[str, Any]:
        """Parameters worth recording next to the generated network"""
        return {"kind": self.kind}

    def generate(self) -> Generated:
        """
        Main entry point: build the network and attach precisions
        """
        net = self.build()
        precisions = self.precisions or PrecisionVector.ones(net.layer_sizes[0])
        self.logger.info(
            f"✓ Generated network {self.describe()}: layers={list(net.layer_sizes)}, "
            f"edges={net.edge_count()}"
        )
        return net, precisions

    def write(self, path: Union[str, Path]) -> Generated:
        net, precisions = self.generate()
        save(net, precisions, path)
        self.logger.info(f"Saved {self.kind} network to {path}")
        return net, precisions
