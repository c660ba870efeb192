"""
Static Generator - for networks stored in a file
"""

from pathlib import Path
from typing import Any, Dict, Optional, Union

from infoloss.core.network import LayeredNetwork, load

from .base import BaseGenerator, Generated


class StaticGenerator(BaseGenerator):
    """
    Generator for a network file
    Doesn't construct anything, just loads it (precisions included)
    """

    def __init__(self, path: Union[str, Path], **kwargs):
        super().__init__(**kwargs)
        self.path = Path(path)
        self._loaded: Optional[Generated] = None

    @property
    def kind(self) -> str:
        return "static"

    def _load(self) -> Generated:
        if self._loaded is None:
            self._loaded = load(self.path)
        return self._loaded

    def build(self) -> LayeredNetwork:
        return self._load()[0]

    def generate(self) -> Generated:
        net, file_precisions = self._load()
        if self.precisions is None:
            self.precisions = file_precisions
        return super().generate()

    def describe(self) -> Dict[str, Any]:
        return {"kind": self.kind, "path": str(self.path)}
