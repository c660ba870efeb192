"""
Network generators - Strategy Pattern Implementation
"""

from .base import BaseGenerator
from .bernoulli import BernoulliGenerator
from .ring import RingGenerator
from .static import StaticGenerator

__all__ = [
    "BaseGenerator",
    "BernoulliGenerator",
    "RingGenerator",
    "StaticGenerator",
]
