"""
infoloss - Information loss in layered networks of Bayesian estimators

Exact propagation of minimum-variance estimates through feedforward
networks, ideality and W-motif analysis, random-network ensembles and
independent verification paths.
"""

from infoloss.__version__ import __version__, __author__, __license__
from infoloss.core.analysis import has_w_motif, is_ideal, is_ideal_three_layer, reduce, ring_network
from infoloss.core.estimation import final_estimate, fuse, propagate, simulate
from infoloss.core.factory import GeneratorFactory
from infoloss.core.network import LayeredNetwork, PrecisionVector, load, save, validate
from infoloss.core.verifier import VerificationSuite

__all__ = [
    "__version__",
    "__author__",
    "__license__",
    "LayeredNetwork",
    "PrecisionVector",
    "GeneratorFactory",
    "VerificationSuite",
    "final_estimate",
    "fuse",
    "has_w_motif",
    "is_ideal",
    "is_ideal_three_layer",
    "load",
    "propagate",
    "reduce",
    "ring_network",
    "save",
    "simulate",
    "validate",
]
