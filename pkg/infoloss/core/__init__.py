"""Core functionality for infoloss"""

from infoloss.core.factory import GeneratorFactory
from infoloss.core.verifier import VerificationSuite

__all__ = ["GeneratorFactory", "VerificationSuite"]
