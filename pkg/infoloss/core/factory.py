"""
Generator Factory - Factory Pattern Implementation

Creates Generator instances from configuration dictionaries.
"""

import os
from typing import Any, Dict, Optional

from infoloss.core.ensembles import DEFAULT_SEED
from infoloss.core.errors import ContractViolation
from infoloss.core.linalg import parse_rational
from infoloss.core.network import PrecisionVector
from infoloss.generators.base import BaseGenerator
from infoloss.generators.bernoulli import BernoulliGenerator
from infoloss.generators.ring import RingGenerator
from infoloss.generators.static import StaticGenerator


def resolve_env_vars(config: Dict[str, Any]) -> Dict[str, Any]:
    """
    Resolve ${ENV_VAR} in config values, recursing into nested mappings

    Example:
        >>> config = {"seed": "${SWEEP_SEED}"}
        >>> resolved = resolve_env_vars(config)
        >>> # resolved = {"seed": "value_from_env"}
    """
    resolved: Dict[str, Any] = {}
    for key, value in config.items():
        if isinstance(value, str) and value.startswith("${") and value.endswith("}"):
            resolved[key] = os.getenv(value[2:-1])
        elif isinstance(value, dict):
            resolved[key] = resolve_env_vars(value)
        else:
            resolved[key] = value
    return resolved


class GeneratorFactory:
    """Factory for creating generators based on config"""

    @staticmethod
    def create_from_config(config: Dict[str, Any]) -> BaseGenerator:
        """
        Create generator from config dict

        Args:
            config: Configuration dictionary with 'type' field

        Returns:
            Generator instance

        Raises:
            ContractViolation: If the generator type is unknown or a required
                parameter is missing

        Example:
            >>> config = {"type": "random", "layer_sizes": [10, 12], "p": 0.5}
            >>> generator = GeneratorFactory.create_from_config(config)
        """
        generator_type = config.get("type")

        resolved_config = resolve_env_vars(config)
        precisions = GeneratorFactory._precisions(resolved_config)

        try:
            if generator_type == "ring":
                return RingGenerator(n=int(resolved_config["n"]), precisions=precisions)

            elif generator_type == "random":
                return BernoulliGenerator(
                    layer_sizes=resolved_config["layer_sizes"],
                    p=float(resolved_config["p"]),
                    seed=GeneratorFactory._seed(resolved_config),
                    precisions=precisions,
                )

            elif generator_type == "static":
                return StaticGenerator(path=resolved_config["path"], precisions=precisions)

        except KeyError as e:
            raise ContractViolation(f"Generator '{generator_type}' needs parameter {e}") from e

        raise ContractViolation(f"Unknown generator type: {generator_type}")

    @staticmethod
    def _seed(config: Dict[str, Any]) -> int:
        seed = config.get("seed")
        return DEFAULT_SEED if seed is None else int(seed)

    @staticmethod
    def _precisions(config: Dict[str, Any]) -> Optional[PrecisionVector]:
        if config.get("precisions") is not None:
            return PrecisionVector(tuple(parse_rational(v) for v in config["precisions"]))
        if config.get("variances") is not None:
            return PrecisionVector.from_variances([parse_rational(v) for v in config["variances"]])
        return None

