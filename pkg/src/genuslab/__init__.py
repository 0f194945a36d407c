"""Bipartite quadrangulations of arbitrary genus: counting, sampling, surgery, geometry."""

__version__ = "0.1.0"

from .maps import CombinatorialMap, MapValidationError, build_and_validate, canonical_code  # noqa: E402

__all__ = ["CombinatorialMap", "MapValidationError", "build_and_validate", "canonical_code", "__version__"]
