"""Exact verification of lifted Frobenius / tt*-geometry structures.

The package models a small phase space (a finite-dimensional Frobenius
manifold given by a pairing and a polynomial prepotential) and its truncated
jet extension, lifts the geometric structures level by level, and measures
the residuals of the defining identities with exact rational arithmetic.

Typical entry points:

* :func:`bigphase.models.build_builtin` / :func:`bigphase.models.build_from_spec`
  construct a :class:`~bigphase.models.ModelBundle`;
* :class:`bigphase.verify.Verifier` runs the residual-check catalogue;
* :mod:`bigphase.cli` exposes the same flows as the ``bigphase`` command.
"""

from .context import BigContext, FrameError, FrameVector
from .frobenius import EulerData, FrobeniusModel, ModelError
from .hermitian import HermitianStructure
from .lifted import LiftedStructure
from .models import (
    BUILTIN_MODELS,
    ConfigError,
    ModelBundle,
    build_builtin,
    build_from_spec,
    builtin_names,
    builtin_spec,
    bundle_spec,
    canonical_json,
    load_spec_file,
    validate_spec,
)
from .scalars import ComplexRational, format_rational, parse_rational
from .series import ANTIHOL, HOL, SeriesRing, TruncatedSeries
from .verify import GROUP_ORDER, CheckResult, Verifier, summarize

__version__ = "0.1.0"

__all__ = [
    "ANTIHOL",
    "BUILTIN_MODELS",
    "BigContext",
    "CheckResult",
    "ComplexRational",
    "ConfigError",
    "EulerData",
    "FrameError",
    "FrameVector",
    "FrobeniusModel",
    "GROUP_ORDER",
    "HOL",
    "HermitianStructure",
    "LiftedStructure",
    "ModelBundle",
    "ModelError",
    "SeriesRing",
    "TruncatedSeries",
    "Verifier",
    "build_builtin",
    "build_from_spec",
    "builtin_names",
    "builtin_spec",
    "bundle_spec",
    "canonical_json",
    "format_rational",
    "load_spec_file",
    "parse_rational",
    "summarize",
    "validate_spec",
    "__version__",
]
