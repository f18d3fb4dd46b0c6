"""Canonical decomposition of pairs of real complex structures.

Given ``J1`` and ``J2`` with ``J1^2 = J2^2 = -I``, the generators
``a = J1 J2`` and ``b = J2`` satisfy ``b a b^-1 = a^-1`` and ``b^2 = -1``.
Every finite-dimensional representation of that algebra splits into
summands ``R[t]/(p^n) + b R[t]/(p^n)`` with ``a`` acting as ``t``; this
package computes the summands, their labels ``(p, n)`` and an explicit
change of basis.
"""
__version__ = "0.1.0"

from cspair.canonical import (  # noqa: E402
    GenerationSpec,
    SummandInvariant,
    canonical_model,
    generate,
    invariant,
    is_irreducible,
    is_isomorphic,
    normalize_invariant,
    quaternion_J,
)
from cspair.decompose import DecompositionReport, decompose  # noqa: E402
from cspair.matlin import DEFAULT_TOL, TolerancePolicy  # noqa: E402
from cspair.pairalg import GeneratorPair, generators, validate_pair  # noqa: E402
from cspair.verify import commutant, split_attempt, verify_report  # noqa: E402

__all__ = [
    "DEFAULT_TOL",
    "DecompositionReport",
    "GenerationSpec",
    "GeneratorPair",
    "SummandInvariant",
    "TolerancePolicy",
    "canonical_model",
    "commutant",
    "decompose",
    "generate",
    "generators",
    "invariant",
    "is_irreducible",
    "is_isomorphic",
    "normalize_invariant",
    "quaternion_J",
    "split_attempt",
    "validate_pair",
    "verify_report",
]
