"""Cardinality restrictions, nominals and their reductions for ALCQI / ALCQIO.

Submodules:

* ``syntax``        concept and TBox terms, parser, pretty printer, sizes
* ``semantics``     finite interpretations, reference and batched evaluators
* ``model_finder``  bounded, exhaustive SAT-backed model search
* ``c2``            two-variable counting logic and the translation into it
* ``reductions``    cardinality restrictions <-> nominals, internalisation
* ``generators``    torus and domino gadgets, tiler, torus verifier
* ``corpus``        seeded random and exhaustive term generators
"""

from .model_finder import ConsistentWitness, NoModelUpTo, SearchOptions, find_model, is_consistent
from .semantics import Interpretation, extension, is_model, parse_interpretation, render_interpretation
from .syntax import (
    CardRestriction, Gci, Signature, TcBox, TiBox, parse_concept, parse_tbox, render, signature_of,
)

__version__ = "0.1.0"

__all__ = [
    "CardRestriction", "Gci", "Signature", "TcBox", "TiBox", "parse_concept", "parse_tbox", "render",
    "signature_of", "Interpretation", "extension", "is_model", "parse_interpretation",
    "render_interpretation", "SearchOptions", "ConsistentWitness", "NoModelUpTo", "find_model",
    "is_consistent",
]
