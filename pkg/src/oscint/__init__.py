"""oscint: a desk-scale algebra of oscillatory power-log generators.

Parsing and normalization of prepared sums, rewriting to the
superintegrable-plus-naive normal form, decidable L^1 verdicts with
integrability loci, ray and iterated integration, asymptotic expansions
and limits at +infinity, equidistribution diagnostics, and a certified
oscillatory quadrature oracle.
"""

from .model import (
    Bound,
    Domain,
    ExactComplex,
    GammaFactor,
    Phase,
    PhaseTail,
    PreparedSum,
    Term,
    UnitSeries,
    add,
    conj,
    mul,
    normalize,
    scale,
    sub,
)
from .constants import ConstantValue, CV_ONE, CV_ZERO, LOG2, PI, SQRT2, SQRT3
from .parser import parse, to_text

__all__ = [
    "Bound", "Domain", "ExactComplex", "GammaFactor", "Phase", "PhaseTail",
    "PreparedSum", "Term", "UnitSeries", "add", "conj", "mul", "normalize",
    "scale", "sub", "ConstantValue", "CV_ONE", "CV_ZERO", "LOG2", "PI",
    "SQRT2", "SQRT3", "parse", "to_text",
]

__version__ = "0.1.0"
