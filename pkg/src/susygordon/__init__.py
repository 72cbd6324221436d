"""Grassmann computer algebra for the supersymmetric sine-Gordon equation.

Subpackages cover: the sparse Grassmann kernel (:mod:`susygordon.grassmann`),
truncated Taylor jets (:mod:`susygordon.jets`), graded matrices
(:mod:`susygordon.supermatrix`), superfield evaluation and covariant
derivatives (:mod:`susygordon.superfield`), the integrable-system residuals
(:mod:`susygordon.ssge`), Darboux/multisoliton construction
(:mod:`susygordon.darboux`), the induced surface geometry
(:mod:`susygordon.geometry`), and the verification CLI
(:mod:`susygordon.cli`).
"""

from .grassmann import (
    GeneratorSet,
    GrassmannElement,
    allclose,
    analytic_lift,
    fermi_derivative,
    ginv,
    gmul,
    parity,
)
from .jets import JetScalar, JetSpec, jet_extract, jet_fn, jet_seed
from .superfield import Superfield, SuperspacePoint
from .supermatrix import SuperMatrix, graded_bracket, killing_form, smul, supertrace

__all__ = [
    "GeneratorSet",
    "GrassmannElement",
    "JetScalar",
    "JetSpec",
    "SuperMatrix",
    "Superfield",
    "SuperspacePoint",
    "allclose",
    "analytic_lift",
    "fermi_derivative",
    "ginv",
    "gmul",
    "graded_bracket",
    "jet_extract",
    "jet_fn",
    "jet_seed",
    "killing_form",
    "parity",
    "smul",
    "supertrace",
]

__version__ = "0.1.0"
