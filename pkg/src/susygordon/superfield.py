"""Superfields as evaluators of superspace points.

A superfield is a function of two fermionic coordinates (theta+, theta-) and
the bosonic light-cone coordinates (x+, x-).  Evaluating it at a
:class:`SuperspacePoint` substitutes numbers (as truncated jets, so that
bosonic derivatives remain available) for x+, x- and the spectral parameter
lambda, while the thetas and any declared fermionic constants stay symbolic
Grassmann generators.  The result is a Grassmann element with jet
coefficients, on which the covariant derivatives

    D+- = d/dtheta+-  -  i theta+- d/dx+-

act algebraically: the theta part is the exact left derivative in the
Grassmann algebra and the x part is a coefficient-wise jet shift.  They
satisfy D+-^2 = -i d/dx+- and {D+, D-} = 0.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

from .errors import ParityError
from .grassmann import (
    EVEN,
    ODD,
    GeneratorSet,
    GrassmannElement,
    analytic_lift,
)
from .jets import DEFAULT_SPEC, JetScalar, JetSpec

THETA_PLUS = "theta_plus"
THETA_MINUS = "theta_minus"

#: the two theta generators every superfield algebra starts with
BASE_GENERATORS = (THETA_PLUS, THETA_MINUS)


@dataclass(frozen=True)
class SuperspacePoint:
    """Bosonic sample point; the fermionic directions remain symbolic."""

    x_plus: complex
    x_minus: complex
    lam: complex
    spec: JetSpec = DEFAULT_SPEC
    gens: GeneratorSet = field(default_factory=lambda: GeneratorSet(BASE_GENERATORS))

    def __post_init__(self) -> None:
        for name in BASE_GENERATORS:
            if name not in self.gens.names:
                raise ValueError(f"generator set must contain {name!r}")

    # -- building blocks -------------------------------------------------------

    def xp_jet(self) -> JetScalar:
        return JetScalar.seed("x_plus", self.x_plus, self.spec)

    def xm_jet(self) -> JetScalar:
        return JetScalar.seed("x_minus", self.x_minus, self.spec)

    def lam_jet(self) -> JetScalar:
        return JetScalar.seed("lambda", self.lam, self.spec)

    def const_jet(self, value: complex) -> JetScalar:
        return JetScalar.constant(value, self.spec)

    def scalar(self, value) -> GrassmannElement:
        """Embed a complex number or jet as the body of an element."""
        return GrassmannElement.from_scalar(self.gens, value)

    def odd_generator(self, name: str) -> GrassmannElement:
        return GrassmannElement.generator(self.gens, name)

    def theta(self, sign: str) -> GrassmannElement:
        return GrassmannElement.generator(
            self.gens, THETA_PLUS if sign == "+" else THETA_MINUS)


# ---------------------------------------------------------------------------
# derivatives acting on evaluated values
# ---------------------------------------------------------------------------

def _jet_shift(v: GrassmannElement, var: str) -> GrassmannElement:
    """Coefficient-wise bosonic partial derivative; plain constants drop out."""
    terms = {}
    for m, c in v.terms.items():
        if isinstance(c, JetScalar):
            terms[m] = c.derivative(var)
        # complex coefficients are constants: derivative contributes nothing
    return GrassmannElement(v.gens, terms)


def bosonic_derivative(v: GrassmannElement, which: str) -> GrassmannElement:
    """d/dx+, d/dx- or d/dlambda of an evaluated value; parity unchanged."""
    return _jet_shift(v, which)


def dx_plus(v: GrassmannElement) -> GrassmannElement:
    return _jet_shift(v, "x_plus")


def dx_minus(v: GrassmannElement) -> GrassmannElement:
    return _jet_shift(v, "x_minus")


def d_lambda(v: GrassmannElement) -> GrassmannElement:
    return _jet_shift(v, "lambda")


def cov_derivative(v: GrassmannElement, which: str) -> GrassmannElement:
    """The covariant derivative D+ or D-; output parity is flipped."""
    if which in ("D_plus", "+"):
        theta = THETA_PLUS
        var = "x_plus"
    elif which in ("D_minus", "-"):
        theta = THETA_MINUS
        var = "x_minus"
    else:
        raise ValueError(f"unknown covariant derivative {which!r}")
    theta_elem = GrassmannElement.generator(v.gens, theta)
    return v.fermi_derivative(theta) - 1j * (theta_elem * _jet_shift(v, var))


def d_plus(v: GrassmannElement) -> GrassmannElement:
    return cov_derivative(v, "D_plus")


def d_minus(v: GrassmannElement) -> GrassmannElement:
    return cov_derivative(v, "D_minus")


def field_fn(name: str, v: GrassmannElement,
             exponent: complex | None = None) -> GrassmannElement:
    """sin/cos/exp/ln/sqrt/power of an even evaluated value."""
    return analytic_lift(name, v, exponent)


# ---------------------------------------------------------------------------
# the function-space wrapper
# ---------------------------------------------------------------------------

class Superfield:
    """A deterministic evaluator point -> value with a declared parity.

    Values are memoized per point: solution chains share large
    subexpressions (the same seed wavefunction appears under several
    transformed wavefunctions), and residual checks re-evaluate the same
    solution at the same sweep points for several different residuals.
    """

    __slots__ = ("_fn", "parity", "label", "_cache")

    def __init__(self, fn: Callable[[SuperspacePoint], GrassmannElement],
                 parity: str, label: str = "") -> None:
        if parity not in (EVEN, ODD):
            raise ParityError(f"superfield parity must be even or odd, got {parity!r}")
        self._fn = fn
        self.parity = parity
        self.label = label
        self._cache: dict[SuperspacePoint, GrassmannElement] = {}

    def evaluate(self, pt: SuperspacePoint) -> GrassmannElement:
        got = self._cache.get(pt)
        if got is None:
            got = self._fn(pt)
            if not got.is_zero() and got.parity() != self.parity:
                raise ParityError(
                    f"superfield {self.label!r} declared {self.parity} but "
                    f"evaluated {got.parity()} at {pt}")
            self._cache[pt] = got
        return got

    __call__ = evaluate

    def __repr__(self) -> str:
        return f"Superfield({self.label!r}, parity={self.parity})"


def constant_superfield(value: complex, label: str = "") -> Superfield:
    """An even superfield with a constant body (still carries jet budget)."""
    return Superfield(lambda pt: pt.scalar(pt.const_jet(value)), EVEN, label)


def combine(parity: str, label: str,
            fn: Callable[..., GrassmannElement], *fields: Superfield) -> Superfield:
    """Pointwise combination of superfields (sums, scalings, compositions)."""
    return Superfield(lambda pt: fn(*(f.evaluate(pt) for f in fields)), parity, label)
