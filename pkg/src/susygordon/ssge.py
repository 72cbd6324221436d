"""The supersymmetric sine-Gordon equation and its linear structures.

Everything here is a residual evaluator: given a candidate solution (an even
superfield s) and a sample point, it returns the defect of one of the
defining identities,

    equation          D+ D- s = i sin s
    fermionic LSP     D+- Phi = U+-(lambda, s) Phi
    zero curvature    D+ U- + D- U+ - {E U+, E U-} = 0
    bosonic LSP       d/dx+- Psi = i (D+- U+- - (E U+-)^2) Psi = V+- Psi
    classical ZCC     d/dx+ V- - d/dx- V+ + [V-, V+] = 0

together with the coupled Riccati system for p = phi/psi, q = chi/psi, the
auto-Backlund system relating two solutions through an odd auxiliary
function f, and the scaling symmetry that introduces the spectral parameter.
All residuals vanish identically exactly when s solves the equation.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

from .errors import LaxConsistencyError, ParityError
from .grassmann import EVEN, ODD, GeneratorSet, GrassmannElement, analytic_lift
from .jets import JetScalar
from .superfield import (
    Superfield,
    SuperspacePoint,
    cov_derivative,
    d_minus,
    d_plus,
    dx_minus,
    dx_plus,
)
from .supermatrix import SuperMatrix

Triple = tuple[GrassmannElement, GrassmannElement, GrassmannElement]


# ---------------------------------------------------------------------------
# the equation itself
# ---------------------------------------------------------------------------

def ssge_residual(s: Superfield, pt: SuperspacePoint) -> GrassmannElement:
    """D+ D- s - i sin(s) at the point; zero iff s solves the equation there."""
    v = s.evaluate(pt)
    return d_plus(d_minus(v)) - 1j * analytic_lift("sin", v)


# ---------------------------------------------------------------------------
# the constant matrices of the lambda-free linear problem
# ---------------------------------------------------------------------------

def _const_matrix(gens: GeneratorSet, rows: Sequence[Sequence[complex]]) -> SuperMatrix:
    wrapped = [[GrassmannElement.from_scalar(gens, v) if v else GrassmannElement.zero(gens)
                for v in row] for row in rows]
    return SuperMatrix(2, 1, wrapped)


def build_constraint_matrices(gens: GeneratorSet | None = None):
    """The four constant 3x3 matrices solving the algebraic constraints

    i J = [M, J],  i K = [K, M],  {J, N} = -{K, N},  M/2 = {K, N}.
    """
    if gens is None:
        gens = GeneratorSet(("theta_plus", "theta_minus"))
    j = _const_matrix(gens, [[0, 0, 0.5j], [0, 0, 0], [0, 0.5, 0]])
    k = _const_matrix(gens, [[0, 0, 0], [0, 0, -0.5j], [-0.5, 0, 0]])
    m = _const_matrix(gens, [[1j, 0, 0], [0, -1j, 0], [0, 0, 0]])
    n = _const_matrix(gens, [[0, 0, -1j], [0, 0, 1j], [-1, 1, 0]])
    return j, k, m, n


# ---------------------------------------------------------------------------
# Lax pairs
# ---------------------------------------------------------------------------

@dataclass
class LaxPairFermionic:
    u_plus: SuperMatrix
    u_minus: SuperMatrix


@dataclass
class LaxPairBosonic:
    v_plus: SuperMatrix
    v_minus: SuperMatrix
    #: largest deviation between the defining formula and the closed forms
    defect: float


def fermionic_u_pair(s_val: GrassmannElement, lam: JetScalar) -> LaxPairFermionic:
    """The odd potential matrices built from a solution value and lambda."""
    gens = s_val.gens
    zero = GrassmannElement.zero(gens)
    sqrt_lam = lam.analytic("sqrt")
    half = (2 * sqrt_lam).reciprocal()
    eis = analytic_lift("exp", 1j * s_val)
    emis = analytic_lift("exp", -1j * s_val)
    dms = d_minus(s_val)

    u_plus = SuperMatrix(2, 1, [
        [zero, zero, eis * (1j * half)],
        [zero, zero, emis * (-1j * half)],
        [emis * (-1 * half), eis * half, zero],
    ], parity=ODD)

    sq = GrassmannElement.from_scalar(gens, sqrt_lam)
    u_minus = SuperMatrix(2, 1, [
        [1j * dms, zero, -1j * sq],
        [zero, -1j * dms, 1j * sq],
        [-sq, sq, zero],
    ], parity=ODD)
    return LaxPairFermionic(u_plus, u_minus)


def build_lax_fermionic(s: Superfield, pt: SuperspacePoint,
                        lam: complex | None = None) -> LaxPairFermionic:
    """U+- at the point; lambda defaults to the point's (jet-seeded) value."""
    lam_jet = pt.lam_jet() if lam is None else pt.const_jet(lam)
    return fermionic_u_pair(s.evaluate(pt), lam_jet)


def zcc_fermionic_residual(s: Superfield, pt: SuperspacePoint,
                           lam: complex | None = None) -> SuperMatrix:
    """D+ U- + D- U+ - {E U+, E U-}; the zero matrix iff s solves the equation."""
    pair = build_lax_fermionic(s, pt, lam)
    du_minus = pair.u_minus.map_entries(d_plus, parity=EVEN)
    du_plus = pair.u_plus.map_entries(d_minus, parity=EVEN)
    eu_plus = pair.u_plus.e_twist()
    eu_minus = pair.u_minus.e_twist()
    return du_minus + du_plus - eu_plus.bracket(eu_minus, "anticommutator")


def bosonic_v_pair_defining(pair: LaxPairFermionic) -> tuple[SuperMatrix, SuperMatrix]:
    """V+- = i (D+- U+- - (E U+-)^2)."""
    out = []
    for u, deriv in ((pair.u_plus, d_plus), (pair.u_minus, d_minus)):
        eu = u.e_twist()
        v = (u.map_entries(deriv, parity=EVEN) - eu @ eu).scale(1j)
        out.append(v)
    return out[0], out[1]


def bosonic_v_pair_closed(s_val: GrassmannElement, lam: JetScalar) -> tuple[SuperMatrix, SuperMatrix]:
    """The displayed closed forms of the bosonic potential matrices."""
    gens = s_val.gens

    def emb(c) -> GrassmannElement:
        return GrassmannElement.from_scalar(gens, c)

    sqrt_lam = lam.analytic("sqrt")
    inv_sqrt = sqrt_lam.reciprocal()
    inv_lam = lam.reciprocal()
    e2is = analytic_lift("exp", 2j * s_val)
    e2mis = analytic_lift("exp", -2j * s_val)
    eis = analytic_lift("exp", 1j * s_val)
    emis = analytic_lift("exp", -1j * s_val)
    dps = d_plus(s_val)
    dms = d_minus(s_val)
    dxm_s = dx_minus(s_val)

    half_inv = 0.5 * inv_lam
    v_plus = SuperMatrix(2, 1, [
        [emb(half_inv), e2is * (-half_inv), eis * dps * (-1j * inv_sqrt)],
        [e2mis * (-half_inv), emb(half_inv), emis * dps * (-1j * inv_sqrt)],
        [emis * dps * (-inv_sqrt), eis * dps * (-inv_sqrt), emb(inv_lam)],
    ], parity=EVEN).scale(0.5)

    lam_e = emb(lam)
    v_minus = SuperMatrix(2, 1, [
        [1j * dxm_s - lam_e, lam_e, dms * (-1j * sqrt_lam)],
        [lam_e, -1j * dxm_s - lam_e, dms * (-1j * sqrt_lam)],
        [dms * sqrt_lam, dms * sqrt_lam, emb(-2 * lam)],
    ], parity=EVEN)
    return v_plus, v_minus


def build_lax_bosonic(s: Superfield, pt: SuperspacePoint, lam: complex | None = None,
                      consistency_tol: float = 1e-9) -> LaxPairBosonic:
    """V+- from both constructions; they must agree or the transcription is wrong.

    The guard is relative to the matrix scale (solutions deep in a Darboux
    chain carry large soul coefficients); the reported defect stays absolute.
    """
    lam_jet = pt.lam_jet() if lam is None else pt.const_jet(lam)
    s_val = s.evaluate(pt)
    defining = bosonic_v_pair_defining(fermionic_u_pair(s_val, lam_jet))
    closed = bosonic_v_pair_closed(s_val, lam_jet)
    defect = max((defining[0] - closed[0]).max_abs(),
                 (defining[1] - closed[1]).max_abs())
    scale = max(1.0, closed[0].max_abs(), closed[1].max_abs())
    if defect > consistency_tol * scale:
        raise LaxConsistencyError(
            f"defining and closed bosonic Lax matrices disagree by {defect:.3e}")
    return LaxPairBosonic(closed[0], closed[1], defect)


def zcc_bosonic_residual(s: Superfield, pt: SuperspacePoint,
                         lam: complex | None = None) -> SuperMatrix:
    """d/dx+ V- - d/dx- V+ + [V-, V+]; zero iff s solves the equation."""
    pair = build_lax_bosonic(s, pt, lam)
    term = pair.v_minus.map_entries(dx_plus, parity=EVEN) \
        - pair.v_plus.map_entries(dx_minus, parity=EVEN)
    return term + pair.v_minus.bracket(pair.v_plus, "commutator")


# ---------------------------------------------------------------------------
# linear spectral problem for a wavefunction triple
# ---------------------------------------------------------------------------

def apply_potential(u: SuperMatrix, triple: Triple) -> Triple:
    out = []
    for i in range(3):
        acc = GrassmannElement.zero(u.gens)
        for j in range(3):
            entry = u.entry(i, j)
            if not entry.is_zero():
                acc = acc + entry * triple[j]
        out.append(acc)
    return tuple(out)  # type: ignore[return-value]


def lsp_residual(phi: Sequence[Superfield], s: Superfield, lam: complex,
                 pt: SuperspacePoint) -> tuple[Triple, Triple]:
    """D+- Phi - U+- Phi for a (psi, phi, chi) triple at fixed lambda."""
    psi_f, phi_f, chi_f = phi
    if psi_f.parity != EVEN or phi_f.parity != EVEN or chi_f.parity != ODD:
        raise ParityError("wavefunction grading must be (even, even, odd)")
    triple: Triple = (psi_f.evaluate(pt), phi_f.evaluate(pt), chi_f.evaluate(pt))
    pair = fermionic_u_pair(s.evaluate(pt), pt.const_jet(lam))
    res = []
    for u, deriv in ((pair.u_plus, d_plus), (pair.u_minus, d_minus)):
        rhs = apply_potential(u, triple)
        res.append(tuple(deriv(c) - r for c, r in zip(triple, rhs)))
    return res[0], res[1]  # type: ignore[return-value]


# ---------------------------------------------------------------------------
# super Riccati system
# ---------------------------------------------------------------------------

def riccati_residuals(p: Superfield, q: Superfield, s: Superfield, lam: complex,
                      pt: SuperspacePoint) -> tuple[GrassmannElement, ...]:
    """Defects of the four coupled equations for p (even) and q (odd)."""
    pv = p.evaluate(pt)
    qv = q.evaluate(pt)
    sv = s.evaluate(pt)
    sqrt_lam = pt.const_jet(lam).analytic("sqrt")
    half = (2 * sqrt_lam).reciprocal()
    eis = analytic_lift("exp", 1j * sv)
    emis = analytic_lift("exp", -1j * sv)
    dms = d_minus(sv)

    r1 = d_plus(pv) - (emis * qv * (-1j * half) + eis * (pv * qv) * (-1j * half))
    r2 = d_minus(pv) - ((-2j) * (dms * pv) + (pv + 1) * qv * (1j * sqrt_lam))
    r3 = d_plus(qv) - (emis * (-1 * half) + eis * pv * half)
    r4 = d_minus(qv) - ((pv - 1) * sqrt_lam - 1j * (dms * qv))
    return r1, r2, r3, r4


def riccati_from_wavefunction(phi: Sequence[Superfield]) -> tuple[Superfield, Superfield]:
    """p = phi/psi and q = chi/psi built from a wavefunction triple."""
    from .grassmann import ginv

    psi_f, phi_f, chi_f = phi

    def p_fn(pt: SuperspacePoint) -> GrassmannElement:
        return phi_f.evaluate(pt) * ginv(psi_f.evaluate(pt))

    def q_fn(pt: SuperspacePoint) -> GrassmannElement:
        return chi_f.evaluate(pt) * ginv(psi_f.evaluate(pt))

    return (Superfield(p_fn, EVEN, "p=phi/psi"),
            Superfield(q_fn, ODD, "q=chi/psi"))


# ---------------------------------------------------------------------------
# auto-Backlund system
# ---------------------------------------------------------------------------

def backlund_residuals(s: Superfield, s_tilde: Superfield, f: Superfield,
                       lam: complex, pt: SuperspacePoint) -> tuple[GrassmannElement, ...]:
    """Defects of the four first-order relations between s, s-tilde and odd f."""
    sv = s.evaluate(pt)
    tv = s_tilde.evaluate(pt)
    fv = f.evaluate(pt)
    sqrt_lam = pt.const_jet(lam).analytic("sqrt")
    inv_sqrt = sqrt_lam.reciprocal()
    cos_diff = analytic_lift("cos", (sv - tv) * 0.5)
    cos_sum = analytic_lift("cos", (sv + tv) * 0.5)
    sin_diff = analytic_lift("sin", (sv - tv) * 0.5)
    sin_sum = analytic_lift("sin", (sv + tv) * 0.5)

    r1 = d_plus(sv + tv) - fv * cos_diff * inv_sqrt
    r2 = d_minus(sv - tv) - fv * cos_sum * (2 * sqrt_lam)
    r3 = d_plus(fv) - sin_diff * (1j * inv_sqrt)
    r4 = d_minus(fv) + sin_sum * (2j * sqrt_lam)
    return r1, r2, r3, r4


# ---------------------------------------------------------------------------
# the scaling symmetry that introduces lambda
# ---------------------------------------------------------------------------

def scaling_map(s: Superfield, mu: float, sign: int = 1) -> Superfield:
    """Pull s back through x+ -> L x+, x- -> x-/L, theta+- -> L^(+-1/2) theta+-.

    L = sign * exp(mu); maps solutions to solutions.  The theta rescaling
    multiplies each monomial coefficient by sqrt(L)^(n+ - n-) where n+- counts
    whether theta+- occurs; the jets pick up L^i L^-j on the (i, j) slots.
    """
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    scale = sign * math.exp(mu)
    root = cmath.sqrt(scale)

    def ev(pt: SuperspacePoint) -> GrassmannElement:
        moved = SuperspacePoint(x_plus=scale * pt.x_plus, x_minus=pt.x_minus / scale,
                                lam=pt.lam, spec=pt.spec, gens=pt.gens)
        v = s.evaluate(moved)
        ip = v.gens.index("theta_plus")
        im = v.gens.index("theta_minus")
        terms = {}
        for m, c in v.terms.items():
            factor = 1.0 + 0.0j
            if m >> ip & 1:
                factor *= root
            if m >> im & 1:
                factor /= root
            if isinstance(c, JetScalar):
                c = c.scale_axes(scale, 1.0 / scale, 1.0)
            terms[m] = c * factor
        return GrassmannElement(v.gens, terms)

    return Superfield(ev, s.parity, f"scaled({s.label}, mu={mu}, sign={sign})")


# ---------------------------------------------------------------------------
# residual sweeps
# ---------------------------------------------------------------------------

def residual_magnitude(obj) -> float:
    """Largest coefficient magnitude of an element/matrix/tuple-of-them."""
    if isinstance(obj, (GrassmannElement, SuperMatrix)):
        return obj.max_abs()
    return max((residual_magnitude(x) for x in obj), default=0.0)


@dataclass
class ResidualReport:
    """Outcome of sweeping one residual kind over sample points."""

    kind: str
    tolerance: float
    magnitudes: list[float] = field(default_factory=list)
    points: list[dict] = field(default_factory=list)

    @property
    def max_residual(self) -> float:
        return max(self.magnitudes, default=0.0)

    @property
    def passed(self) -> bool:
        return all(m <= self.tolerance for m in self.magnitudes)

    def to_json(self) -> dict:
        return {
            "kind": self.kind,
            "tolerance": self.tolerance,
            "max_residual": self.max_residual,
            "passed": self.passed,
            "points": [
                {**p, "residual": m} for p, m in zip(self.points, self.magnitudes)
            ],
        }


def sweep_residual(kind: str, fn: Callable[[SuperspacePoint], object],
                   points: Sequence[SuperspacePoint], tolerance: float) -> ResidualReport:
    """Evaluate a point -> residual function over a sweep, deterministically ordered."""
    report = ResidualReport(kind=kind, tolerance=tolerance)
    for i, pt in enumerate(points):
        mag = residual_magnitude(fn(pt))
        xp, xm, lam = complex(pt.x_plus), complex(pt.x_minus), complex(pt.lam)
        report.magnitudes.append(mag)
        report.points.append({
            "index": i,
            "x_plus": [xp.real, xp.imag],
            "x_minus": [xm.real, xm.imag],
            "lambda": [lam.real, lam.imag],
        })
    return report
