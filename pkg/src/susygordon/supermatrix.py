"""(m|n)-graded matrices over Grassmann elements.

An even supermatrix has even entries in the diagonal blocks (upper-left m x m,
lower-right n x n) and odd entries off them; an odd supermatrix the reverse.
Zero entries are compatible with either grading.  The matrix product inserts
no extra signs: all grading signs already live in the Grassmann entries.

The supertrace here is ``str(M) = tr(E M)`` with ``E = diag(I_m, -I_n)``; the
invariant bilinear form uses the degree-dependent twist
``<A, B> = (1/2) tr(E^(deg(AB)+1) A B)``, i.e. ``(1/2) str(AB)`` when ``AB``
is even and ``(1/2) tr(AB)`` when it is odd.
"""

from __future__ import annotations

from typing import Callable, Sequence

from .errors import ParityError, ShapeMismatchError
from .grassmann import EVEN, GrassmannElement, GeneratorSet, INHOMOGENEOUS, ODD, element_to_json


def _entry_fits(entry: GrassmannElement, wanted: str) -> bool:
    return entry.is_zero() or entry.parity() == wanted


class SuperMatrix:
    """A square (m|n)-block-graded matrix of Grassmann elements."""

    __slots__ = ("m", "n", "rows", "parity")

    def __init__(self, m: int, n: int, rows: Sequence[Sequence[GrassmannElement]],
                 parity: str | None = None) -> None:
        size = m + n
        rows = tuple(tuple(r) for r in rows)
        if len(rows) != size or any(len(r) != size for r in rows):
            raise ShapeMismatchError(f"expected a {size}x{size} entry grid")
        self.m = m
        self.n = n
        self.rows = rows
        inferred = self._infer_parity()
        if parity is None:
            parity = EVEN if inferred == "zero" else inferred
        elif parity in (EVEN, ODD) and inferred not in ("zero", parity):
            raise ParityError(f"declared {parity} but entries form a {inferred} matrix")
        self.parity = parity

    def _infer_parity(self) -> str:
        even_ok = True
        odd_ok = True
        any_entry = False
        for i, row in enumerate(self.rows):
            for j, entry in enumerate(row):
                if entry.is_zero():
                    continue
                any_entry = True
                diag_block = (i < self.m) == (j < self.m)
                even_ok = even_ok and _entry_fits(entry, EVEN if diag_block else ODD)
                odd_ok = odd_ok and _entry_fits(entry, ODD if diag_block else EVEN)
        if not any_entry:
            return "zero"
        if even_ok:
            return EVEN
        if odd_ok:
            return ODD
        return INHOMOGENEOUS

    # -- constructors ------------------------------------------------------------

    @classmethod
    def zeros(cls, gens: GeneratorSet, m: int, n: int) -> "SuperMatrix":
        z = GrassmannElement.zero(gens)
        size = m + n
        return cls(m, n, [[z] * size for _ in range(size)])

    @classmethod
    def identity(cls, gens: GeneratorSet, m: int, n: int) -> "SuperMatrix":
        z = GrassmannElement.zero(gens)
        one = GrassmannElement.from_scalar(gens, 1.0 + 0.0j)
        size = m + n
        rows = [[one if i == j else z for j in range(size)] for i in range(size)]
        return cls(m, n, rows, parity=EVEN)

    @classmethod
    def e_matrix(cls, gens: GeneratorSet, m: int, n: int) -> "SuperMatrix":
        """The grading matrix ``diag(I_m, -I_n)``; satisfies E^2 = I."""
        z = GrassmannElement.zero(gens)
        size = m + n
        rows = []
        for i in range(size):
            row = [z] * size
            row[i] = GrassmannElement.from_scalar(gens, 1.0 + 0.0j if i < m else -1.0 + 0.0j)
            rows.append(row)
        return cls(m, n, rows, parity=EVEN)

    # -- shape helpers ------------------------------------------------------------

    @property
    def size(self) -> int:
        return self.m + self.n

    @property
    def gens(self) -> GeneratorSet:
        return self.rows[0][0].gens

    def _check_shape(self, other: "SuperMatrix") -> None:
        if (self.m, self.n) != (other.m, other.n):
            raise ShapeMismatchError(
                f"shape ({self.m}|{self.n}) vs ({other.m}|{other.n})")

    def entry(self, i: int, j: int) -> GrassmannElement:
        return self.rows[i][j]

    # -- linear structure -----------------------------------------------------------

    def __add__(self, other):
        if not isinstance(other, SuperMatrix):
            return NotImplemented
        self._check_shape(other)
        rows = [[a + b for a, b in zip(ra, rb)] for ra, rb in zip(self.rows, other.rows)]
        return SuperMatrix(self.m, self.n, rows)

    def __sub__(self, other):
        if not isinstance(other, SuperMatrix):
            return NotImplemented
        self._check_shape(other)
        rows = [[a - b for a, b in zip(ra, rb)] for ra, rb in zip(self.rows, other.rows)]
        return SuperMatrix(self.m, self.n, rows)

    def __neg__(self):
        return SuperMatrix(self.m, self.n, [[-a for a in r] for r in self.rows], self.parity)

    def scale(self, factor) -> "SuperMatrix":
        """Left-multiply every entry by a scalar or Grassmann factor."""
        rows = [[factor * a for a in r] for r in self.rows]
        return SuperMatrix(self.m, self.n, rows)

    def __mul__(self, factor):
        if isinstance(factor, (int, float, complex)):
            return self.scale(factor)
        return NotImplemented

    __rmul__ = __mul__

    # -- products ----------------------------------------------------------------

    def __matmul__(self, other: "SuperMatrix") -> "SuperMatrix":
        if not isinstance(other, SuperMatrix):
            return NotImplemented
        self._check_shape(other)
        size = self.size
        rows = []
        for i in range(size):
            row = []
            for k in range(size):
                acc = None
                for j in range(size):
                    a = self.rows[i][j]
                    b = other.rows[j][k]
                    if a.is_zero() or b.is_zero():
                        continue
                    term = a * b
                    acc = term if acc is None else acc + term
                row.append(acc if acc is not None else GrassmannElement.zero(self.gens))
            rows.append(row)
        return SuperMatrix(self.m, self.n, rows)

    def bracket(self, other: "SuperMatrix", kind: str = "commutator") -> "SuperMatrix":
        if kind == "commutator":
            return self @ other - other @ self
        if kind == "anticommutator":
            return self @ other + other @ self
        raise ValueError(f"unknown bracket kind {kind!r}")

    # -- traces and the invariant form ----------------------------------------------

    def supertrace(self) -> GrassmannElement:
        """``str(M) = sum_(i<m) M[i,i] - sum_(i>=m) M[i,i]``."""
        acc = GrassmannElement.zero(self.gens)
        for i in range(self.size):
            d = self.rows[i][i]
            acc = acc + d if i < self.m else acc - d
        return acc

    def trace(self) -> GrassmannElement:
        acc = GrassmannElement.zero(self.gens)
        for i in range(self.size):
            acc = acc + self.rows[i][i]
        return acc

    def graded_supertrace(self) -> GrassmannElement:
        """``tr(E^(deg(M)+1) M)``: supertrace for even M, plain trace for odd M.

        This is the variant with the cyclic property
        ``str(AB) = (-1)^(|A||B|) str(BA)``; the plain ``tr(E .)`` form has it
        only for even arguments.
        """
        if self.parity not in (EVEN, ODD):
            raise ParityError("graded supertrace requires a homogeneous supermatrix")
        return self.supertrace() if self.parity == EVEN else self.trace()

    def killing(self, other: "SuperMatrix") -> GrassmannElement:
        """``<A, B> = (1/2) tr(E^(deg(AB)+1) A B)`` for homogeneous A, B."""
        if self.parity not in (EVEN, ODD) or other.parity not in (EVEN, ODD):
            raise ParityError("killing form requires homogeneous supermatrices")
        product = self @ other
        deg_even = self.parity == other.parity
        inner = product.supertrace() if deg_even else product.trace()
        return inner * 0.5

    # -- entrywise maps --------------------------------------------------------------

    def map_entries(self, fn: Callable[[GrassmannElement], GrassmannElement],
                    parity: str | None = None) -> "SuperMatrix":
        rows = [[fn(a) for a in r] for r in self.rows]
        return SuperMatrix(self.m, self.n, rows, parity)

    def e_twist(self) -> "SuperMatrix":
        """Left-multiply by E (negates the rows of the lower block); E is even."""
        rows = [list(r) if i < self.m else [-a for a in r]
                for i, r in enumerate(self.rows)]
        return SuperMatrix(self.m, self.n, rows, self.parity)

    # -- comparisons / reporting ------------------------------------------------------

    def max_abs(self) -> float:
        return max((a.max_abs() for r in self.rows for a in r), default=0.0)

    def allclose(self, other: "SuperMatrix", atol: float = 1e-10, rtol: float = 1e-10) -> bool:
        self._check_shape(other)
        diff = self - other
        tol = atol + rtol * max(1.0, self.max_abs(), other.max_abs())
        return diff.max_abs() <= tol

    def to_json(self) -> dict:
        return {
            "shape": [self.m, self.n],
            "parity": self.parity,
            "entries": [element_to_json(a) for r in self.rows for a in r],
        }

    def __repr__(self) -> str:
        return f"SuperMatrix(({self.m}|{self.n}), parity={self.parity})"


def e_fermi_derivative(m: SuperMatrix, which: str) -> tuple[SuperMatrix, SuperMatrix]:
    """Entrywise covariant derivative of a matrix, plain and E-twisted.

    Returns ``(D m, E D m)``: the first is the derivative as the displayed
    zero-curvature formulas use it, the second the variant with the grading
    matrix absorbed.  Entry parities flip, so an odd matrix differentiates to
    an even one and vice versa.
    """
    from .superfield import cov_derivative

    flipped = {EVEN: ODD, ODD: EVEN}.get(m.parity)
    plain = m.map_entries(lambda e: cov_derivative(e, which), parity=flipped)
    return plain, plain.e_twist()


def smul(a: SuperMatrix, b: SuperMatrix) -> SuperMatrix:
    return a @ b


def graded_bracket(a: SuperMatrix, b: SuperMatrix, kind: str) -> SuperMatrix:
    return a.bracket(b, kind)


def supertrace(a: SuperMatrix) -> GrassmannElement:
    return a.supertrace()


def killing_form(a: SuperMatrix, b: SuperMatrix) -> GrassmannElement:
    return a.killing(b)
