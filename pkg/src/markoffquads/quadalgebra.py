"""Core algebra of Markoff quads.

A Markoff quad is a 4-tuple (a, b, c, d) of complex numbers satisfying

    (a + b + c + d)^2 = a*b*c*d.

The entries are traces of four once-intersecting one-sided simple closed
curves on a thrice-punctured projective plane; each equals 2*sinh of half
the complex length of the corresponding geodesic.  This module provides
the quad relation, flips, quad completion, trace/length conversions,
explicit SL(2,C)-representation matrices, the Fricke relation as a
numerical oracle, the Markoff-Hurwitz substitution and the punctured
Klein bottle trace recursion.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

from .errors import (
    BranchCutError,
    DegenerateClassError,
    DomainError,
    InvalidQuadError,
)

DEFAULT_TOL = 1e-9


def _as_complex(x) -> complex:
    z = complex(x)
    if not (math.isfinite(z.real) and math.isfinite(z.imag)):
        raise DomainError(f"non-finite value {x!r}")
    return z


@dataclass(frozen=True)
class MarkoffQuad:
    """Ordered 4-tuple of complex traces.  Entries are kept verbatim;
    validity against the quad relation is checked by residual()."""

    a: complex
    b: complex
    c: complex
    d: complex

    def __post_init__(self):
        for name in ("a", "b", "c", "d"):
            object.__setattr__(self, name, _as_complex(getattr(self, name)))

    @classmethod
    def from_values(cls, values) -> "MarkoffQuad":
        vals = tuple(values)
        if len(vals) != 4:
            raise DomainError(f"expected 4 entries, got {len(vals)}")
        return cls(*vals)

    def values(self) -> tuple[complex, complex, complex, complex]:
        return (self.a, self.b, self.c, self.d)

    def entry(self, i: int) -> complex:
        """Entry at 1-based index i."""
        return self.values()[_check_index(i) - 1]

    def replace(self, i: int, value) -> "MarkoffQuad":
        vals = list(self.values())
        vals[_check_index(i) - 1] = value
        return MarkoffQuad.from_values(vals)

    def residual(self) -> float:
        a, b, c, d = self.values()
        prod = a * b * c * d
        return abs((a + b + c + d) ** 2 - prod) / max(1.0, abs(prod))

    def is_valid(self, tol: float = DEFAULT_TOL) -> bool:
        return self.residual() <= tol

    def require_valid(self, tol: float = DEFAULT_TOL) -> "MarkoffQuad":
        r = self.residual()
        if r > tol:
            raise InvalidQuadError(
                f"quad relation violated: residual {r:.3e} > tol {tol:.3e} "
                f"for {self.values()}"
            )
        return self


def _check_index(i: int) -> int:
    if i not in (1, 2, 3, 4):
        raise DomainError(f"entry index must be 1..4, got {i}")
    return i


def verify_quad(q: MarkoffQuad, tol: float = DEFAULT_TOL) -> float:
    """Relative residual of the quad relation; <= tol means valid."""
    if tol <= 0:
        raise DomainError("tol must be positive")
    return q.residual()


def flip_value(values, i: int):
    """New value replacing entry i: product of the other three minus
    twice their sum minus the old entry.  Exact for int/Fraction input."""
    _check_index(i)
    others = [v for j, v in enumerate(values) if j != i - 1]
    return others[0] * others[1] * others[2] - 2 * (others[0] + others[1] + others[2]) - values[i - 1]


def flip(q: MarkoffQuad, i: int) -> MarkoffQuad:
    """Replace entry i by the other root of the completion quadratic.
    Involutive, and maps valid quads to valid quads."""
    return q.replace(i, flip_value(q.values(), i))


def complete_quad(a, b, c) -> tuple[complex, complex]:
    """Both roots (d, dPrime) of x^2 + (2a+2b+2c-abc)x + (a+b+c)^2.

    Either root completes (a, b, c) to a Markoff quad.  The larger
    magnitude root is returned second; exact ties are ordered by
    (re, im) lexicographically.
    """
    a, b, c = _as_complex(a), _as_complex(b), _as_complex(c)
    s = a + b + c
    B = 2 * s - a * b * c
    C = s * s
    disc = cmath.sqrt(B * B - 4 * C)
    r1 = (-B + disc) / 2
    r2 = (-B - disc) / 2
    big, small = (r1, r2) if abs(r1) >= abs(r2) else (r2, r1)
    if big != 0:
        small = C / big  # Vieta refinement: avoids cancellation in the small root
    if abs(small) > abs(big):
        small, big = big, small
    if abs(small) == abs(big) and (big.real, big.imag) < (small.real, small.imag):
        small, big = big, small
    return small, big


def two_sided_trace(a, b) -> complex:
    """Trace of the unique two-sided simple curve disjoint from a
    once-intersecting pair with traces a and b:  e = a*b - 2."""
    return _as_complex(a) * _as_complex(b) - 2


def one_sided_length(a) -> complex:
    """Complex length of a one-sided class with trace a = 2 sinh(l/2).

    Principal branch, reflected so Re(l) >= 0; the reflection absorbs
    the lift's sign ambiguity, so the inverse returns the trace with
    Re >= 0 convention.  Zero trace signals a parabolic class.
    """
    a = _as_complex(a)
    if a == 0:
        raise DegenerateClassError("zero trace: parabolic/degenerate one-sided class")
    ell = 2 * cmath.asinh(a / 2)
    if ell.real < 0:
        ell = -ell
    return ell


def trace_from_length(ell) -> complex:
    """Inverse of one_sided_length: a = 2 sinh(l/2)."""
    return 2 * cmath.sinh(_as_complex(ell) / 2)


def two_sided_length(e, tol: float = DEFAULT_TOL) -> complex:
    """Complex length of a two-sided class with trace e = 2 cosh(l/2).

    Principal branch (Re >= 0).  Real e in [-2, 2] is elliptic or
    parabolic and rejected; the test uses distance <= tol to the segment.
    """
    e = _as_complex(e)
    if _segment_distance(e, -2.0, 2.0) <= tol:
        raise BranchCutError(f"two-sided trace {e} within {tol:g} of [-2,2]")
    return 2 * cmath.acosh(e / 2)


def _segment_distance(z: complex, lo: float, hi: float) -> float:
    """Distance from z to the real segment [lo, hi]."""
    t = min(max(z.real, lo), hi)
    return abs(z - t)


@dataclass(frozen=True)
class Matrix2:
    """2x2 complex matrix with exact entrywise arithmetic."""

    m11: complex
    m12: complex
    m21: complex
    m22: complex

    def __matmul__(self, o: "Matrix2") -> "Matrix2":
        return Matrix2(
            self.m11 * o.m11 + self.m12 * o.m21,
            self.m11 * o.m12 + self.m12 * o.m22,
            self.m21 * o.m11 + self.m22 * o.m21,
            self.m21 * o.m12 + self.m22 * o.m22,
        )

    def trace(self) -> complex:
        return self.m11 + self.m22

    def det(self) -> complex:
        return self.m11 * self.m22 - self.m12 * self.m21

    def inverse(self) -> "Matrix2":
        d = self.det()
        if d == 0:
            raise DomainError("singular matrix")
        return Matrix2(self.m22 / d, -self.m12 / d, -self.m21 / d, self.m11 / d)

    @classmethod
    def identity(cls) -> "Matrix2":
        return cls(1, 0, 0, 1)


def _zero_rep(b: complex, c: complex) -> tuple[Matrix2, Matrix2, Matrix2]:
    # generators for the quad (0, b, c, -(b+c)); all dets -1, peripherals 2
    return (
        Matrix2(0, 1, 1, 0),
        Matrix2(b, 1, 1, 0),
        Matrix2(0, 1, 1, c),
    )


def _generic_rep(a, b, c, t) -> tuple[Matrix2, Matrix2, Matrix2]:
    # template parameter t is the flip of the target fourth trace: the
    # matrices below realize (a, b, c, abc - 2(a+b+c) - t)
    s = a + b + c + t
    m1 = Matrix2(a * b / s, b * (a + c) / s, a * (a + t) / s, a * (a + c + t) / s)
    m2 = Matrix2(a * b / s, -b * (b + t) / s, -a * (b + c) / s, b * (b + c + t) / s)
    m3 = Matrix2((a * b + c * s) / s, b * (a + c) / s, -a * (b + c) / s, -a * b / s)
    return m1, m2, m3


def build_representation(q: MarkoffQuad, tol: float = DEFAULT_TOL) -> tuple[Matrix2, Matrix2, Matrix2]:
    """Explicit matrices (M1, M2, M3) for the generators, satisfying

        tr Mi = (a, b, c),  det Mi = -1,
        tr M1M2 = tr M2M3 = tr M3M1 = 2,  tr (M1M2M3)^-1 = d.

    Entries within tol of zero route to the explicit zero-trace branch
    (the zero is rotated into the first generator slot; cyclic rotations
    of the generators preserve the fourth trace).  When an entry is that
    small the fourth trace is forced to -(sum of the other two) by the
    relation, so the realized d matches the input only to the residual.
    """
    q.require_valid(tol)
    a, b, c, d = q.values()
    ztol = tol * (1.0 + max(abs(v) for v in (a, b, c, d)))
    if abs(a) <= ztol:
        return _zero_rep(b, c)
    if abs(b) <= ztol:
        g1, g2, g3 = _zero_rep(c, a)  # generators (beta, gamma, alpha)
        return g3, g1, g2
    if abs(c) <= ztol:
        g1, g2, g3 = _zero_rep(a, b)  # generators (gamma, alpha, beta)
        return g2, g3, g1
    dflip = a * b * c - 2 * (a + b + c) - d
    if abs(a + b + c + dflip) <= ztol:
        # d's flip is 0 and a+b+c = 0: realize (a, c, b, 0) instead and
        # swap the last two generators, which exchanges the completion roots
        m1, m2, m3 = _generic_rep(a, c, b, a * b * c)
        return m1, m3, m2
    return _generic_rep(a, b, c, dflip)


def fricke_residual(a1: Matrix2, a2: Matrix2, a3: Matrix2) -> float:
    """Scale-free residual of the general GL(2,C) trace relation for
    three matrices and their product A0 = A1*A2*A3.

    The symmetric sum runs over unordered pairs {j,k}; the printed form
    sums ordered triples with a factor 1/2, which is the same thing.
    Residual is |LHS - RHS| divided by the largest monomial magnitude.
    """
    mats = (a1, a2, a3)
    a0 = a1 @ a2 @ a3
    t = [m.trace() for m in mats]
    d = [m.det() for m in mats]
    t0 = a0.trace()
    tp = {}
    for i in range(3):
        for j in range(3):
            if i != j:
                tp[(i, j)] = (mats[i] @ mats[j]).trace()
    lhs = 4 * a0.det()
    rhs = t0 * t0 + t[0] * t[1] * t[2] * t0 + tp[(0, 1)] * tp[(1, 2)] * tp[(2, 0)]
    monomials = [abs(lhs), abs(t0 * t0), abs(t[0] * t[1] * t[2] * t0),
                 abs(tp[(0, 1)] * tp[(1, 2)] * tp[(2, 0)])]
    for i in range(3):
        j, k = [m for m in range(3) if m != i]
        djk = (mats[j] @ mats[k]).det()
        pieces = (
            t[i] * t[i] * djk,
            -d[i] * t[j] * t[k] * tp[(j, k)],
            d[i] * tp[(j, k)] ** 2,
            -t0 * t[i] * tp[(j, k)],
        )
        rhs += sum(pieces)
        monomials.extend(abs(p) for p in pieces)
    return abs(lhs - rhs) / max(1.0, max(monomials))


def hurwitz_to_quad(a1, a2, a3, a4, tol: float = DEFAULT_TOL) -> MarkoffQuad:
    """Map a solution of a1^2+a2^2+a3^2+a4^2 = a1*a2*a3*a4 to the Markoff
    quad of its squares."""
    vals = tuple(_as_complex(v) for v in (a1, a2, a3, a4))
    sq = sum(v * v for v in vals)
    prod = vals[0] * vals[1] * vals[2] * vals[3]
    if abs(sq - prod) > tol * max(1.0, abs(prod)):
        raise InvalidQuadError(
            f"not a Markoff-Hurwitz solution: |sum sq - prod| = {abs(sq - prod):.3e}"
        )
    return MarkoffQuad(*(v * v for v in vals))


def quad_to_hurwitz(q: MarkoffQuad, tol: float = DEFAULT_TOL) -> tuple[complex, complex, complex, complex]:
    """One representative of the sign orbit mapping back to q.

    Principal square roots; if the principal choice lands on the wrong
    branch of the sign action the last root is negated (this leaves the
    squares, hence the quad, unchanged).  Not claimed canonical.
    """
    q.require_valid(tol)
    roots = [cmath.sqrt(v) for v in q.values()]
    sq = sum(r * r for r in roots)
    prod = roots[0] * roots[1] * roots[2] * roots[3]
    if abs(sq - prod) > tol * max(1.0, abs(prod)):
        roots[3] = -roots[3]
    return tuple(roots)


@dataclass(frozen=True)
class KleinSequence:
    """Trace data for the one-sided curves of a punctured Klein bottle.

    A = 2 cosh(l/2) of the unique two-sided curve; terms are sinh of the
    one-sided half-lengths, consecutive pairs satisfying

        x^2 + y^2 - x*y*A = -1.

    Terms keep the numeric type of the seeds (ints and Fractions stay
    exact); lambda_plus/lambda_minus are the floating roots of
    z^2 - A z + 1 ordered by magnitude.
    """

    A: object
    terms: tuple
    lambda_plus: complex
    lambda_minus: complex

    def relation_residual(self, i: int):
        x, y = self.terms[i], self.terms[i + 1]
        return x * x + y * y - x * y * self.A + 1


def klein_sequence(A, a0, a1, n: int, tol: float = DEFAULT_TOL) -> KleinSequence:
    """Extend a seed pair to n terms of the Klein bottle trace recursion
    a_{i+1} = A*a_i - a_{i-1} (consecutive quadratic relations differ by
    exactly this linear recurrence)."""
    if n < 2:
        raise DomainError("need n >= 2 terms")
    res = a0 * a0 + a1 * a1 - a0 * a1 * A + 1
    scale = 1.0 + abs(complex(a0 * a0)) + abs(complex(a1 * a1)) + abs(complex(a0 * a1 * A))
    if abs(complex(res)) > tol * scale:
        raise InvalidQuadError(
            f"seed pair violates the relation: residual {abs(complex(res)):.3e}"
        )
    terms = [a0, a1]
    for _ in range(n - 2):
        terms.append(A * terms[-1] - terms[-2])
    ac = complex(A)
    disc = cmath.sqrt(ac * ac - 4)
    lp, lm = (ac + disc) / 2, (ac - disc) / 2
    if abs(lp) < abs(lm):
        lp, lm = lm, lp
    return KleinSequence(A=A, terms=tuple(terms), lambda_plus=lp, lambda_minus=lm)
