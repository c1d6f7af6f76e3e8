"""Simple length spectra, counting function and growth-exponent fit.

One-sided classes come from cells of the quad tree (trace = 2 sinh(l/2)),
two-sided classes from faces via e = ab - 2 (trace = 2 cosh(l/2)).
Quasi-Fuchsian ordering and cutoffs use |l|.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

from .curvecomplex import DEFAULT_MAX_CELLS, enumerate_cells, enumerate_faces, reduce_to_sink
from .errors import DomainError
from .quadalgebra import (
    DEFAULT_TOL,
    MarkoffQuad,
    one_sided_length,
    two_sided_length,
)


class CurveKind(str, enum.Enum):
    ONE_SIDED = "one-sided"
    TWO_SIDED = "two-sided"


@dataclass(frozen=True)
class SpectrumEntry:
    """One simple closed curve class, with its trace, complex length
    (principal branch, Re >= 0), owning cell id (or id pair) and the
    discovery word in the reduced tree."""

    kind: CurveKind
    trace: complex
    length: complex
    cell_ref: int | tuple[int, int]
    word: tuple[int, ...] | None


def one_sided_spectrum(
    q: MarkoffQuad,
    L: float,
    max_cells: int = DEFAULT_MAX_CELLS,
    tol: float = DEFAULT_TOL,
    threads: int = 1,
) -> list[SpectrumEntry]:
    """All one-sided classes with |length| < L, sorted by |length| then
    discovery word.  The quad is reduced first; since |2 sinh(z/2)| <=
    2 sinh(|z|/2), enumerating traces up to 2 sinh(L/2) is complete."""
    if L <= 0:
        return []
    sink, _ = reduce_to_sink(q, tol=tol)
    bound = 2.0 * math.sinh(L / 2)
    entries = []
    for cell in enumerate_cells(sink, bound, max_cells=max_cells, tol=tol,
                                threads=threads):
        ell = one_sided_length(cell.value)  # zero trace raises: parabolic class
        if abs(ell) < L:
            entries.append(SpectrumEntry(
                kind=CurveKind.ONE_SIDED, trace=cell.value, length=ell,
                cell_ref=cell.id, word=cell.word,
            ))
    entries.sort(key=lambda e: (abs(e.length), e.word, e.cell_ref))
    return entries


def two_sided_spectrum(
    q: MarkoffQuad,
    L: float,
    max_cells: int = DEFAULT_MAX_CELLS,
    tol: float = DEFAULT_TOL,
    threads: int = 1,
) -> list[SpectrumEntry]:
    """All two-sided classes with |length| < L, deduplicated by cell id
    pair.  |e| = |2 cosh(l/2)| <= 2 cosh(|l|/2) bounds the face product
    by 2 cosh(L/2) + 2."""
    if L <= 0:
        return []
    sink, _ = reduce_to_sink(q, tol=tol)
    product_bound = 2.0 * math.cosh(L / 2) + 2.0
    entries = []
    for face in enumerate_faces(sink, product_bound, max_cells=max_cells,
                                tol=tol, threads=threads):
        e = face.product - 2
        ell = two_sided_length(e, tol=tol)
        if abs(ell) < L:
            entries.append(SpectrumEntry(
                kind=CurveKind.TWO_SIDED, trace=e, length=ell,
                cell_ref=face.cells, word=None,
            ))
    entries.sort(key=lambda ent: (abs(ent.length), ent.cell_ref))
    return entries


def count_s(
    q: MarkoffQuad,
    L: float,
    max_cells: int = DEFAULT_MAX_CELLS,
    tol: float = DEFAULT_TOL,
    threads: int = 1,
) -> int:
    """Number of one-sided classes with |length| < L."""
    return len(one_sided_spectrum(q, L, max_cells=max_cells, tol=tol,
                                  threads=threads))


# A one-sided class of trace <= 4 always exists, so only two-sided curves
# with modest trace can compete for the systole; |ab| <= 18 (trace <= 16)
# is a conservative cover.
_SYSTOLE_CELL_BOUND = 4.0
_SYSTOLE_FACE_BOUND = 18.0


def systole(
    q: MarkoffQuad,
    max_cells: int = DEFAULT_MAX_CELLS,
    tol: float = DEFAULT_TOL,
    threads: int = 1,
) -> tuple[complex, SpectrumEntry]:
    """Shortest curve class by |length|, with its witness.

    Candidates: the four entries of the reduced quad, every cell with
    |trace| <= 4, and every face with |product| <= 18.
    """
    sink, _ = reduce_to_sink(q, tol=tol)
    best: SpectrumEntry | None = None

    def consider(entry: SpectrumEntry):
        nonlocal best
        if best is None or abs(entry.length) < abs(best.length):
            best = entry

    seen = set()
    for c in enumerate_cells(sink, _SYSTOLE_CELL_BOUND, max_cells=max_cells,
                             tol=tol, threads=threads):
        seen.add(c.id)
        consider(SpectrumEntry(kind=CurveKind.ONE_SIDED, trace=c.value,
                               length=one_sided_length(c.value),
                               cell_ref=c.id, word=c.word))
    for i in range(4):  # sink entries compete even above the cell bound
        v = sink.values()[i]
        if i not in seen:
            consider(SpectrumEntry(kind=CurveKind.ONE_SIDED, trace=v,
                                   length=one_sided_length(v), cell_ref=i,
                                   word=()))
    for face in enumerate_faces(sink, _SYSTOLE_FACE_BOUND,
                                max_cells=max_cells, tol=tol, threads=threads):
        e = face.product - 2
        consider(SpectrumEntry(kind=CurveKind.TWO_SIDED, trace=e,
                               length=two_sided_length(e, tol=tol),
                               cell_ref=face.cells, word=None))
    if best is None:
        raise DomainError("no candidate curves found (degenerate quad)")
    return best.length, best


@dataclass(frozen=True)
class GrowthFit:
    """Least-squares fit of log s(L) = m log L + log eta."""

    samples: tuple[tuple[float, int], ...]
    exponent: float
    intercept_log_eta: float
    fit_residual: float


def fit_power_law(samples) -> tuple[float, float, float]:
    """Slope, intercept and RMS residual of a log-log least-squares line
    through (L, count) samples; zero-count samples are skipped."""
    pts = [(math.log(L), math.log(s)) for L, s in samples if s > 0]
    if len(pts) < 2:
        raise DomainError("need at least two nonzero counts to fit")
    n = len(pts)
    mx = sum(x for x, _ in pts) / n
    my = sum(y for _, y in pts) / n
    sxx = sum((x - mx) ** 2 for x, _ in pts)
    if sxx == 0:
        raise DomainError("degenerate fit: all L equal")
    m = sum((x - mx) * (y - my) for x, y in pts) / sxx
    c = my - m * mx
    rss = sum((y - (m * x + c)) ** 2 for x, y in pts)
    return m, c, math.sqrt(rss / n)


def growth_exponent(
    q: MarkoffQuad,
    lmin: float,
    lmax: float,
    shells: int,
    max_cells: int = DEFAULT_MAX_CELLS,
    tol: float = DEFAULT_TOL,
    threads: int = 1,
) -> GrowthFit:
    """Fit the counting function on geometrically spaced cutoffs.

    The asymptotic exponent is approached slowly; desk-scale windows
    give a coarse estimate only.
    """
    if shells < 4:
        raise DomainError("need at least 4 shells")
    if not (0 < lmin < lmax):
        raise DomainError("need 0 < lmin < lmax")
    ratio = lmax / lmin
    samples = []
    for k in range(shells):
        L = lmin * ratio ** (k / (shells - 1))
        samples.append((L, count_s(q, L, max_cells=max_cells, tol=tol,
                                   threads=threads)))
    m, c, res = fit_power_law(samples)
    return GrowthFit(samples=tuple(samples), exponent=m,
                     intercept_log_eta=c, fit_residual=res)
