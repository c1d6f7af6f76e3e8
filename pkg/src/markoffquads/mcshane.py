"""Identity sums over two-sided simple curve classes.

For well-behaved quads (every face product bounded set is finite and no
face product lies in [0, 4]) the series

    sum over faces of h(a*b),   h(x) = (1 - sqrt(1 - 4/x)) / 2,

converges to 1/2; via the face relation e = ab - 2 each term equals
1/(1 + exp(l/2)) for the two-sided geodesic of length l.  This module
has the h and psi building blocks, the summability check, partial sums
with a tail heuristic, and the finite-subtree identity for psi.
"""

from __future__ import annotations

import cmath
import enum
from dataclasses import dataclass

from .curvecomplex import DEFAULT_MAX_CELLS, Face, explore
from .errors import BqViolationError, BranchCutError, DomainError, InvalidQuadError
from .quadalgebra import DEFAULT_TOL, MarkoffQuad, flip_value

BRANCH_TOL = 1e-9


def _segment_distance(z: complex, lo: float, hi: float) -> float:
    t = min(max(z.real, lo), hi)
    return abs(z - t)


def h(x, tol: float = BRANCH_TOL) -> complex:
    """h(x) = (1 - sqrt(1 - 4/x)) / 2 on the plane cut along [0, 4].

    Inputs within tol of the cut are rejected rather than silently
    branch-picked.  For large |x| the algebraically identical form
    2 / (x (1 + sqrt(1 - 4/x))) avoids cancellation.
    """
    x = complex(x)
    if _segment_distance(x, 0.0, 4.0) <= tol:
        raise BranchCutError(f"{x} within {tol:g} of the cut [0,4]")
    s = cmath.sqrt(1 - 4 / x)
    if abs(x) > 8:
        return 2 / (x * (1 + s))
    return (1 - s) / 2


def _psi_values(values, i: int) -> complex:
    num = values[i - 1]
    total = values[0] + values[1] + values[2] + values[3]
    others = [v for j, v in enumerate(values) if j != i - 1]
    prod = others[0] * others[1] * others[2]
    if total == 0 or prod == 0:
        raise DomainError("psi undefined: zero entry sum or zero slot product")
    return num / total


def psi(q: MarkoffQuad, i: int, tol: float = DEFAULT_TOL) -> complex:
    """Weight of the oriented edge pointing into entry i:
    q_i / (a+b+c+d), equal to (a+b+c+d) / (product of the others) by the
    vertex relation.  Disagreement of the two forms beyond tol means the
    input is not a quad."""
    values = q.values()
    first = _psi_values(values, i)
    total = sum(values)
    others = [v for j, v in enumerate(values) if j != i - 1]
    second = total / (others[0] * others[1] * others[2])
    if abs(first - second) > tol * max(1.0, abs(first)):
        raise InvalidQuadError(
            f"psi forms disagree by {abs(first - second):.3e}; quad relation broken"
        )
    return first


@dataclass(frozen=True)
class BqReport:
    """Outcome of the summability check at cutoff k."""

    cutoff: float
    faces4: tuple[Face, ...]          # faces with |product| <= 4
    violations: tuple[Face, ...]      # faces with product within tol of [0, 4]
    cells_below2: int
    budget_hit: bool

    @property
    def ok(self) -> bool:
        return not self.violations and not self.budget_hit


def check_bq(
    q: MarkoffQuad,
    k: float = 4.0,
    max_cells: int = DEFAULT_MAX_CELLS,
    tol: float = BRANCH_TOL,
    threads: int = 1,
) -> BqReport:
    """Enumerate faces with |product| <= max(k, 4) and report any whose
    product lies on the segment [0, 4].  Finiteness cannot be certified
    from finite data, only refuted; budget exhaustion sets budget_hit
    instead of raising."""
    bound = max(k, 4.0)
    ex = explore(q, face_bound=bound, max_cells=max_cells,
                 on_budget="truncate", threads=threads)
    faces4 = tuple(f for f in ex.faces if abs(f.product) <= 4.0)
    violations = tuple(
        f for f in faces4 if _segment_distance(f.product, 0.0, 4.0) <= tol
    )
    below2 = sum(1 for c in ex.cells if abs(c.value) <= 2.0)
    return BqReport(cutoff=bound, faces4=faces4, violations=violations,
                    cells_below2=below2, budget_hit=ex.budget_hit)


class Verdict(str, enum.Enum):
    CONVERGED = "converged"
    BUDGET_EXCEEDED = "budget-exceeded"
    PARTIAL = "partial"


@dataclass(frozen=True)
class McShaneReport:
    partial_sum: complex
    term_count: int
    product_cutoff: float
    last_shell_max: float
    verdict: Verdict


def _partial(q, product_cutoff, max_cells, tol, target_tol, threads=1):
    bq = check_bq(q, 4.0, max_cells=max_cells, threads=threads)
    if bq.violations:
        raise BqViolationError(
            f"face product {bq.violations[0].product} lies in [0,4]; sum undefined"
        )
    ex = explore(q, face_bound=product_cutoff, max_cells=max_cells, tol=tol,
                 on_budget="truncate", threads=threads)
    faces = [f for f in ex.faces if abs(f.product) <= product_cutoff]
    total = 0j
    shell_max = 0.0
    for f in faces:  # already sorted by id pair: reproducible summation order
        term = h(f.product)
        total += term
        if abs(f.product) > product_cutoff / 2:
            shell_max = max(shell_max, abs(term))
    if ex.budget_hit:
        verdict = Verdict.BUDGET_EXCEEDED
    elif target_tol is not None and abs(total - 0.5) <= target_tol \
            and shell_max <= target_tol / 10:
        verdict = Verdict.CONVERGED
    else:
        verdict = Verdict.PARTIAL
    report = McShaneReport(partial_sum=total, term_count=len(faces),
                           product_cutoff=product_cutoff,
                           last_shell_max=shell_max, verdict=verdict)
    return report, faces


def mcshane_partial(
    q: MarkoffQuad,
    product_cutoff: float,
    max_cells: int = DEFAULT_MAX_CELLS,
    tol: float = DEFAULT_TOL,
    target_tol: float | None = None,
    threads: int = 1,
) -> McShaneReport:
    """Sum h over all distinct faces with |product| <= product_cutoff.

    last_shell_max is the largest |h| among faces in the final dyadic
    shell (cutoff/2, cutoff]: a heuristic tail indicator, since no
    computable tail bound is available.  The verdict is CONVERGED only
    when a target_tol is supplied and both |sum - 1/2| <= target_tol and
    last_shell_max <= target_tol/10 hold.
    """
    report, _ = _partial(q, product_cutoff, max_cells, tol, target_tol,
                         threads=threads)
    return report


DEFAULT_SCHEDULE = (1e2, 1e3, 1e4, 1e5, 1e6, 1e7, 1e8)
_CROSS_CHECK_TOL = 1e-10


def mcshane_verify(
    q: MarkoffQuad,
    target_tol: float,
    budget_schedule=DEFAULT_SCHEDULE,
    max_cells: int = DEFAULT_MAX_CELLS,
    tol: float = DEFAULT_TOL,
    threads: int = 1,
) -> tuple[bool, McShaneReport]:
    """Raise the cutoff along the schedule until the partial sum is
    within target_tol of 1/2 (with a quiet last shell) or the budget is
    exhausted.  Each term is cross-computed in geometric form
    1/(1 + exp(l/2)) with l from the face relation and must agree with
    h to 1e-10."""
    if target_tol <= 0:
        raise DomainError("target_tol must be positive")
    report = None
    for cutoff in budget_schedule:
        report, faces = _partial(q, float(cutoff), max_cells, tol, target_tol,
                                 threads=threads)
        for f in faces:
            ell = 2 * cmath.acosh((f.product - 2) / 2)
            geom = 1 / (1 + cmath.exp(ell / 2))
            if abs(h(f.product) - geom) > _CROSS_CHECK_TOL:
                raise InvalidQuadError(
                    f"h and geometric forms disagree at face {f.cells}: "
                    f"{abs(h(f.product) - geom):.3e}"
                )
        if report.verdict is Verdict.CONVERGED:
            return True, report
        if report.verdict is Verdict.BUDGET_EXCEEDED:
            return False, report
    return False, report


def finite_tree_psi_sum(q: MarkoffQuad, tree, tol: float = DEFAULT_TOL) -> complex:
    """Sum psi over all oriented edges pointing into a finite subtree
    from outside; the total is 1 for any such subtree.

    Vertices are given as flip words from the root: the empty word must
    be present, every word's parent prefix must be present, and words
    must not backtrack (w[k] != w[k+1]).
    """
    q.require_valid(tol)
    words = {tuple(w) for w in tree}
    if () not in words:
        raise DomainError("subtree must contain the root (empty word)")
    values = {(): q.values()}
    for w in sorted(words, key=len):
        if not w:
            continue
        if w[:-1] not in words:
            raise DomainError(f"subtree is not connected: {w} lacks its parent")
        if len(w) >= 2 and w[-1] == w[-2]:
            raise DomainError(f"word {w} backtracks; vertices must be reduced words")
        parent = values[w[:-1]]
        vals = list(parent)
        i = w[-1]
        vals[i - 1] = flip_value(parent, i)
        values[w] = tuple(vals)
    total = 0j
    for w in words:
        for i in range(1, 5):
            neighbor = w[:-1] if (w and w[-1] == i) else w + (i,)
            if neighbor not in words:
                total += _psi_values(values[w], i)
    return total
