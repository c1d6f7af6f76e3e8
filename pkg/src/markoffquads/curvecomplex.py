"""The tree of Markoff quads.

Vertices of the underlying 4-regular tree are quads; crossing an edge
flips one entry.  One-sided curve classes are 3-cells: an entry slot
keeps its identity across every flip that does not replace it, so cells
are tracked by persistent ids, and a pair of cells meeting at a vertex
is a face (a two-sided curve class).  Pruned breadth-first exploration
enumerates all cells below a trace bound and all faces below a product
bound; this is the engine behind spectra, identity sums and the
summability check.
"""

from __future__ import annotations

import cmath
import enum
from collections import deque
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

from .errors import BudgetExceededError, DomainError, InvalidQuadError
from .quadalgebra import DEFAULT_TOL, MarkoffQuad, flip_value

DEFAULT_MAX_CELLS = 200_000
DEFAULT_MAX_STEPS = 10_000


@dataclass(frozen=True)
class ComplexNode:
    """A vertex: four persistent cell ids, their values, and how the
    vertex was reached (parent_move is the flipped slot, 1..4)."""

    cells: tuple[int, int, int, int]
    values: tuple[complex, complex, complex, complex]
    parent_move: int | None
    depth: int
    word: tuple[int, ...]

    def quad(self) -> MarkoffQuad:
        return MarkoffQuad.from_values(self.values)


def root_node(q: MarkoffQuad, tol: float = DEFAULT_TOL) -> ComplexNode:
    q.require_valid(tol)
    return ComplexNode(
        cells=(0, 1, 2, 3),
        values=q.values(),
        parent_move=None,
        depth=0,
        word=(),
    )


def apply_flip(node: ComplexNode, i: int, next_id: int) -> ComplexNode:
    """Child node across the edge at slot i; the replaced cell gets the
    fresh id next_id."""
    if i not in (1, 2, 3, 4):
        raise DomainError(f"flip index must be 1..4, got {i}")
    if next_id in node.cells:
        raise DomainError(f"cell id {next_id} already present at this vertex")
    cells = list(node.cells)
    values = list(node.values)
    values[i - 1] = flip_value(node.values, i)
    cells[i - 1] = next_id
    return ComplexNode(
        cells=tuple(cells),
        values=tuple(values),
        parent_move=i,
        depth=node.depth + 1,
        word=node.word + (i,),
    )


class VertexKind(enum.Enum):
    SINK = "sink"
    FUNNEL = "funnel"
    SADDLE2 = "saddle2"
    SADDLE3 = "saddle3"


@dataclass(frozen=True)
class VertexClass:
    """Orientation of the four incident edges: +1 outgoing (the flip
    strictly decreases magnitude), -1 incoming, 0 tie."""

    kind: VertexKind
    orientations: tuple[int, int, int, int]

    @property
    def outgoing(self) -> int:
        return sum(1 for o in self.orientations if o == +1)


def classify_vertex(q: MarkoffQuad, tol: float = DEFAULT_TOL) -> VertexClass:
    """Classify a vertex by its count of strictly magnitude-decreasing
    flips.  Four outgoing edges cannot occur at a valid quad (there are
    no sources); such input is rejected as numerically invalid."""
    q.require_valid(tol)
    vals = q.values()
    orient = []
    for i in range(1, 5):
        new = abs(flip_value(vals, i))
        old = abs(vals[i - 1])
        orient.append(+1 if new < old else (-1 if new > old else 0))
    out = sum(1 for o in orient if o == +1)
    if out == 4:
        raise InvalidQuadError("four outgoing edges: no valid quad is a source")
    kind = {0: VertexKind.SINK, 1: VertexKind.FUNNEL,
            2: VertexKind.SADDLE2, 3: VertexKind.SADDLE3}[out]
    return VertexClass(kind=kind, orientations=tuple(orient))


def reduce_to_sink(
    q: MarkoffQuad,
    max_steps: int = DEFAULT_MAX_STEPS,
    tol: float = DEFAULT_TOL,
) -> tuple[MarkoffQuad, list[int]]:
    """Flip strictly-decreasing directions until none remains.

    At each step the largest-magnitude entry whose flip strictly
    decreases it is flipped (ties on magnitude break to the lowest
    index).  Ties |d'| = |d| are terminal moves, never taken.
    """
    q.require_valid(tol)
    vals = list(q.values())
    path: list[int] = []
    for _ in range(max_steps):
        best = None
        for i in range(1, 5):
            new = flip_value(vals, i)
            if abs(new) < abs(vals[i - 1]):
                if best is None or abs(vals[i - 1]) > abs(vals[best - 1]):
                    best = i
        if best is None:
            return MarkoffQuad.from_values(vals), path
        vals[best - 1] = flip_value(vals, best)
        path.append(best)
    raise BudgetExceededError(
        f"no sink within {max_steps} flips; input may cycle among ties or be non-summable"
    )


@dataclass(frozen=True)
class Cell:
    """A discovered 3-cell: id in discovery order, value, and the flip
    word of the vertex that created it (root cells carry the empty word)."""

    id: int
    value: complex
    word: tuple[int, ...]


@dataclass(frozen=True)
class Face:
    """An unordered pair of cells meeting at some visited vertex."""

    cells: tuple[int, int]
    product: complex


@dataclass(frozen=True)
class Exploration:
    cells: tuple[Cell, ...]
    faces: tuple[Face, ...]
    nodes_visited: int
    budget_hit: bool


# cell keys before renumbering: root cells ("r", slot); created cells are
# keyed by the word of the node that created them
_ROOT_KEYS = tuple(("r", i) for i in range(4))


def _grow(v_abs: float, retained: tuple[float, float, float],
          cell_bound, face_bound) -> bool:
    # never prune a strictly descending direction; otherwise extend only
    # while the new value can still matter for the requested bounds
    if v_abs < max(retained):
        return True
    if cell_bound is not None and v_abs <= cell_bound:
        return True
    if face_bound is not None and v_abs * min(retained) <= face_bound:
        return True
    return False


def _walk_subtree(start_word, start_keys, start_vals,
                  cell_bound, face_bound, max_cells,
                  cells, faces):
    """BFS one subtree, appending discoveries.  cells: dict key ->
    (value, word); faces: dict frozenset{key,key} -> product."""
    queue = deque([(start_word, start_keys, start_vals)])
    visited = 0
    while queue:
        word, keys, vals = queue.popleft()
        visited += 1
        if face_bound is not None:
            for i in range(4):
                for j in range(i + 1, 4):
                    p = vals[i] * vals[j]
                    if abs(p) <= face_bound:
                        faces.setdefault(frozenset((keys[i], keys[j])), p)
        back = word[-1] if word else None
        for i in range(1, 5):
            if i == back:
                continue
            v = flip_value(vals, i)
            retained = tuple(abs(vals[j]) for j in range(4) if j != i - 1)
            if not _grow(abs(v), retained, cell_bound, face_bound):
                continue
            nword = word + (i,)
            if len(cells) >= max_cells:
                raise BudgetExceededError(
                    f"cell budget {max_cells} exhausted; suspected non-summable input"
                )
            cells[nword] = (v, nword)
            nkeys = list(keys)
            nkeys[i - 1] = nword
            nvals = list(vals)
            nvals[i - 1] = v
            queue.append((nword, tuple(nkeys), tuple(nvals)))
    return visited


def explore(
    q: MarkoffQuad,
    cell_bound: float | None = None,
    face_bound: float | None = None,
    max_cells: int = DEFAULT_MAX_CELLS,
    tol: float = DEFAULT_TOL,
    threads: int = 1,
    on_budget: str = "raise",
) -> Exploration:
    """Pruned breadth-first exploration from q.

    Records every created cell and every face with |product| within
    face_bound seen at a visited vertex.  Ids are assigned in canonical
    breadth-first discovery order (root slots first), which makes the
    output independent of threads.  on_budget is "raise" or "truncate".
    """
    q.require_valid(tol)
    if cell_bound is None and face_bound is None:
        raise DomainError("need at least one of cell_bound, face_bound")
    root_vals = q.values()
    cells: dict = {}
    for i in range(4):
        cells[_ROOT_KEYS[i]] = (root_vals[i], ())
    faces: dict = {}
    budget_hit = False
    visited = 0
    try:
        if threads <= 1:
            visited = _walk_subtree((), _ROOT_KEYS, root_vals,
                                    cell_bound, face_bound, max_cells,
                                    cells, faces)
        else:
            # root vertex handled here; each first move spawns a worker on a
            # disjoint subtree.  Merge is a set union keyed by words.
            if face_bound is not None:
                for i in range(4):
                    for j in range(i + 1, 4):
                        p = root_vals[i] * root_vals[j]
                        if abs(p) <= face_bound:
                            faces.setdefault(frozenset((_ROOT_KEYS[i], _ROOT_KEYS[j])), p)
            visited = 1
            jobs = []
            for i in range(1, 5):
                v = flip_value(root_vals, i)
                retained = tuple(abs(root_vals[j]) for j in range(4) if j != i - 1)
                if not _grow(abs(v), retained, cell_bound, face_bound):
                    continue
                nkeys = list(_ROOT_KEYS)
                nkeys[i - 1] = (i,)
                nvals = list(root_vals)
                nvals[i - 1] = v
                jobs.append(((i,), tuple(nkeys), tuple(nvals)))
            sub_cells = [dict() for _ in jobs]
            sub_faces = [dict() for _ in jobs]
            for k, job in enumerate(jobs):
                sub_cells[k][job[0]] = (job[2][job[0][0] - 1], job[0])
            worker_errors = []
            with ThreadPoolExecutor(max_workers=min(4, max(1, threads))) as pool:
                futs = [
                    pool.submit(_walk_subtree, job[0], job[1], job[2],
                                cell_bound, face_bound, max_cells,
                                sub_cells[k], sub_faces[k])
                    for k, job in enumerate(jobs)
                ]
                for f in futs:
                    try:
                        visited += f.result()
                    except BudgetExceededError as exc:
                        worker_errors.append(exc)
            for sc in sub_cells:
                cells.update(sc)
            for sf in sub_faces:
                for key, p in sf.items():
                    faces.setdefault(key, p)
            if worker_errors:
                raise worker_errors[0]
            if len(cells) > max_cells:
                raise BudgetExceededError(
                    f"cell budget {max_cells} exhausted across subtrees"
                )
    except BudgetExceededError:
        if on_budget == "raise":
            raise
        budget_hit = True

    # canonical ids: sort by (depth, word); sequential BFS discovery order
    # coincides with this ordering, root slots come first as ids 0..3
    def order(key):
        if key[0] == "r":
            return (0, (), key[1])
        return (len(key), key, -1)

    keys_sorted = sorted(cells.keys(), key=order)
    ids = {key: n for n, key in enumerate(keys_sorted)}
    out_cells = tuple(Cell(id=ids[k], value=cells[k][0], word=cells[k][1])
                      for k in keys_sorted)
    out_faces = []
    for key, p in faces.items():
        i, j = sorted(ids[k] for k in key)
        out_faces.append(Face(cells=(i, j), product=p))
    out_faces.sort(key=lambda f: f.cells)
    return Exploration(cells=out_cells, faces=tuple(out_faces),
                       nodes_visited=visited, budget_hit=budget_hit)


def enumerate_cells(
    q: MarkoffQuad,
    bound: float,
    max_cells: int = DEFAULT_MAX_CELLS,
    tol: float = DEFAULT_TOL,
    threads: int = 1,
) -> list[Cell]:
    """Every distinct cell with |value| <= bound, in discovery order."""
    ex = explore(q, cell_bound=bound, max_cells=max_cells, tol=tol, threads=threads)
    return [c for c in ex.cells if abs(c.value) <= bound]


def enumerate_faces(
    q: MarkoffQuad,
    product_bound: float,
    max_cells: int = DEFAULT_MAX_CELLS,
    tol: float = DEFAULT_TOL,
    threads: int = 1,
) -> list[Face]:
    """Every face with |product| <= product_bound, deduplicated by id
    pair (identity, not value), sorted by id pair."""
    ex = explore(q, face_bound=product_bound, max_cells=max_cells, tol=tol,
                 threads=threads)
    return list(ex.faces)


@dataclass(frozen=True)
class FibonacciAssignment:
    """Integer weights on cells generated from value 1 on a basis edge by
    the sum rule: a new cell's weight is the sum of the three weights at
    its creation vertex."""

    basis: tuple[int, int, int]
    values: dict[int, int]


def fibonacci_values(basis: tuple[int, int, int], depth: int) -> FibonacciAssignment:
    """Propagate the weights outward to every vertex within the given
    tree distance of the basis edge (distance 0 is its two endpoints)."""
    basis = tuple(basis)
    if len(set(basis)) != 3:
        raise DomainError("basis edge needs three distinct cell ids")
    if depth < 0:
        raise DomainError("depth must be >= 0")
    values = {c: 1 for c in basis}
    next_id = max(basis) + 1
    # a vertex is four cell ids; the two endpoints of the basis edge each
    # add one new cell
    frontier = []
    for _ in range(2):
        values[next_id] = 3
        frontier.append(basis + (next_id,))
        next_id += 1
    for _ in range(depth):
        new_frontier = []
        for vertex in frontier:
            for drop in vertex[:-1]:  # never cross back over the arrival edge
                kept = tuple(c for c in vertex if c != drop)
                values[next_id] = sum(values[c] for c in kept)
                new_frontier.append(kept + (next_id,))
                next_id += 1
        frontier = new_frontier
    return FibonacciAssignment(basis=basis, values=values)


def fibonacci_level_counts(max_value: int) -> dict[int, int]:
    """Count cells by weight for all weights <= max_value.

    Weights strictly increase outward (a new weight is the sum of three
    positive weights at its vertex), so pruning branches whose new weight
    exceeds max_value is exact.
    """
    if max_value < 1:
        raise DomainError("max_value must be >= 1")
    counts = {1: 3} if max_value >= 1 else {}
    frontier = []
    base = (1, 1, 1)
    if max_value >= 3:
        counts[3] = 2
        frontier = [(base, 3), (base, 3)]
    queue = deque(frontier)
    while queue:
        kept3, newest = queue.popleft()
        vertex = kept3 + (newest,)
        for drop_pos in range(3):  # the newest cell's own edge is the arrival edge
            kept = tuple(vertex[p] for p in range(4) if p != drop_pos)
            w = sum(kept)
            if w > max_value:
                continue
            counts[w] = counts.get(w, 0) + 1
            queue.append((kept, w))
    return counts


@dataclass(frozen=True)
class SpiralSequence:
    """Third values along the boundary of the face fixed by the pair
    (a, b); interior indices satisfy

        c_{n+1} + (2 - ab) c_n + c_{n-1} + 2(a + b) = 0.

    closed_form is (A, B, lam) with c_n = A lam^n + B lam^-n
    - 2(a+b)/(4-ab), present only when ab is not 0 or 4.
    """

    a: complex
    b: complex
    n_start: int
    terms: tuple[complex, ...]
    closed_form: tuple[complex, complex, complex] | None

    def term(self, n: int) -> complex:
        return self.terms[n - self.n_start]

    def closed_term(self, n: int) -> complex:
        if self.closed_form is None:
            raise DomainError("no closed form for ab in {0, 4}")
        A, B, lam = self.closed_form
        a, b = self.a, self.b
        return A * lam ** n + B * lam ** (-n) - 2 * (a + b) / (4 - a * b)


def spiral_sequence(a, b, c0, c1, n0: int, n1: int,
                    tol: float = DEFAULT_TOL) -> SpiralSequence:
    """Iterate the face recurrence in both directions over [n0, n1],
    anchored at indices 0 and 1 by c0 and c1."""
    a, b, c0, c1 = complex(a), complex(b), complex(c0), complex(c1)
    if n0 > 0 or n1 < 1:
        raise DomainError("need n0 <= 0 < 1 <= n1 to anchor the seeds")
    ab = a * b
    fwd = [c0, c1]
    while len(fwd) < n1 + 1:
        fwd.append((ab - 2) * fwd[-1] - fwd[-2] - 2 * (a + b))
    bwd = []
    lo = [c1, c0]
    while len(bwd) < -n0:
        nxt = (ab - 2) * lo[-1] - lo[-2] - 2 * (a + b)
        bwd.append(nxt)
        lo.append(nxt)
    terms = tuple(reversed(bwd)) + tuple(fwd[: n1 + 1])
    scale = 1.0 + abs(ab)
    closed = None
    if abs(ab) > tol * scale and abs(ab - 4) > tol * scale:
        K = -2 * (a + b) / (4 - ab)
        lam = (ab - 2 + cmath.sqrt(ab * (ab - 4))) / 2
        A = ((c1 - K) * lam - (c0 - K)) / (lam * lam - 1)
        B = (c0 - K) - A
        closed = (A, B, lam)
    return SpiralSequence(a=a, b=b, n_start=n0, terms=terms, closed_form=closed)
