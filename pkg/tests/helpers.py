"""Independent oracles shared by the test suite.

Everything here is computed from first principles (literal formulas,
exhaustive walks, brute-force scans) so that tests compare the library
against a second, unrelated route to the same numbers.
"""

import cmath
import math
from collections import deque


def quad_residual(vals):
    a, b, c, d = [complex(v) for v in vals]
    return abs((a + b + c + d) ** 2 - a * b * c * d)


def brute_flip(vals, i):
    """Literal flip formula, 1-based index."""
    o = [v for j, v in enumerate(vals) if j != i - 1]
    return o[0] * o[1] * o[2] - 2 * (o[0] + o[1] + o[2]) - vals[i - 1]


def completion_roots(a, b, c):
    """Quadratic-formula roots of x^2 + (2(a+b+c) - abc)x + (a+b+c)^2."""
    a, b, c = complex(a), complex(b), complex(c)
    B = 2 * (a + b + c) - a * b * c
    disc = cmath.sqrt(B * B - 4 * (a + b + c) ** 2)
    return (-B + disc) / 2, (-B - disc) / 2


def unpruned_walk(vals, depth, face_bound=None):
    """Exhaustive breadth-first walk to a fixed depth, no pruning.

    Returns (cells, faces): cells maps identity -> value where identity
    is ("r", slot) for the four roots or the creating flip word; faces
    maps frozenset of two identities -> product, collected at every
    visited vertex (filtered by |product| <= face_bound when given).
    """
    vals = tuple(complex(v) for v in vals)
    idents = tuple(("r", i) for i in range(4))
    cells = {idents[i]: vals[i] for i in range(4)}
    faces = {}
    queue = deque([((), idents, vals)])
    while queue:
        word, keys, vv = queue.popleft()
        for i in range(4):
            for j in range(i + 1, 4):
                p = vv[i] * vv[j]
                if face_bound is None or abs(p) <= face_bound:
                    faces.setdefault(frozenset((keys[i], keys[j])), p)
        if len(word) >= depth:
            continue
        for i in range(1, 5):
            if word and word[-1] == i:
                continue
            nv = brute_flip(vv, i)
            nword = word + (i,)
            cells[nword] = nv
            nkeys = list(keys)
            nkeys[i - 1] = nword
            nvals = list(vv)
            nvals[i - 1] = nv
            queue.append((nword, tuple(nkeys), tuple(nvals)))
    return cells, faces


def unpruned_cells_below(vals, bound):
    """All cell values <= bound for a reduced positive real quad, by a
    plain level-by-level walk with no pruning.

    Away from the sink, a forward flip replaces s by (sum of the other
    three)^2 / s >= that sum, so every new value strictly exceeds the
    value its branch introduced one level earlier; once a whole level's
    new values exceed the bound, no deeper cell can return below it.
    """
    vals = tuple(float(v.real if isinstance(v, complex) else v) for v in vals)
    assert min(vals) > 0
    out = [v for v in vals if v <= bound]
    level = [((), vals)]
    while level:
        nxt = []
        new_min = math.inf
        for word, vv in level:
            for i in range(1, 5):
                if word and word[-1] == i:
                    continue
                nv = brute_flip(vv, i).real
                new_min = min(new_min, nv)
                if nv <= bound:
                    out.append(nv)
                nvals = list(vv)
                nvals[i - 1] = nv
                nxt.append((word + (i,), tuple(nvals)))
        if new_min > bound:
            break
        level = nxt
    return out


def unpruned_count_below_length(vals, L):
    """Independent s(L): one-sided classes with length < L for a reduced
    positive quad."""
    bound = 2.0 * math.sinh(L / 2)
    return sum(
        1 for v in unpruned_cells_below(vals, bound) if 2 * math.asinh(v / 2) < L
    )


def jordan_totient2(n):
    """J_2(n) = n^2 * prod over prime p | n of (1 - 1/p^2), exactly."""
    result = n * n
    m = n
    p = 2
    while p * p <= m:
        if m % p == 0:
            result = result // (p * p) * (p * p - 1)
            while m % p == 0:
                m //= p
        p += 1
    if m > 1:
        result = result // (m * m) * (m * m - 1)
    return result


def brute_integral_scan(B):
    """All positive integer quads a <= b <= c <= d <= B: for each triple,
    solve the completion quadratic over the integers."""
    out = set()
    for a in range(1, B + 1):
        for b in range(a, B + 1):
            for c in range(b, B + 1):
                s = a + b + c
                lin = 2 * s - a * b * c
                disc = lin * lin - 4 * s * s
                if disc < 0:
                    continue
                r = math.isqrt(disc)
                if r * r != disc:
                    continue
                for sgn in (1, -1):
                    num = -lin + sgn * r
                    if num % 2:
                        continue
                    d = num // 2
                    if c <= d <= B and (s + d) ** 2 == a * b * c * d:
                        out.add((a, b, c, d))
    return out


def random_complex_quad(rng, box=3.0):
    """Valid complex quad: random (a, b, c) plus a completion root."""
    while True:
        a = complex(rng.uniform(-box, box), rng.uniform(-box, box))
        b = complex(rng.uniform(-box, box), rng.uniform(-box, box))
        c = complex(rng.uniform(-box, box), rng.uniform(-box, box))
        r1, r2 = completion_roots(a, b, c)
        d = r1 if rng.random() < 0.5 else r2
        vals = (a, b, c, d)
        scale = max(1.0, abs(a * b * c * d))
        if quad_residual(vals) <= 1e-9 * scale:
            return vals


def perturb_quad(vals, rng, scale=1e-3):
    """Complex perturbation of a valid quad: jiggle a, b, c and complete
    with the root nearest the original d."""
    a, b, c, d = [complex(v) for v in vals]
    a *= 1 + scale * complex(rng.uniform(-1, 1), rng.uniform(-1, 1))
    b *= 1 + scale * complex(rng.uniform(-1, 1), rng.uniform(-1, 1))
    c *= 1 + scale * complex(rng.uniform(-1, 1), rng.uniform(-1, 1))
    r1, r2 = completion_roots(a, b, c)
    nd = r1 if abs(r1 - d) <= abs(r2 - d) else r2
    return (a, b, c, nd)
