import cmath
import math
import random

import pytest

from markoffquads import (
    BqViolationError,
    BranchCutError,
    DomainError,
    InvalidQuadError,
    MarkoffQuad,
    Verdict,
    check_bq,
    finite_tree_psi_sum,
    flip,
    h,
    mcshane_partial,
    mcshane_verify,
    psi,
    sample_fuchsian_quad,
)
from helpers import perturb_quad

Q4 = MarkoffQuad(4, 4, 4, 4)


def _h_oracle(x):
    # direct principal-branch evaluation
    return (1 - cmath.sqrt(1 - 4 / complex(x))) / 2


def test_h_examples():
    assert h(16) == pytest.approx((1 - math.sqrt(3) / 2) / 2, abs=1e-15)
    assert h(16) == pytest.approx(0.0669872981077806, abs=1e-12)
    assert h(-4) == pytest.approx((1 - math.sqrt(2)) / 2, abs=1e-15)
    assert abs(h(1e8) * 1e8 - 1) < 1e-7
    for x in (16, -4, 100, 4.5, -0.5 + 2j, 1e8):
        assert h(x) == pytest.approx(_h_oracle(x), abs=1e-12)


def test_h_branch_cut_rejection():
    for bad in (0, 2, 4, 3.9999999999, 2 + 1e-12j):
        with pytest.raises(BranchCutError):
            h(bad)
    # just outside the guard band is accepted
    assert h(2 + 1e-6j) is not None
    assert h(-1e-6) is not None


def test_psi_examples():
    for i in (1, 2, 3, 4):
        assert psi(Q4, i) == pytest.approx(0.25)
    assert sum(psi(Q4, i) for i in (1, 2, 3, 4)) == pytest.approx(1.0)
    # opposite orientations across an edge sum to 1
    assert psi(Q4, 4) + psi(flip(Q4, 4), 4) == pytest.approx(1.0)


def test_psi_edge_and_vertex_relations_random():
    rng = random.Random(13)
    for _ in range(50):
        q = sample_fuchsian_quad(rng)
        total = sum(psi(q, i) for i in (1, 2, 3, 4))
        assert abs(total - 1) <= 1e-12
        for i in (1, 2, 3, 4):
            assert abs(psi(q, i) + psi(flip(q, i), i) - 1) <= 1e-12


def test_psi_rejects_broken_quad():
    with pytest.raises((InvalidQuadError, DomainError)):
        psi(MarkoffQuad(1, 1, 1, 1), 1)


def test_check_bq_examples():
    rep = check_bq(Q4, 16)
    assert len(rep.violations) == 0
    assert rep.budget_hit is False
    assert rep.ok
    rep = check_bq(MarkoffQuad(0, 0, 0, 0), 4)
    assert len(rep.violations) > 0
    assert not rep.ok
    rep = check_bq(MarkoffQuad(2, 5, 5, 8), 10)
    assert len(rep.violations) == 0
    # the (2,5) face has product exactly 10; it is enumerated at k=10
    # via the faces listing of the exploration (10 > 4 so not in faces4)
    assert all(abs(f.product) <= 4 for f in rep.faces4)


def test_mcshane_partial_examples():
    rep = mcshane_partial(Q4, 16)
    assert rep.term_count == 6
    assert rep.partial_sum == pytest.approx(6 * _h_oracle(16), abs=1e-12)
    rep = mcshane_partial(Q4, 144)
    assert rep.term_count == 18
    expected = 6 * _h_oracle(16) + 12 * _h_oracle(144)
    assert rep.partial_sum == pytest.approx(expected, abs=1e-12)
    rep = mcshane_partial(Q4, 15)
    assert rep.term_count == 0
    assert rep.partial_sum == 0


def test_mcshane_partial_rejects_bq_violation():
    with pytest.raises(BqViolationError):
        mcshane_partial(MarkoffQuad(0, 0, 0, 0), 100)


def test_mcshane_monotone_bounded():
    prev = 0.0
    for cutoff in (16, 144, 2000, 2e4, 2e5):
        rep = mcshane_partial(Q4, cutoff)
        s = rep.partial_sum
        assert abs(s.imag) <= 1e-15
        assert s.real > prev
        assert s.real <= 0.5 + 1e-12
        prev = s.real


def test_mcshane_verify_fundamental():
    for vals in ((4, 4, 4, 4), (1, 5, 24, 30)):
        ok, rep = mcshane_verify(MarkoffQuad.from_values(vals), 1e-3)
        assert ok
        assert rep.verdict is Verdict.CONVERGED
        assert abs(rep.partial_sum - 0.5) <= 1e-3


def test_mcshane_verify_perturbed_complex():
    rng = random.Random(4)
    base = sample_fuchsian_quad(rng)
    vals = perturb_quad(base.values(), rng, scale=1e-3)
    q = MarkoffQuad.from_values(vals)
    rep = check_bq(q, 4)
    assert rep.ok
    ok, report = mcshane_verify(q, 1e-3)
    assert ok
    assert abs(report.partial_sum - 0.5) <= 1e-3


def test_finite_tree_psi_sum_examples():
    # single vertex: four incoming edges
    assert finite_tree_psi_sum(Q4, [()]) == pytest.approx(1.0, abs=1e-15)
    # a single edge: six incoming edges
    assert finite_tree_psi_sum(Q4, [(), (4,)]) == pytest.approx(1.0, abs=1e-12)
    # ball of radius 2
    words = [()]
    words += [(i,) for i in range(1, 5)]
    for i in range(1, 5):
        words += [(i, j) for j in range(1, 5) if j != i]
    assert finite_tree_psi_sum(Q4, words) == pytest.approx(1.0, abs=1e-10)


def test_finite_tree_psi_sum_validation():
    with pytest.raises(DomainError):
        finite_tree_psi_sum(Q4, [(4,)])  # missing root
    with pytest.raises(DomainError):
        finite_tree_psi_sum(Q4, [(), (1, 2)])  # disconnected
    with pytest.raises(DomainError):
        finite_tree_psi_sum(Q4, [(), (1,), (1, 1)])  # backtracking word


def _random_subtree(rng, size):
    words = [()]
    frontier = [()]
    while len(words) < size and frontier:
        w = rng.choice(frontier)
        options = [i for i in range(1, 5) if not (w and w[-1] == i)]
        i = rng.choice(options)
        new = w + (i,)
        if new not in words:
            words.append(new)
            frontier.append(new)
    return words


def test_finite_tree_psi_sum_random_subtrees():
    rng = random.Random(17)
    for _ in range(5):
        q = sample_fuchsian_quad(rng)
        for _ in range(10):
            words = _random_subtree(rng, rng.randint(1, 12))
            assert abs(finite_tree_psi_sum(q, words) - 1) <= 1e-10


def test_two_forms_agree_per_term():
    # h(ab) = 1/(1 + exp(l/2)) with l = 2 acosh((ab-2)/2)
    rng = random.Random(27)
    for _ in range(100):
        ab = 4.0 + 100.0 * rng.random() ** 2
        ell = 2 * cmath.acosh((ab - 2) / 2)
        assert abs(h(ab) - 1 / (1 + cmath.exp(ell / 2))) <= 1e-12


def test_bq_enumeration_reaches_product_ten_face():
    # at k = 10 the (2,5) pair of (2,5,5,8) is inside the enumerated set
    from markoffquads import enumerate_faces

    faces = enumerate_faces(MarkoffQuad(2, 5, 5, 8), 10)
    assert any(abs(f.product - 10) <= 1e-12 for f in faces)


def test_check_bq_truncates_on_budget_with_threads():
    rep = check_bq(MarkoffQuad(0, 0, 0, 0), 4, max_cells=60, threads=4)
    assert rep.budget_hit
    assert not rep.ok
