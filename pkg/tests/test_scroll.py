from __future__ import annotations

import random

import pytest

from scrollforge import linalg
from scrollforge.gf import FieldTooSmallError, field_of_order
from scrollforge.projgeom import ProjPoint, meet, span
from scrollforge.scroll import (
    CANONICAL_CONIC_FRAME,
    CANONICAL_CUBIC_FRAME,
    INF,
    FrameError,
    RuledQuinticSurface,
    canonical_scroll,
    cross_section,
    equivalence_map,
    image_scroll,
    nucleus_of_conic,
    quadric_zero_set,
    scroll_from_frames,
    sym_power,
    twisted_cubics,
    unique_cubic_through,
    veronese,
)

F7, F8 = field_of_order(7), field_of_order(8)


def P7(*v):
    return ProjPoint.of(F7, list(v))


def test_canonical_point_formula():
    V = canonical_scroll(7)
    assert V.point(1, 0) == P7(1, 1, 1, 1, 0, 0, 0)
    assert V.point(2, INF) == P7(0, 0, 0, 0, 1, 2, 4)
    assert V.point(2, 3) == P7(1, 2, 4, 1, 3, 6, 5)  # 8 = 1 mod 7, 3*2 = 6, 3*4 = 12 = 5


def test_generator_at_infinity():
    V = canonical_scroll(7)
    assert V.generator(INF) == span([[0, 0, 0, 1, 0, 0, 0], [0, 0, 0, 0, 0, 0, 1]], field=F7)
    assert V.point(INF, 0) == P7(0, 0, 0, 1, 0, 0, 0)


@pytest.mark.parametrize("q", [7, 8, 9])
def test_canonical_structure(q):
    V = canonical_scroll(q)
    assert len(V.points) == (q + 1) ** 2
    assert len(V.generators) == q + 1
    assert V.alpha.dim == 2 and V.pi3.dim == 3
    assert meet(V.alpha, V.pi3).is_empty()
    assert span(list(V.points)).dim == 6
    assert len(set(V.conic)) == q + 1 and len(set(V.cubic_directrix)) == q + 1


def test_generators_pairwise_disjoint_and_independent_triples():
    V = canonical_scroll(7)
    gens = list(V.generators.values())
    for i in range(len(gens)):
        for j in range(i + 1, len(gens)):
            assert meet(gens[i], gens[j]).is_empty()
    rng = random.Random(0)
    for _ in range(50):
        a, b, c = rng.sample(gens, 3)
        assert span(a, b, c).dim == 5


def test_small_fields_rejected():
    with pytest.raises(FieldTooSmallError):
        canonical_scroll(5)


def test_contains_examples():
    V = canonical_scroll(7)
    assert V.contains([1, 1, 1, 1, 0, 0, 0])
    assert V.contains(V.point(5, 4))
    assert not V.contains([1, 0, 0, 0, 0, 0, 1])
    assert not V.contains([1, 1, 0, 0, 0, 0, 0])


@pytest.mark.parametrize("q", [7, 8])
def test_quadrics_cut_out_exactly_the_surface(q):
    F = field_of_order(q)
    assert quadric_zero_set(F) == set(canonical_scroll(F).points)


def test_frames_validation():
    I3 = CANONICAL_CONIC_FRAME
    I4 = CANONICAL_CUBIC_FRAME
    with pytest.raises(FrameError):
        scroll_from_frames(F7, I3[:2], I4)
    with pytest.raises(FrameError):
        scroll_from_frames(F7, [I3[0], I3[0], I3[1]], I4)
    with pytest.raises(FrameError):
        scroll_from_frames(F7, I3, [I4[0], I4[1], I4[2], I3[0]])
    with pytest.raises(FrameError):
        scroll_from_frames(F7, I3, I4, [[1, 2], [2, 4]])
    V = scroll_from_frames(F7, I3, I4)
    assert V.points == canonical_scroll(F7).points


def test_sym_power_intertwines_veronese():
    A = [[2, 3], [1, 5]]
    for d in (2, 3):
        S = sym_power(A, d, F7)
        for x, y in ((1, 0), (0, 1), (1, 4), (3, 6)):
            ax = (2 * x + 3 * y) % 7, (x + 5 * y) % 7
            assert linalg.matvec(S, veronese(F7, x, y, d), F7) == veronese(F7, *ax, d)


def random_scroll(F, rng):
    while True:
        M = [[rng.randrange(F.order) for _ in range(7)] for _ in range(7)]
        if linalg.rank(M, F) == 7:
            break
    cols = linalg.transpose(M)
    while True:
        phi = [[rng.randrange(F.order) for _ in range(2)] for _ in range(2)]
        if F.sub(F.mul(phi[0][0], phi[1][1]), F.mul(phi[0][1], phi[1][0])):
            break
    return scroll_from_frames(F, cols[4:], cols[:4], phi)


@pytest.mark.parametrize("q", [7, 8])
def test_random_frames_are_equivalent_to_canonical(q):
    F = field_of_order(q)
    rng = random.Random(q)
    W = canonical_scroll(F)
    for _ in range(3):
        V = random_scroll(F, rng)
        M = V.from_canonical
        assert {ProjPoint.of(F, linalg.matvec(M, P.coords, F)) for P in W.points} == V.points
        M2 = equivalence_map(W, V)
        assert {ProjPoint.of(F, linalg.matvec(M2, P.coords, F)) for P in W.points} == V.points
        assert all(V.contains(P) for P in V.points)


def test_equivalence_with_reparametrized_cubic():
    for F in (F7, F8):
        two = 2  # element code 2; in GF(8) this is the class of x
        V = scroll_from_frames(F, CANONICAL_CONIC_FRAME, CANONICAL_CUBIC_FRAME, [[1, 0], [0, two]])
        M = equivalence_map(canonical_scroll(F), V)
        assert linalg.rank(M, F) == 7
        back = equivalence_map(V, canonical_scroll(F))
        assert all(
            ProjPoint.of(F, linalg.matvec(back, linalg.matvec(M, P.coords, F), F)) in canonical_scroll(F).points
            for P in canonical_scroll(F).points
        )


def test_image_scroll_and_json_roundtrip():
    rng = random.Random(5)
    V = random_scroll(F7, rng)
    W = RuledQuinticSurface.from_json(V.to_json())
    assert W.points == V.points
    M = [[int(i == (j + 1) % 7) for j in range(7)] for i in range(7)]
    U = image_scroll(V, M)
    assert len(U.points) == 64
    assert RuledQuinticSurface.from_json(U.to_json()).points == U.points


def test_cross_section_examples():
    V = canonical_scroll(7)
    # e = f = 0 gives the cubic directrix
    assert cross_section(V, 0, 0) == V.cubic_directrix
    pts = cross_section(V, 1, 1)
    assert pts[0] == V.point(0, 1)
    assert pts[-1] == V.point(INF, 1)
    assert span(pts).dim == 3
    assert all(P in V.points for P in pts)


def test_cubic_family_counts():
    V = canonical_scroll(7)
    fam = twisted_cubics(V)
    assert len(fam) == 49
    cubics = list(fam.values())
    conic = set(V.conic)
    for pts in cubics:
        assert len(set(pts)) == 8 and not set(pts) & conic
    # two distinct cubics share at most one point
    rng = random.Random(6)
    for _ in range(200):
        a, b = rng.sample(cubics, 2)
        assert len(set(a) & set(b)) <= 1


def test_unique_cubic_through_examples():
    V = canonical_scroll(7)
    (e, f), pts = unique_cubic_through(V, V.scroll_point(0, 1), V.scroll_point(1, 2))
    assert (e, f) == (1, 1)
    assert pts == cross_section(V, 1, 1)
    (e, f), _ = unique_cubic_through(V, V.scroll_point(INF, 3), V.scroll_point(2, 0))
    assert e == 3 and (2 * e + f) % 7 == 0
    with pytest.raises(ValueError):
        unique_cubic_through(V, V.scroll_point(1, 1), V.scroll_point(1, 2))
    with pytest.raises(ValueError):
        unique_cubic_through(V, V.scroll_point(1, INF), V.scroll_point(2, 2))


def test_nucleus_in_even_characteristic():
    V = canonical_scroll(8)
    Nu = nucleus_of_conic(V)
    assert Nu == ProjPoint.of(F8, [0, 0, 0, 0, 0, 1, 0])
    assert Nu not in V.points
    assert V.alpha.contains(Nu)
    with pytest.raises(ValueError):
        nucleus_of_conic(canonical_scroll(7))
