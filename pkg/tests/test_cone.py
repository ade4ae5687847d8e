"""Cone construction, duality, faces and supporting functionals."""

import pytest
from hypothesis import given, settings, assume, strategies as st

from toricfans.cone import (
    Cone,
    NonPointedCone,
    NotAFace,
    NotPointed,
    cone_dual_of_generated,
    cone_from_rays,
    contains,
    dual_cone,
    faces,
    intersection,
    is_face,
    span_sublattice,
    supporting_functional,
)
from toricfans.intlin import IntMatrix

from oracles import caratheodory_member


QUADRANT = cone_from_rays(2, [(1, 0), (0, 1)])
# the A_1 surface cone: dual computed by hand below
WEDGE = cone_from_rays(2, [(1, 0), (1, 2)])


def test_canonical_form_sorts_and_primitivizes():
    c = cone_from_rays(2, [(3, 0), (2, 4), (1, 2)])
    assert c.rays == ((1, 0), (1, 2))


def test_non_extreme_generators_dropped():
    c = cone_from_rays(2, [(1, 0), (1, 1), (0, 1)])
    assert c.rays == ((0, 1), (1, 0))


def test_zero_generators_ignored():
    c = cone_from_rays(2, [(0, 0), (1, 0)])
    assert c.rays == ((1, 0),)


def test_zero_cone():
    c = cone_from_rays(3, [])
    assert c.is_zero() and c.rays == ()


def test_not_pointed_raises():
    with pytest.raises(NotPointed):
        cone_from_rays(2, [(1, 0), (-1, 0)])
    with pytest.raises(NotPointed):
        cone_from_rays(2, [(1, 0), (-1, 1), (0, -1)])


def test_dual_of_quadrant_is_quadrant():
    d = dual_cone(QUADRANT)
    assert isinstance(d, Cone)
    assert d.rays == ((0, 1), (1, 0))


def test_dual_of_wedge():
    # by hand: phi.(1,0) >= 0 and phi.(1,2) >= 0 has extreme solutions
    # (0,1) (active on (1,0)) and (2,-1) (active on (1,2))
    d = dual_cone(WEDGE)
    assert isinstance(d, Cone)
    assert d.rays == ((0, 1), (2, -1))


def test_dual_of_low_dimensional_cone_has_lineality():
    d = dual_cone(cone_from_rays(2, [(1, 0)]))
    assert isinstance(d, NonPointedCone)
    assert d.generators == ((1, 0),)
    assert d.lineality == ((0, 1),)


def test_dual_of_zero_cone_is_everything():
    d = dual_cone(cone_from_rays(2, []))
    assert isinstance(d, NonPointedCone)
    assert d.generators == ()
    assert d.lineality == ((0, 1), (1, 0))


def test_dual_of_generated_halfplane():
    d = cone_dual_of_generated(2, [(1, 0), (-1, 0), (0, 1)])
    assert isinstance(d, Cone)
    assert d.rays == ((0, 1),)


def test_contains():
    assert contains(WEDGE, (1, 1))
    assert contains(WEDGE, (1, 0))
    assert contains(WEDGE, (2, 4))
    assert contains(WEDGE, (0, 0))
    assert not contains(WEDGE, (1, -1))
    assert not contains(WEDGE, (0, 1))
    assert not contains(WEDGE, (-1, 0))


def test_contains_respects_span():
    ray = cone_from_rays(2, [(1, 0)])
    assert contains(ray, (5, 0))
    assert not contains(ray, (-1, 0))
    assert not contains(ray, (1, 1))
    zero = cone_from_rays(2, [])
    assert contains(zero, (0, 0))
    assert not contains(zero, (1, 0))


def test_faces_of_quadrant():
    fs = faces(QUADRANT)
    assert len(fs) == 4
    assert fs[0].is_zero()
    assert {f.rays for f in fs} == {
        (),
        ((1, 0),),
        ((0, 1),),
        ((0, 1), (1, 0)),
    }


def test_faces_of_ray():
    fs = faces(cone_from_rays(2, [(1, 0)]))
    assert [f.rays for f in fs] == [(), ((1, 0),)]


def test_faces_of_octant():
    fs = faces(cone_from_rays(3, [(1, 0, 0), (0, 1, 0), (0, 0, 1)]))
    # 1 zero + 3 rays + 3 two-dimensional faces + the cone itself
    assert len(fs) == 8
    by_count = {}
    for f in fs:
        by_count.setdefault(len(f.rays), 0)
        by_count[len(f.rays)] += 1
    assert by_count == {0: 1, 1: 3, 2: 3, 3: 1}


def test_is_face():
    assert is_face(QUADRANT, cone_from_rays(2, [(1, 0)]))
    assert is_face(QUADRANT, QUADRANT)
    assert is_face(QUADRANT, cone_from_rays(2, []))
    assert not is_face(QUADRANT, cone_from_rays(2, [(1, 1)]))
    assert not is_face(WEDGE, QUADRANT)


def test_supporting_functional_values():
    axis = cone_from_rays(2, [(1, 0)])
    chi = supporting_functional(QUADRANT, axis)
    assert chi.coefficients == (0, 1)
    assert chi((1, 0)) == 0 and chi((0, 1)) == 1

    chi0 = supporting_functional(QUADRANT, cone_from_rays(2, []))
    assert chi0.coefficients == (1, 1)

    chi_w = supporting_functional(WEDGE, cone_from_rays(2, [(1, 2)]))
    assert chi_w.coefficients == (2, -1)
    assert chi_w((1, 2)) == 0 and chi_w((1, 0)) == 2


def test_supporting_functional_improper_face_is_zero():
    chi = supporting_functional(QUADRANT, QUADRANT)
    assert chi.coefficients == (0, 0)


def test_supporting_functional_not_a_face():
    with pytest.raises(NotAFace):
        supporting_functional(QUADRANT, cone_from_rays(2, [(1, 1)]))


def test_span_sublattice():
    b = span_sublattice(cone_from_rays(2, [(1, 0)]))
    assert b.entries == ((1,), (0,))
    full = span_sublattice(WEDGE)
    assert (full.rows, full.cols) == (2, 2)


def test_intersection_of_wedges():
    other = cone_from_rays(2, [(1, 1), (0, 1)])
    met = intersection(WEDGE, other)
    assert met.rays == ((1, 1), (1, 2))


def test_intersection_of_axes_is_zero():
    a = cone_from_rays(2, [(1, 0)])
    b = cone_from_rays(2, [(0, 1)])
    assert intersection(a, b).is_zero()


def test_intersection_with_face_gives_face():
    half = cone_from_rays(2, [(1, 0), (1, -1)])
    met = intersection(QUADRANT, half)
    assert met.rays == ((1, 0),)


vectors = st.lists(
    st.tuples(*([st.integers(min_value=-6, max_value=6)] * 3)),
    min_size=1,
    max_size=5,
)


def _pointed(vecs):
    try:
        return cone_from_rays(3, vecs)
    except NotPointed:
        return None


@settings(max_examples=150, deadline=None)
@given(vectors)
def test_membership_matches_conic_combination_oracle(vecs):
    c = _pointed(vecs)
    assume(c is not None)
    for v in vecs:
        assert contains(c, v)
    # membership of assorted nearby points agrees with the combination oracle
    probes = {tuple(a + b for a, b in zip(u, w)) for u in vecs for w in vecs}
    probes |= {tuple(-x for x in v) for v in vecs}
    for p in probes:
        assert contains(c, p) == caratheodory_member(list(c.rays), p)


@settings(max_examples=100, deadline=None)
@given(vectors)
def test_faces_are_coherent(vecs):
    c = _pointed(vecs)
    assume(c is not None)
    fs = faces(c)
    assert fs[-1] == c and fs[0].is_zero()
    for f in fs:
        assert set(f.rays) <= set(c.rays)
        chi = supporting_functional(c, f)
        for r in c.rays:
            val = chi(r)
            assert val == 0 if r in f.rays else val >= 1
        # a face of a face is a face
        for g in faces(f):
            assert g in fs


@settings(max_examples=100, deadline=None)
@given(vectors)
def test_double_dual_is_identity_for_full_dimensional(vecs):
    c = _pointed(vecs)
    assume(c is not None and span_sublattice(c).cols == 3)
    d = dual_cone(c)
    assert isinstance(d, Cone)
    dd = dual_cone(d)
    assert dd == c


@settings(max_examples=80, deadline=None)
@given(vectors, vectors)
def test_intersection_properties(vs, ws):
    a, b = _pointed(vs), _pointed(ws)
    assume(a is not None and b is not None)
    met = intersection(a, b)
    assert intersection(a, a) == a
    for r in met.rays:
        assert contains(a, r) and contains(b, r)
    for f in faces(a):
        assert intersection(a, f) == f
