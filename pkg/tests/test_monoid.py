"""Toric monoids, face morphism validation, functional extension."""

import pytest
from hypothesis import given, settings, assume, strategies as st

from toricfans.cone import Cone, Functional, cone_from_rays, faces, span_sublattice
from toricfans.intlin import IntMatrix, NotSaturated, lattice_coordinates
from toricfans.monoid import (
    FaceMorphism,
    MonoidFunctional,
    NegativeOnFace,
    ToricMonoid,
    extend_functional,
    gp,
    image_cone,
    verify_face_morphism,
)


NAT = ToricMonoid(1, cone_from_rays(1, [(1,)]))
QUAD = ToricMonoid(2, cone_from_rays(2, [(1, 0), (0, 1)]))
E1 = FaceMorphism(NAT, QUAD, IntMatrix.from_cols([(1, 0)]))


def test_gp_full_dimensional():
    b = gp(QUAD)
    assert (b.rows, b.cols) == (2, 2)


def test_gp_of_ray_is_primitive_generator():
    m = ToricMonoid(2, cone_from_rays(2, [(1, 2)]))
    assert gp(m).columns() == [(1, 2)]


def test_gp_of_zero_cone_is_empty():
    m = ToricMonoid(3, cone_from_rays(3, []))
    b = gp(m)
    assert (b.rows, b.cols) == (3, 0)


def test_verify_axis_inclusion_ok():
    assert verify_face_morphism(E1) == ()


def test_verify_identity_is_not_proper():
    ident = FaceMorphism(NAT, NAT, IntMatrix.identity(1))
    assert verify_face_morphism(ident) == ("face not proper",)


def test_verify_diagonal_is_not_a_face():
    diag = FaceMorphism(NAT, QUAD, IntMatrix.from_cols([(1, 1)]))
    assert "image not a face" in verify_face_morphism(diag)


def test_verify_non_injective():
    zero = FaceMorphism(NAT, QUAD, IntMatrix.from_cols([(0, 0)]))
    assert verify_face_morphism(zero) == ("not injective",)


def test_verify_unsaturated_inclusion():
    # doubling N into the axis: the image lattice 2Z x 0 has index 2 in gp
    doubled = FaceMorphism(NAT, QUAD, IntMatrix.from_cols([(2, 0)]))
    assert "not saturated" in verify_face_morphism(doubled)


def test_verify_zero_monoid_into_quadrant():
    origin = ToricMonoid(0, cone_from_rays(0, []))
    into = FaceMorphism(origin, QUAD, IntMatrix(2, 0, ((), ())))
    assert verify_face_morphism(into) == ()


def test_image_cone():
    assert image_cone(E1).rays == ((1, 0),)


def test_extend_positive_mode_pinned():
    psi = MonoidFunctional(NAT, Functional((2,)))
    out = extend_functional(QUAD, E1, psi, "nonneg_positive_away")
    assert out.coefficients.coefficients == (2, 1)


def test_extend_arbitrary_mode_pinned():
    psi = MonoidFunctional(NAT, Functional((-1,)))
    out = extend_functional(QUAD, E1, psi, "arbitrary")
    assert out.coefficients.coefficients == (-1, 0)


def test_extend_from_zero_face():
    origin = ToricMonoid(0, cone_from_rays(0, []))
    into = FaceMorphism(origin, QUAD, IntMatrix(2, 0, ((), ())))
    psi = MonoidFunctional(origin, Functional(()))
    out = extend_functional(QUAD, into, psi, "nonneg_positive_away")
    assert out.coefficients.coefficients == (1, 1)


def test_extend_along_improper_face_returns_psi():
    ident = FaceMorphism(QUAD, QUAD, IntMatrix.identity(2))
    psi = MonoidFunctional(QUAD, Functional((3, 5)))
    out = extend_functional(QUAD, ident, psi, "nonneg_positive_away")
    assert out == psi


def test_extend_negative_on_face_raises():
    psi = MonoidFunctional(NAT, Functional((-2,)))
    with pytest.raises(NegativeOnFace):
        extend_functional(QUAD, E1, psi, "nonneg_positive_away")


def test_extend_rejects_mismatched_inputs():
    psi = MonoidFunctional(NAT, Functional((1,)))
    with pytest.raises(ValueError):
        extend_functional(NAT, E1, psi)
    with pytest.raises(ValueError):
        extend_functional(QUAD, E1, psi, "positively")


def test_functional_equality_is_on_gp():
    ray = ToricMonoid(2, cone_from_rays(2, [(1, 0)]))
    a = MonoidFunctional(ray, Functional((3, 0)))
    b = MonoidFunctional(ray, Functional((3, 7)))  # differs off the span only
    assert a == b and hash(a) == hash(b)
    c = MonoidFunctional(ray, Functional((4, 0)))
    assert a != c


def _face_inclusion(c: Cone, f: Cone) -> FaceMorphism:
    """Source living in its own span coordinates, mapped in by the span basis."""
    basis = span_sublattice(f)
    if f.rays:
        coords = lattice_coordinates(basis, IntMatrix.from_cols(f.rays, rows=c.ambient_rank))
        inner = cone_from_rays(basis.cols, coords.columns())
    else:
        inner = cone_from_rays(0, [])
    src = ToricMonoid(basis.cols, inner)
    tgt = ToricMonoid(c.ambient_rank, c)
    return FaceMorphism(src, tgt, basis)


vectors = st.lists(
    st.tuples(*([st.integers(min_value=-5, max_value=5)] * 3)),
    min_size=1,
    max_size=4,
)


@settings(max_examples=80, deadline=None)
@given(vectors, st.data())
def test_face_inclusions_verify_and_extend(vecs, data):
    from toricfans.cone import NotPointed

    try:
        c = cone_from_rays(3, vecs)
    except NotPointed:
        assume(False)
    fs = faces(c)
    assume(len(fs) > 1)
    f = data.draw(st.sampled_from(fs[:-1]))  # a proper face
    inc = _face_inclusion(c, f)
    assert verify_face_morphism(inc) == ()

    # extension restricts exactly and clears 1 on the rays off the face
    src_rays = inc.source.cone.rays
    coeffs = tuple(
        data.draw(st.integers(min_value=0, max_value=4), label="psi")
        for _ in range(inc.source.lattice_rank)
    )
    psi = MonoidFunctional(inc.source, Functional(coeffs))
    assume(all(psi.coefficients(r) >= 0 for r in src_rays))
    out = extend_functional(inc.target, inc, psi, "nonneg_positive_away")
    s = inc.map @ gp(inc.source)
    for j in range(s.cols):
        assert out.coefficients(s.col(j)) == psi.coefficients(gp(inc.source).col(j))
    face_rays = set(f.rays)
    for r in c.rays:
        v = out.coefficients(r)
        if r in face_rays:
            assert v >= 0
        else:
            assert v >= 1
