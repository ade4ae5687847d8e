"""Toric monoids, face inclusions between them, and functional extension.

A ToricMonoid is the monoid of lattice points of a pointed cone.  Morphisms
are lattice maps carrying the source cone isomorphically onto a face of the
target cone, with the group completion landing as a saturated sublattice.
extend_functional pushes a functional on a face out to the whole monoid,
optionally making it strictly positive away from that face.
"""

from __future__ import annotations

from dataclasses import dataclass

from .cone import (
    Cone,
    Functional,
    cone_from_rays,
    faces,
    span_sublattice,
    supporting_functional,
)
from .intlin import (
    IntMatrix,
    complement_summand,
    invariant_factors,
    kernel_basis,
    solve_left,
)


class NegativeOnFace(ValueError):
    """Raised when a positive-mode extension starts from a functional that is
    already negative somewhere on the face."""


@dataclass(frozen=True)
class ToricMonoid:
    """Lattice points of a pointed cone inside Z^lattice_rank."""

    lattice_rank: int
    cone: Cone

    def __post_init__(self):
        if self.cone.ambient_rank != self.lattice_rank:
            raise ValueError("cone does not live in the monoid's lattice")


@dataclass(frozen=True)
class FaceMorphism:
    """A lattice map meant to include source as a face of target.

    Only shapes are checked here; the semantic conditions are the business of
    verify_face_morphism.
    """

    source: ToricMonoid
    target: ToricMonoid
    map: IntMatrix

    def __post_init__(self):
        if self.map.rows != self.target.lattice_rank or self.map.cols != self.source.lattice_rank:
            raise ValueError("morphism matrix shape does not match the lattices")


@dataclass(frozen=True, eq=False)
class MonoidFunctional:
    """Integer functional on a monoid, represented in the ambient dual.

    Only the restriction to gp(on) carries meaning: two representatives are
    equal when they agree on the gp basis.
    """

    on: ToricMonoid
    coefficients: Functional

    def __post_init__(self):
        if len(self.coefficients.coefficients) != self.on.lattice_rank:
            raise ValueError("coefficient length does not match the lattice")

    def gp_values(self) -> tuple[int, ...]:
        basis = gp(self.on)
        return tuple(self.coefficients(basis.col(j)) for j in range(basis.cols))

    def __eq__(self, other):
        if not isinstance(other, MonoidFunctional):
            return NotImplemented
        return self.on == other.on and self.gp_values() == other.gp_values()

    def __hash__(self):
        return hash((self.on, self.gp_values()))


def gp(m: ToricMonoid) -> IntMatrix:
    """Saturated basis (columns) of the group completion: lattice points of
    the span of the cone."""
    return span_sublattice(m.cone)


def image_cone(f: FaceMorphism) -> Cone:
    """The cone generated by the images of the source's extreme rays."""
    return cone_from_rays(
        f.target.lattice_rank, [f.map.apply(r) for r in f.source.cone.rays]
    )


def verify_face_morphism(f: FaceMorphism) -> tuple[str, ...]:
    """Check that f includes its source as a proper face of its target.

    Returns the violations found (empty tuple means ok): "not injective",
    "image not a face", "not saturated", "face not proper".
    """
    violations = []
    if kernel_basis(f.map).cols != 0:
        violations.append("not injective")
        return tuple(violations)
    img = image_cone(f)
    if img not in faces(f.target.cone):
        violations.append("image not a face")
    s = f.map @ gp(f.source)
    if invariant_factors(s) != tuple([1] * s.cols):
        violations.append("not saturated")
    if not violations and img == f.target.cone:
        violations.append("face not proper")
    return tuple(violations)


def _ceil_div(a: int, b: int) -> int:
    return -((-a) // b)


def extend_functional(
    m: ToricMonoid,
    f: FaceMorphism,
    psi: MonoidFunctional,
    mode: str = "nonneg_positive_away",
) -> MonoidFunctional:
    """Extend psi from the face included by f to all of m.

    The extension is deterministic: express psi on the image gp basis, set it
    to zero on the complement summand, and in mode "nonneg_positive_away" add
    the smallest multiple of the face's supporting functional that makes the
    value at least 1 on every ray outside the face.  The improper face is
    accepted and simply re-expresses psi.

    Raises NegativeOnFace in positive mode when psi is negative on a source
    ray; restriction along f is exact in both modes.
    """
    if mode not in ("arbitrary", "nonneg_positive_away"):
        raise ValueError(f"unknown mode {mode!r}")
    if f.target != m:
        raise ValueError("morphism does not land in the monoid being extended")
    if psi.on != f.source:
        raise ValueError("functional does not live on the morphism's source")

    basis = gp(f.source)
    s = f.map @ basis
    w = [psi.coefficients(basis.col(j)) for j in range(basis.cols)]
    square = s.hstack(complement_summand(s))
    chi0 = solve_left(square, tuple(w) + (0,) * (m.lattice_rank - s.cols))

    if mode == "arbitrary":
        out = MonoidFunctional(m, Functional(chi0))
    else:
        for r in f.source.cone.rays:
            if psi.coefficients(r) < 0:
                raise NegativeOnFace(f"negative on source ray {r}")
        img = image_cone(f)
        chi_face = supporting_functional(m.cone, img)
        k = 0
        for r in m.cone.rays:
            gap = chi_face(r)
            if gap:  # rays on the face have gap 0 and stay untouched
                have = sum(a * b for a, b in zip(chi0, r))
                if have < 1:
                    k = max(k, _ceil_div(1 - have, gap))
        total = tuple(a + k * b for a, b in zip(chi0, chi_face.coefficients))
        out = MonoidFunctional(m, Functional(total))

    # restriction along f must reproduce psi on the nose
    assert [out.coefficients(s.col(j)) for j in range(s.cols)] == w
    return out
