"""Pointed rational polyhedral cones with exact integer arithmetic.

A Cone is stored canonically: primitive extreme ray generators, sorted
lexicographically, so equality and hashing are structural.  Facet normals
are found by enumerating hyperplanes through generator subsets: every facet
of a generated cone is generated by the generators lying on it, so its
normal is the kernel of d-1 independent generators, oriented to be
nonnegative on the rest.  Duality, membership and face enumeration all
reduce to that computation.  The dual of a cone spanning a proper subspace
contains the annihilator of the span as lines and comes back as a
NonPointedCone.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations
from typing import Sequence

from .intlin import (
    IntMatrix,
    complement_summand,
    kernel_basis,
    lattice_coordinates,
    primitivize,
    rank,
)


class NotPointed(ValueError):
    """Raised when generators span a cone containing a line."""


class NotAFace(ValueError):
    """Raised when a claimed face is not a face of the given cone."""


@dataclass(frozen=True)
class Functional:
    """Integer linear functional on an ambient lattice."""

    coefficients: tuple[int, ...]

    def __call__(self, v: Sequence[int]) -> int:
        if len(v) != len(self.coefficients):
            raise ValueError("length mismatch in pairing")
        return sum(a * b for a, b in zip(self.coefficients, v))


@dataclass(frozen=True)
class Cone:
    """Pointed cone, canonical form: primitive extreme rays, lex-sorted.

    Build through cone_from_rays; the constructor trusts its input.
    """

    ambient_rank: int
    rays: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        for r in self.rays:
            if len(r) != self.ambient_rank:
                raise ValueError("ray length does not match ambient rank")

    def is_zero(self) -> bool:
        return not self.rays


@dataclass(frozen=True)
class NonPointedCone:
    """A cone containing lines: pointed-part generators plus a lineality basis.

    The split into pointed part and lineality is a choice, not an invariant,
    so instances describe generators rather than a canonical form.
    """

    ambient_rank: int
    generators: tuple[tuple[int, ...], ...]
    lineality: tuple[tuple[int, ...], ...]


def _dot(a, b):
    return sum(x * y for x, y in zip(a, b))


def _clean_generators(ambient_rank, generators):
    seen = set()
    vecs = []
    for g in generators:
        g = tuple(int(x) for x in g)
        if len(g) != ambient_rank:
            raise ValueError("generator length does not match ambient rank")
        if not any(g):
            continue
        g = primitivize(g)
        if g not in seen:
            seen.add(g)
            vecs.append(g)
    return tuple(sorted(vecs))


def _active_rank(vectors, dim):
    if not vectors:
        return 0
    return rank(IntMatrix.from_rows(vectors, cols=dim))


def _facet_normals(coords, dim):
    """Facet normals of the cone generated by coords, full-dimensional in
    Z^dim.  Primitive, deduplicated, sorted.

    Each candidate hyperplane is the kernel of dim - 1 of the generators; it
    supports a facet exactly when the kernel is a line and all generators
    sit weakly on one side of it.
    """
    if dim == 0:
        return ()
    out = set()
    for subset in combinations(coords, dim - 1):
        ker = kernel_basis(IntMatrix.from_rows(subset, cols=dim))
        if ker.cols != 1:
            continue
        n = primitivize(ker.col(0))
        values = [_dot(n, c) for c in coords]
        if all(v >= 0 for v in values):
            out.add(n)
        elif all(v <= 0 for v in values):
            out.add(tuple(-x for x in n))
    return tuple(sorted(out))


def _span_basis(ambient_rank, vectors):
    """Saturated basis for the lattice points in the rational span."""
    vecs = [v for v in vectors if any(v)]
    ann = kernel_basis(IntMatrix.from_rows(vecs, cols=ambient_rank))
    return kernel_basis(ann.transpose())


@lru_cache(maxsize=None)
def _cone_geometry(ambient_rank: int, vecs: tuple[tuple[int, ...], ...]):
    """Span basis, span coordinates, pointedness and facet normals (facets in
    span coordinates) for the cone generated by vecs.

    A full-dimensional cone is pointed exactly when its facet normals span:
    any lineality would force every valid inequality into its annihilator.
    """
    basis = _span_basis(ambient_rank, vecs)
    d = basis.cols
    if vecs:
        coord_mat = lattice_coordinates(basis, IntMatrix.from_cols(vecs, rows=ambient_rank))
        coords = [coord_mat.col(j) for j in range(len(vecs))]
    else:
        coords = []
    facets = _facet_normals(coords, d)
    pointed = rank(IntMatrix.from_rows(facets, cols=d)) == d if d else True
    return basis, coords, pointed, facets


@lru_cache(maxsize=None)
def _span_projection(basis: IntMatrix) -> IntMatrix:
    """Rows give span coordinates: the projection that is the identity on the
    basis columns and zero on the complement summand."""
    n = basis.rows
    square = basis.hstack(complement_summand(basis))
    coords = lattice_coordinates(square, IntMatrix.identity(n))
    return IntMatrix.from_rows([coords.row(i) for i in range(basis.cols)], cols=n)


def cone_from_rays(ambient_rank: int, generators: Sequence[Sequence[int]]) -> Cone:
    """Canonical pointed cone from arbitrary integer generators.

    Generators are primitivized and deduplicated, non-extreme ones dropped,
    and the survivors sorted.  Raises NotPointed when the generated cone
    contains a line.
    """
    vecs = _clean_generators(ambient_rank, generators)
    _, coords, pointed, facets = _cone_geometry(ambient_rank, vecs)
    if not pointed:
        raise NotPointed("generators span a cone containing a line")
    d = len(coords[0]) if coords else 0
    extreme = []
    for v, c in zip(vecs, coords):
        active = [f for f in facets if _dot(f, c) == 0]
        if _active_rank(active, d) == d - 1:
            extreme.append(v)
    return Cone(ambient_rank, tuple(sorted(extreme)))


def cone_dual_of_generated(ambient_rank: int, generators: Sequence[Sequence[int]]) -> Cone | NonPointedCone:
    """Dual of the (possibly non-pointed) cone generated by the given vectors.

    The pointed part is computed in span coordinates, where facet normals of
    the generated cone are exactly the extreme rays of its dual, then lifted
    to the ambient dual lattice by the projection that kills a complement of
    the span.  Lines appear exactly when the generators do not span, and the
    lineality returned is the annihilator of their span.
    """
    vecs = _clean_generators(ambient_rank, generators)
    basis, _, _, facets = _cone_geometry(ambient_rank, vecs)
    lin_mat = kernel_basis(IntMatrix.from_rows(vecs, cols=ambient_rank))
    lin = tuple(sorted(lin_mat.col(j) for j in range(lin_mat.cols)))
    if facets:
        proj = _span_projection(basis)
        gens = tuple(
            sorted(
                primitivize(tuple(_dot(h, proj.col(j)) for j in range(ambient_rank)))
                for h in facets
            )
        )
    else:
        gens = ()
    if not lin:
        return Cone(ambient_rank, gens)
    return NonPointedCone(ambient_rank, gens, lin)


@lru_cache(maxsize=None)
def _dual_data(c: Cone) -> tuple[tuple[tuple[int, ...], ...], tuple[tuple[int, ...], ...]]:
    d = cone_dual_of_generated(c.ambient_rank, c.rays)
    if isinstance(d, Cone):
        return d.rays, ()
    return d.generators, d.lineality


def dual_cone(c: Cone) -> Cone | NonPointedCone:
    """Dual of c: a Cone when c is full-dimensional, otherwise a
    NonPointedCone whose lineality annihilates the span of c."""
    return cone_dual_of_generated(c.ambient_rank, c.rays)


def contains(c: Cone, v: Sequence[int]) -> bool:
    """Exact membership: v pairs nonnegatively with every dual generator and
    pairs to zero with the dual lineality (so v lies in the span of c)."""
    v = tuple(int(x) for x in v)
    if len(v) != c.ambient_rank:
        raise ValueError("vector length does not match ambient rank")
    gens, lin = _dual_data(c)
    if any(_dot(l, v) != 0 for l in lin):
        return False
    return all(_dot(g, v) >= 0 for g in gens)


@lru_cache(maxsize=None)
def faces(c: Cone) -> tuple[Cone, ...]:
    """All faces of c, the zero face and c itself included.

    Every face is an intersection of facets, so the face lattice is the
    closure of the facet ray-sets under intersection.  Rays of c lying in a
    face are exactly that face's extreme rays, which keeps the construction
    canonical.  Sorted by (ray count, rays).
    """
    gens, _ = _dual_data(c)
    facet_sets = [frozenset(r for r in c.rays if _dot(g, r) == 0) for g in gens]
    found = {frozenset(c.rays)}
    frontier = set(facet_sets)
    while frontier:
        found |= frontier
        frontier = {a & b for a in frontier for b in facet_sets if a & b not in found}
    if c.rays:
        found.add(frozenset())  # the zero face: intersection of all facets
    out = [Cone(c.ambient_rank, tuple(sorted(rs))) for rs in found]
    out.sort(key=lambda f: (len(f.rays), f.rays))
    return tuple(out)


def is_face(c: Cone, f: Cone) -> bool:
    return f in faces(c)


def supporting_functional(c: Cone, f: Cone) -> Functional:
    """Functional that is >= 0 on c, vanishes exactly on f, and is >= 1 on
    every extreme ray of c outside f.

    Deterministic: the primitivized sum of all facet normals of c vanishing
    on f.  The improper face gets the zero functional.  Raises NotAFace when
    f is not a face of c.
    """
    if f not in faces(c):
        raise NotAFace("second cone is not a face of the first")
    gens, _ = _dual_data(c)
    chi = [0] * c.ambient_rank
    for g in gens:
        if all(_dot(g, r) == 0 for r in f.rays):
            for i, x in enumerate(g):
                chi[i] += x
    chi = primitivize(tuple(chi))
    face_rays = set(f.rays)
    assert all(_dot(chi, r) == 0 for r in f.rays)
    assert all(_dot(chi, r) >= 1 for r in c.rays if r not in face_rays)
    return Functional(chi)


@lru_cache(maxsize=None)
def span_sublattice(c: Cone) -> IntMatrix:
    """Saturated basis (as columns) of the lattice points in the span of c."""
    return _span_basis(c.ambient_rank, c.rays)


def intersection(a: Cone, b: Cone) -> Cone:
    """Intersection of two pointed cones in the same ambient lattice.

    Dualize the sum of the duals: the dual generators of both cones (lines
    opened up into opposite pairs) generate a full-dimensional cone whose
    dual is the intersection, and an intersection of pointed cones is again
    pointed.
    """
    if a.ambient_rank != b.ambient_rank:
        raise ValueError("ambient rank mismatch")
    gens: list[tuple[int, ...]] = []
    for c in (a, b):
        g, lin = _dual_data(c)
        gens.extend(g)
        for l in lin:
            gens.append(l)
            gens.append(tuple(-x for x in l))
    met = cone_dual_of_generated(a.ambient_rank, gens)
    assert isinstance(met, Cone)
    return met
