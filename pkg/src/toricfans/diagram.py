"""Tight diagrams of toric monoids: validation, colimits, functional extension.

A diagram is a finite id-indexed collection of toric monoids plus face
morphisms between them (identities implicit).  Tightness is the conjunction
of four conditions: every listed morphism is a proper face inclusion (T1),
every face of every object is realized inside the diagram (T2), parallel
composites agree (T3), and every pair of objects has a unique maximal common
face (T4).  Ids are strings so reports and tie-breaking stay deterministic.

The colimit is presented on the poset-maximal objects only: their group
completions generate, and one relation block per maximal pair glues along
the pair's unique maximal common face.  This is the same colimit as the
full per-morphism coequalizer (any compatible cocone factors through it the
same way) and keeps the Smith reductions small.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Sequence

from .cone import (
    Cone,
    Functional,
    NotPointed,
    cone_from_rays,
    faces,
    supporting_functional,
)
from .intlin import (
    IntMatrix,
    NotInLattice,
    kernel_basis,
    lattice_coordinates,
    rank,
    solve_left,
)
from .monoid import (
    FaceMorphism,
    MonoidFunctional,
    NegativeOnFace,
    ToricMonoid,
    extend_functional,
    gp,
    verify_face_morphism,
)


class NotTight(ValueError):
    """Raised when an operation requires a tight diagram and validation fails."""

    def __init__(self, violations):
        super().__init__("; ".join(violations))
        self.violations = tuple(violations)


class NotTightSubdiagram(ValueError):
    """Raised when subdiagram members do not themselves form a tight diagram."""


class NotJoinClosed(ValueError):
    """Raised when a subdiagram misses the join of two of its members."""

    def __init__(self, witness):
        a, b, join_id = witness
        super().__init__(f"members {a!r}, {b!r} have join {join_id!r} outside the subdiagram")
        self.witness = witness


class IncompatibleFamily(ValueError):
    """Raised when given functionals cannot come from one functional on the colimit."""


class NegativeOnSub(ValueError):
    """Raised in positive mode when a given functional is negative on a member ray."""


@dataclass(frozen=True)
class DiagramMorphism:
    """An edge of the diagram, endpoints referenced by object id."""

    source_id: str
    target_id: str
    matrix: IntMatrix


class TightDiagram:
    """Candidate diagram; construction checks shapes only, not tightness."""

    def __init__(self, objects: Mapping[str, ToricMonoid], morphisms: Sequence[DiagramMorphism]):
        self.objects = dict(objects)
        for key in self.objects:
            if not isinstance(key, str):
                raise TypeError("object ids must be strings")
        self.morphisms = tuple(morphisms)
        for e in self.morphisms:
            if e.source_id not in self.objects or e.target_id not in self.objects:
                raise ValueError(f"morphism {e.source_id!r}->{e.target_id!r} references unknown object")
            src, tgt = self.objects[e.source_id], self.objects[e.target_id]
            if e.matrix.rows != tgt.lattice_rank or e.matrix.cols != src.lattice_rank:
                raise ValueError(f"morphism {e.source_id!r}->{e.target_id!r} has wrong matrix shape")

    def __eq__(self, other):
        if not isinstance(other, TightDiagram):
            return NotImplemented
        return self.objects == other.objects and set(self.morphisms) == set(other.morphisms)


@dataclass(frozen=True)
class Subdiagram:
    parent: TightDiagram
    member_ids: frozenset

    def __post_init__(self):
        unknown = set(self.member_ids) - set(self.parent.objects)
        if unknown:
            raise ValueError(f"unknown member ids: {sorted(unknown)}")


@dataclass(frozen=True)
class ColimitResult:
    colimit_rank: int
    cone: Cone
    embeddings: Mapping[str, IntMatrix]  # id -> (colimit_rank x gp-rank of object)


def _composites(d: TightDiagram):
    """All path composites comp[x][y] (matrix of the unique-up-to-T3 path
    x -> y), plus T3 conflict reports, plus a cycle flag.

    Edge-local dynamic programming over reverse topological order; agreeing
    on every one-edge extension is the same as agreeing on all paths.
    """
    edges = sorted(set(d.morphisms), key=lambda e: (e.source_id, e.target_id, e.matrix.entries))
    succ = {i: [] for i in d.objects}
    indeg = {i: 0 for i in d.objects}
    for e in edges:
        succ[e.source_id].append(e)
        indeg[e.target_id] += 1
    order = [i for i in sorted(d.objects) if indeg[i] == 0]
    seen = list(order)
    pending = dict(indeg)
    k = 0
    while k < len(seen):
        for e in succ[seen[k]]:
            pending[e.target_id] -= 1
            if pending[e.target_id] == 0:
                seen.append(e.target_id)
        k += 1
    if len(seen) < len(d.objects):
        return {}, (), True

    comp = {i: {} for i in d.objects}
    conflicts = []
    for x in reversed(seen):
        comp[x][x] = IntMatrix.identity(d.objects[x].lattice_rank)
        for e in succ[x]:
            for tgt, tail in sorted(comp[e.target_id].items()):
                candidate = tail @ e.matrix
                known = comp[x].get(tgt)
                if known is None:
                    comp[x][tgt] = candidate
                elif known != candidate:
                    conflicts.append(f"T3: parallel composites {x!r}->{tgt!r} disagree")
    return comp, tuple(sorted(set(conflicts))), False


def _image_in(d: TightDiagram, comp, src: str, tgt: str) -> Cone | None:
    """Image of src's cone inside tgt along the composite, or None when the
    composite degenerates (only possible if T1 already failed)."""
    matrix = comp[src][tgt]
    try:
        return cone_from_rays(
            d.objects[tgt].lattice_rank,
            [matrix.apply(r) for r in d.objects[src].cone.rays],
        )
    except NotPointed:
        return None


def validate_tight(d: TightDiagram) -> tuple[str, ...]:
    """All violations of the four tightness conditions (empty tuple = tight).

    A face of an object counts as present when some object's composite image
    is that face; the object itself stands for its improper face.
    """
    violations = []
    for e in sorted(set(d.morphisms), key=lambda e: (e.source_id, e.target_id, e.matrix.entries)):
        f = FaceMorphism(d.objects[e.source_id], d.objects[e.target_id], e.matrix)
        for problem in verify_face_morphism(f):
            violations.append(f"T1: morphism {e.source_id!r}->{e.target_id!r}: {problem}")

    comp, conflicts, cyclic = _composites(d)
    if cyclic:
        violations.append("T3: the diagram contains a directed morphism cycle")
        return tuple(violations)
    violations.extend(conflicts)

    for i in sorted(d.objects):
        realized = set()
        for j in sorted(d.objects):
            if i in comp[j]:
                img = _image_in(d, comp, j, i)
                if img is not None:
                    realized.add(img)
        for f in faces(d.objects[i].cone):
            if f != d.objects[i].cone and f not in realized:
                violations.append(f"T2: object {i!r} is missing its face with rays {f.rays}")

    below = {i: {j for j in d.objects if i in comp[j]} for i in d.objects}
    ids = sorted(d.objects)
    for a_pos, a in enumerate(ids):
        for b in ids[a_pos + 1 :]:
            common = below[a] & below[b]
            maximal = [
                k for k in common
                if not any(other != k and other in comp[k] for other in common)
            ]
            if len(maximal) != 1:
                violations.append(
                    f"T4: objects {a!r}, {b!r} have {len(maximal)} maximal common faces"
                )
    return tuple(violations)


def _require_tight(d: TightDiagram):
    violations = validate_tight(d)
    if violations:
        raise NotTight(violations)


def _poset(d: TightDiagram, comp):
    below = {i: {j for j in d.objects if i in comp[j]} for i in d.objects}
    maximal_ids = sorted(i for i in d.objects if all(j == i for j in comp[i]))
    return below, maximal_ids


def _max_common_face(comp, below, a: str, b: str) -> str:
    common = below[a] & below[b]
    maximal = [k for k in common if not any(other != k and other in comp[k] for other in common)]
    assert len(maximal) == 1, f"no unique maximal common face for {a!r}, {b!r}"
    return maximal[0]


def _gp_matrix(d: TightDiagram, comp, src: str, tgt: str) -> IntMatrix:
    """The composite src -> tgt on gp bases: gp(src) columns expressed in
    gp(tgt) coordinates."""
    b_src = gp(d.objects[src])
    b_tgt = gp(d.objects[tgt])
    return lattice_coordinates(b_tgt, comp[src][tgt] @ b_src)


def colimit(d: TightDiagram) -> ColimitResult:
    """Colimit of a tight diagram in free abelian groups, with its cone.

    Generators: the gp bases of the poset-maximal objects.  Relations: for
    each maximal pair, the two images of their unique maximal common face
    are identified.  The quotient by the saturated relation lattice is free;
    its matrix doubles as the maximal objects' embeddings, and every other
    object embeds through any maximal object above it (the relations make
    the choice immaterial).
    """
    _require_tight(d)
    comp, _, _ = _composites(d)
    below, maximal_ids = _poset(d, comp)

    widths = {m: gp(d.objects[m]).cols for m in maximal_ids}
    offsets = {}
    total = 0
    for m in maximal_ids:
        offsets[m] = total
        total += widths[m]

    def slot(m: str, col: Sequence[int]) -> list[int]:
        out = [0] * total
        out[offsets[m] : offsets[m] + widths[m]] = list(col)
        return out

    relation_cols = []
    for i, m1 in enumerate(maximal_ids):
        for m2 in maximal_ids[i + 1 :]:
            z = _max_common_face(comp, below, m1, m2)
            x1 = _gp_matrix(d, comp, z, m1)
            x2 = _gp_matrix(d, comp, z, m2)
            for j in range(x1.cols):
                left = slot(m1, x1.col(j))
                right = slot(m2, x2.col(j))
                relation_cols.append(tuple(a - b for a, b in zip(left, right)))

    relations = IntMatrix.from_cols(relation_cols, rows=total)
    phi = kernel_basis(relations.transpose()).transpose()
    L = phi.rows

    embeddings = {}
    for m in maximal_ids:
        embeddings[m] = IntMatrix.from_cols(
            [phi.col(offsets[m] + j) for j in range(widths[m])], rows=L
        )
    for i in sorted(d.objects):
        if i in embeddings:
            continue
        carrier = min(m for m in maximal_ids if m in comp[i])
        embeddings[i] = embeddings[carrier] @ _gp_matrix(d, comp, i, carrier)

    rays = []
    for m in maximal_ids:
        basis = gp(d.objects[m])
        cone_m = d.objects[m].cone
        if cone_m.rays:
            coords = lattice_coordinates(basis, IntMatrix.from_cols(cone_m.rays, rows=basis.rows))
            for j in range(coords.cols):
                rays.append(embeddings[m].apply(coords.col(j)))
    return ColimitResult(L, cone_from_rays(L, rays), embeddings)


def verify_face_embeddings(d: TightDiagram, c: ColimitResult) -> tuple[str, ...]:
    """Check each object lands in the colimit as a face: embedding injective
    on gp, image cone a face of the colimit cone, supporting functional
    available.  Any violation on a validated tight diagram is a bug."""
    violations = []
    for i in sorted(d.objects):
        emb = c.embeddings[i]
        if rank(emb) != emb.cols:
            violations.append(f"embedding of {i!r} is not injective")
            continue
        img = _object_image_cone(d, c, i)
        if img not in faces(c.cone):
            violations.append(f"image of {i!r} is not a face of the colimit cone")
            continue
        supporting_functional(c.cone, img)
    return tuple(violations)


def _object_image_cone(d: TightDiagram, c: ColimitResult, i: str) -> Cone:
    obj = d.objects[i]
    basis = gp(obj)
    if not obj.cone.rays:
        return cone_from_rays(c.colimit_rank, [])
    coords = lattice_coordinates(basis, IntMatrix.from_cols(obj.cone.rays, rows=basis.rows))
    return cone_from_rays(
        c.colimit_rank, [c.embeddings[i].apply(coords.col(j)) for j in range(coords.cols)]
    )


def induced_subdiagram(sub: Subdiagram) -> TightDiagram:
    """Members with every parent composite between distinct members."""
    comp, _, cyclic = _composites(sub.parent)
    if cyclic:
        raise NotTightSubdiagram("parent has a morphism cycle")
    members = sorted(sub.member_ids)
    edges = []
    for x in members:
        for y in members:
            if x != y and y in comp[x]:
                edges.append(DiagramMorphism(x, y, comp[x][y]))
    return TightDiagram({i: sub.parent.objects[i] for i in members}, edges)


def is_join_closed(sub: Subdiagram):
    """Whether the member set is closed under joins taken inside any parent
    object above a member pair.

    Returns (True, None) or (False, (a, b, join_object_id)).  Raises
    NotTightSubdiagram when members do not form a tight diagram on their own.
    """
    if validate_tight(induced_subdiagram(sub)):
        raise NotTightSubdiagram("members do not form a tight diagram")
    d = sub.parent
    comp, _, _ = _composites(d)
    members = sorted(sub.member_ids)
    images = {}
    for x in d.objects:
        for p in comp[x]:
            images[x, p] = _image_in(d, comp, x, p)
    for i, a in enumerate(members):
        for b in members[i:]:
            parents = [p for p in sorted(d.objects) if p in comp[a] and p in comp[b]]
            for p in parents:
                joint = set(images[a, p].rays) | set(images[b, p].rays)
                candidates = [
                    f for f in faces(d.objects[p].cone) if joint <= set(f.rays)
                ]
                join_face = min(candidates, key=lambda f: (len(f.rays), f.rays))
                realizers = sorted(
                    x for x in d.objects if p in comp[x] and images[x, p] == join_face
                )
                if not any(x in sub.member_ids for x in realizers):
                    return False, (a, b, realizers[0])
    return True, None


def extend_diagram_functional(
    d: TightDiagram,
    sub: Subdiagram,
    chi: Mapping[str, Sequence[int]],
    mode: str = "nonneg_positive_away",
) -> Functional:
    """Extend a compatible family of functionals off a join-closed subdiagram
    to a single functional on the colimit lattice.

    Follows the inductive proof: repeatedly take the maximal outside object b
    (lexicographically smallest id on ties); when nothing processed sits
    above b, extend from the maximum processed face D_m of b (existence and
    uniqueness asserted); otherwise b's value is forced by restriction.  The
    down-set of b then fills in by restriction.  In positive mode the result
    is >= 0 on every ray of every object and >= 1 on every ray whose colimit
    image lies outside the members' images.

    chi maps member id to coefficients in that member's ambient dual.
    Raises NotJoinClosed, IncompatibleFamily, NegativeOnSub.
    """
    if mode not in ("arbitrary", "nonneg_positive_away"):
        raise ValueError(f"unknown mode {mode!r}")
    if sub.parent is not d:
        raise ValueError("subdiagram does not belong to this diagram")
    _require_tight(d)
    closed, witness = is_join_closed(sub)
    if not closed:
        raise NotJoinClosed(witness)

    members = sorted(sub.member_ids)
    if set(chi) != set(members):
        raise IncompatibleFamily("family keys do not match the member ids")
    values = {}
    for i in members:
        coeffs = tuple(int(x) for x in chi[i])
        if len(coeffs) != d.objects[i].lattice_rank:
            raise IncompatibleFamily(f"coefficients for {i!r} have the wrong length")
        values[i] = coeffs

    comp, _, _ = _composites(d)
    below, _ = _poset(d, comp)

    def restrict(vals: Sequence[int], src: str, tgt: str) -> tuple[int, ...]:
        # pull a functional on tgt back along the composite src -> tgt
        m = comp[src][tgt]
        return tuple(
            sum(vals[r] * m.entries[r][c] for r in range(m.rows)) for c in range(m.cols)
        )

    for x in members:
        for y in members:
            if x != y and y in comp[x]:
                pulled = restrict(values[y], x, y)
                bx = gp(d.objects[x])
                for j in range(bx.cols):
                    col = bx.col(j)
                    if sum(a * b for a, b in zip(pulled, col)) != sum(
                        a * b for a, b in zip(values[x], col)
                    ):
                        raise IncompatibleFamily(
                            f"functionals on {x!r} and {y!r} disagree along {x!r}->{y!r}"
                        )

    if mode == "nonneg_positive_away":
        for i in members:
            for r in d.objects[i].cone.rays:
                if sum(a * b for a, b in zip(values[i], r)) < 0:
                    raise NegativeOnSub(f"negative on ray {r} of member {i!r}")

    current = set(members)
    while len(current) < len(d.objects):
        outside = [i for i in sorted(d.objects) if i not in current]
        b = min(
            i for i in outside
            if not any(j != i and j in outside for j in comp[i])
        )
        uppers = sorted(j for j in comp[b] if j != b and j in current)
        if uppers:
            values[b] = restrict(values[uppers[0]], b, uppers[0])
        else:
            processed_faces = [x for x in current if b in comp[x]]
            if processed_faces:
                maximal = [
                    x for x in processed_faces
                    if not any(other != x and other in comp[x] for other in processed_faces)
                ]
                assert len(maximal) == 1, f"no unique maximum processed face of {b!r}"
                dm = maximal[0]
                morphism = FaceMorphism(d.objects[dm], d.objects[b], comp[dm][b])
                psi = MonoidFunctional(d.objects[dm], Functional(values[dm]))
            else:
                origin = ToricMonoid(0, cone_from_rays(0, []))
                morphism = FaceMorphism(
                    origin, d.objects[b], IntMatrix.zeros(d.objects[b].lattice_rank, 0)
                )
                psi = MonoidFunctional(origin, Functional(()))
            try:
                extended = extend_functional(d.objects[b], morphism, psi, mode)
            except NegativeOnFace as exc:  # family was checked, so only forced values trip this
                raise IncompatibleFamily(str(exc)) from exc
            values[b] = extended.coefficients.coefficients
        current.add(b)
        for x in sorted(below[b]):
            if x not in current:
                values[x] = restrict(values[b], x, b)
                current.add(x)

    colim = colimit(d)
    _, maximal_ids = _poset(d, comp)
    stacked = None
    target_values: list[int] = []
    for m in maximal_ids:
        emb = colim.embeddings[m]
        stacked = emb if stacked is None else stacked.hstack(emb)
        basis = gp(d.objects[m])
        for j in range(basis.cols):
            col = basis.col(j)
            target_values.append(sum(a * b for a, b in zip(values[m], col)))
    if stacked is None:
        return Functional(())
    try:
        phi = Functional(solve_left(stacked, tuple(target_values)))
    except NotInLattice as exc:
        raise IncompatibleFamily("family does not descend to the colimit") from exc

    basis_cache = {i: gp(d.objects[i]) for i in d.objects}
    for i in members:
        emb = colim.embeddings[i]
        for j in range(emb.cols):
            want = sum(a * b for a, b in zip(values[i], basis_cache[i].col(j)))
            if phi(emb.col(j)) != want:
                raise IncompatibleFamily("family does not descend to the colimit")

    if mode == "nonneg_positive_away":
        member_rays = set()
        for i in members:
            img = _object_image_cone(d, colim, i)
            member_rays.update(img.rays)
        for i in sorted(d.objects):
            img = _object_image_cone(d, colim, i)
            for r in img.rays:
                val = phi(r)
                assert val >= 0, f"negative value on a ray of {i!r}"
                if r not in member_rays:
                    assert val >= 1, f"non-positive value away from the subdiagram at {r}"
    return phi


def face_diagram(c: Cone) -> TightDiagram:
    """The diagram of all faces of a cone, every object in the ambient
    lattice, edges along face covers with identity matrices.

    Ids: "f" + joined ray indices into the sorted ray list of c ("f" alone
    is the zero face).  This diagram is tight; its colimit recovers c in
    gp(c) coordinates.
    """
    n = c.ambient_rank
    ray_index = {r: k for k, r in enumerate(c.rays)}

    def name(f: Cone) -> str:
        return "f" + "".join(f"_{ray_index[r]}" for r in f.rays)

    all_faces = faces(c)
    objects = {name(f): ToricMonoid(n, f) for f in all_faces}
    # faces of one cone are ordered by their extreme-ray sets, so cover
    # edges come straight from strict set inclusion with nothing between
    ray_sets = {name(f): frozenset(f.rays) for f in all_faces}
    edges = []
    for fn, fr in ray_sets.items():
        for gn, gr in ray_sets.items():
            if not fr < gr:
                continue
            if any(fr < hr < gr for hr in ray_sets.values()):
                continue
            edges.append(DiagramMorphism(fn, gn, IntMatrix.identity(n)))
    return TightDiagram(objects, edges)


def coproduct(a: TightDiagram, b: TightDiagram) -> TightDiagram:
    """Disjoint union glued along a fresh rank-0 origin object.

    Component ids are prefixed "a:"/"b:"; each component's own zero objects
    are dropped in favor of the shared origin "0", which maps into every
    remaining object through empty matrices.
    """
    objects = {"0": ToricMonoid(0, cone_from_rays(0, []))}
    edges = []
    for prefix, d in (("a:", a), ("b:", b)):
        zero_ids = {i for i, o in d.objects.items() if o.cone.is_zero()}
        for i, obj in d.objects.items():
            if i in zero_ids:
                continue
            objects[prefix + i] = obj
        for e in d.morphisms:
            if e.source_id in zero_ids or e.target_id in zero_ids:
                continue
            edges.append(DiagramMorphism(prefix + e.source_id, prefix + e.target_id, e.matrix))
        for i, obj in d.objects.items():
            if i not in zero_ids:
                edges.append(
                    DiagramMorphism("0", prefix + i, IntMatrix.zeros(obj.lattice_rank, 0))
                )
    return TightDiagram(objects, edges)
