"""Pruning predicates on partial triangulations, plus exhaustive oracles.

Each predicate reports a reason a (possibly partial) gluing can never
extend to a closed minimal irreducible triangulation, or can never be a
closed 3-manifold at all:

* ``ReversedEdge``: an edge identified with itself in reverse.
* ``DegreeOne`` / ``DegreeTwo``: a closed edge orbit of degree 1 or 2
  (only meaningful when the final triangulation has >= 3 tetrahedra).
* ``DegreeThreeDistinct``: a closed degree-3 edge orbit meeting three
  distinct tetrahedra, removable by a 3-2 move.
* ``ConeFace``: a face with two edges identified fixing their common
  vertex.
* ``L31Spine``: a face whose three edges are identified cyclically in
  the same direction.
* ``TwoTriangleSphere``: two distinct faces whose three pairwise
  distinct edges are identified to bound a two-triangle sphere.
* ``UncompletableLink``: a vertex whose partial link is non-orientable
  or has positive genus, so it can never close up to a 2-sphere.

The degree checks fire only on closed orbits: an orbit with unglued
flanking faces can still grow, so pruning it early would be unsound.
The three checks that assume at least three tetrahedra are gated by the
``n_total`` argument, the tetrahedron count of the census being run.

The module also carries two exhaustive oracles.  One enumerates every
way of gluing two distinct tetrahedra along two fixed face pairs and
keeps the joint configurations that survive the checks above; the other
walks all 216 ways of gluing two tetrahedra along three face pairs and
confirms that every one of them is rejected, reproducing the case
analysis that justifies discarding triple edges at the graph stage.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from itertools import product

from .triangulation import (
    Perm4,
    PERM4_IDENTITY,
    Skeleton,
    Triangulation,
    compute_skeleton,
    iso_signature,
    orientation_signs,
    perms_mapping_face,
    vertex_links,
)


class PruneTag(enum.Enum):
    ReversedEdge = "ReversedEdge"
    DegreeOne = "DegreeOne"
    DegreeTwo = "DegreeTwo"
    DegreeThreeDistinct = "DegreeThreeDistinct"
    ConeFace = "ConeFace"
    L31Spine = "L31Spine"
    TwoTriangleSphere = "TwoTriangleSphere"
    UncompletableLink = "UncompletableLink"

    def __str__(self):
        return self.value


ALL_TAGS = tuple(PruneTag)


@dataclass(frozen=True)
class PruneReason:
    """Why a partial state was discarded; ``location`` identifies the
    orbit or slots that triggered the rule."""

    tag: PruneTag
    location: tuple


def check_edges(t: Triangulation, n_total: int,
                skel: Skeleton | None = None) -> list[PruneReason]:
    """Reversed edges (any size) and closed low-degree edge orbits
    (censuses of >= 3 tetrahedra only)."""
    if skel is None:
        skel = compute_skeleton(t)
    reasons = []
    for orbit in skel.edges:
        if not orbit.valid:
            reasons.append(PruneReason(PruneTag.ReversedEdge,
                                       (orbit.slots[0],)))
            continue
        if n_total < 3 or not orbit.closed:
            continue
        if orbit.degree == 1:
            reasons.append(PruneReason(PruneTag.DegreeOne, (orbit.slots[0],)))
        elif orbit.degree == 2:
            reasons.append(PruneReason(PruneTag.DegreeTwo, (orbit.slots[0],)))
        elif orbit.degree == 3 and len(orbit.tets) == 3:
            reasons.append(PruneReason(PruneTag.DegreeThreeDistinct,
                                       (orbit.slots[0],)))
    return reasons


def check_cone_and_spine_faces(t: Triangulation, n_total: int,
                               skel: Skeleton | None = None) -> list[PruneReason]:
    """Faces with two edges identified into a cone (fixing the shared
    vertex), and faces whose three edges are identified cyclically."""
    if n_total < 3:
        return []
    if skel is None:
        skel = compute_skeleton(t)
    if not skel.valid:
        return []
    reasons = []
    for orbit in skel.faces:
        tet, face = orbit.slots[0]
        x, y, z = sorted(v for v in range(4) if v != face)
        cone = False
        for apex, p1, p2 in ((x, y, z), (y, x, z), (z, x, y)):
            if skel.dir_class(tet, apex, p1) == skel.dir_class(tet, apex, p2):
                cone = True
                break
        if cone:
            reasons.append(PruneReason(PruneTag.ConeFace, ((tet, face),)))
        if (skel.dir_class(tet, x, y) == skel.dir_class(tet, y, z)
                == skel.dir_class(tet, z, x)):
            reasons.append(PruneReason(PruneTag.L31Spine, ((tet, face),)))
    return reasons


def _face_cycle(skel: Skeleton, tet: int, face: int):
    """Directed boundary of a face slot as directed edge classes."""
    x, y, z = sorted(v for v in range(4) if v != face)
    return (skel.dir_class(tet, x, y),
            skel.dir_class(tet, y, z),
            skel.dir_class(tet, z, x))


def _face_cycle_reversed(skel: Skeleton, tet: int, face: int):
    x, y, z = sorted(v for v in range(4) if v != face)
    return (skel.dir_class(tet, x, z),
            skel.dir_class(tet, z, y),
            skel.dir_class(tet, y, x))


def check_two_triangle_sphere(t: Triangulation, n_total: int,
                              skel: Skeleton | None = None) -> list[PruneReason]:
    """Pairs of distinct faces bounding a two-triangle sphere on three
    pairwise distinct edges."""
    if n_total < 3:
        return []
    if skel is None:
        skel = compute_skeleton(t)
    if not skel.valid:
        return []

    candidates = []
    for orbit in skel.faces:
        tet, face = orbit.slots[0]
        x, y, z = sorted(v for v in range(4) if v != face)
        eids = {skel.edge_orbit_of(tet, x, y).index,
                skel.edge_orbit_of(tet, y, z).index,
                skel.edge_orbit_of(tet, z, x).index}
        if len(eids) != 3:
            continue  # the sphere pattern needs three distinct edges
        candidates.append((orbit, frozenset(eids),
                           _face_cycle(skel, tet, face),
                           _face_cycle_reversed(skel, tet, face)))

    reasons = []
    for i, (f1, e1, cyc1, _) in enumerate(candidates):
        rots = {cyc1, cyc1[1:] + cyc1[:1], cyc1[2:] + cyc1[:2]}
        for f2, e2, cyc2, rcyc2 in candidates[i + 1:]:
            if e1 != e2:
                continue
            if cyc2 in rots or rcyc2 in rots:
                reasons.append(PruneReason(
                    PruneTag.TwoTriangleSphere,
                    (f1.slots[0], f2.slots[0])))
    return reasons


def link_completable_to_sphere(t: Triangulation,
                               skel: Skeleton | None = None) -> list[PruneReason]:
    """Vertices whose link piece can never be completed to a 2-sphere:
    non-orientable, or orientable of positive genus (euler + boundary
    circles below 2)."""
    if skel is None:
        skel = compute_skeleton(t)
    if not skel.valid:
        return []
    reasons = []
    for link in vertex_links(t, skel):
        if not link.orientable or link.euler + link.boundary_circles != 2:
            reasons.append(PruneReason(PruneTag.UncompletableLink,
                                       (link.vertex_index,)))
    return reasons


def all_prune_reasons(t: Triangulation, n_total: int,
                      skel: Skeleton | None = None) -> list[PruneReason]:
    """Every reason from every check, in a fixed order."""
    if skel is None:
        skel = compute_skeleton(t)
    reasons = check_edges(t, n_total, skel)
    reasons += check_cone_and_spine_faces(t, n_total, skel)
    reasons += check_two_triangle_sphere(t, n_total, skel)
    reasons += link_completable_to_sphere(t, skel)
    return reasons


# ---------------------------------------------------------------------------
# Joint configurations of two tetrahedra glued along two faces.
#
# Model: tetrahedra 0 and 1, with face 3 of each identified (permutations
# fixing 3) and face 0 of each identified (permutations fixing 0).

_DOUBLE_EDGE_FACES = (3, 0)


def _double_edge_triangulation(pa: Perm4, pb: Perm4) -> Triangulation:
    t = Triangulation(2)
    t._glue_inplace(0, 3, 1, pa)
    t._glue_inplace(0, 0, 1, pb)
    return t


def allowed_double_edge_configurations() -> tuple:
    """Joint gluings ``(pa, pb)`` of two distinct tetrahedra along two
    fixed face pairs that survive the edge, cone and spine checks when
    part of a larger census.  Cached after the first call."""
    global _DOUBLE_EDGE_CACHE
    if _DOUBLE_EDGE_CACHE is None:
        survivors = []
        for pa in perms_mapping_face(3, 3):
            for pb in perms_mapping_face(0, 0):
                t = _double_edge_triangulation(pa, pb)
                skel = compute_skeleton(t)
                if check_edges(t, 3, skel):
                    continue
                if check_cone_and_spine_faces(t, 3, skel):
                    continue
                survivors.append((pa, pb))
        _DOUBLE_EDGE_CACHE = tuple(survivors)
    return _DOUBLE_EDGE_CACHE


_DOUBLE_EDGE_CACHE = None


def double_edge_symmetry_classes() -> list[dict]:
    """The surviving joint configurations grouped up to relabeling and
    swapping of the two tetrahedra, with an orientability verdict each."""
    groups: dict = {}
    for pa, pb in allowed_double_edge_configurations():
        t = _double_edge_triangulation(pa, pb)
        sig = iso_signature(t).text
        entry = groups.setdefault(sig, {"signature": sig, "members": [],
                                        "orientable": None})
        entry["members"].append((pa, pb))
        entry["orientable"] = orientation_signs(t) is not None
    return [groups[sig] for sig in sorted(groups)]


# ---------------------------------------------------------------------------
# Exhaustive verification of the triple edge case analysis.
#
# Two tetrahedra are glued along three face pairs; both leftover faces
# stay on the boundary.  With the first tetrahedron's vertices read as
# A=0, B=1, C=2, D=3, the glued faces are ABD (face 2), BCD (face 0) and
# CAD (face 1), and each gluing is one of six transformations:
# identity (i), rotation clockwise (k), rotation anticlockwise (a),
# or the reflection fixing the centre vertex (c), the clockwise end
# vertex (l), or the anticlockwise end vertex (r).

MATCHING_SYMBOLS = ("i", "k", "a", "c", "l", "r")


@dataclass(frozen=True)
class MatchingString:
    """Three transformation symbols, one per glued face pair."""

    symbols: tuple

    def __post_init__(self):
        if (len(self.symbols) != 3
                or any(s not in MATCHING_SYMBOLS for s in self.symbols)):
            raise ValueError(f"bad matching string: {self.symbols!r}")

    @property
    def text(self) -> str:
        return "".join(self.symbols)


_MATCHING_PERMS = {
    # face 2 (ABD), permutations fixing 2
    2: {"i": Perm4((0, 1, 2, 3)), "k": Perm4((1, 3, 2, 0)),
        "a": Perm4((3, 0, 2, 1)), "c": Perm4((1, 0, 2, 3)),
        "l": Perm4((3, 1, 2, 0)), "r": Perm4((0, 3, 2, 1))},
    # face 0 (BCD), permutations fixing 0
    0: {"i": Perm4((0, 1, 2, 3)), "k": Perm4((0, 2, 3, 1)),
        "a": Perm4((0, 3, 1, 2)), "c": Perm4((0, 2, 1, 3)),
        "l": Perm4((0, 3, 2, 1)), "r": Perm4((0, 1, 3, 2))},
    # face 1 (CAD), permutations fixing 1
    1: {"i": Perm4((0, 1, 2, 3)), "k": Perm4((3, 1, 0, 2)),
        "a": Perm4((2, 1, 3, 0)), "c": Perm4((2, 1, 0, 3)),
        "l": Perm4((0, 1, 3, 2)), "r": Perm4((3, 1, 2, 0))},
}

_MATCHING_FACE_ORDER = (2, 0, 1)  # ABD, BCD, CAD

# Which symbol may follow which around the three cyclically adjacent
# face pairs, as forced by the allowed double edge configurations.
MATCHING_ADJACENCY = {
    "i": {"k", "a"},
    "k": {"i", "k", "c", "r"},
    "a": {"i", "a", "c", "r"},
    "c": {"k", "a", "l", "r"},
    "l": {"k", "a", "c", "l"},
    "r": {"c", "r"},
}

# The six named survivors and the rejection category each belongs to.
TRIPLE_EDGE_CATEGORIES = {
    "ikk": PruneTag.ConeFace,
    "kcl": PruneTag.ConeFace,
    "kkk": PruneTag.TwoTriangleSphere,
    "kkc": PruneTag.TwoTriangleSphere,
    "cll": PruneTag.UncompletableLink,
    "lll": PruneTag.UncompletableLink,
}

_THEOREM_FLAGS = frozenset({
    PruneTag.ConeFace, PruneTag.TwoTriangleSphere, PruneTag.UncompletableLink,
    PruneTag.ReversedEdge, PruneTag.DegreeOne, PruneTag.DegreeTwo,
})


def matching_string_triangulation(ms: MatchingString) -> Triangulation:
    """The two-tetrahedron assembly a matching string describes."""
    t = Triangulation(2)
    for face, symbol in zip(_MATCHING_FACE_ORDER, ms.symbols):
        t._glue_inplace(0, face, 1, _MATCHING_PERMS[face][symbol])
    return t


def _matching_flags(ms: MatchingString) -> frozenset:
    t = matching_string_triangulation(ms)
    skel = compute_skeleton(t)
    reasons = check_edges(t, 3, skel)
    reasons += check_cone_and_spine_faces(t, 3, skel)
    reasons += check_two_triangle_sphere(t, 3, skel)
    reasons += link_completable_to_sphere(t, skel)
    return frozenset(r.tag for r in reasons)


@dataclass(frozen=True)
class TripleEdgeVerification:
    """Outcome of the exhaustive two-tetrahedra, three-face-pairs sweep."""

    all_flagged: bool
    survivors_ok: bool
    flags: dict
    survivor_classes: tuple
    counterexamples: tuple

    @property
    def ok(self) -> bool:
        return self.all_flagged and self.survivors_ok

    def __bool__(self):
        return self.ok


def verify_triple_edge_theorem() -> TripleEdgeVerification:
    """Check that all 216 two-tetrahedron triple edge assemblies are
    rejected, and that the assemblies surviving the pairwise adjacency
    restrictions fall into exactly the six expected classes."""
    flags = {}
    counterexamples = []
    for symbols in product(MATCHING_SYMBOLS, repeat=3):
        ms = MatchingString(symbols)
        tags = _matching_flags(ms)
        flags[ms.text] = tags
        if not tags & _THEOREM_FLAGS:
            counterexamples.append(ms.text)

    # Adjacency filter around the cyclically adjacent face pairs.
    survivors = []
    for text in flags:
        s1, s2, s3 = text
        if (s2 in MATCHING_ADJACENCY[s1] and s3 in MATCHING_ADJACENCY[s2]
                and s1 in MATCHING_ADJACENCY[s3]):
            survivors.append(text)

    classes: dict = {}
    for text in survivors:
        sig = iso_signature(
            matching_string_triangulation(MatchingString(tuple(text)))).text
        classes.setdefault(sig, []).append(text)
    survivor_classes = tuple(tuple(sorted(members))
                             for _, members in sorted(classes.items()))

    named = set(TRIPLE_EDGE_CATEGORIES)
    survivors_ok = (len(survivor_classes) == len(named)
                    and all(len(named & set(cls)) == 1
                            for cls in survivor_classes)
                    and named <= {m for cls in survivor_classes for m in cls})
    # Each named survivor must carry its category flag.
    for text, tag in TRIPLE_EDGE_CATEGORIES.items():
        if tag not in flags[text]:
            survivors_ok = False

    return TripleEdgeVerification(
        all_flagged=not counterexamples,
        survivors_ok=survivors_ok,
        flags=flags,
        survivor_classes=survivor_classes,
        counterexamples=tuple(counterexamples),
    )
