"""Standard layered solid tori built by repeated layering.

A layered solid torus starts from a single tetrahedron with two of its
faces identified by a twisted self-gluing, and grows by layering: a new
tetrahedron is glued, without twists, across the two boundary faces
flanking a chosen boundary edge.  Every stage has exactly two boundary
faces, three boundary edges and one vertex; the face pairing graph is a
one-ended chain.

There are two base gluings (derived operationally: the self-gluings of
one face pair that create no degree-1 edge, reverse no edge, and admit a
consistent orientation) and, at each later stage, two admissible
boundary edges to layer on; the third would close an edge at degree 2
and is excluded.  A torus of ``t`` tetrahedra therefore has exactly
``2^t`` construction sequences.
"""

from __future__ import annotations

from dataclasses import dataclass

from .filters import check_edges
from .triangulation import (
    EdgeOrbit,
    Perm4,
    Triangulation,
    TriangulationError,
    compute_skeleton,
    orientation_signs,
    perms_mapping_face,
)

MAX_LST_TETRAHEDRA = 12


@dataclass(frozen=True)
class LstDescriptor:
    """Construction sequence of a standard layered solid torus.

    ``boundary`` holds the two unglued face slots, ``boundary_edges`` one
    representative slot ``(tet, a, b)`` per boundary edge orbit.
    """

    tet_count: int
    base_choice: int
    layer_choices: tuple
    boundary: tuple
    boundary_edges: tuple

    @property
    def choice_string(self) -> str:
        return str(self.base_choice) + "".join(map(str, self.layer_choices))


_BASE_CACHE = None


def base_self_gluings() -> tuple:
    """The two admissible self-gluings of faces 3 and 0 of one
    tetrahedron, derived by brute force: no degree-1 edge, no reversed
    edge, orientation consistent."""
    global _BASE_CACHE
    if _BASE_CACHE is None:
        survivors = []
        for p in perms_mapping_face(3, 0):
            t = Triangulation(1)
            t._glue_inplace(0, 3, 0, p)
            skel = compute_skeleton(t)
            if not skel.valid:
                continue
            if check_edges(t, 3, skel):
                continue
            if orientation_signs(t) is None:
                continue
            survivors.append(p)
        if len(survivors) != 2:
            raise AssertionError(
                f"expected exactly two base self-gluings, found {len(survivors)}")
        _BASE_CACHE = tuple(survivors)
    return _BASE_CACHE


def lst_base(choice: int):
    """One-tetrahedron layered solid torus for base choice 0 or 1."""
    if choice not in (0, 1):
        raise TriangulationError(f"base choice must be 0 or 1, got {choice}")
    p = base_self_gluings()[choice]
    t = Triangulation(1)
    t._glue_inplace(0, 3, 0, p)
    desc = _describe(t, 1, choice, ())
    return desc, t


def boundary_edge_orbits(t: Triangulation, skel=None) -> list:
    """Edge orbits with exactly two unglued flanking faces, in slot order."""
    if skel is None:
        skel = compute_skeleton(t)
    return [orbit for orbit in skel.edges if len(orbit.boundary_flanks) == 2]


def layer_on(t: Triangulation, edge) -> Triangulation:
    """Glue a fresh tetrahedron across the two boundary faces flanking
    ``edge`` (an EdgeOrbit or a representative slot), without twists."""
    skel = compute_skeleton(t)
    if isinstance(edge, EdgeOrbit):
        rep = edge.slots[0]
    else:
        rep = tuple(edge)
    orbit = skel.edge_orbit_of(*rep)
    flanks = orbit.boundary_flanks
    if len(flanks) != 2 or flanks[0][:2] == flanks[1][:2]:
        raise TriangulationError(
            "layering requires an edge flanked by two distinct boundary faces")
    (t1, f1, a1, b1), (t2, f2, a2, b2) = flanks

    # Align the two flanks so the new tetrahedron's edge (0,1) lands on
    # matching directions of the orbit; a mismatch would reverse the edge.
    if skel.dir_class(t1, a1, b1) == skel.dir_class(t2, a2, b2):
        c, d = a2, b2
    else:
        c, d = b2, a2
    x1 = next(v for v in range(4) if v not in (f1, a1, b1))
    x2 = next(v for v in range(4) if v not in (f2, c, d))

    n = t.size
    out = Triangulation(n + 1)
    for tet, face, tet2, p in t.gluings():
        out._glue_inplace(tet, face, tet2, p)
    m1 = [0] * 4
    m1[0], m1[1], m1[2], m1[3] = a1, b1, x1, f1
    m2 = [0] * 4
    m2[0], m2[1], m2[3], m2[2] = c, d, x2, f2
    out._glue_inplace(n, 3, t1, Perm4(m1))
    out._glue_inplace(n, 2, t2, Perm4(m2))
    return out


def _describe(t: Triangulation, tet_count, base_choice, layer_choices):
    skel = compute_skeleton(t)
    boundary = tuple(sorted(
        (tet, face) for tet in range(t.size) for face in range(4)
        if t.glued(tet, face) is None))
    edges = tuple(orbit.slots[0] for orbit in boundary_edge_orbits(t, skel))
    return LstDescriptor(tet_count=tet_count, base_choice=base_choice,
                         layer_choices=tuple(layer_choices),
                         boundary=boundary, boundary_edges=edges)


def enumerate_lsts(tet_count: int) -> list:
    """All ``2^t`` construction sequences of standard layered solid tori
    on ``tet_count`` tetrahedra, as ``(LstDescriptor, Triangulation)``
    pairs in choice order."""
    if not 1 <= tet_count <= MAX_LST_TETRAHEDRA:
        raise TriangulationError(
            f"tetrahedron count must be between 1 and {MAX_LST_TETRAHEDRA}, "
            f"got {tet_count}")
    results = []

    def grow(tri, base_choice, layer_choices):
        size = tri.size
        if size == tet_count:
            results.append((_describe(tri, size, base_choice, layer_choices),
                            tri))
            return
        skel = compute_skeleton(tri)
        boundary = boundary_edge_orbits(tri, skel)
        if len(boundary) != 3:
            raise AssertionError("layered solid torus lost its three boundary edges")
        # Layering on a degree-1 boundary edge would close it at degree 2.
        admissible = [o for o in boundary if o.degree >= 2]
        if len(admissible) != 2:
            raise AssertionError("expected exactly two admissible layerings")
        admissible.sort(key=lambda o: o.slots[0])
        for choice, orbit in enumerate(admissible):
            grow(layer_on(tri, orbit), base_choice, layer_choices + (choice,))

    for base_choice in (0, 1):
        _, tri = lst_base(base_choice)
        grow(tri, base_choice, ())
    return results
