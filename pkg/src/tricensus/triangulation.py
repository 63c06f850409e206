"""Core data model for generalized triangulations.

A triangulation is a set of ``n`` tetrahedra whose triangular faces may
be identified in pairs by affine bijections.  Face ``f`` of a tetrahedron
is the face opposite vertex ``f``; a gluing stores a full permutation of
``{0,1,2,3}`` carrying the source face onto the target face, so that the
induced vertex, edge and face correspondences all compose cleanly.

The skeleton machinery tracks *directed* edge slots (12 per tetrahedron)
so that an edge identified with itself in reverse is detected, and so
that cones and cyclically identified faces can be read off directly.
Vertex links are assembled from the 4n corner triangles; their Euler
characteristic, orientability and boundary circle count decide whether a
gluing can still become a closed 3-manifold.
"""

from __future__ import annotations

import string
from dataclasses import dataclass, field
from itertools import permutations


class TriangulationError(ValueError):
    """Malformed gluing data or a violated operation precondition."""


# ---------------------------------------------------------------------------
# Permutations of {0,1,2,3}


class Perm4:
    """An interned permutation of ``{0,1,2,3}``.

    Instances are shared, so identity comparison is equality.  ``sign``
    is +1 for even and -1 for odd permutations.
    """

    __slots__ = ("images", "sign", "_inverse_images")
    _pool: dict = {}

    def __new__(cls, images):
        images = tuple(images)
        cached = cls._pool.get(images)
        if cached is not None:
            return cached
        if sorted(images) != [0, 1, 2, 3]:
            raise TriangulationError(f"not a permutation of 0..3: {images}")
        self = super().__new__(cls)
        self.images = images
        inv = [0] * 4
        for i, x in enumerate(images):
            inv[x] = i
        self._inverse_images = tuple(inv)
        parity = sum(1 for i in range(4) for j in range(i + 1, 4)
                     if images[i] > images[j])
        self.sign = -1 if parity % 2 else 1
        cls._pool[images] = self
        return self

    def __call__(self, x: int) -> int:
        return self.images[x]

    def compose(self, other: "Perm4") -> "Perm4":
        """Permutation applying ``other`` first, then ``self``."""
        o = other.images
        s = self.images
        return Perm4((s[o[0]], s[o[1]], s[o[2]], s[o[3]]))

    def inverse(self) -> "Perm4":
        return Perm4(self._inverse_images)

    def __repr__(self):
        return "Perm4(%d%d%d%d)" % self.images

    def __reduce__(self):
        return (Perm4, (self.images,))


PERM4_ALL = tuple(Perm4(p) for p in permutations(range(4)))
PERM4_IDENTITY = Perm4((0, 1, 2, 3))


def perms_mapping_face(src_face: int, dst_face: int):
    """The six permutations carrying face ``src_face`` onto ``dst_face``."""
    return tuple(p for p in PERM4_ALL if p(src_face) == dst_face)


# ---------------------------------------------------------------------------
# Triangulations


class Triangulation:
    """``size`` tetrahedra with per-face gluing slots.

    Slot ``(t, f)`` is either ``None`` or ``(t2, p)`` with ``p`` a Perm4
    satisfying ``p(f) = f2``, the matching face of ``t2``.  Reciprocity is
    maintained by every mutator.  Public mutators return new values; the
    underscore variants mutate in place and are meant for builders that
    own their instance exclusively.
    """

    __slots__ = ("_slots",)

    def __init__(self, size: int):
        if size < 1:
            raise TriangulationError("need at least one tetrahedron")
        self._slots = [[None] * 4 for _ in range(size)]

    @classmethod
    def from_gluings(cls, size: int, gluings) -> "Triangulation":
        """Build from ``(tet, face, target_tet, perm_images)`` entries."""
        t = cls(size)
        for tet, face, tet2, images in gluings:
            t._glue_inplace(tet, face, tet2, Perm4(images))
        return t

    @property
    def size(self) -> int:
        return len(self._slots)

    def glued(self, tet: int, face: int):
        return self._slots[tet][face]

    def is_fully_glued(self) -> bool:
        return all(s is not None for row in self._slots for s in row)

    def gluings(self):
        """Yield every glued face pair once as ``(tet, face, tet2, perm)``
        with ``(tet, face) <= (tet2, perm(face))``."""
        for tet in range(self.size):
            for face in range(4):
                entry = self._slots[tet][face]
                if entry is None:
                    continue
                tet2, p = entry
                if (tet, face) <= (tet2, p(face)):
                    yield tet, face, tet2, p

    def copy(self) -> "Triangulation":
        out = Triangulation(self.size)
        out._slots = [list(row) for row in self._slots]
        return out

    def _glue_inplace(self, tet, face, tet2, perm: Perm4) -> None:
        if not (0 <= tet < self.size and 0 <= tet2 < self.size):
            raise TriangulationError("tetrahedron index out of range")
        if not (0 <= face < 4):
            raise TriangulationError("face index out of range")
        face2 = perm(face)
        if (tet, face) == (tet2, face2):
            raise TriangulationError("cannot glue a face slot to itself")
        if self._slots[tet][face] is not None:
            raise TriangulationError(f"slot ({tet},{face}) already glued")
        if self._slots[tet2][face2] is not None:
            raise TriangulationError(f"slot ({tet2},{face2}) already glued")
        self._slots[tet][face] = (tet2, perm)
        self._slots[tet2][face2] = (tet, perm.inverse())

    def _unglue_inplace(self, tet, face) -> None:
        entry = self._slots[tet][face]
        if entry is None:
            raise TriangulationError(f"slot ({tet},{face}) is not glued")
        tet2, p = entry
        self._slots[tet][face] = None
        self._slots[tet2][p(face)] = None

    def glue(self, tet, face, tet2, perm: Perm4) -> "Triangulation":
        out = self.copy()
        out._glue_inplace(tet, face, tet2, perm)
        return out

    def unglue(self, tet, face) -> "Triangulation":
        out = self.copy()
        out._unglue_inplace(tet, face)
        return out

    def __eq__(self, other):
        return (isinstance(other, Triangulation)
                and self._slots == other._slots)

    def __hash__(self):
        return hash(tuple(tuple(row) for row in self._slots))

    def __repr__(self):
        return f"Triangulation(size={self.size})"


# ---------------------------------------------------------------------------
# Skeleton: edge, face and vertex orbits

# Ordered vertex pairs (a, b), a != b, indexed 0..11 per tetrahedron.
_DIR_PAIRS = [(a, b) for a in range(4) for b in range(4) if a != b]
_DIR_INDEX = {pair: i for i, pair in enumerate(_DIR_PAIRS)}
# Unordered pairs indexed 0..5 per tetrahedron.
_UND_PAIRS = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]


class _UnionFind:
    __slots__ = ("parent",)

    def __init__(self, n):
        self.parent = list(range(n))

    def find(self, x):
        parent = self.parent
        root = x
        while parent[root] != root:
            root = parent[root]
        while parent[x] != root:
            parent[x], x = root, parent[x]
        return root

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[max(ra, rb)] = min(ra, rb)


@dataclass(frozen=True)
class EdgeOrbit:
    """An edge of the triangulation: an orbit of tetrahedron edge slots.

    ``slots`` lists the undirected slots ``(tet, a, b)`` with ``a < b``;
    ``degree`` is their count.  ``valid`` is False when some directed slot
    is identified with its own reverse.  ``closed`` means every face
    flanking every slot is glued, so the degree can no longer grow.
    ``boundary_flanks`` lists the unglued flanks as ``(tet, face, a, b)``.
    """

    index: int
    slots: tuple
    degree: int
    tets: frozenset
    valid: bool
    closed: bool
    boundary_flanks: tuple


@dataclass(frozen=True)
class FaceOrbit:
    index: int
    slots: tuple  # one or two (tet, face) pairs

    @property
    def internal(self) -> bool:
        return len(self.slots) == 2


@dataclass(frozen=True)
class VertexOrbit:
    index: int
    corners: tuple  # (tet, vertex) pairs


@dataclass
class Skeleton:
    """Orbit decomposition of the slots of a triangulation."""

    size: int
    edges: list
    faces: list
    vertices: list
    valid: bool
    _edge_index: dict = field(repr=False, default_factory=dict)
    _dir_root: list = field(repr=False, default_factory=list)
    _face_index: dict = field(repr=False, default_factory=dict)
    _vertex_index: dict = field(repr=False, default_factory=dict)

    @property
    def vertex_count(self):
        return len(self.vertices)

    @property
    def edge_count(self):
        return len(self.edges)

    @property
    def face_count(self):
        return len(self.faces)

    def edge_orbit_of(self, tet, a, b) -> EdgeOrbit:
        if a > b:
            a, b = b, a
        return self.edges[self._edge_index[(tet, a, b)]]

    def dir_class(self, tet, a, b) -> int:
        """Identifier of the directed slot class of edge ``a -> b``."""
        return self._dir_root[tet * 12 + _DIR_INDEX[(a, b)]]

    def face_orbit_of(self, tet, face) -> FaceOrbit:
        return self.faces[self._face_index[(tet, face)]]

    def vertex_orbit_of(self, tet, vertex) -> VertexOrbit:
        return self.vertices[self._vertex_index[(tet, vertex)]]


def compute_skeleton(t: Triangulation) -> Skeleton:
    n = t.size
    dir_uf = _UnionFind(12 * n)
    vert_uf = _UnionFind(4 * n)

    for tet, face, tet2, p in t.gluings():
        images = p.images
        for a, b in _DIR_PAIRS:
            if a != face and b != face:
                dir_uf.union(tet * 12 + _DIR_INDEX[(a, b)],
                             tet2 * 12 + _DIR_INDEX[(images[a], images[b])])
        for v in range(4):
            if v != face:
                vert_uf.union(tet * 4 + v, tet2 * 4 + images[v])

    dir_root = [dir_uf.find(i) for i in range(12 * n)]

    # Undirected edge orbits, keyed by the pair of directed class roots.
    orbit_slots: dict = {}
    for tet in range(n):
        for a, b in _UND_PAIRS:
            r1 = dir_root[tet * 12 + _DIR_INDEX[(a, b)]]
            r2 = dir_root[tet * 12 + _DIR_INDEX[(b, a)]]
            key = (r1, r2) if r1 <= r2 else (r2, r1)
            orbit_slots.setdefault(key, []).append((tet, a, b))

    edges = []
    edge_index = {}
    for key in sorted(orbit_slots):
        slots = orbit_slots[key]
        flanks = []
        for tet, a, b in slots:
            for face in range(4):
                if face != a and face != b and t.glued(tet, face) is None:
                    flanks.append((tet, face, a, b))
        orbit = EdgeOrbit(
            index=len(edges),
            slots=tuple(slots),
            degree=len(slots),
            tets=frozenset(s[0] for s in slots),
            valid=key[0] != key[1],
            closed=not flanks,
            boundary_flanks=tuple(flanks),
        )
        for s in slots:
            edge_index[s] = orbit.index
        edges.append(orbit)

    # Face orbits: glued pairs and unglued singletons.
    faces = []
    face_index = {}
    for tet in range(n):
        for face in range(4):
            if (tet, face) in face_index:
                continue
            entry = t.glued(tet, face)
            if entry is None:
                slots = ((tet, face),)
            else:
                tet2, p = entry
                slots = ((tet, face), (tet2, p(face)))
            orbit = FaceOrbit(index=len(faces), slots=slots)
            for s in slots:
                face_index[s] = orbit.index
            faces.append(orbit)

    # Vertex orbits.
    vert_groups: dict = {}
    for tet in range(n):
        for v in range(4):
            vert_groups.setdefault(vert_uf.find(tet * 4 + v), []).append((tet, v))
    vertices = []
    vertex_index = {}
    for key in sorted(vert_groups):
        corners = tuple(vert_groups[key])
        orbit = VertexOrbit(index=len(vertices), corners=corners)
        for c in corners:
            vertex_index[c] = orbit.index
        vertices.append(orbit)

    return Skeleton(size=n, edges=edges, faces=faces, vertices=vertices,
                    valid=all(e.valid for e in edges),
                    _edge_index=edge_index, _dir_root=dir_root,
                    _face_index=face_index, _vertex_index=vertex_index)


def euler_characteristic(t: Triangulation, skel: Skeleton | None = None) -> int:
    """V - E + F - n of the quotient cell complex (partial states allowed)."""
    if skel is None:
        skel = compute_skeleton(t)
    return skel.vertex_count - skel.edge_count + skel.face_count - t.size


# ---------------------------------------------------------------------------
# Vertex links


@dataclass(frozen=True)
class LinkSurface:
    """Surface piece formed by the corner triangles around a vertex orbit."""

    vertex_index: int
    euler: int
    boundary_circles: int
    orientable: bool
    triangle_count: int


def _corner_side_direction(v, f):
    """Positive traversal of side ``(v, f)`` within corner ``v``.

    The reference orientation of corner ``v`` is the ascending cyclic
    order of its three link vertices (the other three tetrahedron
    vertices); the side omitting ``f`` runs between the remaining two.
    """
    links = [w for w in range(4) if w != v]
    x, y = [w for w in links if w != f]
    if (x, y) == (links[0], links[2]):
        return (y, x)
    return (x, y)


def vertex_links(t: Triangulation, skel: Skeleton | None = None) -> list[LinkSurface]:
    """One LinkSurface per vertex orbit, glued from corner triangles."""
    if skel is None:
        skel = compute_skeleton(t)
    if not skel.valid:
        raise TriangulationError(
            "vertex links require a valid skeleton (no reversed edges)")
    n = t.size

    # Link edges are the corner triangle sides (tet, v, f), f != v; link
    # vertices are the directed edge slot classes (tail = corner vertex).
    def side_id(tet, v, f):
        return tet * 16 + v * 4 + f

    side_uf = _UnionFind(16 * n)
    for tet, face, tet2, p in t.gluings():
        for v in range(4):
            if v != face:
                side_uf.union(side_id(tet, v, face),
                              side_id(tet2, p(v), p(face)))

    # Orientation consistency: parity relation between corner triangles.
    parity_parent = list(range(4 * n))
    parity_offset = [0] * (4 * n)  # sign relative to parent

    def pfind(x):
        if parity_parent[x] == x:
            return x, 0
        root, off = pfind(parity_parent[x])
        parity_parent[x] = root
        parity_offset[x] ^= off
        return root, parity_offset[x]

    conflict_roots = set()

    def punion(a, b, rel):
        ra, oa = pfind(a)
        rb, ob = pfind(b)
        if ra == rb:
            if oa ^ ob != rel:
                conflict_roots.add(ra)
            return
        parity_parent[rb] = ra
        parity_offset[rb] = oa ^ ob ^ rel

    for tet, face, tet2, p in t.gluings():
        for v in range(4):
            if v == face:
                continue
            v2 = p(v)
            d1 = _corner_side_direction(v, face)
            d2 = _corner_side_direction(v2, p(face))
            # Same sign when the glued side is traversed in opposite
            # directions by the two reference orientations.
            rel = 0 if (p(d1[0]), p(d1[1])) == (d2[1], d2[0]) else 1
            punion(tet * 4 + v, tet2 * 4 + v2, rel)

    merged_conflicts = {pfind(r)[0] for r in conflict_roots}

    results = []
    for orbit in skel.vertices:
        corners = orbit.corners
        tri_count = len(corners)

        link_vertex_classes = set()
        side_classes = set()
        boundary_sides = []
        for tet, v in corners:
            for w in range(4):
                if w == v:
                    continue
                link_vertex_classes.add(skel.dir_class(tet, v, w))
                side_classes.add(side_uf.find(side_id(tet, v, w)))
                if t.glued(tet, w) is None:
                    boundary_sides.append((tet, v, w))

        # Boundary circles: boundary sides chained through shared link
        # vertices; each boundary link vertex meets exactly two of them.
        circles = 0
        if boundary_sides:
            bid = {s: i for i, s in enumerate(boundary_sides)}
            buf = _UnionFind(len(boundary_sides))
            by_vertex: dict = {}
            for s in boundary_sides:
                tet, v, f = s
                for w in range(4):
                    if w != v and w != f:
                        by_vertex.setdefault(
                            skel.dir_class(tet, v, w), []).append(s)
            for group in by_vertex.values():
                for other in group[1:]:
                    buf.union(bid[group[0]], bid[other])
            circles = len({buf.find(i) for i in range(len(boundary_sides))})

        roots = {pfind(tet * 4 + v)[0] for tet, v in corners}
        orientable = not (roots & merged_conflicts)

        euler = len(link_vertex_classes) - len(side_classes) + tri_count
        results.append(LinkSurface(
            vertex_index=orbit.index,
            euler=euler,
            boundary_circles=circles,
            orientable=orientable,
            triangle_count=tri_count,
        ))
    return results


def is_closed_3manifold(t: Triangulation) -> bool:
    """True when every face is glued, no edge reverses onto itself, and
    every vertex link is a 2-sphere."""
    if not t.is_fully_glued():
        return False
    skel = compute_skeleton(t)
    if not skel.valid:
        return False
    return all(link.euler == 2 and link.boundary_circles == 0
               for link in vertex_links(t, skel))


# ---------------------------------------------------------------------------
# Orientability


def orientation_signs(t: Triangulation):
    """Sign assignment with sigma(t) * sigma(t2) = -sign(p) for every
    gluing, or None if no consistent assignment exists.  Works on partial
    states; the lowest tetrahedron of each connected part gets +1."""
    n = t.size
    signs = [0] * n
    for start in range(n):
        if signs[start]:
            continue
        signs[start] = 1
        stack = [start]
        while stack:
            tet = stack.pop()
            for face in range(4):
                entry = t.glued(tet, face)
                if entry is None:
                    continue
                tet2, p = entry
                want = -p.sign * signs[tet]
                if signs[tet2] == 0:
                    signs[tet2] = want
                    stack.append(tet2)
                elif signs[tet2] != want:
                    return None
    return signs


def is_orientable(t: Triangulation) -> bool:
    """Orientability of a closed valid triangulation."""
    if not t.is_fully_glued():
        raise TriangulationError(
            "orientability requires a fully glued triangulation")
    if not compute_skeleton(t).valid:
        raise TriangulationError("orientability requires a valid skeleton")
    return orientation_signs(t) is not None


# ---------------------------------------------------------------------------
# Isomorphism signatures


@dataclass(frozen=True, order=True)
class IsoSignature:
    """Canonical text identifying a triangulation up to combinatorial
    isomorphism (relabeling of tetrahedra and of their vertices)."""

    text: str


_B36 = string.digits + string.ascii_lowercase


def _encode_from(t: Triangulation, start: int, start_perm: Perm4):
    """Deterministic breadth-first relabeling encoding from one start.

    The first gluing into an undiscovered tetrahedron fixes that
    tetrahedron's relabeling so the gluing permutation becomes identity.
    Returns None when the triangulation is disconnected.
    """
    order = [start]
    new_index = {start: 0}
    labels = {start: start_perm}
    blocks = []
    pos = 0
    while pos < len(order):
        tet = order[pos]
        lab = labels[tet]
        inv = lab.inverse()
        entries = []
        for new_face in range(4):
            face = inv(new_face)
            entry = t.glued(tet, face)
            if entry is None:
                entries.append("-")
                continue
            tet2, p = entry
            if tet2 not in new_index:
                new_index[tet2] = len(order)
                labels[tet2] = lab.compose(p.inverse())
                order.append(tet2)
            phat = labels[tet2].compose(p).compose(inv)
            entries.append(_B36[new_index[tet2]] + ":" +
                           "%d%d%d%d" % phat.images)
        blocks.append(";".join(entries))
        pos += 1
    if len(order) != t.size:
        return None
    return "|".join(blocks)


def iso_signature(t: Triangulation) -> IsoSignature:
    """Minimum encoding over all starting tetrahedra and labelings."""
    best = None
    for start in range(t.size):
        for p in PERM4_ALL:
            enc = _encode_from(t, start, p)
            if enc is None:
                raise TriangulationError(
                    "isomorphism signature requires a connected triangulation")
            if best is None or enc < best:
                best = enc
    return IsoSignature(best)


# ---------------------------------------------------------------------------
# Pachner moves


def _resolve_face_slot(face):
    if isinstance(face, FaceOrbit):
        return face.slots[0]
    return tuple(face)


def pachner_23(t: Triangulation, face) -> Triangulation:
    """Replace two distinct tetrahedra sharing a face by three around a
    new internal degree-3 edge.

    ``face`` is a FaceOrbit or a ``(tet, face)`` slot.  The three new
    tetrahedra take the highest indices; the new central edge is edge
    ``(0, 1)`` of each of them.
    """
    tet_x, face_x = _resolve_face_slot(face)
    entry = t.glued(tet_x, face_x)
    if entry is None:
        raise TriangulationError("2-3 move requires an internal face")
    tet_y, q = entry
    if tet_y == tet_x:
        raise TriangulationError("2-3 move requires two distinct tetrahedra")
    face_y = q(face_x)

    alpha = face_x
    beta = face_y
    cs = sorted(x for x in range(4) if x != alpha)
    qcs = [q(c) for c in cs]

    keep = [tet for tet in range(t.size) if tet not in (tet_x, tet_y)]
    new_of = {tet: i for i, tet in enumerate(keep)}
    d_base = len(keep)

    # Vertex maps from the model tetrahedra D_i onto tet_x / tet_y labels:
    # vertex 0 is the apex of tet_x, vertex 1 the apex of tet_y, vertices
    # 2 and 3 the two base vertices D_i keeps.
    to_x = []
    to_y = []
    for i in range(3):
        j, k = [x for x in range(3) if x != i]
        mx = [0] * 4
        mx[0] = alpha
        mx[1] = cs[i]
        mx[2] = cs[j]
        mx[3] = cs[k]
        to_x.append(Perm4(mx))
        my = [0] * 4
        my[0] = qcs[i]
        my[1] = beta
        my[2] = qcs[j]
        my[3] = qcs[k]
        to_y.append(Perm4(my))

    out = Triangulation(d_base + 3)

    def map_old_slot(tet, face):
        """New (tet, face, map of old vertex labels into the new tet)."""
        if tet == tet_x:
            i = cs.index(face)
            return d_base + i, 1, to_x[i].inverse()
        if tet == tet_y:
            i = qcs.index(face)
            return d_base + i, 0, to_y[i].inverse()
        return new_of[tet], face, PERM4_IDENTITY

    for tet, face, tet2, p in t.gluings():
        if (tet, face) in ((tet_x, face_x), (tet_y, face_y)):
            continue
        nt, nf, m1 = map_old_slot(tet, face)
        nt2, _, m2 = map_old_slot(tet2, p(face))
        out._glue_inplace(nt, nf, nt2, m2.compose(p).compose(m1.inverse()))

    out._glue_inplace(d_base + 0, 2, d_base + 1, PERM4_IDENTITY)
    out._glue_inplace(d_base + 0, 3, d_base + 2, Perm4((0, 1, 3, 2)))
    out._glue_inplace(d_base + 1, 3, d_base + 2, PERM4_IDENTITY)
    return out


def pachner_32(t: Triangulation, edge) -> Triangulation:
    """Replace three distinct tetrahedra around a closed degree-3 edge by
    two glued along a face.

    ``edge`` is an EdgeOrbit or a representative slot ``(tet, a, b)``.
    The two new tetrahedra take the highest indices and share face 3.
    """
    skel = compute_skeleton(t)
    if isinstance(edge, EdgeOrbit):
        rep = edge.slots[0]
    else:
        rep = tuple(edge)
    orbit = skel.edge_orbit_of(*rep)
    if not orbit.valid:
        raise TriangulationError("3-2 move requires a valid edge")
    if orbit.degree != 3 or len(orbit.tets) != 3 or not orbit.closed:
        raise TriangulationError(
            "3-2 move requires a closed degree-3 edge in three distinct tetrahedra")

    tet0, a0, b0 = min(orbit.slots)
    rest0 = sorted(x for x in range(4) if x not in (a0, b0))
    images0 = [0] * 4
    images0[a0] = 0
    images0[b0] = 1
    images0[rest0[0]] = 2
    images0[rest0[1]] = 3
    lam0 = Perm4(images0)  # actual tet0 labels -> model D_0 labels

    # Model internal gluings: D0 face2 <-> D1 face2 (identity),
    # D0 face3 <-> D2 face2 via (0,1,3,2), D1 face3 <-> D2 face3 (identity).
    ring = [tet0, None, None]
    lam = [lam0, None, None]
    tet1, g = t.glued(tet0, lam0.inverse()(2))
    ring[1] = tet1
    lam[1] = lam0.compose(g.inverse())
    tet2, h = t.glued(tet0, lam0.inverse()(3))
    ring[2] = tet2
    lam[2] = Perm4((0, 1, 3, 2)).compose(lam0).compose(h.inverse())

    if len(set(ring)) != 3:
        raise TriangulationError("ring tetrahedra are not distinct")
    closing = t.glued(ring[1], lam[1].inverse()(3))
    if (closing is None or closing[0] != ring[2]
            or lam[1].compose(closing[1].inverse()) != lam[2]):
        raise TriangulationError("edge ring does not close consistently")

    keep = [tet for tet in range(t.size) if tet not in ring]
    new_of = {tet: i for i, tet in enumerate(keep)}
    x_idx = len(keep)
    y_idx = x_idx + 1

    # X keeps the base vertices as 0,1,2 with apex 3; same for Y.  The
    # shared face is face 3 of each, glued by the identity.
    to_x = []
    to_y = []
    for i in range(3):
        j, k = [x for x in range(3) if x != i]
        mx = [0] * 4
        mx[0] = 3
        mx[1] = i
        mx[2] = j
        mx[3] = k
        to_x.append(Perm4(mx))  # model D_i -> X labels
        my = [0] * 4
        my[0] = i
        my[1] = 3
        my[2] = j
        my[3] = k
        to_y.append(Perm4(my))

    out = Triangulation(x_idx + 2)

    def map_old_slot(tet, face):
        if tet in ring:
            i = ring.index(tet)
            model_face = lam[i](face)
            if model_face == 1:
                return x_idx, i, to_x[i].compose(lam[i])
            if model_face == 0:
                return y_idx, i, to_y[i].compose(lam[i])
            raise TriangulationError("internal ring face escaped")
        return new_of[tet], face, PERM4_IDENTITY

    internal = set()
    for i in range(3):
        internal.add((ring[i], lam[i].inverse()(2)))
        internal.add((ring[i], lam[i].inverse()(3)))
    for tet, face, tet2, p in t.gluings():
        if (tet, face) in internal or (tet2, p(face)) in internal:
            continue
        nt, nf, m1 = map_old_slot(tet, face)
        nt2, _, m2 = map_old_slot(tet2, p(face))
        out._glue_inplace(nt, nf, nt2, m2.compose(p).compose(m1.inverse()))

    out._glue_inplace(x_idx, 3, y_idx, PERM4_IDENTITY)
    return out


# ---------------------------------------------------------------------------
# Text format


def serialize_tri(t: Triangulation) -> str:
    """Write the ``.tri`` text format."""
    lines = [f"tetrahedra: {t.size}"]
    for tet in range(t.size):
        entries = []
        for face in range(4):
            entry = t.glued(tet, face)
            if entry is None:
                entries.append("-")
            else:
                tet2, p = entry
                entries.append("%d:%d%d%d%d" % ((tet2,) + p.images))
        lines.append(f"{tet}: " + " ".join(entries))
    return "\n".join(lines) + "\n"


def parse_tri(text: str) -> Triangulation:
    """Parse the ``.tri`` text format, enforcing reciprocity."""
    lines = []
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if line:
            lines.append(line)
    if not lines:
        raise TriangulationError("empty triangulation file")
    head = lines[0].split()
    if len(head) != 2 or head[0] != "tetrahedra:":
        raise TriangulationError(f"bad header line: {lines[0]!r}")
    try:
        n = int(head[1])
    except ValueError:
        raise TriangulationError(f"bad tetrahedron count: {head[1]!r}") from None
    if len(lines) != n + 1:
        raise TriangulationError(f"expected {n} tetrahedron lines")

    slots = {}
    for line in lines[1:]:
        left, _, right = line.partition(":")
        try:
            tet = int(left)
        except ValueError:
            raise TriangulationError(f"bad tetrahedron line: {line!r}") from None
        if not 0 <= tet < n:
            raise TriangulationError(f"tetrahedron index out of range: {tet}")
        parts = right.split()
        if len(parts) != 4:
            raise TriangulationError(f"expected 4 gluing entries: {line!r}")
        for face, part in enumerate(parts):
            if part == "-":
                continue
            target, sep, digits = part.partition(":")
            if not sep or len(digits) != 4:
                raise TriangulationError(f"bad gluing entry: {part!r}")
            try:
                tet2 = int(target)
                images = tuple(int(c) for c in digits)
            except ValueError:
                raise TriangulationError(f"bad gluing entry: {part!r}") from None
            if not 0 <= tet2 < n:
                raise TriangulationError(f"target out of range: {part!r}")
            slots[(tet, face)] = (tet2, Perm4(images))

    t = Triangulation(n)
    for (tet, face), (tet2, p) in slots.items():
        back = slots.get((tet2, p(face)))
        if back is None or back[0] != tet or back[1] is not p.inverse():
            raise TriangulationError(
                f"non-reciprocal gluing at tetrahedron {tet}, face {face}")
        if (tet, face) <= (tet2, p(face)):
            t._glue_inplace(tet, face, tet2, p)
    return t


# ---------------------------------------------------------------------------
# Built-in triangulations
#
# The gluing tables are frozen; the validation assertions (closed,
# orientable, first homology, face pairing graph shape) live in the test
# suite.

_BUILTIN_TABLES = {
    # One tetrahedron, both face pairs snapped shut over an edge.
    "S3_1": (1, [(0, 0, 0, (1, 0, 2, 3)),
                 (0, 2, 0, (0, 1, 3, 2))]),
    # Two tetrahedra joined along two faces, remaining boundary closed
    # with a half-turn twist.
    "RP3_2": (2, [(0, 2, 1, (0, 1, 2, 3)),
                  (0, 3, 1, (0, 1, 2, 3)),
                  (0, 0, 1, (1, 0, 3, 2)),
                  (0, 1, 1, (1, 0, 3, 2))]),
    # Triangular pillow (two tetrahedra joined along three faces) closed
    # with a one-third turn twist.
    "L31_2": (2, [(0, 1, 1, (0, 1, 2, 3)),
                  (0, 2, 1, (0, 1, 2, 3)),
                  (0, 3, 1, (0, 1, 2, 3)),
                  (0, 0, 1, (0, 2, 3, 1))]),
    # Two tetrahedra, one self-gluing each plus a double edge between.
    "S2xS1_2": (2, [(0, 0, 0, (1, 2, 3, 0)),
                    (1, 0, 1, (1, 2, 3, 0)),
                    (0, 2, 1, (0, 1, 2, 3)),
                    (0, 3, 1, (0, 1, 2, 3))]),
}

BUILTIN_NAMES = tuple(_BUILTIN_TABLES)


def builtin(name: str) -> Triangulation:
    """A frozen small closed triangulation: ``S3_1``, ``RP3_2``, ``L31_2``
    or ``S2xS1_2``."""
    try:
        size, gluings = _BUILTIN_TABLES[name]
    except KeyError:
        raise TriangulationError(
            f"unknown builtin {name!r}; choose from {sorted(_BUILTIN_TABLES)}"
        ) from None
    return Triangulation.from_gluings(size, gluings)
