"""Integer first homology of closed triangulations via Smith normal form.

The quotient cell complex of a closed triangulation has one cell per
vertex, edge, face and tetrahedron orbit.  With a fixed orientation per
orbit the two boundary matrices are exact integer matrices; the first
homology group is read off from their Smith normal forms.  All
arithmetic uses Python integers, so there is no overflow to guard.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd

from .triangulation import (
    Skeleton,
    Triangulation,
    TriangulationError,
    compute_skeleton,
)


@dataclass
class IntMatrix:
    """Dense integer matrix with exact arithmetic."""

    rows: int
    cols: int
    data: list

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "IntMatrix":
        return cls(rows, cols, [[0] * cols for _ in range(rows)])

    @classmethod
    def from_rows(cls, rows) -> "IntMatrix":
        data = [list(r) for r in rows]
        if not data:
            return cls(0, 0, [])
        width = len(data[0])
        if any(len(r) != width for r in data):
            raise ValueError("ragged matrix rows")
        return cls(len(data), width, data)

    def copy(self) -> "IntMatrix":
        return IntMatrix(self.rows, self.cols, [list(r) for r in self.data])


@dataclass(frozen=True)
class H1Result:
    """First homology: free rank plus invariant factors greater than 1,
    each dividing the next."""

    rank: int
    torsion: tuple

    def __str__(self):
        parts = ["Z"] * self.rank + [f"Z/{d}" for d in self.torsion]
        return " + ".join(parts) if parts else "0"


def smith_normal_form(m: IntMatrix) -> list:
    """Invariant factors d1 | d2 | ... | dr of ``m`` (all positive, one
    per unit of rank)."""
    a = [list(row) for row in m.data]
    rows, cols = m.rows, m.cols
    factors = []
    top = 0
    left = 0
    while top < rows and left < cols:
        # Find the nonzero pivot of least magnitude.
        pivot = None
        for i in range(top, rows):
            for j in range(left, cols):
                v = a[i][j]
                if v and (pivot is None or abs(v) < abs(a[pivot[0]][pivot[1]])):
                    pivot = (i, j)
        if pivot is None:
            break
        pi, pj = pivot
        a[top], a[pi] = a[pi], a[top]
        for row in a:
            row[left], row[pj] = row[pj], row[left]
        if a[top][left] < 0:
            a[top] = [-v for v in a[top]]

        dirty = False
        p = a[top][left]
        for i in range(top + 1, rows):
            if a[i][left]:
                q = a[i][left] // p
                if q:
                    a[i] = [x - q * y for x, y in zip(a[i], a[top])]
                if a[i][left]:
                    dirty = True
        for j in range(left + 1, cols):
            if a[top][j]:
                q = a[top][j] // p
                if q:
                    for row in a:
                        row[j] -= q * row[left]
                if a[top][j]:
                    dirty = True
        if dirty:
            continue  # re-pick a smaller pivot
        factors.append(p)
        top += 1
        left += 1

    # Enforce the divisibility chain.
    changed = True
    while changed:
        changed = False
        for i in range(len(factors) - 1):
            x, y = factors[i], factors[i + 1]
            if y % x:
                g = gcd(x, y)
                factors[i], factors[i + 1] = g, x * y // g
                changed = True
    return factors


def _boundary_matrices(t: Triangulation, skel: Skeleton):
    """Edge and face boundary matrices of the quotient complex.

    Each edge orbit is oriented by its lexicographically least directed
    slot; each face orbit by the ascending vertex order of its least
    slot.  Any consistent choice gives the same homology.
    """
    # Orientation of an edge orbit: the directed class containing the
    # least directed slot over both directions of every undirected slot.
    edge_dir_class = []
    for orbit in skel.edges:
        best_slot = None
        best_class = None
        for tet, a, b in orbit.slots:
            for x, y in ((a, b), (b, a)):
                if best_slot is None or (tet, x, y) < best_slot:
                    best_slot = (tet, x, y)
                    best_class = skel.dir_class(tet, x, y)
        edge_dir_class.append(best_class)

    d1 = IntMatrix.zeros(len(skel.vertices), len(skel.edges))
    for idx, orbit in enumerate(skel.edges):
        tet, a, b = orbit.slots[0]
        if skel.dir_class(tet, a, b) != edge_dir_class[idx]:
            a, b = b, a
        tail = skel.vertex_orbit_of(tet, a).index
        head = skel.vertex_orbit_of(tet, b).index
        d1.data[head][idx] += 1
        d1.data[tail][idx] -= 1

    d2 = IntMatrix.zeros(len(skel.edges), len(skel.faces))
    for fidx, orbit in enumerate(skel.faces):
        tet, face = orbit.slots[0]
        x, y, z = sorted(v for v in range(4) if v != face)
        for a, b in ((x, y), (y, z), (z, x)):
            eidx = skel.edge_orbit_of(tet, a, b).index
            sign = 1 if skel.dir_class(tet, a, b) == edge_dir_class[eidx] else -1
            d2.data[eidx][fidx] += sign
    return d1, d2


def first_homology(t: Triangulation) -> H1Result:
    """H1 of a closed valid triangulation."""
    if not t.is_fully_glued():
        raise TriangulationError("first homology requires a closed triangulation")
    skel = compute_skeleton(t)
    if not skel.valid:
        raise TriangulationError("first homology requires a valid skeleton")
    d1, d2 = _boundary_matrices(t, skel)
    rank_d1 = len(smith_normal_form(d1))
    factors_d2 = smith_normal_form(d2)
    free = len(skel.edges) - rank_d1 - len(factors_d2)
    torsion = tuple(d for d in factors_d2 if d > 1)
    return H1Result(rank=free, torsion=torsion)
