"""Connected 4-valent multigraphs and their enumeration up to isomorphism.

A face pairing graph records how the tetrahedra of a triangulation are
glued together: one vertex per tetrahedron and one edge per identified
pair of faces, with loops for self-identifications.  Every vertex of the
face pairing graph of a closed triangulation has degree 4 (a loop counts
twice towards the degree), so the graphs handled here are the connected
4-valent multigraphs on up to 16 vertices.

Canonical form
--------------
A graph is stored as a symmetric multiplicity matrix.  Reading the lower
triangle row by row gives a flat integer sequence; the canonical form of
a graph is the lexicographically greatest such sequence over all vertex
relabelings.  Enumeration fills the matrix one vertex at a time under
residual degree bounds and keeps a partial assignment only while its
filled corner is itself lexicographically greatest, so each isomorphism
class is emitted exactly once, already in canonical form.
"""

from __future__ import annotations

from dataclasses import dataclass

MAX_VERTICES = 16
DEGREE = 4


class GraphError(ValueError):
    """Malformed graph data or an out-of-range parameter."""


@dataclass(frozen=True, order=True)
class CanonicalCode:
    """Totally ordered byte label identifying a graph up to isomorphism."""

    code: bytes

    def __repr__(self):
        return f"CanonicalCode({self.code.hex()})"


class MultiGraph:
    """Multigraph on vertices ``0..order-1`` as a symmetric multiplicity
    matrix.  ``mult[v][v]`` counts loops at ``v``; each loop contributes 2
    to the degree of ``v`` but only 1 to the edge count.
    """

    __slots__ = ("order", "mult")

    def __init__(self, order: int, mult=None):
        if not 1 <= order <= MAX_VERTICES:
            raise GraphError(
                f"vertex count must be between 1 and {MAX_VERTICES}, got {order}")
        self.order = order
        if mult is None:
            self.mult = [[0] * order for _ in range(order)]
        else:
            if len(mult) != order or any(len(row) != order for row in mult):
                raise GraphError("multiplicity matrix has the wrong shape")
            self.mult = [list(row) for row in mult]
            for u in range(order):
                for v in range(order):
                    m = self.mult[u][v]
                    if m < 0:
                        raise GraphError("negative edge multiplicity")
                    if v > u and m != self.mult[v][u]:
                        raise GraphError("multiplicity matrix must be symmetric")

    def degree(self, v: int) -> int:
        return sum(self.mult[v]) + self.mult[v][v]

    def degrees(self) -> list[int]:
        return [self.degree(v) for v in range(self.order)]

    def is_four_valent(self) -> bool:
        return all(d == DEGREE for d in self.degrees())

    def edge_count(self) -> int:
        """Number of edges, counting multiplicity; a loop counts once."""
        return sum(self.mult[u][v]
                   for u in range(self.order) for v in range(u, self.order))

    def edges(self):
        """Yield ``(u, v, multiplicity)`` with ``u <= v`` for present edges."""
        for u in range(self.order):
            for v in range(u, self.order):
                if self.mult[u][v]:
                    yield u, v, self.mult[u][v]

    def add_edge(self, u: int, v: int, count: int = 1) -> None:
        if not (0 <= u < self.order and 0 <= v < self.order):
            raise GraphError("edge endpoint out of range")
        if u == v:
            self.mult[u][u] += count
        else:
            self.mult[u][v] += count
            self.mult[v][u] += count

    def copy(self) -> "MultiGraph":
        return MultiGraph(self.order, self.mult)

    def relabel(self, perm) -> "MultiGraph":
        """Return the graph with vertex ``v`` renamed to ``perm[v]``."""
        n = self.order
        out = [[0] * n for _ in range(n)]
        for u in range(n):
            for v in range(n):
                out[perm[u]][perm[v]] = self.mult[u][v]
        return MultiGraph(n, out)

    def _key(self):
        return (self.order, tuple(tuple(row) for row in self.mult))

    def __eq__(self, other):
        return isinstance(other, MultiGraph) and self._key() == other._key()

    def __hash__(self):
        return hash(self._key())

    def __repr__(self):
        return f"MultiGraph({self.order}, {self.mult})"


def _reading_rows(mult, verts) -> list[tuple]:
    """Lower-triangular reading rows for the given vertex order."""
    rows = []
    for p, v in enumerate(verts):
        mv = mult[v]
        rows.append(tuple(mv[verts[j]] for j in range(p)) + (mv[v],))
    return rows


def _improves(mult, k, rows) -> bool:
    """True if relabeling the first ``k`` vertices can beat ``rows``.

    Explores orderings whose reading matches ``rows`` so far and reports
    success as soon as one row can be strictly increased.
    """
    if k <= 1:
        return False
    used = [False] * k
    chosen = []

    def rec(p):
        row_p = rows[p]
        nxt = p + 1
        for v in range(k):
            if used[v]:
                continue
            mv = mult[v]
            # Compare v's would-be row with row_p, stopping at the first
            # difference; strictly larger means an improvement exists.
            verdict = 0
            for j in range(p):
                a = mv[chosen[j]]
                b = row_p[j]
                if a != b:
                    verdict = 1 if a > b else -1
                    break
            else:
                a = mv[v]
                b = row_p[p]
                if a != b:
                    verdict = 1 if a > b else -1
            if verdict > 0:
                return True
            if verdict == 0:
                if nxt == k:
                    continue
                used[v] = True
                chosen.append(v)
                deeper = rec(nxt)
                chosen.pop()
                used[v] = False
                if deeper:
                    return True
        return False

    return rec(0)


def _find_improvement(mult, k, rows):
    """Return a strictly better reading for some relabeling, or None."""
    if k <= 1:
        return None
    used = [False] * k
    chosen = []

    def greedy_rest(prefix_rows):
        while len(chosen) < k:
            best_v = best_row = None
            for v in range(k):
                if used[v]:
                    continue
                mv = mult[v]
                row = tuple(mv[w] for w in chosen) + (mv[v],)
                if best_row is None or row > best_row:
                    best_v, best_row = v, row
            used[best_v] = True
            chosen.append(best_v)
            prefix_rows.append(best_row)
        return prefix_rows

    def rec(p):
        row_p = rows[p]
        for v in range(k):
            if used[v]:
                continue
            mv = mult[v]
            row = tuple(mv[w] for w in chosen) + (mv[v],)
            if row > row_p:
                used[v] = True
                chosen.append(v)
                result = greedy_rest(list(rows[:p]) + [row])
                chosen.pop()
                used[v] = False
                return result
            if row == row_p and p + 1 < k:
                used[v] = True
                chosen.append(v)
                deeper = rec(p + 1)
                chosen.pop()
                used[v] = False
                if deeper is not None:
                    return deeper
        return None

    return rec(0)


def canonical_form(g: MultiGraph) -> CanonicalCode:
    """Canonical code of ``g``: invariant under relabeling, distinct for
    non-isomorphic graphs."""
    n = g.order
    mult = g.mult
    rows = _reading_rows(mult, list(range(n)))
    while True:
        better = _find_improvement(mult, n, rows)
        if better is None:
            break
        rows = better
    flat = bytes([n]) + bytes(x for row in rows for x in row)
    return CanonicalCode(flat)


def is_connected(g: MultiGraph) -> bool:
    """True if the underlying graph is connected (loops do not help)."""
    return _connected(g.mult, g.order)


def _connected(mult, n) -> bool:
    if n == 1:
        return True
    seen = [False] * n
    seen[0] = True
    stack = [0]
    count = 1
    while stack:
        u = stack.pop()
        mu = mult[u]
        for v in range(n):
            if mu[v] and not seen[v]:
                seen[v] = True
                count += 1
                stack.append(v)
    return count == n


def enumerate_face_pairing_graphs(n: int) -> list[MultiGraph]:
    """All connected 4-valent multigraphs on ``n`` vertices, one canonical
    representative per isomorphism class, sorted by canonical code."""
    if not 1 <= n <= MAX_VERTICES:
        raise GraphError(
            f"vertex count must be between 1 and {MAX_VERTICES}, got {n}")
    mult = [[0] * n for _ in range(n)]
    resid = [DEGREE] * n
    rows: list[tuple] = []
    out: list[MultiGraph] = []
    last = n - 1

    def row_candidates(k):
        # Ascending reading order: connection counts first, loops last.
        if k == last:
            need = resid[:k]
            total = sum(need)
            spare = DEGREE - total
            if spare >= 0 and spare % 2 == 0:
                yield tuple(need), spare // 2
            return
        conns = [0] * k

        def gen(i, used):
            if i == k:
                base = tuple(conns)
                for loops in range((DEGREE - used) // 2 + 1):
                    yield base, loops
                return
            top = min(resid[i], DEGREE - used)
            for c in range(top + 1):
                conns[i] = c
                yield from gen(i + 1, used + c)
            conns[i] = 0

        yield from gen(0, 0)

    def place(k):
        if k == n:
            if _connected(mult, n):
                out.append(MultiGraph(n, mult))
            return
        rest = n - k - 1
        capacity = DEGREE * rest
        mk = mult[k]
        for conns, loops in row_candidates(k):
            for i, c in enumerate(conns):
                mk[i] = mult[i][k] = c
                resid[i] -= c
            mk[k] = loops
            resid[k] = DEGREE - sum(conns) - 2 * loops
            rows.append(conns + (loops,))
            open_degree = sum(resid[i] for i in range(k + 1))
            feasible = open_degree <= capacity
            if feasible and rest > 0 and open_degree == 0:
                feasible = False  # saturated proper prefix: disconnected
            if feasible and not _improves(mult, k + 1, rows):
                place(k + 1)
            rows.pop()
            for i, c in enumerate(conns):
                mk[i] = mult[i][k] = 0
                resid[i] += c
            mk[k] = 0
            resid[k] = DEGREE

    place(0)
    out.sort(key=lambda g: tuple(x for row in _reading_rows(g.mult, range(n))
                                 for x in row))
    return out


def face_pairing_graph_of(t) -> MultiGraph:
    """Face pairing graph of a (possibly partial) triangulation: each glued
    face pair contributes exactly one edge."""
    g = MultiGraph(t.size)
    for tet in range(t.size):
        for face in range(4):
            target = t.glued(tet, face)
            if target is None:
                continue
            tet2, perm = target
            face2 = perm(face)
            if (tet, face) <= (tet2, face2):
                g.add_edge(tet, tet2)
    return g


def serialize_graph(g: MultiGraph) -> str:
    """Write a graph in the ``.fpg`` text format."""
    lines = [f"vertices: {g.order}"]
    for u, v, m in g.edges():
        lines.extend([f"{u} {v}"] * m)
    return "\n".join(lines) + "\n"


def parse_graph(text: str) -> MultiGraph:
    """Parse the ``.fpg`` text format.

    Line 1 is ``vertices: N``; every further non-comment line is one edge
    ``u v`` (a loop as ``u u``), repeated per multiplicity.  Every vertex
    must end up with degree 4.
    """
    lines = []
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if line:
            lines.append(line)
    if not lines:
        raise GraphError("empty graph file")
    head = lines[0].split()
    if len(head) != 2 or head[0] != "vertices:":
        raise GraphError(f"bad header line: {lines[0]!r}")
    try:
        n = int(head[1])
    except ValueError:
        raise GraphError(f"bad vertex count: {head[1]!r}") from None
    g = MultiGraph(n)
    for line in lines[1:]:
        parts = line.split()
        if len(parts) != 2:
            raise GraphError(f"bad edge line: {line!r}")
        try:
            u, v = int(parts[0]), int(parts[1])
        except ValueError:
            raise GraphError(f"bad edge line: {line!r}") from None
        if not (0 <= u < n and 0 <= v < n):
            raise GraphError(f"edge endpoint out of range: {line!r}")
        g.add_edge(u, v)
    bad = [v for v in range(n) if g.degree(v) != DEGREE]
    if bad:
        raise GraphError(
            f"vertices {bad} do not have degree {DEGREE}")
    return g
