"""Census enumeration: graph stage, gluing search, validity filtering.

The search runs in two modes over each face pairing graph:

* ``baseline`` assigns one permutation per graph edge in a fixed order
  (six choices per edge, or three once the parity of a gluing is forced
  in orientable mode), pruning after every assignment with the enabled
  filters.
* ``redesigned`` first instantiates a standard layered solid torus on
  every one-ended chain of the graph, then assigns each remaining double
  edge one of the allowed joint configurations, and only then falls back
  to edge-by-edge assignment for what is left.  A graph that is itself a
  double-ended chain becomes one layered solid torus whose two boundary
  faces are closed against each other at the end.

Both modes emit identical candidate sets; the redesigned mode just
reaches them through far fewer search nodes.  A node is one attempted
choice: a permutation assignment, a layered solid torus, or a double
edge configuration.  Censuses with fewer than three tetrahedra gate off
every structural shortcut and every lemma filter that assumes three or
more tetrahedra.

Candidates are closed, valid, sphere-linked triangulations that pass all
enabled filters (and are orientable when requested), deduplicated by
isomorphism signature.  Candidates are necessary-condition survivors
only: no minimality or irreducibility certification is attempted here.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace

from .filters import (
    ALL_TAGS,
    PruneTag,
    allowed_double_edge_configurations,
    check_cone_and_spine_faces,
    check_edges,
    check_two_triangle_sphere,
    link_completable_to_sphere,
)
from .graph_patterns import (
    DOUBLE_ENDED,
    contains_chain_with_double_handle,
    contains_triple_edge,
    find_one_ended_chains,
    rejected_by_broken_chain_rule,
)
from .lst import enumerate_lsts
from .multigraph import (
    CanonicalCode,
    GraphError,
    MultiGraph,
    canonical_form,
    enumerate_face_pairing_graphs,
)
from .triangulation import (
    Perm4,
    Triangulation,
    compute_skeleton,
    is_closed_3manifold,
    iso_signature,
    orientation_signs,
    perms_mapping_face,
    vertex_links,
)

MAX_CENSUS_TETRAHEDRA = 8

BASELINE = "baseline"
REDESIGNED = "redesigned"


@dataclass(frozen=True)
class GraphFilters:
    triple: bool = True
    broken: bool = True
    handle: bool = True


@dataclass(frozen=True)
class CensusConfig:
    """Settings for one census run; defaults enable every filter."""

    n: int
    orientable_only: bool = False
    mode: str = REDESIGNED
    graph_filters: GraphFilters = GraphFilters()
    tri_filters: frozenset = frozenset(ALL_TAGS)
    worker_count: int = 1

    def __post_init__(self):
        if self.mode not in (BASELINE, REDESIGNED):
            raise ValueError(f"unknown mode {self.mode!r}")
        if not 1 <= self.n <= MAX_CENSUS_TETRAHEDRA:
            raise ValueError(
                f"tetrahedron count must be between 1 and "
                f"{MAX_CENSUS_TETRAHEDRA}, got {self.n}")
        if self.worker_count < 1:
            raise ValueError("worker count must be positive")


@dataclass
class CensusStats:
    """Counters for one census run (or one graph's share of it)."""

    graphs_total: int = 0
    graphs_rejected: dict = field(default_factory=dict)
    nodes_explored: int = 0
    prunes: dict = field(default_factory=dict)
    candidates_emitted: int = 0
    candidates_distinct: int = 0

    def merge(self, other: "CensusStats") -> None:
        self.graphs_total += other.graphs_total
        for key, val in other.graphs_rejected.items():
            self.graphs_rejected[key] = self.graphs_rejected.get(key, 0) + val
        self.nodes_explored += other.nodes_explored
        for key, val in other.prunes.items():
            self.prunes[key] = self.prunes.get(key, 0) + val
        self.candidates_emitted += other.candidates_emitted
        self.candidates_distinct += other.candidates_distinct

    def as_text(self) -> str:
        lines = [
            f"graphs_total: {self.graphs_total}",
            f"graphs_rejected: " + " ".join(
                f"{k}={self.graphs_rejected.get(k, 0)}"
                for k in ("triple", "broken", "handle", "any")),
            f"nodes_explored: {self.nodes_explored}",
            "prunes: " + " ".join(
                f"{tag.value}={self.prunes.get(tag.value, 0)}"
                for tag in ALL_TAGS),
            f"candidates_emitted: {self.candidates_emitted}",
            f"candidates_distinct: {self.candidates_distinct}",
        ]
        return "\n".join(lines)


@dataclass(frozen=True)
class Candidate:
    """A closed valid triangulation surviving every enabled filter."""

    triangulation: Triangulation
    signature: str
    graph_code: CanonicalCode


def _components(t: Triangulation):
    """Component id (smallest member) per tetrahedron of a partial state."""
    n = t.size
    comp = [-1] * n
    for start in range(n):
        if comp[start] != -1:
            continue
        comp[start] = start
        stack = [start]
        while stack:
            tet = stack.pop()
            for face in range(4):
                entry = t.glued(tet, face)
                if entry is not None and comp[entry[0]] == -1:
                    comp[entry[0]] = start
                    stack.append(entry[0])
    return comp


class _GraphSearch:
    """Recursive gluing search over one face pairing graph."""

    def __init__(self, g: MultiGraph, cfg: CensusConfig):
        self.g = g
        self.cfg = cfg
        self.mode = cfg.mode if cfg.n >= 3 else BASELINE
        self.enabled = frozenset(cfg.tri_filters)
        self.tri = Triangulation(cfg.n)
        self.stats = CensusStats()
        self.found: dict = {}
        run_edge = bool(self.enabled & {
            PruneTag.ReversedEdge, PruneTag.DegreeOne, PruneTag.DegreeTwo,
            PruneTag.DegreeThreeDistinct})
        self._checks = (run_edge,
                        bool(self.enabled & {PruneTag.ConeFace,
                                             PruneTag.L31Spine}),
                        PruneTag.TwoTriangleSphere in self.enabled,
                        PruneTag.UncompletableLink in self.enabled)

    # -- bookkeeping -------------------------------------------------

    def _free_faces(self, tet):
        return [f for f in range(4) if self.tri.glued(tet, f) is None]

    def _prune_reason(self):
        """First enabled prune reason of the current state, or None."""
        t = self.tri
        n = self.cfg.n
        skel = compute_skeleton(t)
        run_edge, run_cone, run_sphere, run_link = self._checks
        if run_edge:
            for r in check_edges(t, n, skel):
                if r.tag in self.enabled:
                    return r
        if run_cone:
            for r in check_cone_and_spine_faces(t, n, skel):
                if r.tag in self.enabled:
                    return r
        if run_sphere:
            for r in check_two_triangle_sphere(t, n, skel):
                if r.tag in self.enabled:
                    return r
        if run_link and skel.valid:
            for r in link_completable_to_sphere(t, skel):
                if r.tag in self.enabled:
                    return r
        return None

    def _edge_perms(self, u, fu, v, fv):
        """Admissible permutations for gluing (u, fu) onto (v, fv)."""
        perms = perms_mapping_face(fu, fv)
        if not self.cfg.orientable_only:
            return perms
        if u == v:
            return tuple(p for p in perms if p.sign == -1)
        signs = orientation_signs(self.tri)
        comp = _components(self.tri)
        if comp[u] != comp[v]:
            return perms
        want = -signs[u] * signs[v]
        return tuple(p for p in perms if p.sign == want)

    def _enter(self, reasons_holder):
        """Count a node, run filters; True if the search may descend."""
        self.stats.nodes_explored += 1
        reason = self._prune_reason()
        if reason is None:
            return True
        key = reason.tag.value
        self.stats.prunes[key] = self.stats.prunes.get(key, 0) + 1
        return False

    def _finalize(self):
        t = self.tri
        if not is_closed_3manifold(t):
            return
        if self.cfg.orientable_only and orientation_signs(t) is None:
            return
        self.stats.candidates_emitted += 1
        sig = iso_signature(t).text
        if sig not in self.found:
            self.found[sig] = t.copy()

    # -- step plans ----------------------------------------------------

    def _baseline_steps(self):
        edges = []
        for u, v, m in self.g.edges():
            edges.extend([(u, v)] * m)
        ordered = []
        visited = {0}
        remaining = list(edges)
        while remaining:
            pick = next(i for i, (u, v) in enumerate(remaining)
                        if u in visited or v in visited)
            u, v = remaining.pop(pick)
            visited.update((u, v))
            ordered.append(("single", u, v))
        return ordered

    def _redesigned_steps(self):
        chains = find_one_ended_chains(self.g)
        steps = [("lst", chain.spine) for chain in chains]
        if len(chains) == 1 and chains[0].kind == DOUBLE_ENDED:
            steps.append(("closure", chains[0].spine[-1]))
            return steps
        used = [[0] * self.g.order for _ in range(self.g.order)]
        for chain in chains:
            s = chain.spine
            used[s[0]][s[0]] += 1
            for a, b in zip(s, s[1:]):
                used[min(a, b)][max(a, b)] += 2
        singles = []
        for u, v, m in self.g.edges():
            left = m - (used[u][v] if u != v else used[u][u])
            if left < 0:
                raise AssertionError("chain edges exceed graph multiplicities")
            for _ in range(left // 2):
                steps.append(("double", u, v))
            if left % 2:
                singles.append(("single", u, v))
        steps.extend(singles)
        return steps

    # -- step execution ------------------------------------------------

    def _apply_gluings(self, gluings):
        for tet, face, tet2, p in gluings:
            self.tri._glue_inplace(tet, face, tet2, p)

    def _undo_gluings(self, gluings):
        for tet, face, _tet2, _p in reversed(gluings):
            self.tri._unglue_inplace(tet, face)

    def _run(self, steps, idx):
        if idx == len(steps):
            self._finalize()
            return
        step = steps[idx]
        kind = step[0]
        if kind == "single":
            _, u, v = step
            fu = self._free_faces(u)[0]
            fv = self._free_faces(v)[0 if u != v else 1]
            for p in self._edge_perms(u, fu, v, fv):
                gl = [(u, fu, v, p)]
                self._apply_gluings(gl)
                if self._enter(None):
                    self._run(steps, idx + 1)
                self._undo_gluings(gl)
        elif kind == "double":
            _, u, v = step
            fu1, fu2 = self._free_faces(u)[:2]
            fv1, fv2 = self._free_faces(v)[:2]
            ru = _slot_perm(fu1, fu2)
            rv = _slot_perm(fv1, fv2)
            rui = ru.inverse()
            for pa, pb in allowed_double_edge_configurations():
                qa = rv.compose(pa).compose(rui)
                qb = rv.compose(pb).compose(rui)
                if self.cfg.orientable_only and not self._double_ok(u, v, qa, qb):
                    continue
                gl = [(u, fu1, v, qa), (u, fu2, v, qb)]
                self._apply_gluings(gl)
                if self._enter(None):
                    self._run(steps, idx + 1)
                self._undo_gluings(gl)
        elif kind == "lst":
            _, spine = step
            for _desc, torus in enumerate_lsts(len(spine)):
                gl = [(spine[tet], face, spine[tet2], p)
                      for tet, face, tet2, p in torus.gluings()]
                self._apply_gluings(gl)
                if self._enter(None):
                    self._run(steps, idx + 1)
                self._undo_gluings(gl)
        elif kind == "closure":
            _, tet = step
            fa, fb = self._free_faces(tet)
            perms = perms_mapping_face(fa, fb)
            if self.cfg.orientable_only:
                perms = tuple(p for p in perms if p.sign == -1)
            for p in perms:
                gl = [(tet, fa, tet, p)]
                self._apply_gluings(gl)
                if self._enter(None):
                    self._run(steps, idx + 1)
                self._undo_gluings(gl)
        else:
            raise AssertionError(f"unknown step {step!r}")

    def _double_ok(self, u, v, qa, qb):
        if qa.sign != qb.sign:
            return False
        signs = orientation_signs(self.tri)
        comp = _components(self.tri)
        if comp[u] != comp[v]:
            return True
        return qa.sign == -signs[u] * signs[v]

    # -- entry point -----------------------------------------------------

    def run(self):
        g = self.g
        cfg = self.cfg
        rejected = {}
        if cfg.n >= 3:
            gf = cfg.graph_filters
            if gf.triple and contains_triple_edge(g):
                rejected["triple"] = 1
            if gf.broken and rejected_by_broken_chain_rule(g):
                rejected["broken"] = 1
            if gf.handle and contains_chain_with_double_handle(g):
                rejected["handle"] = 1
        if rejected:
            rejected["any"] = 1
            self.stats.graphs_rejected = rejected
            return [], self.stats
        steps = (self._baseline_steps() if self.mode == BASELINE
                 else self._redesigned_steps())
        self._run(steps, 0)
        code = canonical_form(g)
        candidates = [Candidate(self.found[sig], sig, code)
                      for sig in sorted(self.found)]
        self.stats.candidates_distinct = len(candidates)
        return candidates, self.stats


def _slot_perm(face_a: int, face_b: int) -> Perm4:
    """A fixed permutation sending the model face pair (3, 0) to the
    actual face pair ``(face_a, face_b)``."""
    images = [0] * 4
    images[3] = face_a
    images[0] = face_b
    rest = [x for x in range(4) if x not in (face_a, face_b)]
    images[1], images[2] = rest
    return Perm4(images)


def search_graph(g: MultiGraph, cfg: CensusConfig):
    """Search one connected 4-valent graph; returns (candidates, stats).

    Candidates are sorted by signature and deduplicated; stats cover this
    graph only (graph stage rejection included).
    """
    return _GraphSearch(g, cfg).run()


def _search_worker(args):
    order, mult, cfg = args
    return search_graph(MultiGraph(order, mult), cfg)


def run_census(cfg: CensusConfig):
    """Run the full census for ``cfg.n`` tetrahedra.

    Returns ``(candidates, stats)`` with candidates sorted by (graph
    canonical code, signature) and deduplicated by signature.  Signatures
    cannot collide across distinct graphs, so per-graph deduplication is
    global deduplication.
    """
    graphs = enumerate_face_pairing_graphs(cfg.n)
    stats = CensusStats()
    stats.graphs_total = len(graphs)
    candidates: list = []

    if cfg.worker_count > 1 and len(graphs) > 1:
        jobs = [(g.order, g.mult, cfg) for g in graphs]
        with ProcessPoolExecutor(max_workers=cfg.worker_count) as pool:
            results = list(pool.map(_search_worker, jobs))
    else:
        results = [search_graph(g, cfg) for g in graphs]

    for cands, sub in results:
        candidates.extend(cands)
        stats.merge(sub)
    return candidates, stats
