"""Shrinking a marked hole, and the bookkeeping around it.

Setting every edge length around one hole to zero crushes a thickened zone
of the surface.  What remains splits into positive components (honest
metric ribbon graphs) and at most one nonpositive piece that survives only
as numerical data.  The zone's own topology, disk, cylinder with one
doubled edge, or a genuine surface, decides which: a disk leaves the hole
label on a fresh vertex, anything bigger buds off a labeled bubble joined
to the positive parts at nodes.

The module also houses the dual-graph calculus (two reduction moves whose
fixed points are the reduced dual graphs), the per-hole and per-cluster
zone classification used for stratum censuses, the forgetful map that
erases a vertex marking, and the inventory of cylinder configurations the
fiber integrals sum over.
"""

from __future__ import annotations

from fractions import Fraction

from .errors import (
    ConeViolation,
    DomainMismatch,
    HoleMark,
    InconsistentLabels,
    UnivalentVertex,
    VertexMark,
    ZeroPerimeter,
)
from .ribbon import (
    HOLE,
    VERTEX,
    Marking,
    MarkedMetricGraph,
    RibbonGraph,
    genus,
    graph_to_json,
)
from . import permutations as perms
from .stable import exceptional_correspondence, quotient, subgraph

DISK = "disk"
CYLINDER = "cylinder"
SURFACE = "surface"


# --- dual graphs ------------------------------------------------------------------


class DualGraph:
    """Vertices labeled (genus, labels, positive flag); edges are nodes.

    Loops are allowed.  Labels must be disjoint across vertices.  The
    quantity genus + cycle rank is what the reduction moves preserve.
    """

    __slots__ = ("vertices", "edges")

    def __init__(self, vertices, edges):
        seen = set()
        norm_v = []
        for g_v, labels, positive in vertices:
            if g_v < 0:
                raise InconsistentLabels(f"vertex genus {g_v} is negative")
            labels = frozenset(str(l) for l in labels)
            clash = labels & seen
            if clash:
                raise InconsistentLabels(f"label {sorted(clash)[0]!r} used twice")
            seen |= labels
            norm_v.append((int(g_v), labels, bool(positive)))
        norm_e = []
        for i, j in edges:
            if not (0 <= i < len(norm_v) and 0 <= j < len(norm_v)):
                raise InconsistentLabels(f"edge ({i}, {j}) points outside the graph")
            norm_e.append((min(i, j), max(i, j)))
        self.vertices = tuple(norm_v)
        self.edges = tuple(sorted(norm_e))

    def total_genus(self) -> int:
        """Sum of vertex genera plus the cycle rank of the underlying graph."""
        n = len(self.vertices)
        parent = list(range(n))

        def find(i):
            while parent[i] != i:
                parent[i] = parent[parent[i]]
                i = parent[i]
            return i

        for i, j in self.edges:
            ri, rj = find(i), find(j)
            if ri != rj:
                parent[ri] = rj
        comps = len({find(i) for i in range(n)})
        rank = len(self.edges) - n + comps
        return sum(g for g, _, _ in self.vertices) + rank

    def is_reduced(self) -> bool:
        for i, j in self.edges:
            pos_i = self.vertices[i][2]
            pos_j = self.vertices[j][2]
            if i == j and not pos_i:
                return False
            if i != j and not pos_i and not pos_j:
                return False
        return True

    def __eq__(self, other):
        return (
            isinstance(other, DualGraph)
            and self.vertices == other.vertices
            and self.edges == other.edges
        )

    def __repr__(self):
        vs = "; ".join(
            f"({g},{{{','.join(sorted(ls))}}},{'+' if pos else '0'})"
            for g, ls, pos in self.vertices
        )
        return f"DualGraph([{vs}], {list(self.edges)})"


def reduce_dual_graph(gamma: DualGraph) -> DualGraph:
    """Apply the two reduction moves until neither fires.

    Move 1 melds the endpoints of an edge joining two nonpositive vertices
    (genera and labels add, the vertex stays nonpositive); move 2 deletes a
    loop at a nonpositive vertex and raises its genus by one.  Total genus
    plus cycle rank never changes.
    """
    vertices = list(gamma.vertices)
    edges = list(gamma.edges)
    while True:
        fired = False
        for k, (i, j) in enumerate(edges):
            pos_i = vertices[i][2]
            pos_j = vertices[j][2]
            if i == j and not pos_i:
                g, ls, _ = vertices[i]
                vertices[i] = (g + 1, ls, False)
                del edges[k]
                fired = True
                break
            if i != j and not pos_i and not pos_j:
                gi, li, _ = vertices[i]
                gj, lj, _ = vertices[j]
                vertices[i] = (gi + gj, li | lj, False)
                del vertices[j]

                def shift(v):
                    return v - 1 if v > j else (i if v == j else v)

                edges = [
                    (min(shift(a), shift(b)), max(shift(a), shift(b)))
                    for a, b in edges[:k] + edges[k + 1 :]
                ]
                fired = True
                break
        if not fired:
            out = DualGraph(vertices, edges)
            assert out.is_reduced()
            assert out.total_genus() == gamma.total_genus()
            return out


# --- zone topology ----------------------------------------------------------------


class HoleTopology:
    """What the thickened zone of a hole (or cluster) looks like.

    kind is disk, cylinder, or surface; genus and the sorted boundary
    valency tuple qualify the surface case.  closed_complement flags a
    zone that already swallows the whole surface.
    """

    __slots__ = ("kind", "genus", "boundary", "closed_complement")

    def __init__(self, kind, genus=0, boundary=(), closed_complement=False):
        if kind not in (DISK, CYLINDER, SURFACE):
            raise DomainMismatch(f"unknown zone kind {kind!r}")
        self.kind = kind
        self.genus = int(genus)
        self.boundary = tuple(boundary)
        self.closed_complement = bool(closed_complement)

    def __eq__(self, other):
        return isinstance(other, HoleTopology) and (
            (self.kind, self.genus, self.boundary, self.closed_complement)
            == (other.kind, other.genus, other.boundary, other.closed_complement)
        )

    def __repr__(self):
        if self.kind == DISK:
            return "HoleTopology(disk)"
        if self.kind == CYLINDER:
            return f"HoleTopology(cylinder{self.boundary})"
        tail = ", closed" if self.closed_complement else ""
        return f"HoleTopology(surface, genus {self.genus}, {self.boundary}{tail})"


def _graph_and_marking(g):
    if isinstance(g, MarkedMetricGraph):
        return g.graph, g.marking
    graph, marking = g
    return graph, marking


def _hole_orbit(marking: Marking, q):
    if q not in marking.targets:
        raise DomainMismatch(f"no marking named {q!r}")
    kind, orbit = marking.targets[q]
    if kind == VERTEX:
        raise VertexMark(f"{q!r} marks a vertex, not a hole")
    return orbit


def _zone_edges(graph: RibbonGraph, orbit):
    return {graph.edge_of(x) for x in orbit}


def _zone_boundary(graph: RibbonGraph, zone, covered):
    """Genus of the zone subgraph and its non-covered boundary circles.

    Each circle comes back as (orbit, valency): valency is the size of the
    collapsed vertex the circle wraps (0 for a circle that is already a
    hole of the ambient graph).
    """
    sub, exc = subgraph(graph, zone)
    exc_set = set(exc)
    partner = {}
    if len(zone) < graph.n_edges():
        partner = {h: len(v) for h, v in exceptional_correspondence(graph, zone)}
    boundary = []
    for h in sub.holes():
        hs = frozenset(h)
        if hs in covered:
            continue
        boundary.append((hs, partner[hs] if hs in exc_set else 0))
    return genus(sub), boundary


def y_stratum(g, q) -> int:
    """Number of distinct edges the q hole runs along."""
    graph, marking = _graph_and_marking(g)
    orbit = _hole_orbit(marking, q)
    return len(_zone_edges(graph, orbit))


def _cycle_of_hole(graph: RibbonGraph, orbit):
    for h in graph.holes():
        if frozenset(h) == orbit:
            return h
    raise DomainMismatch(f"{sorted(orbit)} is not a hole")


def _cylinder_split(graph: RibbonGraph, orbit, doubled_edge):
    """Arc sizes, each minus one, on the two sides of the doubled edge."""
    walk = _cycle_of_hole(graph, orbit)
    a, b = doubled_edge
    i, j = walk.index(a), walk.index(b)
    n = len(walk)
    first = (j - i - 1) % n
    second = (i - j - 1) % n
    return first - 1, second - 1


def hole_topology(g, q) -> HoleTopology:
    """Classify the thickened zone spanned by the edges bordering hole q.

    Disk: genus 0 with one boundary circle and no doubled edge.  Cylinder:
    genus 0, two circles, exactly one edge traversed twice by the hole;
    its boundary pair counts the hole's other sides on each arc, minus
    one.  Everything else is a surface whose boundary entries are the
    valencies of the vertices the circles collapse onto.
    """
    graph, marking = _graph_and_marking(g)
    orbit = _hole_orbit(marking, q)
    zone = _zone_edges(graph, orbit)
    h, boundary = _zone_boundary(graph, zone, {orbit})
    doubled = [e for e in sorted(zone) if e[0] in orbit and e[1] in orbit]
    if h == 0 and len(boundary) == 1 and not doubled:
        return HoleTopology(DISK)
    if h == 0 and len(boundary) == 2 and len(doubled) == 1:
        v1, v2 = _cylinder_split(graph, orbit, doubled[0])
        if v1 >= 0 and v2 >= 0:
            return HoleTopology(CYLINDER, 0, tuple(sorted((v1, v2))))
    vs = tuple(sorted(v for _, v in boundary))
    topo = HoleTopology(SURFACE, h, vs, closed_complement=not boundary)
    _check_surface_count(graph, zone, topo)
    return topo


def _check_surface_count(graph, zone, topo):
    """Consistency identity for trivalent zones: boundary data vs edge count.

    With every touched vertex trivalent and an odd number of distinct
    edges 2r+3, the boundary valencies satisfy 6h - 6 + sum(v_j + 3) = 2r.
    """
    touched = {frozenset(perms.orbit_of(graph.sigma0, x)) for e in zone for x in e}
    if any(len(v) != 3 for v in touched):
        return
    n_edges = len(zone)
    if n_edges % 2 == 0:
        return
    lhs = 6 * topo.genus - 6 + sum(v + 3 for v in topo.boundary)
    assert lhs == n_edges - 3, "zone boundary bookkeeping is inconsistent"


# --- shrinking --------------------------------------------------------------------


class ShrinkResult:
    """Outcome of crushing one hole's zone to a point.

    components are the positive parts (marked metric graphs keeping their
    original lengths).  For a disk zone the q label reappears as a vertex
    marking inside a component and there is no bubble; otherwise q names a
    nonpositive bubble recorded only through ``topology`` (genus and node
    valencies), and ``nodes`` lists, per boundary circle, the component
    and vertex orbit the bubble is glued to.  ``dual`` is the reduced
    dual graph of the whole configuration.
    """

    __slots__ = ("topology", "components", "nodes", "dual")

    def __init__(self, topology, components, nodes, dual):
        self.topology = topology
        self.components = tuple(components)
        self.nodes = tuple(nodes)
        self.dual = dual

    @property
    def kind(self):
        return self.topology.kind

    def __repr__(self):
        return (
            f"ShrinkResult({self.kind}, {len(self.components)} component(s), "
            f"{len(self.nodes)} node(s))"
        )


def _split_positive_parts(graph: RibbonGraph, zone):
    """Quotient by the zone and hand back per-component restrictions."""
    quo, exc_verts = quotient(graph, zone)
    comps = sorted(quo.components(), key=min)
    parts = []
    for sides in comps:
        parts.append(
            RibbonGraph(
                {x: quo.sigma0[x] for x in sides},
                {x: quo.sigma1[x] for x in sides},
                sides,
            )
        )
    return parts, [frozenset(v) for v in exc_verts]


def shrink(g: MarkedMetricGraph, q) -> ShrinkResult:
    """Crush the zone of hole q; the cone condition guards the limit.

    Requires l_q strictly below every other marked hole's perimeter, and
    no marked vertex bordering the zone (either failure could squeeze a
    second special point along with q).  The q label lands on the new
    vertex for a disk zone, on the bubble otherwise.
    """
    if not isinstance(g, MarkedMetricGraph):
        raise DomainMismatch("shrink needs a marked metric graph")
    marking = g.marking
    if q not in marking.targets:
        raise DomainMismatch(f"no marking named {q!r}")
    if marking.kind(q) == VERTEX:
        raise ZeroPerimeter(f"{q!r} already marks a vertex")
    orbit = marking.orbit(q)
    zone = _zone_edges(g.graph, orbit)
    l_q = g.circumference(q)

    for p in marking.labels():
        if p == q:
            continue
        kind_p, orb_p = marking.targets[p]
        if kind_p == HOLE:
            if l_q >= g.circumference(p):
                raise ConeViolation(
                    f"perimeter of {q!r} is not below that of {p!r}"
                )
        else:
            if any(g.graph.edge_of(x) in zone for x in orb_p):
                raise ConeViolation(
                    f"the marked vertex {p!r} borders the collapse zone"
                )

    topo = hole_topology((g.graph, marking), q)

    if len(zone) == g.graph.n_edges():
        # the zone already swallows everything; the cone checks above make
        # sure q was the only marking, so only the bubble survives
        dual = reduce_dual_graph(
            DualGraph([(topo.genus, frozenset({q}), False)], [])
        )
        return ShrinkResult(topo, (), (), dual)

    parts, exc_verts = _split_positive_parts(g.graph, zone)
    comp_of_side = {}
    for i, part in enumerate(parts):
        for x in part.sides:
            comp_of_side[x] = i

    markings = [dict() for _ in parts]
    for label, (kind, orb) in marking.targets.items():
        if label == q:
            continue
        if kind == HOLE:
            for i, part in enumerate(parts):
                remnant = orb & set(part.sides)
                if remnant:
                    markings[i][label] = (HOLE, remnant)
        else:
            i = comp_of_side[min(orb)]
            markings[i][label] = (VERTEX, orb)

    if topo.kind == DISK:
        (vert,) = exc_verts
        i = comp_of_side[min(vert)]
        markings[i][q] = (VERTEX, vert)

    components = []
    for part, marks in zip(parts, markings):
        lengths = {e: g.lengths[e] for e in part.edges()}
        components.append(MarkedMetricGraph(part, Marking(part, marks), lengths))

    nodes = ()
    if topo.kind != DISK:
        decorated = sorted(
            (len(v), min(v), comp_of_side[min(v)], v) for v in exc_verts
        )
        if topo.kind == SURFACE:
            # the cylinder boundary is measured along the hole walk instead
            assert tuple(d[0] for d in decorated) == topo.boundary
        nodes = tuple((i, v) for _, _, i, v in decorated)

    dual_vertices = [
        (genus(c.graph), frozenset(m), True) for c, m in zip(components, markings)
    ]
    dual_edges = []
    if topo.kind != DISK:
        dual_vertices.append((topo.genus, frozenset({q}), False))
        bubble = len(dual_vertices) - 1
        dual_edges = [(i, bubble) for i, _ in nodes]
    dual = reduce_dual_graph(DualGraph(dual_vertices, dual_edges))
    return ShrinkResult(topo, components, nodes, dual)


# --- forgetting a vertex marking --------------------------------------------------


def forget_vertex_marking(g: MarkedMetricGraph, q) -> MarkedMetricGraph:
    """Erase the q vertex marking, restoring reducedness if it was bivalent.

    A bivalent vertex disappears entirely: its two edges merge and their
    lengths add.  A univalent vertex cannot be forgotten (the graph would
    stop being critical), and valency >= 3 just drops the label.
    """
    marking = g.marking
    if q not in marking.targets:
        raise DomainMismatch(f"no marking named {q!r}")
    kind, orb = marking.targets[q]
    if kind == HOLE:
        raise HoleMark(f"{q!r} marks a hole; only vertex markings can be forgotten")
    rest = {l: t for l, t in marking.targets.items() if l != q}
    if len(orb) == 1:
        raise UnivalentVertex(f"{q!r} marks a univalent vertex")
    if len(orb) >= 3:
        return MarkedMetricGraph(g.graph, Marking(g.graph, rest), g.lengths)

    a, b = sorted(orb)
    graph = g.graph
    x, y = graph.sigma1[a], graph.sigma1[b]
    if x == b:
        raise DomainMismatch("cannot forget the only vertex of a circle")
    sides = set(graph.sides) - {a, b}
    s0 = {z: graph.sigma0[z] for z in sides}
    s1 = {z: graph.sigma1[z] for z in sides}
    s1[x], s1[y] = y, x
    merged = RibbonGraph(s0, s1, sides)
    lengths = {
        e: g.lengths[e]
        for e in graph.edges()
        if a not in e and b not in e
    }
    lengths[tuple(sorted((x, y)))] = (
        g.lengths[graph.edge_of(a)] + g.lengths[graph.edge_of(b)]
    )
    targets = {}
    for label, (k, o) in rest.items():
        cut = o - {a, b}
        assert cut, "an orbit vanished while smoothing a bivalent vertex"
        targets[label] = (k, cut if k == HOLE else o)
    return MarkedMetricGraph(merged, Marking(merged, targets), lengths)


# --- clusters ---------------------------------------------------------------------


def detect_clusters(g, labels):
    """Partition the given hole labels into adjacency clusters.

    Two holes are adjacent when they touch a common vertex; clusters are
    the chains of that relation.  Returns (blocks, topologies): per block
    the zone of the union of its holes, classified disk, cylinder, or
    surface by genus and boundary count alone.
    """
    graph, marking = _graph_and_marking(g)
    labels = sorted(str(l) for l in labels)
    orbits = {}
    touched = {}
    for q in labels:
        orbit = _hole_orbit(marking, q)
        orbits[q] = orbit
        touched[q] = {frozenset(perms.orbit_of(graph.sigma0, x)) for x in orbit}

    parent = {q: q for q in labels}

    def find(q):
        while parent[q] != q:
            parent[q] = parent[parent[q]]
            q = parent[q]
        return q

    for i, q1 in enumerate(labels):
        for q2 in labels[i + 1 :]:
            if touched[q1] & touched[q2]:
                r1, r2 = find(q1), find(q2)
                if r1 != r2:
                    parent[r1] = r2

    blocks = {}
    for q in labels:
        blocks.setdefault(find(q), []).append(q)
    out_blocks = sorted(frozenset(b) for b in blocks.values())

    topologies = []
    for block in out_blocks:
        zone = set()
        for q in block:
            zone |= _zone_edges(graph, orbits[q])
        covered = {orbits[q] for q in block}
        h, boundary = _zone_boundary(graph, zone, covered)
        vs = tuple(sorted(v for _, v in boundary))
        if h == 0 and len(boundary) == 1:
            topologies.append(HoleTopology(DISK))
        elif h == 0 and len(boundary) == 2:
            topologies.append(HoleTopology(CYLINDER, 0, vs))
        else:
            topologies.append(
                HoleTopology(SURFACE, h, vs, closed_complement=not boundary)
            )
    return out_blocks, topologies


# --- cylinder configurations ------------------------------------------------------


def cylinder_configurations(v1: int, v2: int):
    """All local models of a cylinder zone with arc sizes v1+1 and v2+1.

    The doubled edge's endpoint on each boundary circle sits in one of the
    gaps between that circle's outgoing edges, so the models are indexed
    by a gap choice per side.  Each model carries the cyclic side sequence
    of the hole as edge indices: 0 is the doubled edge, 1..v1+1 the first
    arc, v1+2..v1+v2+2 the second.
    """
    if v1 < 1 or v2 < 1:
        raise DomainMismatch("cylinder arcs need at least one external edge each")
    first_arc = list(range(1, v1 + 2))
    second_arc = list(range(v1 + 2, v1 + v2 + 3))
    cycle = tuple([0] + first_arc + [0] + second_arc)
    return [
        {"gaps": (i, j), "cycle": cycle}
        for i in range(v1)
        for j in range(v2)
    ]


# --- JSON forms -------------------------------------------------------------------


def topology_to_json(t: HoleTopology) -> dict:
    return {
        "kind": t.kind,
        "genus": t.genus,
        "boundary": list(t.boundary),
        "closed_complement": t.closed_complement,
    }


def dual_to_json(gamma: DualGraph) -> dict:
    return {
        "vertices": [
            {"genus": g, "labels": sorted(labels), "positive": pos}
            for g, labels, pos in gamma.vertices
        ],
        "edges": [list(e) for e in gamma.edges],
    }


def shrink_to_json(res: ShrinkResult) -> dict:
    """Everything a shrink produced, components in full graph form."""
    return {
        "kind": res.kind,
        "topology": topology_to_json(res.topology),
        "components": [
            graph_to_json(c.graph, c.marking, c.lengths) for c in res.components
        ],
        "nodes": [{"component": i, "vertex": sorted(v)} for i, v in res.nodes],
        "dual": dual_to_json(res.dual),
    }
