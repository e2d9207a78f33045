"""Subgraph and quotient surgery; stable ribbon graphs from collapse sequences.

An edge subset Z of a ribbon graph spawns two smaller graphs: the subgraph
G_Z keeps only the orientations of Z and lets rotations become first-return
maps, while the quotient G/G_Z keeps the complementary sides and lets the
boundary walks become first-return maps.  Holes of G_Z that the ambient
graph never had ("exceptional") match up, one for one, with vertices of
G/G_Z that the ambient graph never had, and the matching is computed by an
explicit walk, not by counting.

Iterating the construction along a permissible sequence of subsets yields a
stable ribbon graph: components at increasing orders plus an involution
``iota`` pairing each unmarked hole with the vertex its collapse created.
Tree-like collapse pieces just donate an ordinary vertex, circle-like ones
either hand their surrounded hole's label to the new vertex or vanish as
unstable spheres (their two boundary points get paired directly), and only
the stable cores spawn deeper components.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import count as _count

from . import permutations as perms
from .errors import (
    BadMetric,
    DisconnectedSubset,
    DomainMismatch,
    EmptySubset,
    FullSubset,
    NoSuchEdge,
    NotPermissible,
)
from .ribbon import HOLE, VERTEX, Marking, RibbonGraph, graph_to_json

CONTRACTIBLE = "contractible"
SEMISTABLE = "semistable"
STABLE_BEARING = "stable-bearing"


def _normalize_edges(g: RibbonGraph, Z):
    known = set(g.edges())
    out = set()
    for e in Z:
        e = tuple(sorted(e))
        if e not in known:
            raise NoSuchEdge(f"{e!r} is not an edge of the graph")
        out.add(e)
    return out


def _zone_sides(edges):
    return {x for e in edges for x in e}


# --- subgraph / quotient ----------------------------------------------------------


def subgraph(g: RibbonGraph, Z):
    """The subgraph G_Z on the orientations of Z, with its exceptional holes.

    Rotations restrict by first return, so surviving sides keep their cyclic
    order around each vertex.  Returns (graph, holes), where ``holes`` lists
    the boundary walks of G_Z that are not boundary walks of ``g`` - the
    truncation scars, sorted by smallest side.
    """
    zz = _normalize_edges(g, Z)
    if not zz:
        raise EmptySubset("subgraph of no edges")
    sides = _zone_sides(zz)
    s0 = perms.restrict_first_return(g.sigma0, sides)
    s1 = {x: g.sigma1[x] for x in sides}
    sub = RibbonGraph(s0, s1, sides)
    ambient = {frozenset(h) for h in g.holes()}
    exc = [frozenset(h) for h in sub.holes() if frozenset(h) not in ambient]
    return sub, sorted(exc, key=min)


def quotient(g: RibbonGraph, Z):
    """The quotient G/G_Z on the remaining sides, with its exceptional vertices.

    Boundary walks restrict by first return and the rotations are recovered
    from sigma0 = sigma1 o sigma_inf^{-1}.  Returns (graph, vertices), where
    ``vertices`` lists the rotations of G/G_Z that are not rotations of
    ``g`` - one for each boundary circle of the collapsed zone, sorted by
    smallest side.  Z may be empty (identity) but not everything.
    """
    zz = _normalize_edges(g, Z)
    if not zz:
        return g, []
    remaining = set(g.sides) - _zone_sides(zz)
    if not remaining:
        raise FullSubset("cannot quotient a graph by all of its edges")
    s1 = {x: g.sigma1[x] for x in remaining}
    s_inf = perms.restrict_first_return(g.sigma_inf, remaining)
    inv_inf = perms.inverse(s_inf)
    s0 = {x: s1[inv_inf[x]] for x in remaining}
    quo = RibbonGraph(s0, s1, remaining)
    ambient = {frozenset(v) for v in g.vertices()}
    exc = [frozenset(v) for v in quo.vertices() if frozenset(v) not in ambient]
    return quo, sorted(exc, key=min)


def exceptional_correspondence(g: RibbonGraph, Z):
    """Pair each exceptional hole of G_Z with an exceptional vertex of G/G_Z.

    From a side of a truncated hole, walking the ambient rotation until the
    edge involution re-enters the hole sweeps out exactly the sides of the
    matching collapsed vertex; walking boundary links from a collapsed
    vertex sweeps the hole back out.  Both walks are performed and checked
    against each other.  Returns [(hole, vertex), ...] sorted by hole.
    """
    _sub, exc_holes = subgraph(g, Z)
    _quo, exc_verts = quotient(g, Z)
    s0, s1, s_inf = g.sigma0, g.sigma1, g.sigma_inf
    bound = len(g.sides) + 1

    pairs = []
    for hole in exc_holes:
        swept = set()
        for e in hole:
            x = s0[e]
            steps = 1
            while s1[x] not in hole:
                swept.add(x)
                x = s0[x]
                steps += 1
                assert steps <= bound, "hole-to-vertex walk failed to return"
        pairs.append((hole, frozenset(swept)))

    back = {}
    for vert in exc_verts:
        swept = set()
        for e in vert:
            x = s_inf[s1[e]]
            steps = 1
            while x not in vert:
                swept.add(x)
                x = s_inf[x]
                steps += 1
                assert steps <= bound, "vertex-to-hole walk failed to return"
        back[frozenset(vert)] = frozenset(swept)

    forward = dict(pairs)
    assert set(forward.values()) == set(back), (
        "exceptional holes and vertices fail to match up"
    )
    assert all(back[v] == h for h, v in pairs), (
        "exceptional correspondence is not involutive"
    )
    return pairs


# --- subset classification --------------------------------------------------------


class SubsetClass:
    """Collapse type of a connected edge subset: what shrinking it leaves behind."""

    __slots__ = ("kind", "zst")

    def __init__(self, kind, zst=None):
        if kind == STABLE_BEARING:
            if not zst:
                raise DomainMismatch("a stable-bearing subset carries a nonempty core")
            zst = frozenset(tuple(sorted(e)) for e in zst)
        elif kind in (CONTRACTIBLE, SEMISTABLE):
            if zst is not None:
                raise DomainMismatch(f"{kind} subsets carry no core")
        else:
            raise DomainMismatch(f"unknown subset kind {kind!r}")
        self.kind = kind
        self.zst = zst

    def __eq__(self, other):
        return (
            isinstance(other, SubsetClass)
            and self.kind == other.kind
            and self.zst == other.zst
        )

    def __repr__(self):
        if self.kind == STABLE_BEARING:
            return f"SubsetClass({self.kind}, {sorted(self.zst)})"
        return f"SubsetClass({self.kind})"


def _vertex_orbit(g: RibbonGraph, side):
    return frozenset(perms.orbit_of(g.sigma0, side))


def _subset_valencies(g: RibbonGraph, edges):
    """Incidence count of each touched vertex orbit; loops count twice."""
    val = {}
    for a, b in edges:
        for x in (a, b):
            v = _vertex_orbit(g, x)
            val[v] = val.get(v, 0) + 1
    return val


def _connected_in_graph(g: RibbonGraph, edges):
    parent = {}

    def find(v):
        while parent[v] != v:
            parent[v] = parent[parent[v]]
            v = parent[v]
        return v

    for a, b in edges:
        va, vb = _vertex_orbit(g, a), _vertex_orbit(g, b)
        parent.setdefault(va, va)
        parent.setdefault(vb, vb)
        ra, rb = find(va), find(vb)
        if ra != rb:
            parent[ra] = rb
    return len({find(v) for v in parent}) <= 1


def _marked_vertex_orbits(marking):
    if marking is None:
        return set()
    items = marking.targets.values() if isinstance(marking, Marking) else marking.values()
    return {orb for kind, orb in items if kind == VERTEX}


def _prune_unmarked_tails(g: RibbonGraph, edges, marked_orbits):
    """Drop leaf edges at unmarked univalent vertices until none remain."""
    keep = set(edges)
    while True:
        val = _subset_valencies(g, keep)
        prunable = {v for v, d in val.items() if d == 1 and v not in marked_orbits}
        if not prunable:
            return frozenset(keep)
        for e in list(keep):
            if any(_vertex_orbit(g, x) in prunable for x in e):
                keep.discard(e)


def _classify_edges(g: RibbonGraph, edges, marked_orbits) -> SubsetClass:
    val = _subset_valencies(g, edges)
    n_marked = sum(1 for v in val if v in marked_orbits)
    n_vertices, n_edges = len(val), len(edges)
    if n_edges == n_vertices - 1 and n_marked <= 1:
        return SubsetClass(CONTRACTIBLE)
    if n_edges == n_vertices and n_marked == 0:
        return SubsetClass(SEMISTABLE)
    core = _prune_unmarked_tails(g, edges, marked_orbits)
    assert core, "pruning emptied a stable-bearing subset"
    return SubsetClass(STABLE_BEARING, core)


def classify_subset(g: RibbonGraph, marking, Z) -> SubsetClass:
    """Collapse type of the connected subset Z: tree, circle, or stable-bearing.

    A tree carrying at most one marked vertex contracts to an ordinary
    point; a homotopy circle with no marked vertex pinches; anything else
    keeps a nonempty stable core, obtained by pruning unmarked tails.
    """
    zz = _normalize_edges(g, Z)
    if not zz:
        raise EmptySubset("cannot classify an empty subset")
    if not _connected_in_graph(g, zz):
        raise DisconnectedSubset("subset is not connected in the graph")
    return _classify_edges(g, zz, _marked_vertex_orbits(marking))


# --- stable ribbon graphs ---------------------------------------------------------


class StableGraphData:
    """A disjoint union of marked components glued along an involution.

    ``components[i]`` is a ribbon graph; ``markings[i]`` maps surviving
    labels to (kind, orbit) targets inside it.  ``special`` lists every
    hole plus every marked or exceptional vertex as (component, kind,
    orbit) triples, and ``iota`` is a fixed-point-free involution on the
    unmarked ones, pairing each degenerate hole with the vertex it
    collapsed onto (or two vertices across a discarded sphere).
    ``lengths[i]`` is the stable metric, total 1 per component.
    """

    __slots__ = ("components", "markings", "order", "special", "iota", "lengths")

    def __init__(self, components, markings, order, special, iota, lengths):
        self.components = tuple(components)
        self.markings = tuple(dict(m) for m in markings)
        self.order = tuple(order)
        self.special = tuple(special)
        self.iota = dict(iota)
        self.lengths = tuple(dict(ls) for ls in lengths)

    def labels(self):
        out = set()
        for marks in self.markings:
            out |= set(marks)
        return sorted(out)

    def component_of(self, label) -> int:
        for i, marks in enumerate(self.markings):
            if label in marks:
                return i
        raise DomainMismatch(f"no marking named {label!r}")

    def perimeter(self, label) -> Fraction:
        """Total length around a label's hole; zero for vertex labels."""
        i = self.component_of(label)
        kind, orb = self.markings[i][label]
        if kind == VERTEX:
            return Fraction(0)
        graph = self.components[i]
        return sum(
            (self.lengths[i][graph.edge_of(x)] for x in orb), Fraction(0)
        )

    def __repr__(self):
        sizes = ", ".join(
            f"order {o}: {g.n_edges()} edges" for g, o in zip(self.components, self.order)
        )
        return f"StableGraphData({sizes}; {len(self.iota) // 2} iota pairs)"


class _Piece:
    """One live component during assembly: graph, labels, pairing tokens."""

    __slots__ = ("graph", "marks", "special_holes", "exc_vertices", "order")

    def __init__(self, graph, marks, special_holes, exc_vertices, order):
        self.graph = graph
        self.marks = dict(marks)
        self.special_holes = dict(special_holes)
        self.exc_vertices = dict(exc_vertices)
        self.order = order

    def edges(self):
        return set(self.graph.edges())


def _restrict(graph: RibbonGraph, sides) -> RibbonGraph:
    return RibbonGraph(
        {x: graph.sigma0[x] for x in sides},
        {x: graph.sigma1[x] for x in sides},
        sides,
    )


def _smooth_unmarked_bivalents(graph: RibbonGraph, keep_orbits) -> RibbonGraph:
    """Splice out bivalent vertices whose orbit is not in ``keep_orbits``."""
    s0 = dict(graph.sigma0)
    s1 = dict(graph.sigma1)
    sides = set(graph.sides)
    while True:
        found = None
        for a in sorted(sides):
            b = s0[a]
            if b != a and s0[b] == a and frozenset((a, b)) not in keep_orbits:
                found = (a, b)
                break
        if found is None:
            return RibbonGraph(s0, s1, sides)
        a, b = found
        x, y = s1[a], s1[b]
        if x == b:
            raise DomainMismatch("cannot smooth the only vertex of a circle")
        s1[x] = y
        s1[y] = x
        for z in (a, b):
            del s0[z]
            del s1[z]
            sides.discard(z)


def _spawn_core(piece: _Piece, comp_edges, marked_orbits):
    """Build the next-stage component from a stable collapse piece."""
    core_edges = _prune_unmarked_tails(piece.graph, comp_edges, marked_orbits)
    assert core_edges, "stable collapse piece pruned to nothing"
    core, _ = subgraph(piece.graph, core_edges)
    keep = set()
    for orb in marked_orbits:
        cut = orb & set(core.sides)
        if cut:
            keep.add(frozenset(perms.orbit_of(core.sigma0, min(cut))))
    return _smooth_unmarked_bivalents(core, keep)


def _hole_source_map(sub: RibbonGraph, spawned: RibbonGraph):
    """Match each hole of the spawned graph to the sub-hole it survived from."""
    by_side = {}
    for h in sub.holes():
        hs = frozenset(h)
        for x in hs:
            by_side[x] = hs
    out = {}
    seen = set()
    for h in spawned.holes():
        hs = frozenset(h)
        src = by_side[min(hs)]
        assert hs <= src, "spawned hole is not a remnant of a collapse hole"
        assert src not in seen, "two spawned holes claim the same source"
        seen.add(src)
        out[hs] = src
    return out


def _quotient_piece(piece: _Piece, zr, tokens):
    """Collapse ``zr`` inside one piece; return (finished quo pieces, spawned)."""
    graph = piece.graph
    sub, exc_holes = subgraph(graph, zr)
    quo, exc_verts = quotient(graph, zr)
    vert_of = dict(exceptional_correspondence(graph, zr))
    exc_hole_set = set(exc_holes)
    marked_orbits = _marked_vertex_orbits(piece.marks)
    zr_sides = _zone_sides(zr)

    hole_label = {
        orb: label for label, (kind, orb) in piece.marks.items() if kind == HOLE
    }
    sub_holes_by_side = {}
    for h in sub.holes():
        hs = frozenset(h)
        for x in hs:
            sub_holes_by_side[x] = hs

    consumed = set()
    demoted = {}  # exceptional vertex -> label or None (ordinary after all)
    vertex_token = {}  # exceptional vertex -> pairing token
    spawned = []

    for comp_sides in sub.components():
        comp_edges = {e for e in sub.edges() if e[0] in comp_sides}
        comp_holes = [
            frozenset(h) for h in sub.holes() if frozenset(h) <= comp_sides
        ]
        comp_marked = [
            label
            for label, (kind, orb) in piece.marks.items()
            if kind == VERTEX and orb & comp_sides
        ]
        n_vertices = sum(
            1 for v in sub.vertices() if frozenset(v) <= comp_sides
        )
        n_edges = len(comp_edges)

        if n_edges == n_vertices - 1 and len(comp_marked) <= 1:
            # a tree: its collapse vertex is ordinary, inheriting the one label
            (hole,) = comp_holes
            assert hole in exc_hole_set, "a proper tree piece must scar its hole"
            label = comp_marked[0] if comp_marked else None
            demoted[vert_of[hole]] = label
            consumed.update(comp_marked)
        elif n_edges == n_vertices and not comp_marked:
            # a circle: pinch; the two boundary walks decide what the ends become
            assert len(comp_holes) == 2, "a circle piece must have two holes"
            new_verts = []
            inherited = []
            for hole in comp_holes:
                if hole in exc_hole_set:
                    new_verts.append(vert_of[hole])
                else:
                    inherited.append(hole)
                    consumed.add(hole)
            if len(new_verts) == 2:
                # unstable sphere: discard it, pair its two scars directly
                tok = next(tokens)
                vertex_token[new_verts[0]] = tok
                vertex_token[new_verts[1]] = tok
            else:
                assert len(new_verts) == 1, (
                    "a circle collapse piece must scar at least one hole"
                )
                (vert,) = new_verts
                (hole,) = inherited
                if hole in hole_label:
                    demoted[vert] = hole_label[hole]
                    consumed.add(hole_label[hole])
                else:
                    vertex_token[vert] = piece.special_holes[hole]
        else:
            # a stable core: spawn the next-stage component
            spawn_graph = _spawn_core(piece, comp_edges, marked_orbits)
            spawn_sides = set(spawn_graph.sides)
            source_of = _hole_source_map(sub, spawn_graph)
            marks = {}
            for label, (kind, orb) in piece.marks.items():
                if kind == VERTEX and orb & spawn_sides:
                    marks[label] = (VERTEX, orb & spawn_sides)
                    consumed.add(label)
                elif kind == HOLE and orb <= zr_sides and orb & comp_sides:
                    remnant = orb & spawn_sides
                    assert remnant, "marked hole lost every side in the spawn"
                    marks[label] = (HOLE, remnant)
                    consumed.add(label)
            special = {}
            for hs, src in source_of.items():
                if src in exc_hole_set:
                    tok = next(tokens)
                    special[hs] = tok
                    vertex_token[vert_of[src]] = tok
                elif src in hole_label:
                    pass  # already placed through piece.marks above
                else:
                    special[hs] = piece.special_holes[src]
                    consumed.add(src)
            spawned.append(
                _Piece(spawn_graph, marks, special, {}, piece.order + 1)
            )

    for vert in vert_of.values():
        assert vert in demoted or vert in vertex_token, (
            "an exceptional vertex was left unexplained"
        )

    finished = []
    for comp_sides in quo.components():
        comp_graph = _restrict(quo, comp_sides)
        comp_verts = {frozenset(v) for v in comp_graph.vertices()}
        marks = {}
        for label, (kind, orb) in piece.marks.items():
            if label in consumed:
                continue
            if kind == HOLE:
                remnant = orb & comp_sides
                if remnant:
                    marks[label] = (HOLE, remnant)
            else:
                if orb & comp_sides:
                    assert not (orb & zr_sides), (
                        "an unconsumed vertex label touches the collapse zone"
                    )
                    marks[label] = (VERTEX, orb)
        special = {}
        for hole, tok in piece.special_holes.items():
            if hole in consumed:
                continue
            remnant = hole & comp_sides
            if remnant:
                special[remnant] = tok
        excv = {v: t for v, t in vertex_token.items() if v in comp_verts}
        for vert, label in demoted.items():
            if vert in comp_verts and label is not None:
                marks[label] = (VERTEX, vert)
        finished.append(_Piece(comp_graph, marks, special, excv, piece.order))
    return finished, spawned


def build_stable(
    g: RibbonGraph, marking: Marking, zseq, metrics=None
) -> StableGraphData:
    """Assemble the stable graph determined by a collapse sequence.

    ``zseq[0]`` must be the full edge set; each later entry lives inside
    the components spawned by the previous stage and may not swallow one
    whole.  ``metrics``, if given, maps every edge of every output
    component to a positive length, summing to 1 per component; omitted,
    each component gets the uniform metric.
    """
    if not zseq:
        raise NotPermissible("the sequence must start with the full edge set")
    first = {tuple(sorted(e)) for e in zseq[0]}
    if first != set(g.edges()):
        raise NotPermissible("the sequence must start with the full edge set")

    marks0 = dict(marking.targets)
    tokens = _count(1)
    final = []
    layer = [_Piece(g, marks0, {}, {}, 0)]

    for znext in zseq[1:]:
        if not znext:
            raise NotPermissible("collapse subsets must be nonempty")
        wanted = {tuple(sorted(e)) for e in znext}
        available = set()
        for piece in layer:
            available |= piece.edges()
        stray = wanted - available
        if stray:
            raise NotPermissible(
                f"{sorted(stray)[0]!r} is not an edge of the current stage"
            )
        next_layer = []
        for piece in layer:
            zr = wanted & piece.edges()
            if not zr:
                final.append(piece)
                continue
            if zr == piece.edges():
                raise NotPermissible("a stage may not swallow a whole component")
            finished, spawned = _quotient_piece(piece, zr, tokens)
            final.extend(finished)
            next_layer.extend(spawned)
        layer = next_layer
    final.extend(layer)

    final.sort(key=lambda p: (p.order, min(p.graph.sides)))
    components = [p.graph for p in final]
    markings = [p.marks for p in final]
    order = [p.order for p in final]

    special = []
    token_points = {}
    for i, piece in enumerate(final):
        for h in piece.graph.holes():
            hs = frozenset(h)
            special.append((i, HOLE, hs))
            marked = any(
                kind == HOLE and orb == hs for kind, orb in piece.marks.values()
            )
            if not marked:
                assert hs in piece.special_holes, "an unmarked hole has no partner"
                token_points.setdefault(piece.special_holes[hs], []).append(
                    (i, HOLE, hs)
                )
        for kind, orb in piece.marks.values():
            if kind == VERTEX:
                special.append((i, VERTEX, orb))
        for vert, tok in piece.exc_vertices.items():
            special.append((i, VERTEX, vert))
            token_points.setdefault(tok, []).append((i, VERTEX, vert))

    iota = {}
    for tok, points in token_points.items():
        assert len(points) == 2, f"pairing token {tok} appears {len(points)} time(s)"
        a, b = points
        assert not (a[1] == HOLE and b[1] == HOLE), "iota may never pair two holes"
        iota[a] = b
        iota[b] = a

    lengths = _stable_metric(components, metrics)
    data = StableGraphData(components, markings, order, special, iota, lengths)
    assert order_is_admissible(data), "constructed order fails admissibility"
    return data


def _stable_metric(components, metrics):
    lengths = []
    if metrics is None:
        for graph in components:
            edges = graph.edges()
            lengths.append({e: Fraction(1, len(edges)) for e in edges})
        return lengths
    pool = {tuple(sorted(e)): Fraction(v) for e, v in dict(metrics).items()}
    claimed = set()
    for graph in components:
        here = {}
        for e in graph.edges():
            if e not in pool:
                raise BadMetric(f"no length given for edge {e!r}")
            value = pool[e]
            if value <= 0:
                raise BadMetric(f"edge {e!r} has nonpositive length")
            here[e] = value
            claimed.add(e)
        total = sum(here.values(), Fraction(0))
        if total != 1:
            raise BadMetric(f"component lengths sum to {total}, not 1")
        lengths.append(here)
    unknown = set(pool) - claimed
    if unknown:
        raise BadMetric(f"{sorted(unknown)[0]!r} is not an edge of any component")
    return lengths


def order_is_admissible(data: StableGraphData, order=None) -> bool:
    """Check a candidate order function against the three admissibility rules.

    Order-0 components must contain a marked hole; a component whose
    exceptional points all point at components of order <= k must itself
    have order <= k+1 (and order 0 if it has none); every unmarked hole
    must sit at positive order with its partner a vertex strictly below.
    """
    order = data.order if order is None else tuple(order)
    comp_of = {}
    for point in data.iota:
        comp_of[point] = point[0]

    for i, marks in enumerate(data.markings):
        has_marked_hole = any(kind == HOLE for kind, _ in marks.values())
        if order[i] == 0 and not has_marked_hole:
            return False
        partners = [
            order[data.iota[p][0]] for p in data.iota if p[0] == i
        ]
        if not partners:
            if order[i] != 0:
                return False
        elif order[i] > 1 + max(partners):
            return False

    for point, partner in data.iota.items():
        if point[1] != HOLE:
            continue
        k = order[point[0]]
        if k == 0:
            return False
        if partner[1] != VERTEX or order[partner[0]] > k - 1:
            return False
    return True


def stable_to_json(data: StableGraphData) -> dict:
    """JSON-ready description: components, markings, orders, iota pairs."""

    def point(p):
        return {"component": p[0], "kind": p[1], "orbit": sorted(p[2])}

    comps = []
    for i, graph in enumerate(data.components):
        blob = graph_to_json(graph)
        blob["marking"] = {
            label: {"kind": kind, "orbit": sorted(orb)}
            for label, (kind, orb) in data.markings[i].items()
        }
        blob["lengths"] = {
            f"{a}-{b}": str(data.lengths[i][(a, b)]) for a, b in data.components[i].edges()
        }
        blob["order"] = data.order[i]
        comps.append(blob)
    pairs = []
    seen = set()
    for a, b in data.iota.items():
        key = tuple(sorted((a, b), key=lambda p: (p[0], p[1], min(p[2]))))
        if key in seen:
            continue
        seen.add(key)
        pairs.append([point(key[0]), point(key[1])])
    pairs.sort(key=lambda pr: (pr[0]["component"], pr[0]["orbit"]))
    return {"components": comps, "iota": pairs}
