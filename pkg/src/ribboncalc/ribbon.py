"""Ribbon graphs as permutation pairs, with markings, metrics, and JSON I/O.

A ribbon graph is a pair of permutations (sigma0, sigma1) of a finite set X
of *sides* (oriented edges): sigma0 rotates the sides counterclockwise around
their vertex, sigma1 swaps the two sides of each edge (a fixed-point-free
involution).  The third permutation sigma_inf, defined by

    sigma_inf o sigma1 o sigma0 = identity,

traverses the boundary cycles.  Orbits: vertices = sigma0-orbits, edges =
sigma1-orbits, holes = sigma_inf-orbits.

Worked example (two trivalent vertices, three parallel edges)::

    >>> g = validate([(1, 2, 3), (4, 5, 6)], [(1, 4), (2, 5), (3, 6)])
    >>> g.holes()
    [(1, 6, 2, 4, 3, 5)]
    >>> genus(g)
    1

Swapping one pairing drops the genus::

    >>> genus(validate([(1, 2, 3), (4, 5, 6)], [(1, 4), (2, 6), (3, 5)]))
    0
"""

from __future__ import annotations

from fractions import Fraction

from . import permutations as perms
from .errors import (
    Disconnected,
    DomainMismatch,
    EmptySides,
    FixedPointInvolution,
    LoopContraction,
    NoSuchEdge,
)


def _as_perm(spec, domain):
    """Coerce ``spec`` (dict or iterable of cycles) to a permutation dict on domain."""
    if isinstance(spec, dict):
        if set(spec) != set(domain):
            raise DomainMismatch("permutation keys do not match the side set")
        if not perms.is_permutation(spec):
            raise DomainMismatch("mapping is not a permutation of the side set")
        return dict(spec)
    return perms.from_cycles([tuple(c) for c in spec], domain)


def _mentioned(spec):
    if isinstance(spec, dict):
        return set(spec)
    return {x for cyc in spec for x in cyc}


class RibbonGraph:
    """Immutable-by-convention pair of permutations on a common side set."""

    __slots__ = ("sides", "sigma0", "sigma1", "_sigma_inf")

    def __init__(self, sigma0, sigma1, sides):
        self.sides = tuple(sorted(sides))
        self.sigma0 = sigma0
        self.sigma1 = sigma1
        self._sigma_inf = None

    # -- derived permutations -------------------------------------------------

    @property
    def sigma_inf(self):
        """sigma0^{-1} o sigma1, computed on demand and cached."""
        if self._sigma_inf is None:
            inv0 = perms.inverse(self.sigma0)
            self._sigma_inf = {x: inv0[self.sigma1[x]] for x in self.sides}
        return self._sigma_inf

    # -- orbits ----------------------------------------------------------------

    def vertices(self):
        return perms.cycles(self.sigma0)

    def edges(self):
        """Edges as sorted 2-tuples (a, b) with sigma1(a) = b."""
        return [tuple(sorted(c)) for c in perms.cycles(self.sigma1)]

    def holes(self):
        return perms.cycles(self.sigma_inf)

    def n_vertices(self):
        return len(self.vertices())

    def n_edges(self):
        return len(self.sides) // 2

    def n_holes(self):
        return len(self.holes())

    def edge_of(self, side):
        return tuple(sorted((side, self.sigma1[side])))

    def vertex_of(self, side):
        return min(perms.orbit_of(self.sigma0, side))

    def hole_of(self, side):
        return min(perms.orbit_of(self.sigma_inf, side))

    def valencies(self):
        """Sorted list of vertex valencies."""
        return sorted(len(v) for v in self.vertices())

    # -- connectivity ----------------------------------------------------------

    def components(self):
        """Side sets of the orbits of the group generated by sigma0, sigma1."""
        remaining = set(self.sides)
        comps = []
        while remaining:
            start = min(remaining)
            comp = {start}
            stack = [start]
            while stack:
                x = stack.pop()
                for y in (self.sigma0[x], self.sigma1[x]):
                    if y not in comp:
                        comp.add(y)
                        stack.append(y)
            comps.append(frozenset(comp))
            remaining -= comp
        return comps

    def is_connected(self):
        return len(self.components()) == 1

    def __repr__(self):
        s0 = "".join(str(c) for c in self.vertices())
        s1 = "".join(str(c) for c in perms.cycles(self.sigma1))
        return f"RibbonGraph(sigma0={s0}, sigma1={s1})"


def validate(sigma0, sigma1, sides=None) -> RibbonGraph:
    """Check the ribbon-graph axioms and build the graph.

    ``sigma0`` and ``sigma1`` may be dicts or iterables of cycles.  The side
    set is ``sides`` (an int n meaning 1..n, or an iterable); if omitted it
    is inferred from the elements mentioned by the two permutations.
    """
    if sides is None:
        domain = _mentioned(sigma0) | _mentioned(sigma1)
    elif isinstance(sides, int):
        domain = set(range(1, sides + 1))
    else:
        domain = set(sides)
    if not domain:
        raise EmptySides("a ribbon graph needs a nonempty side set")
    s0 = _as_perm(sigma0, domain)
    s1 = _as_perm(sigma1, domain)
    if not perms.is_fpf_involution(s1):
        raise FixedPointInvolution("sigma1 must be a fixed-point-free involution")
    return RibbonGraph(s0, s1, domain)


def genus(g: RibbonGraph) -> int:
    """(2 - V + E - H) / 2 for a connected graph."""
    if not g.is_connected():
        raise Disconnected("genus of a disconnected graph is ambiguous")
    doubled = 2 - g.n_vertices() + g.n_edges() - g.n_holes()
    assert doubled % 2 == 0 and doubled >= 0, "Euler bookkeeping broke"
    return doubled // 2


def dual(g: RibbonGraph) -> RibbonGraph:
    """The dual graph (X, sigma_inf^{-1}, sigma1); an involution."""
    return RibbonGraph(perms.inverse(g.sigma_inf), g.sigma1, g.sides)


def contract_edge(g: RibbonGraph, e) -> RibbonGraph:
    """Contract the non-loop edge ``e``, splicing its endpoints into one vertex."""
    a, b = tuple(e)
    if g.sigma1.get(a) != b:
        raise NoSuchEdge(f"{e!r} is not an edge of the graph")
    orbit_a = perms.orbit_of(g.sigma0, a)
    if b in orbit_a:
        raise LoopContraction(f"edge {e!r} is a loop")
    orbit_b = perms.orbit_of(g.sigma0, b)
    merged = orbit_a[1:] + orbit_b[1:]
    new_domain = set(g.sides) - {a, b}
    if not new_domain:
        raise EmptySides("contracting the only edge leaves no sides")
    untouched = [c for c in g.vertices() if a not in c and b not in c]
    cycles = untouched + ([tuple(merged)] if merged else [])
    s0 = perms.from_cycles(cycles, new_domain)
    s1 = {x: g.sigma1[x] for x in new_domain}
    return RibbonGraph(s0, s1, new_domain)


# --- markings -----------------------------------------------------------------

HOLE = "hole"
VERTEX = "vertex"


class Marking:
    """Injective map from labels to holes and vertices, covering every hole.

    Targets are stored as (kind, frozenset-of-sides).  Labels are strings.
    """

    __slots__ = ("targets",)

    def __init__(self, graph: RibbonGraph, targets):
        holes = {frozenset(h) for h in graph.holes()}
        verts = {frozenset(v) for v in graph.vertices()}
        norm = {}
        used = set()
        for label, (kind, orbit) in targets.items():
            orb = frozenset(orbit)
            if kind == HOLE:
                if orb not in holes:
                    raise DomainMismatch(f"{label!r}: {sorted(orb)} is not a hole")
            elif kind == VERTEX:
                if orb not in verts:
                    raise DomainMismatch(f"{label!r}: {sorted(orb)} is not a vertex")
            else:
                raise DomainMismatch(f"{label!r}: unknown target kind {kind!r}")
            key = (kind, orb)
            if key in used:
                raise DomainMismatch(f"marking is not injective at {label!r}")
            used.add(key)
            norm[str(label)] = key
        uncovered = holes - {orb for kind, orb in norm.values() if kind == HOLE}
        if uncovered:
            raise DomainMismatch(f"{len(uncovered)} hole(s) left unmarked")
        self.targets = norm

    def labels(self):
        return sorted(self.targets)

    def kind(self, label):
        return self.targets[label][0]

    def orbit(self, label):
        return self.targets[label][1]

    def hole_labels(self):
        return [l for l in self.labels() if self.kind(l) == HOLE]

    def vertex_labels(self):
        return [l for l in self.labels() if self.kind(l) == VERTEX]

    def label_of(self, kind, orbit):
        orb = frozenset(orbit)
        for label, (k, o) in self.targets.items():
            if k == kind and o == orb:
                return label
        return None

    def relabel_sides(self, side_map):
        """The same marking after renaming sides by ``side_map`` (plain dict out)."""
        return {
            label: (kind, frozenset(side_map[x] for x in orb))
            for label, (kind, orb) in self.targets.items()
        }

    def __eq__(self, other):
        return isinstance(other, Marking) and self.targets == other.targets

    def __repr__(self):
        parts = ", ".join(
            f"{l}->{k}{sorted(o)}" for l, (k, o) in sorted(self.targets.items())
        )
        return f"Marking({parts})"


def mark_all_holes(graph: RibbonGraph, labels) -> Marking:
    """Convenience: assign ``labels`` to the holes in min-side order."""
    holes = graph.holes()
    labels = list(labels)
    if len(labels) != len(holes):
        raise DomainMismatch(f"need {len(holes)} labels, got {len(labels)}")
    return Marking(graph, {l: (HOLE, frozenset(h)) for l, h in zip(labels, holes)})


def is_reduced(graph: RibbonGraph, marking: Marking | None) -> bool:
    """Every unmarked vertex has valency >= 3."""
    marked = set()
    if marking is not None:
        marked = {orb for kind, orb in marking.targets.values() if kind == VERTEX}
    return all(
        len(v) >= 3 or frozenset(v) in marked for v in graph.vertices()
    )


# --- metric -------------------------------------------------------------------

class MarkedMetricGraph:
    """A marked ribbon graph with positive rational edge lengths."""

    __slots__ = ("graph", "marking", "lengths")

    def __init__(self, graph: RibbonGraph, marking: Marking, lengths):
        edge_set = set(graph.edges())
        norm = {}
        for e, val in lengths.items():
            e = tuple(sorted(e))
            if e not in edge_set:
                raise NoSuchEdge(f"length given for non-edge {e!r}")
            val = Fraction(val)
            if val <= 0:
                raise DomainMismatch(f"edge {e!r} has non-positive length {val}")
            norm[e] = val
        missing = edge_set - set(norm)
        if missing:
            raise DomainMismatch(f"missing lengths for {sorted(missing)}")
        self.graph = graph
        self.marking = marking
        self.lengths = norm

    def side_length(self, side):
        return self.lengths[self.graph.edge_of(side)]

    def circumference(self, label) -> Fraction:
        """Sum of side lengths along the hole; a vertex mark has perimeter 0."""
        kind, orbit = self.marking.targets[label]
        if kind == VERTEX:
            return Fraction(0)
        return sum(self.side_length(x) for x in orbit)

    def total_length(self) -> Fraction:
        return sum(self.lengths.values())


# --- canonical form -----------------------------------------------------------

def _bfs_code(g: RibbonGraph, marking, root):
    """Traversal code rooted at ``root``: relabeled (sigma0, sigma1, marking)."""
    relabel = {root: 1}
    order = [root]
    for x in order:  # appending while iterating = BFS
        for y in (g.sigma0[x], g.sigma1[x]):
            if y not in relabel:
                relabel[y] = len(order) + 1
                order.append(y)
    if len(order) != len(g.sides):
        raise Disconnected("canonical form needs a connected graph")
    code0 = tuple(relabel[g.sigma0[x]] for x in order)
    code1 = tuple(relabel[g.sigma1[x]] for x in order)
    if marking is None:
        mark_code = ()
    else:
        mark_code = tuple(
            (label, kind, min(relabel[x] for x in orb))
            for label, (kind, orb) in sorted(marking.targets.items())
        )
    return (code0, code1, mark_code), relabel


def canonical_form(g: RibbonGraph, marking: Marking | None = None):
    """Lex-least rooted traversal code and the automorphism count.

    Two marked graphs have equal codes iff they are isomorphic by a side
    relabeling commuting with both permutations and fixing every label's
    target.  |Aut| equals the number of roots attaining the least code: an
    automorphism is determined by the image of one side, so these roots form
    a single free orbit.
    """
    best = None
    count = 0
    for root in g.sides:
        code, _ = _bfs_code(g, marking, root)
        if best is None or code < best:
            best, count = code, 1
        elif code == best:
            count += 1
    return best, count


def canonicalize(g: RibbonGraph, marking: Marking | None = None):
    """Rebuild the graph (and marking) in canonical side labels 1..|X|.

    Returns (graph, marking, aut).  Any minimal root yields the same output.
    """
    best = None
    best_relabel = None
    count = 0
    for root in g.sides:
        code, relabel = _bfs_code(g, marking, root)
        if best is None or code < best:
            best, best_relabel, count = code, relabel, 1
        elif code == best:
            count += 1
    new_g = RibbonGraph(
        perms.conjugate(g.sigma0, best_relabel),
        perms.conjugate(g.sigma1, best_relabel),
        range(1, len(g.sides) + 1),
    )
    new_m = None
    if marking is not None:
        new_m = Marking(new_g, marking.relabel_sides(best_relabel))
    return new_g, new_m, count


# --- rationals and JSON ---------------------------------------------------------

def rational_str(x) -> str:
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


def parse_rational(s) -> Fraction:
    return Fraction(s)


def edge_id(e) -> str:
    a, b = sorted(e)
    return f"{a}-{b}"


def parse_edge_id(s):
    a, b = s.split("-")
    return tuple(sorted((int(a), int(b))))


def graph_to_json(g: RibbonGraph, marking: Marking | None = None, lengths=None) -> dict:
    """Serialize; sides are renumbered to 1..n if not already contiguous."""
    n = len(g.sides)
    if g.sides != tuple(range(1, n + 1)):
        side_map = {x: i + 1 for i, x in enumerate(g.sides)}
        g2 = RibbonGraph(
            perms.conjugate(g.sigma0, side_map),
            perms.conjugate(g.sigma1, side_map),
            range(1, n + 1),
        )
        m2 = Marking(g2, marking.relabel_sides(side_map)) if marking else None
        l2 = None
        if lengths is not None:
            l2 = {
                tuple(sorted((side_map[a], side_map[b]))): v
                for (a, b), v in lengths.items()
            }
        return graph_to_json(g2, m2, l2)
    data = {
        "sides": n,
        "sigma0": [list(c) for c in g.vertices()],
        "sigma1": [list(c) for c in perms.cycles(g.sigma1)],
    }
    if marking is not None:
        data["marking"] = {
            label: {"kind": kind, "orbit": sorted(orb)}
            for label, (kind, orb) in sorted(marking.targets.items())
        }
    if lengths is not None:
        data["lengths"] = {edge_id(e): rational_str(v) for e, v in sorted(lengths.items())}
    return data


def graph_from_json(data):
    """Inverse of graph_to_json; returns (graph, marking-or-None, lengths-or-None)."""
    g = validate(data["sigma0"], data["sigma1"], sides=data["sides"])
    marking = None
    if data.get("marking"):
        marking = Marking(
            g,
            {
                label: (entry["kind"], frozenset(entry["orbit"]))
                for label, entry in data["marking"].items()
            },
        )
    lengths = None
    if data.get("lengths"):
        lengths = {parse_edge_id(k): parse_rational(v) for k, v in data["lengths"].items()}
    return g, marking, lengths
