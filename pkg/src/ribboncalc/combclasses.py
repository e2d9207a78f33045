"""Merging relations between valency loci and kappa/psi monomials.

A point label q with marking order rho(q) pins down a vertex of valency
2*rho(q)+3.  When several labels land on the same vertex the markings merge,
and the locus of graphs carrying the merged vertex enters a linear relation
against kappa/psi monomials: one term per partition of the label set, with
an integer coefficient counting the ways the merge can happen and a second
integer counting the fibers of the map that forgets unkept labels.

``merge_relation`` emits that relation with the loci kept as opaque ring
symbols.  ``kappa_polynomial`` solves the triangular system the relations
form, by induction on the number of non-trivalent vertices, and returns the
kappa-expression of any valency locus.  Everything is exact; coefficients
stay in ``Fraction`` land throughout.
"""

from __future__ import annotations

from collections import Counter
from fractions import Fraction
from math import factorial
from threading import Lock
from typing import NamedTuple, Optional

from .enumeration import Profile
from .errors import (
    DomainMismatch,
    EvenInput,
    InconsistentProfile,
    NegativeCount,
)
from .tautring import ONE, TautPoly, kappa, kappa_cycle_sum, psi, symbol

__all__ = [
    "RhoAssignment",
    "SetPartition",
    "Relation",
    "OneVertexRelation",
    "TwoVertexCheck",
    "all_partitions",
    "ambient_genus",
    "ambient_surface",
    "delta_class",
    "double_factorial",
    "forget_multiplicity",
    "kappa_polynomial",
    "merge_coefficient",
    "merge_relation",
    "node_class",
    "one_vertex_relation",
    "partition_coefficient",
    "tails_class",
    "two_vertex_check",
    "valency_class",
]


# --- small exact arithmetic ---------------------------------------------------

def double_factorial(n) -> int:
    """n!! for odd n >= -1, with the usual convention (-1)!! == 1."""
    n = int(n)
    if n % 2 == 0:
        raise EvenInput(f"double factorial of even {n}")
    if n < -1:
        raise DomainMismatch("double factorial needs n >= -1")
    out = 1
    for k in range(n, 1, -2):
        out *= k
    return out


def merge_coefficient(rho_sum, block_size) -> int:
    """Ways a block of ``block_size`` markings merges onto one vertex.

    Equals (2*rho_sum + 2h - 1)!! / (2*rho_sum + 1)!! for h = block_size,
    which telescopes to an integer product; a singleton block counts 1.
    """
    rho_sum, block_size = int(rho_sum), int(block_size)
    if block_size < 1:
        raise DomainMismatch("blocks are nonempty")
    if rho_sum < 0:
        raise DomainMismatch("marking orders are nonnegative")
    out = 1
    for t in range(rho_sum + 1, rho_sum + block_size):
        out *= 2 * t + 1
    return out


# --- marking data and partitions of the label set ------------------------------

class RhoAssignment:
    """Marking orders q -> rho(q) >= 0 on a finite label set."""

    __slots__ = ("_map",)

    def __init__(self, mapping):
        clean = {}
        for q, v in dict(mapping).items():
            v = int(v)
            if v < 0:
                raise DomainMismatch("negative marking orders are not supported")
            clean[str(q)] = v
        self._map = clean

    def labels(self) -> tuple:
        return tuple(sorted(self._map))

    def value(self, q) -> int:
        try:
            return self._map[str(q)]
        except KeyError:
            raise DomainMismatch(f"label {q!r} carries no marking") from None

    def as_dict(self) -> dict:
        return dict(self._map)

    def count(self, i) -> int:
        """How many labels have marking order i."""
        return sum(1 for v in self._map.values() if v == i)

    def total(self) -> int:
        return sum(self._map.values())

    def __len__(self):
        return len(self._map)

    def __contains__(self, q):
        return str(q) in self._map

    def __eq__(self, other):
        return isinstance(other, RhoAssignment) and self._map == other._map

    def __repr__(self):
        inner = ", ".join(f"{q}: {v}" for q, v in sorted(self._map.items()))
        return f"RhoAssignment({{{inner}}})"


def _coerce_rho(rho) -> RhoAssignment:
    return rho if isinstance(rho, RhoAssignment) else RhoAssignment(rho)


class SetPartition:
    """A partition of a finite label set into nonempty blocks."""

    __slots__ = ("blocks",)

    def __init__(self, blocks):
        out = []
        seen = set()
        for b in blocks:
            fs = frozenset(str(x) for x in b)
            if not fs:
                raise DomainMismatch("partition blocks are nonempty")
            if fs & seen:
                raise DomainMismatch("partition blocks overlap")
            seen |= fs
            out.append(fs)
        self.blocks = tuple(sorted(out, key=sorted))

    @staticmethod
    def discrete(labels) -> "SetPartition":
        return SetPartition([x] for x in labels)

    def ground(self) -> frozenset:
        return frozenset().union(*self.blocks) if self.blocks else frozenset()

    def is_discrete(self) -> bool:
        return all(len(b) == 1 for b in self.blocks)

    def block_of(self, q) -> frozenset:
        q = str(q)
        for b in self.blocks:
            if q in b:
                return b
        raise DomainMismatch(f"label {q!r} not in the partition")

    def splits(self, subset) -> bool:
        """Whether every block meets ``subset`` in at most one label."""
        s = {str(x) for x in subset}
        return all(len(b & s) <= 1 for b in self.blocks)

    def __len__(self):
        return len(self.blocks)

    def __eq__(self, other):
        return isinstance(other, SetPartition) and self.blocks == other.blocks

    def __hash__(self):
        return hash(frozenset(self.blocks))

    def __repr__(self):
        inner = ", ".join("{" + ", ".join(sorted(b)) + "}" for b in self.blocks)
        return f"SetPartition([{inner}])"


def all_partitions(labels):
    """Yield every partition of the labels (Bell-number many)."""
    items = sorted({str(x) for x in labels})

    def rec(rest):
        if not rest:
            yield []
            return
        first, tail = rest[0], rest[1:]
        for sub in rec(tail):
            yield [[first]] + sub
            for k in range(len(sub)):
                yield sub[:k] + [sub[k] + [first]] + sub[k + 1:]

    for raw in rec(items):
        yield SetPartition(raw)


def partition_coefficient(rho, M: SetPartition) -> int:
    """Product of merge coefficients over the blocks of M; 1 on discrete M."""
    rho = _coerce_rho(rho)
    out = 1
    for b in M.blocks:
        out *= merge_coefficient(sum(rho.value(q) for q in b), len(b))
    return out


def _merged_counts(rho: RhoAssignment, M: SetPartition) -> Counter:
    """Counter i -> number of blocks with merged order i."""
    return Counter(sum(rho.value(q) for q in b) for b in M.blocks)


def forget_multiplicity(m_star, M: SetPartition, rho, kept=()) -> int:
    """Fiber count of the map forgetting the labels of blocks missing ``kept``.

    ``m_star`` is the merged valency profile, trivalent slot included.  The
    count is the product over i of (m_i - [kept marks of order i])! divided
    by (m_0 - [blocks of merged order 0])!, a falling factorial once the
    common factors cancel.
    """
    rho = _coerce_rho(rho)
    prof = m_star if isinstance(m_star, Profile) else Profile(m_star)
    kept = {str(x) for x in kept}
    labels = set(rho.labels())
    if M.ground() != labels:
        raise DomainMismatch("partition does not cover the marked labels")
    if not kept <= labels:
        raise DomainMismatch("kept labels must be marked")
    if not M.splits(kept):
        raise DomainMismatch("a block holds two kept labels")

    merged = _merged_counts(rho, M)
    tau = Counter(sum(rho.value(q) for q in M.block_of(q)) for q in kept)
    for i in tau:
        if i >= len(prof.m):
            raise NegativeCount(f"profile has no vertex of valency {2 * i + 3}")

    m0 = prof.m[0] if prof.m else 0
    hi = m0 - tau.get(0, 0)
    lo = m0 - merged.get(0, 0)
    if lo < 0:
        raise NegativeCount("more merged trivalent markings than trivalent slots")
    out = 1
    for t in range(lo + 1, hi + 1):
        out *= t
    for i in range(1, len(prof.m)):
        d = prof.m[i] - tau.get(i, 0)
        if d < 0:
            raise NegativeCount(f"kept markings exceed the valency-{2 * i + 3} count")
        out *= factorial(d)
    return out


# --- opaque class symbols -------------------------------------------------------

def valency_class(valencies, tau=None, weight=None) -> TautPoly:
    """The locus of graphs with the given odd non-generic valencies.

    ``tau`` maps labels to marking orders and pins that many of the vertices
    (a label of order i sits on a vertex of valency 2i+3, which must be
    available).  The all-trivalent unmarked locus is the whole space, so it
    comes back as the constant 1.
    """
    prof = valencies if isinstance(valencies, Profile) else Profile.from_valencies(valencies)
    tau = {str(q): int(v) for q, v in dict(tau or {}).items()}
    if any(v < 0 for v in tau.values()):
        raise DomainMismatch("marking orders are nonnegative")
    need = Counter(tau.values())
    for i, cnt in need.items():
        have = prof.m[i] if i < len(prof.m) else 0
        if i >= 1 and have < cnt:
            raise DomainMismatch(f"profile has {have} vertices of valency {2 * i + 3}, {cnt} marked")
    high = [v for v in prof.valencies() if v > 3]
    if not high and not tau:
        return ONE
    name = "locus"
    if high:
        name += "_" + ",".join(str(v) for v in high)
    if tau:
        name += ";" + ",".join(f"{q}={tau[q]}" for q in sorted(tau))
    if weight is None:
        weight = sum(i * mi for i, mi in enumerate(prof.m)) + len(tau)
    return symbol(name, weight)


def tails_class(M: SetPartition, rho, weight=None) -> TautPoly:
    """Locus where each block's labels sit on a bubble at one merged vertex."""
    rho = _coerce_rho(rho)
    if M.ground() != set(rho.labels()):
        raise DomainMismatch("partition does not cover the marked labels")
    parts = []
    for b in M.blocks:
        parts.append(".".join(sorted(b)) + "=" + str(sum(rho.value(q) for q in b)))
    if weight is None:
        weight = sum(rho.value(q) + 1 for q in rho.labels())
    return symbol("tails;" + "/".join(parts), weight)


def node_class(v1, v2, label=None, weight=None) -> TautPoly:
    """Nodal locus joining a valency-v1 vertex to a valency-v2 vertex.

    With ``label`` the node carries a labeled sphere component between the
    two vertices; this version is one weight heavier.
    """
    v1, v2 = sorted((int(v1), int(v2)))
    if v1 < 1 or v1 % 2 == 0 or v2 % 2 == 0:
        raise DomainMismatch("node valencies are odd and positive")
    r = (v1 + v2) // 2
    name = f"node_{v1},{v2}"
    if label is not None:
        name += f";{label}"
    if weight is None:
        weight = r + 1 if label is not None else r
    return symbol(name, weight)


def delta_class(tag, weight, label=None) -> TautPoly:
    """Opaque boundary-divisor symbol, e.g. delta_class("irr", 1)."""
    name = f"delta_{tag}"
    if label is not None:
        name += f";{label}"
    return symbol(name, weight)


# --- the relations ---------------------------------------------------------------

class Relation(NamedTuple):
    lhs: TautPoly
    rhs: TautPoly

    def difference(self) -> TautPoly:
        return self.lhs - self.rhs


class OneVertexRelation(NamedTuple):
    psi_form: Relation
    kappa_form: Optional[Relation]


def one_vertex_relation(r, label="q") -> OneVertexRelation:
    """Relation satisfied by the locus with a single marked (2r+3)-valent vertex.

    The psi form holds for r >= -1 and equates the locus plus its nodal
    correction terms with (2r+2)!/(r+1)! times psi^(r+1).  Pushing the label
    forward gives the kappa form with right side 2^(r+1)*(2r+1)!!*kappa_r,
    available for r >= 1.  Both coefficients agree; that identity is checked
    here rather than trusted.
    """
    r = int(r)
    if r < -1:
        raise DomainMismatch("marking order r >= -1 required")
    coeff = factorial(2 * r + 2) // factorial(r + 1)
    assert coeff == 2 ** (r + 1) * double_factorial(2 * r + 1)
    if r == -1:
        # a univalent marked vertex imposes nothing at all
        return OneVertexRelation(Relation(ONE, ONE), None)

    corrections = Counter()
    for i in range(r):
        j = r - 1 - i
        key = tuple(sorted((2 * i + 1, 2 * j + 1)))
        corrections[key] += (2 * i + 1) * (2 * j + 1)

    lhs = valency_class([2 * r + 3], {label: r})
    for (v1, v2), c in sorted(corrections.items()):
        lhs = lhs + c * node_class(v1, v2, label=label)
    psi_form = Relation(lhs, coeff * psi(label) ** (r + 1))
    if r < 1:
        return OneVertexRelation(psi_form, None)

    klhs = valency_class([2 * r + 3])
    for (v1, v2), c in sorted(corrections.items()):
        klhs = klhs + c * node_class(v1, v2)
    kappa_form = Relation(klhs, coeff * kappa(r))
    return OneVertexRelation(psi_form, kappa_form)


def merge_relation(g, P, rho, kept=()) -> Relation:
    """The merging relation for marked vertices on genus-g graphs with holes P.

    Labels in ``kept`` stay as psi factors on the left and as markings of the
    right-hand loci; the rest are summed out into kappa cycle sums.  With
    every label kept nothing is forgotten and the right side runs over all
    partitions of the label set, the non-discrete ones as bubble-tail loci
    weighted by the merge coefficient alone.  Otherwise the sum runs over
    partitions separating the kept labels and each term also picks up its
    forgetful fiber count.
    """
    rho = _coerce_rho(rho)
    holes = [str(p) for p in P]
    if not holes:
        raise InconsistentProfile("need at least one hole")
    if len(set(holes)) != len(holes):
        raise DomainMismatch("duplicate hole labels")
    labels = set(rho.labels())
    if labels & set(holes):
        raise DomainMismatch("marking labels collide with hole labels")
    kept = {str(x) for x in kept}
    if not kept <= labels:
        raise DomainMismatch("kept labels must be marked")

    n = len(holes)
    total = 4 * g - 4 + 2 * n
    spent = sum(2 * rho.value(q) + 1 for q in labels)
    base_m0 = total - spent
    if base_m0 < rho.count(0):
        raise InconsistentProfile(
            f"profile needs {spent} of 4g-4+2n = {total} plus a trivalent slot per order-0 label"
        )

    scale = 1
    for q in labels:
        scale *= 2 ** (rho.value(q) + 1) * double_factorial(2 * rho.value(q) + 1)
    lhs = TautPoly.constant(scale)
    for q in sorted(kept):
        lhs = lhs * psi(q) ** (rho.value(q) + 1)
    lhs = lhs * kappa_cycle_sum([rho.value(q) for q in sorted(labels - kept)])

    rhs = TautPoly()
    if kept == labels:
        for M in all_partitions(labels):
            if M.is_discrete():
                vals = [2 * rho.value(q) + 3 for q in labels]
                term = valency_class(vals, rho.as_dict())
            else:
                term = partition_coefficient(rho, M) * tails_class(M, rho)
            rhs = rhs + term
        return Relation(lhs, rhs)

    for M in all_partitions(labels):
        if not M.splits(kept):
            continue
        merged = _merged_counts(rho, M)
        # trivalent vertices (marked ones included) soak up the leftover weight
        m0 = total - sum((2 * i + 1) * cnt for i, cnt in merged.items() if i >= 1)
        size = max((i for i in merged if i >= 1), default=0) + 1
        m_star = Profile([m0] + [merged.get(i, 0) for i in range(1, size)])
        mult = forget_multiplicity(m_star, M, rho, kept)
        tau = {q: sum(rho.value(x) for x in M.block_of(q)) for q in kept}
        vals = [2 * i + 3 for i, cnt in merged.items() if i >= 1 for _ in range(cnt)]
        vals += [3] * sum(1 for v in tau.values() if v == 0)
        term = valency_class(vals, tau)
        rhs = rhs + mult * partition_coefficient(rho, M) * term
    return Relation(lhs, rhs)


# --- the solver -------------------------------------------------------------------

_SOLVED: dict = {}
_SOLVED_LOCK = Lock()


def _solve(tail) -> TautPoly:
    """Kappa polynomial for the profile with m_i = tail[i-1] big vertices."""
    hit = _SOLVED.get(tail)
    if hit is not None:
        return hit

    rho = {}
    for i, mi in enumerate(tail, start=1):
        for k in range(mi):
            rho[f"v{len(rho) + 1}"] = i
    rho = RhoAssignment(rho)
    labels = rho.labels()

    scale = 1
    for q in labels:
        scale *= 2 ** (rho.value(q) + 1) * double_factorial(2 * rho.value(q) + 1)
    acc = scale * kappa_cycle_sum([rho.value(q) for q in labels])

    for M in all_partitions(labels):
        if M.is_discrete():
            continue
        merged = _merged_counts(rho, M)
        sub_tail = tuple(merged.get(i, 0) for i in range(1, max(merged) + 1))
        mult = 1
        for i, cnt in merged.items():
            if i >= 1:
                mult *= factorial(cnt)
        acc = acc - mult * partition_coefficient(rho, M) * _solve(sub_tail)

    denom = 1
    for mi in tail:
        denom *= factorial(mi)
    result = acc * Fraction(1, denom)
    with _SOLVED_LOCK:
        return _SOLVED.setdefault(tail, result)


def kappa_polynomial(m_star, g, n) -> TautPoly:
    """Exact kappa-expression of the valency locus with profile ``m_star``.

    The trivalent entry may be left at 0, in which case it is derived from
    (g, n); a nonzero entry must match the derived value.  The result never
    depends on which consistent (g, n) was supplied.
    """
    prof = m_star if isinstance(m_star, Profile) else Profile(m_star)
    if n < 1 or g < 0:
        raise InconsistentProfile("need g >= 0 and at least one hole")
    total = 4 * g - 4 + 2 * n
    if total <= 0:
        raise InconsistentProfile(f"no graphs for (g, n) = ({g}, {n})")
    spent = sum((2 * i + 1) * mi for i, mi in enumerate(prof.m) if i >= 1)
    derived = total - spent
    if derived < 0:
        raise InconsistentProfile(f"profile weight {spent} exceeds 4g-4+2n = {total}")
    declared = prof.m[0] if prof.m else 0
    if declared not in (0, derived):
        raise InconsistentProfile(f"trivalent count {declared} should be {derived}")
    return _solve(prof.m[1:])


def ambient_surface(m_star):
    """Smallest (g, n) whose cell complex realizes the profile.

    A nonzero trivalent entry pins the weight exactly; left at zero, it
    pads out whatever the bigger vertices leave over, so only those
    constrain the choice.  ``kappa_polynomial`` gives the same answer for
    every consistent pick, this is just a default.
    """
    prof = m_star if isinstance(m_star, Profile) else Profile(m_star)
    spent = sum((2 * i + 1) * mi for i, mi in enumerate(prof.m) if i >= 1)
    declared = prof.m[0] if prof.m else 0
    if declared:
        w = spent + declared
        if w % 2:
            raise InconsistentProfile(f"total weight {w} is odd; no surface fits")
        n = 1 if w % 4 == 2 else 2
        return (w + 4 - 2 * n) // 4, n
    return max(1, -(-(spent + 2) // 4)), 1


def ambient_genus(rho, n_holes=1) -> int:
    """Smallest genus whose complex with ``n_holes`` holes fits the markings.

    Each label of order r needs a (2r+3)-valent vertex, and order-0 labels
    additionally need a trivalent slot left over.
    """
    rho = _coerce_rho(rho)
    n = int(n_holes)
    if n < 1:
        raise DomainMismatch("need at least one hole")
    spent = sum(2 * rho.value(q) + 1 for q in rho.labels())
    g = max(0, -(-(spent + rho.count(0) + 4 - 2 * n) // 4))
    while 4 * g - 4 + 2 * n <= 0:
        g += 1
    return g


class TwoVertexCheck(NamedTuple):
    solved: TautPoly
    formula: TautPoly
    agree: bool


def two_vertex_check(a, b) -> TwoVertexCheck:
    """Cross-check the solver on the two-big-vertex profile {2a+3, 2b+3}.

    The closed formula is
        [2^(a+b+2) (2a+1)!! (2b+1)!! (k_a k_b + k_{a+b})
         - 2^(a+b+1) (2a+2b+3)!! k_{a+b}] / (2 if a == b else 1)
    and the halving accounts for the two vertices being interchangeable.
    """
    a, b = int(a), int(b)
    if a < 1 or b < 1:
        raise DomainMismatch("two-vertex check needs a, b >= 1")
    tail = [0] * max(a, b)
    tail[a - 1] += 1
    tail[b - 1] += 1
    prof = Profile([0] + tail)
    # any (g, n) wide enough to hold the profile will do
    g = (prof.weight() + 5) // 4
    solved = kappa_polynomial(prof, g, 1)
    formula = 2 ** (a + b + 2) * double_factorial(2 * a + 1) * double_factorial(2 * b + 1) * (
        kappa(a) * kappa(b) + kappa(a + b)
    ) - 2 ** (a + b + 1) * double_factorial(2 * a + 2 * b + 3) * kappa(a + b)
    formula = formula * Fraction(1, 2 if a == b else 1)
    return TwoVertexCheck(solved, formula, solved == formula)
