"""Permutations of finite side sets, represented as plain dicts.

A permutation is a dict mapping every element of its domain to its image.
Sides are 1-based integers throughout the package, but nothing here cares:
any hashable keys work, which lets subgraphs keep the parent's side names.

Cycle notation round-trip::

    >>> p = from_cycles([(1, 2, 3), (4, 6)], domain=range(1, 7))
    >>> p[3], p[5], p[6]
    (1, 5, 4)
    >>> cycles(p)
    [(1, 2, 3), (4, 6)]

``cycles`` lists every orbit (fixed points included as 1-cycles), each
rotated so its minimum comes first, sorted by that minimum.
"""

from __future__ import annotations

from .errors import DomainMismatch


def from_cycles(cycle_list, domain):
    """Build a permutation dict from disjoint cycles; unmentioned points stay fixed."""
    perm = {x: x for x in domain}
    seen = set()
    for cyc in cycle_list:
        for x in cyc:
            if x not in perm:
                raise DomainMismatch(f"cycle element {x!r} outside domain")
            if x in seen:
                raise DomainMismatch(f"element {x!r} appears in two cycles")
            seen.add(x)
        for i, x in enumerate(cyc):
            perm[x] = cyc[(i + 1) % len(cyc)]
    return perm


def cycles(perm):
    """Orbits of ``perm`` as min-first tuples, sorted by minimum element."""
    seen = set()
    out = []
    for start in sorted(perm):
        if start in seen:
            continue
        orbit = [start]
        seen.add(start)
        x = perm[start]
        while x != start:
            orbit.append(x)
            seen.add(x)
            x = perm[x]
        out.append(tuple(orbit))
    return out


def compose(f, g):
    """The permutation x -> f(g(x)). Domains must agree."""
    if f.keys() != g.keys():
        raise DomainMismatch("composing permutations on different domains")
    return {x: f[g[x]] for x in g}


def inverse(perm):
    return {y: x for x, y in perm.items()}


def is_permutation(perm):
    return set(perm.values()) == set(perm.keys())


def is_fpf_involution(perm):
    """True iff ``perm`` is an involution without fixed points."""
    return all(y != x and perm[y] == x for x, y in perm.items())


def restrict_first_return(perm, subset):
    """First-return map of ``perm`` on ``subset``.

    Sends x in subset to perm^k(x) for the least k >= 1 landing in subset.
    Well-defined because every orbit visiting subset returns to it.
    """
    sub = set(subset)
    out = {}
    for x in sub:
        y = perm[x]
        while y not in sub:
            y = perm[y]
        out[x] = y
    return out


def orbit_of(perm, start):
    """The orbit of ``start`` as a tuple beginning at ``start``."""
    orbit = [start]
    x = perm[start]
    while x != start:
        orbit.append(x)
        x = perm[x]
    return tuple(orbit)


def conjugate(perm, relabel):
    """relabel o perm o relabel^{-1}, i.e. the same permutation on renamed points."""
    return {relabel[x]: relabel[y] for x, y in perm.items()}
