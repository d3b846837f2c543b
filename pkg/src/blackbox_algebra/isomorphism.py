"""Isomorphism search between small explicit groups, and box tabulation.

Maps are lists ``m`` with ``m[a]`` the image of index ``a``.  The search
fixes a generating tuple of the source, tries every order-compatible image
tuple in the target and extends along the Cayley graph; a map consistent on
every Cayley edge is a homomorphism.
"""

from __future__ import annotations

import itertools
from collections import Counter

from .core import GROUP, BlackBox, CryptoElement, ElementSet, enumerate_closure
from .explicit import ExplicitStructure, _index_closure, _small_generating_set


def generating_tuple(A: ExplicitStructure) -> tuple[int, ...]:
    """A's declared generators if they generate, else a greedy small set."""
    if A.order == 1:
        return ()
    if A.generators and len(_index_closure(A, A.generators)) == A.order:
        return tuple(A.generators)
    return _small_generating_set(A)


def order_profile(A: ExplicitStructure) -> Counter:
    return Counter(A.element_order(a) for a in range(A.order))


def _orders(A):
    return [A.element_order(a) for a in range(A.order)]


def extend_homomorphism(A, B, gens, images):
    """Extend ``gens -> images`` along A's Cayley graph; None on conflict."""
    m = [-1] * A.order
    e = A.identity
    m[e] = B.identity
    frontier = [e]
    while frontier:
        nxt = []
        for a in frontier:
            for g, h in zip(gens, images):
                c = A.mul(a, g)
                d = B.mul(m[a], h)
                if m[c] == -1:
                    m[c] = d
                    nxt.append(c)
                elif m[c] != d:
                    return None
        frontier = nxt
    return m


def find_isomorphisms(A: ExplicitStructure, B: ExplicitStructure, gens=None, fixed=None, limit=None):
    """Yield isomorphisms A -> B.

    ``fixed`` maps some source indices to required images; when a fixed
    index is one of the generators its image is pinned during the search,
    otherwise it filters completed maps.
    """
    if A.order != B.order:
        return
    if A.order == 1:
        yield [B.identity]
        return
    gens = tuple(gens) if gens is not None else generating_tuple(A)
    fixed = dict(fixed or {})
    a_orders = _orders(A)
    b_orders = _orders(B)
    if Counter(a_orders) != Counter(b_orders):
        return
    by_order: dict[int, list[int]] = {}
    for b, o in enumerate(b_orders):
        by_order.setdefault(o, []).append(b)
    pools = []
    for g in gens:
        if g in fixed:
            pools.append([fixed[g]] if b_orders[fixed[g]] == a_orders[g] else [])
        else:
            pools.append(by_order[a_orders[g]])
    count = 0
    for images in itertools.product(*pools):
        m = extend_homomorphism(A, B, gens, images)
        if m is None or -1 in m or len(set(m)) != B.order:
            continue
        if any(m[a] != b for a, b in fixed.items()):
            continue
        yield m
        count += 1
        if limit is not None and count >= limit:
            return


def are_isomorphic(A: ExplicitStructure, B: ExplicitStructure) -> bool:
    return next(find_isomorphisms(A, B), None) is not None


def automorphisms(A: ExplicitStructure, fixed=None) -> list[list[int]]:
    return list(find_isomorphisms(A, A, fixed=fixed))


def invert_map(m: list[int]) -> list[int]:
    out = [0] * len(m)
    for a, b in enumerate(m):
        out[b] = a
    return out


class Tabulation:
    """Explicit copy of the subgroup of a canonical group box spanned by ``gens``.

    ``structure`` is an :class:`ExplicitStructure` whose index ``i`` stands
    for ``elements[i]``; products are computed through the box and cached.
    """

    def __init__(self, X: BlackBox, gens: list[CryptoElement], cap: int):
        self.box = X
        self.elements = enumerate_closure(X, gens, cap)
        self.index = ElementSet(X, self.elements)
        n = len(self.elements)
        cache: dict[tuple[int, int], int] = {}
        inv_cache: dict[int, int] = {}
        els, find = self.elements, self.index.find

        def product(a, b):
            key = (a, b)
            if key not in cache:
                cache[key] = find(X.mul(els[a], els[b]))
            return cache[key]

        def inverse(a):
            if a not in inv_cache:
                inv_cache[a] = find(X.inv(els[a]))
            return inv_cache[a]

        e = find(X.identity())
        ops = {"product": product, "inverse": inverse, "identity": lambda: e}
        gen_idx = tuple(find(g) for g in gens)
        self.structure = ExplicitStructure(GROUP, n, ops, f"table({X.name})", None, gen_idx)

    def find(self, x: CryptoElement) -> int | None:
        return self.index.find(x)


def tabulate(X: BlackBox, gens: list[CryptoElement], cap: int = 10**4) -> Tabulation:
    return Tabulation(X, gens, cap)
