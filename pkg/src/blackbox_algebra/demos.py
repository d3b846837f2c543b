"""Desk-scale fixtures for amalgamation, reification and augmentation.

Each builder returns plain dictionaries so the CLI can serialise them and
tests can assert on them.  The hidden codebook is used only to *build*
fixtures (Alice's side) and to check results afterwards.
"""

from __future__ import annotations

from .constructions import (
    amalgamate,
    augment,
    conjugation_graph,
    generated_subgroup,
    proto_involution,
    reify,
)
from .core import ElementSet
from .errors import InconsistencyError, NotInnerError
from .explicit import cycles, encrypt, make_cyclic_group, make_direct_product, make_symmetric_group
from .isomorphism import are_isomorphic, tabulate

S4_INVOLUTION = cycles(4, (1, 2), (3, 4))
# t-invariant subgroups generating S4; conjugation by t fixes the first
# pointwise and swaps the generators of the second
S4_LOCAL_GENERATORS = (
    (cycles(4, (1, 2)), cycles(4, (3, 4))),
    (cycles(4, (1, 3)), cycles(4, (2, 4))),
)


def restricted_conjugation(X, gens, t, seed=0):
    """Proto-involution on ``<gens>`` given by conjugation with ``t``."""
    Y = generated_subgroup(X, list(gens), seed=seed)
    ti = X.inv(t)
    pairs = [(g, X.mul(X.mul(ti, g), t)) for g in gens]
    return proto_involution(Y, pairs, seed=seed)


def s4_amalgam(seed: int = 0):
    """Encrypted S4, the two local proto-involutions and their amalgam."""
    S4 = make_symmetric_group(4)
    X, oracle = encrypt(S4, seed)
    enc = lambda perm: oracle.encrypt(S4.index(perm))
    t = enc(S4_INVOLUTION)
    parts = [restricted_conjugation(X, [enc(g) for g in gens], t, seed + i)
             for i, gens in enumerate(S4_LOCAL_GENERATORS)]
    F = amalgamate(parts, X, seed=seed)
    full_gens = [enc(g) for g in (cycles(4, (1, 2, 3, 4)), cycles(4, (1, 2)))]
    reference = conjugation_graph(X, t, full_gens, seed=seed)
    return {"S4": S4, "box": X, "oracle": oracle, "t": t, "parts": parts, "amalgam": F, "reference": reference}


def same_subgroup(G1, G2) -> bool:
    m1 = G1.members()
    m2 = ElementSet(G2.product, G2.members())
    return len(m1) == len(m2) and all(z in m2 for z in m1)


def inconsistent_klein(seed: int = 0):
    """Z2 x Z2 with identity on <a> but a <-> b on the whole group."""
    V = make_direct_product(make_cyclic_group(2), make_cyclic_group(2))
    X, oracle = encrypt(V, seed)
    a, b = oracle.encrypt(2), oracle.encrypt(1)
    F1 = proto_involution(generated_subgroup(X, [a], seed=seed), [(a, a)], seed=seed)
    F2 = proto_involution(X, [(a, b), (b, a)], seed=seed + 1)
    return {"box": X, "oracle": oracle, "parts": [F1, F2]}


def z3_inversion(seed: int = 0):
    """Encrypted Z3 with the proto-involution of the (outer) inversion map."""
    Z3 = make_cyclic_group(3)
    X, oracle = encrypt(Z3, seed)
    F = proto_involution(X, [(oracle.encrypt(1), oracle.encrypt(2))], seed=seed)
    return {"box": X, "oracle": oracle, "F": F}


def demo_amalgamate(seed: int = 0) -> dict:
    fx = s4_amalgam(seed)
    equal = same_subgroup(fx["amalgam"], fx["reference"])
    try:
        amalgamate(inconsistent_klein(seed)["parts"])
        inconsistent = "accepted"
    except InconsistencyError:
        inconsistent = "inconsistency_error"
    return {
        "success": equal and inconsistent == "inconsistency_error",
        "amalgam_order": len(fx["amalgam"].members()),
        "equals_conjugation_graph": equal,
        "inconsistent_fixture": inconsistent,
        "box": fx["box"],
    }


def demo_reify(seed: int = 0) -> dict:
    fx = s4_amalgam(seed)
    X, S4 = fx["box"], fx["S4"]
    t_hat = reify(X, fx["amalgam"])
    order_two = X.equal(X.mul(t_hat, t_hat), X.identity()) and not X.equal(t_hat, X.identity())
    gens = [x for x, _ in fx["amalgam"].pairs]
    matches = same_subgroup(conjugation_graph(X, t_hat, gens, seed=seed), fx["amalgam"])
    # verification only: read the plaintext of the reified involution
    plain = S4.element(fx["oracle"].decrypt(t_hat))
    z3 = z3_inversion(seed)
    try:
        reify(z3["box"], z3["F"])
        outer = "reified"
    except NotInnerError:
        outer = "not_inner"
    return {
        "success": order_two and matches and outer == "not_inner",
        "order_two": order_two,
        "conjugation_graph_matches": matches,
        "reified_plaintext": list(plain),
        "outer_fixture": outer,
        "box": X,
    }


def demo_augment(seed: int = 0) -> dict:
    fx = z3_inversion(seed)
    G = augment(fx["F"], seed=seed)
    sampler = G.clone(seed)
    T = tabulate(G, [sampler.sample() for _ in range(8)])
    S3 = make_symmetric_group(3)
    F_order = len(fx["F"].members())
    swap = fx["F"].box.identity() + b"\x01"
    squares = G.equal(G.mul(swap, swap), G.identity())
    iso = are_isomorphic(T.structure, S3)
    return {
        "success": iso and squares and T.structure.order == 2 * F_order,
        "order": T.structure.order,
        "proto_involution_order": F_order,
        "isomorphic_to_S3": iso,
        "swap_squares_to_identity": squares,
        "box": G,
    }


DEMOS = {"amalgamate": demo_amalgamate, "reify": demo_reify, "augment": demo_augment}
