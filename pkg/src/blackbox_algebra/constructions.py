"""New black boxes from old: products, images, subgroups and morphism graphs.

Pairs of cryptoelements are plain concatenations ``x + y``; a product box
remembers the left length so it can split them again.  Graph subgroups and
proto-involutions are generated subgroups of such products.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Callable

from .core import (
    GROUP,
    BlackBox,
    CryptoElement,
    ElementSet,
    enumerate_closure,
    uniform_sampler_factory,
)
from .errors import (
    CapExceededError,
    ContractViolation,
    InconsistencyError,
    NotInnerError,
    SignatureError,
    ValidationError,
)
from .sampling import DEFAULT_BURN_IN, pr_sampler_factory

DEFAULT_CAP = 10**4
DEFAULT_TRIALS = 200


def derive_seed(seed: int, tag: str) -> int:
    return random.Random(f"{seed}/{tag}").getrandbits(62)


def _require_group(*boxes):
    for B in boxes:
        if B.signature.kind != "group":
            raise SignatureError(f"{B.name} is a {B.signature.kind} box; a group box is required")


class PairBox(BlackBox):
    """Box on concatenated pairs; ``split`` and ``pair`` convert."""

    left_length: int

    def split(self, z: CryptoElement) -> tuple[CryptoElement, CryptoElement]:
        return z[: self.left_length], z[self.left_length :]

    def pair(self, x: CryptoElement, y: CryptoElement) -> CryptoElement:
        return x + y


def _pair_sampler_factory(X, Y):
    def factory(seed):
        xs = X.clone(derive_seed(seed, "left"))
        ys = Y.clone(derive_seed(seed, "right"))
        return lambda: xs.sample() + ys.sample()

    return factory


def _make_pair_box(X, Y, ops, equality, sampler_factory, seed, name, provenance="product"):
    box = PairBox(
        GROUP,
        X.length + Y.length,
        sampler_factory,
        ops,
        equality,
        seed=seed,
        canonical=equality is None,
        name=name,
        provenance=provenance,
    )
    box.left_length = X.length
    box.left, box.right = X, Y
    return box


def direct_product(X: BlackBox, Y: BlackBox, seed: int = 0) -> PairBox:
    """X x Y: independent sampling, componentwise operations and equality."""
    _require_group(X, Y)
    lx = X.length

    def product(a, b):
        return X.mul(a[:lx], b[:lx]) + Y.mul(a[lx:], b[lx:])

    ops = {
        "product": product,
        "inverse": lambda a: X.inv(a[:lx]) + Y.inv(a[lx:]),
        "identity": lambda: X.identity() + Y.identity(),
    }
    equality = None
    if not (X.canonical and Y.canonical):
        equality = lambda a, b: X.equal(a[:lx], b[:lx]) and Y.equal(a[lx:], b[lx:])
    return _make_pair_box(X, Y, ops, equality, _pair_sampler_factory(X, Y), seed, f"{X.name}x{Y.name}")


def _delegated_ops(X: BlackBox) -> dict:
    return {op.name: (lambda name: lambda *a: X.apply(name, *a))(op.name) for op in X.signature.operations}


def homomorphic_image(
    X: BlackBox,
    eq: Callable[[CryptoElement, CryptoElement], bool],
    validate: int = DEFAULT_TRIALS,
    seed: int = 0,
) -> BlackBox:
    """Same strings and operations as ``X``, equality replaced by the congruence ``eq``.

    ``validate`` random elements are drawn; every pair they contain that
    ``eq`` identifies is checked against each operation.
    """
    image = BlackBox(
        X.signature,
        X.length,
        lambda s: X.clone(s).sample,
        _delegated_ops(X),
        eq,
        seed=seed,
        canonical=False,
        name=f"{X.name}/~",
        provenance=X.provenance,
    )
    if validate:
        check_congruence(X, eq, validate, seed)
    return image


def check_congruence(X: BlackBox, eq, samples: int, seed: int = 0, max_pairs: int = 2000) -> None:
    rng = random.Random(derive_seed(seed, "congruence"))
    sampler = X.clone(derive_seed(seed, "congruence-sampler"))
    xs = [sampler.sample() for _ in range(samples)]
    binary = [op.name for op in X.signature.operations if op.arity == 2]
    unary = [op.name for op in X.signature.operations if op.arity == 1]
    for x in xs[:50]:
        if not eq(x, x):
            raise ContractViolation("equality is not reflexive")
    checked = 0
    for i in range(len(xs)):
        for j in range(i + 1, len(xs)):
            if checked >= max_pairs:
                return
            a, b = xs[i], xs[j]
            if not eq(a, b):
                continue
            if not eq(b, a):
                raise ContractViolation("equality is not symmetric")
            checked += 1
            y = xs[rng.randrange(len(xs))]
            for op in binary:
                if not eq(X.apply(op, a, y), X.apply(op, b, y)) or not eq(
                    X.apply(op, y, a), X.apply(op, y, b)
                ):
                    raise ContractViolation(f"equality is not a congruence for {op}")
            for op in unary:
                try:
                    if not eq(X.apply(op, a), X.apply(op, b)):
                        raise ContractViolation(f"equality is not a congruence for {op}")
                except ZeroDivisionError:
                    continue


def generated_subgroup(
    X: BlackBox,
    gens: list[CryptoElement],
    seed: int = 0,
    slots: int | None = None,
    burn_in: int = DEFAULT_BURN_IN,
) -> BlackBox:
    """Subgroup box sampled by product replacement over ``gens``."""
    _require_group(X)
    if not gens:
        raise ValidationError("a generated subgroup needs at least one generator")
    cls = PairBox if isinstance(X, PairBox) else BlackBox
    box = cls(
        X.signature,
        X.length,
        pr_sampler_factory(X, gens, slots, burn_in),
        _delegated_ops(X),
        None if X.canonical else X.equal,
        seed=seed,
        canonical=X.canonical,
        name=f"<{len(gens)} gens in {X.name}>",
        provenance="product-replacement",
    )
    if isinstance(X, PairBox):
        box.left_length = X.left_length
        box.left, box.right = X.left, X.right
    box.generators = list(gens)
    box.parent = X
    return box


# -- morphism graphs ------------------------------------------------------

@dataclass(eq=False)
class GraphSubgroup:
    """Generated subgroup of X x Y meant to be the graph of a homomorphism."""

    X: BlackBox
    Y: BlackBox
    pairs: list[tuple[CryptoElement, CryptoElement]]
    box: PairBox
    product: PairBox
    direction: str | None = None
    last_check: dict = field(default_factory=dict)

    @property
    def generators(self) -> list[CryptoElement]:
        return [x + y for x, y in self.pairs]

    def split(self, z):
        return self.product.split(z)

    def members(self, cap: int = DEFAULT_CAP) -> list[CryptoElement]:
        return enumerate_closure(self.product, self.generators, cap)

    def contains(self, x, y, cap: int = DEFAULT_CAP) -> bool:
        return ElementSet(self.product, self.members(cap)).find(x + y) is not None

    def image(self, x: CryptoElement, cap: int = DEFAULT_CAP) -> CryptoElement:
        """The y attached to x (X -> Y direction), by exhaustive lookup."""
        for z in self.members(cap):
            a, b = self.split(z)
            if self.X.equal(a, x):
                return b
        raise ValidationError("element is not in the projection of the graph")


class ProtoInvolution(GraphSubgroup):
    """Graph subgroup of X x X encoding an involutive automorphism of X."""

    def validate(self, trials: int = DEFAULT_TRIALS, cap: int = DEFAULT_CAP) -> bool:
        """Membership symmetry and involutivity; exhaustive if enumerable."""
        try:
            members = self.members(cap)
        except CapExceededError:
            members = None
        if members is not None:
            found = ElementSet(self.product, members)
            ok = all(found.find(b + a) is not None for a, b in map(self.split, members))
            self.last_check = {"method": "exhaustive", "checked": len(members), "symmetric": ok}
            return ok
        sampler = self.box.clone(derive_seed(self.box.seed, "validate"))
        samples = [self.split(sampler.sample()) for _ in range(trials)]
        firsts = ElementSet(self.X)
        seconds: list = []
        for a, b in samples:
            i = firsts.find(a)
            if i is None:
                firsts.add(a)
                seconds.append(b)
            elif not self.X.equal(seconds[i], b):
                self.last_check = {"method": "monte-carlo", "checked": trials, "symmetric": False}
                return False
        ok = True
        for a, b in samples:
            i = firsts.find(b)
            if i is not None and not self.X.equal(seconds[i], a):
                ok = False
                break
        self.last_check = {"method": "monte-carlo", "checked": trials, "symmetric": ok}
        return ok


def graph_subgroup(
    X: BlackBox,
    Y: BlackBox,
    pairs: list[tuple[CryptoElement, CryptoElement]],
    seed: int = 0,
    cls: type = GraphSubgroup,
) -> GraphSubgroup:
    """Black box for ``<(x_1, y_1), ..., (x_k, y_k)>`` inside X x Y."""
    if not pairs:
        raise ValidationError("a graph subgroup needs at least one generating pair")
    P = direct_product(X, Y, seed=derive_seed(seed, "product"))
    box = generated_subgroup(P, [x + y for x, y in pairs], seed=seed)
    return cls(X, Y, list(pairs), box, P)


def _function_witness(G: GraphSubgroup, members, direction: str):
    src, dst = (G.X, G.Y) if direction == "X->Y" else (G.Y, G.X)
    firsts = ElementSet(src)
    seconds: list = []
    for z in members:
        a, b = G.split(z)
        if direction == "Y->X":
            a, b = b, a
        i = firsts.find(a)
        if i is None:
            firsts.add(a)
            seconds.append(b)
        elif not dst.equal(seconds[i], b):
            return (a, seconds[i], b)
    return None


def check_function(
    G: GraphSubgroup,
    trials: int = DEFAULT_TRIALS,
    direction: str = "X->Y",
    cap: int = DEFAULT_CAP,
) -> bool:
    """Whether G is the graph of a function in ``direction`` (or ``"both"``).

    Exhaustive over the enumerated subgroup when it fits in ``cap``;
    otherwise ``trials`` product-replacement samples are compared pairwise
    and ``G.last_check["confidence"]`` records the fraction of distinct
    first coordinates seen twice (a rough coverage measure).
    """
    directions = ["X->Y", "Y->X"] if direction == "both" else [direction]
    try:
        members = G.members(cap)
        method = "exhaustive"
    except CapExceededError:
        sampler = G.box.clone(derive_seed(G.box.seed, "check"))
        members = [sampler.sample() for _ in range(trials)]
        method = "monte-carlo"
    for d in directions:
        witness = _function_witness(G, members, d)
        if witness is not None:
            G.last_check = {"method": method, "checked": len(members), "direction": d, "function": False}
            return False
    G.last_check = {"method": method, "checked": len(members), "direction": direction, "function": True}
    if method == "monte-carlo":
        distinct = len(ElementSet(G.X, [G.split(z)[0] for z in members]))
        G.last_check["confidence"] = 1.0 - distinct / max(1, len(members))
    return True


def conjugation_graph(X: BlackBox, x: CryptoElement, gens: list[CryptoElement], seed: int = 0):
    """``C_x = {(y, x^-1 y x)}`` generated over ``gens``.

    Returns a :class:`ProtoInvolution` when ``x**2`` commutes with every
    generator (so conjugation by ``x`` is involutive), else a plain
    :class:`GraphSubgroup`.
    """
    _require_group(X)
    xi = X.inv(x)
    pairs = [(g, X.mul(X.mul(xi, g), x)) for g in gens]
    x2 = X.mul(x, x)
    central = all(X.equal(X.mul(x2, g), X.mul(g, x2)) for g in gens)
    return graph_subgroup(X, X, pairs, seed=seed, cls=ProtoInvolution if central else GraphSubgroup)


def proto_involution(X: BlackBox, pairs, seed: int = 0) -> ProtoInvolution:
    return graph_subgroup(X, X, pairs, seed=seed, cls=ProtoInvolution)


def amalgamate(parts: list[ProtoInvolution], X: BlackBox | None = None, seed: int = 0, cap: int = DEFAULT_CAP) -> ProtoInvolution:
    """``<F_1, ..., F_k>`` for proto-involutions on subgroups of a common ``X``.

    Raises :class:`InconsistencyError` when the amalgam is not the graph of
    a function in both directions.
    """
    if not parts:
        raise ValidationError("nothing to amalgamate")
    if X is None:
        X = parts[0].X
        X = getattr(X, "parent", X)
    pairs = [pr for F in parts for pr in F.pairs]
    F = graph_subgroup(X, X, pairs, seed=seed, cls=ProtoInvolution)
    if not check_function(F, direction="both", cap=cap):
        raise InconsistencyError("the proto-involutions do not agree on a single automorphism")
    return F


def reify(X: BlackBox, F: GraphSubgroup, cap: int = DEFAULT_CAP) -> CryptoElement:
    """Find ``t`` of order dividing 2 with ``t^-1 g t`` matching F on its generators.

    Exhaustive search over the closure of F's first coordinates.
    """
    _require_group(X)
    candidates = enumerate_closure(X, [x for x, _ in F.pairs], cap)
    e = X.identity()
    for t in candidates:
        if not X.equal(X.mul(t, t), e):
            continue
        ti = X.inv(t)
        if all(X.equal(X.mul(X.mul(ti, g), t), h) for g, h in F.pairs):
            return t
    raise NotInnerError("no involution of X induces this automorphism by conjugation")


# -- semidirect products --------------------------------------------------

def semidirect_product(
    X: BlackBox,
    Y: BlackBox,
    action: Callable[[CryptoElement, CryptoElement], CryptoElement],
    validate: int = DEFAULT_TRIALS,
    seed: int = 0,
) -> PairBox:
    """X semidirect Y for a right action ``action(x, y) = x^y`` by automorphisms.

    Multiplication: ``(x1, y1)(x2, y2) = (x1 * action(x2, y1^-1), y1 y2)``;
    inverse: ``(x, y)^-1 = (action(x^-1, y), y^-1)``.
    """
    _require_group(X, Y)
    lx = X.length

    def product(a, b):
        x1, y1 = a[:lx], a[lx:]
        x2, y2 = b[:lx], b[lx:]
        return X.mul(x1, action(x2, Y.inv(y1))) + Y.mul(y1, y2)

    def inverse(a):
        x, y = a[:lx], a[lx:]
        return action(X.inv(x), y) + Y.inv(y)

    ops = {
        "product": product,
        "inverse": inverse,
        "identity": lambda: X.identity() + Y.identity(),
    }
    if validate:
        _check_action(X, Y, action, validate, seed)
    equality = None
    if not (X.canonical and Y.canonical):
        equality = lambda a, b: X.equal(a[:lx], b[:lx]) and Y.equal(a[lx:], b[lx:])
    return _make_pair_box(
        X, Y, ops, equality, _pair_sampler_factory(X, Y), seed, f"{X.name}:{Y.name}", "semidirect"
    )


def _check_action(X, Y, action, samples, seed):
    xs = X.clone(derive_seed(seed, "action-x"))
    ys = Y.clone(derive_seed(seed, "action-y"))
    ey = Y.identity()
    for _ in range(samples):
        x1, x2, y1, y2 = xs.sample(), xs.sample(), ys.sample(), ys.sample()
        if not X.equal(action(X.mul(x1, x2), y1), X.mul(action(x1, y1), action(x2, y1))):
            raise ContractViolation("action does not preserve products")
        if not X.equal(action(action(x1, y1), y2), action(x1, Y.mul(y1, y2))):
            raise ContractViolation("action is not a right action")
        if not X.equal(action(x1, ey), x1):
            raise ContractViolation("identity does not act trivially")


def order_two_box(seed: int = 0) -> BlackBox:
    """The group {1, phi} on strings b"\\x00", b"\\x01"."""
    zero, one = b"\x00", b"\x01"
    ops = {
        "product": lambda a, b: zero if a == b else one,
        "inverse": lambda a: a,
        "identity": lambda: zero,
    }
    return BlackBox(GROUP, 1, uniform_sampler_factory([zero, one]), ops, seed=seed, name="C2")


def augment(F: ProtoInvolution, seed: int = 0, validate: int = DEFAULT_TRIALS) -> PairBox:
    """``F semidirect {1, phi}`` with ``phi`` swapping the two coordinates."""
    lx = F.X.length
    swap_flag = b"\x01"

    def action(f, y):
        if y == swap_flag:
            return f[lx:] + f[:lx]
        return f

    C2 = order_two_box(derive_seed(seed, "c2"))
    return semidirect_product(F.box, C2, action, validate=validate, seed=seed)
