"""Black-box algebraic structures: the oracle contract and generic routines.

A cryptoelement is a ``bytes`` string of the owning box's fixed length.  A
:class:`BlackBox` bundles three oracles, each counted:

* ``sample()``: a random element of the hidden structure,
* ``apply(op, *args)``: the named operation of the signature,
* ``equal(x, y)``: whether two strings encrypt the same element.

Boxes whose equality is plain byte equality declare ``canonical=True``; the
enumeration helpers then deduplicate by hashing instead of pairwise oracle
calls.
"""

from __future__ import annotations

import copy
import math
import random
import time
from dataclasses import dataclass, field
from typing import Callable

from .errors import (
    BoundExceededError,
    CapExceededError,
    PartialityError,
    SignatureError,
    ValidationError,
)

CryptoElement = bytes


@dataclass(frozen=True)
class Operation:
    name: str
    arity: int
    partial: bool = False


@dataclass(frozen=True)
class StructureSignature:
    kind: str
    operations: tuple[Operation, ...]

    def arity(self, name: str) -> int:
        return self.get(name).arity

    def get(self, name: str) -> Operation:
        for op in self.operations:
            if op.name == name:
                return op
        raise SignatureError(f"{self.kind} signature has no operation {name!r}")

    def has(self, name: str) -> bool:
        return any(op.name == name for op in self.operations)

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(op.name for op in self.operations)


GROUP = StructureSignature(
    "group",
    (Operation("product", 2), Operation("inverse", 1), Operation("identity", 0)),
)
FIELD = StructureSignature(
    "field",
    (
        Operation("add", 2),
        Operation("neg", 1),
        Operation("zero", 0),
        Operation("mul", 2),
        Operation("inv", 1, partial=True),
        Operation("one", 0),
    ),
)

# (binary, inverse, neutral) for each one-operation reduct
REDUCTS = {
    "group": ("product", "inverse", "identity"),
    "add": ("add", "neg", "zero"),
    "mul": ("mul", "inv", "one"),
}


def default_reduct(signature: StructureSignature) -> str:
    return "group" if signature.kind == "group" else "mul"


@dataclass
class QueryBudgetReport:
    sample_calls: int = 0
    apply_calls: int = 0
    equal_calls: int = 0
    wall_time: float = 0.0

    def __post_init__(self):
        if min(self.sample_calls, self.apply_calls, self.equal_calls, self.wall_time) < 0:
            raise ValidationError("query budget fields must be non-negative")

    def __sub__(self, other: "QueryBudgetReport") -> "QueryBudgetReport":
        return QueryBudgetReport(
            self.sample_calls - other.sample_calls,
            self.apply_calls - other.apply_calls,
            self.equal_calls - other.equal_calls,
            max(0.0, self.wall_time - other.wall_time),
        )

    def as_dict(self) -> dict:
        return {
            "sample_calls": self.sample_calls,
            "apply_calls": self.apply_calls,
            "equal_calls": self.equal_calls,
        }


SamplerFactory = Callable[[int], Callable[[], CryptoElement]]


class BlackBox:
    """A black-box structure built from oracle callables.

    ``sampler_factory(seed)`` must return a nullary sampler; identical seeds
    must give identical streams.  ``operations`` maps operation names to
    callables on cryptoelements.  ``equality`` defaults to byte equality.
    """

    error_probability = 0.0

    def __init__(
        self,
        signature: StructureSignature,
        length: int,
        sampler_factory: SamplerFactory,
        operations: dict[str, Callable],
        equality: Callable[[CryptoElement, CryptoElement], bool] | None = None,
        *,
        seed: int = 0,
        canonical: bool | None = None,
        name: str = "box",
        provenance: str = "uniform",
    ):
        missing = [n for n in signature.names if n not in operations]
        if missing:
            raise SignatureError(f"operations missing for signature {signature.kind}: {missing}")
        self.signature = signature
        self.length = length
        self.name = name
        self.provenance = provenance
        self.seed = seed
        self._sampler_factory = sampler_factory
        self._sampler = sampler_factory(seed)
        self._operations = dict(operations)
        self._equality = equality
        self.canonical = equality is None if canonical is None else canonical
        self.sample_calls = 0
        self.apply_calls = 0
        self.equal_calls = 0
        self._constants: dict[str, CryptoElement] = {}

    @property
    def string_length(self) -> int:
        """l(X) in bits."""
        return 8 * self.length

    # -- oracles ----------------------------------------------------------
    def sample(self) -> CryptoElement:
        self.sample_calls += 1
        return self._sampler()

    def apply(self, op: str, *args: CryptoElement) -> CryptoElement:
        arity = self.signature.arity(op)
        if len(args) != arity:
            raise SignatureError(f"{op} takes {arity} arguments, got {len(args)}")
        self.apply_calls += 1
        try:
            return self._operations[op](*args)
        except ZeroDivisionError as exc:
            if isinstance(exc, PartialityError):
                raise
            raise PartialityError(f"{op} undefined at the given argument") from exc

    def equal(self, x: CryptoElement, y: CryptoElement) -> bool:
        self.equal_calls += 1
        if self._equality is None:
            return x == y
        return bool(self._equality(x, y))

    # -- conveniences -----------------------------------------------------
    def constant(self, name: str) -> CryptoElement:
        if name not in self._constants:
            self._constants[name] = self.apply(name)
        return self._constants[name]

    def mul(self, x, y):
        return self.apply("product" if self.signature.kind == "group" else "mul", x, y)

    def inv(self, x):
        return self.apply("inverse" if self.signature.kind == "group" else "inv", x)

    def identity(self):
        return self.constant("identity" if self.signature.kind == "group" else "one")

    def key(self, x: CryptoElement):
        """Hashable canonical form; only meaningful for canonical boxes."""
        if not self.canonical:
            raise TypeError("box equality is not byte equality; no canonical key")
        return x

    def budget(self) -> QueryBudgetReport:
        return QueryBudgetReport(self.sample_calls, self.apply_calls, self.equal_calls, time.perf_counter())

    def reset_counters(self) -> None:
        self.sample_calls = self.apply_calls = self.equal_calls = 0

    def clone(self, seed: int) -> "BlackBox":
        """Same oracles, independent sampler seeded with ``seed``, fresh counters."""
        twin = copy.copy(self)
        twin.seed = seed
        twin._sampler = self._sampler_factory(seed)
        twin._constants = {}
        twin.reset_counters()
        return twin

    def check_length(self, x: CryptoElement) -> None:
        if len(x) != self.length:
            raise ValidationError(f"cryptoelement has {len(x)} bytes, box expects {self.length}")

    def __repr__(self):
        return f"<BlackBox {self.name} {self.signature.kind} l={self.string_length}>"


def uniform_sampler_factory(codewords) -> SamplerFactory:
    """Sampler factory drawing uniformly from a fixed codeword list."""
    codewords = list(codewords)

    def factory(seed):
        rng = random.Random(seed)
        k = len(codewords)
        return lambda: codewords[rng.randrange(k)]

    return factory


class ElementSet:
    """Set of cryptoelements of one box, deduplicated via its equality."""

    def __init__(self, box: BlackBox, items=()):
        self.box = box
        self.items: list[CryptoElement] = []
        self._index: dict[bytes, int] = {}
        for x in items:
            self.add(x)

    def find(self, x: CryptoElement) -> int | None:
        if self.box.canonical:
            return self._index.get(x)
        for i, y in enumerate(self.items):
            if self.box.equal(x, y):
                return i
        return None

    def add(self, x: CryptoElement) -> bool:
        if self.find(x) is not None:
            return False
        if self.box.canonical:
            self._index[x] = len(self.items)
        self.items.append(x)
        return True

    def __contains__(self, x):
        return self.find(x) is not None

    def __len__(self):
        return len(self.items)

    def __iter__(self):
        return iter(self.items)


# -- generic routines -----------------------------------------------------

def identity_element(X: BlackBox, name: str | None = None) -> CryptoElement:
    """Nullary constant of ``X``: identity for groups, ``one`` (or ``name``) for fields."""
    if name is None:
        name = "identity" if X.signature.kind == "group" else "one"
    if not X.signature.has(name) or X.signature.arity(name) != 0:
        raise SignatureError(f"{X.signature.kind} signature has no constant {name!r}")
    return X.constant(name)


def power(X: BlackBox, x: CryptoElement, n: int, reduct: str | None = None) -> CryptoElement:
    """``x`` composed with itself ``n`` times by double-and-add.

    ``reduct`` selects the operation: ``"group"``, ``"add"`` or ``"mul"``;
    fields default to ``"mul"``.
    """
    if reduct is None:
        reduct = default_reduct(X.signature)
    op, inverse, neutral = REDUCTS[reduct]
    if n < 0:
        x = X.apply(inverse, x)
        n = -n
    result = X.constant(neutral)
    if n == 0:
        return result
    base = x
    acc = None
    while n:
        if n & 1:
            acc = base if acc is None else X.apply(op, acc, base)
        n >>= 1
        if n:
            base = X.apply(op, base, base)
    return acc


def factorize(n: int) -> dict[int, int]:
    factors: dict[int, int] = {}
    d = 2
    while d * d <= n:
        while n % d == 0:
            factors[d] = factors.get(d, 0) + 1
            n //= d
        d += 1 if d == 2 else 2
    if n > 1:
        factors[n] = factors.get(n, 0) + 1
    return factors


def _is_neutral(X, y, neutral):
    return X.equal(y, X.constant(neutral))


def element_order(
    X: BlackBox,
    x: CryptoElement,
    bound: int,
    reduct: str | None = None,
    factor_budget: int = 10**6,
) -> int:
    """Smallest ``m >= 1`` with ``x**m`` neutral, given ``bound >= m``.

    If ``x**bound`` is neutral, ``bound`` is a multiple of the order and we
    descend through its prime divisors.  Otherwise (or when trial division
    of ``bound`` would exceed ``factor_budget``) the powers are scanned.
    """
    if bound < 1:
        raise BoundExceededError("bound must be at least 1")
    if reduct is None:
        reduct = default_reduct(X.signature)
    op, _, neutral = REDUCTS[reduct]
    if math.isqrt(bound) <= factor_budget and _is_neutral(X, power(X, x, bound, reduct), neutral):
        order = bound
        for q, e in factorize(bound).items():
            for _ in range(e):
                if _is_neutral(X, power(X, x, order // q, reduct), neutral):
                    order //= q
                else:
                    break
        return order
    return _order_scan(X, x, bound, op, neutral)


def _order_scan(X, x, bound, op, neutral):
    y = x
    for m in range(1, bound + 1):
        if _is_neutral(X, y, neutral):
            return m
        y = X.apply(op, y, x)
    raise BoundExceededError(f"order exceeds bound {bound}")


def enumerate_closure(
    X: BlackBox,
    gens: list[CryptoElement],
    cap: int,
) -> list[CryptoElement]:
    """Breadth-first closure of ``gens`` under product and inverse.

    Raises :class:`CapExceededError` (carrying the partial list) once more
    than ``cap`` distinct elements are found.
    """
    op, inverse, neutral = REDUCTS[default_reduct(X.signature)]
    found = ElementSet(X, [X.constant(neutral)])
    gens = list(gens)
    gens = gens + [X.apply(inverse, g) for g in gens]
    frontier = list(found.items)
    while frontier:
        nxt = []
        for y in frontier:
            for g in gens:
                z = X.apply(op, y, g)
                if found.add(z):
                    if len(found) > cap:
                        raise CapExceededError(
                            f"closure has more than {cap} elements", found.items
                        )
                    nxt.append(z)
        frontier = nxt
    return found.items
