"""Constructive recognition of black-box fields at desk scale.

The route: find the characteristic, embed F_p by double-and-add, pick an
element ``theta`` of full degree, compute its minimal polynomial over the
prime subfield from its Frobenius conjugates, and transport the requested
explicit model onto ``F_p[x]/(m_theta)`` by a root of its modulus.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

from .core import BlackBox, CryptoElement, ElementSet, QueryBudgetReport, power
from .errors import (
    CapExceededError,
    CharacteristicMismatch,
    ContractViolation,
    DegenerateSamplerError,
    DomainError,
    NoSolutionError,
    SignatureError,
    ValidationError,
)
from .explicit import FieldSpec, make_field

DESK_CAP = 10**5


def _require_field(K: BlackBox):
    if K.signature.kind != "field":
        raise SignatureError(f"{K.name} is not a field box")


def find_characteristic(K: BlackBox, cap: int = DESK_CAP) -> int:
    """Additive order of ``one``, by adding ``one`` until ``zero`` appears."""
    _require_field(K)
    one, zero = K.constant("one"), K.constant("zero")
    s = one
    for k in range(2, cap + 1):
        s = K.apply("add", s, one)
        if K.equal(s, zero):
            return k
    raise CapExceededError(f"characteristic exceeds {cap}")


@dataclass
class PrimeEmbedding:
    """``m -> m * 1`` from F_p into the prime subfield of ``box``."""

    box: BlackBox
    p: int
    table: list[CryptoElement]
    _log: ElementSet = field(repr=False)

    def image(self, m: int) -> CryptoElement:
        """``m * 1`` by double-and-add."""
        return power(self.box, self.box.constant("one"), m % self.p, "add")

    def preimage(self, x: CryptoElement) -> int:
        """Additive discrete log of ``x`` with respect to ``1``."""
        i = self._log.find(x)
        if i is None:
            raise DomainError("element is not in the prime subfield")
        return i


def embed_prime_field(K: BlackBox, p: int) -> PrimeEmbedding:
    _require_field(K)
    one, zero = K.constant("one"), K.constant("zero")
    if p < 2 or not K.equal(power(K, one, p, "add"), zero):
        raise CharacteristicMismatch(f"{p} * 1 is not zero in {K.name}")
    table = [zero]
    s = zero
    for _ in range(1, p):
        s = K.apply("add", s, one)
        table.append(s)
    log = ElementSet(K, table)
    if len(log) != p:
        raise CharacteristicMismatch(f"characteristic of {K.name} is smaller than {p}")
    return PrimeEmbedding(K, p, table, log)


def discrete_log(
    emb: PrimeEmbedding,
    g: CryptoElement,
    x: CryptoElement,
    order: int | None = None,
) -> int:
    """``k`` in ``[0, order)`` with ``g**k == x`` by baby-step giant-step.

    ``order`` defaults to ``p - 1``, the order of a generator of the prime
    subfield's multiplicative group.
    """
    K = emb.box
    if K.equal(x, K.constant("zero")):
        raise DomainError("discrete log of zero is undefined")
    if order is None:
        order = emb.p - 1
    m = math.isqrt(max(order - 1, 0)) + 1
    baby = ElementSet(K)
    y = K.constant("one")
    for _ in range(m):
        baby.add(y)
        y = K.apply("mul", y, g)
    giant = K.apply("inv", power(K, g, m, "mul"))
    y = x
    for i in range(m + 1):
        j = baby.find(y)
        if j is not None:
            k = i * m + j
            if k < order:
                return k
        y = K.apply("mul", y, giant)
    raise NoSolutionError("x is not a power of g")


def primitive_root(p: int) -> int:
    if p == 2:
        return 1
    phi = p - 1
    primes = [q for q in range(2, phi + 1) if phi % q == 0 and all(q % r for r in range(2, math.isqrt(q) + 1))]
    for r in range(2, p):
        if all(pow(r, phi // q, p) != 1 for q in primes):
            return r
    raise ValidationError(f"no primitive root mod {p}")


@dataclass
class RecognitionResult:
    alpha: Callable[[CryptoElement], int]
    beta: Callable[[int], CryptoElement]
    cost: QueryBudgetReport
    method: str
    spec: FieldSpec
    theta: CryptoElement
    min_poly: tuple[int, ...]
    root: int


def _poly_eval(F, coeffs, a):
    r = 0
    for c in reversed(coeffs):
        r = F.apply("add", F.apply("mul", r, a), c % F.field_spec.p)
    return r


def recognize_field(
    K: BlackBox,
    spec: FieldSpec,
    method: str = "table",
    cap: int = DESK_CAP,
    retries: int | None = None,
    verify: bool = True,
) -> RecognitionResult:
    """Two-way isomorphisms between ``K`` and the explicit field ``spec``.

    ``method`` chooses how prime-subfield elements are read back: ``"table"``
    (additive log table) or ``"bsgs"`` (multiplicative discrete log).
    """
    _require_field(K)
    if method not in ("table", "bsgs"):
        raise ValidationError(f"unknown recognition method {method!r}")
    p, n, q = spec.p, spec.n, spec.order
    if q > cap:
        raise CapExceededError(f"field order {q} exceeds desk cap {cap}")
    start = K.budget()
    emb = embed_prime_field(K, p)
    zero, one = K.constant("zero"), K.constant("one")

    if method == "table":
        read_prime = emb.preimage
    else:
        r = primitive_root(p)
        g = emb.image(r)

        def read_prime(c):
            if K.equal(c, zero):
                return 0
            return pow(r, discrete_log(emb, g, c), p)

    # an element of degree n: its Frobenius orbit has length exactly n
    retries = 8 * n if retries is None else retries
    for _ in range(max(1, retries)):
        theta = K.sample()
        conj = [theta]
        y = theta
        for _ in range(n):
            y = power(K, y, p, "mul")
            if K.equal(y, theta):
                break
            conj.append(y)
        if len(conj) == n and K.equal(y, theta):
            break
    else:
        raise DegenerateSamplerError(f"no element of degree {n} among {retries} samples")

    # m_theta(x) = prod (x - theta^(p^i)), coefficients land in the prime field
    coeffs = [one]
    for c in conj:
        neg_c = K.apply("neg", c)
        nxt = [K.apply("mul", coeffs[0], neg_c)]
        for k in range(1, len(coeffs)):
            nxt.append(K.apply("add", coeffs[k - 1], K.apply("mul", coeffs[k], neg_c)))
        nxt.append(coeffs[-1])
        coeffs = nxt
    min_poly = tuple(read_prime(c) for c in coeffs)
    try:
        L = make_field(FieldSpec(p, n, min_poly))
    except ValidationError as exc:
        raise ContractViolation(f"recovered minimal polynomial is not irreducible: {min_poly}") from exc

    # x -> root of spec.modulus inside F_p[x]/(m_theta)
    root = next((a for a in range(q) if _poly_eval(L, spec.modulus, a) == 0), None)
    if root is None:
        raise ContractViolation("spec modulus has no root in the recovered model")

    thetas = [one]
    for _ in range(1, n):
        thetas.append(K.apply("mul", thetas[-1], theta))
    prime_images = emb.table

    def from_model(b: int) -> CryptoElement:
        # element of F_p[x]/(m_theta) -> K via x -> theta
        acc = zero
        for j, c in enumerate(L.field_spec.coefficients(b)):
            if c:
                acc = K.apply("add", acc, K.apply("mul", prime_images[c], thetas[j]))
        return acc

    basis = []
    r_pow = 1
    for _ in range(n):
        basis.append(from_model(r_pow))
        r_pow = L.apply("mul", r_pow, root)
    multiples = []
    for b in basis:
        row = [zero]
        for _ in range(1, p):
            row.append(K.apply("add", row[-1], b))
        multiples.append(row)

    def beta(a: int) -> CryptoElement:
        acc = None
        for i, c in enumerate(spec.coefficients(a)):
            if c:
                acc = multiples[i][c] if acc is None else K.apply("add", acc, multiples[i][c])
        return zero if acc is None else acc

    # alpha by table over all q elements, filled digit by digit with one addition each
    images = [zero] * q
    block = 1
    for i in range(n):
        for e in range(block):
            for c in range(1, p):
                images[e + c * block] = K.apply("add", images[e], multiples[i][c])
        block *= p
    index = ElementSet(K, images)
    if len(index) != q:
        raise ContractViolation("beta is not injective; recognition failed")

    def alpha(x: CryptoElement) -> int:
        i = index.find(x)
        if i is None:
            raise ValidationError("string is not an element of the recognized field")
        return i

    if verify:
        for a in range(q):
            if alpha(beta(a)) != a:
                raise ContractViolation(f"alpha(beta({a})) != {a}")
    cost = K.budget() - start
    return RecognitionResult(alpha, beta, cost, method, spec, theta, min_poly, root)
