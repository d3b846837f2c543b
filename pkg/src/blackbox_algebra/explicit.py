"""Explicit finite structures and the deterministic encryption wrapper.

Every :class:`ExplicitStructure` numbers its elements ``0 .. order-1`` and
exposes its operations on those indices.  For fields the index *is* the
base-``p`` encoding of the representing polynomial.  :func:`encrypt` hides
such a structure behind a random injective codebook, producing a
:class:`~blackbox_algebra.core.BlackBox` plus the secret
:class:`EncryptionOracle`.
"""

from __future__ import annotations

import difflib
import itertools
import math
import random
import re
from dataclasses import dataclass, field
from typing import Callable

from . import kernels
from .core import FIELD, GROUP, BlackBox, StructureSignature, uniform_sampler_factory
from .errors import CapExceededError, ValidationError

ENUMERATION_CAP = 10**5


@dataclass(eq=False)
class ExplicitStructure:
    signature: StructureSignature
    order: int
    ops: dict[str, Callable]
    name: str
    elements: list | None = None
    generators: tuple[int, ...] = ()
    field_spec: "FieldSpec | None" = None
    _index: dict | None = field(default=None, repr=False)

    def element(self, i: int):
        """Concrete value (permutation, matrix, residue, coefficients) of index ``i``."""
        if self.elements is not None:
            return self.elements[i]
        if self.field_spec is not None:
            return self.field_spec.coefficients(i)
        return i

    def index(self, value) -> int:
        if self.field_spec is not None and not isinstance(value, int):
            return self.field_spec.encode(value)
        if self.elements is None:
            return value
        if self._index is None:
            self._index = {v: i for i, v in enumerate(self.elements)}
        return self._index[value]

    def apply(self, op: str, *args: int) -> int:
        return self.ops[op](*args)

    # group shorthands; fields use the multiplicative reduct
    def mul(self, a, b):
        return self.ops["product" if self.signature.kind == "group" else "mul"](a, b)

    def inv(self, a):
        return self.ops["inverse" if self.signature.kind == "group" else "inv"](a)

    @property
    def identity(self) -> int:
        return self.ops["identity" if self.signature.kind == "group" else "one"]()

    def power(self, a: int, n: int) -> int:
        if n < 0:
            a, n = self.inv(a), -n
        result = self.identity
        while n:
            if n & 1:
                result = self.mul(result, a)
            a = self.mul(a, a)
            n >>= 1
        return result

    def element_order(self, a: int) -> int:
        e = self.identity
        x, m = a, 1
        while x != e:
            x = self.mul(x, a)
            m += 1
        return m

    def __len__(self):
        return self.order

    def __repr__(self):
        return f"<ExplicitStructure {self.name} order={self.order}>"


def _group(name, elements, mul, inv, identity, generators=()) -> ExplicitStructure:
    """Group on an explicit element list with value-level operations."""
    index = {v: i for i, v in enumerate(elements)}
    e = index[identity]
    ops = {
        "product": lambda a, b: index[mul(elements[a], elements[b])],
        "inverse": lambda a: index[inv(elements[a])],
        "identity": lambda: e,
    }
    gens = tuple(index[g] for g in generators)
    return ExplicitStructure(GROUP, len(elements), ops, name, list(elements), gens, None, index)


# -- groups ---------------------------------------------------------------

def make_cyclic_group(n: int) -> ExplicitStructure:
    if n < 1:
        raise ValidationError("cyclic group order must be at least 1")
    ops = {
        "product": lambda a, b: (a + b) % n,
        "inverse": lambda a: (-a) % n,
        "identity": lambda: 0,
    }
    return ExplicitStructure(GROUP, n, ops, f"Z{n}", None, (1,) if n > 1 else ())


def make_unit_group(n: int) -> ExplicitStructure:
    if n < 2:
        raise ValidationError("unit group modulus must be at least 2")
    units = [u for u in range(1, n) if math.gcd(u, n) == 1]
    return _group(
        f"(Z/{n}Z)*",
        units,
        lambda a, b: a * b % n,
        lambda a: pow(a, -1, n),
        1,
    )


def permutation_closure(gens, degree: int, cap: int = ENUMERATION_CAP) -> list[tuple]:
    k = kernels.perm_kernels()
    e = tuple(range(degree))
    seen = {e}
    out = [e]
    frontier = [e]
    gens = [tuple(g) for g in gens]
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = k.perm_mul(x, g)
                if y not in seen:
                    seen.add(y)
                    out.append(y)
                    nxt.append(y)
                    if len(out) > cap:
                        raise CapExceededError(f"permutation group exceeds {cap}", out)
        frontier = nxt
    return out


def make_permutation_group(gens, degree: int, name: str = "perm") -> ExplicitStructure:
    """Group generated by permutation tuples on ``range(degree)``."""
    k = kernels.perm_kernels()
    gens = [tuple(g) for g in gens]
    elements = permutation_closure(gens, degree)
    return _group(name, elements, k.perm_mul, k.perm_inv, tuple(range(degree)), gens)


def cycles(degree: int, *cycs) -> tuple:
    """Permutation tuple from 1-based cycles, e.g. ``cycles(4, (1, 2), (3, 4))``."""
    img = list(range(degree))
    for c in cycs:
        for a, b in zip(c, c[1:] + c[:1]):
            img[a - 1] = b - 1
    return tuple(img)


def make_symmetric_group(n: int) -> ExplicitStructure:
    if n < 1:
        raise ValidationError("degree must be at least 1")
    k = kernels.perm_kernels()
    if math.factorial(n) > ENUMERATION_CAP:
        raise CapExceededError(f"S{n} exceeds the enumeration cap")
    elements = list(itertools.permutations(range(n)))
    gens = []
    if n > 1:
        gens = [cycles(n, tuple(range(1, n + 1))), cycles(n, (1, 2))]
    return _group(f"S{n}", elements, k.perm_mul, k.perm_inv, tuple(range(n)), gens)


def _sign(perm) -> int:
    seen = [False] * len(perm)
    s = 1
    for i in range(len(perm)):
        if not seen[i]:
            j, length = i, 0
            while not seen[j]:
                seen[j] = True
                j = perm[j]
                length += 1
            if length % 2 == 0:
                s = -s
    return s


def make_alternating_group(n: int) -> ExplicitStructure:
    k = kernels.perm_kernels()
    if math.factorial(n) > 2 * ENUMERATION_CAP:
        raise CapExceededError(f"A{n} exceeds the enumeration cap")
    elements = [p for p in itertools.permutations(range(n)) if _sign(p) == 1]
    gens = []
    if n >= 3:
        gens = [cycles(n, (1, 2, 3))]
        if n >= 4:
            odd = n % 2 == 1
            gens.append(cycles(n, tuple(range(1, n + 1)) if odd else tuple(range(2, n + 1))))
    return _group(f"A{n}", elements, k.perm_mul, k.perm_inv, tuple(range(n)), gens)


def make_dihedral_group(n: int) -> ExplicitStructure:
    """Symmetries of the regular ``n``-gon (order ``2n``), as permutations."""
    if n < 3:
        raise ValidationError("dihedral group needs n >= 3")
    rot = tuple((i + 1) % n for i in range(n))
    ref = tuple((-i) % n for i in range(n))
    return make_permutation_group([rot, ref], n, f"D{n}")


def make_direct_product(A: ExplicitStructure, B: ExplicitStructure) -> ExplicitStructure:
    """Explicit A x B with index ``a * |B| + b``."""
    if A.signature.kind != "group" or B.signature.kind != "group":
        raise ValidationError("explicit direct products are implemented for groups")
    m = B.order

    def product(x, y):
        return A.mul(x // m, y // m) * m + B.mul(x % m, y % m)

    ops = {
        "product": product,
        "inverse": lambda x: A.inv(x // m) * m + B.inv(x % m),
        "identity": lambda: A.identity * m + B.identity,
    }
    gens = tuple(g * m + B.identity for g in A.generators) + tuple(
        A.identity * m + g for g in B.generators
    )
    return ExplicitStructure(GROUP, A.order * m, ops, f"{A.name}x{B.name}", None, gens)


# -- fields ---------------------------------------------------------------

def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


def _poly_mod(a: list[int], b: list[int], p: int) -> list[int]:
    """Remainder of ``a`` by monic ``b`` over F_p (coefficients low first)."""
    a = [c % p for c in a]
    db = len(b) - 1
    for k in range(len(a) - 1, db - 1, -1):
        c = a[k]
        if c:
            for i in range(db + 1):
                a[k - db + i] = (a[k - db + i] - c * b[i]) % p
    return a[:db]


def is_irreducible(modulus, p: int) -> bool:
    """Exhaustive check: no monic factor of degree 1 .. n//2 divides ``modulus``."""
    modulus = list(modulus)
    n = len(modulus) - 1
    if n < 1 or modulus[-1] % p != 1:
        return False
    if n == 1:
        return True
    for d in range(1, n // 2 + 1):
        for tail in itertools.product(range(p), repeat=d):
            if not any(_poly_mod(modulus, list(tail) + [1], p)):
                return False
    return True


@dataclass(frozen=True)
class FieldSpec:
    p: int
    n: int
    modulus: tuple[int, ...]

    def __post_init__(self):
        if not is_prime(self.p):
            raise ValidationError(f"characteristic {self.p} is not prime")
        if self.n < 1 or len(self.modulus) != self.n + 1:
            raise ValidationError("modulus must have degree n")
        if not is_irreducible(self.modulus, self.p):
            raise ValidationError(f"modulus {format_poly(self.modulus)} is reducible over F_{self.p}")

    @classmethod
    def default(cls, p: int, n: int) -> "FieldSpec":
        return cls(p, n, default_modulus(p, n))

    @property
    def order(self) -> int:
        return self.p**self.n

    def coefficients(self, a: int) -> tuple[int, ...]:
        out = []
        for _ in range(self.n):
            a, c = divmod(a, self.p)
            out.append(c)
        return tuple(out)

    def encode(self, coeffs) -> int:
        a = 0
        for c in reversed(tuple(coeffs)[: self.n]):
            a = a * self.p + c % self.p
        return a

    def descriptor(self) -> str:
        return f"f:{self.p}^{self.n}/{format_poly(self.modulus)}"


def default_modulus(p: int, n: int) -> tuple[int, ...]:
    """First monic irreducible polynomial of degree ``n`` in base-``p`` order of its tail."""
    if n == 1:
        return (0, 1)
    for code in range(p**n):
        tail = [(code // p**i) % p for i in range(n)]
        if tail[0] and is_irreducible(tail + [1], p):
            return tuple(tail + [1])
    raise ValidationError(f"no irreducible polynomial of degree {n} over F_{p}")


def format_poly(coeffs) -> str:
    terms = []
    for i in range(len(coeffs) - 1, -1, -1):
        c = coeffs[i]
        if not c:
            continue
        mono = "" if i == 0 else ("x" if i == 1 else f"x^{i}")
        if not mono:
            terms.append(str(c))
        elif c == 1:
            terms.append(mono)
        else:
            terms.append(f"{c}*{mono}")
    return "+".join(terms) or "0"


_TERM = re.compile(r"^(?:(\d+)\*?)?(x(?:\^(\d+))?)?$")


def parse_poly(text: str, p: int) -> tuple[int, ...]:
    """Parse ``"x^4+x+2"`` style polynomials into low-first coefficients mod ``p``."""
    text = text.replace(" ", "").replace("**", "^").replace("-", "+-")
    coeffs: dict[int, int] = {}
    for raw in filter(None, text.split("+")):
        sign = -1 if raw.startswith("-") else 1
        term = raw.lstrip("-")
        m = _TERM.match(term)
        if not m or not term:
            raise ValidationError(f"cannot parse polynomial term {raw!r}")
        c = int(m.group(1)) if m.group(1) else 1
        deg = 0 if not m.group(2) else int(m.group(3) or 1)
        coeffs[deg] = coeffs.get(deg, 0) + sign * c
    if not coeffs:
        raise ValidationError("empty polynomial")
    deg = max(coeffs)
    return tuple(coeffs.get(i, 0) % p for i in range(deg + 1))


def make_field(spec: FieldSpec) -> ExplicitStructure:
    p, n, mod = spec.p, spec.n, spec.modulus
    k = kernels.field_kernels(p, n)
    ops = {
        "add": lambda a, b: k.gf_add(a, b, p, n),
        "neg": lambda a: k.gf_neg(a, p, n),
        "zero": lambda: 0,
        "mul": lambda a, b: k.gf_mul(a, b, p, n, mod),
        "inv": lambda a: k.gf_inv(a, p, n, mod),
        "one": lambda: 1,
    }
    # x generates the field over F_p; for n == 1 any nonzero element does
    gens = (p,) if n > 1 else (1,)
    return ExplicitStructure(FIELD, p**n, ops, f"F{p}^{n}", None, gens, spec)


def frobenius(F: ExplicitStructure, a: int, k: int) -> int:
    """``a ** (p ** k)`` in the explicit field ``F``."""
    spec = F.field_spec
    kern = kernels.field_kernels(spec.p, spec.n)
    return kern.gf_pow(a, spec.p ** (k % spec.n), spec.p, spec.n, spec.modulus)


# -- matrix groups --------------------------------------------------------

def _det(M, d, p, n, mod, k):
    if d == 1:
        return M[0]
    total = 0
    for perm in itertools.permutations(range(d)):
        term = 1
        for i in range(d):
            term = k.gf_mul(term, M[i * d + perm[i]], p, n, mod)
        if _sign(perm) < 0:
            term = k.gf_neg(term, p, n)
        total = k.gf_add(total, term, p, n)
    return total


def _mat_inv(M, d, p, n, mod, k):
    A = [list(M[i * d:(i + 1) * d]) + [1 if i == j else 0 for j in range(d)] for i in range(d)]
    for col in range(d):
        piv = next(r for r in range(col, d) if A[r][col])
        A[col], A[piv] = A[piv], A[col]
        s = k.gf_inv(A[col][col], p, n, mod)
        A[col] = [k.gf_mul(s, v, p, n, mod) for v in A[col]]
        for r in range(d):
            if r != col and A[r][col]:
                c = k.gf_neg(A[r][col], p, n)
                A[r] = [k.gf_add(v, k.gf_mul(c, w, p, n, mod), p, n) for v, w in zip(A[r], A[col])]
    return tuple(v for row in A for v in row[d:])


def _gl_order(d, q):
    out = 1
    for i in range(d):
        out *= q**d - q**i
    return out


def make_matrix_group(family: str, dim: int, spec: FieldSpec, cap: int = ENUMERATION_CAP) -> ExplicitStructure:
    """GL, SL or PGL of dimension ``dim`` over F_{spec}, fully enumerated."""
    family = family.upper()
    if family not in ("GL", "SL", "PGL"):
        raise ValidationError(f"unknown matrix group family {family!r}")
    p, n, mod = spec.p, spec.n, spec.modulus
    q = p**n
    order = _gl_order(dim, q)
    if family != "GL":
        order //= q - 1
    if order > cap:
        raise CapExceededError(f"{family}{dim}(F{q}) has order {order} > cap {cap}")
    k = kernels.field_kernels(p, n)

    def normalize(M):
        lead = next(v for v in M if v)
        if lead == 1:
            return M
        s = k.gf_inv(lead, p, n, mod)
        return tuple(k.gf_mul(s, v, p, n, mod) for v in M)

    elements = []
    for M in itertools.product(range(q), repeat=dim * dim):
        if family == "PGL" and next((v for v in M if v), 0) != 1:
            continue
        det = _det(M, dim, p, n, mod, k)
        if det == 0 or (family == "SL" and det != 1):
            continue
        elements.append(M)

    identity = tuple(1 if i == j else 0 for i in range(dim) for j in range(dim))
    mul = lambda A, B: k.mat_mul(A, B, dim, p, n, mod)
    inv = lambda A: _mat_inv(A, dim, p, n, mod, k)
    if family == "PGL":
        mul_ = mul
        mul = lambda A, B: normalize(mul_(A, B))
        inv_ = inv
        inv = lambda A: normalize(inv_(A))
    G = _group(f"{family}{dim}(F{q})", elements, mul, inv, identity)
    G.generators = _small_generating_set(G)
    return G


def _small_generating_set(G: ExplicitStructure) -> tuple[int, ...]:
    """Deterministic generating set: greedily add elements of maximal order."""
    orders = sorted(range(G.order), key=lambda i: (-G.element_order(i), i))
    gens: list[int] = []
    covered = {G.identity}
    for g in orders:
        if len(covered) == G.order:
            break
        if g in covered:
            continue
        gens.append(g)
        covered = _index_closure(G, gens)
    return tuple(gens)


def _index_closure(G: ExplicitStructure, gens) -> set[int]:
    seen = {G.identity}
    frontier = [G.identity]
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = G.mul(x, g)
                if y not in seen:
                    seen.add(y)
                    nxt.append(y)
        frontier = nxt
    return seen


# -- encryption -----------------------------------------------------------

class EncryptionOracle:
    """Alice's secret: the codebook E and its inverse.

    ``encrypt`` models Alice encrypting chosen or known plaintexts.
    ``decrypt`` is the hidden inverse; every call is counted in
    ``decrypt_calls`` so that attack code can be shown never to use it.
    """

    def __init__(self, plain: ExplicitStructure, codewords: list[bytes], bits: int):
        self.plain = plain
        self.bits = bits
        self._codewords = codewords
        self._decode = {c: i for i, c in enumerate(codewords)}
        self.encrypt_calls = 0
        self.decrypt_calls = 0

    def encrypt(self, a: int) -> bytes:
        self.encrypt_calls += 1
        return self._codewords[a]

    def decrypt(self, c: bytes) -> int:
        self.decrypt_calls += 1
        return self._decode[c]

    def codewords(self) -> list[bytes]:
        """All codewords in plaintext-index order (verification only)."""
        return list(self._codewords)


def codeword_bits(order: int) -> int:
    return 2 * math.ceil(math.log2(order)) if order > 1 else 0


def encrypt(plain: ExplicitStructure, seed: int) -> tuple[BlackBox, EncryptionOracle]:
    """Hide ``plain`` behind a random injective codebook derived from ``seed``."""
    if plain.order > ENUMERATION_CAP:
        raise CapExceededError(f"{plain.name} exceeds the enumeration cap")
    bits = codeword_bits(plain.order)
    length = max(1, (bits + 7) // 8)
    rng = random.Random(f"codebook-{seed}")
    values = rng.sample(range(2**bits), plain.order)
    codewords = [v.to_bytes(length, "big") for v in values]
    decode = {c: i for i, c in enumerate(codewords)}

    def lift(fn, arity):
        if arity == 0:
            value = codewords[fn()]
            return lambda: value
        if arity == 1:
            return lambda x: codewords[fn(_lookup(decode, x))]
        return lambda x, y: codewords[fn(_lookup(decode, x), _lookup(decode, y))]

    ops = {op.name: lift(plain.ops[op.name], op.arity) for op in plain.signature.operations}
    box = BlackBox(
        plain.signature,
        length,
        uniform_sampler_factory(codewords),
        ops,
        seed=seed,
        name=f"E({plain.name})",
    )
    return box, EncryptionOracle(plain, codewords, bits)


def _lookup(decode, x):
    try:
        return decode[x]
    except KeyError:
        raise ValidationError("string is not a cryptoelement of this box") from None


# -- descriptors ----------------------------------------------------------

DESCRIPTOR_FORMS = ["f:p^n[/modulus]", "z:n", "units:n", "s:n", "a:n", "d:n", "sl2-q", "pgl2-q", "gl2-q"]
_PREFIXES = ["f", "z", "units", "s", "a", "d", "sl", "pgl", "gl"]


def parse_field_spec(text: str) -> FieldSpec:
    m = re.fullmatch(r"f:(\d+)\^(\d+)(?:/(.+))?", text.strip())
    if not m:
        m1 = re.fullmatch(r"f:(\d+)", text.strip())
        if not m1:
            raise ValidationError(f"bad field descriptor {text!r}; expected f:p^n[/modulus]")
        return FieldSpec.default(int(m1.group(1)), 1)
    p, n = int(m.group(1)), int(m.group(2))
    if m.group(3):
        return FieldSpec(p, n, parse_poly(m.group(3), p))
    return FieldSpec.default(p, n)


def _field_of_size(q: int) -> FieldSpec:
    for p in range(2, q + 1):
        if is_prime(p):
            n, r = 0, q
            while r % p == 0:
                r //= p
                n += 1
            if r == 1 and n:
                return FieldSpec.default(p, n)
            if q % p == 0:
                break
    raise ValidationError(f"{q} is not a prime power")


def parse_structure(text: str) -> ExplicitStructure:
    """Build the explicit structure named by a descriptor such as ``s:4`` or ``pgl2-3``."""
    t = text.strip().lower()
    if t.startswith("f:"):
        return make_field(parse_field_spec(t))
    m = re.fullmatch(r"(z|units|s|a|d)[:\-](\d+)", t)
    if m:
        kind, n = m.group(1), int(m.group(2))
        builder = {
            "z": make_cyclic_group,
            "units": make_unit_group,
            "s": make_symmetric_group,
            "a": make_alternating_group,
            "d": make_dihedral_group,
        }[kind]
        return builder(n)
    m = re.fullmatch(r"(sl|pgl|gl)(\d+)-(\d+)", t)
    if m:
        return make_matrix_group(m.group(1), int(m.group(2)), _field_of_size(int(m.group(3))))
    head = re.split(r"[:\-\d]", t, maxsplit=1)[0]
    close = difflib.get_close_matches(head, _PREFIXES, n=3, cutoff=0.5)
    close += [f for f in _PREFIXES if f not in close and head and (head.startswith(f) or f.startswith(head))]
    hint = f"; did you mean {', '.join(close)}?" if close else ""
    raise ValidationError(
        f"unknown structure descriptor {text!r}{hint} (forms: {', '.join(DESCRIPTOR_FORMS)})"
    )
