"""Known-plaintext attacks on deterministic homomorphic encryption.

Both attacks follow the same pipeline.  Recognition yields ``alpha: X -> A``
and ``beta: A -> X``; the unknown automorphism ``delta = alpha o E`` is pinned
down from known plaintext pairs; then ``E^-1 = delta^-1 o alpha`` and
``E = beta o delta``.

The hidden inverse of the :class:`~blackbox_algebra.explicit.EncryptionOracle`
is consulted only in :func:`verify_recovery`, after the attack phase, and
the report records how many times it was called during the attack (always
zero).
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from typing import Callable

from .core import GROUP, BlackBox, ElementSet, QueryBudgetReport, enumerate_closure, power
from .errors import (
    CapExceededError,
    InsufficientPlaintextError,
    RecognitionInconsistency,
    ValidationError,
    WrongStructureError,
    BlackBoxError,
)
from .explicit import EncryptionOracle, ExplicitStructure, FieldSpec, _index_closure, frobenius, make_field
from .fields import recognize_field
from .isomorphism import Tabulation, are_isomorphic, find_isomorphisms, generating_tuple, invert_map

GROUP_CAP = 10**4


@dataclass
class AutomorphismHypothesis:
    description: dict
    forward: Callable[[int], int]
    inverse: Callable[[int], int]


@dataclass
class AttackReport:
    success: bool
    structure: str
    outcome: str
    delta: dict | None
    known_used: int
    budget: QueryBudgetReport
    verification: dict = field(default_factory=lambda: {"checked": 0, "mismatches": 0})
    hidden_inverse_calls_during_attack: int = 0
    survivors: list = field(default_factory=list)

    def as_dict(self) -> dict:
        return {
            "success": self.success,
            "structure": self.structure,
            "outcome": self.outcome,
            "delta": self.delta,
            "known_used": self.known_used,
            "query_budget": self.budget.as_dict(),
            "verification": dict(self.verification),
            "hidden_inverse_calls_during_attack": self.hidden_inverse_calls_during_attack,
        }


@dataclass
class AttackResult:
    decrypt: Callable[[bytes], int]
    encrypt: Callable[[int], bytes]
    report: AttackReport
    delta: AutomorphismHypothesis

    def __iter__(self):
        return iter((self.decrypt, self.encrypt, self.report))


def _hidden_calls(oracle):
    return oracle.decrypt_calls if oracle is not None else 0


def verify_recovery(decrypt, encrypt, oracle: EncryptionOracle) -> dict:
    """Compare recovered maps with the hidden codebook over the whole structure."""
    mismatches = 0
    codewords = oracle.codewords()
    for a, c in enumerate(codewords):
        if decrypt(c) != oracle.decrypt(c) or encrypt(a) != c:
            mismatches += 1
    return {"checked": len(codewords), "mismatches": mismatches}


def _finish(X, structure, delta, decrypt, encrypt, known, start, oracle, hidden_before):
    budget = X.budget() - start
    hidden = _hidden_calls(oracle) - hidden_before
    report = AttackReport(True, structure, "recovered", delta.description, len(known), budget,
                          hidden_inverse_calls_during_attack=hidden)
    if oracle is not None:
        report.verification = verify_recovery(decrypt, encrypt, oracle)
        report.success = report.verification["mismatches"] == 0
        if not report.success:
            report.outcome = "verification_failed"
    return AttackResult(decrypt, encrypt, report, delta)


# -- fields ---------------------------------------------------------------

def frobenius_survivors(alpha, A: ExplicitStructure, known) -> list[int]:
    n = A.field_spec.n
    return [k for k in range(n) if all(alpha(c) == frobenius(A, a, k) for a, c in known)]


def attack_field(
    X: BlackBox,
    spec: FieldSpec,
    known: list[tuple[int, bytes]],
    oracle: EncryptionOracle | None = None,
    method: str = "table",
) -> AttackResult:
    """Recover E and E^-1 for a box encrypting F_{spec}.

    ``delta`` ranges over the Frobenius powers ``a -> a**(p**k)``.  Raises
    :class:`InsufficientPlaintextError` when several survive and
    :class:`RecognitionInconsistency` when none does.
    """
    start = X.budget()
    hidden_before = _hidden_calls(oracle)
    R = recognize_field(X, spec, method=method)
    A = make_field(spec)
    n = spec.n
    survivors = frobenius_survivors(R.alpha, A, known)
    if not survivors:
        raise RecognitionInconsistency("no field automorphism matches the known plaintexts")
    if len(survivors) > 1:
        report = AttackReport(False, spec.descriptor(), "insufficient_plaintext",
                              {"frobenius_exponents": survivors}, len(known), X.budget() - start,
                              hidden_inverse_calls_during_attack=_hidden_calls(oracle) - hidden_before,
                              survivors=survivors)
        raise InsufficientPlaintextError(
            f"{len(survivors)} Frobenius exponents fit the known plaintexts", survivors, report
        )
    k = survivors[0]
    delta = AutomorphismHypothesis(
        {"kind": "frobenius", "exponent": k, "map": f"a -> a^({spec.p}^{k})"},
        lambda a: frobenius(A, a, k),
        lambda a: frobenius(A, a, n - k),
    )
    decrypt = lambda c: delta.inverse(R.alpha(c))
    encrypt = lambda a: R.beta(delta.forward(a))
    return _finish(X, spec.descriptor(), delta, decrypt, encrypt, known, start, oracle, hidden_before)


# -- groups ---------------------------------------------------------------

def discover_generators(X: BlackBox, order: int, max_draws: int | None = None) -> list[bytes]:
    """Draw samples until they generate a subgroup of size ``order``.

    Raises :class:`WrongStructureError` when the closure outgrows ``order``
    or stays smaller after ``max_draws`` draws.
    """
    if max_draws is None:
        max_draws = 40 + 4 * max(1, order.bit_length())
    gens: list[bytes] = []
    span = ElementSet(X, [X.identity()])
    for _ in range(max_draws):
        if len(span) == order:
            return gens
        x = X.sample()
        if x in span:
            continue
        gens.append(x)
        try:
            span = ElementSet(X, enumerate_closure(X, gens, order))
        except CapExceededError as exc:
            raise WrongStructureError(f"box has more than {order} elements") from exc
    if len(span) == order:
        return gens
    raise WrongStructureError(f"samples span only {len(span)} of the expected {order} elements")


def _fit_automorphisms(A: ExplicitStructure, fixed: dict[int, int], limit: int) -> list[list[int]]:
    known_gens = tuple(fixed)
    if known_gens and len(_index_closure(A, known_gens)) == A.order:
        return list(find_isomorphisms(A, A, gens=known_gens, fixed=fixed, limit=limit))
    return list(find_isomorphisms(A, A, fixed=fixed, limit=limit))


def attack_group_small(
    X: BlackBox,
    A: ExplicitStructure,
    known: list[tuple[int, bytes]],
    oracle: EncryptionOracle | None = None,
    cap: int = GROUP_CAP,
    survivor_limit: int = 64,
) -> AttackResult:
    """Brute-force constructive recognition of a small group box, then fit delta."""
    if A.signature.kind != "group":
        raise ValidationError("attack_group_small needs a group structure")
    if A.order > cap:
        raise CapExceededError(f"|A| = {A.order} exceeds the desk cap {cap}")
    start = X.budget()
    hidden_before = _hidden_calls(oracle)
    gens = discover_generators(X, A.order)
    T = Tabulation(X, gens, A.order)
    psi = next(find_isomorphisms(A, T.structure), None)
    if psi is None:
        raise WrongStructureError(f"box does not encrypt a group isomorphic to {A.name}")
    psi_inv = invert_map(psi)

    def alpha(c):
        i = T.find(c)
        if i is None:
            raise ValidationError("string is not an element of the recognized group")
        return psi_inv[i]

    def beta(a):
        return T.elements[psi[a]]

    fixed = {}
    for a, c in known:
        d = alpha(c)
        if fixed.setdefault(a, d) != d:
            raise RecognitionInconsistency("known pairs disagree")
    auts = _fit_automorphisms(A, fixed, survivor_limit)
    if not auts:
        raise RecognitionInconsistency("no automorphism of A matches the known plaintexts")
    if len(auts) > 1:
        described = [{"images_of_generators": [m[g] for g in generating_tuple(A)]} for m in auts]
        report = AttackReport(False, A.name, "insufficient_plaintext", {"survivors": described},
                              len(known), X.budget() - start,
                              hidden_inverse_calls_during_attack=_hidden_calls(oracle) - hidden_before,
                              survivors=described)
        raise InsufficientPlaintextError(
            f"at least {len(auts)} automorphisms fit the known plaintexts", described, report
        )
    delta_map = auts[0]
    delta_inv = invert_map(delta_map)
    gen_tuple = generating_tuple(A)
    delta = AutomorphismHypothesis(
        {"kind": "generator_images", "generators": list(gen_tuple),
         "images": [delta_map[g] for g in gen_tuple]},
        delta_map.__getitem__,
        delta_inv.__getitem__,
    )
    decrypt = lambda c: delta_inv[alpha(c)]
    encrypt = lambda a: beta(delta_map[a])
    return _finish(X, A.name, delta, decrypt, encrypt, known, start, oracle, hidden_before)


# -- verification ---------------------------------------------------------

def _declared_cyclic(A: ExplicitStructure) -> bool:
    return A.signature.kind == "group" and len(A.generators) == 1


def verify_encrypts(X: BlackBox, A: ExplicitStructure, confidence: int = 40, cap: int = GROUP_CAP) -> bool:
    """Does X encrypt A?  ``False`` comes with a witness; ``True`` is Monte-Carlo.

    Enumerable targets: samples are closed up and the result compared with A
    by isomorphism search.  Larger cyclic targets: every sample must satisfy
    ``x**|A| == 1`` and pairs of samples must commute.
    """
    if A.signature.kind != X.signature.kind:
        return False
    if A.signature.kind == "field":
        try:
            recognize_field(X, A.field_spec)
        except BlackBoxError:
            return False
        return True
    if A.order <= cap:
        try:
            gens = discover_generators(X, A.order, max_draws=confidence + A.order.bit_length())
        except WrongStructureError:
            return False
        span = ElementSet(X, enumerate_closure(X, gens, A.order))
        for _ in range(confidence):
            if X.sample() not in span:
                return False
        T = Tabulation(X, gens, A.order) if gens else None
        if T is None:
            return A.order == 1
        return are_isomorphic(A, T.structure)
    if _declared_cyclic(A):
        e = X.identity()
        for _ in range(confidence):
            x, y = X.sample(), X.sample()
            if not X.equal(power(X, x, A.order), e):
                return False
            if not X.equal(X.mul(x, y), X.mul(y, x)):
                return False
        return True
    raise CapExceededError(f"{A.name} is too large to verify exhaustively")


# -- Miller-Rabin ---------------------------------------------------------

@dataclass
class MillerRabinResult:
    n: int
    verdict: str
    rounds: int
    witness: int | None
    error_bound: float
    budget: QueryBudgetReport


def residue_unit_box(n: int, seed: int = 0) -> BlackBox:
    """(Z/nZ)* with residues as cryptoelements; sampling rejects non-units."""
    length = max(1, (n.bit_length() + 7) // 8)
    enc = lambda r: r.to_bytes(length, "big")
    dec = lambda b: int.from_bytes(b, "big")

    def factory(s):
        rng = random.Random(s)

        def sample():
            while True:
                r = rng.randrange(1, n)
                if math.gcd(r, n) == 1:
                    return enc(r)

        return sample

    ops = {
        "product": lambda a, b: enc(dec(a) * dec(b) % n),
        "inverse": lambda a: enc(pow(dec(a), -1, n)),
        "identity": lambda: enc(1 % n),
    }
    box = BlackBox(GROUP, length, factory, ops, seed=seed, name=f"(Z/{n}Z)*")
    box.encode_residue = enc
    box.decode_residue = dec
    return box


def miller_rabin_bb(n: int, rounds: int = 40, seed: int = 0) -> MillerRabinResult:
    """Strong-pseudoprime test run through the oracles of the (Z/nZ)* box.

    A composite verdict is certain; ``probably_prime`` errs with probability
    at most ``4**-rounds``.
    """
    if n < 3 or n % 2 == 0:
        raise ValidationError("Miller-Rabin needs an odd n >= 3")
    X = residue_unit_box(n, seed)
    start = X.budget()
    one = X.identity()
    minus_one = X.encode_residue(n - 1)
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for _ in range(rounds):
        a = X.sample()
        x = power(X, a, d)
        if X.equal(x, one) or X.equal(x, minus_one):
            continue
        for _ in range(s - 1):
            x = X.mul(x, x)
            if X.equal(x, minus_one):
                break
        else:
            return MillerRabinResult(n, "composite", rounds, X.decode_residue(a), 0.0, X.budget() - start)
    return MillerRabinResult(n, "probably_prime", rounds, None, 4.0**-rounds, X.budget() - start)
