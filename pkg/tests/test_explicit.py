import itertools
import math

import pytest
from sympy.combinatorics import Permutation, PermutationGroup
from sympy.combinatorics.named_groups import AlternatingGroup, DihedralGroup, SymmetricGroup
from sympy.polys.domains import ZZ
from sympy.polys.galoistools import gf_irreducible_p

from blackbox_algebra.errors import CapExceededError, ValidationError
from blackbox_algebra.explicit import (
    FieldSpec,
    codeword_bits,
    cycles,
    default_modulus,
    encrypt,
    format_poly,
    frobenius,
    is_irreducible,
    make_cyclic_group,
    make_direct_product,
    make_field,
    make_matrix_group,
    make_unit_group,
    parse_field_spec,
    parse_poly,
    parse_structure,
)

SMALL = ["z:1", "z:6", "z:12", "units:7", "units:15", "s:3", "s:4", "a:4", "d:4", "d:5",
         "sl2-3", "pgl2-3", "gl2-2", "f:5", "f:3^2", "f:2^3", "f:7^2"]


def euler_phi(n):
    return sum(1 for k in range(1, n + 1) if math.gcd(k, n) == 1)


def check_group_laws(A):
    e = A.identity
    for a in range(A.order):
        assert A.mul(e, a) == a == A.mul(a, e)
        assert A.mul(a, A.inv(a)) == e
        for b in range(A.order):
            ab = A.mul(a, b)
            for c in range(A.order):
                assert A.mul(ab, c) == A.mul(a, A.mul(b, c))


def check_field_laws(F):
    add, mul = (lambda a, b: F.apply("add", a, b)), (lambda a, b: F.apply("mul", a, b))
    for a in range(F.order):
        assert add(a, F.apply("neg", a)) == 0
        if a:
            assert mul(a, F.apply("inv", a)) == 1
        for b in range(F.order):
            assert add(a, b) == add(b, a)
            assert mul(a, b) == mul(b, a)
            for c in range(F.order):
                assert mul(a, add(b, c)) == add(mul(a, b), mul(a, c))
                assert mul(mul(a, b), c) == mul(a, mul(b, c))


@pytest.mark.parametrize("desc", ["z:12", "units:15", "s:3", "s:4", "d:4", "sl2-3", "pgl2-3"])
def test_group_laws_exhaustive(desc):
    check_group_laws(parse_structure(desc))


@pytest.mark.parametrize("desc", ["f:5", "f:3^2", "f:2^3", "f:2^4"])
def test_field_laws_exhaustive(desc):
    check_field_laws(parse_structure(desc))


# -- cyclic and unit groups -------------------------------------------------

def test_trivial_cyclic_group():
    Z1 = make_cyclic_group(1)
    assert Z1.order == 1 and Z1.mul(0, 0) == 0


def test_cyclic_addition_and_order():
    Z6, Z12 = make_cyclic_group(6), make_cyclic_group(12)
    assert Z6.mul(2, 5) == 1
    assert Z12.element_order(4) == 3


@pytest.mark.parametrize("n", [2, 7, 15, 561])
def test_unit_group_orders(n):
    assert make_unit_group(n).order == euler_phi(n)


def test_units_mod_2_trivial():
    assert make_unit_group(2).order == 1


# -- permutation groups against sympy ---------------------------------------

@pytest.mark.parametrize(
    "desc,oracle",
    [("s:4", SymmetricGroup(4)), ("a:5", AlternatingGroup(5)), ("d:4", DihedralGroup(4)), ("d:6", DihedralGroup(6))],
)
def test_permutation_group_orders(desc, oracle):
    assert parse_structure(desc).order == oracle.order()


def test_permutation_product_convention():
    S3 = parse_structure("s:3")
    a, b = cycles(3, (1, 2)), cycles(3, (2, 3))
    ab = S3.element(S3.mul(S3.index(a), S3.index(b)))
    # apply a first, then b; sympy composes the same way with p*q
    assert ab == tuple((Permutation(list(a)) * Permutation(list(b))).array_form)


def test_s4_order_profile_matches_sympy():
    S4 = parse_structure("s:4")
    ours = sorted(S4.element_order(i) for i in range(24))
    theirs = sorted(p.order() for p in SymmetricGroup(4).elements)
    assert ours == theirs


# -- fields -----------------------------------------------------------------

def test_prime_field_multiplication():
    F5 = make_field(FieldSpec.default(5, 1))
    assert F5.apply("mul", 3, 4) == 2


def test_f9_x_squared():
    F9 = make_field(FieldSpec(3, 2, (1, 0, 1)))
    x = F9.index((0, 1))
    assert F9.apply("mul", x, x) == 2


def test_f2_is_valid():
    F2 = make_field(FieldSpec.default(2, 1))
    assert F2.order == 2 and F2.apply("add", 1, 1) == 0


def test_reducible_modulus_rejected():
    with pytest.raises(ValidationError):
        FieldSpec(3, 2, (2, 0, 1))  # x^2 + 2 = (x+1)(x+2)


@pytest.mark.parametrize("p,n", [(2, 2), (2, 3), (2, 4), (3, 2), (3, 3), (5, 2), (7, 2)])
def test_irreducibility_matches_sympy(p, n):
    for tail in itertools.product(range(p), repeat=n):
        poly = list(tail) + [1]
        assert is_irreducible(poly, p) == gf_irreducible_p(list(reversed(poly)), p, ZZ)


def test_default_moduli():
    assert default_modulus(3, 2) == (1, 0, 1)
    assert format_poly(default_modulus(3, 4)) == "x^4+x+2"


def test_frobenius_is_automorphism_fixing_prime_field():
    F = make_field(FieldSpec.default(3, 2))
    for a in range(9):
        for b in range(9):
            assert frobenius(F, F.apply("mul", a, b), 1) == F.apply("mul", frobenius(F, a, 1), frobenius(F, b, 1))
    fixed = [a for a in range(9) if frobenius(F, a, 1) == a]
    assert fixed == [0, 1, 2]


# -- matrix groups ----------------------------------------------------------

def test_matrix_group_orders():
    f3 = FieldSpec.default(3, 1)
    assert make_matrix_group("SL", 2, f3).order == 24
    assert make_matrix_group("PGL", 2, f3).order == 24
    assert make_matrix_group("GL", 1, FieldSpec.default(5, 1)).order == 4
    assert make_matrix_group("GL", 2, FieldSpec.default(2, 2)).order == 180


def test_pgl_representatives_are_normalized():
    G = parse_structure("pgl2-3")
    for M in G.elements:
        assert next(v for v in M if v) == 1


def test_matrix_group_cap():
    with pytest.raises(CapExceededError):
        make_matrix_group("GL", 3, FieldSpec.default(5, 1), cap=1000)


def test_direct_product():
    V = make_direct_product(make_cyclic_group(4), make_cyclic_group(2))
    assert V.order == 8
    assert max(V.element_order(a) for a in range(8)) == 4


# -- encryption -------------------------------------------------------------

@pytest.mark.parametrize("desc", SMALL)
def test_encryption_is_homomorphic_exhaustively(desc):
    A = parse_structure(desc)
    X, oracle = encrypt(A, seed=4)
    E = oracle.encrypt
    for op in A.signature.operations:
        if op.arity == 0:
            assert X.apply(op.name) == E(A.apply(op.name))
        elif op.arity == 1:
            for a in range(A.order):
                if op.name == "inv" and a == 0:
                    continue
                assert X.apply(op.name, E(a)) == E(A.apply(op.name, a))
        else:
            for a in range(A.order):
                for b in range(A.order):
                    assert X.apply(op.name, E(a), E(b)) == E(A.apply(op.name, a, b))


@pytest.mark.parametrize("desc", SMALL)
def test_decrypt_inverts_encrypt(desc):
    A = parse_structure(desc)
    _, oracle = encrypt(A, seed=1)
    assert [oracle.decrypt(oracle.encrypt(a)) for a in range(A.order)] == list(range(A.order))
    assert len(set(oracle.codewords())) == A.order


def test_seeds_give_different_codebooks():
    F9 = parse_structure("f:3^2")
    assert encrypt(F9, 1)[1].codewords() != encrypt(F9, 2)[1].codewords()


def test_identity_codeword_is_unique_idempotent():
    A = parse_structure("s:4")
    X, oracle = encrypt(A, 0)
    idem = [c for c in oracle.codewords() if X.equal(X.mul(c, c), c)]
    assert idem == [X.identity()]


def test_codeword_length():
    assert codeword_bits(24) == 10 and codeword_bits(81) == 14 and codeword_bits(1) == 0
    X, oracle = encrypt(parse_structure("f:3^4"), 0)
    assert all(int.from_bytes(c, "big") < 2**14 for c in oracle.codewords())


def test_foreign_string_rejected():
    X, oracle = encrypt(parse_structure("z:5"), 0)
    bad = next(bytes([v]) for v in range(256) if bytes([v]) not in oracle.codewords())
    with pytest.raises(ValidationError):
        X.mul(bad, bad)


def test_encrypted_sampler_is_uniform_over_codewords():
    X, oracle = encrypt(parse_structure("z:5"), 3)
    assert {X.sample() for _ in range(500)} == set(oracle.codewords())


# -- descriptors ------------------------------------------------------------

def test_parse_field_with_modulus():
    spec = parse_field_spec("f:3^4/x^4+x+2")
    assert spec.modulus == (2, 1, 0, 0, 1)
    assert parse_structure(spec.descriptor()).field_spec == spec


@pytest.mark.parametrize("text,order", [("units-561", 320), ("sl2-3", 24), ("z:15", 15), ("s-3", 6), ("f:7", 7)])
def test_parse_structure_orders(text, order):
    assert parse_structure(text).order == order


def test_unknown_descriptor_suggests():
    with pytest.raises(ValidationError, match="did you mean"):
        parse_structure("unit:7")


def test_parse_poly_signs():
    assert parse_poly("x^2-1", 3) == (2, 0, 1)
    with pytest.raises(ValidationError):
        parse_poly("x^^2", 3)
