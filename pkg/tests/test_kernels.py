import pytest
from hypothesis import given, settings, strategies as st
from sympy.polys.domains import ZZ
from sympy.polys.galoistools import gf_mul, gf_rem

from blackbox_algebra import _purepy, kernels
from blackbox_algebra.explicit import FieldSpec

SPECS = [FieldSpec.default(2, 5), FieldSpec.default(3, 4), FieldSpec.default(5, 3), FieldSpec.default(7, 2), FieldSpec.default(13, 1)]
BACKENDS = [_purepy] + ([kernels.compiled] if kernels.compiled is not None else [])


def oracle_mul(a, b, spec):
    # sympy galoistools uses high-degree-first coefficient lists
    x = list(reversed(spec.coefficients(a)))
    y = list(reversed(spec.coefficients(b)))
    m = list(reversed(spec.modulus))
    r = gf_rem(gf_mul(x, y, spec.p, ZZ), m, spec.p, ZZ)
    return spec.encode(list(reversed([int(c) for c in r])))


def test_backend_reported():
    assert kernels.BACKEND in ("cython", "python")


@pytest.mark.parametrize("k", BACKENDS, ids=lambda m: m.__name__.rsplit(".", 1)[-1])
@pytest.mark.parametrize("spec", SPECS, ids=lambda s: s.descriptor())
def test_field_mul_matches_polynomial_oracle(k, spec):
    q = spec.order
    step = max(1, q // 40)
    for a in range(0, q, step):
        for b in range(0, q, step):
            assert k.gf_mul(a, b, spec.p, spec.n, spec.modulus) == oracle_mul(a, b, spec)


@pytest.mark.parametrize("k", BACKENDS, ids=lambda m: m.__name__.rsplit(".", 1)[-1])
def test_f9_x_squared_is_minus_one(k):
    # F_9 = F_3[x]/(x^2+1): x*x = -1 = 2
    assert k.gf_mul(3, 3, 3, 2, (1, 0, 1)) == 2


@pytest.mark.skipif(kernels.compiled is None, reason="compiled kernels not built")
@settings(max_examples=300, deadline=None)
@given(st.sampled_from(SPECS), st.data())
def test_compiled_matches_pure(spec, data):
    q = spec.order
    a = data.draw(st.integers(0, q - 1))
    b = data.draw(st.integers(0, q - 1))
    e = data.draw(st.integers(-50, 10**6))
    c, p = kernels.compiled, _purepy
    args = (spec.p, spec.n)
    assert c.gf_add(a, b, *args) == p.gf_add(a, b, *args)
    assert c.gf_neg(a, *args) == p.gf_neg(a, *args)
    assert c.gf_mul(a, b, *args, spec.modulus) == p.gf_mul(a, b, *args, spec.modulus)
    if a:
        assert c.gf_inv(a, *args, spec.modulus) == p.gf_inv(a, *args, spec.modulus)
        assert c.gf_pow(a, e, *args, spec.modulus) == p.gf_pow(a, e, *args, spec.modulus)


@pytest.mark.skipif(kernels.compiled is None, reason="compiled kernels not built")
@given(st.permutations(range(7)), st.permutations(range(7)))
def test_compiled_permutations_match_pure(a, b):
    a, b = tuple(a), tuple(b)
    assert kernels.compiled.perm_mul(a, b) == _purepy.perm_mul(a, b)
    assert kernels.compiled.perm_inv(a) == _purepy.perm_inv(a)


@pytest.mark.parametrize("k", BACKENDS, ids=lambda m: m.__name__.rsplit(".", 1)[-1])
def test_perm_mul_applies_left_first(k):
    a = (1, 0, 2)  # (12)
    b = (0, 2, 1)  # (23)
    # i -> b[a[i]]: 0 -> 1 -> 2
    assert k.perm_mul(a, b) == (2, 0, 1)
    assert k.perm_mul(a, k.perm_inv(a)) == (0, 1, 2)


@pytest.mark.parametrize("k", BACKENDS, ids=lambda m: m.__name__.rsplit(".", 1)[-1])
def test_mat_mul_prime_field(k):
    A = (1, 2, 0, 1)
    B = (1, 0, 1, 1)
    # over F_3: [[1,2],[0,1]] @ [[1,0],[1,1]] = [[3,2],[1,1]] = [[0,2],[1,1]]
    assert k.mat_mul(A, B, 2, 3, 1, (0, 1)) == (0, 2, 1, 1)


@pytest.mark.parametrize("k", BACKENDS, ids=lambda m: m.__name__.rsplit(".", 1)[-1])
def test_inverse_of_zero_raises(k):
    with pytest.raises(ZeroDivisionError):
        k.gf_inv(0, 3, 2, (1, 0, 1))


def test_env_var_forces_pure_backend():
    import os
    import subprocess
    import sys

    env = dict(os.environ, BBA_PURE_PYTHON="1")
    out = subprocess.run(
        [sys.executable, "-c", "from blackbox_algebra import kernels; print(kernels.BACKEND)"],
        env=env, capture_output=True, text=True, check=True,
    )
    assert out.stdout.strip() == "python"
