"""Pure-Python arithmetic kernels.

Field elements of F_{p^n} are encoded as integers ``sum(c_i * p**i)`` where
``c_i`` are the coefficients of the representing polynomial (low degree
first).  ``modulus`` is the monic defining polynomial as a coefficient tuple
of length ``n + 1``.  Permutations are tuples acting on ``range(len(perm))``;
``perm_mul(a, b)`` applies ``a`` first.  Matrices are flat row-major tuples
of encoded field elements.
"""


def _digits(a, p, n):
    out = [0] * n
    for i in range(n):
        a, out[i] = divmod(a, p)
    return out


def _undigits(c, p):
    a = 0
    for x in reversed(c):
        a = a * p + x
    return a


def gf_add(a, b, p, n):
    if n == 1:
        return (a + b) % p
    r = 0
    q = 1
    for _ in range(n):
        a, da = divmod(a, p)
        b, db = divmod(b, p)
        r += ((da + db) % p) * q
        q *= p
    return r


def gf_neg(a, p, n):
    if n == 1:
        return (-a) % p
    r = 0
    q = 1
    for _ in range(n):
        a, da = divmod(a, p)
        r += ((-da) % p) * q
        q *= p
    return r


def gf_mul(a, b, p, n, modulus):
    if n == 1:
        return (a * b) % p
    x = _digits(a, p, n)
    y = _digits(b, p, n)
    prod = [0] * (2 * n - 1)
    for i, xi in enumerate(x):
        if xi:
            for j, yj in enumerate(y):
                prod[i + j] += xi * yj
    for k in range(2 * n - 2, n - 1, -1):
        c = prod[k] % p
        if c:
            # x^k = x^(k-n) * x^n and x^n = -sum(modulus[i] x^i)
            for i in range(n):
                prod[k - n + i] -= c * modulus[i]
        prod[k] = 0
    return _undigits([v % p for v in prod[:n]], p)


def gf_pow(a, e, p, n, modulus):
    if e < 0:
        a = gf_inv(a, p, n, modulus)
        e = -e
    result = 1
    while e:
        if e & 1:
            result = gf_mul(result, a, p, n, modulus)
        a = gf_mul(a, a, p, n, modulus)
        e >>= 1
    return result


def gf_inv(a, p, n, modulus):
    if a == 0:
        raise ZeroDivisionError("zero has no multiplicative inverse")
    if n == 1:
        return pow(a, p - 2, p)
    return gf_pow(a, p**n - 2, p, n, modulus)


def perm_mul(a, b):
    return tuple([b[i] for i in a])


def perm_inv(a):
    out = [0] * len(a)
    for i, ai in enumerate(a):
        out[ai] = i
    return tuple(out)


def mat_mul(A, B, d, p, n, modulus):
    out = []
    for i in range(d):
        for j in range(d):
            s = 0
            for k in range(d):
                s = gf_add(s, gf_mul(A[i * d + k], B[k * d + j], p, n, modulus), p, n)
            out.append(s)
    return tuple(out)
