# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled twins of the kernels in ``_purepy``.

Same encodings and semantics.  Field kernels require ``n <= MAX_DEGREE`` and
``p**n < 2**62``; callers route larger fields to the pure-Python versions.
"""

cdef enum:
    _MAXN = 32

MAX_DEGREE = _MAXN


cdef inline long long _mod(long long a, long long p) nogil:
    a %= p
    return a + p if a < 0 else a


cdef void _digits(long long a, long long p, int n, long long* out) nogil:
    cdef int i
    for i in range(n):
        out[i] = a % p
        a //= p


cdef long long _undigits(long long* c, long long p, int n) nogil:
    cdef long long a = 0
    cdef int i
    for i in range(n - 1, -1, -1):
        a = a * p + c[i]
    return a


cdef long long _gf_add(long long a, long long b, long long p, int n) nogil:
    cdef long long r = 0, q = 1
    cdef int i
    if n == 1:
        return (a + b) % p
    for i in range(n):
        r += ((a % p + b % p) % p) * q
        a //= p
        b //= p
        q *= p
    return r


cdef long long _gf_mul(long long a, long long b, long long p, int n, long long* m) nogil:
    cdef long long x[_MAXN]
    cdef long long y[_MAXN]
    cdef long long prod[2 * _MAXN]
    cdef int i, j, k
    cdef long long c
    if n == 1:
        return (a * b) % p
    _digits(a, p, n, x)
    _digits(b, p, n, y)
    for k in range(2 * n - 1):
        prod[k] = 0
    for i in range(n):
        if x[i]:
            for j in range(n):
                prod[i + j] = (prod[i + j] + x[i] * y[j]) % p
    for k in range(2 * n - 2, n - 1, -1):
        c = prod[k] % p
        if c:
            for i in range(n):
                prod[k - n + i] = _mod(prod[k - n + i] - c * m[i], p)
        prod[k] = 0
    for i in range(n):
        prod[i] = _mod(prod[i], p)
    return _undigits(prod, p, n)


cdef int _load_modulus(object modulus, int n, long long* m) except -1:
    cdef int i
    if n > _MAXN:
        raise ValueError("extension degree too large for compiled kernel")
    for i in range(n):
        m[i] = modulus[i]
    return 0


def gf_add(long long a, long long b, long long p, int n):
    return _gf_add(a, b, p, n)


def gf_neg(long long a, long long p, int n):
    cdef long long r = 0, q = 1
    cdef int i
    if n == 1:
        return (p - a % p) % p
    for i in range(n):
        r += ((p - a % p) % p) * q
        a //= p
        q *= p
    return r


def gf_mul(long long a, long long b, long long p, int n, modulus):
    cdef long long m[_MAXN]
    _load_modulus(modulus, n, m)
    return _gf_mul(a, b, p, n, m)


cdef long long _gf_pow(long long a, object e, long long p, int n, long long* m):
    cdef long long result = 1
    while e:
        if e & 1:
            result = _gf_mul(result, a, p, n, m)
        a = _gf_mul(a, a, p, n, m)
        e >>= 1
    return result


def gf_pow(long long a, e, long long p, int n, modulus):
    cdef long long m[_MAXN]
    _load_modulus(modulus, n, m)
    if e < 0:
        a = gf_inv(a, p, n, modulus)
        e = -e
    return _gf_pow(a, e, p, n, m)


def gf_inv(long long a, long long p, int n, modulus):
    cdef long long m[_MAXN]
    if a == 0:
        raise ZeroDivisionError("zero has no multiplicative inverse")
    _load_modulus(modulus, n, m)
    return _gf_pow(a, int(p) ** n - 2, p, n, m)


def perm_mul(tuple a, tuple b):
    cdef Py_ssize_t i, k = len(a)
    out = [None] * k
    for i in range(k):
        out[i] = b[<Py_ssize_t>a[i]]
    return tuple(out)


def perm_inv(tuple a):
    cdef Py_ssize_t i, k = len(a)
    out = [0] * k
    for i in range(k):
        out[<Py_ssize_t>a[i]] = i
    return tuple(out)


def mat_mul(tuple A, tuple B, int d, long long p, int n, modulus):
    cdef long long m[_MAXN]
    cdef long long s
    cdef int i, j, k
    _load_modulus(modulus, n, m)
    out = [0] * (d * d)
    for i in range(d):
        for j in range(d):
            s = 0
            for k in range(d):
                s = _gf_add(s, _gf_mul(A[i * d + k], B[k * d + j], p, n, m), p, n)
            out[i * d + j] = s
    return tuple(out)
