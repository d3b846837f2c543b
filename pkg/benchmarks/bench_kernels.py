"""Compare the compiled and pure-Python arithmetic kernels.

Usage: python benchmarks/bench_kernels.py [--repeat N]

Prints per-call timings for each kernel on both backends, then times one
end-to-end workload (field recognition of F_{7^5} plus the S4 group attack)
in subprocesses with and without ``BBA_PURE_PYTHON``.
"""

import argparse
import os
import random
import subprocess
import sys
import timeit

from blackbox_algebra import _purepy, kernels
from blackbox_algebra.explicit import FieldSpec

WORKLOAD = """
import time
from blackbox_algebra import kernels
from blackbox_algebra.attack import attack_group_small
from blackbox_algebra.explicit import FieldSpec, encrypt, make_field, parse_structure
from blackbox_algebra.fields import recognize_field
from blackbox_algebra.isomorphism import generating_tuple
start = time.perf_counter()
spec = FieldSpec.default(7, 5)
X, _ = encrypt(make_field(spec), 0)
recognize_field(X, spec)
A = parse_structure("pgl2-5")
X, oracle = encrypt(A, 0)
attack_group_small(X, A, [(g, oracle.encrypt(g)) for g in generating_tuple(A)], oracle=oracle)
print(kernels.BACKEND, time.perf_counter() - start)
"""


def cases():
    rng = random.Random(0)
    out = []
    for p, n in [(3, 4), (7, 5), (2, 16)]:
        spec = FieldSpec.default(p, n)
        a, b = rng.randrange(1, spec.order), rng.randrange(1, spec.order)
        out.append((f"gf_mul F_{p}^{n}", "gf_mul", (a, b, p, n, spec.modulus)))
        out.append((f"gf_inv F_{p}^{n}", "gf_inv", (a, p, n, spec.modulus)))
    perm = list(range(12))
    rng.shuffle(perm)
    perm2 = perm[::-1]
    out.append(("perm_mul deg 12", "perm_mul", (tuple(perm), tuple(perm2))))
    spec = FieldSpec.default(3, 2)
    A = tuple(rng.randrange(9) for _ in range(9))
    B = tuple(rng.randrange(9) for _ in range(9))
    out.append(("mat_mul 3x3 F_9", "mat_mul", (A, B, 3, 3, 2, spec.modulus)))
    return out


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=20000)
    args = parser.parse_args()
    if kernels.compiled is None:
        print("compiled extension not available; only the pure backend can be timed")
    print(f"{'kernel':<20}{'pure (us)':>12}{'compiled (us)':>15}{'speedup':>10}")
    for label, name, call_args in cases():
        pure_t = timeit.timeit(lambda: getattr(_purepy, name)(*call_args), number=args.repeat)
        line = f"{label:<20}{1e6 * pure_t / args.repeat:>12.2f}"
        if kernels.compiled is not None:
            fast = getattr(kernels.compiled, name)
            fast_t = timeit.timeit(lambda: fast(*call_args), number=args.repeat)
            line += f"{1e6 * fast_t / args.repeat:>15.2f}{pure_t / fast_t:>9.1f}x"
        print(line)

    print("\nend-to-end: recognize F_7^5, attack PGL2(F_5)")
    for pure in (False, True):
        env = dict(os.environ)
        env.pop("BBA_PURE_PYTHON", None)
        if pure:
            env["BBA_PURE_PYTHON"] = "1"
        out = subprocess.run([sys.executable, "-c", WORKLOAD], env=env, capture_output=True, text=True, check=True)
        backend, seconds = out.stdout.split()
        print(f"  {backend:<8}{float(seconds):8.2f} s")


if __name__ == "__main__":
    main()
