"""Acceptance gate: one test and one PASS/FAIL line per criterion.

Lines are printed as each criterion finishes (visible with ``-s``) and
repeated in the terminal summary by the hook in ``conftest.py``.
"""

import functools
import json
import random
import time

import pytest

from blackbox_algebra.attack import attack_field, attack_group_small, miller_rabin_bb, verify_recovery
from blackbox_algebra.cli import run
from blackbox_algebra.constructions import amalgamate, augment, check_function, conjugation_graph, graph_subgroup, reify
from blackbox_algebra.core import ElementSet
from blackbox_algebra.demos import inconsistent_klein, s4_amalgam, same_subgroup, z3_inversion
from blackbox_algebra.errors import InconsistencyError, NotInnerError
from blackbox_algebra.explicit import (
    FieldSpec,
    cycles,
    encrypt,
    make_cyclic_group,
    make_field,
    make_symmetric_group,
    parse_structure,
)
from blackbox_algebra.fields import discrete_log, embed_prime_field, primitive_root, recognize_field
from blackbox_algebra.isomorphism import are_isomorphic, automorphisms, generating_tuple, tabulate
from blackbox_algebra.sampling import pr_init, uniformity_report

RESULTS: dict[int, tuple[bool, str, str]] = {}

FIELD_CASES = [(3, 2), (3, 4), (5, 3), (7, 2)]
FIELD_SEEDS = range(10)
GROUP_CASES = ["z:15", "s:3", "d:4", "s:4", "pgl2-3"]
GROUP_SEEDS = range(5)
PR_GROUPS = ["z:12", "s:3", "d:4", "a:5", "sl2-3"]


def record(number, title, ok, detail):
    RESULTS[number] = (ok, title, detail)
    print(f"[{'PASS' if ok else 'FAIL'}] criterion {number:2d} {title}: {detail}")
    assert ok, detail


def primes_upto(n):
    return [p for p in range(2, n + 1) if all(p % d for d in range(2, int(p**0.5) + 1))]


def run_cli(argv, tmp_path):
    out = tmp_path / "report.json"
    start = time.perf_counter()
    code = run(argv + ["--out", str(out)])
    elapsed = time.perf_counter() - start
    return code, json.loads(out.read_text()), elapsed


@functools.lru_cache(maxsize=None)
def field_runs(tmp_root):
    """All criterion-1 CLI runs, shared with criterion 11."""
    import pathlib

    rows = []
    for p, n in FIELD_CASES:
        for seed in FIELD_SEEDS:
            path = pathlib.Path(tmp_root)
            code, rep, elapsed = run_cli(
                ["field-attack", "--spec", f"f:{p}^{n}", "--seed", str(seed), "--known", "1"], path
            )
            rows.append(((p, n, seed), code, rep, elapsed))
    return rows


@functools.lru_cache(maxsize=None)
def group_runs(tmp_root):
    import pathlib

    rows = []
    for desc in GROUP_CASES:
        known = min(2, len(generating_tuple(parse_structure(desc))))
        for seed in GROUP_SEEDS:
            code, rep, elapsed = run_cli(
                ["group-attack", "--structure", desc, "--seed", str(seed), "--known", str(known)],
                pathlib.Path(tmp_root),
            )
            rows.append(((desc, seed, known), code, rep, elapsed))
    return rows


@pytest.fixture(scope="module")
def tmp_root(tmp_path_factory):
    return str(tmp_path_factory.mktemp("acceptance"))


def test_criterion_01_field_attack(tmp_root):
    rows = field_runs(tmp_root)
    bad = [
        cfg for cfg, code, rep, elapsed in rows
        if code != 0 or not rep["success"] or rep["verification"]["mismatches"] != 0
        or rep["verification"]["checked"] != cfg[0] ** cfg[1] or elapsed >= 5.0
    ]
    slowest = max(r[3] for r in rows)
    record(1, "field attack end-to-end", not bad,
           f"{len(rows) - len(bad)}/{len(rows)} runs recovered E^-1 with 0 mismatches, slowest {slowest:.2f}s"
           + (f"; failing {bad}" if bad else ""))


def test_criterion_02_recognition_contract():
    failures = []
    checked = 0
    for p, n in FIELD_CASES:
        spec = FieldSpec.default(p, n)
        A = make_field(spec)
        q = spec.order
        for seed in FIELD_SEEDS:
            X, _ = encrypt(A, seed)
            R = recognize_field(X, spec)
            beta = [R.beta(a) for a in range(q)]
            if [R.alpha(b) for b in beta] != list(range(q)):
                failures.append((p, n, seed, "alpha o beta"))
                continue
            for a in range(q):
                for b in range(q):
                    if (X.apply("add", beta[a], beta[b]) != beta[A.apply("add", a, b)]
                            or X.apply("mul", beta[a], beta[b]) != beta[A.apply("mul", a, b)]):
                        failures.append((p, n, seed, "homomorphism", a, b))
                        break
                else:
                    continue
                break
            checked += 1
    record(2, "recognition contract", not failures,
           f"{checked} instances: alpha o beta = id and beta preserves + and * on all pairs"
           + (f"; failing {failures[:5]}" if failures else ""))


def test_criterion_03_prime_embedding():
    failures = []
    primes = primes_upto(97)
    for p in primes:
        X, _ = encrypt(make_field(FieldSpec.default(p, 1)), p)
        emb = embed_prime_field(X, p)
        img = [emb.image(m) for m in range(p)]
        for a in range(p):
            for b in range(p):
                if X.apply("add", img[a], img[b]) != img[(a + b) % p] or X.apply("mul", img[a], img[b]) != img[a * b % p]:
                    failures.append((p, a, b))
        if p > 2:
            r = primitive_root(p)
            g = emb.image(r)
            for m in range(1, p):
                k = discrete_log(emb, g, img[m])
                if not X.equal(img[pow(r, k, p)], img[m]):
                    failures.append((p, "dlog", m))
    record(3, "prime embedding and discrete log", not failures,
           f"{len(primes)} primes <= 97 exhaustively additive, multiplicative, dlog inverts"
           + (f"; failing {failures[:5]}" if failures else ""))


def test_criterion_04_miller_rabin():
    primes = set(primes_upto(2000))
    disagreements = []
    for seed in range(5):
        for n in range(3, 2001, 2):
            verdict = miller_rabin_bb(n, 40, seed).verdict
            if (verdict == "probably_prime") != (n in primes):
                disagreements.append((seed, n, verdict))
    carmichael = {n: miller_rabin_bb(n, 40, 0).verdict for n in (561, 1105, 1729)}
    ok = not disagreements and all(v == "composite" for v in carmichael.values())
    record(4, "Miller-Rabin black-box verification", ok,
           f"5 seeds x 999 odd n agree with trial division ({len(disagreements)} disagreements); "
           f"Carmichael verdicts {carmichael}")


def test_criterion_05_product_replacement():
    pvalues = {}
    degenerate = {}
    for desc in PR_GROUPS:
        A = parse_structure(desc)
        X, oracle = encrypt(A, 1)
        gens = [oracle.encrypt(g) for g in generating_tuple(A)]
        rep = uniformity_report(X, gens, 1000 * A.order, burn_in=100, seed=1)
        pvalues[desc] = rep.p_value
        state = pr_init(X, gens, burn_in=0)
        broken = uniformity_report(X, gens, 1000 * A.order, sampler=lambda: state.slots[0])
        degenerate[desc] = broken.p_value
    ok = all(p > 1e-3 for p in pvalues.values()) and all(p < 1e-6 for p in degenerate.values())
    shown = ", ".join(f"{d} p={p:.3g}" for d, p in pvalues.items())
    record(5, "product replacement uniformity", ok,
           f"{shown}; degenerate max p={max(degenerate.values()):.1e}")


def _random_homomorphism(rng):
    """(A, B, phi) with phi a genuine homomorphism A -> B given as a list."""
    kind = rng.choice(["automorphism", "cyclic", "sign", "trivial", "projection"])
    if kind == "automorphism":
        A = parse_structure(rng.choice(["s:3", "d:4", "z:12", "s:4"]))
        return A, A, rng.choice(automorphisms(A))
    if kind == "cyclic":
        n = rng.choice([4, 6, 8, 12])
        m = rng.choice([d for d in range(2, n + 1) if n % d == 0])
        k = rng.randrange(m)
        return make_cyclic_group(n), make_cyclic_group(m), [k * a % m for a in range(n)]
    if kind == "sign":
        A = parse_structure(rng.choice(["s:3", "s:4"]))
        inversions = lambda p: sum(p[i] > p[j] for i in range(len(p)) for j in range(i + 1, len(p)))
        return A, make_cyclic_group(2), [inversions(A.element(a)) % 2 for a in range(A.order)]
    if kind == "trivial":
        return parse_structure("d:5"), make_cyclic_group(3), [0] * 10
    # D4 -> Z2 reading off whether the symmetry reverses orientation
    A = parse_structure("d:4")
    flips = [int((A.element(a)[1] - A.element(a)[0]) % 4 != 1) for a in range(A.order)]
    return A, make_cyclic_group(2), flips


def test_criterion_06_morphism_graphs():
    rng = random.Random(2024)
    failures = []
    kinds = []
    for inst in range(10):
        A, B, phi = _random_homomorphism(rng)
        assert all(phi[A.mul(a, b)] == B.mul(phi[a], phi[b]) for a in range(A.order) for b in range(A.order))
        X, ox = encrypt(A, 100 + inst)
        Y, oy = encrypt(B, 200 + inst)
        pairs = [(ox.encrypt(g), oy.encrypt(phi[g])) for g in generating_tuple(A)]
        G = graph_subgroup(X, Y, pairs, seed=inst)
        if not check_function(G, direction="X->Y"):
            failures.append((inst, "check_function"))
            continue
        members = ElementSet(G.product, G.members())
        expected = {ox.encrypt(a) + oy.encrypt(phi[a]) for a in range(A.order)}
        if set(members.items) != expected:
            failures.append((inst, "graph"))
        sampler = G.box.clone(inst)
        for _ in range(1000):
            x1, y1 = G.split(sampler.sample())
            x2, y2 = G.split(sampler.sample())
            if X.mul(x1, x2) + Y.mul(y1, y2) not in members:
                failures.append((inst, "product membership"))
                break
        kinds.append(f"{A.name}->{B.name}")
    Z4, oz = encrypt(make_cyclic_group(4), 0)
    E = oz.encrypt
    bad = graph_subgroup(Z4, Z4, [(E(1), E(1)), (E(1), E(3))])
    inconsistent_rejected = not check_function(bad)
    record(6, "morphism graphs", not failures and inconsistent_rejected,
           f"10 instances ({', '.join(kinds)}) pass with 1000 sampled product pairs each; "
           f"inconsistent Z4 fixture rejected={inconsistent_rejected}"
           + (f"; failing {failures}" if failures else ""))


def test_criterion_07_amalgamation():
    fx = s4_amalgam(0)
    F, ref = fx["amalgam"], fx["reference"]
    # exhaustive: every member is (g, t^-1 g t) for all 24 g
    X, S4, oracle, t = fx["box"], fx["S4"], fx["oracle"], fx["t"]
    ti = X.inv(t)
    expected = {oracle.encrypt(a) + X.mul(X.mul(ti, oracle.encrypt(a)), t) for a in range(24)}
    exact = set(F.members()) == expected and same_subgroup(F, ref)
    try:
        amalgamate(inconsistent_klein(0)["parts"])
        raised = False
    except InconsistencyError:
        raised = True
    record(7, "amalgamation", exact and raised,
           f"amalgam has {len(F.members())} members equal to conjugation by (12)(34): {exact}; "
           f"inconsistent fixture raised: {raised}")


def test_criterion_08_reification():
    fx = s4_amalgam(0)
    X, F, S4, oracle = fx["box"], fx["amalgam"], fx["S4"], fx["oracle"]
    t_hat = reify(X, F)
    order_two = X.equal(X.mul(t_hat, t_hat), X.identity()) and not X.equal(t_hat, X.identity())
    full_gens = [oracle.encrypt(g) for g in S4.generators]
    matches = same_subgroup(conjugation_graph(X, t_hat, full_gens), F)
    plain = S4.element(oracle.decrypt(t_hat))
    z3 = z3_inversion(0)
    try:
        reify(z3["box"], z3["F"])
        not_inner = False
    except NotInnerError:
        not_inner = True
    record(8, "reification", order_two and matches and not_inner,
           f"order-2 element found (plaintext {plain}); conjugation graph equals F on 24 elements: {matches}; "
           f"Z3 inversion not inner: {not_inner}")


def test_criterion_09_augmentation():
    fx = z3_inversion(0)
    F = fx["F"]
    G = augment(F)
    swap = F.box.identity() + b"\x01"
    squares = G.equal(G.mul(swap, swap), G.identity())
    gens = [g + b"\x00" for g in F.generators] + [swap]
    T = tabulate(G, gens)
    iso = are_isomorphic(T.structure, make_symmetric_group(3))
    doubled = T.structure.order == 2 * len(F.members())
    record(9, "augmentation", iso and squares and doubled,
           f"|F x| phi|| = {T.structure.order} = 2*{len(F.members())}; table isomorphic to S3: {iso}; "
           f"swap squares to identity: {squares}")


def test_criterion_10_group_attack(tmp_root):
    rows = group_runs(tmp_root)
    bad = [
        cfg for cfg, code, rep, elapsed in rows
        if code != 0 or not rep["success"] or rep["verification"]["mismatches"] != 0
        or rep["verification"]["checked"] != parse_structure(cfg[0]).order or elapsed >= 10.0 or cfg[2] > 2
    ]
    slowest = max(r[3] for r in rows)
    record(10, "group attack", not bad,
           f"{len(rows) - len(bad)}/{len(rows)} runs (<= 2 generator pairs) recovered E^-1 with 0 mismatches, "
           f"slowest {slowest:.2f}s" + (f"; failing {bad}" if bad else ""))


def test_criterion_11_oracle_hygiene(tmp_root):
    cli_calls = [rep["details"]["hidden_inverse_calls_during_attack"]
                 for _, _, rep, _ in field_runs(tmp_root) + group_runs(tmp_root)]
    # direct runs: attack without the oracle, then verify separately
    direct = []
    for p, n in FIELD_CASES:
        spec = FieldSpec.default(p, n)
        X, oracle = encrypt(make_field(spec), 3)
        dec, enc, _ = attack_field(X, spec, [(p, oracle.encrypt(p))])
        direct.append(oracle.decrypt_calls)
        assert verify_recovery(dec, enc, oracle)["mismatches"] == 0
    for desc in GROUP_CASES:
        A = parse_structure(desc)
        X, oracle = encrypt(A, 3)
        dec, enc, _ = attack_group_small(X, A, [(g, oracle.encrypt(g)) for g in generating_tuple(A)])
        direct.append(oracle.decrypt_calls)
        assert verify_recovery(dec, enc, oracle)["mismatches"] == 0
    ok = not any(cli_calls) and not any(direct)
    record(11, "oracle hygiene", ok,
           f"hidden E^-1 calls during {len(cli_calls)} CLI attacks: {sum(cli_calls)}; "
           f"during {len(direct)} oracle-free attacks: {sum(direct)}; verification consulted it afterwards")
