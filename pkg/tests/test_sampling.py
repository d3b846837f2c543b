from collections import Counter

import pytest

from blackbox_algebra.core import ElementSet, enumerate_closure
from blackbox_algebra.errors import ValidationError
from blackbox_algebra.explicit import encrypt, parse_structure
from blackbox_algebra.isomorphism import generating_tuple
from blackbox_algebra.sampling import (
    default_slots,
    pr_init,
    pr_sample,
    pr_sampler_factory,
    pr_step,
    uniformity_report,
)


def setup(desc, seed=0):
    A = parse_structure(desc)
    X, oracle = encrypt(A, seed)
    gens = [oracle.encrypt(g) for g in generating_tuple(A)]
    return A, X, oracle, gens


def test_default_slots():
    assert default_slots(1) == 10 and default_slots(8) == 13


def test_empty_generators_rejected():
    _, X, _, _ = setup("z:5")
    with pytest.raises(ValidationError):
        pr_init(X, [])


def test_identity_generator_gives_identity():
    _, X, _, _ = setup("s:3")
    state = pr_init(X, [X.identity()], seed=1)
    assert all(pr_sample(state) == X.identity() for _ in range(100))


def test_initial_slots_pad_generators_cyclically():
    _, X, _, gens = setup("s:3")
    state = pr_init(X, gens, burn_in=0)
    assert state.slots == [gens[i % 2] for i in range(10)]


def test_z5_all_elements_observed():
    _, X, oracle, gens = setup("z:5")
    state = pr_init(X, gens, seed=3)
    seen = {pr_sample(state) for _ in range(10**4)}
    assert seen == set(oracle.codewords())


def test_same_seed_same_stream():
    _, X, _, gens = setup("s:4")
    a, b = pr_init(X, gens, seed=8), pr_init(X, gens, seed=8)
    assert [pr_sample(a) for _ in range(200)] == [pr_sample(b) for _ in range(200)]


def test_slots_stay_in_generated_subgroup():
    # <(12), (34)> inside S4: slots never leave the Klein subgroup
    A, X, oracle, _ = setup("s:4")
    from blackbox_algebra.explicit import cycles

    gens = [oracle.encrypt(A.index(cycles(4, (1, 2)))), oracle.encrypt(A.index(cycles(4, (3, 4))))]
    sub = ElementSet(X, enumerate_closure(X, gens, 24))
    assert len(sub) == 4
    state = pr_init(X, gens, seed=2)
    for _ in range(500):
        pr_step(state)
        assert all(s in sub for s in state.slots)


def test_trivial_group_report():
    _, X, _, _ = setup("z:1")
    rep = uniformity_report(X, [X.identity()], 100)
    assert rep.chi2 == 0.0 and rep.p_value == 1.0


def test_z2_fair_stream():
    _, X, _, gens = setup("z:2")
    assert uniformity_report(X, gens, 10**4, seed=4).p_value > 1e-3


def test_a5_uniformity():
    _, X, _, gens = setup("a:5")
    rep = uniformity_report(X, gens, 6 * 10**4, seed=1)
    assert rep.group_order == 60
    assert rep.p_value > 1e-3


def test_s3_frequencies_within_five_sigma():
    _, X, _, gens = setup("s:3")
    n = 10**4
    counts = uniformity_report(X, gens, n, seed=6).counts
    sigma = (n * (1 / 6) * (5 / 6)) ** 0.5
    assert all(abs(c - n / 6) < 5 * sigma for c in counts)


def test_degenerate_sampler_fails_gate():
    _, X, _, gens = setup("z:5")
    state = pr_init(X, gens, burn_in=0)
    broken = lambda: state.slots[0]  # always slot 0, no steps
    assert uniformity_report(X, gens, 10**4, sampler=broken).p_value < 1e-6


def test_sampler_factory_drives_a_box():
    from blackbox_algebra.constructions import generated_subgroup

    A, X, oracle, gens = setup("d:4")
    Y = generated_subgroup(X, gens, seed=5)
    assert Y.provenance == "product-replacement"
    tally = Counter(Y.sample() for _ in range(8000))
    assert set(tally) == set(oracle.codewords())
    factory = pr_sampler_factory(X, gens)
    s1, s2 = factory(1), factory(1)
    assert [s1() for _ in range(20)] == [s2() for _ in range(20)]
