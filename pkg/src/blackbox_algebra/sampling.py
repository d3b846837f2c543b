"""Product replacement sampling and uniformity diagnostics."""

from __future__ import annotations

import random
from collections import Counter
from dataclasses import dataclass, field

from scipy import stats

from .core import BlackBox, CryptoElement, ElementSet, enumerate_closure
from .errors import ValidationError

DEFAULT_BURN_IN = 100


def default_slots(ngens: int) -> int:
    return max(10, ngens + 5)


@dataclass
class PRState:
    box: BlackBox
    slots: list[CryptoElement]
    burn_in: int
    seed: int
    step_count: int = 0
    rng: random.Random = field(default_factory=random.Random, repr=False)


def pr_step(state: PRState) -> int:
    """One product replacement move; returns the index of the replaced slot.

    Picks slots ``i != j`` uniformly, then replaces ``slot_i`` by
    ``slot_i * slot_j^e`` or ``slot_j^e * slot_i`` with ``e = +-1``.
    """
    X, s, rng = state.box, state.slots, state.rng
    k = len(s)
    i = rng.randrange(k)
    j = rng.randrange(k - 1)
    if j >= i:
        j += 1
    other = s[j]
    if rng.getrandbits(1):
        other = X.inv(other)
    if rng.getrandbits(1):
        s[i] = X.mul(s[i], other)
    else:
        s[i] = X.mul(other, s[i])
    state.step_count += 1
    return i


def pr_init(
    X: BlackBox,
    gens: list[CryptoElement],
    slots: int | None = None,
    burn_in: int = DEFAULT_BURN_IN,
    seed: int = 0,
) -> PRState:
    if not gens:
        raise ValidationError("product replacement needs at least one generator")
    if slots is None:
        slots = default_slots(len(gens))
    if slots < max(2, len(gens)):
        raise ValidationError("need at least max(2, len(gens)) slots")
    initial = [gens[i % len(gens)] for i in range(slots)]
    state = PRState(X, initial, burn_in, seed, rng=random.Random(seed))
    for _ in range(burn_in):
        pr_step(state)
    return state


def pr_sample(state: PRState) -> CryptoElement:
    """Advance one step and return the freshly replaced (uniformly chosen) slot."""
    return state.slots[pr_step(state)]


def pr_sampler_factory(X: BlackBox, gens, slots=None, burn_in=DEFAULT_BURN_IN):
    """Sampler factory for :class:`BlackBox` built on product replacement."""
    gens = list(gens)

    def factory(seed):
        state = pr_init(X, gens, slots, burn_in, seed)
        return lambda: pr_sample(state)

    return factory


@dataclass
class UniformityReport:
    chi2: float
    p_value: float
    counts: list[int]
    group_order: int
    samples: int

    def as_dict(self) -> dict:
        return {
            "chi2": self.chi2,
            "p_value": self.p_value,
            "counts": self.counts,
            "group_order": self.group_order,
            "samples": self.samples,
        }


def uniformity_report(
    X: BlackBox,
    gens: list[CryptoElement],
    samples: int,
    burn_in: int = DEFAULT_BURN_IN,
    seed: int = 0,
    cap: int = 10**5,
    sampler=None,
) -> UniformityReport:
    """Chi-square test of sampler output against the enumerated ``<gens>``.

    ``sampler`` overrides the product replacement sampler (used to exercise
    the gate with deliberately broken streams).
    """
    elements = ElementSet(X, enumerate_closure(X, gens, cap))
    if sampler is None:
        state = pr_init(X, gens, burn_in=burn_in, seed=seed)
        sampler = lambda: pr_sample(state)
    tally: Counter[int] = Counter()
    for _ in range(samples):
        idx = elements.find(sampler())
        if idx is None:
            raise ValidationError("sampler produced an element outside <gens>")
        tally[idx] += 1
    counts = [tally[i] for i in range(len(elements))]
    if len(counts) == 1:
        return UniformityReport(0.0, 1.0, counts, 1, samples)
    chi2, p = stats.chisquare(counts)
    return UniformityReport(float(chi2), float(p), counts, len(counts), samples)
