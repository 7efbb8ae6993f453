"""Seeded corpus generation by rejection sampling.

Draws symmetric integer matrices with entries bounded by a small constant
and a shift vector with 0/1 coordinates, then keeps exactly those pairs
that survive strict normalization. Deterministic for a fixed seed.
"""

from __future__ import annotations

import random

from .coset import CosetInstance, normalize_lattice
from .errors import AssumptionViolated, GiveUp, NotPositiveDefinite, OutOfScope

DEFAULT_ENTRY_BOUND = 8
DEFAULT_MAX_REJECTS = 200_000


def generate_instances(
    count: int,
    seed: int,
    entry_bound: int = DEFAULT_ENTRY_BOUND,
    max_rejects: int = DEFAULT_MAX_REJECTS,
) -> list[CosetInstance]:
    """Produce `count` valid instances, or raise GiveUp.

    The reject counter is global across the whole run, not per instance,
    so a degenerate entry bound fails fast instead of stalling.
    """
    if count < 1:
        raise ValueError("count must be positive")
    if entry_bound < 1:
        raise ValueError("entry bound must be positive")
    rng = random.Random(seed)
    out: list[CosetInstance] = []
    rejects = 0
    while len(out) < count:
        if rejects > max_rejects:
            raise GiveUp(
                f"gave up after {rejects} rejected draws "
                f"({len(out)}/{count} instances, entry bound {entry_bound})"
            )
        upper = (
            rng.randint(1, entry_bound),
            rng.randint(-entry_bound, entry_bound),
            rng.randint(-entry_bound, entry_bound),
            rng.randint(1, entry_bound),
            rng.randint(-entry_bound, entry_bound),
            rng.randint(1, entry_bound),
        )
        w = tuple(rng.randint(0, 1) for _ in range(3))
        if w == (0, 0, 0):
            rejects += 1
            continue
        try:
            out.append(normalize_lattice(upper, w))
        except (AssumptionViolated, NotPositiveDefinite, OutOfScope):
            rejects += 1
        except ValueError:
            # degenerate draw, refused by the Gram constructor
            rejects += 1
    return out
