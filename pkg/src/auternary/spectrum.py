"""Brute-force value oracle for the shifted polynomial H.

Everything is phrased over the doubled vector y = 2x + w, which runs over
integer vectors congruent to w mod 2: H(x) = t exactly when the lattice
value Q(y) equals 4·(2^alpha·t + Q(nu)).  Shells are enumerated by an exact
integer branch-and-bound (Schur-complement range bounds, integer square
roots, no floating point anywhere near an accept/reject decision); the
bulk spectrum marks one bitmap entry per represented target.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import isqrt
from typing import Iterator

import numpy as np

from .coset import CosetInstance
from .errors import EnumerationBudgetExceeded, PreconditionViolated
from .exactmath import primes_up_to

DEFAULT_ENUM_BUDGET = 500_000_000

# Above this magnitude the vectorized int64 value computation could wrap;
# rows fall back to plain integer loops.
_INT64_SAFE = 1 << 61


@dataclass(frozen=True)
class Spectrum:
    """Bitmap of represented targets t in [0, bound] plus its complement."""

    bound: int
    represented: bytes
    exceptions: tuple[int, ...]

    def is_represented(self, t: int) -> bool:
        if not 0 <= t <= self.bound:
            raise ValueError(f"target {t} outside [0, {self.bound}]")
        return bool((self.represented[t >> 3] >> (t & 7)) & 1)


def _quad_range(a: int, b: int, c: int) -> tuple[int, int]:
    """Integer interval {u : a·u² + 2b·u + c <= 0} for a > 0 (exact).

    The condition is (a·u + b)² <= b² − a·c, and both sides are integers,
    so the integer square root gives sharp endpoints.
    """
    disc = b * b - a * c
    if disc < 0:
        return (0, -1)
    s = isqrt(disc)
    return (-((b + s) // a), (s - b) // a)


def _snap_parity(lo: int, hi: int, parity: int) -> tuple[int, int]:
    if lo % 2 != parity:
        lo += 1
    if hi % 2 != parity:
        hi -= 1
    return lo, hi


class _ShellWalker:
    """Shared range machinery for one instance and one value ceiling m4 = 4m."""

    def __init__(self, inst: CosetInstance, m4: int):
        g = inst.gram.entries
        self.g00, self.g01, self.g02 = g[0][0], g[0][1], g[0][2]
        self.g11, self.g12, self.g22 = g[1][1], g[1][2], g[2][2]
        self.t11 = self.g00 * self.g11 - self.g01 * self.g01
        self.t12 = self.g00 * self.g12 - self.g01 * self.g02
        self.t22 = self.g00 * self.g22 - self.g02 * self.g02
        self.det = inst.det_n
        self.par = tuple(c % 2 for c in inst.w)
        self.m4 = m4

    def axis_radii(self) -> tuple[int, int, int]:
        g = (
            (self.g11 * self.g22 - self.g12 * self.g12),
            (self.g00 * self.g22 - self.g02 * self.g02),
            self.t11,
        )
        return tuple(isqrt(self.m4 * cof // self.det) for cof in g)  # type: ignore[return-value]

    def rows(self) -> Iterator[tuple[int, int, int, int, int, int]]:
        """Yield (c1, c2, lo0, hi0, b, c) per inner row: the row's vectors
        are (u0, c1, c2) for u0 in [lo0, hi0] step 2, with value
        g00·u0² + 2b·u0 + c."""
        hi2 = isqrt(self.m4 * self.t11 // self.det)
        lo2, hi2 = _snap_parity(-hi2, hi2, self.par[2])
        for c2 in range(lo2, hi2 + 1, 2):
            lo1, hi1 = _quad_range(
                self.t11, self.t12 * c2, self.t22 * c2 * c2 - self.m4 * self.g00
            )
            lo1, hi1 = _snap_parity(lo1, hi1, self.par[1])
            for c1 in range(lo1, hi1 + 1, 2):
                b = self.g01 * c1 + self.g02 * c2
                c = self.g11 * c1 * c1 + 2 * self.g12 * c1 * c2 + self.g22 * c2 * c2
                lo0, hi0 = _quad_range(self.g00, b, c - self.m4)
                lo0, hi0 = _snap_parity(lo0, hi0, self.par[0])
                if lo0 <= hi0:
                    yield (c1, c2, lo0, hi0, b, c)

    def vectorizable(self) -> bool:
        r0, r1, r2 = (r + 2 for r in self.axis_radii())
        c_max = self.g11 * r1 * r1 + 2 * abs(self.g12) * r1 * r2 + self.g22 * r2 * r2
        b_max = abs(self.g01) * r1 + abs(self.g02) * r2
        return self.g00 * r0 * r0 + 2 * b_max * r0 + c_max < _INT64_SAFE


def spectrum(
    inst: CosetInstance, bound: int, budget: int = DEFAULT_ENUM_BUDGET
) -> Spectrum:
    """Represented-target bitmap of H over [0, bound] by one full sweep of
    the ball Q(y) <= 4·(2^alpha·bound + Q(nu))."""
    if bound < 1:
        raise ValueError("bound must be positive")
    m4 = 4 * ((bound << inst.alpha) + inst.q_nu)
    walker = _ShellWalker(inst, m4)

    r0, r1, r2 = walker.axis_radii()
    if (r0 + 1) * (r1 + 1) * (r2 + 1) > 8 * budget:
        raise EnumerationBudgetExceeded(
            f"search ball holds roughly {(r0 + 1) * (r1 + 1) * (r2 + 1) // 8} vectors"
        )

    base = 4 * inst.q_nu
    shift = inst.alpha + 2
    mask = (1 << shift) - 1
    bits = np.zeros(bound + 1, dtype=bool)
    use_numpy = walker.vectorizable()
    visited = 0
    for _, _, lo0, hi0, b, c in walker.rows():
        visited += (hi0 - lo0) // 2 + 1
        if visited > budget:
            raise EnumerationBudgetExceeded(f"vector budget {budget} exhausted")
        if use_numpy:
            u0 = np.arange(lo0, hi0 + 1, 2, dtype=np.int64)
            rel = (walker.g00 * u0 + 2 * b) * u0 + c - base
            assert not (rel & mask).any(), "shell value escaped the value lattice"
            t = rel >> shift
            bits[t[(t >= 0) & (t <= bound)]] = True
        else:
            for u0 in range(lo0, hi0 + 1, 2):
                rel = (walker.g00 * u0 + 2 * b) * u0 + c - base
                assert rel & mask == 0, "shell value escaped the value lattice"
                t = rel >> shift
                if 0 <= t <= bound:
                    bits[t] = True
    assert bits[0], "H(0) = 0 must always be marked"
    packed = np.packbits(bits, bitorder="little").tobytes()
    exceptions = tuple(int(t) for t in np.flatnonzero(~bits))
    return Spectrum(bound=bound, represented=packed, exceptions=exceptions)


def _shell_solutions(
    inst: CosetInstance, m: int, budget: int, early_exit: bool
) -> tuple[list[tuple[int, int, int]], int]:
    """Integer doubled vectors y (y = w mod 2) with Q(y) = 4m, plus the
    count of candidate rows inspected.  With early_exit, at most one."""
    if m <= 0:
        return ([], 0)
    walker = _ShellWalker(inst, 4 * m)
    g00 = walker.g00
    found: list[tuple[int, int, int]] = []
    rows = 0
    for c1, c2, lo0, hi0, b, c in walker.rows():
        rows += 1
        if rows > budget:
            raise EnumerationBudgetExceeded(f"row budget {budget} exhausted")
        disc = b * b - g00 * (c - walker.m4)
        s = isqrt(disc)
        if s * s != disc:
            continue
        for num in {-b - s, -b + s}:
            if num % g00 != 0:
                continue
            u0 = num // g00
            if lo0 <= u0 <= hi0 and u0 % 2 == walker.par[0]:
                found.append((u0, c1, c2))
                if early_exit:
                    return (found, rows)
    return (found, rows)


def shell_vectors(
    inst: CosetInstance, m: int, budget: int = DEFAULT_ENUM_BUDGET
) -> list[tuple[Fraction, Fraction, Fraction]]:
    """All vectors x + nu (x integral) of value exactly m, as half-integer
    triples, in a canonical sorted order."""
    if m <= 0:
        raise ValueError("shell value must be positive")
    doubled, _ = _shell_solutions(inst, m, budget, early_exit=False)
    out = [tuple(Fraction(v, 2) for v in y) for y in doubled]
    return sorted(out)  # type: ignore[return-value]


def represents_h(
    inst: CosetInstance, t: int, budget: int = DEFAULT_ENUM_BUDGET
) -> bool:
    """Whether H takes the value t on integer vectors (t may be negative)."""
    hit, _ = represents_h_counted(inst, t, budget)
    return hit


def represents_h_counted(
    inst: CosetInstance, t: int, budget: int = DEFAULT_ENUM_BUDGET
) -> tuple[bool, int]:
    """represents_h plus the number of search rows inspected (oracle cost)."""
    m = t * (1 << inst.alpha) + inst.q_nu
    solutions, rows = _shell_solutions(inst, m, budget, early_exit=True)
    return (bool(solutions), rows)


def predicted_misses(inst: CosetInstance, q_limit: int) -> list[int]:
    """Candidate non-represented targets from the square progression
    (radOdd·q² − epsilon) / 2^(alpha−beta) over primes q coprime to 2·det.

    Only meaningful on the branch where the final global clause failed;
    callers confirm candidates against the spectrum, since only infinitely
    many q are guaranteed to work, not each one.
    """
    shift = inst.alpha - inst.beta
    if shift not in (2, 3):
        raise PreconditionViolated(
            f"miss progression needs alpha - beta in {{2, 3}}, got {shift}"
        )
    out: list[int] = []
    for q in primes_up_to(q_limit):
        if q == 2 or inst.det_n % q == 0:
            continue
        num = inst.rad_odd * q * q - inst.epsilon
        if num > 0 and num % (1 << shift) == 0:
            out.append(num >> shift)
    return out
