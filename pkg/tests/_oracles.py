"""Slow but independent reference implementations used only by tests.

Nothing here imports the fast local solver or the shell walker; p-adic
representability is decided from first principles via valuation patterns,
and H-values come from plain box scans.  These are the ground truth the
package code is measured against.
"""

from __future__ import annotations

from itertools import combinations, product

from auternary.coset import CosetInstance, h_value
from auternary.lattice import GramMatrix, eval_quadratic

# Valuation caps for the pattern oracle.  For a target t with
# ord_p(t) = e, any true solution decomposes into coordinates of
# valuation <= e/2 + 1 plus coordinates so divisible that dropping them
# preserves the congruence; caps are that bound plus slack for the
# target ranges the tests use (t <= 512 at p in {2, 3, 5}).
_VAL_CAP = {2: 7, 3: 5, 5: 4, 7: 4}


def _vp(n: int, p: int) -> int:
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def _unit_square_classes(p: int) -> tuple[int, ...]:
    """Residues r such that unit squares are exactly U r·(1 + pZ_p).

    At p = 2 the unit squares form the single coset 1 + 8Z_2; at odd p
    they are the quadratic residue classes mod p, each of which is a
    full coset of 1 + pZ_p.
    """
    if p == 2:
        return (1,)
    return tuple(r for r in range(1, p) if pow(r, (p - 1) // 2, p) == 1)


def _progression_base(p: int) -> int:
    return 8 if p == 2 else p


def _patterns(diag: tuple[int, ...], p: int):
    """Yield (offset, modulus) progressions of values reachable with at
    least one nonzero coordinate.

    Writing x_i = p^(a_i) u_i on a nonempty support set, the reachable
    sums are sum(c_i r_i) + base·p^m · Z_p exactly, where c_i = d_i p^(2a_i),
    r_i ranges over unit-square classes, and m = min ord_p(c_i).
    """
    cap = _VAL_CAP[p]
    base = _progression_base(p)
    classes = _unit_square_classes(p)
    for size in (1, 2, 3):
        for subset in combinations(range(len(diag)), size):
            for avec in product(range(cap + 1), repeat=size):
                cs = tuple(diag[i] * p ** (2 * a) for i, a in zip(subset, avec))
                modulus = base * p ** min(_vp(c, p) for c in cs)
                for rvec in product(classes, repeat=size):
                    yield sum(c * r for c, r in zip(cs, rvec)), modulus


def local_represents_oracle(diag: tuple[int, int, int], t: int, p: int) -> bool:
    """Exact p-adic integral representability of a positive diagonal
    ternary form, for targets within the calibrated range."""
    if t == 0:
        return True
    if p not in _VAL_CAP or t > 512:
        raise ValueError("oracle calibrated for p in {2,3,5,7} and t <= 512")
    return any((t - offset) % modulus == 0 for offset, modulus in _patterns(diag, p))


def represented_upto_oracle(diag: tuple[int, int, int], cap: int, p: int) -> bytearray:
    """Bitmap of locally represented targets 0..cap (bulk form of the above)."""
    if cap > 512:
        raise ValueError("oracle calibrated for targets <= 512")
    rep = bytearray(cap + 1)
    rep[0] = 1
    for offset, modulus in _patterns(diag, p):
        first = offset % modulus
        for t in range(first if first else modulus, cap + 1, modulus):
            rep[t] = 1
    return rep


def hilbert2_oracle(a: int, b: int) -> int:
    """Hilbert symbol (a, b)_2 from the definition: does
    a x^2 + b y^2 = z^2 have a nontrivial 2-adic solution?

    Square parts are stripped first; a primitive solution then has a
    coordinate of valuation 0 and the pattern progressions for the cone
    target 0 are decisive.
    """
    while a % 4 == 0:
        a //= 4
    while b % 4 == 0:
        b //= 4
    hit = any(offset % modulus == 0 for offset, modulus in _patterns((a, b, -1), 2))
    return 1 if hit else -1


def represents_h_oracle(inst: CosetInstance, t: int, radius: int) -> bool:
    """Box scan for H(x) = t with coordinates in [-radius, radius]."""
    return any(
        h_value(inst, x) == t
        for x in product(range(-radius, radius + 1), repeat=3)
    )


def h_values_oracle(inst: CosetInstance, bound: int, radius: int) -> set[int]:
    """All H-values in [0, bound] reachable from the coordinate box.

    Callers pick `radius` large enough that every vector with H below the
    bound fits inside the box; the tests use small instances where a
    generous radius is still cheap.
    """
    out: set[int] = set()
    for x in product(range(-radius, radius + 1), repeat=3):
        v = h_value(inst, x)
        if 0 <= v <= bound:
            out.add(v)
    return out


def quadratic_values_oracle(gram: GramMatrix, bound: int, radius: int) -> set[int]:
    out: set[int] = set()
    for x in product(range(-radius, radius + 1), repeat=3):
        v = eval_quadratic(gram, x)
        if v <= bound:
            out.add(v)
    return out
