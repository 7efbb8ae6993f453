"""Local (p-adic) algebra for integral quadratic lattices of rank 2 and 3.

Covers Jordan splittings (with the odd/even block dichotomy at p = 2),
anisotropy over the 2-adic numbers, and a certified decision procedure for
"t is represented by the lattice over the p-adic integers".

All arithmetic is exact: integers and Fractions only.  Splitting transforms
are unimodular at p (odd denominators and odd determinant when p = 2) and
are verified against the input by exact matrix identity, not modularly.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations, product

from .exactmath import INFINITY, hilbert2, legendre, least_nonresidue, ordp
from .lattice import GramMatrix, apply_gram, determinant, eval_quadratic

FracMatrix = tuple[tuple[Fraction, ...], ...]

# Total node budget for the local search; generously above anything the
# depth bound allows in practice, so hitting it means a logic error.
_SEARCH_NODE_CAP = 500_000


def _frac_ordp(q: Fraction | int, p: int) -> int | float:
    if q == 0:
        return INFINITY
    if isinstance(q, int):
        return ordp(q, p)
    return ordp(q.numerator, p) - ordp(q.denominator, p)


def _frac_mod8(q: Fraction | int) -> int:
    """Residue mod 8 of a 2-adic unit given as int or odd/odd fraction."""
    if isinstance(q, int):
        num, den = q, 1
    else:
        num, den = q.numerator, q.denominator
    if num % 2 == 0 or den % 2 == 0:
        raise ValueError(f"{q} is not a 2-adic unit")
    return num * pow(den, -1, 8) % 8


@dataclass(frozen=True)
class JordanConstituent:
    """One constant-scale block of a Jordan splitting.

    `block` is an integer Gram matrix of the constituent (denominators are
    cleared by odd basis scalings, which do not move any mod-8 data).
    `diag_units` holds unit residues mod 8 for odd (type I) blocks at p = 2
    and Legendre classes at odd p; it is None for even (type II) blocks.
    `det_unit_mod8` is only set at p = 2.
    """

    scale_exp: int
    rank: int
    type_two: bool
    block: tuple[tuple[int, ...], ...]
    diag_units: tuple[int, ...] | None
    det_unit_mod8: int | None


@dataclass(frozen=True)
class JordanSplitting:
    prime: int
    constituents: tuple[JordanConstituent, ...]
    transform: FracMatrix

    @property
    def max_scale_exp(self) -> int:
        return self.constituents[-1].scale_exp


def _block_det(rows: list[list[Fraction]] | tuple[tuple[int, ...], ...]) -> Fraction | int:
    n = len(rows)
    if n == 1:
        return rows[0][0]
    if n == 2:
        return rows[0][0] * rows[1][1] - rows[0][1] * rows[1][0]
    return (
        rows[0][0] * (rows[1][1] * rows[2][2] - rows[1][2] * rows[2][1])
        - rows[0][1] * (rows[1][0] * rows[2][2] - rows[1][2] * rows[2][0])
        + rows[0][2] * (rows[1][0] * rows[2][1] - rows[1][1] * rows[2][0])
    )


def _mixed_group_units(block: tuple[tuple[int, ...], ...], scale_exp: int) -> tuple[int, ...]:
    """Diagonal unit residues of a rank-3 block made of a unit and an even pair.

    The block is [u] ⊥ [[A, C], [C, B]] at one scale; pivoting on the odd
    vector (first basis vector plus the first vector of the pair) produces
    an orthogonal basis whose three diagonal values are 2-adic units.
    """
    assert block[0][1] == 0 and block[0][2] == 0
    s = Fraction(1, 2**scale_exp)
    u = block[0][0] * s
    two_a, c, two_b = block[1][1] * s, block[1][2] * s, block[2][2] * s
    u1 = two_a + u
    u2 = two_b - c * c / u1
    u3 = (u - u * u / u1) - (c * u / u1) ** 2 / u2
    assert u1 * u2 * u3 == u * (two_a * two_b - c * c), "diagonalization lost the determinant"
    return (_frac_mod8(u1), _frac_mod8(u2), _frac_mod8(u3))


@lru_cache(maxsize=4096)
def jordan_split(gram: GramMatrix, p: int, precision: int | None = None) -> JordanSplitting:
    """Jordan splitting of the lattice at p by greedy minimum-valuation pivots.

    A diagonal entry of minimal valuation is always preferred, yielding a
    rank-1 odd block; otherwise at p = 2 the off-diagonal pivot produces a
    rank-2 even block, and at odd p the two basis vectors are mixed first so
    a diagonal pivot exists.  Same-scale blocks are merged; a merged group
    is type I exactly when it contains a rank-1 piece.

    `precision`, when given, must be at least ord_p(2·det) + 5; it is a
    caller-side contract only, since the verification here is exact.
    """
    floor = ordp(2 * determinant(gram), p) + 5
    if precision is not None and precision < floor:
        raise ValueError(f"precision {precision} below required {floor}")

    n = gram.rank
    m: list[list[Fraction]] = [[Fraction(e) for e in row] for row in gram.entries]
    basis: list[list[Fraction]] = [
        [Fraction(1 if i == j else 0) for j in range(n)] for i in range(n)
    ]
    active = list(range(n))
    pieces: list[tuple[int, tuple[int, ...]]] = []

    def eliminate(k: int, i: int, coeff: Fraction) -> None:
        # Basis change e_k <- e_k - coeff·e_i, applied to m symmetrically.
        for l in range(n):
            m[k][l] -= coeff * m[i][l]
        for l in range(n):
            m[l][k] -= coeff * m[l][i]
        for l in range(n):
            basis[k][l] -= coeff * basis[i][l]

    while active:
        vmin: int | float = INFINITY
        pivot: tuple[int, int] | None = None
        for i in active:
            v = _frac_ordp(m[i][i], p)
            if v < vmin:
                vmin, pivot = v, (i, i)
        for a in range(len(active)):
            for b in range(a + 1, len(active)):
                i, j = active[a], active[b]
                v = _frac_ordp(m[i][j], p)
                if v < vmin:
                    vmin, pivot = v, (i, j)
        assert pivot is not None and vmin is not INFINITY
        i, j = pivot
        if i == j:
            for k in active:
                if k != i and m[i][k] != 0:
                    eliminate(k, i, m[i][k] / m[i][i])
            pieces.append((int(vmin), (i,)))
            active.remove(i)
        elif p != 2:
            # Push the minimal valuation onto the diagonal and rescan.
            eliminate(i, j, Fraction(-1))
        else:
            det2 = m[i][i] * m[j][j] - m[i][j] * m[i][j]
            assert _frac_ordp(det2, p) == 2 * vmin
            for k in active:
                if k in (i, j):
                    continue
                ca = (m[j][j] * m[i][k] - m[i][j] * m[j][k]) / det2
                cb = (m[i][i] * m[j][k] - m[i][j] * m[i][k]) / det2
                if ca != 0:
                    eliminate(k, i, ca)
                if cb != 0:
                    eliminate(k, j, cb)
            pieces.append((int(vmin), (i, j)))
            active.remove(i)
            active.remove(j)

    scales = [s for s, _ in pieces]
    assert scales == sorted(scales), "greedy pivots must emit nondecreasing scales"

    # Clear denominators piece by piece: odd (at p) squares never move
    # scales, types, or mod-8 unit data.
    for _, idx in pieces:
        den = 1
        for a in idx:
            for b in idx:
                den = den * m[a][b].denominator // _gcd_int(den, m[a][b].denominator)
        if den != 1:
            assert ordp(den, p) == 0
            for a in idx:
                for l in range(n):
                    m[a][l] *= den
                    basis[a][l] *= den
                for l in range(n):
                    m[l][a] *= den

    order = [a for _, idx in pieces for a in idx]
    final = [[m[a][b] for b in order] for a in order]
    for r in range(n):
        for c in range(n):
            assert final[r][c].denominator == 1
    final_int = [[int(x) for x in row] for row in final]

    constituents: list[JordanConstituent] = []
    pos = 0
    k = 0
    while k < len(pieces):
        scale = pieces[k][0]
        group = [pieces[k][1]]
        k += 1
        while k < len(pieces) and pieces[k][0] == scale:
            group.append(pieces[k][1])
            k += 1
        rank = sum(len(idx) for idx in group)
        block = tuple(
            tuple(final_int[pos + r][pos + c] for c in range(rank)) for r in range(rank)
        )
        pos += rank
        has_odd_piece = any(len(idx) == 1 for idx in group)
        type_two = p == 2 and not has_odd_piece
        # Equal-scale groups list their rank-1 pieces first: whenever a
        # group contains one, some diagonal entry sits at the group scale
        # (the norm ideal says so) and the greedy rule grabs it first.
        assert [len(idx) for idx in group] == sorted(len(idx) for idx in group)
        det = _block_det(block)
        assert _frac_ordp(det, p) == rank * scale
        det_unit_mod8 = _frac_mod8(det // 2**(rank * scale)) if p == 2 else None
        diag_units: tuple[int, ...] | None
        if type_two:
            diag_units = None
        elif p != 2:
            diag_units = tuple(
                legendre(block[r][r] // p**scale, p) for r in range(rank)
            )
        elif all(len(idx) == 1 for idx in group):
            diag_units = tuple(_frac_mod8(block[r][r] // 2**scale) for r in range(rank))
        else:
            diag_units = _mixed_group_units(block, scale)
        constituents.append(
            JordanConstituent(scale, rank, type_two, block, diag_units, det_unit_mod8)
        )

    transform = tuple(tuple(basis[a][l] for l in range(n)) for a in order)
    _verify_splitting(gram, transform, final, p)
    return JordanSplitting(p, tuple(constituents), transform)


def _gcd_int(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return a


def _verify_splitting(
    gram: GramMatrix, transform: FracMatrix, final: list[list[Fraction]], p: int
) -> None:
    n = gram.rank
    for r in range(n):
        for c in range(n):
            val = sum(
                transform[r][a] * gram.entries[a][b] * transform[c][b]
                for a in range(n)
                for b in range(n)
            )
            assert val == final[r][c], "transform does not witness the splitting"
    det_t = _block_det([list(row) for row in transform])
    assert _frac_ordp(det_t, p) == 0, "transform is not unimodular at p"


def block_diagonal_gram(splitting: JordanSplitting) -> GramMatrix:
    """Reassembled integer Gram matrix of all constituents (for re-splitting)."""
    n = sum(c.rank for c in splitting.constituents)
    rows = [[0] * n for _ in range(n)]
    pos = 0
    for c in splitting.constituents:
        for r in range(c.rank):
            for s in range(c.rank):
                rows[pos + r][pos + s] = c.block[r][s]
        pos += c.rank
    return GramMatrix(tuple(tuple(r) for r in rows))


def is_diagonalizable2(gram: GramMatrix) -> bool:
    """Whether the lattice has an orthogonal basis over the 2-adic integers."""
    return not any(c.type_two for c in jordan_split(gram, 2).constituents)


def _rational_diagonal(gram: GramMatrix) -> list[Fraction] | None:
    """Diagonal of the form over the rationals, or None if a basis vector
    with value zero shows up (which makes the form isotropic outright)."""
    n = gram.rank
    m = [[Fraction(e) for e in row] for row in gram.entries]
    active = list(range(n))
    diag: list[Fraction] = []
    while active:
        piv = next((i for i in active if m[i][i] != 0), None)
        if piv is None:
            return None
        for k in active:
            if k != piv and m[piv][k] != 0:
                coeff = m[piv][k] / m[piv][piv]
                for l in range(n):
                    m[k][l] -= coeff * m[piv][l]
                for l in range(n):
                    m[l][k] -= coeff * m[l][piv]
        diag.append(m[piv][piv])
        active.remove(piv)
    return diag


def is_anisotropic2(gram: GramMatrix) -> bool:
    """Whether the rank-3 form has no nontrivial zero over the 2-adic field."""
    if gram.rank != 3:
        raise ValueError("anisotropy test is for ternary forms")
    diag = _rational_diagonal(gram)
    if diag is None:
        return False
    # Integer square-class representatives of the diagonal values.
    a, b, c = (q.numerator * q.denominator for q in diag)
    return hilbert2(-a * c, -b * c) == -1


@dataclass(frozen=True)
class LocalVerdict:
    """Outcome of a p-adic representation test, with a lifting certificate.

    When represented, `witness` is an integer vector whose value is close
    enough to the target to lift: residual_valuation > 2·gradient_valuation,
    where the gradient valuation is min_i ord_p((2·G·witness)_i).
    """

    represented: bool
    witness: tuple[int, ...] | None = None
    gradient_valuation: int | None = None
    residual_valuation: int | float | None = None


def _certificate(
    gram: GramMatrix, x: tuple[int, ...], tau: int, p: int
) -> tuple[int, int | float] | None:
    gx = apply_gram(gram, x)
    v = min(_frac_ordp(2 * comp, p) for comp in gx)
    if v is INFINITY:
        return None
    e = _frac_ordp(eval_quadratic(gram, x) - tau, p)
    if e > 2 * v:
        return (int(v), e)
    return None


def _search_primitive(
    gram: GramMatrix, tau: int, p: int
) -> tuple[tuple[int, ...], int, int | float] | None:
    """Find a primitive p-adic representation of tau, or None.

    Digit-by-digit search with a Hensel acceptance test at every node.  The
    depth bound is sharp: any primitive solution has gradient valuation at
    most ord_p(2) + min(max Jordan scale, ord_p(tau)), and a certificate for
    it must appear once twice that many digits are fixed.
    """
    n = gram.rank
    s_max = jordan_split(gram, p).max_scale_exp
    v_cap = (1 if p == 2 else 0) + min(s_max, ordp(tau, p))
    depth = 2 * v_cap + 1

    frontier: list[tuple[int, ...]] = []
    for x in product(range(p), repeat=n):
        if all(d == 0 for d in x):
            continue
        if (eval_quadratic(gram, x) - tau) % p != 0:
            continue
        cert = _certificate(gram, x, tau, p)
        if cert is not None:
            return (x, *cert)
        frontier.append(x)

    nodes = len(frontier)
    for level in range(1, depth):
        pk = p**level
        mod = pk * p
        grown: list[tuple[int, ...]] = []
        for x in frontier:
            for delta in product(range(p), repeat=n):
                child = tuple(x[i] + pk * delta[i] for i in range(n))
                if (eval_quadratic(gram, child) - tau) % mod != 0:
                    continue
                cert = _certificate(gram, child, tau, p)
                if cert is not None:
                    return (child, *cert)
                grown.append(child)
        nodes += len(grown)
        if nodes > _SEARCH_NODE_CAP:
            raise RuntimeError("local representation search exceeded its node budget")
        frontier = grown
        if not frontier:
            break
    return None


def _odd_local_decide(pairs: list[tuple[int, int]], a: int, eps_cls: int, p: int) -> bool:
    """Representability of p^a * eps over Z_p, p odd, for a diagonal form.

    `pairs` holds (scale, Legendre class of the unit) per diagonal entry,
    `eps_cls` the class of the unit part of the target. Everything reduces
    to square classes because Hensel lifting at odd p only ever needs a
    nonzero residue. The case split is on how many entries sit at the
    minimal scale once it is stripped off:

    - three: unimodular ternary, universal;
    - two: an isotropic unit binary is universal; an anisotropic one takes
      exactly the even-order values with every unit class, so the tail
      entry settles odd orders, either on its own class or by borrowing an
      even-order summand from the binary and cancelling;
    - one: a unit target needs that entry's class; a non-unit target
      forces that coordinate divisible by p, which raises its scale by 2.
    """
    while True:
        g = min(s for s, _ in pairs)
        if a < g:
            return False
        a -= g
        pairs = sorted((s - g, cls) for s, cls in pairs)
        units = sum(1 for s, _ in pairs if s == 0)
        if units >= 3:
            return True
        if units == 2:
            c1, c2 = pairs[0][1], pairs[1][1]
            if legendre(-1, p) * c1 * c2 == 1:
                return True
            if a % 2 == 0:
                return True
            if len(pairs) == 2:
                return False
            s3, c3 = pairs[2]
            if s3 % 2 == 0 and a > s3:
                return True
            return a >= s3 and (a - s3) % 2 == 0 and eps_cls * c3 == 1
        if a == 0:
            return eps_cls * pairs[0][1] == 1
        pairs = [(2, pairs[0][1])] + pairs[1:]


@lru_cache(maxsize=8192)
def _unit_diagonal_progressions(
    pairs: tuple[tuple[int, int], ...], cap: int
) -> dict[int, frozenset[int]]:
    """2-adic value progressions of a diagonal form sum u_i 2^(s_i) x_i².

    Write x_i = 2^(a_i) v_i on a nonempty support set.  Unit squares are
    exactly 1 + 8·Z_2, so for fixed valuations the reachable values form
    the single congruence class sum(u_i 2^(s_i + 2a_i)) + 8·2^m·Z_2 with
    m the minimal shifted scale.  The table maps modulus -> offsets for
    O(1) membership tests.  Coordinate valuations above `cap` never
    matter for targets t with ord_2(t) <= 2·cap - 3: stripping such a
    coordinate from a true solution changes the sum by a multiple of
    2^(2·cap + 2), while the surviving congruence has modulus at most
    8·2^(ord_2(t)), since a sum of terms all deeper than the target's
    order cannot equal it.
    """
    table: dict[int, set[int]] = {}
    n = len(pairs)
    for size in range(1, n + 1):
        for subset in combinations(range(n), size):
            for avec in product(range(cap + 1), repeat=size):
                shifted = [(pairs[i][0] + 2 * a, pairs[i][1]) for i, a in zip(subset, avec)]
                modulus = 8 << min(s for s, _ in shifted)
                offset = sum(u << s for s, u in shifted) % modulus
                table.setdefault(modulus, set()).add(offset)
    return {modulus: frozenset(offsets) for modulus, offsets in table.items()}


def _decide2_unit_diagonal(pairs: tuple[tuple[int, int], ...], t: int) -> bool:
    cap = ordp(t, 2) // 2 + 2
    table = _unit_diagonal_progressions(pairs, cap)
    return any(t % modulus in offsets for modulus, offsets in table.items())


def local_represents(gram: GramMatrix, t: int, p: int) -> LocalVerdict:
    """Decide whether t is represented by the lattice over the p-adic integers.

    At odd p the Jordan splitting is diagonal and the verdict follows from
    scales and Legendre classes alone.  At p = 2 a splitting into odd
    (type I) constituents likewise reduces to explicit congruence
    progressions.  Only lattices with an even (type II) constituent fall
    back to the digit search: any representation is 2^s times a primitive
    one of t/4^s, and the primitive search certifies hits by a Hensel
    criterion; those verdicts carry a witness, the others do not.
    """
    if t == 0:
        raise ValueError("target must be nonzero")
    if p != 2:
        splitting = jordan_split(gram, p)
        pairs = []
        for c in splitting.constituents:
            assert c.diag_units is not None, "odd-prime splittings are diagonal"
            pairs.extend((c.scale_exp, cls) for cls in c.diag_units)
        a = ordp(t, p)
        eps_cls = legendre(t // p**a, p)
        return LocalVerdict(_odd_local_decide(pairs, a, eps_cls, p))
    splitting = jordan_split(gram, 2)
    if all(not c.type_two for c in splitting.constituents):
        pairs2 = []
        for c in splitting.constituents:
            assert c.diag_units is not None, "type I constituents carry diagonal units"
            pairs2.extend((c.scale_exp, u) for u in c.diag_units)
        return LocalVerdict(_decide2_unit_diagonal(tuple(pairs2), t))
    for s in range(ordp(t, p) // 2 + 1):
        hit = _search_primitive(gram, t // p ** (2 * s), p)
        if hit is not None:
            x, v, e = hit
            witness = tuple(p**s * c for c in x)
            return LocalVerdict(True, witness, v + s, e + 2 * s)
    return LocalVerdict(False)


def represents_all_odd(gram: GramMatrix, p: int) -> bool:
    """Whether the rank-3 lattice represents every p-adic integer, p odd.

    Scaling a witness by p trades t for p²t, so the four square classes
    {1, r, p, p·r} (r the least positive nonresidue) decide everything.
    """
    if p < 3 or p % 2 == 0:
        raise ValueError("odd prime required")
    r = least_nonresidue(p)
    return all(local_represents(gram, t, p).represented for t in (1, r, p, p * r))
