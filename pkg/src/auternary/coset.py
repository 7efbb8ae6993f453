"""Instance model: a positive definite ternary lattice N plus a half-lattice
shift nu with 2·nu in N, encoding the inhomogeneous polynomial

    H(x) = (Q(x) + 2B(nu, x)) / 2^alpha.

The shift is carried as the integer vector w = 2·nu.  Construction validates
the three standing assumptions (conductor exactly 2; integrality of Q(nu+x)
and B(nu, x); the value ideal of the coset being an exact power of 2) and
precomputes every derived invariant the classifier consumes.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from fractions import Fraction
from math import gcd

from .errors import AssumptionViolated, NonClassicForm, NotPositiveDefinite, OutOfScope
from .exactmath import factorize, odd_part, odd_squarefree_part, ord2
from .lattice import (
    GramMatrix,
    Vector,
    apply_gram,
    determinant,
    eval_quadratic,
    integer_kernel,
    is_positive_definite,
    restrict_gram,
    scale_norm_exponents,
)

DEFAULT_RHO_ITERATIONS = 500_000


@dataclass(frozen=True)
class CosetInstance:
    """A validated instance with all derived invariants.

    Built through `normalize_lattice` / `normalize_polynomial`; the
    constructor itself performs no validation.  `norm_odd_content` is 1 for
    every strictly valid instance and records the odd part of the coset
    value gcd when leniently built for enumeration experiments.
    """

    gram: GramMatrix
    w: Vector
    conductor: int
    alpha: int
    beta: int
    epsilon: int
    q_nu: int
    det_n: int
    ord2_det: int
    lam: int
    rad_odd: int
    odd_primes: tuple[int, ...]
    b_nu_exp: int
    norm_odd_content: int = 1

    @property
    def nu(self) -> tuple[Fraction, Fraction, Fraction]:
        return tuple(Fraction(c, 2) for c in self.w)  # type: ignore[return-value]


@dataclass(frozen=True)
class G2Lattice:
    """Gram data of the orthogonal complement of nu inside the lattice."""

    gram: GramMatrix
    basis: tuple[Vector, Vector]
    norm_exp2: int


def _coset_value_gcd(gram: GramMatrix, w: Vector) -> int:
    """gcd of the values Q(e_i) + 2B(nu, e_i) together with 2·B(e_i, e_j).

    These generate the ideal of all Q(x) + 2B(nu, x): the polarization
    identity reduces any Q(x) to diagonal terms plus doubled cross terms,
    and c² − c is even for every integer coefficient c.
    """
    gw = apply_gram(gram, w)
    g = 0
    for i in range(3):
        g = gcd(g, gram.entries[i][i] + gw[i])
        for j in range(i, 3):
            g = gcd(g, 2 * gram.entries[i][j])
    return g


def _build_instance(
    gram: GramMatrix,
    w: Vector,
    lenient: bool,
    rho_iterations: int,
) -> CosetInstance:
    if gram.rank != 3:
        raise OutOfScope("only ternary instances are supported")
    if all(c % 2 == 0 for c in w):
        raise OutOfScope("shift lies in the lattice (conductor 1, not 2)")
    if not is_positive_definite(gram):
        raise NotPositiveDefinite("Gram matrix is not positive definite")

    gw = apply_gram(gram, w)
    if any(c % 2 != 0 for c in gw):
        raise AssumptionViolated("B(nu, x) is not integer-valued on the lattice")
    wgw = sum(gw[i] * w[i] for i in range(3))
    if wgw % 4 != 0:
        raise AssumptionViolated("Q(nu + x) is not integer-valued on the lattice")

    value_gcd = _coset_value_gcd(gram, w)
    alpha = ord2(value_gcd)
    odd_content = odd_part(value_gcd)
    if not lenient and (odd_content != 1 or alpha == 0):
        raise AssumptionViolated(
            f"coset value gcd is {value_gcd}, not an exact power of 2 with exponent >= 1"
        )

    q_nu = wgw // 4
    beta = ord2(q_nu)
    epsilon = q_nu >> beta
    det_n = determinant(gram)
    ord2_det = ord2(det_n)
    lam = 1 if (ord2_det - 3 * beta) % 2 == 0 else 2
    rad_odd = odd_squarefree_part(det_n, rho_iterations)
    odd_primes = tuple(sorted(p for p in factorize(det_n, rho_iterations) if p != 2))
    b_nu_exp = min(ord2(c // 2) for c in gw if c != 0)

    return CosetInstance(
        gram=gram,
        w=w,
        conductor=2,
        alpha=alpha,
        beta=beta,
        epsilon=epsilon,
        q_nu=q_nu,
        det_n=det_n,
        ord2_det=ord2_det,
        lam=lam,
        rad_odd=rad_odd,
        odd_primes=odd_primes,
        b_nu_exp=b_nu_exp,
        norm_odd_content=odd_content,
    )


def normalize_lattice(
    gram_upper: tuple[int, ...] | GramMatrix,
    w: tuple[int, int, int],
    lenient: bool = False,
    rho_iterations: int = DEFAULT_RHO_ITERATIONS,
) -> CosetInstance:
    """Validate lattice-form input (Gram upper triangle plus w = 2·nu)."""
    gram = gram_upper if isinstance(gram_upper, GramMatrix) else GramMatrix.from_upper(gram_upper)
    return _build_instance(gram, tuple(w), lenient, rho_iterations)


def normalize_polynomial(
    quadratic: tuple[int, int, int, int, int, int],
    linear: tuple[int, int, int],
    constant: int = 0,
    lenient: bool = False,
    rho_iterations: int = DEFAULT_RHO_ITERATIONS,
) -> CosetInstance:
    """Validate polynomial-form input f(x) = sum q_ij x_i x_j + sum l_i x_i + c.

    The Gram matrix has B_ii = q_ii and B_ij = q_ij / 2, so odd cross
    coefficients have no integral bilinear model and are rejected.  The
    shift solves gram·w = linear; a non-integer solution means the
    conductor is not 2.  The constant shifts every represented value
    equally and is dropped here (callers may echo it).
    """
    q11, q12, q13, q22, q23, q33 = quadratic
    if q12 % 2 or q13 % 2 or q23 % 2:
        raise NonClassicForm("cross coefficients must be even for an integral Gram matrix")
    gram = GramMatrix(
        (
            (q11, q12 // 2, q13 // 2),
            (q12 // 2, q22, q23 // 2),
            (q13 // 2, q23 // 2, q33),
        )
    )
    det = determinant(gram)
    # Cramer solve of gram·w = linear over the rationals.
    w_frac = []
    for i in range(3):
        cols = [list(r) for r in gram.entries]
        for r in range(3):
            cols[r][i] = linear[r]
        num = (
            cols[0][0] * (cols[1][1] * cols[2][2] - cols[1][2] * cols[2][1])
            - cols[0][1] * (cols[1][0] * cols[2][2] - cols[1][2] * cols[2][0])
            + cols[0][2] * (cols[1][0] * cols[2][1] - cols[1][1] * cols[2][0])
        )
        w_frac.append(Fraction(num, det))
    if any(c.denominator != 1 for c in w_frac):
        raise OutOfScope("linear part does not come from a half-lattice shift (conductor > 2)")
    w = tuple(int(c) for c in w_frac)
    return _build_instance(gram, w, lenient, rho_iterations)


def translate(inst: CosetInstance, x0: tuple[int, int, int]) -> CosetInstance:
    """Shift the coset representative: w' = w + 2·x0.

    The determinant-derived fields cannot move, and neither can alpha (the
    coset value ideal absorbs 2B(x0, x) terms); both facts are asserted.
    """
    w_new = tuple(inst.w[i] + 2 * x0[i] for i in range(3))
    assert _coset_value_gcd(inst.gram, w_new) == _coset_value_gcd(inst.gram, inst.w)

    gw = apply_gram(inst.gram, w_new)
    wgw = sum(gw[i] * w_new[i] for i in range(3))
    q_nu = wgw // 4
    beta = ord2(q_nu)
    moved = replace(
        inst,
        w=w_new,
        q_nu=q_nu,
        beta=beta,
        epsilon=q_nu >> beta,
        lam=1 if (inst.ord2_det - 3 * beta) % 2 == 0 else 2,
        b_nu_exp=min(ord2(c // 2) for c in gw if c != 0),
    )
    assert moved.alpha == inst.alpha
    return moved


def complement_g2(inst: CosetInstance) -> G2Lattice:
    """Orthogonal complement of nu in the lattice: the saturated rank-2
    kernel of x -> B(nu, x), with its Gram matrix and 2-adic norm exponent."""
    basis = integer_kernel(apply_gram(inst.gram, inst.w))
    gram2 = restrict_gram(inst.gram, basis)
    _, norm_exp2 = scale_norm_exponents(gram2, 2)
    return G2Lattice(gram=gram2, basis=basis, norm_exp2=norm_exp2)


def h_value(inst: CosetInstance, x: Vector) -> int:
    """H(x) = (Q(x) + 2B(nu, x)) / 2^alpha, always an integer."""
    gx = apply_gram(inst.gram, x)
    raw = eval_quadratic(inst.gram, x) + sum(inst.w[i] * gx[i] for i in range(3))
    assert raw % (1 << inst.alpha) == 0
    return raw >> inst.alpha
