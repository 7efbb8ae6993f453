"""Almost-universality decision for a validated instance.

Two gates run first: every odd prime dividing the determinant must make the
lattice locally universal, and alpha must fall in the window beta+1..beta+3.
After the gates, the applicable case's clauses are tested in a fixed order
and the first hit decides; if all local clauses fail and alpha is at least
beta+2, one global shell search settles the remaining clause.

Every predicate consulted lands in the verdict trace, in evaluation order,
with deterministic rendering of its inputs.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .coset import CosetInstance, G2Lattice, complement_g2
from .errors import AssumptionViolated, EnumerationBudgetExceeded, PreconditionViolated
from .exactmath import legendre
from .lattice import norm_generator, scale_norm_exponents
from .local2 import (
    JordanSplitting,
    is_anisotropic2,
    is_diagonalizable2,
    jordan_split,
    local_represents,
    represents_all_odd,
)
from .spectrum import DEFAULT_ENUM_BUDGET, represents_h_counted

ALMOST_UNIVERSAL = "AlmostUniversal"
NOT_ALMOST_UNIVERSAL = "NotAlmostUniversal"
INCONCLUSIVE = "Inconclusive"
ASSUMPTION_VIOLATED = "AssumptionViolated"
OUT_OF_SCOPE = "OutOfScope"

CLAUSE_IDS = (
    "1a", "1b.i", "1b.ii", "1b.iii",
    "2a.i", "2a.ii", "2a.iii", "2a.iv", "2b.i", "2b.ii", "2b.iii",
    "3a", "3b", "3c", "3d", "3e", "3f",
    "4",
)

# Which alpha - beta offsets make a clause meaningful.
_CLAUSE_WINDOW = {cid: (int(cid[0]),) for cid in CLAUSE_IDS if cid != "4"}
_CLAUSE_WINDOW["4"] = (2, 3)


@dataclass(frozen=True)
class ClassifierConfig:
    enum_budget: int = DEFAULT_ENUM_BUDGET


@dataclass(frozen=True)
class TraceEntry:
    predicate: str
    inputs: str
    value: bool


@dataclass(frozen=True)
class Verdict:
    status: str
    clause: str | None
    trace: tuple[TraceEntry, ...]
    oracle_budget: dict | None = None


class _Context:
    def __init__(self, inst: CosetInstance, cfg: ClassifierConfig):
        self.inst = inst
        self.cfg = cfg
        self.trace: list[TraceEntry] = []
        self._g2: G2Lattice | None = None

    def note(self, predicate: str, inputs: str, value: bool) -> bool:
        self.trace.append(TraceEntry(predicate, inputs, value))
        return value

    def g2(self) -> G2Lattice:
        if self._g2 is None:
            self._g2 = complement_g2(self.inst)
        return self._g2

    def jordan(self) -> JordanSplitting:
        return jordan_split(self.inst.gram, 2)


def _legendre_obstruction(inst: CosetInstance) -> tuple[bool, str]:
    """Some prime divisor q of radOdd with (-lambda | q) = -1."""
    hits = [
        q
        for q in inst.odd_primes
        if inst.rad_odd % q == 0 and legendre(-inst.lam, q) == -1
    ]
    return (bool(hits), f"radOdd={inst.rad_odd} lambda={inst.lam} hits={hits}")


def _unit5_constituent(splitting: JordanSplitting) -> tuple[bool, str]:
    """A binary constituent with determinant unit 5 mod 8; a single full-rank
    constituent is probed through the pairwise products of its diagonal units."""
    for c in splitting.constituents:
        if c.rank == 2 and c.det_unit_mod8 == 5:
            return (True, f"binary scale={c.scale_exp} detUnit8=5")
        if c.rank == 3:
            units = c.diag_units
            assert units is not None, "rank-3 constituents are always odd"
            for a in range(3):
                for b in range(a + 1, 3):
                    if units[a] * units[b] % 8 == 5:
                        return (True, f"units={units} pair=({units[a]},{units[b]})")
    summary = [(c.scale_exp, c.rank, c.det_unit_mod8) for c in splitting.constituents]
    return (False, f"constituents={summary}")


def _clause_value(ctx: _Context, cid: str) -> tuple[bool, str, dict | None]:
    """Truth value, deterministic input rendering, and (for the global
    clause) the enumeration cost record."""
    i = ctx.inst
    alpha, beta, b, d = i.alpha, i.beta, i.b_nu_exp, i.ord2_det

    if cid == "1a":
        return (b == beta - 1, f"b={b} beta={beta}", None)
    if cid == "1b.i":
        if b < beta:
            return (False, f"b={b} beta={beta}", None)
        scale2, _ = scale_norm_exponents(i.gram, 2)
        gen = norm_generator(i.gram)
        value = scale2 == beta + 1 and gen == 1 << (beta + 2)
        return (value, f"b={b} scale2={scale2} norm_gen={gen}", None)
    if cid == "1b.ii":
        value = b >= beta and is_diagonalizable2(i.gram) and d == 3 + 3 * beta
        return (value, f"b={b} diag2={is_diagonalizable2(i.gram)} d={d}", None)
    if cid == "1b.iii":
        value = b == beta + 1 and is_diagonalizable2(i.gram) and d == 5 + 3 * beta
        return (value, f"b={b} diag2={is_diagonalizable2(i.gram)} d={d}", None)

    if cid.startswith("2a"):
        if b != beta:
            return (False, f"b={b} beta={beta}", None)
        if cid == "2a.i":
            return ((d - 3 * beta) % 2 == 1, f"d={d} beta={beta}", None)
        if cid == "2a.ii":
            return (d - 3 * beta == 4, f"d={d} beta={beta}", None)
        if cid == "2a.iii":
            value, inputs = _legendre_obstruction(i)
            return (value, inputs, None)
        if cid == "2a.iv":
            value, inputs = _unit5_constituent(ctx.jordan())
            return (value, inputs, None)
    if cid.startswith("2b"):
        g2 = ctx.g2()
        if b != beta + 1 or g2.norm_exp2 != beta + 2:
            return (False, f"b={b} beta={beta} g2_norm2={g2.norm_exp2}", None)
        if cid == "2b.i":
            return ((d - 3 * beta) % 2 == 1, f"d={d} beta={beta}", None)
        if cid == "2b.ii":
            return (d - 3 * beta == 6, f"d={d} beta={beta}", None)
        if cid == "2b.iii":
            value, inputs = _legendre_obstruction(i)
            return (value, inputs, None)

    if cid == "3a":
        g2 = ctx.g2()
        value = not is_diagonalizable2(g2.gram)
        return (value, f"g2={g2.gram.entries}", None)
    if cid == "3b":
        g2 = ctx.g2()
        value = g2.norm_exp2 == alpha and ((d - 3 * beta) % 2 == 0 or d == 9 + 3 * beta)
        return (value, f"g2_norm2={g2.norm_exp2} alpha={alpha} d={d}", None)
    if cid == "3c":
        g2 = ctx.g2()
        value = g2.norm_exp2 == alpha + 1 and (d - 3 * beta) % 2 == 1
        return (value, f"g2_norm2={g2.norm_exp2} alpha={alpha} d={d}", None)
    if cid == "3d":
        value, inputs = _legendre_obstruction(i)
        return (value, inputs, None)
    if cid == "3e":
        value = i.rad_odd % 8 != i.epsilon % 8
        return (value, f"radOdd={i.rad_odd} epsilon mod 8={i.epsilon % 8}", None)
    if cid == "3f":
        g2 = ctx.g2()
        if g2.norm_exp2 != alpha:
            return (False, f"g2_norm2={g2.norm_exp2} alpha={alpha}", None)
        target = (1 << alpha) * i.q_nu
        verdict = local_represents(g2.gram, target, 2)
        return (
            not verdict.represented,
            f"g2_norm2={g2.norm_exp2} target={target} represented={verdict.represented}",
            None,
        )

    if cid == "4":
        t_num = (1 << beta) * i.rad_odd - i.q_nu
        if t_num % (1 << alpha) != 0:
            return (False, f"t_num={t_num} not divisible by 2^{alpha}", None)
        t = t_num >> alpha
        hit, rows = represents_h_counted(i, t, ctx.cfg.enum_budget)
        record = {"target": t, "shell_value": (1 << beta) * i.rad_odd, "rows_scanned": rows}
        return (hit, f"target={t}", record)

    raise ValueError(f"unknown clause id {cid!r}")


def evaluate_clause(
    inst: CosetInstance, clause_id: str, cfg: ClassifierConfig | None = None
) -> bool:
    """Truth value of one clause, without gating.

    Raises PreconditionViolated when alpha - beta is outside the clause's
    window, and propagates EnumerationBudgetExceeded for the global clause.
    """
    if clause_id not in _CLAUSE_WINDOW:
        raise ValueError(f"unknown clause id {clause_id!r}")
    window = inst.alpha - inst.beta
    if window not in _CLAUSE_WINDOW[clause_id]:
        raise PreconditionViolated(
            f"clause {clause_id} needs alpha - beta in {_CLAUSE_WINDOW[clause_id]}, got {window}"
        )
    ctx = _Context(inst, cfg or ClassifierConfig())
    value, _, _ = _clause_value(ctx, clause_id)
    return value


def _au(ctx: _Context, cid: str, record: dict | None) -> Verdict:
    assert is_anisotropic2(ctx.inst.gram), (
        "an almost universal instance must be anisotropic at 2"
    )
    ctx.note("anisotropic_at_2", "gram of N", True)
    return Verdict(ALMOST_UNIVERSAL, cid, tuple(ctx.trace), record)


def evaluate(inst: CosetInstance, cfg: ClassifierConfig | None = None) -> Verdict:
    """Full gated classification of a strictly valid instance."""
    cfg = cfg or ClassifierConfig()
    if inst.norm_odd_content != 1 or inst.alpha < 1:
        raise AssumptionViolated("classifier requires the coset value gcd to be 2^alpha")
    ctx = _Context(inst, cfg)

    for p in inst.odd_primes:
        ok = represents_all_odd(inst.gram, p)
        ctx.note("odd_local_universal", f"p={p}", ok)
        if not ok:
            return Verdict(NOT_ALMOST_UNIVERSAL, "odd-local", tuple(ctx.trace))

    window = inst.alpha - inst.beta
    in_window = window in (1, 2, 3)
    ctx.note("alpha_window", f"alpha={inst.alpha} beta={inst.beta}", in_window)
    if not in_window:
        return Verdict(NOT_ALMOST_UNIVERSAL, "alpha-range", tuple(ctx.trace))

    # Proved consequences of the gates; a violation is an implementation bug.
    b = inst.b_nu_exp
    assert inst.beta - 1 <= b <= inst.beta + 1, "bilinear exponent outside F0 window"
    ctx.note("bilinear_exponent_window", f"b={b} beta={inst.beta}", True)
    if window == 3:
        assert b == inst.beta + 1, "alpha = beta + 3 forces b = beta + 1"
    if window == 2:
        assert b in (inst.beta, inst.beta + 1), "alpha = beta + 2 forces b near beta"
        if b == inst.beta:
            assert is_diagonalizable2(inst.gram), "b = beta forces a diagonalizable lattice"
            ctx.note("diagonalizable_at_2", "forced by b = beta", True)

    case_clauses = {
        1: ("1a", "1b.i", "1b.ii", "1b.iii"),
        2: ("2a.i", "2a.ii", "2a.iii", "2a.iv", "2b.i", "2b.ii", "2b.iii"),
        3: ("3a", "3b", "3c", "3d", "3e", "3f"),
    }[window]
    for cid in case_clauses:
        value, inputs, record = _clause_value(ctx, cid)
        ctx.note(f"clause_{cid}", inputs, value)
        if value:
            return _au(ctx, cid, record)

    if window in (2, 3):
        mod = 1 << window
        assert inst.epsilon % mod == inst.rad_odd % mod, (
            "epsilon and radOdd must agree mod 2^(alpha-beta) once the local clauses fail"
        )
        ctx.note("epsilon_matches_rad_odd", f"mod {mod}", True)
        try:
            value, inputs, record = _clause_value(ctx, "4")
        except EnumerationBudgetExceeded:
            ctx.note("clause_4", "enumeration budget exhausted", False)
            return Verdict(
                INCONCLUSIVE, None, tuple(ctx.trace), {"budget": cfg.enum_budget}
            )
        ctx.note("clause_4", inputs, value)
        if value:
            return _au(ctx, "4", record)

    return Verdict(NOT_ALMOST_UNIVERSAL, "exhausted", tuple(ctx.trace))
