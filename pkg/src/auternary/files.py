"""Instance files and classification reports.

The on-disk instance format is line-oriented ``key = value`` text with
``#`` comments.  Exactly one of two schemas must be present: a polynomial
schema (``quadratic``/``linear``/optional ``constant``) giving the
coefficients of f directly, or a lattice schema (``gram``/``w``) giving the
upper triangle of the bilinear Gram matrix and the doubled shift vector.

Reports are plain dicts built in a fixed key order, so the machine
rendering (JSON) is stable byte for byte and round-trips exactly.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

from .classify import Verdict
from .coset import CosetInstance, complement_g2, normalize_lattice, normalize_polynomial
from .errors import ParseError
from .lattice import GramMatrix
from .local2 import jordan_split
from .spectrum import Spectrum

REPORT_FORMAT = "auternary.report.v1"

# Machine reports keep at most this many explicit exceptions; the text
# rendering shows far fewer.  The count field is always exact.
MACHINE_EXCEPTION_CAP = 500
TEXT_EXCEPTION_CAP = 20

_KEY_ARITY = {
    "form": None,
    "quadratic": 6,
    "linear": 3,
    "constant": 1,
    "gram": 6,
    "w": 3,
}

_POLY_KEYS = ("quadratic", "linear", "constant")
_LATTICE_KEYS = ("gram", "w")


@dataclass(frozen=True)
class InstanceSource:
    """Parsed but not yet validated instance file content."""

    form: str
    quadratic: tuple[int, ...] | None = None
    linear: tuple[int, ...] | None = None
    constant: int | None = None
    gram: tuple[int, ...] | None = None
    w: tuple[int, ...] | None = None


def parse_instance(text: str, origin: str = "<input>") -> InstanceSource:
    """Parse instance-file text, raising ParseError naming the bad line."""
    values: dict[str, tuple[int, ...]] = {}
    form: str | None = None
    lines: dict[str, int] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ParseError(f"{origin}:{lineno}: expected 'key = value', got {raw.strip()!r}")
        key, _, value = line.partition("=")
        key = key.strip()
        value = value.strip()
        if key not in _KEY_ARITY:
            raise ParseError(f"{origin}:{lineno}: unknown key {key!r}")
        if key in lines:
            raise ParseError(
                f"{origin}:{lineno}: duplicate key {key!r} (first on line {lines[key]})"
            )
        lines[key] = lineno
        if key == "form":
            if value not in ("polynomial", "lattice"):
                raise ParseError(
                    f"{origin}:{lineno}: form must be 'polynomial' or 'lattice', got {value!r}"
                )
            form = value
            continue
        parts = value.split()
        arity = _KEY_ARITY[key]
        if len(parts) != arity:
            raise ParseError(
                f"{origin}:{lineno}: {key!r} needs {arity} integer(s), got {len(parts)}"
            )
        try:
            values[key] = tuple(int(p) for p in parts)
        except ValueError:
            raise ParseError(f"{origin}:{lineno}: {key!r} values must be integers") from None

    if form is None:
        raise ParseError(f"{origin}: missing 'form = polynomial' or 'form = lattice'")
    required = ("quadratic", "linear") if form == "polynomial" else _LATTICE_KEYS
    allowed = _POLY_KEYS if form == "polynomial" else _LATTICE_KEYS
    for key in values:
        if key not in allowed:
            raise ParseError(
                f"{origin}:{lines[key]}: key {key!r} does not belong to the {form} schema"
            )
    for key in required:
        if key not in values:
            raise ParseError(f"{origin}: {form} schema is missing required key {key!r}")

    if form == "polynomial":
        constant = values["constant"][0] if "constant" in values else None
        return InstanceSource(
            form=form,
            quadratic=values["quadratic"],
            linear=values["linear"],
            constant=constant,
        )
    return InstanceSource(form=form, gram=values["gram"], w=values["w"])


def read_instance(path: str) -> InstanceSource:
    with open(path, encoding="utf-8") as fh:
        return parse_instance(fh.read(), origin=path)


def build_instance(
    source: InstanceSource, lenient: bool = False, rho_iterations: int | None = None
) -> CosetInstance:
    """Validate a parsed source into a CosetInstance.

    Raises the normalization errors (NonClassicForm, OutOfScope,
    AssumptionViolated, NotPositiveDefinite, FactorizationLimit) unchanged.
    """
    kwargs = {"lenient": lenient}
    if rho_iterations is not None:
        kwargs["rho_iterations"] = rho_iterations
    if source.form == "polynomial":
        return normalize_polynomial(
            source.quadratic, source.linear, source.constant or 0, **kwargs
        )
    return normalize_lattice(source.gram, source.w, **kwargs)


def upper_triangle(gram: GramMatrix) -> tuple[int, ...]:
    e = gram.entries
    return (e[0][0], e[0][1], e[0][2], e[1][1], e[1][2], e[2][2])


def render_instance(inst: CosetInstance, comment: str | None = None) -> str:
    """Lattice-form file text for an instance; parses back identically."""
    lines = []
    if comment:
        lines.append(f"# {comment}")
    lines.append("form = lattice")
    lines.append("gram = " + " ".join(str(v) for v in upper_triangle(inst.gram)))
    lines.append("w = " + " ".join(str(v) for v in inst.w))
    return "\n".join(lines) + "\n"


def _instance_echo(source: InstanceSource, inst: CosetInstance | None) -> dict:
    echo: dict = {"form": "lattice"}
    if inst is not None:
        echo["gram"] = list(upper_triangle(inst.gram))
        echo["w"] = list(inst.w)
    elif source.form == "lattice":
        echo["gram"] = list(source.gram)
        echo["w"] = list(source.w)
    else:
        # Instance construction failed before a Gram matrix existed.
        echo["gram"] = None
        echo["w"] = None
    if source.form == "polynomial":
        echo["source"] = {
            "form": "polynomial",
            "quadratic": list(source.quadratic),
            "linear": list(source.linear),
            "constant": source.constant if source.constant is not None else 0,
        }
    else:
        echo["source"] = None
    return echo


def _invariants_block(inst: CosetInstance) -> dict:
    complement = complement_g2(inst)
    jordan = jordan_split(inst.gram, 2)
    return {
        "conductor": inst.conductor,
        "coset_norm": inst.q_nu,
        "alpha": inst.alpha,
        "beta": inst.beta,
        "epsilon": inst.epsilon,
        "det": inst.det_n,
        "ord2_det": inst.ord2_det,
        "lambda": inst.lam,
        "rad_odd": inst.rad_odd,
        "odd_primes": list(inst.odd_primes),
        "bilinear_exp2": inst.b_nu_exp,
        "norm_odd_content": inst.norm_odd_content,
        "jordan2": [
            {
                "scale": c.scale_exp,
                "rank": c.rank,
                "type": "even" if c.type_two else "odd",
                "det_unit_mod8": c.det_unit_mod8,
            }
            for c in jordan.constituents
        ],
        "complement": {
            "gram": [list(row) for row in complement.gram.entries],
            "norm_exp2": complement.norm_exp2,
        },
    }


def _verdict_block(verdict: Verdict | None, message: str | None, status: str | None) -> dict | None:
    if verdict is None and status is None:
        return None
    if verdict is None:
        return {
            "status": status,
            "clause": None,
            "message": message,
            "trace": [],
            "oracle_budget": None,
        }
    return {
        "status": verdict.status,
        "clause": verdict.clause,
        "message": message,
        "trace": [
            {"predicate": t.predicate, "inputs": t.inputs, "value": t.value}
            for t in verdict.trace
        ],
        "oracle_budget": dict(verdict.oracle_budget) if verdict.oracle_budget else None,
    }


def _spectrum_block(spec: Spectrum | None) -> dict | None:
    if spec is None:
        return None
    exceptions = list(spec.exceptions)
    truncated = len(exceptions) > MACHINE_EXCEPTION_CAP
    gaps = [b - a for a, b in zip(exceptions, exceptions[1:])]
    return {
        "bound": spec.bound,
        "exception_count": len(exceptions),
        "exceptions": exceptions[:MACHINE_EXCEPTION_CAP],
        "truncated": truncated,
        "largest_gap": max(gaps) if gaps else None,
    }


def build_report(
    source: InstanceSource,
    inst: CosetInstance | None = None,
    verdict: Verdict | None = None,
    spec: Spectrum | None = None,
    status: str | None = None,
    message: str | None = None,
) -> dict:
    """Assemble the report dict in canonical key order.

    `status`/`message` describe a failed validation when no verdict exists
    (the status is then the exception class name).
    """
    return {
        "format": REPORT_FORMAT,
        "instance": _instance_echo(source, inst),
        "invariants": _invariants_block(inst) if inst is not None else None,
        "verdict": _verdict_block(verdict, message, status),
        "spectrum": _spectrum_block(spec),
    }


def render_machine(report: dict) -> str:
    return json.dumps(report, indent=2) + "\n"


def parse_machine(text: str) -> dict:
    return json.loads(text)


def _format_gram_rows(rows) -> str:
    return " | ".join(" ".join(str(v) for v in row) for row in rows)


def render_text(report: dict) -> str:
    out: list[str] = []
    inst = report["instance"]
    if inst["gram"] is not None:
        out.append("instance: gram = " + " ".join(str(v) for v in inst["gram"]))
        out.append("          w    = " + " ".join(str(v) for v in inst["w"]))
    else:
        out.append("instance: (not validated)")
    if inst.get("source"):
        src = inst["source"]
        out.append(
            "          from polynomial: quadratic = "
            + " ".join(str(v) for v in src["quadratic"])
            + ", linear = "
            + " ".join(str(v) for v in src["linear"])
            + f", constant = {src['constant']}"
        )
    inv = report["invariants"]
    if inv is not None:
        out.append(
            f"invariants: alpha={inv['alpha']} beta={inv['beta']} "
            f"epsilon={inv['epsilon']} lambda={inv['lambda']}"
        )
        out.append(
            f"            det={inv['det']} ord2_det={inv['ord2_det']} "
            f"rad_odd={inv['rad_odd']} odd_primes={inv['odd_primes']}"
        )
        out.append(
            f"            coset_norm={inv['coset_norm']} "
            f"bilinear_exp2={inv['bilinear_exp2']} "
            f"norm_odd_content={inv['norm_odd_content']}"
        )
        jordan = "; ".join(
            f"scale {c['scale']} rank {c['rank']} {c['type']}"
            + (f" unit {c['det_unit_mod8']}" if c["det_unit_mod8"] is not None else "")
            for c in inv["jordan2"]
        )
        out.append(f"            jordan at 2: {jordan}")
        comp = inv["complement"]
        out.append(
            f"            complement: gram {_format_gram_rows(comp['gram'])}"
            f"  norm_exp2={comp['norm_exp2']}"
        )
    verdict = report["verdict"]
    if verdict is not None:
        line = f"verdict: {verdict['status']}"
        if verdict["clause"]:
            line += f" via clause {verdict['clause']}"
        if verdict["message"]:
            line += f" ({verdict['message']})"
        out.append(line)
        if verdict["oracle_budget"]:
            out.append(f"         budget: {verdict['oracle_budget']}")
        for entry in verdict["trace"]:
            inputs = f" [{entry['inputs']}]" if entry["inputs"] else ""
            out.append(f"  {entry['predicate']}{inputs} -> {entry['value']}")
    spec = report["spectrum"]
    if spec is not None:
        out.append(
            f"spectrum to {spec['bound']}: {spec['exception_count']} exception(s)"
        )
        if spec["exceptions"]:
            shown = spec["exceptions"][:TEXT_EXCEPTION_CAP]
            suffix = ""
            if spec["exception_count"] > len(shown):
                suffix = f"  (first {len(shown)} of {spec['exception_count']})"
            out.append("  exceptions: " + " ".join(str(t) for t in shown) + suffix)
        if spec["largest_gap"] is not None:
            out.append(f"  largest gap between exceptions: {spec['largest_gap']}")
    return "\n".join(out) + "\n"
