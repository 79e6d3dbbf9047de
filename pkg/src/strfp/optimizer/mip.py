"""Linearized partition model and its LP-format serialization.

The nonlinear correctness bound ``eta <= sum_j (1 - d^w_j) d^q_j`` is
linearized with one binary ``z`` per (pair, bin):

    z <= d^q_j,   z <= 1 - d^w_j,   z >= d^q_j - d^w_j

and ``eta <= sum_j z``. The no-false-negative constraints are not emitted:
they already follow from the fingerprint constraints.
"""

from __future__ import annotations

import io
from dataclasses import dataclass, field

from ..core import Alphabet, Partition
from ..errors import DataError
from .instance import TrainingInstance

ROUND_TOL = 1e-6
_TERMS_PER_LINE = 8


@dataclass(frozen=True)
class Constraint:
    name: str
    family: str
    terms: tuple[tuple[str, int], ...]
    sense: str
    rhs: int


@dataclass
class ModelInstance:
    width: int
    alphabet: Alphabet
    n_vars: dict[str, int]
    n_constraints: dict[str, int]
    variables: list[str]
    objective: list[str]
    constraints: list[Constraint]
    var_name_map: dict[str, tuple] = field(repr=False)
    lp_text: str = field(default="", repr=False)

    @property
    def total_vars(self) -> int:
        return sum(self.n_vars.values())

    @property
    def total_constraints(self) -> int:
        return sum(self.n_constraints.values())


def build_mip(inst: TrainingInstance) -> ModelInstance:
    n = inst.width
    members = list(inst.alphabet)
    for role, strings in (("q", inst.queries), ("w", inst.words)):
        for i, s in enumerate(strings):
            if not s:
                raise DataError(f"empty string {role}{i} cannot be modelled")
            stray = set(s) - set(members)
            if stray:
                raise DataError(f"string {role}{i} holds bytes outside the alphabet: {sorted(stray)}")

    names: dict[str, tuple] = {}
    variables: list[str] = []

    def var(name, family, *idx):
        names[name] = (family, *idx)
        variables.append(name)
        return name

    x = {(a, j): var(f"x_{a}_{j}", "x", a, j) for a in members for j in range(n)}
    strings = [("w", i, s) for i, s in enumerate(inst.words)] + [("q", i, s) for i, s in enumerate(inst.queries)]
    d = {(r, i, j): var(f"d_{r}{i}_{j}", "d", r, i, j) for r, i, _ in strings for j in range(n)}
    pairs = inst.negative_pairs
    eta = {(q, w): var(f"eta_{q}_{w}", "eta", q, w) for q, w in pairs}
    z = {(q, w, j): var(f"z_{q}_{w}_{j}", "z", q, w, j) for q, w in pairs for j in range(n)}

    cons: list[Constraint] = []
    for a in members:
        cons.append(Constraint(f"assign_{a}", "assign", tuple((x[a, j], 1) for j in range(n)), "=", 1))
    for r, i, s in strings:
        for a in sorted(set(s)):
            for j in range(n):
                cons.append(Constraint(f"fplo_{r}{i}_{a}_{j}", "fp_lower",
                                       ((x[a, j], 1), (d[r, i, j], -1)), "<=", 0))
    for r, i, s in strings:
        for j in range(n):
            terms = ((d[r, i, j], 1),) + tuple((x[a, j], -1) for a in sorted(set(s)))
            cons.append(Constraint(f"fpup_{r}{i}_{j}", "fp_upper", terms, "<=", 0))
    for q, w in pairs:
        for j in range(n):
            zz, dq, dw = z[q, w, j], d["q", q, j], d["w", w, j]
            cons.append(Constraint(f"zq_{q}_{w}_{j}", "z_query", ((zz, 1), (dq, -1)), "<=", 0))
            cons.append(Constraint(f"zw_{q}_{w}_{j}", "z_word", ((zz, 1), (dw, 1)), "<=", 1))
            cons.append(Constraint(f"zl_{q}_{w}_{j}", "z_lower", ((zz, 1), (dq, -1), (dw, 1)), ">=", 0))
    for q, w in pairs:
        terms = ((eta[q, w], 1),) + tuple((z[q, w, j], -1) for j in range(n))
        cons.append(Constraint(f"c_eta_{q}_{w}", "eta", terms, "<=", 0))

    n_cons: dict[str, int] = {}
    for c in cons:
        n_cons[c.family] = n_cons.get(c.family, 0) + 1
    model = ModelInstance(
        width=n,
        alphabet=inst.alphabet,
        n_vars={"x": len(x), "d": len(d), "eta": len(eta), "z": len(z)},
        n_constraints=n_cons,
        variables=variables,
        objective=list(eta.values()),
        constraints=cons,
        var_name_map=names,
    )
    model.lp_text = _lp_text(model)
    return model


def expected_counts(inst: TrainingInstance) -> tuple[int, int]:
    """Closed-form (variables, constraints) for ``build_mip(inst)``."""
    n = inst.width
    a = len(inst.alphabet)
    s = len(inst.words) + len(inst.queries)
    p = inst.n_negatives
    udist = sum(len(set(t)) for t in inst.words + inst.queries)
    return a * n + s * n + p + p * n, a + n * udist + n * s + 3 * n * p + p


def _expr(terms) -> list[str]:
    parts = []
    for k, (name, coef) in enumerate(terms):
        sign = "-" if coef < 0 else "+"
        mag = "" if abs(coef) == 1 else f"{abs(coef)} "
        if k == 0:
            parts.append(f"{'-' if coef < 0 else ''}{mag}{name}")
        else:
            parts.append(f"{sign} {mag}{name}")
    return parts


def _wrapped(label: str, parts: list[str], tail: str = "") -> str:
    lines = []
    for k in range(0, len(parts), _TERMS_PER_LINE):
        lines.append("   " + " ".join(parts[k:k + _TERMS_PER_LINE]))
    if lines:
        lines[0] = f" {label}: " + lines[0].lstrip()
    else:
        lines = [f" {label}: 0"]
    lines[-1] += tail
    return "\n".join(lines)


def _lp_text(model: ModelInstance) -> str:
    out = [f"\\ string fingerprint partition model: width {model.width}, "
           f"alphabet {model.alphabet.to_spec()}", "Maximize"]
    out.append(_wrapped("obj", _expr((v, 1) for v in model.objective)))
    out.append("Subject To")
    for c in model.constraints:
        out.append(_wrapped(c.name, _expr(c.terms), f" {c.sense} {c.rhs}"))
    out.append("Binary")
    for k in range(0, len(model.variables), _TERMS_PER_LINE):
        out.append("   " + " ".join(model.variables[k:k + _TERMS_PER_LINE]))
    out.append("End")
    return "\n".join(out) + "\n"


def export_lp(model: ModelInstance, sink) -> None:
    try:
        sink.write(model.lp_text)
    except OSError as e:
        raise DataError(f"cannot write LP file: {e}") from None


def read_solution(text: str) -> dict[str, float]:
    """Parse ``name value`` lines; ``#`` starts a comment."""
    values = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 2:
            raise DataError(f"solution line {lineno}: expected 'name value', got {raw!r}")
        try:
            values[parts[0]] = float(parts[1])
        except ValueError:
            raise DataError(f"solution line {lineno}: bad value {parts[1]!r}") from None
    return values


def import_solution(model: ModelInstance, solution) -> Partition:
    """Rebuild the partition from the ``x`` values of a solver solution.

    Values within 1e-6 of 0 or 1 are rounded; absent variables read as 0.
    """
    values = read_solution(solution) if isinstance(solution, str) else dict(solution)
    assignment: dict[int, int] = {}
    for name, v in values.items():
        if name not in model.var_name_map:
            raise DataError(f"unknown variable {name!r} in solution")
        if abs(v) <= ROUND_TOL:
            continue
        if abs(v - 1) > ROUND_TOL:
            raise DataError(f"variable {name} has non-binary value {v!r}")
        family, *idx = model.var_name_map[name]
        if family != "x":
            continue
        a, j = idx
        if a in assignment:
            raise DataError(f"byte {a} assigned to bins {assignment[a]} and {j}")
        assignment[a] = j
    missing = [a for a in model.alphabet if a not in assignment]
    if missing:
        raise DataError(f"no bin assigned to bytes {missing[:8]}")
    return Partition.from_assignment(model.alphabet, model.width, assignment, "imported")


def implied_values(model: ModelInstance, inst: TrainingInstance, partition: Partition) -> dict[str, int]:
    """Variable values induced by a partition, with every eta at its maximum."""
    from .. import kernels

    vals = {}
    for a in model.alphabet:
        for j in range(model.width):
            vals[f"x_{a}_{j}"] = int(partition.table[a] == j)
    qf = [kernels.fingerprint(partition.table, q) for q in inst.queries]
    wf = [kernels.fingerprint(partition.table, w) for w in inst.words]
    for r, fps in (("w", wf), ("q", qf)):
        for i, f in enumerate(fps):
            for j in range(model.width):
                vals[f"d_{r}{i}_{j}"] = f >> j & 1
    for q, w in inst.negative_pairs:
        sep = qf[q] & ~wf[w]
        for j in range(model.width):
            vals[f"z_{q}_{w}_{j}"] = sep >> j & 1
        vals[f"eta_{q}_{w}"] = int(sep != 0)
    return vals


def dumps_solution(values: dict[str, float]) -> str:
    buf = io.StringIO()
    for name, v in values.items():
        buf.write(f"{name} {v:g}\n")
    return buf.getvalue()
