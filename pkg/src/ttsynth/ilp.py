"""Exact solver for bounded integer linear programs with a minimize objective.

All arithmetic is exact (Python integers); there is no floating point and no
tolerance anywhere. Among equal-objective optima the solver deterministically
returns the assignment that is smallest when variables are compared from the
last declared one backwards, so identical models always yield identical
solutions.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Optional, Sequence, Tuple

LE = "<="
EQ = "=="
GE = ">="

_RELATIONS = (LE, EQ, GE)


def _check_int(value, what: str) -> int:
    if not isinstance(value, int) or isinstance(value, bool):
        raise ValueError(f"{what} must be a bounded integer, got {value!r}")
    return value


@dataclass(frozen=True)
class Variable:
    """Integer variable with inclusive finite bounds."""

    id: str
    lower: int
    upper: int

    def __post_init__(self):
        _check_int(self.lower, f"lower bound of {self.id!r}")
        _check_int(self.upper, f"upper bound of {self.id!r}")
        if self.lower > self.upper:
            raise ValueError(f"empty domain for {self.id!r}: [{self.lower}, {self.upper}]")


@dataclass(frozen=True)
class LinearConstraint:
    """`sum(terms[v] * v) relation rhs` over model variables."""

    terms: Mapping[str, int]
    relation: str
    rhs: int

    def __post_init__(self):
        for v, c in dict(self.terms).items():
            _check_int(c, f"coefficient of {v!r}")
        # Zero coefficients carry no information; drop them up front.
        object.__setattr__(self, "terms", {v: c for v, c in dict(self.terms).items() if c})
        if self.relation not in _RELATIONS:
            raise ValueError(f"unknown relation: {self.relation!r}")
        _check_int(self.rhs, "rhs")

    def render(self) -> str:
        parts = [f"{c:+d} {v}" for v, c in self.terms.items()] or ["0"]
        return f"{' '.join(parts)} {self.relation} {self.rhs}"


@dataclass(frozen=True)
class IlpModel:
    """Bounded integer variables, linear constraints, minimized objective.

    An empty objective turns solve() into a pure feasibility search.
    """

    variables: Tuple[Variable, ...]
    constraints: Tuple[LinearConstraint, ...] = ()
    objective: Mapping[str, int] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "variables", tuple(self.variables))
        object.__setattr__(self, "constraints", tuple(self.constraints))
        object.__setattr__(self, "objective", dict(self.objective))
        ids = [v.id for v in self.variables]
        known = set(ids)
        if len(known) != len(ids):
            raise ValueError("duplicate variable id")
        for con in self.constraints:
            for v in con.terms:
                if v not in known:
                    raise ValueError(f"constraint references unknown variable {v!r}")
        for v, c in self.objective.items():
            if v not in known:
                raise ValueError(f"objective references unknown variable {v!r}")
            _check_int(c, f"objective coefficient of {v!r}")

    def with_variables(self, extra: Sequence[Variable]) -> "IlpModel":
        return IlpModel(self.variables + tuple(extra), self.constraints, self.objective)

    def with_constraints(self, extra: Sequence[LinearConstraint]) -> "IlpModel":
        return IlpModel(self.variables, self.constraints + tuple(extra), self.objective)

    def with_objective(self, objective: Mapping[str, int]) -> "IlpModel":
        return IlpModel(self.variables, self.constraints, objective)


@dataclass(frozen=True)
class Solution:
    assignment: Mapping[str, int]
    objective_value: int

    def __post_init__(self):
        object.__setattr__(self, "assignment", dict(self.assignment))


@dataclass(frozen=True)
class AssignmentCheck:
    ok: bool
    violated: Optional[str] = None

    def __bool__(self) -> bool:
        return self.ok


def check_assignment(model: IlpModel, assignment: Mapping[str, int]) -> AssignmentCheck:
    """Verify bounds and every constraint; name the first violation."""
    for v in model.variables:
        if v.id not in assignment:
            raise ValueError(f"assignment misses variable {v.id!r}")
        val = assignment[v.id]
        if not (v.lower <= val <= v.upper):
            return AssignmentCheck(False, f"bound {v.id} in [{v.lower}, {v.upper}]")
    for idx, con in enumerate(model.constraints):
        total = sum(c * assignment[v] for v, c in con.terms.items())
        ok = (total <= con.rhs) if con.relation == LE else (total >= con.rhs) if con.relation == GE else (total == con.rhs)
        if not ok:
            return AssignmentCheck(False, f"constraint {idx}: {con.render()}")
    return AssignmentCheck(True)


def objective_value(model: IlpModel, assignment: Mapping[str, int]) -> int:
    return sum(c * assignment[v] for v, c in model.objective.items())


def format_lp(model: IlpModel) -> str:
    """Plain-text dump of the model for inspection (not a stability contract)."""
    lines = ["minimize"]
    obj = " ".join(f"{c:+d} {v}" for v, c in model.objective.items()) or "0"
    lines.append(f"  {obj}")
    lines.append("subject to")
    for idx, con in enumerate(model.constraints):
        lines.append(f"  c{idx}: {con.render()}")
    lines.append("bounds")
    for v in model.variables:
        lines.append(f"  {v.lower} <= {v.id} <= {v.upper}")
    return "\n".join(lines) + "\n"


def _ceil_ratio(n: int, d: int) -> int:
    if d < 0:
        n, d = -n, -d
    return -((-n) // d)


def _floor_ratio(n: int, d: int) -> int:
    if d < 0:
        n, d = -n, -d
    return n // d


class _Row:
    """Compiled constraint: lob <= sum(coeffs * x) <= hib (None = open side)."""

    __slots__ = ("idxs", "coeffs", "lob", "hib")

    def __init__(self, idxs, coeffs, lob, hib):
        self.idxs = idxs
        self.coeffs = coeffs
        self.lob = lob
        self.hib = hib


def _propagate(rows: list[_Row], lo: list[int], hi: list[int]) -> bool:
    """Tighten integer bounds to a fixpoint; False means provably infeasible."""
    changed = True
    while changed:
        changed = False
        for row in rows:
            idxs, coeffs, lob, hib = row.idxs, row.coeffs, row.lob, row.hib
            minact = 0
            maxact = 0
            for i, c in zip(idxs, coeffs):
                if c > 0:
                    minact += c * lo[i]
                    maxact += c * hi[i]
                else:
                    minact += c * hi[i]
                    maxact += c * lo[i]
            if hib is not None and minact > hib:
                return False
            if lob is not None and maxact < lob:
                return False
            for i, c in zip(idxs, coeffs):
                cmin = c * lo[i] if c > 0 else c * hi[i]
                if hib is not None:
                    slack = hib - (minact - cmin)
                    if c > 0:
                        nb = _floor_ratio(slack, c)
                        if nb < hi[i]:
                            maxact += c * (nb - hi[i])
                            hi[i] = nb
                            changed = True
                    else:
                        nb = _ceil_ratio(slack, c)
                        if nb > lo[i]:
                            maxact += c * (nb - lo[i])
                            lo[i] = nb
                            changed = True
                    if lo[i] > hi[i]:
                        return False
                if lob is not None:
                    need = lob - (maxact - (c * hi[i] if c > 0 else c * lo[i]))
                    if c > 0:
                        nb = _ceil_ratio(need, c)
                        if nb > lo[i]:
                            minact += c * (nb - lo[i])
                            lo[i] = nb
                            changed = True
                    else:
                        nb = _floor_ratio(need, c)
                        if nb < hi[i]:
                            minact += c * (nb - hi[i])
                            hi[i] = nb
                            changed = True
                    if lo[i] > hi[i]:
                        return False
    return True


def solve(model: IlpModel) -> Optional[Solution]:
    """Minimize the objective over all integer points; None if infeasible.

    Depth-first branch and bound over the finite variable domains. Each node
    runs exact interval propagation over all constraints plus a cut on the
    incumbent value, so pruning decisions are exact as well. The search key
    combines the objective with per-variable position weights, which makes
    the returned optimum unique: later-declared variables are minimized
    first among equal-objective points.
    """
    ids = [v.id for v in model.variables]
    n = len(ids)
    index = {vid: i for i, vid in enumerate(ids)}
    root_lo = [v.lower for v in model.variables]
    root_hi = [v.upper for v in model.variables]

    # Mixed-radix weights: the tie-break key of an assignment is unique.
    weights = [0] * n
    acc = 1
    for i in range(n):
        weights[i] = acc
        acc *= root_hi[i] - root_lo[i] + 1
    big = acc  # exceeds any possible tie-break key difference

    obj = [0] * n
    for vid, c in model.objective.items():
        obj[index[vid]] = c
    comb = [big * obj[i] + weights[i] for i in range(n)]

    rows: list[_Row] = []
    for con in model.constraints:
        idxs = tuple(index[v] for v in con.terms)
        coeffs = tuple(con.terms[v] for v in con.terms)
        if con.relation == LE:
            lob, hib = None, con.rhs
        elif con.relation == GE:
            lob, hib = con.rhs, None
        else:
            lob, hib = con.rhs, con.rhs
        if not idxs:
            # Constant constraint: either trivially true or the model is infeasible.
            if (lob is not None and lob > 0) or (hib is not None and hib < 0):
                return None
            continue
        rows.append(_Row(idxs, coeffs, lob, hib))

    # comb[i] can be 0 when bounds fix variable i; rows must not carry zeros
    cut_support = tuple(i for i in range(n) if comb[i])
    cut = _Row(cut_support, tuple(comb[i] for i in cut_support), None, None)
    best_key: Optional[int] = None
    best: Optional[list[int]] = None

    stack = [(root_lo, root_hi)]
    while stack:
        lo, hi = stack.pop()
        lo, hi = list(lo), list(hi)
        active = rows if best_key is None else rows + [cut]
        if best_key is not None:
            cut.hib = best_key - 1
        if not _propagate(active, lo, hi):
            continue
        for i in range(n):
            if lo[i] < hi[i]:
                mid = (lo[i] + hi[i]) // 2
                upper_lo = list(lo)
                upper_lo[i] = mid + 1
                stack.append((upper_lo, hi))
                lower_hi = list(hi)
                lower_hi[i] = mid
                stack.append((lo, lower_hi))
                break
        else:
            key = sum(c * v for c, v in zip(comb, lo))
            if best_key is None or key < best_key:
                best_key = key
                best = lo
    if best is None:
        return None
    assignment = dict(zip(ids, best))
    return Solution(assignment, sum(c * v for c, v in zip(obj, best)))
