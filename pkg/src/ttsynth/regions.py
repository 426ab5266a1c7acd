"""Region enumeration: encode the region conditions as an ILP and list all
minimal nonzero regions up to a bound k via blocking constraints.

A region is one token distribution over all places of the specification such
that equally labelled transitions have the same rise and all nets carry the
same initial token sum. Discovery mode additionally forces the final place
of every net to stay unmarked.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Optional, Tuple

from . import ilp
from .core import LabelledNet, Multiset, Specification

BLOCK_PREFIX = "_blk"

MODES = ("synthesis", "discovery")


@dataclass(frozen=True)
class Region:
    """Token distribution over the union of all specification places,
    computed under (and bounded by) k."""

    marking: Multiset
    k: int

    def __post_init__(self):
        if self.k < 1:
            raise ValueError("k must be >= 1")


@dataclass(frozen=True)
class RegionProblem:
    spec: Specification
    k: int
    mode: str = "synthesis"
    max_regions: Optional[int] = None
    final_places: Optional[Mapping[int, str]] = None

    def __post_init__(self):
        if self.k < 1:
            raise ValueError("k must be >= 1")
        if self.mode not in MODES:
            raise ValueError(f"unknown mode: {self.mode!r}")
        if self.max_regions is not None and self.max_regions < 1:
            raise ValueError("max_regions must be >= 1")
        if self.final_places is not None:
            object.__setattr__(self, "final_places", dict(self.final_places))


@dataclass(frozen=True)
class RegionCheck:
    """Failure names the first violated condition: "bound", "rise"
    (same label, same rise) or "initial-sum" (equal sums across nets)."""

    ok: bool
    condition: Optional[str] = None
    witness: Optional[str] = None

    def __bool__(self) -> bool:
        return self.ok


@dataclass(frozen=True)
class RegionEnumeration:
    regions: Tuple[Region, ...]
    truncated: bool = False


def discovery_final_places(spec: Specification, overrides: Optional[Mapping[int, str]] = None) -> dict[int, str]:
    """Per net (by position) the unique place with no outgoing arcs.

    An override pins the final place of a net explicitly; without one the
    structural criterion must single out exactly one place.
    """
    result: dict[int, str] = {}
    for idx, ln in enumerate(spec.nets):
        if overrides and idx in overrides:
            place = overrides[idx]
            if place not in ln.net.places:
                raise ValueError(f"final place override {place!r} is not a place of net {idx + 1}")
            result[idx] = place
            continue
        sinks = [p for p in ln.net.places if not any(src == p for (src, _tgt) in ln.net.arcs)]
        if len(sinks) != 1:
            raise ValueError(f"no unique final place in net {idx + 1}: found {len(sinks)}")
        result[idx] = sinks[0]
    return result


def _rise_terms(ln: LabelledNet, e: str) -> dict[str, int]:
    """Coefficients of the linear rise expression of transition e."""
    terms: dict[str, int] = {}
    for (src, tgt), w in ln.net.arcs.items():
        if src == e:  # outgoing arc: contributes +w * place
            terms[tgt] = terms.get(tgt, 0) + w
        elif tgt == e:  # incoming arc: contributes -w * place
            terms[src] = terms.get(src, 0) - w
    return {p: c for p, c in terms.items() if c}


def build_base_model(problem: RegionProblem) -> ilp.IlpModel:
    """One [0, k] variable per place; rise equalities between the first
    transition of each label and every other one carrying it; initial-sum
    equalities between net 1 and every later net; in discovery mode a zero
    equality per final place."""
    spec, k = problem.spec, problem.k
    variables = [ilp.Variable(p, 0, k) for p in spec.all_places()]
    constraints: list[ilp.LinearConstraint] = []

    first_of_label: dict[str, dict[str, int]] = {}
    for ln in spec.nets:
        for e in ln.net.transitions:
            label = ln.labels[e]
            rise = _rise_terms(ln, e)
            if label not in first_of_label:
                first_of_label[label] = rise
            else:
                terms = dict(first_of_label[label])
                for p, c in rise.items():
                    terms[p] = terms.get(p, 0) - c
                constraints.append(ilp.LinearConstraint({p: c for p, c in terms.items() if c}, ilp.EQ, 0))

    base = {p: n for p, n in spec.nets[0].initial.items()}
    for ln in spec.nets[1:]:
        terms = dict(base)
        for p, n in ln.initial.items():
            terms[p] = terms.get(p, 0) - n
        constraints.append(ilp.LinearConstraint({p: c for p, c in terms.items() if c}, ilp.EQ, 0))

    if problem.mode == "discovery":
        finals = discovery_final_places(spec, problem.final_places)
        for idx in sorted(finals):
            constraints.append(ilp.LinearConstraint({finals[idx]: 1}, ilp.EQ, 0))

    return ilp.IlpModel(tuple(variables), tuple(constraints))


def add_seek_constraints(model: ilp.IlpModel) -> ilp.IlpModel:
    """Ask for a nonzero distribution with as few tokens as possible: the sum
    of all current (place) variables is >= 1 and is minimized."""
    terms = {v.id: 1 for v in model.variables}
    return model.with_constraints([ilp.LinearConstraint(terms, ilp.GE, 1)]).with_objective(terms)


def add_blocking(model: ilp.IlpModel, found: Region, k: int) -> ilp.IlpModel:
    """Exclude `found` and everything componentwise above it.

    For every positive component s of the found region a binary indicator is
    forced to 1 exactly when the place variable drops below s; at least one
    indicator must be 1, so any further solution is strictly smaller in at
    least one positive component.
    """
    support = [p for p in found.marking.keys()]
    if not support:
        raise ValueError("cannot block the all-zero region")
    # Name binaries per blocking round, not per binary, for stable ids.
    existing_rounds = {
        v.id.split("_", 2)[1] for v in model.variables if v.id.startswith(BLOCK_PREFIX)
    }
    round_no = len(existing_rounds) + 1

    binaries = []
    constraints = []
    sum_terms: dict[str, int] = {}
    for place in support:
        s = found.marking[place]
        flag = f"{BLOCK_PREFIX}{round_no}_{place}"
        binaries.append(ilp.Variable(flag, 0, 1))
        constraints.append(ilp.LinearConstraint({place: 1, flag: k}, ilp.GE, s))
        constraints.append(ilp.LinearConstraint({place: 1, flag: k}, ilp.LE, s + k - 1))
        sum_terms[flag] = 1
    constraints.append(ilp.LinearConstraint(sum_terms, ilp.GE, 1))
    return model.with_variables(binaries).with_constraints(constraints)


def _region_from_solution(problem: RegionProblem, solution: ilp.Solution) -> Region:
    marking = Multiset(
        {p: solution.assignment[p] for p in problem.spec.all_places() if solution.assignment[p]}
    )
    return Region(marking, problem.k)


def enumerate_minimal_regions(problem: RegionProblem) -> RegionEnumeration:
    """Iteratively solve, record, and block until the model turns infeasible.

    Returns every minimal nonzero region up to k in discovery order; with
    max_regions set, stops early and flags whether anything was left.
    """
    model = add_seek_constraints(build_base_model(problem))
    found: list[Region] = []
    while True:
        solution = ilp.solve(model)
        if solution is None:
            return RegionEnumeration(tuple(found), truncated=False)
        region = _region_from_solution(problem, solution)
        if problem.max_regions is not None and len(found) >= problem.max_regions:
            return RegionEnumeration(tuple(found), truncated=True)
        found.append(region)
        model = add_blocking(model, region, problem.k)


def verify_region(spec: Specification, region: Region) -> RegionCheck:
    """Re-check a region directly from the definitions, independent of the ILP."""
    places = set(spec.all_places())
    unknown = set(region.marking) - places
    if unknown:
        raise ValueError(f"region marks unknown places: {sorted(unknown)}")
    for p in region.marking:
        if region.marking[p] > region.k:
            return RegionCheck(False, "bound", p)

    rise_of_label: dict[str, tuple[str, int]] = {}
    for ln in spec.nets:
        for e in ln.net.transitions:
            terms = _rise_terms(ln, e)
            value = sum(c * region.marking[p] for p, c in terms.items())
            label = ln.labels[e]
            if label not in rise_of_label:
                rise_of_label[label] = (e, value)
            else:
                first, expected = rise_of_label[label]
                if value != expected:
                    return RegionCheck(False, "rise", f"{first}/{e}")

    sums = [sum(n * region.marking[p] for p, n in ln.initial.items()) for ln in spec.nets]
    for idx, s in enumerate(sums[1:], start=2):
        if s != sums[0]:
            return RegionCheck(False, "initial-sum", f"net 1 vs net {idx}")
    return RegionCheck(True)
