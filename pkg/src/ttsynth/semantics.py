"""Validity checks for token trails, compact token flows, and state graphs.

These are the oracles the synthesis pipeline is tested against: a marking of
a labelled net is a token trail for a place when every transition receives
enough tokens, passes on exactly the surplus the place dictates for its
label, and the initially marked places carry the place's initial tokens.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Optional, Sequence, Tuple

from . import ilp
from .core import (
    LabelledNet,
    MarkedPetriNet,
    Marking,
    Multiset,
    StateGraph,
    fire,
    preset,
    postset,
    state_graph_reachable,
)

__all__ = [
    "PlaceBehavior",
    "TokenTrail",
    "Run",
    "CompactTokenFlow",
    "StateGraph",
    "ConditionCheck",
    "Enabledness",
    "StateGraphCheck",
    "SOURCE",
    "SINK",
    "inflow",
    "outflow",
    "rise",
    "is_valid_token_trail",
    "default_trail_bound",
    "find_token_trail",
    "is_enabled",
    "flow_domain",
    "event_inflow",
    "event_outflow",
    "is_valid_compact_token_flow",
    "check_state_graph_enabled",
]

#: A token trail is just a marking of the labelled net under scrutiny.
TokenTrail = Multiset

#: Start and end slots of a run; flows may place tokens on them.
SOURCE = "▶"
SINK = "■"

#: A compact token flow maps run slots (SOURCE, v) / (v, v') / (v, SINK) to counts.
CompactTokenFlow = Mapping[Tuple[str, str], int]


@dataclass(frozen=True)
class PlaceBehavior:
    """How one place interacts with each label: consumed and produced arc
    weights per label plus its initial token count. Absent labels mean 0."""

    consume: Mapping[str, int]
    produce: Mapping[str, int]
    initial: int

    def __post_init__(self):
        object.__setattr__(self, "consume", {k: v for k, v in dict(self.consume).items() if v})
        object.__setattr__(self, "produce", {k: v for k, v in dict(self.produce).items() if v})
        for name, mapping in (("consume", self.consume), ("produce", self.produce)):
            for label, value in mapping.items():
                if not isinstance(value, int) or value < 0:
                    raise ValueError(f"{name}[{label!r}] must be a non-negative integer")
        if not isinstance(self.initial, int) or self.initial < 0:
            raise ValueError("initial must be a non-negative integer")

    def rise(self, label: str) -> int:
        return self.produce.get(label, 0) - self.consume.get(label, 0)

    def labels(self) -> Tuple[str, ...]:
        seen = dict.fromkeys(self.consume)
        seen.update(dict.fromkeys(self.produce))
        return tuple(seen)


@dataclass(frozen=True)
class Run:
    """Events with a (not necessarily transitive) order relation and labels."""

    events: Tuple[str, ...]
    order: Tuple[Tuple[str, str], ...]
    labels: Mapping[str, str]

    def __post_init__(self):
        object.__setattr__(self, "events", tuple(self.events))
        object.__setattr__(self, "order", tuple(self.order))
        object.__setattr__(self, "labels", dict(self.labels))
        known = set(self.events)
        if len(known) != len(self.events):
            raise ValueError("duplicate event")
        if SOURCE in known or SINK in known:
            raise ValueError("events must not use the reserved source/sink symbols")
        if len(set(self.order)) != len(self.order):
            raise ValueError("duplicate order pair")
        for u, v in self.order:
            if u not in known or v not in known:
                raise ValueError("order pair over unknown events")
        missing = known - set(self.labels)
        if missing:
            raise ValueError(f"unlabelled events: {sorted(missing)}")


@dataclass(frozen=True)
class ConditionCheck:
    """Outcome of a validity check; on failure names the first violated
    condition (in checking order) and the smallest witness."""

    ok: bool
    condition: Optional[str] = None
    witness: Optional[str] = None

    def __bool__(self) -> bool:
        return self.ok


def _require_transition(net: LabelledNet, e: str) -> None:
    if e not in net.net.transitions:
        raise ValueError(f"unknown transition: {e!r}")


def _require_trail_support(net: LabelledNet, x: Multiset) -> None:
    unknown = set(x) - set(net.net.places)
    if unknown:
        raise ValueError(f"trail supports unknown places: {sorted(unknown)}")


def inflow(net: LabelledNet, x: TokenTrail, e: str) -> int:
    """Tokens flowing into e: incoming arc weights times the trail values."""
    _require_transition(net, e)
    return sum(w * x[p] for (p, t), w in net.net.arcs.items() if t == e and p in net.net.places)


def outflow(net: LabelledNet, x: TokenTrail, e: str) -> int:
    """Tokens flowing out of e: outgoing arc weights times the trail values."""
    _require_transition(net, e)
    return sum(w * x[p] for (t, p), w in net.net.arcs.items() if t == e and p in net.net.places)


def rise(net: LabelledNet, x: TokenTrail, e: str) -> int:
    """Outflow minus inflow; the net effect of e on the token distribution."""
    return outflow(net, x, e) - inflow(net, x, e)


def is_valid_token_trail(net: LabelledNet, x: TokenTrail, pb: PlaceBehavior) -> ConditionCheck:
    """Check the three trail conditions in fixed order.

    "inflow": every transition receives at least what its label consumes;
    "balance": outflow equals inflow plus the label's rise;
    "initial-sum": the initially marked places weight-sum to pb.initial.
    """
    _require_trail_support(net, x)
    for e in net.net.transitions:
        if inflow(net, x, e) < pb.consume.get(net.labels[e], 0):
            return ConditionCheck(False, "inflow", e)
    for e in net.net.transitions:
        if outflow(net, x, e) != inflow(net, x, e) + pb.rise(net.labels[e]):
            return ConditionCheck(False, "balance", e)
    if sum(n * x[p] for p, n in net.initial.items()) != pb.initial:
        return ConditionCheck(False, "initial-sum", None)
    return ConditionCheck(True)


def default_trail_bound(net: LabelledNet, pb: PlaceBehavior) -> int:
    """Bound covering every trail whose tokens originate from the initial sum
    or from transition productions without recirculation."""
    produced = sum(pb.produce.values())
    max_consume = max(pb.consume.values(), default=0)
    return pb.initial + produced * len(net.net.transitions) + max_consume


def find_token_trail(net: LabelledNet, pb: PlaceBehavior, bound: Optional[int] = None) -> Optional[TokenTrail]:
    """Search for a valid token trail with all components <= bound.

    Returns the trail or None. None only means no trail exists within the
    bound; it is not a proof that no trail exists at all.
    """
    if bound is None:
        bound = default_trail_bound(net, pb)
    if bound < 0:
        raise ValueError("bound must be >= 0")
    places = net.net.places
    variables = [ilp.Variable(p, 0, bound) for p in places]
    constraints = []
    for e in net.net.transitions:
        inc = {p: net.net.arcs[(p, e)] for p in places if net.net.arcs[(p, e)]}
        out = {p: net.net.arcs[(e, p)] for p in places if net.net.arcs[(e, p)]}
        label = net.labels[e]
        constraints.append(ilp.LinearConstraint(inc, ilp.GE, pb.consume.get(label, 0)))
        balance = dict(out)
        for p, w in inc.items():
            balance[p] = balance.get(p, 0) - w
        constraints.append(ilp.LinearConstraint(balance, ilp.EQ, pb.rise(label)))
    constraints.append(
        ilp.LinearConstraint({p: n for p, n in net.initial.items()}, ilp.EQ, pb.initial)
    )
    solution = ilp.solve(ilp.IlpModel(tuple(variables), tuple(constraints)))
    if solution is None:
        return None
    return Multiset({p: v for p, v in solution.assignment.items() if v})


@dataclass(frozen=True)
class Enabledness:
    """Per-place witness trails; blocked_place is the first place for which
    no trail was found within the bound (None when fully enabled)."""

    enabled: bool
    witnesses: Mapping[str, TokenTrail]
    blocked_place: Optional[str] = None
    not_shown: Tuple[str, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "witnesses", dict(self.witnesses))
        object.__setattr__(self, "not_shown", tuple(self.not_shown))

    def __bool__(self) -> bool:
        return self.enabled


def place_behavior_of(model: MarkedPetriNet, place: str) -> PlaceBehavior:
    """Read one model place as consume/produce per transition plus tokens."""
    if place not in model.net.places:
        raise ValueError(f"unknown place: {place!r}")
    consume = {t: model.net.arcs[(place, t)] for t in model.net.transitions if model.net.arcs[(place, t)]}
    produce = {t: model.net.arcs[(t, place)] for t in model.net.transitions if model.net.arcs[(t, place)]}
    return PlaceBehavior(consume, produce, model.initial[place])


def is_enabled(model: MarkedPetriNet, spec_net: LabelledNet, bound: Optional[int] = None) -> Enabledness:
    """Search a witness trail in spec_net for every place of the model.

    The model's transitions act as the label universe; a spec label missing
    from the model is an error.
    """
    labels = set(spec_net.labels.values())
    missing = labels - set(model.net.transitions)
    if missing:
        raise ValueError(f"unknown label: {sorted(missing)[0]!r}")
    witnesses: dict[str, TokenTrail] = {}
    not_shown: list[str] = []
    for place in model.net.places:
        pb = place_behavior_of(model, place)
        trail = find_token_trail(spec_net, pb, bound)
        if trail is None:
            not_shown.append(place)
        else:
            witnesses[place] = trail
    return Enabledness(
        enabled=not not_shown,
        witnesses=witnesses,
        blocked_place=not_shown[0] if not_shown else None,
        not_shown=tuple(not_shown),
    )


def flow_domain(run: Run) -> Tuple[Tuple[str, str], ...]:
    """All slots a compact token flow assigns values to, in canonical order."""
    return (
        tuple((SOURCE, v) for v in run.events)
        + tuple(run.order)
        + tuple((v, SINK) for v in run.events)
    )


def event_inflow(run: Run, x: CompactTokenFlow, v: str) -> int:
    return x.get((SOURCE, v), 0) + sum(x.get((u, w), 0) for u, w in run.order if w == v)


def event_outflow(run: Run, x: CompactTokenFlow, v: str) -> int:
    return x.get((v, SINK), 0) + sum(x.get((u, w), 0) for u, w in run.order if u == v)


def is_valid_compact_token_flow(run: Run, x: CompactTokenFlow, pb: PlaceBehavior) -> ConditionCheck:
    """Check the three flow conditions ("inflow", "balance", "initial-sum")."""
    domain = set(flow_domain(run))
    stray = set(x) - domain
    if stray:
        raise ValueError(f"flow assigns values outside the run: {sorted(stray)}")
    for slot, value in x.items():
        if not isinstance(value, int) or value < 0:
            raise ValueError(f"flow value at {slot!r} must be a non-negative integer")
    for v in run.events:
        if event_inflow(run, x, v) < pb.consume.get(run.labels[v], 0):
            return ConditionCheck(False, "inflow", v)
    for v in run.events:
        if event_outflow(run, x, v) != event_inflow(run, x, v) + pb.rise(run.labels[v]):
            return ConditionCheck(False, "balance", v)
    if sum(x.get((SOURCE, v), 0) for v in run.events) != pb.initial:
        return ConditionCheck(False, "initial-sum", None)
    return ConditionCheck(True)


@dataclass(frozen=True)
class StateGraphCheck:
    ok: bool
    mapping: Optional[Mapping] = None
    reason: Optional[str] = None

    def __post_init__(self):
        if self.mapping is not None:
            object.__setattr__(self, "mapping", dict(self.mapping))

    def __bool__(self) -> bool:
        return self.ok


def check_state_graph_enabled(model: MarkedPetriNet, sg: StateGraph) -> StateGraphCheck:
    """Map the state graph into the model's reachability graph.

    The initial state maps to the initial marking; arcs must fire, all paths
    to a state must agree on its marking, the mapping must be injective, and
    every state must be reachable from the initial one.
    """
    reachable = state_graph_reachable(sg)
    for s in sg.states:
        if s not in reachable:
            return StateGraphCheck(False, None, f"unreachable state: {s!r}")
    mapping = {sg.initial: model.initial}
    # Arc-driven propagation; sg arcs are finitely many, so iterate to fixpoint.
    pending = list(sg.arcs)
    while pending:
        progressed = False
        remaining = []
        for src, t, tgt in pending:
            if src not in mapping:
                remaining.append((src, t, tgt))
                continue
            if t not in model.net.transitions:
                return StateGraphCheck(False, None, f"unknown transition: {t!r}")
            m = mapping[src]
            if not preset(model.net, t) <= m:
                return StateGraphCheck(False, None, f"not enabled: {t!r} at state {src!r}")
            nxt = fire(model, m, t)
            if tgt in mapping:
                if mapping[tgt] != nxt:
                    return StateGraphCheck(False, None, f"inconsistent marking for state {tgt!r}")
            else:
                mapping[tgt] = nxt
            progressed = True
        if not progressed:
            break
        pending = remaining
    seen: dict[Marking, object] = {}
    for s in sg.states:
        m = mapping[s]
        if m in seen:
            return StateGraphCheck(False, None, f"not injective: states {seen[m]!r} and {s!r} share a marking")
        seen[m] = s
    return StateGraphCheck(True, mapping)
