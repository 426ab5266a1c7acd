"""Petri net data model: multisets, nets, markings, firing, bounded reachability.

All values are immutable after construction; every operation is a pure
function, so values can be shared freely between threads.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Hashable, Iterable, Iterator, Mapping, Sequence, Tuple


class Multiset:
    """Immutable multiset with non-negative integer counts.

    Zero-count entries are never stored, so two multisets are equal exactly
    when they have the same support with the same counts. Keys may be any
    hashable value (identifiers, pairs, whole markings).
    """

    __slots__ = ("_items", "_hash")

    def __init__(self, items: Mapping | Iterable[tuple] = ()):
        pairs = items.items() if isinstance(items, Mapping) else items
        data: dict = {}
        for key, count in pairs:
            if not isinstance(count, int) or isinstance(count, bool):
                raise TypeError(f"count for {key!r} must be an integer")
            if count < 0:
                raise ValueError(f"negative count for {key!r}")
            if count:
                data[key] = data.get(key, 0) + count
        self._items = data
        self._hash = None

    def __getitem__(self, key) -> int:
        return self._items.get(key, 0)

    def __contains__(self, key) -> bool:
        return key in self._items

    def __iter__(self) -> Iterator:
        return iter(self._items)

    def __len__(self) -> int:
        return len(self._items)

    def __bool__(self) -> bool:
        return bool(self._items)

    def items(self):
        return self._items.items()

    def keys(self):
        return self._items.keys()

    def total(self) -> int:
        """Sum of all counts."""
        return sum(self._items.values())

    def restrict(self, keys: Iterable) -> "Multiset":
        """Entries whose key is in `keys`."""
        allowed = set(keys)
        return Multiset({k: v for k, v in self._items.items() if k in allowed})

    def __add__(self, other: "Multiset") -> "Multiset":
        if not isinstance(other, Multiset):
            return NotImplemented
        data = dict(self._items)
        for k, v in other.items():
            data[k] = data.get(k, 0) + v
        return Multiset(data)

    def __sub__(self, other: "Multiset") -> "Multiset":
        if not isinstance(other, Multiset):
            return NotImplemented
        data = dict(self._items)
        for k, v in other.items():
            left = data.get(k, 0) - v
            if left < 0:
                raise ValueError(f"subtraction below zero at {k!r}")
            if left:
                data[k] = left
            else:
                data.pop(k, None)
        return Multiset(data)

    def __le__(self, other: "Multiset") -> bool:
        if not isinstance(other, Multiset):
            return NotImplemented
        return all(v <= other[k] for k, v in self._items.items())

    def __ge__(self, other: "Multiset") -> bool:
        if not isinstance(other, Multiset):
            return NotImplemented
        return other.__le__(self)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Multiset):
            return NotImplemented
        return self._items == other._items

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self._items.items()))
        return self._hash

    def __repr__(self) -> str:
        inner = ", ".join(f"{k!r}: {v}" for k, v in self._items.items())
        return f"Multiset({{{inner}}})"


#: A marking assigns tokens to places; token trails are markings as well.
Marking = Multiset

EMPTY = Multiset()


@dataclass(frozen=True)
class PetriNet:
    """Unmarked net: places, transitions, and a multiset of weighted arcs.

    Arc keys are (source, target) pairs; every arc must connect a place with
    a transition (in either direction) and carries weight >= 1.
    """

    places: Tuple[str, ...]
    transitions: Tuple[str, ...]
    arcs: Multiset

    def __post_init__(self):
        object.__setattr__(self, "places", tuple(self.places))
        object.__setattr__(self, "transitions", tuple(self.transitions))
        pset, tset = set(self.places), set(self.transitions)
        if len(pset) != len(self.places) or len(tset) != len(self.transitions):
            raise ValueError("duplicate identifier")
        if pset & tset:
            raise ValueError(f"places and transitions overlap: {sorted(pset & tset)}")
        for src, tgt in self.arcs:
            ok = (src in pset and tgt in tset) or (src in tset and tgt in pset)
            if not ok:
                raise ValueError(f"arc ({src!r}, {tgt!r}) does not connect a place and a transition")

    def weight(self, src: str, tgt: str) -> int:
        return self.arcs[(src, tgt)]


@dataclass(frozen=True)
class MarkedPetriNet:
    """A net together with its initial marking."""

    net: PetriNet
    initial: Marking

    def __post_init__(self):
        unknown = set(self.initial) - set(self.net.places)
        if unknown:
            raise ValueError(f"initial marking uses unknown places: {sorted(unknown)}")


@dataclass(frozen=True)
class LabelledNet:
    """A marked net whose transitions all carry a label.

    Several transitions may share a label (label splitting); the labelling
    must be total.
    """

    net: PetriNet
    initial: Marking
    labels: Mapping[str, str]

    def __post_init__(self):
        object.__setattr__(self, "labels", dict(self.labels))
        MarkedPetriNet(self.net, self.initial)  # reuse marking validation
        missing = set(self.net.transitions) - set(self.labels)
        if missing:
            raise ValueError(f"unlabelled transitions: {sorted(missing)}")
        extra = set(self.labels) - set(self.net.transitions)
        if extra:
            raise ValueError(f"labels for unknown transitions: {sorted(extra)}")

    def marked(self) -> MarkedPetriNet:
        return MarkedPetriNet(self.net, self.initial)

    def alphabet(self) -> Tuple[str, ...]:
        """Labels in order of first occurrence."""
        seen: dict[str, None] = {}
        for t in self.net.transitions:
            seen.setdefault(self.labels[t], None)
        return tuple(seen)

    def transitions_with_label(self, label: str) -> Tuple[str, ...]:
        return tuple(t for t in self.net.transitions if self.labels[t] == label)


@dataclass(frozen=True)
class Specification:
    """An ordered set of labelled nets with globally unique identifiers.

    Use build_specification to assemble one from nets whose identifiers may
    clash; the constructor only validates.
    """

    nets: Tuple[LabelledNet, ...]

    def __post_init__(self):
        object.__setattr__(self, "nets", tuple(self.nets))
        if not self.nets:
            raise ValueError("specification needs at least one net")
        seen: set[str] = set()
        for ln in self.nets:
            for ident in ln.net.places + ln.net.transitions:
                if ident in seen:
                    raise ValueError(f"identifier clash across nets: {ident!r}")
                seen.add(ident)

    def all_places(self) -> Tuple[str, ...]:
        return tuple(p for ln in self.nets for p in ln.net.places)

    def alphabet(self) -> Tuple[str, ...]:
        seen: dict[str, None] = {}
        for ln in self.nets:
            for t in ln.net.transitions:
                seen.setdefault(ln.labels[t], None)
        return tuple(seen)


def _rename_net(ln: LabelledNet, mapping: Mapping[str, str]) -> LabelledNet:
    ren = lambda x: mapping.get(x, x)
    net = PetriNet(
        places=tuple(ren(p) for p in ln.net.places),
        transitions=tuple(ren(t) for t in ln.net.transitions),
        arcs=Multiset({(ren(s), ren(t)): w for (s, t), w in ln.net.arcs.items()}),
    )
    initial = Multiset({ren(p): n for p, n in ln.initial.items()})
    labels = {ren(t): lab for t, lab in ln.labels.items()}
    return LabelledNet(net, initial, labels)


def build_specification(nets: Sequence[LabelledNet]) -> Specification:
    """Assemble a specification, renaming identifiers that clash across nets.

    Every occurrence of a clashing identifier gets a net-index prefix
    ("n3.p0" for the third net); labels are never renamed.
    """
    if not nets:
        raise ValueError("specification needs at least one net")
    counts: dict[str, int] = {}
    for ln in nets:
        for ident in ln.net.places + ln.net.transitions:
            counts[ident] = counts.get(ident, 0) + 1
    clashing = {ident for ident, n in counts.items() if n > 1}
    renamed = []
    for i, ln in enumerate(nets, start=1):
        mapping = {x: f"n{i}.{x}" for x in (ln.net.places + ln.net.transitions) if x in clashing}
        renamed.append(_rename_net(ln, mapping) if mapping else ln)
    return Specification(tuple(renamed))


@dataclass(frozen=True)
class StateGraph:
    """Rooted graph of states with labelled arcs.

    States may be identifiers or whole markings. Full reachability from the
    initial state is an expected property of well-formed graphs; it is
    enforced by the parsers and re-checked by the enabledness checker, not
    by this constructor.
    """

    states: Tuple[Hashable, ...]
    initial: Hashable
    arcs: Tuple[Tuple[Hashable, str, Hashable], ...]

    def __post_init__(self):
        object.__setattr__(self, "states", tuple(self.states))
        object.__setattr__(self, "arcs", tuple(self.arcs))
        known = set(self.states)
        if len(known) != len(self.states):
            raise ValueError("duplicate state")
        if self.initial not in known:
            raise ValueError("initial state not among states")
        if len(set(self.arcs)) != len(self.arcs):
            raise ValueError("duplicate arc")
        for src, _label, tgt in self.arcs:
            if src not in known or tgt not in known:
                raise ValueError("arc endpoint is not a state")


def state_graph_reachable(sg: StateGraph) -> frozenset:
    """States reachable from the initial state along arcs."""
    succ: dict = {}
    for src, _label, tgt in sg.arcs:
        succ.setdefault(src, []).append(tgt)
    seen = {sg.initial}
    todo = deque([sg.initial])
    while todo:
        s = todo.popleft()
        for nxt in succ.get(s, ()):
            if nxt not in seen:
                seen.add(nxt)
                todo.append(nxt)
    return frozenset(seen)


def preset(net: PetriNet, t: str) -> Multiset:
    """Weighted preset of a transition: place -> arc weight into t."""
    if t not in net.transitions:
        raise ValueError(f"unknown transition: {t!r}")
    return Multiset({p: net.arcs[(p, t)] for p in net.places if net.arcs[(p, t)]})


def postset(net: PetriNet, t: str) -> Multiset:
    """Weighted postset of a transition: place -> arc weight out of t."""
    if t not in net.transitions:
        raise ValueError(f"unknown transition: {t!r}")
    return Multiset({p: net.arcs[(t, p)] for p in net.places if net.arcs[(t, p)]})


def enabled_transitions(n: MarkedPetriNet, m: Marking) -> set[str]:
    """Transitions whose preset is covered by the marking m."""
    return {t for t in n.net.transitions if preset(n.net, t) <= m}


def fire(n: MarkedPetriNet, m: Marking, t: str) -> Marking:
    """Fire t in m, returning the follow-up marking; m itself is unchanged."""
    pre = preset(n.net, t)
    if not pre <= m:
        raise ValueError(f"not enabled: {t!r}")
    return m - pre + postset(n.net, t)


def reachability_graph(n: MarkedPetriNet, state_cap: int) -> StateGraph:
    """Breadth-first reachability graph, aborting once state_cap is exceeded.

    Arc labels are transition identifiers. The cap turns a potentially
    unbounded exploration into an error instead of a hang.
    """
    if state_cap < 1:
        raise ValueError("state_cap must be >= 1")
    presets = {t: preset(n.net, t) for t in n.net.transitions}
    postsets = {t: postset(n.net, t) for t in n.net.transitions}
    states: list[Marking] = [n.initial]
    seen = {n.initial}
    arcs: list[tuple[Marking, str, Marking]] = []
    todo = deque([n.initial])
    while todo:
        m = todo.popleft()
        for t in n.net.transitions:
            if not presets[t] <= m:
                continue
            nxt = m - presets[t] + postsets[t]
            arcs.append((m, t, nxt))
            if nxt not in seen:
                if len(seen) >= state_cap:
                    raise ValueError("state cap exceeded")
                seen.add(nxt)
                states.append(nxt)
                todo.append(nxt)
    return StateGraph(tuple(states), n.initial, tuple(arcs))
