"""Turn regions into places and union the one-place nets into the result.

Each region induces one place: per label, the consumed weight is the minimal
inflow over all transitions carrying the label, the produced weight follows
from the label's rise, and the initial tokens are the region's initial sum.
The union of these one-place nets over all minimal regions is the
synthesized net; every input net stays simulatable by construction.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Optional, Sequence, Tuple

from .core import MarkedPetriNet, Multiset, PetriNet, Specification
from .regions import Region, RegionProblem, enumerate_minimal_regions, verify_region
from .semantics import PlaceBehavior, inflow, rise


@dataclass(frozen=True)
class PlaceDefinition:
    """Arc weights per label plus initial tokens for one synthesized place.

    Labels absent from both mappings are unconnected to the place.
    """

    consume: Mapping[str, int]
    produce: Mapping[str, int]
    initial: int
    source_region: Optional[Region] = None

    def __post_init__(self):
        object.__setattr__(self, "consume", {k: v for k, v in dict(self.consume).items() if v})
        object.__setattr__(self, "produce", {k: v for k, v in dict(self.produce).items() if v})

    def key(self) -> tuple:
        return (
            tuple(sorted(self.consume.items())),
            tuple(sorted(self.produce.items())),
            self.initial,
        )

    def is_connected(self, label: str) -> bool:
        return label in self.consume or label in self.produce

    def is_zero(self) -> bool:
        return not self.consume and not self.produce and self.initial == 0

    def behavior(self) -> PlaceBehavior:
        return PlaceBehavior(self.consume, self.produce, self.initial)


@dataclass(frozen=True)
class SynthesisResult:
    net: MarkedPetriNet
    places: Tuple[PlaceDefinition, ...]
    label_alphabet: Tuple[str, ...]
    regions: Tuple[Region, ...] = ()
    truncated: bool = False

    def place_ids(self) -> Tuple[str, ...]:
        return self.net.net.places


def place_from_region(spec: Specification, region: Region) -> PlaceDefinition:
    """Build the most restrictive place the region can witness."""
    check = verify_region(spec, region)
    if not check:
        raise ValueError(f"invalid region: condition {check.condition} at {check.witness}")

    inflows: dict[str, list[int]] = {}
    rises: dict[str, int] = {}
    for ln in spec.nets:
        trail = region.marking.restrict(ln.net.places)
        for e in ln.net.transitions:
            label = ln.labels[e]
            inflows.setdefault(label, []).append(inflow(ln, trail, e))
            rises[label] = rise(ln, trail, e)  # equal for every carrier of the label

    consume = {label: min(values) for label, values in inflows.items()}
    produce = {label: consume[label] + rises[label] for label in consume}

    sums = [
        sum(n * region.marking[p] for p, n in ln.initial.items()) for ln in spec.nets
    ]
    assert all(s == sums[0] for s in sums), "initial sums diverge across nets"
    return PlaceDefinition(consume, produce, sums[0], region)


def dedupe_places(places: Sequence[PlaceDefinition]) -> list[PlaceDefinition]:
    """Keep the first occurrence of each (consume, produce, initial) triple."""
    seen: set[tuple] = set()
    kept = []
    for place in places:
        key = place.key()
        if key not in seen:
            seen.add(key)
            kept.append(place)
    return kept


def assemble_net(alphabet: Sequence[str], places: Sequence[PlaceDefinition]) -> MarkedPetriNet:
    """One transition per label, one place per definition, ids p1, p2, ..."""
    place_ids = [f"p{i}" for i in range(1, len(places) + 1)]
    arcs: dict[tuple[str, str], int] = {}
    marking: dict[str, int] = {}
    for pid, place in zip(place_ids, places):
        for label, w in place.consume.items():
            arcs[(pid, label)] = w
        for label, w in place.produce.items():
            arcs[(label, pid)] = w
        if place.initial:
            marking[pid] = place.initial
    net = PetriNet(tuple(place_ids), tuple(alphabet), Multiset(arcs))
    return MarkedPetriNet(net, Multiset(marking))


def synthesize(problem: RegionProblem) -> SynthesisResult:
    """Enumerate minimal regions and union their places into one net.

    Duplicate places (identical consume/produce/initial) and all-zero places
    are dropped; every kept place keeps a reference to its source region.
    """
    enumeration = enumerate_minimal_regions(problem)
    alphabet = problem.spec.alphabet()
    candidates = [place_from_region(problem.spec, r) for r in enumeration.regions]
    kept = [p for p in dedupe_places(candidates) if not p.is_zero()]
    return SynthesisResult(
        net=assemble_net(alphabet, kept),
        places=tuple(kept),
        label_alphabet=alphabet,
        regions=enumeration.regions,
        truncated=enumeration.truncated,
    )
