#!/usr/bin/env python3
"""Cross-check region enumeration against exhaustive search on random specs.

Generates seeded random specifications, enumerates minimal regions through
the ILP path, recomputes the set by sweeping every marking up to k, and
reports any mismatch. Useful as a quick confidence run after solver changes.

    python3 scripts/random_region_sweep.py --specs 200 --seed 7
"""

import argparse
import itertools
import random
import time

from ttsynth.core import LabelledNet, Multiset, PetriNet, build_specification
from ttsynth.regions import RegionProblem, enumerate_minimal_regions, verify_region, Region


def random_net(rng: random.Random, prefix: str, n_places: int, n_transitions: int, labels: str) -> LabelledNet:
    places = tuple(f"{prefix}p{i}" for i in range(n_places))
    transitions = tuple(f"{prefix}t{i}" for i in range(n_transitions))
    arcs = {}
    for t in transitions:
        for p in places:
            if rng.random() < 0.35:
                arcs[(p, t)] = rng.randint(1, 2)
            if rng.random() < 0.35:
                arcs[(t, p)] = rng.randint(1, 2)
    initial = {p: rng.randint(1, 2) for p in places if rng.random() < 0.4}
    labelling = {t: rng.choice(labels) for t in transitions}
    return LabelledNet(PetriNet(places, transitions, Multiset(arcs)), Multiset(initial), labelling)


def sweep_minimal(spec, k):
    places = spec.all_places()
    feasible = []
    for point in itertools.product(range(k + 1), repeat=len(places)):
        if not any(point):
            continue
        marking = Multiset({p: v for p, v in zip(places, point) if v})
        if verify_region(spec, Region(marking, k)):
            feasible.append(marking)
    return {m for m in feasible if not any(o != m and o <= m for o in feasible)}


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--specs", type=int, default=100)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--max-places", type=int, default=6)
    parser.add_argument("--max-k", type=int, default=2)
    args = parser.parse_args()

    rng = random.Random(args.seed)
    mismatches = 0
    regions_total = 0
    started = time.perf_counter()
    for trial in range(args.specs):
        n_nets = rng.randint(1, 3)
        labels = "abc"[: rng.randint(1, 3)]
        nets = []
        places_left = rng.randint(n_nets, args.max_places)
        for i in range(n_nets):
            remaining = n_nets - i - 1
            n_p = places_left - remaining if remaining == 0 else rng.randint(1, places_left - remaining)
            nets.append(random_net(rng, f"n{i}", n_p, rng.randint(0, 3), labels))
            places_left -= n_p
        spec = build_specification(nets)
        k = rng.randint(1, args.max_k)
        got = {r.marking for r in enumerate_minimal_regions(RegionProblem(spec, k)).regions}
        want = sweep_minimal(spec, k)
        regions_total += len(got)
        if got != want:
            mismatches += 1
            print(f"MISMATCH at trial {trial}: ilp={sorted(map(repr, got))} sweep={sorted(map(repr, want))}")
    elapsed = time.perf_counter() - started
    print(f"{args.specs} specs, {regions_total} regions, {mismatches} mismatches, {elapsed:.2f}s")
    raise SystemExit(1 if mismatches else 0)


if __name__ == "__main__":
    main()
