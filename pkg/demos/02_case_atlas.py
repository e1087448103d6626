#!/usr/bin/env python3
"""Tour of the case regions and their prescribed adversarial seedings.

For one configuration per region we print the label, the seeding plan, and
the partition each candidate actually converges to; none may be the pairing
partition (all-must-fail), or at least one must avoid it (any-must-fail).
"""

from kmeans_richness import (
    DistanceConfig,
    adversarial_plan,
    classify,
    embed,
    run,
    target_partition,
)

ATLAS = [
    ("ascending left end", DistanceConfig((1, 3, 3, 1), (2, 2, 2))),
    ("descending left end", DistanceConfig((3, 1, 1, 1), (2, 2, 2))),
    ("pit left end, below threshold", DistanceConfig((5, 8, 8, 5), (4, 9, 4))),
    ("pit left end, above threshold", DistanceConfig((3, 4, 1, 1), (1, 9, 9))),
    ("ascending right end (mirrored)", DistanceConfig((1, 2, 5, 1), (4, 9, 3))),
    ("ascending middle", DistanceConfig((1, 2, 5, 1), (4, 3, 9))),
    ("descending middle", DistanceConfig((1, 5, 2, 1), (9, 3, 4))),
    ("pit middle, above threshold", DistanceConfig((1, 5, 4, 1), (9, 2, 9))),
    ("pit middle, below threshold", DistanceConfig((1, 6, 9, 2), (8, 5, 12))),
    ("all peaks", DistanceConfig((1, 1, 1, 1), (3, 3, 3))),
    ("five pairs, all pits", DistanceConfig((5, 4, 4, 4, 4), (1, 1, 1, 1))),
    ("five pairs, all peaks", DistanceConfig((1, 1, 1, 1, 1), (3, 3, 3, 3))),
]

for description, cfg in ATLAS:
    label = classify(cfg)
    plan = adversarial_plan(cfg)
    points = embed(cfg)
    target = target_partition(cfg.k)
    print(f"{description}: a={tuple(map(str, cfg.a))} p={tuple(map(str, cfg.p))}")
    print(f"  label {label}, plan {plan.semantics.value}")
    for name, seeding in zip(plan.names, plan.candidates):
        trace = run(points, seeding)
        final = trace.final_partition
        tag = f"{name}=" if name else ""
        if final is None:
            state = f"aborts on a distance tie ({trace.outcome.kind})"
        elif final == target:
            state = "reaches pairing"
        else:
            state = f"settles at {final.blocks()}"
        print(f"    {tag}{seeding}: {state}")
    print()
