#!/usr/bin/env python3
"""Deformation-side demo: Maurer-Cartan sampling, gauge flows, homotopy
witnesses, and the resulting invariance of cohomology jump ideals, on the
small solvable and affine-plane dgla fixtures over Q[e]/(e^3)."""

import random

from hse.deformation import (
    construct_gauge_witness,
    homotopy_witness_check,
    jump_ideal_pair,
    mc_check,
    sample_mc,
)
from hse.fixtures import adjoint_pair, affine_plane_dgla, solvable_dgla
from hse.io_json import dumps, witness_to_json
from hse.rings import parse_ring


def flow_demo(name, alg, lam):
    ring = parse_ring("Q[e]/(e^3)")
    rng = random.Random(17)
    omega = sample_mc(alg, ring, rng)
    if omega is None:
        print(f"{name}: no Maurer-Cartan element found")
        return
    print(f"== {name}")
    print("  omega:", {k: str(v) for k, v in sorted(omega.items())})
    ok, _ = mc_check(alg, ring, omega)
    print("  mc_check:", ok)
    witness, omega2 = construct_gauge_witness(alg, ring, omega, lam)
    good, why = homotopy_witness_check(alg, ring, witness, omega, omega2)
    print("  gauge endpoint:", {k: str(v) for k, v in sorted(omega2.items())},
          "| witness verified:", good)
    print("  witness t-degrees:",
          {lab: sorted(p.c) for lab, p in witness.t_part.items()})

    pair = adjoint_pair(alg)
    for i in sorted(set(pair.module.space.degrees())):
        for k in range(1, pair.module.space.dim(i) + 1):
            I1 = jump_ideal_pair(pair, ring, omega, i, k)
            I2 = jump_ideal_pair(pair, ring, omega2, i, k)
            same = I1.mutually_contains(I2)
            print(f"  J^{i}_{k}: {len(I1.generators)} gens ~ "
                  f"{len(I2.generators)} gens | equal as ideals: {same}")


def main() -> None:
    ring = parse_ring("Q[e]/(e^3)")
    e = ring.gen(0)
    flow_demo("solvable dgla", solvable_dgla(), {"e": e})
    flow_demo("affine-plane dgla", affine_plane_dgla(), {"e1": e, "e2": 2 * e})
    # a witness survives the wire format
    alg = solvable_dgla()
    omega = {"f": e}
    witness, omega2 = construct_gauge_witness(alg, ring, omega, {"e": e})
    from hse.io_json import witness_from_json
    import json

    _, back = witness_from_json(json.loads(dumps(witness_to_json(witness))))
    ok, why = homotopy_witness_check(alg, ring, back, omega, omega2)
    print("== witness JSON round-trip verifies:", ok)


if __name__ == "__main__":
    main()
