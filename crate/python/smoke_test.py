#!/usr/bin/env python3
"""Smoke test for the pygitstab extension module.

Expects pygitstab.so next to this file (cp target/release/libpygitstab.so
python/pygitstab.so). Exercises the main entry points and checks a few
known values.
"""

import json
import os
import sys

sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))

import pygitstab


def check(cond, what):
    if not cond:
        raise SystemExit(f"FAIL: {what}")
    print(f"ok: {what}")


def main():
    # b1 (x) b1 in rank 2: unstable with lambda* = (-1, 1), q = -2
    w = pygitstab.Tensor(2, [(2, 1, 0)], [(0, 0, [1, 1], "1")])
    check(w.r == 2, "tensor rank")
    check(w.states() == [[2, 0]], "state set")
    check(w.mu([-1, 1]) == -2, "pairing value")

    res = w.torus_instability()
    check(res.verdict == "unstable", "verdict")
    check(res.lambda_star == [-1, 1], "optimal direction")
    check(res.q == -2 and res.m0_sq == "2", "instability measure")
    check(res.flag_dims == [1] and res.flag_alphas == ["1"], "weighted flag")

    full = w.kempf_search(restarts=2, seed=7)
    check(full.verdict == "unstable" and full.q == -2, "search result")

    brute = w.brute_force(4)
    check(brute is not None and brute[0] == [-1, 1], "box search agrees")

    # hyperbolic form on a 2-dimensional space: semistable, even polystable
    h = pygitstab.orthogonal_example(2, "hyperbolic")
    check(h.torus_instability().verdict == "torus-semistable", "form semistable")
    check(h.torus_polystable(), "form polystable")
    check(h.mu_filtration([1], ["1"]) == "0", "filtration value")

    # the homogenized value has the sign of the plain filtration value
    check(w.mu_filtration([1], ["1"]) == "-2", "destabilizing filtration")
    check(w.nu([1], ["1"]) == "-1", "homogenized value")
    check(w.nu([1], ["1"], 2) == "-1", "homogenized value is scale invariant")

    adj = pygitstab.adjoint_example()
    check(adj.kempf_search(restarts=4, seed=11).verdict == "torus-semistable",
          "bracket semistable")

    dims, alphas, _ = pygitstab.weighted_flag([-1, -1, 2])
    check(dims == [2] and alphas == ["1"], "flag of a direction")
    check(pygitstab.instability_character([-2, 1, 1]) == [(1, -2), (2, 1)],
          "character blocks")

    # JSON passthrough: run the bundled examples through the dispatcher
    docs = dict(pygitstab.example_documents())
    check("so2_hyperbolic" in docs and len(docs) == 5, "bundled examples")
    out = json.loads(pygitstab.run("kempf", docs["so2_standard"]))
    check(out["result"]["verdict"] == "torus-semistable", "dispatcher kempf")
    out = json.loads(pygitstab.run("check:chain", docs["so2_hyperbolic"]))
    report = out["report"]
    check(report["semistable"] and report["slope_semistable"], "dispatcher chain")
    check(all(c["ok"] for c in report["coefficient_identity"]),
          "coefficient identity")
    out = json.loads(pygitstab.run("homogenize", docs["quadric"]))
    check(out["flags"][0]["agree"] is True, "dispatcher homogenize")

    try:
        pygitstab.Tensor(2, [(2, 1, 0)], [])
        raise SystemExit("FAIL: empty tensor accepted")
    except ValueError:
        print("ok: input errors map to ValueError")

    print("smoke test passed")


if __name__ == "__main__":
    main()
