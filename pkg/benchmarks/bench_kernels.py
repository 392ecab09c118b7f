"""Time the compiled kernels against the pure-numpy fallback.

Each backend runs in its own interpreter, because the backend is fixed at
import time by ``GROUPOID_LOGIC_DISABLE_NUMBA``.  Usage::

    python3 benchmarks/bench_kernels.py [--repeat 5]
"""

import argparse
import json
import os
import subprocess
import sys

WORKER = r"""
import json, sys, time
import numpy as np
import groupoid_logic as G
from groupoid_logic.io import parse_builtin
from groupoid_logic.lattice import distributive_audit

repeat = int(sys.argv[1])
rng = np.random.default_rng(0)

def best(fn):
    fn()  # warm-up, includes any compilation
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)

g_val = parse_builtin("pair:14")
g_conv = parse_builtin("pair:8+group:z:16")
mg_conv = G.normalized_haar(g_conv)
fs = [G.GroupoidFunction(g_conv, rng.normal(size=g_conv.n_morphisms) + 0j) for _ in range(50)]
g_sork = parse_builtin("pair:4+units:5")
mg_sork = G.normalized_haar(g_sork)
g_rel = parse_builtin("units:10")
L = G.powerset_lattice(5)
g_prod = parse_builtin("pair:10")
A = [G.MorphismSet(g_prod, rng.random(g_prod.n_morphisms) < 0.3) for _ in range(50)]

out = {
    "validate pair:14 (associativity scan)": best(lambda: G.validate(g_val)),
    "50 convolutions on pair:8+group:z:16": best(lambda: [G.convolve(mg_conv, f, f) for f in fs]),
    "2500 subset products on pair:10": best(lambda: [G.set_product(g_prod, a, b) for a in A for b in A]),
    "sorkin audit pair:4+units:5 (4^9 triples)": best(lambda: G.sorkin_audit(mg_sork)),
    "relation report units:10": best(lambda: G.relation_report(g_rel)),
    "distributive audit powerset:5": best(lambda: distributive_audit(L)),
}
print(json.dumps({"backend": G.backend(), "times": out}))
"""


def run(disable: bool, repeat: int) -> dict:
    env = dict(os.environ)
    if disable:
        env["GROUPOID_LOGIC_DISABLE_NUMBA"] = "1"
    else:
        env.pop("GROUPOID_LOGIC_DISABLE_NUMBA", None)
    res = subprocess.run(
        [sys.executable, "-c", WORKER, str(repeat)], env=env, capture_output=True, text=True, check=True
    )
    return json.loads(res.stdout)


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    fast = run(False, args.repeat)
    slow = run(True, args.repeat)
    width = max(len(k) for k in fast["times"])
    print(f"{'workload'.ljust(width)}  {fast['backend']:>10}  {slow['backend']:>10}  speedup")
    for key, t in fast["times"].items():
        s = slow["times"][key]
        print(f"{key.ljust(width)}  {t * 1e3:8.2f}ms  {s * 1e3:8.2f}ms  {s / t:6.1f}x")


if __name__ == "__main__":
    main()
