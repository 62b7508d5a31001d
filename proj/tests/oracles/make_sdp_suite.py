#!/usr/bin/env python3
# Copyright 2026 The qsdp Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
"""Writes the frozen end-to-end solver suite with reference optima.

Each instance is max Tr(CX) s.t. Tr(X) <= R, Tr(A_j X) <= b_j, X >= 0, with
real symmetric data (half of them diagonal). The reference optimum comes from
an interior-point solve of the primal; r is the smallest integer >= the l1
norm of the optimal dual. Instances with R * r > 4 are redrawn.

Usage: make_sdp_suite.py OUT.json [--count 50] [--seed 20261016]
"""

import argparse
import json

import cvxpy as cp
import numpy as np


def unit_norm(a):
    return a / np.linalg.norm(a, 2)


def random_symmetric(rng, n, diagonal):
    if diagonal:
        return np.diag(rng.uniform(-1.0, 1.0, n))
    g = rng.normal(size=(n, n))
    return (g + g.T) / 2.0


def solve(C, A, b):
    n = C.shape[0]
    X = cp.Variable((n, n), symmetric=True)
    cons = [X >> 0] + [cp.trace(a @ X) <= bj for a, bj in zip(A, b)]
    prob = cp.Problem(cp.Maximize(cp.trace(C @ X)), cons)
    prob.solve(solver=cp.CLARABEL, tol_gap_abs=1e-10, tol_gap_rel=1e-10, tol_feas=1e-10)
    if prob.status != cp.OPTIMAL:
        return None
    y = np.array([max(0.0, float(c.dual_value)) for c in cons[1:]])
    return float(prob.value), y


def make_instance(rng):
    while True:
        n = int(rng.integers(2, 7))
        m = int(rng.integers(2, 7))
        diagonal = bool(rng.integers(0, 2))
        R = float(rng.choice([1.0, 1.5, 2.0]))
        C = unit_norm(random_symmetric(rng, n, diagonal)) * rng.uniform(0.5, 1.0)
        A = [np.eye(n)] + [unit_norm(random_symmetric(rng, n, diagonal)) for _ in range(m - 1)]
        b = np.concatenate([[R], rng.uniform(0.5, 1.0, m - 1)])
        out = solve(C, A, b)
        if out is None:
            continue
        opt, y = out
        r = max(1.0, float(np.ceil(np.sum(y) + 1e-6)))
        if R * r > 4.0:
            continue
        s = max(int(np.max(np.count_nonzero(np.abs(a) > 0, axis=1))) for a in A)
        return {
            "n": n,
            "m": m,
            "s": s,
            "R": R,
            "r": r,
            "C": C.tolist(),
            "A": [a.tolist() for a in A],
            "b": b.tolist(),
            "opt": opt,
            "dual": y.tolist(),
            "diagonal": diagonal,
        }


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("out")
    ap.add_argument("--count", type=int, default=50)
    ap.add_argument("--seed", type=int, default=20261016)
    args = ap.parse_args()
    rng = np.random.default_rng(args.seed)
    suite = [make_instance(rng) for _ in range(args.count)]
    with open(args.out, "w") as f:
        json.dump({"generator": "make_sdp_suite.py", "seed": args.seed, "instances": suite}, f)


if __name__ == "__main__":
    main()
