#!/usr/bin/env python3
"""Solve a sparse SDPA file with cvxpy (Clarabel) and write a CSDP-style solution.

Usage: sdpa_clarabel.py INPUT.sdpa OUTPUT.sol

Same output layout as sdpa_cvxopt.py: x on the first line, then
`matno blkno i j value` lines with matno 2 for the dual matrix Y.
Clarabel copes better than cvxopt with programs that have no strictly
feasible dual point (for example after a --delta restriction).
"""
import sys

import cvxpy as cp
import numpy as np

from sdpa_cvxopt import read_sdpa


def main():
    if len(sys.argv) != 3:
        print(__doc__, file=sys.stderr)
        sys.exit(2)
    m, sizes, c, entries = read_sdpa(sys.argv[1])
    mats = [{} for _ in sizes]
    for mat, blk, i, j, v in entries:
        d = abs(sizes[blk - 1])
        f = mats[blk - 1].setdefault(mat, np.zeros((d, d)))
        f[i - 1, j - 1] = v
        f[j - 1, i - 1] = v
    x = cp.Variable(m)
    cons = []
    for b, s in enumerate(sizes):
        d = abs(s)
        expr = -mats[b].get(0, np.zeros((d, d)))
        for k, f in mats[b].items():
            if k:
                expr = expr + f * x[k - 1]
        cons.append(expr >> 0 if s > 0 else cp.diag(expr) >= 0)
    prob = cp.Problem(cp.Minimize(np.array(c) @ x), cons)
    prob.solve(solver=cp.CLARABEL, tol_gap_abs=1e-12, tol_gap_rel=1e-12, tol_feas=1e-12, max_iter=500)
    if prob.status != cp.OPTIMAL:
        print(f"solver status: {prob.status}", file=sys.stderr)
    out = [" ".join(repr(float(v)) for v in x.value)]
    for b, (s, con) in enumerate(zip(sizes, cons)):
        y = np.atleast_1d(con.dual_value)
        if s < 0:
            out += [f"2 {b + 1} {i + 1} {i + 1} {float(v)!r}" for i, v in enumerate(y) if v != 0.0]
        else:
            y = (y + y.T) / 2
            out += [f"2 {b + 1} {i + 1} {j + 1} {float(y[i, j])!r}" for i in range(s) for j in range(i, s) if y[i, j] != 0.0]
    with open(sys.argv[2], "w") as f:
        f.write("\n".join(out) + "\n")


if __name__ == "__main__":
    main()
