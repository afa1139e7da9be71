#!/usr/bin/env python3
"""Turn a floating SDP solution into a pins file that rounds to an exact certificate.

Usage: close_certificate.py PROGRAM.sdpa SOLUTION.sol BOUND [options] > pins

BOUND is the rational bound to certify (e.g. 1/32). The script
  1. reads every flag block of Y and the per-class coefficient matrices,
  2. takes the eigenvectors of each Y block with tiny eigenvalues as its
     kernel, snaps them to rational vectors and writes Y = P^T W P with P a
     rational basis of the complement,
  3. marks classes whose slack is numerically zero as tight,
  4. re-solves for W with the tight classes held at zero slack, maximizing
     the smallest eigenvalue of W and the smallest loose slack,
  5. rounds W to denominators <= cap and solves a set of pivot entries
     exactly so that every tight class keeps slack exactly 0.
The output pins the bound and every Y entry (1-based `block row col value`).
`flagcert round --pin` then reproduces these values and `flagcert verify`
decides acceptance; nothing here is trusted.
"""
import argparse
import sys
from fractions import Fraction

import cvxpy as cp
import numpy as np
import scipy.linalg
import sympy as sp

from sdpa_cvxopt import read_sdpa


def exact(v, den=10**7):
    # SDPA coefficients are written with 17 significant digits when they do not terminate
    return Fraction(repr(v)).limit_denominator(den)


def read_y(path, sizes):
    nflag = sum(1 for s in sizes if s > 0)
    ys = [np.zeros((s, s)) for s in sizes[:nflag]]
    with open(path) as f:
        lines = [l.split() for l in f if l.strip()]
    for mat, blk, i, j, v in lines[1:]:
        if mat == "2" and int(blk) <= nflag:
            ys[int(blk) - 1][int(i) - 1, int(j) - 1] = float(v)
            ys[int(blk) - 1][int(j) - 1, int(i) - 1] = float(v)
    return ys


def to_sp(q):
    return sp.Rational(q.numerator, q.denominator)


def complement_basis(y, tol, den):
    """Rational rows spanning the orthogonal complement of Y's near-kernel."""
    d = y.shape[0]
    w, v = np.linalg.eigh(y)
    ker = v[:, w < tol * max(1.0, float(np.max(np.abs(w))))]
    if ker.shape[1] == 0:
        return sp.eye(d)
    if ker.shape[1] == d:
        return sp.zeros(0, d)
    # snap the kernel's reduced row echelon form to small rationals
    _, _, piv = scipy.linalg.qr(ker.T, pivoting=True)
    cols = sorted(piv[: ker.shape[1]])
    red = np.linalg.solve(ker.T[:, cols], ker.T)
    k = sp.Matrix([[to_sp(Fraction(float(x)).limit_denominator(den)) for x in row] for row in red])
    ns = k.nullspace()
    return sp.Matrix.hstack(*ns).T


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("sdpa")
    ap.add_argument("solution")
    ap.add_argument("bound")
    ap.add_argument("--cap", type=int, default=10_000, help="denominator cap for the free entries of W")
    ap.add_argument("--kernel-tol", type=float, default=1e-4, help="relative eigenvalue treated as zero")
    ap.add_argument("--kernel-den", type=int, default=100, help="denominator cap for kernel vectors")
    ap.add_argument("--slack-tol", type=float, default=1e-6, help="slack treated as zero")
    a = ap.parse_args()
    bound = Fraction(a.bound)

    m, sizes, c, entries = read_sdpa(a.sdpa)
    nflag = sum(1 for s in sizes if s > 0)
    k1 = [Fraction(0)] * m
    coef = [[{} for _ in range(m)] for _ in range(nflag)]  # block -> class -> (u, v) -> coefficient
    for mat, blk, i, j, v in entries:
        if mat == 0:
            continue
        if blk == len(sizes) and i == 1:
            k1[mat - 1] = exact(v)
        elif blk <= nflag:
            coef[blk - 1][mat - 1][(i - 1, j - 1)] = exact(v)
    alpha = [exact(ci) + bound * k1[i] for i, ci in enumerate(c)]
    fmat = [[sp.zeros(sizes[b], sizes[b]) for _ in range(m)] for b in range(nflag)]
    for b in range(nflag):
        for i in range(m):
            for (u, v), q in coef[b][i].items():
                fmat[b][i][u, v] = to_sp(q)
                fmat[b][i][v, u] = to_sp(q)

    ys = read_y(a.solution, sizes)
    ps = [complement_basis(ys[b], a.kernel_tol, a.kernel_den) for b in range(nflag)]
    # reduced coefficient matrices G = P F P^T, so that F . (P^T W P) = G . W
    gmat = [[ps[b] * fmat[b][i] * ps[b].T for i in range(m)] for b in range(nflag)]
    live = [b for b in range(nflag) if ps[b].rows > 0]

    slack0 = np.array([float(x) for x in alpha]) - np.array(
        [sum(float(np.sum(np.array(fmat[b][i], dtype=float) * ys[b])) for b in range(nflag)) for i in range(m)]
    )
    tight = [i for i in range(m) if slack0[i] < a.slack_tol]
    loose = [i for i in range(m) if i not in tight]

    wv = {b: cp.Variable((ps[b].rows, ps[b].rows), symmetric=True) for b in live}
    af = np.array([float(x) for x in alpha])
    slack = [af[i] - sum(cp.sum(cp.multiply(np.array(gmat[b][i], dtype=float), wv[b])) for b in live) for i in range(m)]

    def solve(margin_on_w):
        t = cp.Variable()
        cons = [wv[b] >> (t if margin_on_w else 0) * np.eye(ps[b].rows) for b in live]
        cons += [slack[i] == 0 for i in tight] + [slack[i] >= t for i in loose] + [t <= 1]
        prob = cp.Problem(cp.Maximize(t), cons)
        prob.solve(solver=cp.CLARABEL)
        if prob.status not in (cp.OPTIMAL, cp.OPTIMAL_INACCURATE) or t.value is None:
            sys.exit(f"re-solve failed ({prob.status}); try a smaller --kernel-tol or a larger --kernel-den")
        return t.value

    # loose classes that no W can lift above zero join the tight ones
    if loose and solve(False) < a.slack_tol:
        forced = [i for i in loose if slack[i].value < a.slack_tol]
        tight += forced
        loose = [i for i in loose if i not in forced]
    print(f"# blocks {[ps[b].rows for b in range(nflag)]} after reduction, {len(tight)} tight classes", file=sys.stderr)
    print(f"# margin {solve(True):.3e}", file=sys.stderr)

    # round, then restore the tight equalities exactly through well-conditioned pivots
    var = [(b, u, v) for b in live for u in range(ps[b].rows) for v in range(u, ps[b].rows)]
    wr = [Fraction(float(wv[b].value[u, v])).limit_denominator(a.cap) for b, u, v in var]
    rows = [[(gmat[b][i][u, v] * (1 if u == v else 2)) for b, u, v in var] for i in tight]
    if rows:
        af_rows = np.array(rows, dtype=float)
        q, r, piv = scipy.linalg.qr(af_rows.T, pivoting=True)
        rank = int(np.sum(np.abs(np.diag(r)) > 1e-9 * abs(r[0, 0])))
        eqs = sorted(piv[:rank])
        _, _, cpiv = scipy.linalg.qr(af_rows[eqs], pivoting=True)
        pivots = sorted(cpiv[:rank])
        amat = sp.Matrix([[rows[e][j] for j in pivots] for e in eqs])
        rhs = []
        for e in eqs:
            val = to_sp(alpha[tight[e]])
            for j, q_ in enumerate(wr):
                if j not in pivots:
                    val -= rows[e][j] * to_sp(q_)
            rhs.append(val)
        sol = amat.LUsolve(sp.Matrix(rhs))
        for j, val in zip(pivots, sol):
            wr[j] = Fraction(int(sp.numer(val)), int(sp.denom(val)))

    wexact = {b: sp.zeros(ps[b].rows, ps[b].rows) for b in live}
    for (b, u, v), q_ in zip(var, wr):
        wexact[b][u, v] = to_sp(q_)
        wexact[b][v, u] = to_sp(q_)
    out = [f"bound {bound}"]
    for b in range(nflag):
        y = ps[b].T * wexact[b] * ps[b] if b in live else sp.zeros(sizes[b], sizes[b])
        for u in range(sizes[b]):
            for v in range(u, sizes[b]):
                out.append(f"{b + 1} {u + 1} {v + 1} {y[u, v]}")
    print("\n".join(out))


if __name__ == "__main__":
    main()
