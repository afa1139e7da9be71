#!/usr/bin/env python3
"""Solve a sparse SDPA file with cvxopt and write a CSDP-style solution.

Usage: sdpa_cvxopt.py INPUT.sdpa OUTPUT.sol

The output's first line is the primal vector x; the remaining lines are
`matno blkno i j value` with matno 1 for the slack matrix and matno 2 for
the dual matrix Y.
"""
import sys

from cvxopt import matrix, solvers, spmatrix


def read_sdpa(path):
    lines = [l.strip() for l in open(path) if l.strip() and l.strip()[0] not in '"*']
    clean = lambda l: l.replace("{", " ").replace("}", " ").replace("(", " ").replace(")", " ").replace(",", " ").split()
    m = int(clean(lines[0])[0])
    nb = int(clean(lines[1])[0])
    sizes = [int(t) for t in clean(lines[2])[:nb]]
    c = [float(t) for t in clean(lines[3])[:m]]
    entries = []
    for l in lines[4:]:
        mat, blk, i, j, v = clean(l)
        entries.append((int(mat), int(blk), int(i), int(j), float(v)))
    return m, sizes, c, entries


def solve(m, sizes, c, entries):
    # cvxopt: minimize c'x  s.t.  G x + s = h,  s in cone;  here G = -F_i, h = -F_0
    lin = [b for b, s in enumerate(sizes) if s < 0]
    sdp = [b for b, s in enumerate(sizes) if s > 0]
    lin_off, off = {}, 0
    for b in lin:
        lin_off[b] = off
        off += -sizes[b]
    nl = off
    gl_i, gl_j, gl_v = [], [], []
    hl = [0.0] * nl
    gs = {b: ([], [], []) for b in sdp}
    hs = {b: [0.0] * (sizes[b] ** 2) for b in sdp}
    for mat, blk, i, j, v in entries:
        b = blk - 1
        if sizes[b] < 0:
            row = lin_off[b] + i - 1
            if mat == 0:
                hl[row] -= v
            else:
                gl_i.append(row)
                gl_j.append(mat - 1)
                gl_v.append(-v)
        else:
            d = sizes[b]
            cells = {(i - 1) + (j - 1) * d, (j - 1) + (i - 1) * d}
            for cell in cells:
                if mat == 0:
                    hs[b][cell] -= v
                else:
                    gs[b][0].append(cell)
                    gs[b][1].append(mat - 1)
                    gs[b][2].append(-v)
    Gl = spmatrix(gl_v, gl_i, gl_j, (nl, m))
    Gs = [spmatrix(gs[b][2], gs[b][0], gs[b][1], (sizes[b] ** 2, m)) for b in sdp]
    Hs = [matrix(hs[b], (sizes[b], sizes[b])) for b in sdp]
    solvers.options.update({"show_progress": False, "abstol": 1e-10, "reltol": 1e-10, "feastol": 1e-10, "maxiters": 200})
    sol = solvers.sdp(matrix(c), Gl=Gl, hl=matrix(hl), Gs=Gs, hs=Hs)
    if sol["status"] != "optimal":
        print(f"solver status: {sol['status']}", file=sys.stderr)
    return lin, lin_off, sdp, sol


def write_solution(path, sizes, lin, lin_off, sdp, sol):
    out = [" ".join(repr(float(v)) for v in sol["x"])]
    for matno, lkey, skey in ((1, "sl", "ss"), (2, "zl", "zs")):
        for b in lin:
            for i in range(-sizes[b]):
                v = float(sol[lkey][lin_off[b] + i])
                if v != 0.0:
                    out.append(f"{matno} {b + 1} {i + 1} {i + 1} {v!r}")
        for k, b in enumerate(sdp):
            mat = sol[skey][k]
            for i in range(sizes[b]):
                for j in range(i, sizes[b]):
                    v = float((mat[i, j] + mat[j, i]) / 2)
                    if v != 0.0:
                        out.append(f"{matno} {b + 1} {i + 1} {j + 1} {v!r}")
    with open(path, "w") as f:
        f.write("\n".join(out) + "\n")


def main():
    if len(sys.argv) != 3:
        print(__doc__, file=sys.stderr)
        sys.exit(2)
    m, sizes, c, entries = read_sdpa(sys.argv[1])
    lin, lin_off, sdp, sol = solve(m, sizes, c, entries)
    write_solution(sys.argv[2], sizes, lin, lin_off, sdp, sol)


if __name__ == "__main__":
    main()
