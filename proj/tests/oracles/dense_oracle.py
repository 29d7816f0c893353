"""Dense reference computations used to freeze expected values in the C++ tests.

Everything here assembles the full Google matrix explicitly with numpy and
uses eigendecomposition / explicit inversion, so it shares no code path with
the matrix-free implementation.
"""
import itertools
import sys

import numpy as np

ALPHA = 0.85


def google_matrix(n, edges, alpha=ALPHA):
    """edges: list of (src, dst, weight); column j holds transitions out of j."""
    w = np.zeros((n, n))
    for s, d, x in edges:
        if s != d and x > 0:
            w[d, s] += x
    g = np.zeros((n, n))
    for j in range(n):
        col = w[:, j].sum()
        if col > 0:
            g[:, j] = alpha * w[:, j] / col
        else:
            g[:, j] = alpha / n
    return g + (1 - alpha) / n


def dominant(g):
    vals, vecs = np.linalg.eig(g)
    k = np.argmax(vals.real)
    v = np.abs(vecs[:, k].real)
    return v / v.sum()


def ranks(n, edges, alpha=ALPHA):
    p = dominant(google_matrix(n, edges, alpha))
    ps = dominant(google_matrix(n, [(d, s, x) for s, d, x in edges], alpha))
    return p, ps


def cascade(n, edges, kappa, tau_max):
    bankrupt = {}
    for tau in range(1, tau_max + 1):
        kept = [(s, d, x) for s, d, x in edges if d not in bankrupt]
        p, ps = ranks(n, kept)
        b = (ps - p) / (ps + p)
        new = [u for u in range(n) if u not in bankrupt and b[u] <= -kappa]
        for u in new:
            bankrupt[u] = tau
        yield tau, p, ps, b, sorted(new)
        if not new:
            break


def reduced(n, edges, sel):
    g = google_matrix(n, edges)
    rest = [i for i in range(n) if i not in sel]
    grr = g[np.ix_(sel, sel)]
    grs = g[np.ix_(sel, rest)]
    gsr = g[np.ix_(rest, sel)]
    gss = g[np.ix_(rest, rest)]
    inv = np.linalg.inv(np.eye(len(rest)) - gss)
    gr = grr + grs @ inv @ gsr
    vals, right = np.linalg.eig(gss)
    k = np.argmax(vals.real)
    lam = vals[k].real
    pr = np.abs(right[:, k].real)
    pr /= pr.sum()
    valsl, left = np.linalg.eig(gss.T)
    pl = np.abs(left[:, np.argmax(valsl.real)].real)
    pl /= pl @ pr
    gpr = grs @ np.outer(pr, pl) @ gsr / (1 - lam)
    gqr = gr - grr - gpr
    return g, gr, grr, gpr, gqr, lam


def fmt(v):
    return ", ".join(f"{x:.17g}" for x in np.ravel(v))


def main():
    np.set_printoptions(precision=17)
    # 3-node chain A->B->C, uniform input
    g = google_matrix(3, [(0, 1, 1), (1, 2, 1)])
    print("chain apply uniform:", fmt(g @ np.full(3, 1 / 3)))

    four = [(0, 1, 1), (1, 2, 1), (2, 0, 1), (3, 0, 1)]
    p, ps = ranks(4, four)
    print("four pagerank:", fmt(p))
    print("four cheirank:", fmt(ps))
    print("four balance:", fmt((ps - p) / (ps + p)))

    five = [(0, 1, 3.0), (0, 2, 1.0), (1, 2, 2.0), (2, 3, 1.0), (3, 0, 1.0),
            (3, 4, 4.0), (4, 1, 1.0), (2, 4, 1.0)]
    for kappa in (0.1, 0.2, 0.3):
        print(f"cascade kappa={kappa}")
        for tau, p, ps, b, new in cascade(5, five, kappa, 4):
            print(f"  tau={tau} new={new} B=[{fmt(b)}]")

    g, gr, grr, gpr, gqr, lam = reduced(5, five, [0, 2])
    print("regomax5 lambda_c:", f"{lam:.17g}")
    for name, m in (("gr", gr), ("grr", grr), ("gpr", gpr), ("gqr", gqr)):
        print(f"regomax5 {name}:", fmt(m), " weight:", f"{m.sum() / 2:.17g}")


if __name__ == "__main__":
    sys.exit(main())
