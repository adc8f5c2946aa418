"""Backtracking isomorphism search between square boolean relations.

Used for graph isomorphism (symmetric adjacency with loops on the diagonal)
and for ideal-lattice isomorphism (inclusion order).
"""
from __future__ import annotations

from collections import Counter

import numpy as np

from .errors import BudgetExceeded

DEFAULT_NODE_CAP = 10_000_000


def _relabel(signatures):
    table = {sig: i for i, sig in enumerate(sorted(set(signatures)))}
    return [table[s] for s in signatures]


def refine_colors(X: np.ndarray, Y: np.ndarray):
    """Joint colour refinement of two relations.

    Returns per-vertex colours for X and Y drawn from one shared palette, so
    equal colours mean equal invariants. Starts from (out-degree, in-degree,
    loop) and refines by the multisets of out- and in-neighbour colours.
    """
    nx = len(X)
    both = [X, Y]
    sigs = []
    for M in both:
        out_deg = M.sum(axis=1)
        in_deg = M.sum(axis=0)
        diag = np.diagonal(M)
        sigs.extend(zip(out_deg.tolist(), in_deg.tolist(), diag.tolist()))
    colors = _relabel(sigs)
    n_colors = len(set(colors))
    while True:
        cx, cy = colors[:nx], colors[nx:]
        sigs = []
        for M, col in ((X, cx), (Y, cy)):
            for v in range(len(M)):
                outs = tuple(sorted(col[w] for w in np.flatnonzero(M[v])))
                ins = tuple(sorted(col[w] for w in np.flatnonzero(M[:, v])))
                sigs.append((col[v], outs, ins))
        colors = _relabel(sigs)
        k = len(set(colors))
        if k == n_colors:
            return colors[:nx], colors[nx:]
        n_colors = k


def find_isomorphism(X: np.ndarray, Y: np.ndarray, node_cap: int = DEFAULT_NODE_CAP):
    """Return a list ``m`` with ``X[u, v] == Y[m[u], m[v]]`` for all u, v, or None.

    Deterministic: vertices are tried in a fixed order and candidates in
    increasing id order. Raises BudgetExceeded after ``node_cap`` search nodes.
    """
    X = np.asarray(X, dtype=bool)
    Y = np.asarray(Y, dtype=bool)
    n = len(X)
    if n != len(Y):
        return None
    if n == 0:
        return []
    if X.sum() != Y.sum() or np.trace(X) != np.trace(Y):
        return None
    cx, cy = refine_colors(X, Y)
    if Counter(cx) != Counter(cy):
        return None

    cell_size = Counter(cx)
    # small cells first; within a cell keep vertices adjacent to earlier picks close
    order = sorted(range(n), key=lambda v: (cell_size[cx[v]], cx[v], v))
    candidates = {c: [w for w in range(n) if cy[w] == c] for c in cell_size}

    mapping = [-1] * n
    used = np.zeros(n, dtype=bool)
    src = np.array(order, dtype=np.intp)
    tgt = np.zeros(n, dtype=np.intp)
    stack = [0]  # stack[p] = next candidate index for position p
    nodes = 0
    while stack:
        p = len(stack) - 1
        v = order[p]
        cands = candidates[cx[v]]
        placed = False
        while stack[p] < len(cands):
            w = cands[stack[p]]
            stack[p] += 1
            if used[w]:
                continue
            nodes += 1
            if nodes > node_cap:
                raise BudgetExceeded("isomorphism search nodes", node_cap)
            if X[v, v] != Y[w, w]:
                continue
            if p:
                s, t = src[:p], tgt[:p]
                if not (np.array_equal(X[v, s], Y[w, t]) and np.array_equal(X[s, v], Y[t, w])):
                    continue
            mapping[v] = w
            used[w] = True
            tgt[p] = w
            placed = True
            break
        if placed:
            if p + 1 == n:
                return mapping
            stack.append(0)
            continue
        stack.pop()
        if stack:
            q = len(stack) - 1
            used[tgt[q]] = False
            mapping[order[q]] = -1
    return None
