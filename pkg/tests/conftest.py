"""Shared fixtures and independent brute-force oracles.

The oracles here deliberately avoid the library's own code paths: the
clustering oracle runs a transitive closure over the full distance
matrix, and the metric oracles work straight from the definitions.
"""

from __future__ import annotations

import numpy as np
import pytest

from tsdbscan.data_io import synth_blobs


def brute_force_dbscan(x: np.ndarray, eps: float, min_pts: int) -> np.ndarray:
    """Transitive-closure DBSCAN oracle (euclidean only).

    Clusters are connected components of the eps-graph over core points,
    numbered by smallest core index; a border point joins the earliest
    cluster among those with a core point in range.
    """
    n = len(x)
    d = np.sqrt(((x[:, None, :] - x[None, :, :]) ** 2).sum(axis=2))
    adj = d <= eps
    core = adj.sum(axis=1) >= min_pts
    labels = np.full(n, -1, dtype=np.int64)
    cluster = 0
    for i in range(n):
        if not core[i] or labels[i] != -1:
            continue
        labels[i] = cluster
        stack = [i]
        while stack:
            u = stack.pop()
            for v in np.flatnonzero(adj[u] & core):
                if labels[v] == -1:
                    labels[v] = cluster
                    stack.append(v)
        cluster += 1
    for i in range(n):
        if core[i]:
            continue
        near_core = np.flatnonzero(adj[i] & core)
        if near_core.size:
            labels[i] = labels[near_core].min()
    return labels


def brute_force_nmi(truth: np.ndarray, pred: np.ndarray) -> float:
    """Definitional NMI with arithmetic-mean normalization."""
    n = len(truth)
    t_vals = sorted(set(truth.tolist()))
    p_vals = sorted(set(pred.tolist()))

    def h(assign, vals):
        total = 0.0
        for v in vals:
            q = sum(1 for a in assign if a == v) / n
            if q > 0:
                total -= q * np.log(q)
        return total

    mi = 0.0
    for tv in t_vals:
        for pv in p_vals:
            joint = sum(1 for a, b in zip(truth, pred) if a == tv and b == pv) / n
            if joint > 0:
                pt = sum(1 for a in truth if a == tv) / n
                pp = sum(1 for b in pred if b == pv) / n
                mi += joint * np.log(joint / (pt * pp))
    denom = 0.5 * (h(truth, t_vals) + h(pred, p_vals))
    if denom == 0:
        return 1.0
    return max(0.0, min(1.0, mi / denom))


def brute_force_ari(truth: np.ndarray, pred: np.ndarray) -> float:
    """Definitional ARI from explicit pair counts."""
    n = len(truth)
    together_both = together_t = together_p = 0
    total = 0
    for i in range(n):
        for j in range(i + 1, n):
            total += 1
            st = truth[i] == truth[j]
            sp = pred[i] == pred[j]
            together_t += st
            together_p += sp
            together_both += st and sp
    expected = together_t * together_p / total
    maximum = 0.5 * (together_t + together_p)
    if maximum == expected:
        return 1.0
    return (together_both - expected) / (maximum - expected)


def brute_force_dip(sample: np.ndarray, delta: float = 1e-7) -> float:
    """LP-based dip oracle for small samples with distinct values.

    For every candidate mode segment, solve for the unimodal
    piecewise-linear CDF (knots at each data point and just before it,
    so a near-jump at the mode is representable) minimizing the sup
    deviation from the ECDF; the dip is the minimum over modes.
    """
    from scipy.optimize import linprog

    x = np.sort(np.asarray(sample, dtype=float))
    n = len(x)
    span = x[-1] - x[0]
    knots = np.sort(np.concatenate([x, x - delta * max(span, 1.0)]))
    m = len(knots)
    # ECDF targets: value (i+1)/n at x_i, left limit i/n just before it
    targets = {}
    for i, xi in enumerate(x):
        targets[np.searchsorted(knots, xi)] = (i + 1) / n
        targets[np.searchsorted(knots, xi - delta * max(span, 1.0))] = i / n

    widths = np.diff(knots)
    best = np.inf
    for mode in range(m - 1):
        # variables: g_0..g_{m-1}, t
        a_ub, b_ub = [], []
        for idx, f in targets.items():
            row = np.zeros(m + 1)
            row[idx], row[m] = 1, -1
            a_ub.append(row)
            b_ub.append(f)
            row = np.zeros(m + 1)
            row[idx], row[m] = -1, -1
            a_ub.append(row)
            b_ub.append(-f)
        for i in range(m - 1):  # monotone
            row = np.zeros(m + 1)
            row[i], row[i + 1] = 1, -1
            a_ub.append(row)
            b_ub.append(0.0)
        for i in range(m - 2):  # slopes rise before the mode, fall after
            row = np.zeros(m + 1)
            s1 = np.zeros(m + 1)
            s1[i], s1[i + 1] = -1 / widths[i], 1 / widths[i]
            s2 = np.zeros(m + 1)
            s2[i + 1], s2[i + 2] = -1 / widths[i + 1], 1 / widths[i + 1]
            if i + 1 <= mode:
                row = s1 - s2
            else:
                row = s2 - s1
            a_ub.append(row)
            b_ub.append(0.0)
        c = np.zeros(m + 1)
        c[m] = 1.0
        bounds = [(0.0, 1.0)] * m + [(0.0, None)]
        res = linprog(c, A_ub=np.array(a_ub), b_ub=np.array(b_ub), bounds=bounds,
                      method="highs")
        if res.success:
            best = min(best, res.fun)
    return best


@pytest.fixture(scope="session")
def blob_suite():
    """Twenty seeded blob datasets (k=20, N=2000, D=16, separation 20)."""
    out = []
    for seed in range(20):
        points, labels = synth_blobs(k=20, per_cluster=100, dims=16,
                                     separation=20.0, seed=seed)
        out.append((points, labels))
    return out
