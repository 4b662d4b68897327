"""Hot numeric loops, compiled with numba.

The grid kernels iterate combos of (peak locations, slope) in the grid's flat
enumeration order, with all height triples contiguous inside a combo. Raw
regret S and best-response offsets B for one observation come out of a single
pass over the comfort values. `lasso_cd` is the coordinate-descent sweep for
the lasso baseline, compiled because underdetermined fits need thousands of
passes to converge.

`best_single` replicates the grid kernels' floating-point op order exactly;
the rational generator uses it so that its choices stay exactly optimal (and
hence zero-penalty) under the learner's own arithmetic.
"""
from __future__ import annotations

import os

import numpy as np

# the portable threading layer avoids TBB/OMP probing noise; with prange on a
# small core count the difference is immaterial
os.environ.setdefault("NUMBA_THREADING_LAYER", "workqueue")

from numba import njit, prange


@njit(cache=True, parallel=True)
def regret_best(D1, D2, D3, heights, slopes, costs, chosen_j, S_out, B_out):
    """Raw regret and best response for every grid point, one observation.

    D1..D3: (levels, n_offsets) distances to the next peak instance (inf if
    none). S_out (float64) and B_out (int32) have length n_params and follow
    the grid's flat enumeration order.
    """
    n1, nj = D1.shape
    n2 = D2.shape[0]
    n3 = D3.shape[0]
    ns = slopes.size
    nd = heights.size
    block = nd * nd * nd
    n_combos = n1 * n2 * n3 * ns
    for combo in prange(n_combos):
        ia = combo % ns
        rest = combo // ns
        l3 = rest % n3
        rest //= n3
        l2 = rest % n2
        l1 = rest // n2
        alpha = slopes[ia]
        a1 = alpha * D1[l1]
        a2 = alpha * D2[l2]
        a3 = alpha * D3[l3]
        cc1 = a1[chosen_j]
        cc2 = a2[chosen_j]
        cc3 = a3[chosen_j]
        cch = costs[chosen_j]
        v12 = np.empty(nj)
        idx = combo * block
        for i1 in range(nd):
            h1 = heights[i1]
            for i2 in range(nd):
                h2 = heights[i2]
                for j in range(nj):
                    t1 = h1 - a1[j]
                    t2 = h2 - a2[j]
                    v12[j] = t1 if t1 > t2 else t2
                m12 = h1 - cc1
                t = h2 - cc2
                if t > m12:
                    m12 = t
                for i3 in range(nd):
                    h3 = heights[i3]
                    vch = m12
                    t = h3 - cc3
                    if t > vch:
                        vch = t
                    if vch < 0.0:
                        vch = 0.0
                    uch = vch - cch
                    s = 0.0
                    best_j = 0
                    best_u = -np.inf
                    for j in range(nj):
                        v = v12[j]
                        t = h3 - a3[j]
                        if t > v:
                            v = t
                        if v < 0.0:
                            v = 0.0
                        u = v - costs[j]
                        if u > best_u:
                            best_u = u
                            best_j = j
                        r = u - uch
                        if r > 0.0:
                            s += r
                    S_out[idx] = s
                    B_out[idx] = best_j
                    idx += 1


@njit(cache=True, parallel=True)
def best_grid(D1, D2, D3, heights, slopes, costs, B_out):
    """Best-response offsets only (prediction path), same layout as regret_best."""
    n1, nj = D1.shape
    n2 = D2.shape[0]
    n3 = D3.shape[0]
    ns = slopes.size
    nd = heights.size
    block = nd * nd * nd
    n_combos = n1 * n2 * n3 * ns
    for combo in prange(n_combos):
        ia = combo % ns
        rest = combo // ns
        l3 = rest % n3
        rest //= n3
        l2 = rest % n2
        l1 = rest // n2
        alpha = slopes[ia]
        a1 = alpha * D1[l1]
        a2 = alpha * D2[l2]
        a3 = alpha * D3[l3]
        v12 = np.empty(nj)
        idx = combo * block
        for i1 in range(nd):
            h1 = heights[i1]
            for i2 in range(nd):
                h2 = heights[i2]
                for j in range(nj):
                    t1 = h1 - a1[j]
                    t2 = h2 - a2[j]
                    v12[j] = t1 if t1 > t2 else t2
                for i3 in range(nd):
                    h3 = heights[i3]
                    best_j = 0
                    best_u = -np.inf
                    for j in range(nj):
                        v = v12[j]
                        t = h3 - a3[j]
                        if t > v:
                            v = t
                        if v < 0.0:
                            v = 0.0
                        u = v - costs[j]
                        if u > best_u:
                            best_u = u
                            best_j = j
                    B_out[idx] = best_j
                    idx += 1


@njit(cache=True)
def best_single(h1, h2, h3, alpha, d1row, d2row, d3row, costs):
    """Best-response offset index for one curve, matching the grid kernels'
    float op order (ties resolve to the smallest index)."""
    nj = costs.size
    a1 = alpha * d1row
    a2 = alpha * d2row
    a3 = alpha * d3row
    best_j = 0
    best_u = -np.inf
    for j in range(nj):
        t1 = h1 - a1[j]
        t2 = h2 - a2[j]
        v = t1 if t1 > t2 else t2
        t = h3 - a3[j]
        if t > v:
            v = t
        if v < 0.0:
            v = 0.0
        u = v - costs[j]
        if u > best_u:
            best_u = u
            best_j = j
    return best_j


@njit(cache=True)
def lasso_cd(cols, yc, alpha, col_norm, max_iter, tol):
    """Cyclic coordinate descent on (1/2n)||y - Xb||^2 + alpha * ||b||_1.

    cols is the standardized design matrix transposed, so each coordinate's
    feature column is contiguous. Stops when the largest coefficient move in
    a full sweep drops below tol.
    """
    p, n = cols.shape
    beta = np.zeros(p)
    resid = yc.copy()
    for _ in range(max_iter):
        max_step = 0.0
        for j in range(p):
            cn = col_norm[j]
            if cn == 0.0:
                continue
            rho = 0.0
            for i in range(n):
                rho += cols[j, i] * resid[i]
            rho = rho / n + cn * beta[j]
            if rho > alpha:
                new = (rho - alpha) / cn
            elif rho < -alpha:
                new = (rho + alpha) / cn
            else:
                new = 0.0
            step = new - beta[j]
            if step != 0.0:
                for i in range(n):
                    resid[i] -= step * cols[j, i]
                beta[j] = new
                if step < 0.0:
                    step = -step
                if step > max_step:
                    max_step = step
        if max_step < tol:
            break
    return beta


def regret_best_reference(D1, D2, D3, heights, slopes, costs, chosen_j):
    """Pure-numpy re-derivation of regret_best, vectorized over height triples.

    Structurally different from the njit kernel (broadcasting + reductions vs
    explicit loops); used to pin down the kernel's numbers in tests.
    """
    nd = heights.size
    nj = costs.size
    n_combos = D1.shape[0] * D2.shape[0] * D3.shape[0] * slopes.size
    S = np.empty(n_combos * nd ** 3)
    B = np.empty(n_combos * nd ** 3, dtype=np.int32)
    pos = 0
    for l1 in range(D1.shape[0]):
        for l2 in range(D2.shape[0]):
            for l3 in range(D3.shape[0]):
                for ia in range(slopes.size):
                    alpha = slopes[ia]
                    c1 = heights[:, None] - alpha * D1[l1][None, :]
                    c2 = heights[:, None] - alpha * D2[l2][None, :]
                    c3 = heights[:, None] - alpha * D3[l3][None, :]
                    comfort = np.maximum(
                        np.maximum(c1[:, None, None, :], c2[None, :, None, :]),
                        c3[None, None, :, :],
                    )
                    np.maximum(comfort, 0.0, out=comfort)
                    u = comfort - costs
                    u_chosen = u[..., chosen_j]
                    regret = np.maximum(u - u_chosen[..., None], 0.0).sum(axis=-1)
                    best = np.argmax(u, axis=-1)
                    S[pos : pos + nd ** 3] = regret.reshape(-1)
                    B[pos : pos + nd ** 3] = best.reshape(-1)
                    pos += nd ** 3
    return S, B
