"""Slow, literal reference implementations used by the selftest command.

Everything here trades speed for obviousness: walk proximity is assembled
power by power from the definition, and motif counts come from explicit
instance enumeration.  The production code paths must agree with these on
random inputs; keep the two free of shared helpers.
"""

from __future__ import annotations

import numpy as np


def walk_matrix_oracle(B: np.ndarray, order: int, negatives: int) -> np.ndarray:
    """vol(G') * mean of the first `order` transition powers, scaled by
    inverse degrees and the negative-sampling count, truncated-log."""
    B = np.asarray(B, dtype=float)
    d = B.sum(axis=1)
    if np.any(d <= 0):
        raise ValueError("zero-degree entity")
    vol = d.sum()
    Dinv = np.diag(1.0 / d)
    P = Dinv @ B
    acc = np.zeros_like(B)
    for r in range(1, order + 1):
        acc = acc + np.linalg.matrix_power(P, r)
    M = vol * (acc / order) @ Dinv / negatives
    return np.log(np.maximum(M, 1.0))


def motif_oracle(R0: np.ndarray):
    """Count two-node-one-attribute and one-node-two-attribute instances.

    Returns (shared_nodes, shared_attrs): entry [i, w] counts, for a
    carried pair (i, w), the other nodes also carrying w, respectively the
    other attributes i also carries.  `weighted` scaling is the caller's
    concern; this enumerates instances on the binary support.
    """
    R0 = np.asarray(R0)
    n, m = R0.shape
    shared_nodes = np.zeros((n, m))
    shared_attrs = np.zeros((n, m))
    for i in range(n):
        for w in range(m):
            if R0[i, w] <= 0:
                continue
            for j in range(n):
                if j != i and R0[j, w] > 0:
                    shared_nodes[i, w] += 1
            for u in range(m):
                if u != w and R0[i, u] > 0:
                    shared_attrs[i, w] += 1
    return shared_nodes, shared_attrs
