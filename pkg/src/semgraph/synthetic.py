"""Planted-structure generators for experiments and validation.

The main fixture is a block-structured attributed graph: a stochastic
block model on the topology side plus block-exclusive attributes on the
semantic side, so both signals point at the same planted communities and
either can be withheld.
"""

from __future__ import annotations

import numpy as np

from .io import AttributedGraph


def planted_attributed_sbm(nodes: int = 200, blocks: int = 4,
                           intra: float = 0.10, inter: float = 0.02,
                           attrs_per_block: int = 10,
                           inclusion: float = 0.5,
                           seed: int = 0) -> AttributedGraph:
    """Attributed SBM with block-exclusive attributes.

    Nodes split into `blocks` nearly equal groups (labels = block index).
    Attribute w belongs to block w // attrs_per_block and is switched on
    with probability `inclusion` for that block's nodes only, never for
    others.  Ids encode the layout: node i is "v<i>", attribute w of
    block g is "b<g>_a<w>".  Every node is guaranteed at least one edge
    and every attribute at least one carrier, so degenerate rows/columns
    cannot occur at any fixture size.  Deterministic in `seed`.
    """
    if blocks < 1 or nodes < 2 * blocks:
        raise ValueError("need at least two nodes per block")
    if not (0.0 <= inter <= intra <= 1.0):
        raise ValueError("expected 0 <= inter <= intra <= 1")
    if not 0.0 < inclusion <= 1.0:
        raise ValueError("inclusion must be in (0, 1]")
    rng = np.random.default_rng(seed)

    labels = np.sort(np.arange(nodes) % blocks)
    prob = np.where(labels[:, None] == labels[None, :], intra, inter)
    upper = np.triu(rng.random((nodes, nodes)) < prob, k=1)
    A = (upper | upper.T).astype(float)

    for i in np.flatnonzero(A.sum(axis=1) == 0):
        mates = np.flatnonzero((labels == labels[i])
                               & (np.arange(nodes) != i))
        j = int(rng.choice(mates))
        A[i, j] = A[j, i] = 1.0

    m = blocks * attrs_per_block
    owner = np.arange(m) // attrs_per_block
    R = np.zeros((nodes, m))
    member = labels[:, None] == owner[None, :]
    R[member] = (rng.random(int(member.sum())) < inclusion).astype(float)
    for w in np.flatnonzero(R.sum(axis=0) == 0):
        carriers = np.flatnonzero(labels == owner[w])
        R[int(rng.choice(carriers)), w] = 1.0

    node_ids = [f"v{i}" for i in range(nodes)]
    attr_ids = [f"b{owner[w]}_a{w}" for w in range(m)]
    return AttributedGraph.from_dense(A, R, node_ids=node_ids,
                                      attr_ids=attr_ids, labels=labels)


def attribute_block(attr_id: str) -> int:
    """Recover the owning block from a generated attribute id."""
    if not attr_id.startswith("b") or "_a" not in attr_id:
        raise ValueError(f"not a generated attribute id: {attr_id!r}")
    return int(attr_id[1:attr_id.index("_a")])
