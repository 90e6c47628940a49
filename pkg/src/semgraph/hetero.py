"""Construction of the auxiliary heterogeneous weighted graph.

The combined graph places the original nodes and their attributes side by
side as entities; its weighted adjacency has the original topology in the
top-left block, normalized node-attribute relations off-diagonal, and
normalized attribute-attribute similarity in the bottom-right block.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import sparse

from .io import AttributedGraph

DENSE_SIZE_CAP = 20_000


def mnorm(matrix) -> np.ndarray:
    """Rescale all entries jointly onto [0, 1] by the global min and max.

    A constant matrix (max == min) maps to all zeros: a constant block
    carries no relational signal.
    """
    matrix = np.asarray(matrix, dtype=float)
    if matrix.size == 0:
        return matrix.copy()
    if not np.all(np.isfinite(matrix)):
        raise ValueError("mnorm input must be finite")
    lo, hi = matrix.min(), matrix.max()
    if hi == lo:
        return np.zeros_like(matrix)
    return (matrix - lo) / (hi - lo)


def attribute_similarity(attr_weights) -> np.ndarray:
    """Normalized attribute-attribute similarity from shared node memberships.

    Columns are compared by cosine similarity, the resulting matrix is
    symmetrically scaled by its row sums, and the scaled matrix is mapped
    onto [0, 1] with mnorm.
    """
    R0 = _to_dense(attr_weights)
    m = R0.shape[1]
    if m == 0:
        return np.zeros((0, 0))
    norms = np.linalg.norm(R0, axis=0)
    if np.any(norms == 0):
        raise ValueError("attribute column with zero norm")
    cols = R0 / norms
    gram = cols.T @ cols
    scale = 1.0 / np.sqrt(gram.sum(axis=1))
    scaled = gram * scale[:, None] * scale[None, :]
    scaled = (scaled + scaled.T) / 2.0  # exact symmetry despite BLAS rounding
    return mnorm(scaled)


def motif_relations(attr_weights, weighted: bool = False):
    """Co-occurrence counts of each (node, attribute) pair in the two
    higher-order motifs: two nodes sharing an attribute, and one node
    carrying two attributes.

    With weighted=True each count is multiplied by the pair's own weight,
    giving the cumulative-weight reading instead of the instance count.
    """
    R0 = _to_dense(attr_weights)
    support = (R0 > 0).astype(float)
    shared_nodes = support * (support.sum(axis=0)[None, :] - 1.0)
    shared_attrs = support * (support.sum(axis=1)[:, None] - 1.0)
    if weighted:
        shared_nodes = shared_nodes * R0
        shared_attrs = shared_attrs * R0
    return shared_nodes, shared_attrs


def combine_relations(R0, R1, R2, deltas) -> np.ndarray:
    """Blend the three relation matrices into one normalized block.

    Each input is mnorm-ed individually, combined with the delta weights,
    and the combination is mnorm-ed again.
    """
    deltas = tuple(float(d) for d in deltas)
    if len(deltas) != 3 or any(d < 0 for d in deltas):
        raise ValueError("deltas must be three nonnegative reals")
    parts = [mnorm(_to_dense(R)) for R in (R0, R1, R2)]
    combined = sum(d * part for d, part in zip(deltas, parts))
    return mnorm(combined)


@dataclass(frozen=True)
class HeteroAdjacency:
    """Symmetric weighted adjacency over node and attribute entities."""

    matrix: np.ndarray
    adjacency_block: np.ndarray
    relation_block: np.ndarray
    similarity_block: np.ndarray
    deltas: tuple[float, float, float]

    @property
    def n(self) -> int:
        return self.adjacency_block.shape[0]

    @property
    def m(self) -> int:
        return self.similarity_block.shape[0]

    def dump_tsv(self, path) -> None:
        """Debug dump of nonzero entries as "i<TAB>j<TAB>value" triples."""
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            for i, j in zip(*np.nonzero(self.matrix)):
                fh.write(f"{i}\t{j}\t{self.matrix[i, j]:.17g}\n")


def build_hetero_adjacency(g: AttributedGraph, deltas=(1.0, 1.0, 1.0),
                           weighted_motifs: bool = False,
                           attr_similarity: bool = True,
                           size_cap: int = DENSE_SIZE_CAP) -> HeteroAdjacency:
    """Assemble the combined entity adjacency from an attributed graph.

    attr_similarity=False zeroes the attribute-similarity block; together
    with all-zero deltas this reduces the graph to its plain topology
    (attribute entities are dropped entirely in that case). Entities left
    without any relation are rejected because the downstream random walk
    divides by entity degrees.
    """
    n, m = g.n, g.m
    if n + m > size_cap:
        raise ValueError(
            f"dense construction over {n + m} entities exceeds the size cap "
            f"of {size_cap}; raise size_cap explicitly to proceed")
    deltas = tuple(float(d) for d in deltas)

    A = g.adjacency.toarray().astype(float)
    if m:
        sim = (attribute_similarity(g.attr_weights) if attr_similarity
               else np.zeros((m, m)))
        R0 = _to_dense(g.attr_weights)
        R1, R2 = motif_relations(R0, weighted=weighted_motifs)
        rel = combine_relations(R0, R1, R2, deltas)
    else:
        sim = np.zeros((0, 0))
        rel = np.zeros((n, 0))

    if m and not rel.any() and not sim.any():
        # Pure-topology ablation: the attribute side carries no weight at
        # all, so attribute entities are dropped rather than left isolated.
        m = 0
        sim = np.zeros((0, 0))
        rel = np.zeros((n, 0))

    B = np.zeros((n + m, n + m))
    B[:n, :n] = A
    B[:n, n:] = rel
    B[n:, :n] = rel.T
    B[n:, n:] = sim

    degrees = B.sum(axis=1)
    if np.any(degrees == 0):
        i = int(np.argmin(degrees))
        name = (f"node {g.node_ids[i]!r}" if i < n
                else f"attribute {g.attr_ids[i - n]!r}")
        raise ValueError(f"{name} is isolated in the combined graph")

    return HeteroAdjacency(matrix=B, adjacency_block=A, relation_block=rel,
                           similarity_block=sim, deltas=deltas)


def _to_dense(matrix) -> np.ndarray:
    if sparse.issparse(matrix):
        return matrix.toarray().astype(float)
    return np.asarray(matrix, dtype=float)
