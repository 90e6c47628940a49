"""Side-information regularizers and the refinement updates they drive.

Two pairwise-similarity sources — a modularity matrix from node topology
and a cosine similarity over attribute usage rows — are normalized,
padded to cover all embedded entities, and turned into graph Laplacians.
Their weighted sum enters a ridge-like objective whose alternating
updates have closed forms.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np

from .embedding import EmbeddingModel, WalkMatrix
from .hetero import mnorm
from .io import AttributedGraph

log = logging.getLogger(__name__)

_PINV_RCOND = 1e-12


@dataclass(frozen=True)
class SideInfo:
    """Normalized similarity sources and their combined Laplacian.

    q_norm / s_norm are the n-by-n normalized sources; t1 / t2 pad them
    with zero rows and columns up to all n+m entities, so attribute
    vectors feel no pull.  combined = lambda1*L1 + lambda2*L2 with
    L_l the Laplacian of t_l.
    """

    q_norm: np.ndarray
    s_norm: np.ndarray
    t1: np.ndarray
    t2: np.ndarray
    laplacians: tuple[np.ndarray, np.ndarray]
    lambdas: tuple[float, float]
    combined: np.ndarray

    @property
    def size(self) -> int:
        return self.combined.shape[0]


def modularity_matrix(g: AttributedGraph) -> np.ndarray:
    """Q = A - d d^T / (2e) over nodes; every row sums to zero exactly."""
    if g.e == 0:
        raise ValueError("modularity is undefined for an edgeless graph")
    A = g.adjacency.toarray().astype(float)
    d = A.sum(axis=1)
    return A - np.outer(d, d) / (2.0 * g.e)


def attribute_cosine(g: AttributedGraph) -> np.ndarray:
    """Cosine similarity between node rows of the attribute matrix.

    A node with no attributes has zero similarity to everything, itself
    included, rather than propagating division by zero.
    """
    R = g.attr_weights.toarray().astype(float)
    norms = np.linalg.norm(R, axis=1)
    safe = np.where(norms > 0, norms, 1.0)
    unit = R / safe[:, None]
    sim = unit @ unit.T
    sim = (sim + sim.T) / 2.0  # exact symmetry despite BLAS rounding
    sim[norms == 0, :] = 0.0
    sim[:, norms == 0] = 0.0
    return sim


def _pad(block: np.ndarray, size: int) -> np.ndarray:
    out = np.zeros((size, size))
    out[:block.shape[0], :block.shape[1]] = block
    return out


def _laplacian(T: np.ndarray) -> np.ndarray:
    return np.diag(T.sum(axis=1)) - T


def build_side_info(g: AttributedGraph, lambdas=(1.0, 1.0)) -> SideInfo:
    """Normalize both sources, pad to n+m entities, combine Laplacians."""
    if len(lambdas) != 2:
        raise ValueError("exactly two source weights expected")
    lam = (float(lambdas[0]), float(lambdas[1]))
    if lam[0] < 0 or lam[1] < 0:
        raise ValueError("source weights must be non-negative")
    size = g.n + g.m
    q_norm = mnorm(modularity_matrix(g))
    s_norm = mnorm(attribute_cosine(g))
    t1, t2 = _pad(q_norm, size), _pad(s_norm, size)
    laplacians = (_laplacian(t1), _laplacian(t2))
    combined = lam[0] * laplacians[0] + lam[1] * laplacians[1]
    return SideInfo(q_norm=q_norm, s_norm=s_norm, t1=t1, t2=t2,
                    laplacians=laplacians, lambdas=lam, combined=combined)


def regularization_value(X: np.ndarray, T: np.ndarray) -> float:
    """Half-sum of T[i,j] * ||x_i - x_j||^2 over ordered pairs.

    Evaluated through the equivalent trace form tr(X^T (D_T - T) X);
    the tests cross-check it against a literal pairwise sum.
    """
    T = np.asarray(T, dtype=float)
    if not np.array_equal(T, T.T):
        raise ValueError("similarity matrix must be symmetric")
    return float(np.trace(X.T @ _laplacian(T) @ X))


def objective_value(Z: np.ndarray, X: np.ndarray, Y: np.ndarray,
                    side: SideInfo | None = None) -> float:
    """Squared reconstruction error plus the weighted Laplacian penalties."""
    value = float(np.linalg.norm(Z - X @ Y.T, "fro") ** 2)
    if side is not None:
        for lam, T in zip(side.lambdas, (side.t1, side.t2)):
            if lam:
                value += lam * regularization_value(X, T)
    return value


def objective_grad_x(Z, X, Y, L=None):
    G = 2.0 * (X @ (Y.T @ Y) - Z @ Y)
    if L is not None:
        G = G + 2.0 * L @ X
    return G


def objective_grad_y(Z, X, Y):
    return 2.0 * (Y @ (X.T @ X) - Z.T @ X)


def update_x(Z: np.ndarray, Y: np.ndarray, L: np.ndarray) -> np.ndarray:
    """Regularized update of the entity factor:
    X' = (I + L)^+ Z Y (Y^T Y + I_k)^+.

    Both system matrices are symmetric positive semi-definite; the
    pseudo-inverses zero singular values below 1e-12 of the largest.
    """
    for name, M in (("Z", Z), ("Y", Y), ("L", L)):
        if not np.all(np.isfinite(M)):
            raise ValueError(f"{name} contains non-finite entries")
    size = Z.shape[0]
    k = Y.shape[1]
    left = np.linalg.pinv(np.eye(size) + L, rcond=_PINV_RCOND)
    right = np.linalg.pinv(Y.T @ Y + np.eye(k), rcond=_PINV_RCOND)
    return left @ Z @ Y @ right


def update_y(Z: np.ndarray, X: np.ndarray) -> np.ndarray:
    """Exact least-squares context factor: Y' = Z^T X (X^T X)^+."""
    if not (np.all(np.isfinite(Z)) and np.all(np.isfinite(X))):
        raise ValueError("non-finite entries")
    return Z.T @ X @ np.linalg.pinv(X.T @ X, rcond=_PINV_RCOND)


def side_enhance(model: EmbeddingModel, walk: WalkMatrix, side: SideInfo,
                 iterations: int = 1) -> EmbeddingModel:
    """Refine an SVD initialization against the regularized objective.

    Each iteration recomputes X with the current Y, then Y with the
    fresh X.  One round is the intended use; the objective value is
    logged before and after each round, with no monotonicity claim.
    """
    if iterations < 1:
        raise ValueError("iterations must be >= 1")
    size = model.vectors.shape[0]
    if walk.matrix.shape[0] != size:
        raise ValueError("walk matrix and model sizes disagree")
    if side.size != size:
        raise ValueError(
            f"side info covers {side.size} entities, model has {size}")
    Z = walk.matrix
    X, Y = model.vectors, model.context
    log.info("refinement start: objective %.6e",
             objective_value(Z, X, Y, side))
    for it in range(iterations):
        X = update_x(Z, Y, side.combined)
        Y = update_y(Z, X)
        log.info("refinement round %d: objective %.6e", it + 1,
                 objective_value(Z, X, Y, side))
    return EmbeddingModel(vectors=X, context=Y, dim=model.dim,
                          order=model.order, negatives=model.negatives,
                          n=model.n, m=model.m,
                          node_ids=list(model.node_ids),
                          attr_ids=list(model.attr_ids))
