"""Built-in cross-checks of the fast paths against reference code.

Run via the CLI `selftest` command.  Each suite draws many random small
instances, compares the production implementation with the literal one in
`reference`, and reports one line; any discrepancy fails the whole run.
The suites mirror the repository's acceptance tests so a deployed binary
can be sanity-checked without a test harness present.
"""

from __future__ import annotations

import sys

import numpy as np

from . import reference
from .embedding import factorize, walk_matrix
from .evaluation import classify, clustering_accuracy, nmi, train_classifier
from .hetero import build_hetero_adjacency, motif_relations
from .io import AttributedGraph


def _random_attributed_graph(rng, max_n=8, max_m=5):
    """Connected topology (random recursive tree + extra edges), binary
    attributes with every column carried at least once."""
    n = int(rng.integers(2, max_n + 1))
    m = int(rng.integers(1, max_m + 1))
    A = np.zeros((n, n))
    for i in range(1, n):
        j = int(rng.integers(i))
        A[i, j] = A[j, i] = 1.0
    extra = np.triu(rng.random((n, n)) < 0.3, k=1)
    A = np.maximum(A, (extra | extra.T).astype(float))
    np.fill_diagonal(A, 0.0)
    R = (rng.random((n, m)) < 0.4).astype(float)
    for w in np.flatnonzero(R.sum(axis=0) == 0):
        R[int(rng.integers(n)), w] = 1.0
    return AttributedGraph.from_dense(A, R)


def _check_walk(rng, rounds):
    worst = 0.0
    for _ in range(rounds):
        g = _random_attributed_graph(rng)
        hetero = build_hetero_adjacency(g)
        order = int(rng.integers(1, 5))
        ours = walk_matrix(hetero, order=order, negatives=1).matrix
        ref = reference.walk_matrix_oracle(hetero.matrix, order, 1)
        scale = max(1.0, float(np.abs(ref).max()))
        worst = max(worst, float(np.abs(ours - ref).max()) / scale)
    return worst, 1e-10


def _check_motifs(rng, rounds):
    worst = 0.0
    for _ in range(rounds):
        n = int(rng.integers(1, 7))
        m = int(rng.integers(1, 6))
        R = (rng.random((n, m)) < 0.5).astype(float)
        ours = motif_relations(R)
        ref = reference.motif_oracle(R)
        worst = max(worst,
                    float(np.abs(ours[0] - ref[0]).max()),
                    float(np.abs(ours[1] - ref[1]).max()))
    return worst, 0.0


def _check_factorization(rng, rounds):
    from .embedding import WalkMatrix
    worst = 0.0
    for _ in range(rounds):
        size = int(rng.integers(2, 10))
        Z = rng.normal(size=(size, size))
        walk = WalkMatrix(matrix=Z, volume=1.0, degrees=np.ones(size),
                          n=size, m=0, order=1, negatives=1)
        s = np.linalg.svd(Z, compute_uv=False)
        for k in range(1, size + 1):
            model = factorize(walk, k)
            resid = np.linalg.norm(Z - model.vectors @ model.context.T)
            tail = float(np.sqrt((s[k:] ** 2).sum()))
            worst = max(worst, abs(resid - tail))
    return worst, 1e-8


def _check_metrics(rng, rounds):
    for _ in range(rounds):
        n = int(rng.integers(4, 40))
        a = rng.integers(0, 4, size=n)
        b = rng.integers(0, 3, size=n)
        if abs(nmi(a, a) - 1.0) > 0:
            return 1.0, 0.0
        if abs(nmi(a, b) - nmi(b, a)) > 1e-12:
            return 1.0, 0.0
        perm = rng.permutation(4)
        if abs(clustering_accuracy(a, b)
               - clustering_accuracy(perm[a], b)) > 1e-12:
            return 1.0, 0.0
    X = np.vstack([rng.normal(size=(20, 3)) + 6.0,
                   rng.normal(size=(20, 3)) - 6.0])
    y = np.repeat([0, 1], 20)
    clf = train_classifier(X, y, l2=1e-4)
    train_acc = float(np.mean(classify(clf, X) == y))
    return 0.0 if train_acc == 1.0 else 1.0, 0.0


_SUITES = (
    ("walk-matrix vs dense oracle", _check_walk, 200),
    ("motif counts vs enumeration", _check_motifs, 200),
    ("factorization tail norms", _check_factorization, 40),
    ("metric sanity", _check_metrics, 100),
)


def run_selftest(seed: int = 0, out=None) -> bool:
    """Run every suite; print one ok/FAIL line each; True when all pass."""
    if out is None:  # resolve lazily so stream redirection works
        out = sys.stdout
    rng = np.random.default_rng(seed)
    all_ok = True
    for name, check, rounds in _SUITES:
        worst, tol = check(rng, rounds)
        ok = worst <= tol
        all_ok &= ok
        print(f"{'ok  ' if ok else 'FAIL'} {name} "
              f"({rounds} rounds, worst {worst:.3g}, tol {tol:g})",
              file=out)
    return all_ok
