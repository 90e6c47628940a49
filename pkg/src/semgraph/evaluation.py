"""Downstream task harness: k-means clustering and linear classification.

Both tasks score node vectors against ground-truth labels.  Clustering is
measured with normalized mutual information and matched accuracy (optimal
cluster-to-class assignment); classification with accuracy and Macro-F1 of
a one-vs-rest logistic model trained on a small random split.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import linear_sum_assignment
from scipy.special import expit

from .embedding import EmbeddingModel
from .io import AttributedGraph


@dataclass
class Clustering:
    assignment: np.ndarray
    k: int
    centers: np.ndarray
    inertia: float


def _pp_centers(points, k, rng):
    # distance-weighted seeding: first uniform, rest proportional to D^2
    N = points.shape[0]
    centers = np.empty((k, points.shape[1]))
    centers[0] = points[rng.integers(N)]
    d2 = ((points - centers[0]) ** 2).sum(axis=1)
    for j in range(1, k):
        total = d2.sum()
        if total > 0:
            idx = rng.choice(N, p=d2 / total)
        else:
            idx = rng.integers(N)
        centers[j] = points[idx]
        d2 = np.minimum(d2, ((points - centers[j]) ** 2).sum(axis=1))
    return centers


def _sqdist(points, centers):
    d2 = (points ** 2).sum(axis=1)[:, None] \
        - 2.0 * points @ centers.T \
        + (centers ** 2).sum(axis=1)[None, :]
    return np.maximum(d2, 0.0)


def kmeans(points, k: int, seed: int, restarts: int = 10,
           max_iter: int = 300) -> Clustering:
    """Lloyd's algorithm, ++ seeding, best of `restarts` by within-cluster SSQ.

    Empty clusters are repaired by stealing the point farthest from its
    center out of the currently largest cluster, so every restart returns
    exactly k non-empty clusters.
    """
    points = np.asarray(points, dtype=float)
    if points.ndim != 2:
        raise ValueError("points must be a 2-d array")
    if not np.all(np.isfinite(points)):
        raise ValueError("points contain non-finite values")
    N = points.shape[0]
    if not 1 <= k <= N:
        raise ValueError(f"k must be in [1, {N}], got {k}")

    rng = np.random.default_rng(seed)
    best = None
    for _ in range(restarts):
        centers = _pp_centers(points, k, rng)
        assignment = None
        for _ in range(max_iter):
            d2 = _sqdist(points, centers)
            new_assignment = np.argmin(d2, axis=1)
            counts = np.bincount(new_assignment, minlength=k)
            while (counts == 0).any():
                empty = int(np.flatnonzero(counts == 0)[0])
                big = int(np.argmax(counts))
                members = np.flatnonzero(new_assignment == big)
                victim = members[np.argmax(d2[members, big])]
                new_assignment[victim] = empty
                counts[big] -= 1
                counts[empty] += 1
            if assignment is not None and np.array_equal(new_assignment,
                                                         assignment):
                break
            assignment = new_assignment
            for j in range(k):
                centers[j] = points[assignment == j].mean(axis=0)
        inertia = float(_sqdist(points, centers)[np.arange(N),
                                                 assignment].sum())
        if best is None or inertia < best.inertia:
            best = Clustering(assignment=assignment.copy(), k=k,
                              centers=centers.copy(), inertia=inertia)
    return best


def _contingency(a, b):
    a = np.asarray(a).ravel()
    b = np.asarray(b).ravel()
    if a.size != b.size:
        raise ValueError(f"partition lengths differ: {a.size} vs {b.size}")
    if a.size == 0:
        raise ValueError("empty partitions")
    avals, ai = np.unique(a, return_inverse=True)
    bvals, bi = np.unique(b, return_inverse=True)
    table = np.zeros((avals.size, bvals.size))
    np.add.at(table, (ai, bi), 1.0)
    return table, avals, bvals


def nmi(a, b) -> float:
    """Mutual information over the arithmetic mean of the two entropies.

    Natural logarithms throughout.  Partitions identical up to relabeling
    score 1 (covering the degenerate all-one-cluster pair); otherwise a
    zero entropy on either side scores 0.
    """
    table, _, _ = _contingency(a, b)
    n = table.sum()
    if np.all((table > 0).sum(axis=1) == 1) and \
            np.all((table > 0).sum(axis=0) == 1):
        return 1.0
    pa = table.sum(axis=1) / n
    pb = table.sum(axis=0) / n
    ha = -float(np.sum(pa * np.log(pa, where=pa > 0, out=np.zeros_like(pa))))
    hb = -float(np.sum(pb * np.log(pb, where=pb > 0, out=np.zeros_like(pb))))
    if ha <= 0.0 or hb <= 0.0:
        return 0.0
    p = table / n
    outer = np.outer(pa, pb)
    mask = p > 0
    contrib = p[mask] * (np.log(p[mask]) - np.log(outer[mask]))
    # summing in sorted order makes nmi(a, b) == nmi(b, a) exact
    info = float(np.sort(contrib).sum())
    return float(min(1.0, max(0.0, info / ((ha + hb) / 2.0))))


def match_clusters(pred, truth) -> dict:
    """Optimal cluster-to-class map (Hungarian on the contingency table).

    Returns {predicted cluster value: matched truth value}; clusters left
    unmatched when there are more clusters than classes are absent.
    """
    table, pvals, tvals = _contingency(pred, truth)
    rows, cols = linear_sum_assignment(table, maximize=True)
    return {pvals[r]: tvals[c] for r, c in zip(rows, cols)}


def clustering_accuracy(pred, truth) -> float:
    """Fraction correct after the optimal cluster-to-class matching."""
    table, _, _ = _contingency(pred, truth)
    rows, cols = linear_sum_assignment(table, maximize=True)
    return float(table[rows, cols].sum() / table.sum())


def accuracy(pred, truth) -> float:
    pred = np.asarray(pred).ravel()
    truth = np.asarray(truth).ravel()
    if pred.size != truth.size:
        raise ValueError(f"length mismatch: {pred.size} vs {truth.size}")
    if pred.size == 0:
        raise ValueError("empty label arrays")
    return float(np.mean(pred == truth))


def macro_f1(pred, truth, classes=None) -> float:
    """Unweighted mean of per-class F1; a class absent from both sides
    contributes 0."""
    pred = np.asarray(pred).ravel()
    truth = np.asarray(truth).ravel()
    if pred.size != truth.size:
        raise ValueError(f"length mismatch: {pred.size} vs {truth.size}")
    if classes is None:
        classes = np.union1d(pred, truth)
    scores = []
    for cls in classes:
        tp = float(np.sum((pred == cls) & (truth == cls)))
        fp = float(np.sum((pred == cls) & (truth != cls)))
        fn = float(np.sum((pred != cls) & (truth == cls)))
        denom = 2.0 * tp + fp + fn
        scores.append(2.0 * tp / denom if denom > 0 else 0.0)
    return float(np.mean(scores))


@dataclass
class LinearClassifier:
    classes: np.ndarray
    weights: np.ndarray  # one row per class, bias in the last column
    l2: float


def logistic_loss(w, features, targets, l2: float) -> float:
    """Mean binary cross-entropy plus l2/2 * ||w||^2 excluding the bias.

    `features` already carries the constant bias column; targets in {0,1}.
    """
    z = features @ w
    data = float(np.mean(np.logaddexp(0.0, z) - targets * z))
    return data + 0.5 * l2 * float(w[:-1] @ w[:-1])


def logistic_grad(w, features, targets, l2: float) -> np.ndarray:
    z = features @ w
    g = features.T @ (expit(z) - targets) / features.shape[0]
    g[:-1] += l2 * w[:-1]
    return g


def train_classifier(vectors, labels, l2: float = 1e-4,
                     max_steps: int = 5000,
                     tol: float = 1e-6) -> LinearClassifier:
    """One-vs-rest logistic regression by full-batch gradient descent.

    The step size is the inverse Lipschitz constant of the regularized
    loss gradient, so descent is monotone without a line search; each
    binary problem stops at gradient norm <= tol or max_steps.
    """
    X = np.asarray(vectors, dtype=float)
    y = np.asarray(labels).ravel()
    if X.ndim != 2 or X.shape[0] != y.size:
        raise ValueError("vectors and labels disagree in length")
    if l2 < 0:
        raise ValueError("l2 must be non-negative")
    N = X.shape[0]
    Xa = np.hstack([X, np.ones((N, 1))])
    lipschitz = np.linalg.norm(Xa, 2) ** 2 / (4.0 * N) + l2
    step = 1.0 / lipschitz

    classes = np.unique(y)
    W = np.zeros((classes.size, Xa.shape[1]))
    for ci, cls in enumerate(classes):
        t = (y == cls).astype(float)
        w = np.zeros(Xa.shape[1])
        for _ in range(max_steps):
            g = logistic_grad(w, Xa, t, l2)
            if np.linalg.norm(g) <= tol:
                break
            w -= step * g
        W[ci] = w
    return LinearClassifier(classes=classes, weights=W, l2=l2)


def classify(model: LinearClassifier, vectors) -> np.ndarray:
    X = np.asarray(vectors, dtype=float)
    Xa = np.hstack([X, np.ones((X.shape[0], 1))])
    scores = Xa @ model.weights.T
    return model.classes[np.argmax(scores, axis=1)]


@dataclass
class EvalReport:
    task: str
    ac: float
    nmi: float | None
    macro_f1: float | None
    repeats: int
    seed: int
    config: dict
    per_repeat: dict = field(default_factory=dict)

    def records(self) -> list[str]:
        """Line-delimited metric<TAB>value pairs for scripting."""
        out = []
        if self.nmi is not None:
            out.append(f"nmi\t{self.nmi:.17g}")
        out.append(f"ac\t{self.ac:.17g}")
        if self.macro_f1 is not None:
            out.append(f"macro_f1\t{self.macro_f1:.17g}")
        return out

    def table(self) -> str:
        rows = [f"task        {self.task}",
                f"repeats     {self.repeats}",
                f"seed        {self.seed}"]
        for key, value in sorted(self.config.items()):
            rows.append(f"{key:<11} {value}")
        for name in ("nmi", "ac", "macro_f1"):
            mean = getattr(self, name)
            if mean is None:
                continue
            spread = float(np.std(self.per_repeat.get(name, [mean])))
            rows.append(f"{name:<11} {mean:.4f} +/- {spread:.4f}")
        return "\n".join(rows)


def _sample_train(labels, fraction, rng, attempts: int = 20):
    n = labels.size
    n_train = int(round(fraction * n))
    n_train = max(1, min(n - 1, n_train))
    wanted = np.unique(labels)
    for _ in range(attempts):
        perm = rng.permutation(n)
        train = perm[:n_train]
        if np.array_equal(np.unique(labels[train]), wanted):
            return train, perm[n_train:]
    raise ValueError(
        f"no train split of {n_train} nodes covered all {wanted.size} "
        f"classes after {attempts} attempts")


def evaluate(model: EmbeddingModel, g: AttributedGraph,
             task: str = "clustering", repeats: int = 100,
             train_fraction: float = 0.1, seed: int = 0,
             l2: float = 1e-4) -> EvalReport:
    """Score node vectors on a labeled graph, averaging over seeded repeats.

    Deterministic in (model, g, protocol): per-repeat seeds derive from
    `seed` through a SeedSequence, so repeats are independent and the
    whole report reproduces exactly.
    """
    if g.labels is None:
        raise ValueError("graph has no labels to evaluate against")
    if repeats < 1:
        raise ValueError("repeats must be >= 1")
    if not 0.0 < train_fraction < 1.0:
        raise ValueError("train_fraction must be in (0, 1)")
    labels = np.asarray(g.labels).ravel()
    X = model.node_vectors
    if X.shape[0] != labels.size:
        raise ValueError("model node count does not match label count")
    sub_seeds = np.random.SeedSequence(seed).generate_state(repeats)

    if task == "clustering":
        k = g.c if g.c is not None else int(np.unique(labels).size)
        nmis, acs = [], []
        for s in sub_seeds:
            cl = kmeans(X, k, int(s))
            nmis.append(nmi(cl.assignment, labels))
            acs.append(clustering_accuracy(cl.assignment, labels))
        return EvalReport(task=task, ac=float(np.mean(acs)),
                          nmi=float(np.mean(nmis)), macro_f1=None,
                          repeats=repeats, seed=seed,
                          config={"clusters": k},
                          per_repeat={"nmi": nmis, "ac": acs})
    if task == "classification":
        acs, f1s = [], []
        for s in sub_seeds:
            rng = np.random.default_rng(int(s))
            train, test = _sample_train(labels, train_fraction, rng)
            clf = train_classifier(X[train], labels[train], l2=l2)
            pred = classify(clf, X[test])
            acs.append(accuracy(pred, labels[test]))
            f1s.append(macro_f1(pred, labels[test],
                                classes=np.unique(labels)))
        return EvalReport(task=task, ac=float(np.mean(acs)), nmi=None,
                          macro_f1=float(np.mean(f1s)), repeats=repeats,
                          seed=seed,
                          config={"train_fraction": train_fraction,
                                  "l2": l2},
                          per_repeat={"ac": acs, "macro_f1": f1s})
    raise ValueError(f"unknown task {task!r}")
