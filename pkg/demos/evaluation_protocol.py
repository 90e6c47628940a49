"""The two standard downstream checks on one fixture: repeated k-means
clustering scored by NMI/AC, and one-vs-rest logistic classification on
a small train split scored by AC/macro-F1.

Every repetition draws its own seed from one master sequence, so a
report is reproducible from (task, repeats, seed) alone.
"""

from semgraph import embed, evaluate, planted_attributed_sbm

g = planted_attributed_sbm(nodes=160, blocks=4, intra=0.12, seed=1)
model = embed(g, dim=32)

for task in ("clustering", "classification"):
    report = evaluate(model, g, task=task, repeats=25, seed=0,
                      train_fraction=0.1)
    print(report.table())
    print()

# the same numbers as machine-readable records
report = evaluate(model, g, task="clustering", repeats=25, seed=0)
for line in report.records():
    print(line)
