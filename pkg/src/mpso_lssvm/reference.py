"""Published reference numbers used for side-by-side reporting.

Nothing here is computed; the values are the published figures for the
Modified-PSO + LS-SVM classifier on the 768-record Pima Indians Diabetes data,
and the accuracies other published methods reported on the same data.
"""

TUNED_GAMMA = 100.0
TUNED_SIGMA = 0.5

# per-fold 10-fold CV accuracy, percent
FOLD_ACCURACIES = (93.993, 95.973, 96.889, 99.9769, 97.991,
                   98.698, 96.999, 99.988, 99.99, 97.83)
MEAN_ACCURACY = 97.833

SWARM_SIZE = 768
ITERATIONS = 100

# (method, accuracy percent, records used), as published
COMPARISON_TABLE = (
    ("ANN and AIS", 76.0, 768),
    ("MLP/BN/J48graft/JRip and FLR", 81.33, 768),
    ("MLP, SVM, KNN, QDA and LDA", 82.4, 768),
    ("GA and ANN", 84.713, 392),
    ("AMMLP", 89.93, 768),
    ("Fuzzy, DT, ACS and ANN", 95.852, 247),
    ("Modified-PSO + LS-SVM", 97.833, 768),
)
