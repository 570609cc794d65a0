"""Train an LS-SVM on two blobs and look at what comes out."""
import numpy as np

from mpso_lssvm import LssvmHyperParams, Variant, gram_matrix, predict, train
from mpso_lssvm.data import Dataset

rng = np.random.default_rng(0)
x = np.vstack([rng.normal(-1.0, 0.8, (25, 2)), rng.normal(1.0, 0.8, (25, 2))])
y = np.r_[-np.ones(25), np.ones(25)]
data = Dataset(x, y, x == 0)

# the Gram matrix is symmetric with ones on the diagonal
k = gram_matrix(x, 1.0)
print("gram shape", k.shape, "diag", k.diagonal()[:3], "symmetric", np.allclose(k, k.T))

# small sigma makes K close to the identity, every point only sees itself
print("off-diagonal mean, sigma=0.05:", gram_matrix(x, 0.05)[~np.eye(50, dtype=bool)].mean())

for variant in Variant:
    model = train(data, LssvmHyperParams(gamma=10.0, sigma=1.0), variant)
    acc = np.mean(predict(model, x) == y)
    print(f"{variant.value:>10}: bias={model.bias:+.4f}  sum(alpha)={model.alpha.sum():+.2e}  "
          f"train acc={acc:.3f}")

# larger gamma fits the training labels more tightly
for gamma in (0.1, 1.0, 100.0, 1e4):
    model = train(data, LssvmHyperParams(gamma, 1.0))
    print(f"gamma={gamma:>8g}  train acc={np.mean(predict(model, x) == y):.3f}")
