"""One-class SVM on scalar angle estimates.

Trains only on the legitimate node's estimated angles and accepts a new
estimate iff the decision function

    f(x) = sum_i alpha_i K(x_i, x) - rho

is positive, with a Gaussian kernel on degrees.  The dual

    min 0.5 * a^T Q a   s.t.  0 <= a_i <= 1/(nu*l),  sum a_i = 1

is solved with SMO-style two-coordinate updates; the pairwise line search is
closed-form under the simplex constraint.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

MEDIAN_HEURISTIC = "median-heuristic"


@dataclass(frozen=True)
class OcsvmParams:
    nu: float = 0.015
    gamma: float | str = MEDIAN_HEURISTIC
    solver_tol: float = 1e-6
    max_iters: int = 100_000
    # floor on the median pairwise squared distance, in deg^2; prevents
    # gamma -> inf when high SNR collapses the training estimates
    gamma_floor_deg2: float = 0.0025

    def __post_init__(self):
        if not 0.0 < self.nu <= 1.0:
            raise ValueError("nu must lie in (0, 1]")
        if not isinstance(self.gamma, str) and self.gamma <= 0:
            raise ValueError("explicit gamma must be positive")
        if isinstance(self.gamma, str) and self.gamma != MEDIAN_HEURISTIC:
            raise ValueError(f"gamma must be a number or {MEDIAN_HEURISTIC!r}")


class OcsvmConvergenceError(RuntimeError):
    def __init__(self, kkt_violation: float, max_iters: int):
        self.kkt_violation = kkt_violation
        super().__init__(
            f"one-class SVM did not converge in {max_iters} iterations "
            f"(worst KKT violation {kkt_violation:.3e})"
        )


def kernel(x, y, gamma: float):
    """Gaussian kernel exp(-gamma * (x - y)^2) on scalar angles."""
    if gamma <= 0:
        raise ValueError("gamma must be positive")
    d = np.asarray(x, dtype=float) - np.asarray(y, dtype=float)
    return np.exp(-gamma * d * d)


def median_heuristic_gamma(samples: np.ndarray, floor_deg2: float) -> float:
    """gamma = 1 / (2 * max(median pairwise squared distance, floor))."""
    x = np.asarray(samples, dtype=float)
    d2 = (x[:, None] - x[None, :]) ** 2
    m = float(np.median(d2[np.triu_indices(len(x), k=1)]))
    return 1.0 / (2.0 * max(m, floor_deg2))


@dataclass
class OcsvmModel:
    """Trained verifier: support angles, dual weights, offset, kernel width."""

    support_points: np.ndarray
    alphas: np.ndarray
    rho: float
    gamma: float
    nu: float
    train_size: int
    degenerate_rho: bool = field(default=False, compare=False)

    def decision(self, x):
        """f(x) = sum_i alpha_i K(x_i, x) - rho; accepts scalars or arrays."""
        x = np.asarray(x, dtype=float)
        k = np.exp(-self.gamma * (x[..., None] - self.support_points) ** 2)
        return k @ self.alphas - self.rho

    def decide(self, x: float):
        """(accepted, decision_value); an exact zero is rejected."""
        value = float(self.decision(x))
        return value > 0.0, value

    def save(self, path) -> None:
        with open(path, "w") as f:
            f.write(
                f"{self.gamma!r} {self.rho!r} {self.nu!r} {self.train_size}\n"
            )
            for p, a in zip(self.support_points, self.alphas):
                f.write(f"{float(p)!r} {float(a)!r}\n")

    @classmethod
    def load(cls, path) -> "OcsvmModel":
        with open(path) as f:
            header = f.readline().split()
            gamma, rho, nu = (float(v) for v in header[:3])
            train_size = int(header[3])
            points, alphas = [], []
            for line in f:
                p, a = line.split()
                points.append(float(p))
                alphas.append(float(a))
        return cls(
            np.array(points), np.array(alphas), rho, gamma, nu, train_size
        )


def train(samples, params: OcsvmParams = OcsvmParams()) -> OcsvmModel:
    """Fit the nu-one-class SVM dual by SMO and set rho from margin support
    vectors."""
    x = np.asarray(samples, dtype=float)
    l = len(x)
    if l < 2:
        raise ValueError("need at least 2 training samples")
    if isinstance(params.gamma, str):
        gamma = median_heuristic_gamma(x, params.gamma_floor_deg2)
    else:
        gamma = float(params.gamma)

    k_matrix = kernel(x[:, None], x[None, :], gamma)
    c = 1.0 / (params.nu * l)

    # libsvm-style feasible start: the first floor(nu*l) weights at the box
    # bound, one fractional weight, the rest zero
    alpha = np.zeros(l)
    n_full = int(params.nu * l)
    alpha[:n_full] = c
    if n_full < l:
        alpha[n_full] = 1.0 - n_full * c
    grad = k_matrix @ alpha

    converged = False
    violation = np.inf
    for _ in range(params.max_iters):
        up = alpha < c
        low = alpha > 0.0
        if not up.any():
            # nu = 1: every weight sits at the box bound, nothing to optimize
            converged = True
            violation = 0.0
            break
        i = int(np.flatnonzero(up)[np.argmin(grad[up])])
        j = int(np.flatnonzero(low)[np.argmax(grad[low])])
        violation = grad[j] - grad[i]
        if violation < params.solver_tol:
            converged = True
            break
        quad = k_matrix[i, i] + k_matrix[j, j] - 2.0 * k_matrix[i, j]
        delta = violation / max(quad, 1e-12)
        delta = min(delta, c - alpha[i], alpha[j])
        alpha[i] += delta
        alpha[j] -= delta
        grad += delta * (k_matrix[:, i] - k_matrix[:, j])
    if not converged:
        raise OcsvmConvergenceError(float(violation), params.max_iters)

    # rho: mean gradient over margin SVs; for all-at-bound solutions fall back
    # to the midpoint over support vectors and flag the model
    bound_eps = 1e-9 * c
    margin = (alpha > bound_eps) & (alpha < c - bound_eps)
    degenerate = not np.any(margin)
    if degenerate:
        sv = alpha > bound_eps
        rho = 0.5 * (float(np.min(grad[sv])) + float(np.max(grad[sv])))
    else:
        rho = float(np.mean(grad[margin]))

    keep = alpha > bound_eps
    return OcsvmModel(
        support_points=x[keep].copy(),
        alphas=alpha[keep].copy(),
        rho=rho,
        gamma=gamma,
        nu=params.nu,
        train_size=l,
        degenerate_rho=degenerate,
    )


def dual_objective(alpha: np.ndarray, k_matrix: np.ndarray) -> float:
    """0.5 * a^T Q a, exposed for solver cross-checks."""
    return 0.5 * float(alpha @ k_matrix @ alpha)
