"""Binary logistic regression by Newton / iteratively reweighted least squares.

The caller supplies the design matrix including its intercept column. The fit
is an unpenalized maximum-likelihood fit, so on a saturated design it must
reproduce closed-form log-odds exactly (up to the 1e-8 score tolerance).
Standard errors come from the inverse observed information at the optimum and
confidence intervals are Wald intervals, beta +/- 1.96 * SE.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

_SEPARATION_BOUND = 100.0  # |log-odds| this large means probabilities are 1 to ~4e-44


def sigmoid(z: np.ndarray) -> np.ndarray:
    """Numerically stable logistic function."""
    out = np.empty_like(z, dtype=float)
    pos = z >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-z[pos]))
    expz = np.exp(z[~pos])
    out[~pos] = expz / (1.0 + expz)
    return out


def log_likelihood(X: np.ndarray, y: np.ndarray, beta: np.ndarray) -> float:
    """Bernoulli log-likelihood at ``beta`` (used by gradient checks too)."""
    X = np.asarray(X, dtype=float)
    y = np.asarray(y, dtype=float)
    p = np.clip(sigmoid(X @ np.asarray(beta, dtype=float)), 1e-300, 1.0 - 1e-16)
    return float(np.sum(y * np.log(p) + (1.0 - y) * np.log1p(-p)))


@dataclass
class RegressionFit:
    names: list[str]
    beta: list[float]
    se: list[float]
    ci_low: list[float]
    ci_high: list[float]
    converged: bool
    iterations: int
    log_likelihood: float
    warning: str | None = None

    def coefficient(self, name: str) -> float:
        return self.beta[self.names.index(name)]

    def to_dict(self) -> dict:
        return {
            "names": list(self.names),
            "beta": list(self.beta),
            "se": list(self.se),
            "ci_low": list(self.ci_low),
            "ci_high": list(self.ci_high),
            "converged": self.converged,
            "iterations": self.iterations,
            "log_likelihood": self.log_likelihood,
            "warning": self.warning,
        }


def collinear_columns(X, names: list[str]) -> list[str]:
    """Columns that add no rank when appended left to right."""
    X = np.asarray(X, dtype=float)
    bad = []
    rank = 0
    for j in range(X.shape[1]):
        new_rank = np.linalg.matrix_rank(X[:, : j + 1])
        if new_rank == rank:
            bad.append(names[j])
        rank = new_rank
    return bad


def logistic_fit(
    X,
    y,
    names: list[str] | None = None,
    max_iter: int = 100,
    tol: float = 1e-8,
) -> RegressionFit:
    """Maximum-likelihood logistic regression.

    Converged means the score (log-likelihood gradient) has max-norm below
    ``tol``. Perfect separation is reported via ``converged=False`` plus a
    warning once coefficients run away; a rank-deficient design raises a
    ValueError naming the collinear columns.
    """
    X = np.asarray(X, dtype=float)
    y = np.asarray(y, dtype=float)
    if X.ndim != 2:
        raise ValueError("X must be a 2-d design matrix")
    n, k = X.shape
    if len(y) != n:
        raise ValueError(f"X has {n} rows but y has {len(y)} entries")
    if n < k + 1:
        raise ValueError(f"need at least {k + 1} observations for {k} columns, got {n}")
    if not np.all(np.isin(y, (0.0, 1.0))):
        raise ValueError("y must be binary (0/1)")
    if y.min() == y.max():
        raise ValueError("y is constant; the model is not identifiable")
    if names is None:
        names = [f"x{j}" for j in range(k)]
    if len(names) != k:
        raise ValueError(f"got {len(names)} names for {k} columns")
    if np.linalg.matrix_rank(X) < k:
        raise ValueError(f"design matrix is singular; collinear columns: {collinear_columns(X, names)}")

    beta = np.zeros(k)
    converged = False
    warning = None
    iterations = 0
    for iterations in range(1, max_iter + 1):
        p = sigmoid(X @ beta)
        score = X.T @ (y - p)
        if np.max(np.abs(score)) < tol:
            converged = True
            break
        w = np.clip(p * (1.0 - p), 1e-12, None)
        hessian = (X * w[:, None]).T @ X
        try:
            step = np.linalg.solve(hessian, score)
        except np.linalg.LinAlgError:
            raise ValueError(
                f"information matrix is singular; collinear columns: {collinear_columns(X, names)}"
            ) from None
        beta = beta + step
        if np.max(np.abs(beta)) > _SEPARATION_BOUND:
            warning = "coefficients diverging; data are likely perfectly separated"
            break

    if not converged and warning is None:
        warning = f"did not converge within {max_iter} iterations"

    p = sigmoid(X @ beta)
    w = np.clip(p * (1.0 - p), 1e-12, None)
    hessian = (X * w[:, None]).T @ X
    try:
        covariance = np.linalg.inv(hessian)
    except np.linalg.LinAlgError:
        raise ValueError(
            f"information matrix is singular; collinear columns: {collinear_columns(X, names)}"
        ) from None
    se = np.sqrt(np.clip(np.diag(covariance), 0.0, None))

    return RegressionFit(
        names=list(names),
        beta=beta.tolist(),
        se=se.tolist(),
        ci_low=(beta - 1.96 * se).tolist(),
        ci_high=(beta + 1.96 * se).tolist(),
        converged=converged,
        iterations=iterations,
        log_likelihood=log_likelihood(X, y, beta),
        warning=warning,
    )
