"""
Closed-form calculators for the sharp-regularity exponents and thresholds:
the dimension threshold m, the series exponents alpha_j, the necessary-range
and positive-range limits, and the gain ceiling alpha0.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field


class OutOfRange(ValueError):
    """beta below the convergence threshold for alpha_j."""


def m_threshold(n: int) -> float:
    """m = (n-4)/2 + 2/(n+1)."""
    if n < 2:
        raise ValueError(f"n must be >= 2, got {n}")
    return (n - 4) / 2.0 + 2.0 / (n + 1)


def alpha_j(n: int, beta: float, j: int) -> float:
    """alpha_j = beta - 1/2 + (j-1) - (j-1)(n-1)/2 max(0, 1/2 - beta/n)."""
    if j < 2:
        raise ValueError(f"j must be >= 2, got {j}")
    threshold = max(0.0, m_threshold(n))
    if beta < threshold:
        raise OutOfRange(
            f"beta = {beta} below max(0, m) = {threshold}: convergence not asserted"
        )
    return beta - 0.5 + (j - 1) - (j - 1) * (n - 1) / 2.0 * max(0.0, 0.5 - beta / n)


def alpha0(n: int, beta: float) -> float:
    """Gain ceiling min(beta + 1, 2 beta - (n-4)/2)."""
    return min(beta + 1.0, 2.0 * beta - (n - 4) / 2.0)


def thm11_max(n: int, beta: float) -> float | None:
    """Necessary upper limit on alpha for q - q_theta regularity:
    2 beta - (n-4)/2 on m <= beta < (n-2)/2, beta + 1 on beta >= (n-2)/2."""
    if beta >= (n - 2) / 2.0:
        return beta + 1.0
    if beta >= m_threshold(n):
        return 2.0 * beta - (n - 4) / 2.0
    return None


def thm13_sup(n: int, beta: float) -> float | None:
    """Supremum of the positive range: 2 beta - (n-3)/2 on
    (n-3)/2 < beta < (n-1)/2, beta + 1 on beta >= (n-1)/2."""
    if beta >= (n - 1) / 2.0:
        return beta + 1.0
    if beta > (n - 3) / 2.0:
        return 2.0 * beta - (n - 3) / 2.0
    return None


@dataclass
class BoundReport:
    n: int
    beta: float
    m: float
    alpha_j: dict = field(default_factory=dict)
    thm11_max: float | None = None
    thm13_sup: float | None = None
    alpha0: float = 0.0

    def to_json(self) -> str:
        payload = {
            "n": self.n,
            "beta": self.beta,
            "m": self.m,
            "alpha_j": {str(k): v for k, v in self.alpha_j.items()},
            "thm11_max": self.thm11_max,
            "thm13_sup": self.thm13_sup,
            "alpha0": self.alpha0,
        }
        return json.dumps(payload, indent=2, sort_keys=True)


def thm_limits(n: int, beta: float, j_max: int = 4) -> BoundReport:
    if n < 2 or beta < 0:
        raise ValueError("need n >= 2 and beta >= 0")
    alphas = {}
    for j in range(2, j_max + 1):
        try:
            alphas[j] = alpha_j(n, beta, j)
        except OutOfRange:
            alphas[j] = None
    return BoundReport(
        n=n,
        beta=beta,
        m=m_threshold(n),
        alpha_j=alphas,
        thm11_max=thm11_max(n, beta),
        thm13_sup=thm13_sup(n, beta),
        alpha0=alpha0(n, beta),
    )
