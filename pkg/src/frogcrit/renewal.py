"""Undelayed renewal sequence of the geometric-hazard gap law.

Y_0 = 1 and Y_n = 1 iff some partial sum of i.i.d. gaps equals n.  The
exact probabilities u_n = P(Y_n = 1) follow the convolution recursion
u_n = sum_{k=1}^{n} f_k u_{n-k}.  Because the gap law is defective, u_n
decays like gamma^{-n} where the decay rate gamma in (1, 1/q) is the
unique root of the gap generating function F(alpha) = sum alpha^k f_k = 1.

The scaled sequence d^n u_n separates growth regimes on the d-ary tree:
it diverges when d exceeds gamma and vanishes when d is below it.
"""

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .distributions import HazardSpec, pmf_sequence
from .errors import BracketError, ParameterError

_MAX_BISECT = 200
# finite-horizon surrogate for "eventually decreasing": the trailing
# quarter must decrease with ratio at least this far below 1
_RATIO_MARGIN = 1e-6
_MAX_SERIES_TERMS = 20_000_000


class Growth(Enum):
    SUBCRITICAL = "subcritical"
    SUPERCRITICAL = "supercritical"
    INDETERMINATE = "indeterminate"


@dataclass(frozen=True)
class RenewalProbs:
    """Exact renewal probabilities u_0..u_N for one hazard law."""

    values: np.ndarray
    spec: HazardSpec

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=np.float64)
        vals.setflags(write=False)
        object.__setattr__(self, "values", vals)

    @property
    def horizon(self) -> int:
        return len(self.values) - 1


@dataclass(frozen=True)
class RateResult:
    """Solved decay rate gamma with solver diagnostics."""

    gamma: float
    residual: float
    bracket: tuple[float, float]
    truncation_K: int


def renewal_probabilities(spec: HazardSpec, N: int) -> RenewalProbs:
    """u_0..u_N via the convolution recursion u_n = sum f_k u_{n-k}."""
    if N < 0:
        raise ParameterError(f"N must be >= 0, got {N}")
    f = pmf_sequence(spec, N)
    u = np.zeros(N + 1)
    u[0] = 1.0
    for n in range(1, N + 1):
        u[n] = f[1 : n + 1] @ u[n - 1 :: -1]
    return RenewalProbs(values=u, spec=spec)


def _series_terms_needed(c: float, aq: float, tol: float) -> int:
    # smallest K with c * aq^(K+1) / (1 - aq) <= tol
    target = tol * (1.0 - aq) / c
    if target >= aq:
        return 1
    return max(1, math.ceil(math.log(target) / math.log(aq)) - 1)


def generating_function(spec: HazardSpec, alpha: float, tol: float = 1e-12) -> float:
    """F(alpha) = sum_{k>=1} alpha^k f_k with truncation error below tol.

    The tail after K terms is bounded by c (alpha q)^{K+1} / (1 - alpha q).
    Diverges when alpha*q >= 1, which is rejected as a domain error.
    """
    value, _ = _generating_function(spec, alpha, tol)
    return value


def _generating_function(spec: HazardSpec, alpha: float, tol: float) -> tuple[float, int]:
    if alpha < 1.0:
        raise ParameterError(f"alpha must be >= 1, got {alpha}")
    if tol <= 0.0:
        raise ParameterError(f"tol must be > 0, got {tol}")
    c, q = spec.c, spec.q
    aq = alpha * q
    if aq >= 1.0:
        raise ParameterError(
            f"alpha*q must be < 1 (series diverges), got {aq}"
        )
    if _series_terms_needed(c, aq, tol) > _MAX_SERIES_TERMS:
        raise ParameterError(
            f"alpha={alpha} is too close to 1/q for tol={tol}"
        )
    total = 0.0
    surv = 1.0
    scale = c * aq  # c * (alpha q)^k
    k = 1
    while True:
        total += scale * surv
        if scale * aq / (1.0 - aq) <= tol:
            return total, k
        surv *= 1.0 - c * q**k
        scale *= aq
        k += 1


def _series_exceeds_one(spec: HazardSpec, alpha: float) -> bool:
    """Sign of F(alpha) - 1 by early-exit partial sums.

    Partial sums are increasing, so the answer is certain as soon as the
    running sum exceeds 1 or the sum plus its tail bound stays at or
    below 1.
    """
    c, q = spec.c, spec.q
    aq = alpha * q
    total = 0.0
    surv = 1.0
    scale = c * aq
    k = 1
    while True:
        total += scale * surv
        if total > 1.0:
            return True
        tail = scale * aq / (1.0 - aq)
        if total + tail <= 1.0 or tail < 1e-15:
            return total > 1.0
        surv *= 1.0 - c * q**k
        scale *= aq
        k += 1


def convergence_rate(spec: HazardSpec, tol: float = 1e-12) -> RateResult:
    """Unique alpha in (1, 1/q) with F(alpha) = 1, by bracketed bisection.

    F(1) = P(T < inf) < 1 because the gap law is defective, and F blows
    up at the radius of convergence 1/q, so a root always exists; F is
    strictly increasing, so it is unique.
    """
    if tol <= 0.0:
        raise ParameterError(f"tol must be > 0, got {tol}")
    lo = 1.0 + 1e-12
    hi = 1.0 / spec.q - 1e-12
    if lo * spec.q >= 1.0 or hi <= lo:
        raise ParameterError(f"q = {spec.q} leaves no room for a rate in (1, 1/q)")
    if _series_exceeds_one(spec, lo):
        raise BracketError(
            "F(1) >= 1: the gap law is not defective enough to bracket a root"
        )
    if not _series_exceeds_one(spec, hi):
        raise BracketError("F stays below 1 up to the radius of convergence")
    for _ in range(_MAX_BISECT):
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        if _series_exceeds_one(spec, mid):
            hi = mid
        else:
            lo = mid
    gamma = 0.5 * (lo + hi)
    value, K = _generating_function(spec, gamma, min(tol * 1e-2, 1e-13))
    return RateResult(
        gamma=gamma, residual=abs(value - 1.0), bracket=(lo, hi), truncation_K=K
    )


def growth_sequence(d: int, spec: HazardSpec, N: int) -> np.ndarray:
    """Scaled renewal probabilities v_n = d^n u_n for n = 0..N.

    Computed by running the convolution recursion directly on the tilted
    gaps g_k = d^k f_k = c (d q)^k prod_{i<k}(1 - c q^i), which avoids
    the underflow of u_n at long horizons.
    """
    if not isinstance(d, int) or d < 2:
        raise ParameterError(f"d must be an integer >= 2, got {d}")
    if N < 0:
        raise ParameterError(f"N must be >= 0, got {N}")
    c, q = spec.c, spec.q
    g = np.zeros(N + 1)
    scale = 1.0
    surv = 1.0
    for k in range(1, N + 1):
        scale *= d * q
        g[k] = c * scale * surv
        surv *= 1.0 - c * q**k
    v = np.zeros(N + 1)
    v[0] = 1.0
    for n in range(1, N + 1):
        v[n] = g[1 : n + 1] @ v[n - 1 :: -1]
    return v


def growth_classifier(d: int, spec: HazardSpec, N: int) -> Growth:
    """Classify the growth of d^n u_n over the horizon n <= N.

    Supercritical as soon as some d^n u_n exceeds 1.  Subcritical when
    the trailing quarter of the horizon is strictly decreasing below 1
    with ratio bounded away from 1.  Indeterminate otherwise (the
    near-critical regime at finite horizon).
    """
    if N < 1:
        raise ParameterError(f"N must be >= 1, got {N}")
    v = growth_sequence(d, spec, N)
    if np.any(v[1:] > 1.0):
        return Growth.SUPERCRITICAL
    window = max(2, N // 4)
    tail = v[N - window :]
    decreasing = np.all(tail[1:] <= (1.0 - _RATIO_MARGIN) * tail[:-1])
    if np.all(tail < 1.0) and decreasing:
        return Growth.SUBCRITICAL
    return Growth.INDETERMINATE
