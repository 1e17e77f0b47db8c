"""Critical-parameter localization and bounds on the directed d-ary tree.

The critical parameter q_c of the geometric-lifetime growth process is
the unique root in (0, 1/d) of

    G(q) = sum_{k>=1} c (d q)^k prod_{i=1}^{k-1} (1 - c q^i) = 1.

Two-sided closed-form expressions sandwich d between functions of (c, q);
inverting them numerically sandwiches q_c.  Looser but fully explicit
bounds come from polynomial estimates of sqrt(1 - x).  Coupling maps then
carry these bounds to related spreading models: long-range cone
percolation (c = 1, q = p), the free random-walk model via the branch
visit probability r(p), the self-avoiding variant (c = d/(d+1), q = p/d),
and the single-activation removal variant (c = 1, q = p/(d+1)).
"""

import math
from dataclasses import dataclass
from enum import Enum

from .errors import BracketError, ParameterError

_MAX_BISECT = 200
_SCAN_POINTS = 64
_MAX_SERIES_TERMS = 20_000_000


class Model(Enum):
    CONE_PERCOLATION = "cone"
    ORIGINAL_FROG = "original"
    SELF_AVOIDING_FROG = "selfavoiding"
    REMOVAL = "removal"


@dataclass(frozen=True)
class CriticalResult:
    """Solved q_c together with the four closed-form bounds."""

    d: int
    c: float
    q_c: float
    residual: float
    lower_c2: float
    upper_c2: float
    lower_c3: float
    upper_c3: float | None

    def __post_init__(self):
        if not 0.0 < self.q_c < 1.0 / self.d:
            raise ParameterError(f"q_c must lie in (0, 1/d), got {self.q_c}")
        # Only the lower chain is enforced: it rests on the product
        # majorant prod(1 - c q^i) <= 1 - c q, valid for every c.  The
        # upper estimates rest on the minorant 1 - c q - c q^2, which
        # genuinely fails for c < 1 (e.g. c=1/4, q=1/10, four factors),
        # so for small c and d = 2 the root can exceed upper_c2 slightly.
        if not self.lower_c3 <= self.lower_c2 <= self.q_c:
            raise ParameterError("lower-bound ordering violated in CriticalResult")


@dataclass(frozen=True)
class ModelBounds:
    """Critical-parameter bounds for one of the coupled models."""

    model: Model
    d: int
    lower: float | None
    upper: float

    def __post_init__(self):
        if self.lower is not None and not 0.0 < self.lower <= self.upper:
            raise ParameterError("ModelBounds requires 0 < lower <= upper")
        if not self.upper < 1.0:
            raise ParameterError(f"upper bound must be < 1, got {self.upper}")


def _validate_dc(d: int, c: float) -> None:
    if not isinstance(d, int) or d < 2:
        raise ParameterError(f"d must be an integer >= 2, got {d}")
    if not 0.0 < c <= 1.0:
        raise ParameterError(f"c must be in (0, 1], got {c}")


def survival_series(d: int, c: float, q: float, tol: float = 1e-12) -> float:
    """G(q) = sum_{k>=1} c (d q)^k prod_{i=1}^{k-1}(1 - c q^i), error < tol.

    Terms are dominated by c (d q)^k, so the tail after K terms is at
    most c (d q)^{K+1} / (1 - d q); requires d*q < 1.
    """
    _validate_dc(d, c)
    if not 0.0 < q < 1.0:
        raise ParameterError(f"q must be in (0, 1), got {q}")
    if tol <= 0.0:
        raise ParameterError(f"tol must be > 0, got {tol}")
    dq = d * q
    if dq >= 1.0:
        raise ParameterError(f"series diverges for d*q >= 1, got d*q = {dq}")
    total = 0.0
    surv = 1.0
    scale = c * dq
    k = 1
    while True:
        total += scale * surv
        if scale * dq / (1.0 - dq) <= tol:
            return total
        surv *= 1.0 - c * q**k
        scale *= dq
        k += 1
        if k > _MAX_SERIES_TERMS:
            raise ParameterError(f"q too close to 1/d for tol={tol}")


def _series_exceeds_one(d: int, c: float, q: float) -> bool:
    # sign of G(q) - 1 with early exit; partial sums are increasing
    dq = d * q
    total = 0.0
    surv = 1.0
    scale = c * dq
    k = 1
    while True:
        total += scale * surv
        if total > 1.0:
            return True
        tail = scale * dq / (1.0 - dq)
        if total + tail <= 1.0 or tail < 1e-15:
            return total > 1.0
        surv *= 1.0 - c * q**k
        scale *= dq
        k += 1


def solve_qc(d: int, c: float, tol: float = 1e-12) -> CriticalResult:
    """Solve G(q_c) = 1 on (0, 1/d) by scan-bracketed bisection.

    The root is unique by the monotone structure of the model; as a
    defense, an initial 64-point scan raises if it sees more than one
    sign change.  The returned residual is |G(q_c) - 1| evaluated with a
    tighter series tolerance than the solve itself.
    """
    _validate_dc(d, c)
    if tol <= 0.0:
        raise ParameterError(f"tol must be > 0, got {tol}")
    edge = 1.0 / d
    grid = [edge * j / (_SCAN_POINTS + 1) for j in range(1, _SCAN_POINTS + 1)]
    signs = [_series_exceeds_one(d, c, q) for q in grid]
    changes = [j for j in range(1, len(signs)) if signs[j] != signs[j - 1]]
    if signs[0]:
        raise BracketError("G already exceeds 1 at the smallest scan point")
    if len(changes) > 1:
        raise BracketError(
            f"{len(changes)} sign changes of G - 1 detected on (0, 1/d); "
            "expected a unique crossing"
        )
    if changes:
        lo, hi = grid[changes[0] - 1], grid[changes[0]]
    elif not signs[-1] and _series_exceeds_one(d, c, edge * (1.0 - 1e-9)):
        lo, hi = grid[-1], edge * (1.0 - 1e-9)
    else:
        raise BracketError("no sign change of G - 1 found on (0, 1/d)")
    series_tol = max(1e-15, tol * 1e-2)
    for _ in range(_MAX_BISECT):
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        if _series_exceeds_one(d, c, mid):
            hi = mid
        else:
            lo = mid
        if hi - lo <= tol and abs(survival_series(d, c, 0.5 * (lo + hi), series_tol) - 1.0) <= tol:
            break
    q_c = 0.5 * (lo + hi)
    residual = abs(survival_series(d, c, q_c, series_tol) - 1.0)
    q_lower, q_upper = invert_bounds_c2(d, c, tol)
    lower_c3, upper_c3 = explicit_bounds_c3(d, c)
    return CriticalResult(
        d=d,
        c=c,
        q_c=q_c,
        residual=residual,
        lower_c2=q_lower,
        upper_c2=q_upper,
        lower_c3=lower_c3,
        upper_c3=upper_c3,
    )


def _lower_d_expr(c: float, q: float) -> float:
    # lower bound on d as a function of (c, q); decreasing in q.
    # (c+1)(1 - sqrt(1-y))/(2 q^2 c^2) with y = 4 q c^2/(c+1)^2,
    # rationalized to 2/((c+1) q (1 + sqrt(1-y))) to avoid cancellation
    disc = 1.0 - 4.0 * q * c * c / (c + 1.0) ** 2
    if disc < 0.0:
        raise ParameterError(f"discriminant negative at q={q} (q too large for c={c})")
    return 2.0 / ((c + 1.0) * q * (1.0 + math.sqrt(disc)))


def _upper_d_expr(c: float, q: float) -> float:
    # upper bound on d as a function of (c, q); decreasing in q.
    # same rationalized shape with y = 4 c^2 q(q+1)/(c+1)^2
    disc = 1.0 - 4.0 * c * c / (c + 1.0) ** 2 * q * (q + 1.0)
    if disc < 0.0:
        raise ParameterError(f"discriminant negative at q={q} (q too large for c={c})")
    return 2.0 / ((c + 1.0) * q * (1.0 + math.sqrt(disc)))


def bounds_on_d(c: float, q: float) -> tuple[float, float]:
    """Closed-form sandwich lower_d <= d <= upper_d at parameters (c, q).

    Both expressions come from bounding the product in G(q) between
    1 - c q - c q^2 and 1 - c q and summing the resulting geometric
    series.  Domain error when a discriminant turns negative.
    """
    if not 0.0 < c <= 1.0:
        raise ParameterError(f"c must be in (0, 1], got {c}")
    if not 0.0 < q < 1.0:
        raise ParameterError(f"q must be in (0, 1), got {q}")
    return _lower_d_expr(c, q), _upper_d_expr(c, q)


def _invert_decreasing(expr, d: int, c: float, q_max: float, tol: float) -> float:
    # root of expr(c, q) = d on (0, q_max]; expr decreases from ~1/((c+1)q)
    lo = 1e-12
    hi = q_max
    if not expr(c, lo) > d:
        raise BracketError(
            f"no crossing: expression is already below d={d} at q={lo}"
        )
    if not expr(c, hi) < d:
        raise BracketError(
            f"no crossing: expression stays above d={d} on the valid q-interval"
        )
    for _ in range(_MAX_BISECT):
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        if expr(c, mid) > d:
            lo = mid
        else:
            hi = mid
        if hi - lo <= tol:
            break
    return 0.5 * (lo + hi)


def invert_bounds_c2(d: int, c: float, tol: float = 1e-12) -> tuple[float, float]:
    """Numerically invert the two-sided d-sandwich to bracket q_c.

    q_lower is the root of the lower-d expression = d and q_upper the
    root of the upper-d expression = d; both expressions decrease from
    +inf on their valid q-interval, so each crossing is monotone and is
    verified by endpoint signs.

    q_lower <= q_c always holds.  q_upper rests on the product minorant
    1 - c q - c q^2, which fails for c < 1, so at small c (worst at
    d = 2) the root can exceed q_upper by up to a few 1e-4; at c = 1 the
    bracket is exact.
    """
    _validate_dc(d, c)
    if tol <= 0.0:
        raise ParameterError(f"tol must be > 0, got {tol}")
    eps = 1e-12
    # discriminant-valid endpoints, clipped into (0, 1)
    edge_lower = min((c + 1.0) ** 2 / (4.0 * c * c), 1.0) - eps
    m = (c + 1.0) ** 2 / (4.0 * c * c)
    edge_upper = min((-1.0 + math.sqrt(1.0 + 4.0 * m)) / 2.0, 1.0) - eps
    q_lower = _invert_decreasing(_lower_d_expr, d, c, edge_lower, tol)
    q_upper = _invert_decreasing(_upper_d_expr, d, c, edge_upper, tol)
    return q_lower, q_upper


def explicit_bounds_c3(d: int, c: float) -> tuple[float, float | None]:
    """Fully explicit bounds on q_c from polynomial sqrt(1-x) estimates.

    lower = 1 / (d(c+1) - (c/(c+1))^2) holds for every d >= 2; the upper
    bound, the smaller root of 8 c^2 q^2 - F q + 7 (c+1)^2 with
    F = 7 d (c+1)^3 - 8 c^2, requires d >= 3 and is None for d = 2.
    """
    _validate_dc(d, c)
    lower = 1.0 / (d * (c + 1.0) - (c / (c + 1.0)) ** 2)
    if d == 2:
        return lower, None
    F = 7.0 * d * (c + 1.0) ** 3 - 8.0 * c * c
    # smaller root (F - sqrt(F^2 - 224 c^2 (c+1)^2))/(16 c^2), rationalized
    gap = 224.0 * c * c * (c + 1.0) ** 2
    upper = 14.0 * (c + 1.0) ** 2 / (F + math.sqrt(F * F - gap))
    return lower, upper


def cone_percolation_bounds(d: int) -> ModelBounds:
    """Bounds for long-range percolation with geometric radii (c=1, q=p)."""
    _validate_dc(d, 1.0)
    lower = explicit_bounds_c3(d, 1.0)[0]
    if d == 2:
        upper = invert_bounds_c2(2, 1.0)[1]
    else:
        # a (1 - sqrt(1 - 14/a^2))/2 rationalized to 7/(a + sqrt(a^2 - 14))
        a = 7.0 * d - 1.0
        upper = 7.0 / (a + math.sqrt(a * a - 14.0))
    return ModelBounds(model=Model.CONE_PERCOLATION, d=d, lower=lower, upper=upper)


def r_of_p(d: int, p: float) -> float:
    """Per-edge branch visit probability r for walk parameter p.

    r is the minus root of d p r^2 - (d+1) r + p = 0, the probability
    that the walk started at a vertex ever visits a fixed vertex at
    distance 1 below it; visits at distance n have probability r^n.
    Strictly increasing in p.
    """
    if not isinstance(d, int) or d < 2:
        raise ParameterError(f"d must be an integer >= 2, got {d}")
    if not 0.0 < p < 1.0:
        raise ParameterError(f"p must be in (0, 1), got {p}")
    dp1 = d + 1.0
    # minus root, rationalized: 2p / (d+1 + sqrt((d+1)^2 - 4 d p^2))
    return 2.0 * p / (dp1 + math.sqrt(dp1 * dp1 - 4.0 * d * p * p))


def p_of_r(d: int, r: float) -> float:
    """Inverse of r_of_p: p = (d+1) r / (1 + d r^2).

    Range error when the computed p reaches 1, which happens for
    r in (1/d, 1) outside the image of r_of_p.
    """
    if not isinstance(d, int) or d < 2:
        raise ParameterError(f"d must be an integer >= 2, got {d}")
    if not 0.0 < r < 1.0:
        raise ParameterError(f"r must be in (0, 1), got {r}")
    p = (d + 1.0) * r / (1.0 + d * r * r)
    if p >= 1.0:
        raise ParameterError(f"computed p = {p} >= 1: r outside the invertible range")
    return p


def original_frog_upper(d: int) -> ModelBounds:
    """Upper bound for the free random-walk model on the undirected tree.

    The coupling uses c = 1 and q = r(p): d = 2 routes through the
    numerical inversion, d >= 3 through the closed form, which is the
    image of the explicit q_c upper bound under p_of_r.
    """
    _validate_dc(d, 1.0)
    if d == 2:
        upper = p_of_r(2, invert_bounds_c2(2, 1.0)[1])
    else:
        # (d+1)(a - s) / (d a^2 - 7d + 2 - d a s) with s = sqrt(a^2 - 14);
        # both a - s terms evaluated as 14/(a + s) to avoid cancellation
        a = 7.0 * d - 1.0
        s = math.sqrt(a * a - 14.0)
        a_minus_s = 14.0 / (a + s)
        upper = (d + 1.0) * a_minus_s / (d * a * a_minus_s - 7.0 * d + 2.0)
    return ModelBounds(model=Model.ORIGINAL_FROG, d=d, lower=None, upper=upper)


def self_avoiding_upper(d: int) -> ModelBounds:
    """Upper bound for the self-avoiding variant via c = d/(d+1), q = p/d."""
    _validate_dc(d, 1.0)
    c = d / (d + 1.0)
    if d == 2:
        upper = 2.0 * invert_bounds_c2(2, c)[1]
    else:
        upper = d * explicit_bounds_c3(d, c)[1]
    return ModelBounds(model=Model.SELF_AVOIDING_FROG, d=d, lower=None, upper=upper)


def removal_bounds(d: int) -> ModelBounds:
    """Bounds for the single-activation removal variant: c = 1, q = p/(d+1)."""
    cone = cone_percolation_bounds(d)
    lower = (d + 1.0) * cone.lower
    upper = (d + 1.0) * cone.upper
    if upper >= 1.0:
        raise ParameterError(f"scaled upper bound {upper} >= 1 is outside (0, 1)")
    return ModelBounds(model=Model.REMOVAL, d=d, lower=lower, upper=upper)


def literature_cone_bounds(d: int) -> tuple[float, float]:
    """Previously known cone-percolation bounds 1/(2d) and 1 - sqrt(1 - 1/d)."""
    _validate_dc(d, 1.0)
    return 1.0 / (2.0 * d), 1.0 - math.sqrt(1.0 - 1.0 / d)


def literature_original_upper(d: int) -> float:
    """Previously known free-walk upper bound (d+1)/(2d)."""
    _validate_dc(d, 1.0)
    return (d + 1.0) / (2.0 * d)


def literature_self_avoiding_upper(d: int) -> float:
    """Previously known self-avoiding upper bound (2d+1 - sqrt(4d^2-3))/2."""
    _validate_dc(d, 1.0)
    return (2.0 * d + 1.0 - math.sqrt(4.0 * d * d - 3.0)) / 2.0


@dataclass(frozen=True)
class ConeTableRow:
    """One row of the cone-percolation bound table (c = 1)."""

    d: int
    lower_c2: float
    lower_explicit: float
    lower_known: float
    upper_c2: float
    upper_explicit: float
    upper_known: float


@dataclass(frozen=True)
class FrogTableRow:
    """One row of the upper-bound table for the two walk models."""

    d: int
    original_c2: float
    original_explicit: float
    original_known: float
    self_avoiding_c2: float
    self_avoiding_explicit: float
    self_avoiding_known: float


def cone_table_row(d: int) -> ConeTableRow:
    q_lower, q_upper = invert_bounds_c2(d, 1.0)
    cone = cone_percolation_bounds(d)
    known_lower, known_upper = literature_cone_bounds(d)
    return ConeTableRow(
        d=d,
        lower_c2=q_lower,
        lower_explicit=cone.lower,
        lower_known=known_lower,
        upper_c2=q_upper,
        upper_explicit=cone.upper,
        upper_known=known_upper,
    )


def frog_table_row(d: int) -> FrogTableRow:
    q_upper = invert_bounds_c2(d, 1.0)[1]
    c_sa = d / (d + 1.0)
    return FrogTableRow(
        d=d,
        original_c2=p_of_r(d, q_upper),
        original_explicit=original_frog_upper(d).upper,
        original_known=literature_original_upper(d),
        self_avoiding_c2=d * invert_bounds_c2(d, c_sa)[1],
        self_avoiding_explicit=self_avoiding_upper(d).upper,
        self_avoiding_known=literature_self_avoiding_upper(d),
    )


def table_cone(d_list) -> list[ConeTableRow]:
    """Cone-percolation bound table, one row per requested degree."""
    ds = list(d_list)
    if not ds:
        raise ParameterError("d_list must not be empty")
    return [cone_table_row(d) for d in ds]


def table_frogs(d_list) -> list[FrogTableRow]:
    """Walk-model upper-bound table, one row per requested degree."""
    ds = list(d_list)
    if not ds:
        raise ParameterError("d_list must not be empty")
    return [frog_table_row(d) for d in ds]
