"""Acceptance suite: every exit criterion at its stated tolerance.

One test per criterion, each printing a PASS/FAIL line (use ``pytest -s``
to see the lines for passing runs).

Known red: criterion 8a asserts the two-sided product sandwich
1 - cq - cq^2 <= prod_{i<n}(1 - c q^i) <= 1 - cq over random (c, q, n).
The lower half is a false statement for c < 1 (exact counterexample:
c = 1/4, q = 1/10, n = 4 gives (39/40)(399/400)(3999/4000) = 0.97231936
< 0.9725 = 1 - cq - cq^2; it holds only at c = 1, where the product
expands with pentagonal-number signs).  The criterion is kept as stated
and fails honestly; see tests/test_critical.py for the corrected
per-regime property tests.
"""

import math
import time

import numpy as np

from frogcrit import (
    HazardSpec,
    TreeParams,
    convergence_rate,
    cone_percolation_bounds,
    defect_mass,
    growth_sequence,
    interarrival_pmf,
    interarrival_survival,
    literature_cone_bounds,
    literature_original_upper,
    literature_self_avoiding_upper,
    original_frog_upper,
    renewal_probabilities,
    self_avoiding_upper,
    simulate_firework,
    simulate_frog,
    solve_qc,
    survival_series,
    table_cone,
    table_frogs,
)
from frogcrit.simulator import FrogSimConfig

from reference_tables import TABLE_CONE, TABLE_DEGREES, TABLE_FROGS

QC_DEGREES = [2, 3, 4, 5, 6, 7, 8, 9, 10, 15, 20, 30, 50, 100]
SCALES = (0.25, 0.5, 1.0)


def _report(name: str, ok: bool, detail: str) -> None:
    print(f"ACCEPTANCE {name}: {'PASS' if ok else 'FAIL'} ({detail})")
    assert ok, f"{name}: {detail}"


def test_criterion_1_cone_table_reproduction():
    """14 rows x 6 columns within 1.5e-6 absolute, under 2 s."""
    start = time.perf_counter()
    rows = table_cone(TABLE_DEGREES)
    elapsed = time.perf_counter() - start
    worst = 0.0
    for row in rows:
        got = (row.lower_c2, row.lower_explicit, row.lower_known,
               row.upper_c2, row.upper_explicit, row.upper_known)
        worst = max(worst, max(abs(g - w) for g, w in zip(got, TABLE_CONE[row.d])))
    _report(
        "1 cone table", worst <= 1.5e-6 and elapsed < 2.0,
        f"max |err| = {worst:.2e}, {elapsed:.2f} s",
    )


def test_criterion_2_walk_models_table_reproduction():
    """14 rows x 6 columns within 2e-6 absolute, under 2 s."""
    start = time.perf_counter()
    rows = table_frogs(TABLE_DEGREES)
    elapsed = time.perf_counter() - start
    worst = 0.0
    for row in rows:
        got = (row.original_c2, row.original_explicit, row.original_known,
               row.self_avoiding_c2, row.self_avoiding_explicit,
               row.self_avoiding_known)
        worst = max(worst, max(abs(g - w) for g, w in zip(got, TABLE_FROGS[row.d])))
    _report(
        "2 walk-model table", worst <= 2e-6 and elapsed < 2.0,
        f"max |err| = {worst:.2e}, {elapsed:.2f} s",
    )


def test_criterion_3_fixed_point_residual():
    """|G(q_c) - 1| < 1e-10 across the degree/scale grid."""
    worst = 0.0
    for d in QC_DEGREES:
        for c in SCALES:
            q_c = solve_qc(d, c).q_c
            worst = max(worst, abs(survival_series(d, c, q_c, 1e-13) - 1.0))
    _report("3 fixed-point residual", worst < 1e-10, f"max residual = {worst:.2e}")


def test_criterion_4_rate_identity():
    """Decay rate at (c, q_c(d, c)) equals d within 1e-6, d = 2..10."""
    worst = 0.0
    for d in range(2, 11):
        for c in SCALES:
            q_c = solve_qc(d, c).q_c
            gamma = convergence_rate(HazardSpec(c, q_c)).gamma
            worst = max(worst, abs(gamma - d))
    _report("4 rate identity", worst < 1e-6, f"max |gamma - d| = {worst:.2e}")


def test_criterion_5_bound_ordering_and_improvements():
    """Ordering chain on d in 3..100; strict improvements on d in 2..100."""
    ordered = True
    worst_margin = math.inf
    for d in range(3, 101):
        for c in (0.25, 0.5, 0.75, 1.0):
            r = solve_qc(d, c)
            margin = min(
                r.lower_c2 - r.lower_c3,
                r.q_c - r.lower_c2,
                r.upper_c2 - r.q_c,
                r.upper_c3 - r.upper_c2,
            )
            worst_margin = min(worst_margin, margin)
            ordered = ordered and margin >= 0.0
    improves = True
    for d in range(2, 101):
        known_lo, known_hi = literature_cone_bounds(d)
        cone = cone_percolation_bounds(d)
        improves = improves and known_lo < cone.lower and cone.upper < known_hi
        improves = improves and original_frog_upper(d).upper < literature_original_upper(d)
        improves = improves and self_avoiding_upper(d).upper < literature_self_avoiding_upper(d)
    _report(
        "5 bound ordering", ordered and improves,
        f"ordered={ordered} (worst margin {worst_margin:.1e}), improvements={improves}",
    )


def _firework_cell_ok(c: float, q: float, seed: int, replicates: int) -> bool:
    spec = HazardSpec(c, q)
    outcome = simulate_firework(spec, 20, replicates, seed)
    u = renewal_probabilities(spec, 20).values
    for n in range(1, 21):
        p_hat = outcome.branch_hits[n] / replicates
        se = math.sqrt(u[n] * (1.0 - u[n]) / replicates)
        if abs(p_hat - u[n]) > 4.0 * se:
            return False
    return True


def test_criterion_6_firework_renewal_equivalence():
    """MC estimates within 4 binomial SE of the exact recursion, < 30 s.

    At most one grid cell may fail at 4 sigma; it must pass on a rerun
    with a fresh seed.
    """
    replicates = 100_000
    start = time.perf_counter()
    failed = [
        (c, q)
        for c in (0.5, 1.0)
        for q in (0.1, 0.25, 0.27)
        if not _firework_cell_ok(c, q, seed=600, replicates=replicates)
    ]
    rerun_ok = all(
        _firework_cell_ok(c, q, seed=601, replicates=replicates) for c, q in failed
    )
    elapsed = time.perf_counter() - start
    ok = len(failed) <= 1 and rerun_ok and elapsed < 30.0
    _report(
        "6 firework/renewal", ok,
        f"failed cells at 4 sigma: {failed or 'none'}, rerun ok: {rerun_ok}, {elapsed:.1f} s",
    )


def test_criterion_7_growth_sign_check():
    """d^n u_n eventually rises above q_c and falls below it (d=2, c=1)."""
    q_c = solve_qc(2, 1.0).q_c
    up = growth_sequence(2, HazardSpec(1.0, q_c + 0.02), 400)
    down = growth_sequence(2, HazardSpec(1.0, q_c - 0.02), 400)
    rising = bool(np.all(np.diff(up[300:]) > 0.0))
    falling = bool(np.all(np.diff(down[300:]) < 0.0))
    _report(
        "7 growth sign", rising and falling,
        f"trailing 100 terms rising at q_c+0.02: {rising}, falling at q_c-0.02: {falling}",
    )


def test_criterion_8a_product_sandwich():
    """1 - cq - cq^2 <= prod_{i<n}(1 - c q^i) <= 1 - cq on 1e3 random draws.

    Kept as stated; the lower half is false for c < 1, so this criterion
    fails honestly (see the module docstring for the exact counterexample).
    """
    rng = np.random.default_rng(8001)
    violations = []
    for _ in range(1000):
        c = float(rng.uniform(0.0, 1.0)) or 1.0
        q = float(rng.uniform(0.01, 0.99))
        n = int(rng.integers(2, 80))
        prod = 1.0
        for i in range(1, n):
            prod *= 1.0 - c * q**i
        if not (1.0 - c * q - c * q * q <= prod + 1e-12 and prod <= 1.0 - c * q + 1e-12):
            violations.append((round(c, 3), round(q, 3), n))
    _report(
        "8a product sandwich", not violations,
        f"{len(violations)}/1000 draws violate the lower bound "
        f"(first: {violations[0] if violations else None}); "
        "the bound 1 - cq - cq^2 <= prod(1 - c q^i) is false for c < 1",
    )


def test_criterion_8b_sqrt_polynomial_envelopes():
    """sqrt(1-x) envelopes on dense grids (1e-15 float slack)."""
    x = np.linspace(0.0, 1.0, 200001)
    upper_ok = bool(np.all(np.sqrt(1.0 - x) <= 1.0 - x / 2.0 - x * x / 8.0 + 1e-15))
    x = np.linspace(0.0, 0.24, 200001)
    lower_ok = bool(np.all(np.sqrt(1.0 - x) >= 1.0 - x / 2.0 - x * x / 7.0 - 1e-15))
    _report("8b sqrt envelopes", upper_ok and lower_ok,
            f"upper on [0,1]: {upper_ok}, lower on [0,0.24]: {lower_ok}")


def test_criterion_8c_distribution_identities():
    """pmf/survival/defect identities on random hazard laws."""
    rng = np.random.default_rng(8003)
    ok = True
    for _ in range(25):
        spec = HazardSpec(float(rng.uniform(0.05, 1.0)), float(rng.uniform(0.02, 0.9)))
        for k in range(1, 60):
            pmf = interarrival_pmf(spec, k)
            ok = ok and abs(
                pmf - spec.hazard(k) * interarrival_survival(spec, k)
            ) <= 1e-14
            ok = ok and abs(
                pmf - (interarrival_survival(spec, k) - interarrival_survival(spec, k + 1))
            ) <= 1e-14
        total = sum(interarrival_pmf(spec, k) for k in range(1, 300))
        ok = ok and abs(total + interarrival_survival(spec, 300) - 1.0) <= 1e-12
        ok = ok and abs(total - (1.0 - defect_mass(spec, 1e-11))) <= 1e-9
    _report("8c distribution identities", ok, "hazard/survival/defect relations")


def test_criterion_8d_simulator_determinism():
    """Byte-equality of simulation outcomes across two identical runs."""
    config = FrogSimConfig(
        params=TreeParams(2, 1.0, 0.3), max_depth=10, replicates=2000, seed=424242
    )
    frog_same = (
        simulate_frog(config).reached_depth.tobytes()
        == simulate_frog(config).reached_depth.tobytes()
    )
    a = simulate_firework(HazardSpec(1.0, 0.25), 20, 50_000, 424242)
    b = simulate_firework(HazardSpec(1.0, 0.25), 20, 50_000, 424242)
    firework_same = (
        a.branch_hits.tobytes() == b.branch_hits.tobytes()
        and a.reached_depth.tobytes() == b.reached_depth.tobytes()
    )
    _report("8d simulator determinism", frog_same and firework_same,
            f"frog: {frog_same}, firework: {firework_same}")
