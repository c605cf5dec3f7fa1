"""
Test the unbounded Renyi entropy family over C(P,P)
"""
import math
from dataclasses import replace

import numpy as np

from counterexamples import (
    UnboundedFamilyParams, UnboundedStage, build_stage, divergence_trace, renyi_of_truncated_source,
    stage_lower_bound, tail_bound, truncated_source
)
from dist_core import diag
from errors import BudgetExceeded, InvariantViolation
from info_measures import renyi_entropy
from polytope import CouplingSpec, contains

TOL = 1e-9
SMALL = UnboundedFamilyParams(alpha=0.4, beta=3, r=1.5, n=6, N=25)
LARGE = UnboundedFamilyParams(alpha=0.4, beta=3, r=1.5, n=10, N=10**4)


def test_parameter_invariants():
    bad = (
        dict(alpha=0.4, beta=3, r=3),      # r + beta = 6 >= 5
        dict(alpha=0.4, beta=2, r=1.5),    # beta * alpha = 0.8
        dict(alpha=1.0, beta=3, r=1.5),
        dict(alpha=0.4, beta=1, r=1.5),
        dict(alpha=0.4, beta=3, r=1.0),
    )
    for kwargs in bad:
        try:
            UnboundedFamilyParams(n=5, N=10, **kwargs)
            assert False, kwargs
        except InvariantViolation:
            pass
    try:
        UnboundedFamilyParams(alpha=0.4, beta=3, r=1.5, n=11, N=10)
        assert False
    except InvariantViolation:
        pass


def test_truncated_source_is_exact_power_law():
    P = truncated_source(SMALL)
    assert len(P) == SMALL.N
    assert sum(P.masses) == 1
    assert all(a >= b for a, b in zip(P.masses, P.masses[1:]))
    assert abs(float(P[0] / P[1]) - 2.0 ** 3) <= 1e-9


def test_stage_is_a_coupling_of_the_source():
    for n in (1, 2, 6, 25):
        stage, _ = build_stage(replace(SMALL, n=n))
        S = stage.to_joint()
        assert contains(CouplingSpec.both(stage.source, stage.source), S)
        assert stage.in_coupling_set()
        assert min(stage.entry(i, j) for i in range(n) for j in range(n)) >= stage.corner > 0


def test_first_stage_is_diagonal():
    stage, _ = build_stage(replace(SMALL, n=1))
    assert stage.to_joint() == diag(stage.source)
    assert abs(stage.renyi_entropy(0.4) - renyi_entropy(stage.source, 0.4)) <= TOL


def test_structured_entropy_matches_dense():
    for n in (1, 3, 6, 20):
        stage, _ = build_stage(replace(SMALL, n=n))
        S = stage.to_joint()
        for alpha in (0, 0.4, 1, 2, 1100, math.inf):
            assert abs(stage.renyi_entropy(alpha) - renyi_entropy(S, alpha)) <= TOL, (n, alpha)
        assert abs(stage.renyi_entropy(0.4, base=math.e) - renyi_entropy(S, 0.4, base=math.e)) <= TOL


def test_stage_respects_its_lower_bound():
    for n in (1, 2, 5, 12, 25):
        stage, bound = build_stage(replace(SMALL, n=n))
        assert stage.renyi_entropy(SMALL.alpha) >= bound - TOL


def test_lower_bound_formula():
    stage, bound = build_stage(LARGE)
    i = np.arange(1, LARGE.N + 1, dtype=np.float64)
    Z = math.fsum(np.power(i, -3.0).tolist())
    expected = (0.2 * math.log2(10) - 0.4 * math.log2(Z)) / 0.6
    assert abs(bound - expected) <= 1e-9
    assert abs(stage_lower_bound(LARGE, stage.source) - bound) <= 1e-12


def test_dense_view_is_limited():
    stage, _ = build_stage(LARGE)
    try:
        stage.to_joint()
        assert False
    except BudgetExceeded:
        pass


def test_divergence_trace():
    """alpha = 0.4, beta = 3, r = 1.5 over stages up to the full truncation N = 10^4"""
    rows = divergence_trace(LARGE, [10, 100, 1000, 10**4])
    bounds = [row.lower_bound for row in rows]
    assert all(b > a for a, b in zip(bounds, bounds[1:]))
    for row in rows:
        assert row.H_alpha >= row.lower_bound - TOL
        assert math.isfinite(row.H_alpha_P)
    assert bounds[-1] - bounds[0] >= 3.0
    assert rows[-1].H_alpha > rows[-1].H_alpha_P
    for row in rows:
        print(f"   n={row.n:>6}  H_alpha={row.H_alpha:.5f}  bound={row.lower_bound:.5f}  H_alpha(P)={row.H_alpha_P:.5f}")


def test_trace_edge_cases():
    rows = divergence_trace(SMALL, [1])
    assert len(rows) == 1 and rows[0].n == 1
    assert rows[0].H_alpha >= rows[0].H_alpha_P - TOL
    try:
        divergence_trace(SMALL, [5, 3])
        assert False
    except InvariantViolation:
        pass
    try:
        divergence_trace(SMALL, [5, 30])
        assert False
    except InvariantViolation:
        pass


def test_trace_does_not_depend_on_threads():
    stages = [1, 4, 9, 16]
    assert divergence_trace(SMALL, stages, threads=1) == divergence_trace(SMALL, stages, threads=3)


def test_source_entropy_converges_under_truncation():
    h_n = renyi_of_truncated_source(LARGE)
    h_2n = renyi_of_truncated_source(LARGE, N=2 * LARGE.N)
    assert math.isfinite(h_n) and math.isfinite(h_2n)
    assert abs(h_2n - h_n) <= tail_bound(LARGE)
    # the truncation error bound shrinks as N grows
    shrinking = [tail_bound(replace(LARGE, N=N)) for N in (10**2, 10**3, 10**4, 10**5)]
    assert all(b < a for a, b in zip(shrinking, shrinking[1:]))


def test_stage_entries_outside_the_corner():
    source = truncated_source(SMALL)
    stage = UnboundedStage(SMALL, source)
    assert stage.shape == (SMALL.N, SMALL.N)
    assert stage.entry(SMALL.n, SMALL.n + 1) == 0
    assert stage.entry(SMALL.N - 1, SMALL.N - 1) == source[SMALL.N - 1]


if __name__ == "__main__":
    print("🧪 Testing counterexamples...")
    tests = [fn for name, fn in sorted(globals().items()) if name.startswith("test_") and callable(fn)]
    for test in tests:
        test()
        print(f"✅ {test.__name__}")
    print(f"\n🎉 {len(tests)} tests passed")
