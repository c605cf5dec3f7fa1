"""
Test the entropy pseudometrics and the bound report
"""
import math
import random

from dist_core import make_dist, make_joint, diag, product, permute, is_permutation_of, random_dist, random_joint
from errors import InvalidP
from info_measures import shannon_entropy, binary_entropy
from metrics import (
    delta_p, delta_lower, delta_lower_all, delta_lower_by_vertices, bound_report, parse_p,
    conditional_entropy_distance_check
)

TOL = 1e-9
HALF = make_dist(["1/2", "1/2"])
SKEW = make_dist(["3/4", "1/4"])
P3 = make_dist(["1/6", "1/3", "1/2"])
H_3_4 = -(0.75 * math.log2(0.75) + 0.25 * math.log2(0.25))
P_GRID = (1, 1.5, 2, 4, math.inf)


def random_dists(rng, count, max_side=4):
    return [random_dist(rng, rng.randint(1, max_side), max_weight=6, zero_prob=0.1) for _ in range(count)]


def test_delta_p():
    for p in (1, 2, math.inf):
        assert delta_p(diag(P3), p) == 0
    assert abs(delta_p(product(HALF, HALF), 1) - 2.0) <= TOL
    S = make_joint([["1/4", "1/4"], ["1/2", "0"]])
    assert abs(delta_p(S, math.inf) - (1.5 - H_3_4)) <= TOL
    assert abs(delta_p(S, 1) - (1.5 - H_3_4 + 0.5)) <= TOL
    assert abs(delta_p(S, 2) - math.hypot(1.5 - H_3_4, 0.5)) <= TOL


def test_invalid_p():
    for bad in (0.5, 0, -1, float("nan")):
        try:
            delta_p(diag(P3), bad)
            assert False, bad
        except InvalidP:
            pass
    assert parse_p("inf") == math.inf
    try:
        parse_p("one")
        assert False
    except InvalidP:
        pass


def test_delta_p_nonincreasing_in_p():
    rng = random.Random(51)
    for _ in range(300):
        S = random_joint(rng, rng.randint(1, 4), rng.randint(1, 4))
        values = [delta_p(S, p) for p in P_GRID]
        assert all(b <= a + TOL for a, b in zip(values, values[1:]))


def test_delta_lower_examples():
    for p in (1, 2, math.inf):
        assert delta_lower(P3, permute(P3, [2, 0, 1]), p) <= 1e-12
    assert abs(delta_lower(HALF, SKEW, 1) - (2 * 1.5 - 1 - H_3_4)) <= TOL
    assert abs(delta_lower(HALF, make_dist([1, 0]), 1) - 1.0) <= TOL


def test_pseudometric_axioms():
    rng = random.Random(52)
    pool = random_dists(rng, 40)
    cache = {}

    def distances(P, Q):
        key = (P, Q)
        if key not in cache:
            cache[key] = delta_lower_all(P, Q, (1, math.inf))
        return cache[key]

    for _ in range(300):
        P, Q, R = rng.choice(pool), rng.choice(pool), rng.choice(pool)
        pq, pr, rq = distances(P, Q), distances(P, R), distances(R, Q)
        qp = distances(Q, P)
        for k in range(2):
            assert pq[k] >= 0
            assert abs(pq[k] - qp[k]) <= TOL
            assert pq[k] <= pr[k] + rq[k] + TOL


def test_zero_exactly_on_permutations():
    rng = random.Random(53)
    for _ in range(150):
        P = random_dist(rng, rng.randint(1, 4), max_weight=5, zero_prob=0.2)
        order = list(range(len(P)))
        rng.shuffle(order)
        for value in delta_lower_all(P, permute(P, order), (1, 2, math.inf)):
            assert value <= 1e-12

        Q = random_dist(rng, rng.randint(1, 4), max_weight=5, zero_prob=0.2)
        values = delta_lower_all(P, Q, (1, 2, math.inf))
        if is_permutation_of(P, Q):
            assert max(values) <= 1e-12
        else:
            assert min(values) > 1e-6


def test_delta_lower_nonincreasing_in_p():
    rng = random.Random(54)
    for _ in range(200):
        P, Q = random_dists(rng, 2)
        values = delta_lower_all(P, Q, P_GRID)
        assert all(b <= a + TOL for a, b in zip(values, values[1:]))


def test_one_solve_matches_vertex_minimum():
    rng = random.Random(55)
    for _ in range(60):
        P, Q = random_dists(rng, 2, max_side=3)
        values = delta_lower_all(P, Q, P_GRID)
        for p, value in zip(P_GRID, values):
            assert abs(value - delta_lower_by_vertices(P, Q, p)) <= TOL


def test_bound_report_examples():
    report = bound_report(P3, P3)
    assert report.holds()
    for entry in report.entries:
        if entry.name.startswith(("entropy_gap", "delta")):
            assert abs(entry.left) <= TOL

    report = bound_report(HALF, SKEW)
    assert report.holds()
    entry = report["delta_1<=fano_sum"]
    assert abs(entry.left - (2 * 1.5 - 1 - H_3_4)) <= TOL
    assert abs(entry.right - (0.25 * 2 + 2 * binary_entropy(0.25))) <= TOL

    report = bound_report(P3, HALF)
    gap = shannon_entropy(P3) - 1
    assert abs(report["entropy_gap<=delta_inf"].left - gap) <= TOL
    assert abs(report["entropy_gap<=delta_inf"].slack) <= TOL

    as_dict = report.as_dict()
    assert as_dict["holds"] is True
    assert {b["name"] for b in as_dict["bounds"]} == {e.name for e in report.entries}
    try:
        report["no_such_bound"]
        assert False
    except KeyError:
        pass


def test_bound_suite():
    rng = random.Random(56)
    for _ in range(1000):
        P, Q = random_dists(rng, 2)
        report = bound_report(P, Q)
        assert report.holds(), report.as_dict()


def test_bound_report_in_other_bases():
    rng = random.Random(57)
    for _ in range(100):
        P, Q = random_dists(rng, 2)
        assert bound_report(P, Q, base=math.e).holds()


def test_conditional_entropy_distance_check():
    assert conditional_entropy_distance_check(diag(P3)) == (0, 0)
    left, right = conditional_entropy_distance_check(product(P3, SKEW))
    assert abs(left - H_3_4) <= TOL and abs(right - H_3_4) <= TOL
    left, right = conditional_entropy_distance_check(make_joint([["1/4", "1/4"], ["1/2", "0"]]))
    assert abs(left - 0.5) <= TOL and abs(right - 0.5) <= TOL


def test_conditional_entropy_distance_agrees():
    rng = random.Random(58)
    for _ in range(500):
        S = random_joint(rng, rng.randint(1, 4), rng.randint(1, 4))
        left, right = conditional_entropy_distance_check(S)
        assert abs(left - right) <= 1e-12


if __name__ == "__main__":
    print("🧪 Testing metrics...")
    tests = [fn for name, fn in sorted(globals().items()) if name.startswith("test_") and callable(fn)]
    for test in tests:
        test()
        print(f"✅ {test.__name__}")
    print(f"\n🎉 {len(tests)} tests passed")
