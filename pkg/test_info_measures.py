"""
Test the information functionals and their identities
"""
import math
import random
from fractions import Fraction as F

from dist_core import make_dist, make_joint, diag, product, marginals, random_dist, random_joint
from errors import LengthMismatch, OutOfRange, ParseError
from info_measures import (
    shannon_entropy, joint_entropy, conditional_entropy, mutual_information, kl_divergence,
    renyi_entropy, renyi_power_sum, binary_entropy, total_variation, mismatch_probability,
    parse_alpha, ROWS, COLUMNS
)

TOL = 1e-9
H_3_4 = -(0.75 * math.log2(0.75) + 0.25 * math.log2(0.25))  # H(3/4, 1/4)

S_EXAMPLE = make_joint([["1/4", "1/4"], ["1/2", "0"]])


def close(a, b, tol=TOL):
    return abs(a - b) <= tol


def random_joints(seed, count, max_side=4):
    rng = random.Random(seed)
    for _ in range(count):
        yield random_joint(rng, rng.randint(1, max_side), rng.randint(1, max_side))


def test_shannon_entropy():
    assert shannon_entropy(make_dist([1, 0, 0])) == 0
    assert close(shannon_entropy(make_dist(["1/2", "1/2"])), 1.0)
    assert close(shannon_entropy(make_dist(["1/2", "1/4", "1/4"])), 1.5)
    assert close(shannon_entropy(make_dist(["1/2", "1/2"]), base=math.e), math.log(2))


def test_bad_base():
    for base in (1, 0.5, -2):
        try:
            shannon_entropy(make_dist([1]), base=base)
            assert False, base
        except OutOfRange:
            pass


def test_joint_entropy():
    half = make_dist(["1/2", "1/2"])
    assert close(joint_entropy(diag(half)), 1.0)
    assert close(joint_entropy(product(half, half)), 2.0)
    assert close(joint_entropy(S_EXAMPLE), 1.5)


def test_conditional_entropy():
    P, Q = make_dist(["1/6", "1/3", "1/2"]), make_dist(["3/4", "1/4"])
    assert close(conditional_entropy(product(P, Q), COLUMNS), shannon_entropy(P))
    assert conditional_entropy(diag(P), COLUMNS) == 0
    assert conditional_entropy(diag(P), ROWS) == 0
    assert close(conditional_entropy(S_EXAMPLE, COLUMNS), 1.5 - H_3_4)
    assert close(conditional_entropy(S_EXAMPLE, ROWS), 0.5)
    try:
        conditional_entropy(S_EXAMPLE, "diagonal")
        assert False
    except OutOfRange:
        pass


def test_mutual_information():
    P, Q = make_dist(["1/6", "1/3", "1/2"]), make_dist(["3/4", "1/4"])
    assert close(mutual_information(product(P, Q)), 0.0)
    assert close(mutual_information(diag(make_dist(["1/2", "1/2"]))), 1.0)
    assert close(mutual_information(S_EXAMPLE), 1 + H_3_4 - 1.5)


def test_kl_divergence():
    P = make_dist(["1/6", "1/3", "1/2"])
    assert kl_divergence(P, P) == 0
    assert close(kl_divergence(make_dist([1, 0]), make_dist(["1/2", "1/2"])), 1.0)
    assert kl_divergence(make_dist(["1/2", "1/2"]), make_dist([1, 0])) == math.inf
    try:
        kl_divergence(P, make_dist(["1/2", "1/2"]))
        assert False
    except LengthMismatch:
        pass


def test_renyi_entropy():
    assert close(renyi_entropy(make_dist(["1/2", "1/2", "0"]), 0), 1.0)
    assert close(renyi_entropy(make_dist(["1/2", "1/2"]), 2), 1.0)
    assert close(renyi_entropy(make_dist(["3/4", "1/4"]), math.inf), -math.log2(0.75))
    P = make_dist(["1/6", "1/3", "1/2"])
    assert close(renyi_entropy(P, 1), shannon_entropy(P))
    # a Joint is flattened
    assert close(renyi_entropy(S_EXAMPLE, 2), -math.log2(renyi_power_sum(S_EXAMPLE, 2)))
    try:
        renyi_entropy(P, -1)
        assert False
    except OutOfRange:
        pass


def test_renyi_large_orders():
    """every p^alpha underflows to 0.0 here, the log-domain sum does not"""
    assert close(renyi_entropy(make_dist(["1/2", "1/2"]), 1100), 1.0)
    assert close(renyi_entropy(make_dist(["1/4"] * 4), 5000), 2.0)
    P = make_dist(["1/6", "1/3", "1/2"])
    assert close(renyi_entropy(P, 1100), 1100 / 1099)
    assert renyi_entropy(P, 10**6) >= renyi_entropy(P, math.inf)
    assert close(renyi_entropy(S_EXAMPLE, 1100, base=math.e),
                 renyi_entropy(S_EXAMPLE, 1100) * math.log(2))


def test_renyi_limit_at_one():
    rng = random.Random(11)
    for _ in range(200):
        P = random_dist(rng, rng.randint(1, 6), zero_prob=0.2)
        h = shannon_entropy(P)
        assert abs(renyi_entropy(P, 1 - 1e-6) - h) <= 1e-4
        assert abs(renyi_entropy(P, 1 + 1e-6) - h) <= 1e-4


def test_parse_alpha():
    assert parse_alpha("inf") == math.inf
    assert parse_alpha("0") == 0
    assert parse_alpha(" 0.5 ") == 0.5
    try:
        parse_alpha("-1")
        assert False
    except OutOfRange:
        pass
    try:
        parse_alpha("two")
        assert False
    except ParseError:
        pass


def test_binary_entropy():
    assert binary_entropy(0) == 0
    assert binary_entropy(1) == 0
    assert close(binary_entropy(F(1, 2)), 1.0)
    assert close(binary_entropy(F(1, 4)), H_3_4)
    assert close(binary_entropy(0.3), binary_entropy(0.7))
    try:
        binary_entropy(1.5)
        assert False
    except OutOfRange:
        pass


def test_total_variation():
    P = make_dist(["1/6", "1/3", "1/2"])
    assert total_variation(P, P) == 0
    assert total_variation(make_dist([1, 0]), make_dist([0, 1])) == 1
    assert total_variation(make_dist(["1/2", "1/2"]), make_dist(["1/4", "3/4"])) == F(1, 4)
    # shorter vector padded with zeros
    assert total_variation(make_dist([1]), make_dist(["1/2", "1/2"])) == F(1, 2)


def test_mismatch_probability():
    P = make_dist(["1/6", "1/3", "1/2"])
    assert mismatch_probability(diag(P)) == 0
    assert mismatch_probability(S_EXAMPLE) == F(3, 4)


def test_chain_rule_identities():
    for S in random_joints(21, 1000):
        P, Q = marginals(S)
        h_s = joint_entropy(S)
        assert abs(h_s - shannon_entropy(P) - conditional_entropy(S, ROWS)) <= TOL
        assert abs(h_s - shannon_entropy(Q) - conditional_entropy(S, COLUMNS)) <= TOL
        assert abs(h_s - shannon_entropy(P) - shannon_entropy(Q) + mutual_information(S)) <= TOL


def test_entropy_bounds():
    for S in random_joints(22, 1000):
        P, Q = marginals(S)
        hp, hq, hs = shannon_entropy(P), shannon_entropy(Q), joint_entropy(S)
        assert max(hp, hq) - TOL <= hs <= hp + hq + TOL
        assert -TOL <= mutual_information(S) <= min(hp, hq) + TOL
        assert -TOL <= conditional_entropy(S, COLUMNS) <= hp + TOL


def test_renyi_joint_dominates_marginals():
    for S in random_joints(23, 400):
        P, Q = marginals(S)
        for alpha in (0, 0.5, 2, math.inf):
            h_s = renyi_entropy(S, alpha)
            assert h_s >= max(renyi_entropy(P, alpha), renyi_entropy(Q, alpha)) - TOL


def test_mutual_information_is_divergence_from_product():
    for S in random_joints(24, 300):
        P, Q = marginals(S)
        assert abs(mutual_information(S) - kl_divergence(S.flatten(), product(P, Q).flatten())) <= TOL


if __name__ == "__main__":
    print("🧪 Testing info_measures...")
    tests = [fn for name, fn in sorted(globals().items()) if name.startswith("test_") and callable(fn)]
    for test in tests:
        test()
        print(f"✅ {test.__name__}")
    print(f"\n🎉 {len(tests)} tests passed")
