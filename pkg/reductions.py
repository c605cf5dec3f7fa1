"""
Hardness reductions as runnable decision procedures
===================================================

Subset Sum -> minimum entropy coupling, Partition -> optimal channel with two
outputs, 3-Partition -> optimal channel with m outputs. Every YES/NO answer is
read off exact rational structure of the optimal coupling (a functional
support, exactly equal column sums); entropy values are only logged as
corroboration. Pseudo-polynomial DP oracles give the ground truth.
"""
import logging
import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import List, Sequence, Tuple

from config import (
    DEFAULT_LOG_BASE, DEFAULT_CHANNEL_BUDGET, DEFAULT_DP_BUDGET, FLOAT_TOLERANCE, DEBUG_REDUCTIONS
)
from dist_core import Dist, make_dist
from errors import BudgetExceeded, InvariantViolation
from polytope import is_functional, Y_OF_X
from solvers import min_entropy_coupling_exact, optimal_channel, CouplingSolution


@dataclass(frozen=True)
class SubsetSumInstance:
    """Is there a subset of `weights` summing to `target`?"""
    weights: Tuple[int, ...]
    target: int

    def __post_init__(self):
        if len(self.weights) < 2:
            raise InvariantViolation(f"subset sum needs n >= 2 weights, got {len(self.weights)}")
        if any(int(d) != d or d < 1 for d in self.weights):
            raise InvariantViolation(f"weights must be positive integers: {self.weights}")
        total = sum(self.weights)
        if not 1 <= self.target < total:
            raise InvariantViolation(f"target must satisfy 1 <= s < {total}, got {self.target}")


@dataclass(frozen=True)
class ThreePartitionInstance:
    """Can `weights` (3m of them) be split into m triples each summing to k?"""
    weights: Tuple[int, ...]
    k: int
    m: int

    def __post_init__(self):
        if self.m < 1 or self.k < 1:
            raise InvariantViolation(f"3-partition needs m, k >= 1, got m={self.m}, k={self.k}")
        if len(self.weights) != 3 * self.m:
            raise InvariantViolation(f"3-partition needs 3m = {3 * self.m} weights, got {len(self.weights)}")
        for d in self.weights:
            if not (4 * d > self.k and 2 * d < self.k):
                raise InvariantViolation(f"weight {d} violates k/4 < d < k/2 for k={self.k}")
        if sum(self.weights) != self.m * self.k:
            raise InvariantViolation(f"weights sum to {sum(self.weights)}, expected m*k = {self.m * self.k}")


@dataclass(frozen=True)
class Decision:
    answer: bool
    certificate: dict = field(default_factory=dict)
    solution: CouplingSolution = field(default=None, compare=False)

    def __bool__(self):
        return self.answer


def _normalize(weights: Sequence[int]) -> Dist:
    total = sum(weights)
    return make_dist([Fraction(d, total) for d in weights])


def _columns_of(S) -> List[List[int]]:
    n, m = S.shape
    return [[i for i in range(n) if S.rows[i][j] > 0] for j in range(m)]


# === Subset Sum ===

def encode_subset_sum(inst: SubsetSumInstance) -> Tuple[Dist, Dist]:
    """P = (d_i / D), Q = (s / D, 1 - s / D)"""
    total = sum(inst.weights)
    q = Fraction(inst.target, total)
    return _normalize(inst.weights), make_dist([q, 1 - q])


def decide_subset_sum(inst: SubsetSumInstance, **solver_options) -> Decision:
    """YES iff the minimum entropy coupling of the encoding is functional (Y of X)"""
    return decide_subset_sum_renyi(inst, 1, **solver_options)


def decide_subset_sum_renyi(inst: SubsetSumInstance, alpha, **solver_options) -> Decision:
    """
    Same reduction through the minimum alpha-entropy coupling. Valid for every
    finite alpha >= 0: H_alpha(S) >= H_alpha(P) with equality iff every row
    of S has a single positive entry. For alpha = inf that equality condition
    fails, so it is rejected.
    """
    if math.isinf(float(alpha)):
        raise InvariantViolation("the subset-sum reduction needs a finite order alpha")
    P, Q = encode_subset_sum(inst)
    solution = min_entropy_coupling_exact(P, Q, alpha, DEFAULT_LOG_BASE, **solver_options)
    answer = is_functional(solution.coupling, Y_OF_X)
    certificate = {"objective": solution.objective_value}
    if answer:
        subset = _columns_of(solution.coupling)[0]
        certificate["subset"] = subset
        certificate["weights"] = [inst.weights[i] for i in subset]
    logging.info(f"🧩 subset sum {inst.weights} -> {inst.target}: {answer}")
    if DEBUG_REDUCTIONS:
        logging.info(f"   certificate {certificate}")
    return Decision(answer, certificate, solution)


# === Partition ===

def encode_partition(weights: Sequence[int]) -> Tuple[Dist, int]:
    if len(weights) < 2 or any(int(d) != d or d < 1 for d in weights):
        raise InvariantViolation(f"partition needs n >= 2 positive integer weights, got {tuple(weights)}")
    return _normalize(weights), 2


def decide_partition(weights: Sequence[int], budget=DEFAULT_CHANNEL_BUDGET) -> Decision:
    """YES iff the optimal two-output channel splits the mass exactly in half"""
    P, m = encode_partition(weights)
    solution = optimal_channel(P, m, 2, budget)
    columns = _columns_of(solution.coupling)
    sums = [sum((P[i] for i in block), Fraction(0)) for block in columns]
    answer = sums[0] == sums[1]
    near_one_bit = abs(solution.objective_value - 1.0) <= FLOAT_TOLERANCE
    if near_one_bit != answer:
        logging.warning(f"⚠️ partition {tuple(weights)}: I = {solution.objective_value} "
                        f"but exact column sums say {answer}")
    certificate = {"information": solution.objective_value, "column_sums": [str(s) for s in sums]}
    if answer:
        certificate["blocks"] = [[weights[i] for i in block] for block in columns]
    logging.info(f"🧩 partition {tuple(weights)}: {answer}")
    if DEBUG_REDUCTIONS:
        logging.info(f"   certificate {certificate}")
    return Decision(answer, certificate, solution)


# === 3-Partition ===

def decide_3partition(inst: ThreePartitionInstance, budget=DEFAULT_CHANNEL_BUDGET) -> Decision:
    """YES iff the optimal m-output channel has all column sums exactly 1/m"""
    P = _normalize(inst.weights)
    solution = optimal_channel(P, inst.m, 2, budget)
    columns = _columns_of(solution.coupling)
    sums = [sum((P[i] for i in block), Fraction(0)) for block in columns]
    answer = all(s == Fraction(1, inst.m) for s in sums)
    certificate = {"information": solution.objective_value, "column_sums": [str(s) for s in sums]}
    if answer:
        certificate["triples"] = [[inst.weights[i] for i in block] for block in columns]
    logging.info(f"🧩 3-partition {inst.weights} (k={inst.k}, m={inst.m}): {answer}")
    if DEBUG_REDUCTIONS:
        logging.info(f"   certificate {certificate}")
    return Decision(answer, certificate, solution)


# === Oracles ===

def _reachable(weights: Sequence[int], limit: int, budget: int) -> int:
    if limit + 1 > budget:
        raise BudgetExceeded(limit + 1, budget, "reachable-sum table")
    mask = (1 << (limit + 1)) - 1
    bits = 1
    for d in weights:
        bits = (bits | (bits << d)) & mask
    return bits


def dp_oracle_subset_sum(inst: SubsetSumInstance, budget=DEFAULT_DP_BUDGET) -> bool:
    """Reachable-sums bitset DP"""
    bits = _reachable(inst.weights, sum(inst.weights), budget)
    return bool(bits >> inst.target & 1)


def dp_oracle_partition(weights: Sequence[int], budget=DEFAULT_DP_BUDGET) -> bool:
    total = sum(weights)
    if total % 2:
        return False
    bits = _reachable(weights, total, budget)
    return bool(bits >> (total // 2) & 1)


def exhaustive_3partition_oracle(inst: ThreePartitionInstance) -> bool:
    """Backtracking over bins of capacity k; empty bins are interchangeable"""
    loads = [0] * inst.m
    order = sorted(inst.weights, reverse=True)

    def place(index):
        if index == len(order):
            return all(load == inst.k for load in loads)
        tried = set()
        for b in range(inst.m):
            if loads[b] in tried or loads[b] + order[index] > inst.k:
                continue
            tried.add(loads[b])
            loads[b] += order[index]
            if place(index + 1):
                return True
            loads[b] -= order[index]
        return False

    return place(0)


# === Random instances for the test suites ===

def random_subset_sum_instance(rng: random.Random, max_n=8, max_weight=40) -> SubsetSumInstance:
    n = rng.randint(2, max_n)
    weights = tuple(rng.randint(1, max_weight) for _ in range(n))
    return SubsetSumInstance(weights, rng.randint(1, sum(weights) - 1))


def random_partition_weights(rng: random.Random, max_n=10, max_weight=30) -> Tuple[int, ...]:
    return tuple(rng.randint(1, max_weight) for _ in range(rng.randint(2, max_n)))
