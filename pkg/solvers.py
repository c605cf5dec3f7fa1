"""
Optimal couplings
=================

Closed-form maximal coupling, exact and greedy minimum (alpha-)entropy
coupling, the optimal channel over C(P,m) and maximal normalized-information
dependence.

The exact solver orders candidate couplings by a score that is monotone in
H_alpha (sum of -s log s for alpha = 1, sum of s^alpha below 1, -log sum of
s^alpha above 1, max s for alpha = inf). Scores closer than TIE_TOLERANCE
are ties and ties go to the lexicographically smallest matrix.
"""
import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Tuple

import numpy as np

from config import (
    DEFAULT_LOG_BASE, DEFAULT_VERTEX_CAP, DEFAULT_THREADS, DEFAULT_CHANNEL_BUDGET,
    EXACT_STRATEGY, TIE_TOLERANCE, DEBUG_SOLVER
)
from dist_core import Dist, Joint, joint_from_cells, product, support, is_point_mass
from errors import BudgetExceeded, DegenerateMarginal, InvariantViolation, VertexCapExceeded
from info_measures import (
    renyi_entropy, shannon_entropy, mutual_information, conditional_entropy,
    mismatch_probability, joint_entropy, log_power_sum, COLUMNS, _check_alpha
)
from polytope import (
    CouplingSpec, ForestSearch, enumerate_vertices, northwest_corner,
    spanning_tree_bound, is_functional, is_vertex, Y_OF_X, X_OF_Y
)

EXACT = "Exact"
HEURISTIC = "Heuristic"

# auto strategy: exhaustive enumeration only for small spanning-tree counts
AUTO_EXHAUSTIVE_TREES = 256


@dataclass(frozen=True)
class CouplingSolution:
    coupling: Joint
    objective_value: float
    certificate: str
    vertex: bool
    details: dict = field(default_factory=dict, compare=False)


class RenyiScore:
    """
    Additive (or, for alpha = inf, min-combined) score ordered like H_alpha.

    For alpha > 1 the score is -log sum x^alpha, combined with logaddexp, so
    the order survives orders where every x^alpha underflows.
    """

    def __init__(self, alpha, scale=1):
        self.alpha = _check_alpha(alpha)
        self.scale = scale
        self.use_min = math.isinf(self.alpha)
        self.use_log = 1 < self.alpha < math.inf
        self.identity = math.inf if (self.use_min or self.use_log) else 0.0

    def term(self, value) -> float:
        x = float(value) / self.scale
        a = self.alpha
        if self.use_min:
            return -x
        if self.use_log:
            return -a * math.log(x)
        if a == 0:
            return 1.0
        if a == 1:
            return -x * math.log(x)
        return x ** a

    def combine(self, left, right) -> float:
        if self.use_min:
            return min(left, right)
        if self.use_log:
            return -float(np.logaddexp(-left, -right))
        return left + right

    def of_joint(self, S: Joint) -> float:
        score = self.identity
        for _, _, s in S.entries():
            if s > 0:
                score = self.combine(score, self.term(s))
        return score

    def lower_bound(self, partial, rows, cols) -> float:
        """Best score any completion with these residual lines can reach"""
        if not rows:
            return partial
        a = self.alpha
        if self.use_min:
            return min(partial, -min(max(rows), max(cols)) / self.scale)
        if a == 0:
            return partial + max(len(rows), len(cols))
        if a == 1:
            row_part = math.fsum(self.term(r) for r in rows)
            col_part = math.fsum(self.term(c) for c in cols)
            return partial + max(row_part, col_part)
        if self.use_log:
            row_log = log_power_sum(np.array(rows, dtype=np.float64) / self.scale, a)
            col_log = log_power_sum(np.array(cols, dtype=np.float64) / self.scale, a)
            return self.combine(partial, -min(row_log, col_log))
        row_part = math.fsum((r / self.scale) ** a for r in rows)
        col_part = math.fsum((c / self.scale) ** a for c in cols)
        return partial + max(row_part, col_part)


def _better(score, key, best_score, best_key, tol=TIE_TOLERANCE) -> bool:
    if best_key is None or score < best_score - tol:
        return True
    if score > best_score + tol:
        return False
    return key < best_key


# === Maximal coupling ===

def maximal_coupling(P: Dist, Q: Dist) -> CouplingSolution:
    """
    Coupling minimizing P(X != Y): min(p_i, q_i) on the diagonal, the excess
    masses coupled by the normalized product of residuals.
    """
    n, m = len(P), len(Q)
    k = min(n, m)
    cells = {(i, i): min(P[i], Q[i]) for i in range(k)}
    row_excess = [P[i] - (cells[(i, i)] if i < k else 0) for i in range(n)]
    col_excess = [Q[j] - (cells[(j, j)] if j < k else 0) for j in range(m)]
    mismatch = sum(row_excess, Fraction(0))
    if mismatch > 0:
        for i, a in enumerate(row_excess):
            if a == 0:
                continue
            for j, b in enumerate(col_excess):
                if b:
                    cells[(i, j)] = cells.get((i, j), Fraction(0)) + a * b / mismatch
    S = joint_from_cells(n, m, cells)
    return CouplingSolution(
        coupling=S,
        objective_value=float(mismatch),
        certificate=EXACT,
        vertex=is_vertex(CouplingSpec.both(P, Q), S),
        details={"mismatch": mismatch_probability(S)},
    )


# === Minimum entropy coupling ===

def min_entropy_coupling_greedy(P: Dist, Q: Dist, base=DEFAULT_LOG_BASE) -> CouplingSolution:
    """Pair the largest residuals (lowest index on ties) until nothing is left"""
    search = ForestSearch(P, Q)
    rows, cols = search.row_res, search.col_res
    edges = []
    while any(rows):
        i = max(range(len(rows)), key=lambda x: (rows[x], -x))
        j = max(range(len(cols)), key=lambda x: (cols[x], -x))
        v = min(rows[i], cols[j])
        rows[i] -= v
        cols[j] -= v
        edges.append((i, j, v))
    S = search.to_vertex(edges).joint
    return CouplingSolution(S, joint_entropy(S, base), HEURISTIC, True, {"strategy": "greedy"})


def _exhaustive(spec, score_fn, vertex_cap, threads):
    best_score, best = None, None
    vertices = enumerate_vertices(spec, vertex_cap, threads)
    for vertex in vertices:
        score = score_fn.of_joint(vertex.joint)
        if _better(score, vertex.joint.key(), best_score, None if best is None else best.key()):
            best_score, best = score, vertex.joint
    return best, len(vertices)


def _dense_key(search: ForestSearch, edges) -> Tuple[int, ...]:
    grid = [0] * (search.n * search.m)
    for i, j, v in edges:
        grid[i * search.m + j] += v
    return tuple(grid)


def _bnb_branch(P, Q, alpha, root, incumbent_score, incumbent_key):
    """Depth-first branch-and-bound below one root move; own state only"""
    search = ForestSearch(P, Q)
    score_fn = RenyiScore(alpha, search.scale)
    best = {"score": incumbent_score, "key": incumbent_key, "edges": None}
    seen = {}
    nodes = [0]
    if not search.apply(root):
        return None, 0

    def walk(partial):
        nodes[0] += 1
        if search.complete():
            key = _dense_key(search, search.edges)
            if _better(partial, key, best["score"], best["key"]):
                best.update(score=partial, key=key, edges=tuple(search.edges))
            return
        rows = [r for r in search.row_res if r > 0]
        cols = [c for c in search.col_res if c > 0]
        if score_fn.lower_bound(partial, rows, cols) > best["score"] + TIE_TOLERANCE:
            return
        state = (tuple(search.row_res), tuple(search.col_res), tuple(search.need))
        key = _dense_key(search, search.edges)
        previous = seen.get(state)
        if previous is not None and not _better(partial, key, previous[0], previous[1]):
            return
        seen[state] = (partial, key)
        for move in search.moves():
            if search.apply(move):
                walk(score_fn.combine(partial, score_fn.term(search.edges[-1][2])))
                search.undo()

    walk(score_fn.combine(score_fn.identity, score_fn.term(search.edges[-1][2])))
    if best["edges"] is None:
        return None, nodes[0]
    return (best["score"], best["key"], best["edges"]), nodes[0]


def _branch_and_bound(P: Dist, Q: Dist, alpha, threads):
    spec = CouplingSpec.both(P, Q)
    search = ForestSearch(P, Q)
    score_fn = RenyiScore(alpha, search.scale)

    # incumbent: the better of the northwest-corner and greedy vertices
    incumbent_score, incumbent_key, incumbent = None, None, None
    for start in (northwest_corner(spec).joint, min_entropy_coupling_greedy(P, Q).coupling):
        key = tuple(int(s * search.scale) for s in start.key())
        score = RenyiScore(alpha).of_joint(start)
        if _better(score, key, incumbent_score, incumbent_key):
            incumbent_score, incumbent_key, incumbent = score, key, start

    roots = search.moves()
    if DEBUG_SOLVER:
        logging.info(f"   incumbent score {incumbent_score}, {len(roots)} root branches")
    run = lambda root: _bnb_branch(P, Q, alpha, root, incumbent_score, incumbent_key)
    if threads > 1 and len(roots) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(run, roots))
    else:
        results = [run(root) for root in roots]

    best_score, best_key, best = incumbent_score, incumbent_key, incumbent
    total_nodes = 0
    for found, nodes in results:
        total_nodes += nodes
        if found is not None and _better(found[0], found[1], best_score, best_key):
            best_score, best_key = found[0], found[1]
            best = search.to_vertex(found[2]).joint
    return best, total_nodes


def min_entropy_coupling_exact(P: Dist, Q: Dist, alpha=1, base=DEFAULT_LOG_BASE,
                               strategy=EXACT_STRATEGY, vertex_cap=DEFAULT_VERTEX_CAP,
                               threads=DEFAULT_THREADS) -> CouplingSolution:
    """
    Global minimizer of H_alpha over C(P,Q); always a vertex.

    strategy="exhaustive" scores every vertex (VertexCapExceeded if the cap
    trips), "branch_and_bound" searches forest supports with the lower bound
    max{H_alpha(P), H_alpha(Q)} applied to the residual lines, "auto" picks
    exhaustive for small instances and falls back to branch-and-bound when
    the cap trips.
    """
    alpha = _check_alpha(alpha)
    spec = CouplingSpec.both(P, Q)
    if strategy not in ("auto", "exhaustive", "branch_and_bound"):
        raise InvariantViolation(f"unknown strategy {strategy!r}")

    chosen = strategy
    if strategy == "auto":
        chosen = "exhaustive" if spanning_tree_bound(spec) <= min(vertex_cap, AUTO_EXHAUSTIVE_TREES) \
            else "branch_and_bound"

    details = {"strategy": chosen}
    if chosen == "exhaustive":
        try:
            best, count = _exhaustive(spec, RenyiScore(alpha), vertex_cap, threads)
            details["vertices"] = count
        except VertexCapExceeded as e:
            if strategy == "exhaustive":
                raise
            logging.warning(f"⚠️ {e}; switching to branch-and-bound")
            chosen = details["strategy"] = "branch_and_bound"
    if chosen == "branch_and_bound":
        best, nodes = _branch_and_bound(P, Q, alpha, threads)
        details["nodes"] = nodes

    logging.info(f"🔍 MEC alpha={alpha} over {spec}: {details}")
    return CouplingSolution(best, renyi_entropy(best, alpha, base), EXACT, True, details)


def max_entropy_coupling(P: Dist, Q: Dist, base=DEFAULT_LOG_BASE) -> CouplingSolution:
    """The product coupling; H(P x Q) = H(P) + H(Q) is the maximum over C(P,Q)"""
    S = product(P, Q)
    return CouplingSolution(S, joint_entropy(S, base), EXACT, is_vertex(CouplingSpec.both(P, Q), S))


def min_conditional_entropy(P: Dist, Q: Dist, given=COLUMNS, base=DEFAULT_LOG_BASE,
                            **solver_options) -> CouplingSolution:
    solution = min_entropy_coupling_exact(P, Q, 1, base, **solver_options)
    value = conditional_entropy(solution.coupling, given, base)
    return CouplingSolution(solution.coupling, value, EXACT, True, solution.details)


def max_mutual_information(P: Dist, Q: Dist, base=DEFAULT_LOG_BASE,
                           **solver_options) -> CouplingSolution:
    solution = min_entropy_coupling_exact(P, Q, 1, base, **solver_options)
    value = mutual_information(solution.coupling, base)
    return CouplingSolution(solution.coupling, value, EXACT, True, solution.details)


def entropy_threshold_decision(P: Dist, Q: Dist, h, base=DEFAULT_LOG_BASE,
                               tolerance=1e-9, **solver_options) -> bool:
    """Is there S in C(P,Q) with H(S) <= h (within tolerance)?"""
    solution = min_entropy_coupling_exact(P, Q, 1, base, **solver_options)
    return solution.objective_value <= h + tolerance


def min_entropy_one_marginal(P: Dist, m: int, base=DEFAULT_LOG_BASE) -> CouplingSolution:
    """Over C(P,m) any row-deterministic matrix reaches H(P); all mass to column 0"""
    if m < 1:
        raise InvariantViolation(f"C(P,m) needs m >= 1, got {m}")
    S = joint_from_cells(len(P), m, {(i, 0): p for i, p in enumerate(P.masses)})
    return CouplingSolution(S, joint_entropy(S, base), EXACT, True)


# === Optimal channel ===

def _set_partitions(count: int, blocks: int):
    """Restricted growth strings: block labels in first-use order, < blocks"""
    labels = [0] * count

    def grow(index, used):
        if index == count:
            yield labels
            return
        for label in range(min(used + 1, blocks)):
            labels[index] = label
            yield from grow(index + 1, max(used, label + 1))

    if count == 0:
        yield labels
    else:
        yield from grow(0, 0)


def optimal_channel(P: Dist, m: int, base=DEFAULT_LOG_BASE,
                    budget=DEFAULT_CHANNEL_BUDGET) -> CouplingSolution:
    """
    S in C(P,m) maximizing I(X;Y). The maximizer is row-deterministic, so
    I = H(column marginal) and only groupings of the positive rows into at
    most m columns need to be compared (columns are interchangeable).
    Ties prefer the more balanced column sums.
    """
    if m < 1:
        raise InvariantViolation(f"C(P,m) needs m >= 1, got {m}")
    rows = support(P)
    required = m ** len(rows)
    if required > budget:
        raise BudgetExceeded(required, budget, "optimal channel")

    best_value, best_balance, best_labels = None, None, None
    for labels in _set_partitions(len(rows), m):
        sums = [Fraction(0)] * m
        for i, label in zip(rows, labels):
            sums[label] += P[i]
        value = math.fsum(-float(s) * math.log(float(s)) for s in sums if s > 0)
        balance = tuple(sorted(sums, reverse=True))
        if best_value is None or value > best_value + TIE_TOLERANCE or (
                abs(value - best_value) <= TIE_TOLERANCE and balance < best_balance):
            best_value, best_balance, best_labels = value, balance, list(labels)

    S = joint_from_cells(len(P), m, {(i, label): P[i] for i, label in zip(rows, best_labels)})
    return CouplingSolution(S, mutual_information(S, base), EXACT, True,
                            {"column_sums": [str(s) for s in best_balance], "assignments": required})


# === Maximal dependence ===

def max_dependence(P: Dist, Q: Dist, base=DEFAULT_LOG_BASE, **solver_options) -> float:
    """max over C(P,Q) of I / min{H(P), H(Q)}; 1 exactly when a functional coupling exists"""
    if is_point_mass(P) or is_point_mass(Q):
        raise DegenerateMarginal("dependence is undefined when a marginal is a point mass")
    solution = min_entropy_coupling_exact(P, Q, 1, base, **solver_options)
    S = solution.coupling
    if is_functional(S, Y_OF_X) or is_functional(S, X_OF_Y):
        return 1.0
    ratio = mutual_information(S, base) / min(shannon_entropy(P, base), shannon_entropy(Q, base))
    return min(1.0, max(0.0, ratio))
