"""
Entropy pseudometrics
=====================

Delta_p(S) is the p-norm of the pair (H(X|Y), H(Y|X)). The distance
Delta_p(P, Q) between distributions is its minimum over C(P,Q); with both
marginals fixed both conditional entropies grow with H(S), so one minimum
entropy coupling serves every p at once.
"""
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import List

from config import DEFAULT_LOG_BASE, DEFAULT_VERTEX_CAP, FLOAT_TOLERANCE
from dist_core import Dist, Joint, joint_from_cells, support_size
from errors import InvalidP
from info_measures import (
    conditional_entropy, shannon_entropy, binary_entropy, total_variation, ROWS, COLUMNS
)
from polytope import CouplingSpec, enumerate_vertices
from solvers import min_entropy_coupling_exact, maximal_coupling


def check_p(p) -> float:
    p = float(p)
    if math.isnan(p) or p < 1:
        raise InvalidP(f"p must be >= 1 (or inf), got {p}")
    return p


def parse_p(text) -> float:
    try:
        return check_p(float(str(text).strip()))
    except ValueError:
        raise InvalidP(f"not a valid p: {text!r}") from None


def _norm(a: float, b: float, p: float) -> float:
    if math.isinf(p):
        return max(a, b)
    if p == 1:
        return a + b
    if a == 0 and b == 0:
        return 0.0
    top = max(a, b)
    return top * ((a / top) ** p + (b / top) ** p) ** (1.0 / p)


def delta_p(S: Joint, p=1, base=DEFAULT_LOG_BASE) -> float:
    """(H(X|Y)^p + H(Y|X)^p)^(1/p); p = inf gives the larger of the two"""
    p = check_p(p)
    return _norm(conditional_entropy(S, COLUMNS, base), conditional_entropy(S, ROWS, base), p)


def delta_lower(P: Dist, Q: Dist, p=1, base=DEFAULT_LOG_BASE, **solver_options) -> float:
    """Delta_p at the minimum entropy coupling of P and Q"""
    p = check_p(p)
    solution = min_entropy_coupling_exact(P, Q, 1, base, **solver_options)
    return delta_p(solution.coupling, p, base)


def delta_lower_all(P: Dist, Q: Dist, ps, base=DEFAULT_LOG_BASE, **solver_options) -> List[float]:
    """One solve, every p"""
    ps = [check_p(p) for p in ps]
    S = min_entropy_coupling_exact(P, Q, 1, base, **solver_options).coupling
    a, b = conditional_entropy(S, COLUMNS, base), conditional_entropy(S, ROWS, base)
    return [_norm(a, b, p) for p in ps]


def delta_lower_by_vertices(P: Dist, Q: Dist, p=1, base=DEFAULT_LOG_BASE,
                            cap=DEFAULT_VERTEX_CAP) -> float:
    """Direct minimum of Delta_p over every vertex of C(P,Q)"""
    p = check_p(p)
    return min(delta_p(v.joint, p, base) for v in enumerate_vertices(CouplingSpec.both(P, Q), cap))


@dataclass(frozen=True)
class BoundEntry:
    name: str
    left: float
    right: float

    @property
    def slack(self) -> float:
        return self.right - self.left


@dataclass
class BoundReport:
    """Chain of inequalities evaluated for one (P, Q) pair"""
    entries: List[BoundEntry] = field(default_factory=list)
    tolerance: float = FLOAT_TOLERANCE

    def add(self, name, left, right):
        self.entries.append(BoundEntry(name, float(left), float(right)))

    def holds(self, tolerance=None) -> bool:
        tolerance = self.tolerance if tolerance is None else tolerance
        return all(entry.slack >= -tolerance for entry in self.entries)

    def __getitem__(self, name) -> BoundEntry:
        for entry in self.entries:
            if entry.name == name:
                return entry
        raise KeyError(name)

    def as_dict(self) -> dict:
        return {
            "holds": self.holds(),
            "tolerance": self.tolerance,
            "bounds": [
                {"name": e.name, "left": e.left, "right": e.right, "slack": e.slack}
                for e in self.entries
            ],
        }


def _fano(mismatch: Fraction, log_alphabet: float, base, copies: int) -> float:
    # h is defined in bits; rescale it to the requested base
    h = binary_entropy(mismatch) / math.log2(base)
    return float(mismatch) * log_alphabet + copies * h


def bound_report(P: Dist, Q: Dist, base=DEFAULT_LOG_BASE, **solver_options) -> BoundReport:
    """
    Evaluates |H(P)-H(Q)| <= Delta_inf <= Delta_1 and the Fano-type bounds
    Delta_1 <= d_V log(|P||Q|) + 2h(d_V), Delta_inf <= d_V log max{|P|,|Q|} + h(d_V).
    """
    solution = min_entropy_coupling_exact(P, Q, 1, base, **solver_options)
    S = solution.coupling
    h_xy, h_yx = conditional_entropy(S, COLUMNS, base), conditional_entropy(S, ROWS, base)
    d1, dinf = h_xy + h_yx, max(h_xy, h_yx)
    gap = abs(shannon_entropy(P, base) - shannon_entropy(Q, base))

    dv = total_variation(P, Q)
    size_p, size_q = support_size(P), support_size(Q)
    log_b = math.log(base)
    fano_sum = _fano(dv, math.log(size_p * size_q) / log_b, base, 2)
    fano_max = _fano(dv, math.log(max(size_p, size_q)) / log_b, base, 1)
    at_maximal = delta_p(maximal_coupling(P, Q).coupling, 1, base)

    report = BoundReport()
    report.add("entropy_gap<=delta_inf", gap, dinf)
    report.add("entropy_gap<=delta_1", gap, d1)
    report.add("delta_inf<=delta_1", dinf, d1)
    report.add("delta_1<=delta_1_at_maximal_coupling", d1, at_maximal)
    report.add("delta_1_at_maximal_coupling<=fano_sum", at_maximal, fano_sum)
    report.add("delta_1<=fano_sum", d1, fano_sum)
    report.add("delta_inf<=fano_max", dinf, fano_max)
    return report


def conditional_entropy_distance_check(S: Joint, base=DEFAULT_LOG_BASE):
    """
    (Delta_1 between X and the pair (X, Y), H(Y|X)).

    The only coupling of P with S that agrees on the shared coordinate puts
    s_ij at (i, (i, j)); Delta_1 of that forced coupling is computed directly
    and must equal the conditional entropy.
    """
    n, m = S.shape
    forced = joint_from_cells(n, n * m, {(i, i * m + j): s for i, j, s in S.entries() if s > 0})
    return delta_p(forced, 1, base), conditional_entropy(S, ROWS, base)
