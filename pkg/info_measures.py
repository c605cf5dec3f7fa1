"""
Information functionals on Dist and Joint values

Per-mass terms come from scipy.special (entr, xlogy) and are accumulated with
math.fsum, so the identities between these quantities hold to
FLOAT_TOLERANCE. Renyi power sums are taken in the log domain with logsumexp,
so large orders do not underflow. Anything that only needs rational
arithmetic (total variation, mismatch probability) is returned exactly.
"""
import math
from fractions import Fraction
from typing import Union

import numpy as np
from scipy.special import entr, logsumexp, xlogy

from config import DEFAULT_LOG_BASE
from dist_core import Dist, Joint, marginals, pad
from errors import LengthMismatch, OutOfRange, ParseError

ROWS = "rows"
COLUMNS = "columns"


def _check_base(base):
    if not base > 1:
        raise OutOfRange(f"logarithm base must be > 1, got {base}")
    return float(base)


def _check_alpha(alpha):
    alpha = float(alpha)
    if math.isnan(alpha) or alpha < 0:
        raise OutOfRange(f"order alpha must be >= 0, got {alpha}")
    return alpha


def _positive_floats(P: Union[Dist, Joint]) -> np.ndarray:
    if isinstance(P, Joint):
        P = P.flatten()
    return np.array([float(p) for p in P.masses if p > 0], dtype=np.float64)


def _entropy_of_masses(masses: np.ndarray, base: float) -> float:
    if masses.size == 0:
        return 0.0
    terms = entr(masses)
    return max(0.0, math.fsum(terms.tolist()) / math.log(base))


def parse_alpha(text) -> float:
    """Order alpha from the CLI: "inf", "0", decimals"""
    try:
        value = float(str(text).strip())
    except ValueError:
        raise ParseError(f"not a valid order alpha: {text!r}") from None
    return _check_alpha(value)


def shannon_entropy(P: Dist, base=DEFAULT_LOG_BASE) -> float:
    """H(P) = -sum p_i log p_i with 0 log 0 = 0"""
    return _entropy_of_masses(_positive_floats(P), _check_base(base))


def joint_entropy(S: Joint, base=DEFAULT_LOG_BASE) -> float:
    return _entropy_of_masses(_positive_floats(S.flatten()), _check_base(base))


def conditional_entropy(S: Joint, given=COLUMNS, base=DEFAULT_LOG_BASE) -> float:
    """
    H(X|Y) when given="columns", H(Y|X) when given="rows".

    Each term uses the exact ratio s_ij / q_j (or s_ij / p_i), so a
    deterministic dependence gives exactly 0.
    """
    base = _check_base(base)
    if given not in (ROWS, COLUMNS):
        raise OutOfRange(f"given must be {ROWS!r} or {COLUMNS!r}, got {given!r}")
    P, Q = marginals(S)
    cond = P if given == ROWS else Q
    masses, ratios = [], []
    for i, j, s in S.entries():
        if s > 0:
            masses.append(float(s))
            ratios.append(float(s / cond[i if given == ROWS else j]))
    if not masses:
        return 0.0
    terms = -xlogy(np.array(masses), np.array(ratios))
    return max(0.0, math.fsum(terms.tolist()) / math.log(base))


def mutual_information(S: Joint, base=DEFAULT_LOG_BASE) -> float:
    """I(S) = sum s_ij log(s_ij / (p_i q_j))"""
    base = _check_base(base)
    P, Q = marginals(S)
    masses, ratios = [], []
    for i, j, s in S.entries():
        if s > 0:
            masses.append(float(s))
            ratios.append(float(s / (P[i] * Q[j])))
    if not masses:
        return 0.0
    terms = xlogy(np.array(masses), np.array(ratios))
    return max(0.0, math.fsum(terms.tolist()) / math.log(base))


def kl_divergence(P: Dist, Q: Dist, base=DEFAULT_LOG_BASE) -> float:
    """D(P||Q); math.inf when P is not absolutely continuous w.r.t. Q"""
    base = _check_base(base)
    if len(P) != len(Q):
        raise LengthMismatch(f"D(P||Q) needs equal lengths, got {len(P)} and {len(Q)}")
    masses, ratios = [], []
    for p, q in zip(P.masses, Q.masses):
        if p == 0:
            continue
        if q == 0:
            return math.inf
        masses.append(float(p))
        ratios.append(float(p / q))
    if not masses:
        return 0.0
    terms = xlogy(np.array(masses), np.array(ratios))
    return max(0.0, math.fsum(terms.tolist()) / math.log(base))


def log_power_sum(masses: np.ndarray, alpha: float) -> float:
    """Natural log of sum m^alpha over positive float masses"""
    return float(logsumexp(alpha * np.log(masses)))


def renyi_power_sum(P: Union[Dist, Joint], alpha) -> float:
    """sum p_i^alpha over the positive masses; underflows to 0 for huge alpha"""
    masses = _positive_floats(P)
    return math.fsum(np.power(masses, float(alpha)).tolist())


def renyi_entropy(P: Union[Dist, Joint], alpha, base=DEFAULT_LOG_BASE) -> float:
    """
    Renyi entropy of order alpha; a Joint is flattened first.

    alpha = 0 gives log of the support size, alpha = 1 the Shannon entropy,
    alpha = inf the min-entropy -log max p_i.
    """
    base = _check_base(base)
    alpha = _check_alpha(alpha)
    masses = _positive_floats(P)
    if alpha == 0:
        return math.log(masses.size) / math.log(base)
    if alpha == 1:
        return _entropy_of_masses(masses, base)
    if math.isinf(alpha):
        return max(0.0, -math.log(float(masses.max())) / math.log(base))
    return max(0.0, log_power_sum(masses, alpha) / ((1.0 - alpha) * math.log(base)))


def binary_entropy(x) -> float:
    """h(x) in bits"""
    x = float(x)
    if not 0.0 <= x <= 1.0:
        raise OutOfRange(f"binary entropy needs 0 <= x <= 1, got {x}")
    if x == 0.0 or x == 1.0:
        return 0.0
    return -x * math.log2(x) - (1.0 - x) * math.log2(1.0 - x)


def total_variation(P: Dist, Q: Dist) -> Fraction:
    """d_V(P, Q) = 1/2 sum |p_i - q_i|, shorter vector padded with zeros"""
    length = max(len(P), len(Q))
    P, Q = pad(P, length), pad(Q, length)
    return sum((abs(p - q) for p, q in zip(P.masses, Q.masses)), Fraction(0)) / 2


def mismatch_probability(S: Joint) -> Fraction:
    """P(X != Y) under S, indices shared between rows and columns"""
    n, m = S.shape
    return 1 - sum((S.rows[i][i] for i in range(min(n, m))), Fraction(0))
