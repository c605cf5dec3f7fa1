"""
Unbounded Renyi entropy over C(P,P)
===================================

For 0 < alpha < 1 and p_i proportional to i^-beta, the stage S_n puts the
constant c = p_n n^-r on every cell of the n x n corner, couples the leftover
row/column masses a_i = p_i - n c by their normalized product, and keeps the
diagonal p_i for i > n. Sum of S_n^alpha is at least n^(2 - r alpha) p_n^alpha,
which grows without bound when r + beta < 2/alpha, while H_alpha(P) stays
finite when beta alpha > 1.

The source is truncated to N terms and renormalized exactly. A stage is kept
in structured form (corner constant, residual vector, diagonal tail) since
the block has n^2 cells; it is only materialised as a Joint for small N.
"""
import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace
from fractions import Fraction
from functools import lru_cache
from typing import List, Sequence, Tuple

import numpy as np
from scipy.special import entr, logsumexp

from config import (
    DEFAULT_LOG_BASE, DEFAULT_THREADS, MAX_DENSE_STAGE_SIZE, COUNTEREXAMPLE_CHUNK_ROWS
)
from dist_core import Dist, Joint, joint_from_cells
from errors import BudgetExceeded, InvariantViolation
from info_measures import renyi_entropy, log_power_sum, _check_alpha, _check_base


@dataclass(frozen=True)
class UnboundedFamilyParams:
    alpha: float
    beta: float
    r: float
    n: int
    N: int

    def __post_init__(self):
        if not 0 < self.alpha < 1:
            raise InvariantViolation(f"alpha must lie in (0, 1), got {self.alpha}")
        if not self.beta > 1:
            raise InvariantViolation(f"beta must be > 1, got {self.beta}")
        if not self.r > 1:
            raise InvariantViolation(f"r must be > 1, got {self.r}")
        if self.n < 1 or self.N < self.n:
            raise InvariantViolation(f"need 1 <= n <= N, got n={self.n}, N={self.N}")
        if not self.beta * self.alpha > 1:
            raise InvariantViolation(
                f"beta*alpha = {self.beta * self.alpha} must exceed 1 for a finite H_alpha(P)")
        if not self.r + self.beta < 2 / self.alpha:
            raise InvariantViolation(
                f"r + beta = {self.r + self.beta} must be below 2/alpha = {2 / self.alpha}")


@lru_cache(maxsize=8)
def _power_law_source(beta: float, N: int) -> Dist:
    weights = [Fraction(float(i) ** -beta) for i in range(1, N + 1)]
    total = sum(weights, Fraction(0))
    return Dist(tuple(w / total for w in weights))


def truncated_source(params: UnboundedFamilyParams) -> Dist:
    """P over {1..N} with p_i proportional to i^-beta, normalized exactly"""
    return _power_law_source(float(params.beta), params.N)


class UnboundedStage:
    """S_n in structured form: corner constant, residual vector, diagonal tail"""

    def __init__(self, params: UnboundedFamilyParams, source: Dist):
        self.params = params
        self.source = source
        n = params.n
        p_n = source[n - 1]
        self.corner = p_n * Fraction(float(n) ** -params.r)
        self.residuals = tuple(source[i] - n * self.corner for i in range(n))
        self.residual_total = sum(self.residuals, Fraction(0))
        if any(a < 0 for a in self.residuals):
            raise InvariantViolation(f"corner constant {self.corner} leaves a negative residual")

    @property
    def shape(self) -> Tuple[int, int]:
        return self.params.N, self.params.N

    def entry(self, i: int, j: int) -> Fraction:
        n = self.params.n
        if i < n and j < n:
            if self.residual_total == 0:
                return self.corner
            return self.corner + self.residuals[i] * self.residuals[j] / self.residual_total
        return self.source[i] if i == j else Fraction(0)

    def row_sums(self) -> Tuple[Fraction, ...]:
        """Exact; n c + a_i on the corner. The block is symmetric so these are the column sums too"""
        n = self.params.n
        block = tuple(n * self.corner + a for a in self.residuals)
        return block + tuple(self.source.masses[n:])

    def in_coupling_set(self) -> bool:
        return self.row_sums() == self.source.masses

    def to_joint(self) -> Joint:
        N = self.params.N
        if N > MAX_DENSE_STAGE_SIZE:
            raise BudgetExceeded(N * N, MAX_DENSE_STAGE_SIZE ** 2, "dense stage")
        cells = {}
        for i in range(N):
            for j in range(N):
                value = self.entry(i, j)
                if value:
                    cells[(i, j)] = value
        return joint_from_cells(N, N, cells)

    def _block_chunks(self):
        n = self.params.n
        corner = float(self.corner)
        a = np.array([float(x) for x in self.residuals], dtype=np.float64)
        total = float(self.residual_total)
        for start in range(0, n, COUNTEREXAMPLE_CHUNK_ROWS):
            stop = min(start + COUNTEREXAMPLE_CHUNK_ROWS, n)
            if total == 0:
                yield np.full((stop - start, n), corner)
            else:
                yield corner + np.outer(a[start:stop], a) / total

    def _tail(self) -> np.ndarray:
        tail = np.array([float(p) for p in self.source.masses[self.params.n:]], dtype=np.float64)
        return tail[tail > 0]

    def renyi_entropy(self, alpha, base=DEFAULT_LOG_BASE) -> float:
        """
        H_alpha(S_n) for any order alpha >= 0. Power sums are combined in the
        log domain chunk by chunk, Shannon terms with math.fsum.
        """
        alpha = _check_alpha(alpha)
        log_base = math.log(_check_base(base))
        tail = self._tail()
        if alpha == 0:
            count = self.params.n ** 2 + tail.size
            return math.log(count) / log_base
        if math.isinf(alpha):
            top = max(float(chunk.max()) for chunk in self._block_chunks())
            if tail.size:
                top = max(top, float(tail.max()))
            return -math.log(top) / log_base
        if alpha == 1:
            parts = [float(np.sum(entr(chunk))) for chunk in self._block_chunks()]
            parts.append(float(np.sum(entr(tail))))
            return math.fsum(parts) / log_base
        logs = [log_power_sum(chunk.ravel(), alpha) for chunk in self._block_chunks()]
        if tail.size:
            logs.append(log_power_sum(tail, alpha))
        return float(logsumexp(logs)) / ((1.0 - alpha) * log_base)


def stage_lower_bound(params: UnboundedFamilyParams, source: Dist, base=DEFAULT_LOG_BASE) -> float:
    """(1/(1-alpha)) log(n^(2 - r alpha) p_n^alpha)"""
    a, n = params.alpha, params.n
    p_n = float(source[n - 1])
    exponent = (2 - params.r * a) * math.log(n) + a * math.log(p_n)
    return exponent / ((1 - a) * math.log(_check_base(base)))


def build_stage(params: UnboundedFamilyParams, base=DEFAULT_LOG_BASE) -> Tuple[UnboundedStage, float]:
    source = truncated_source(params)
    return UnboundedStage(params, source), stage_lower_bound(params, source, base)


def renyi_of_truncated_source(params: UnboundedFamilyParams, N: int = None, base=DEFAULT_LOG_BASE) -> float:
    """H_alpha(P) of the source truncated to N terms (params.N by default)"""
    if N is not None:
        params = replace(params, n=min(params.n, N), N=N)
    return renyi_entropy(truncated_source(params), params.alpha, base)


def tail_bound(params: UnboundedFamilyParams, base=DEFAULT_LOG_BASE) -> float:
    """
    Upper bound on |H_alpha(P_M) - H_alpha(P_N)| for every M > N, infinite M
    included. Both tails are bounded by the integral of x^-s from N, so
    sum_{i>N} i^-s <= N^(1-s) / (s-1).
    """
    a, b, N = params.alpha, params.beta, params.N
    i = np.arange(1, N + 1, dtype=np.float64)
    power_head = math.fsum(np.power(i, -b * a).tolist())
    mass_head = math.fsum(np.power(i, -b).tolist())
    power_tail = N ** (1 - b * a) / (b * a - 1)
    mass_tail = N ** (1 - b) / (b - 1)
    spread = max(math.log1p(power_tail / power_head), a * math.log1p(mass_tail / mass_head))
    return spread / ((1 - a) * math.log(_check_base(base)))


@dataclass(frozen=True)
class TraceRow:
    n: int
    H_alpha: float
    lower_bound: float
    H_alpha_P: float

    def as_dict(self) -> dict:
        return {"n": self.n, "H_alpha": self.H_alpha, "lower_bound": self.lower_bound,
                "H_alpha_P": self.H_alpha_P}


def divergence_trace(params: UnboundedFamilyParams, stages: Sequence[int], base=DEFAULT_LOG_BASE,
                     threads=DEFAULT_THREADS) -> List[TraceRow]:
    """One row per stage n; params.n is replaced by each stage in turn"""
    stages = list(stages)
    if any(b <= a for a, b in zip(stages, stages[1:])):
        raise InvariantViolation(f"stages must be strictly increasing, got {stages}")
    staged = [replace(params, n=n) for n in stages]
    h_source = renyi_entropy(truncated_source(params), params.alpha, base)

    def run(stage_params):
        stage, bound = build_stage(stage_params, base)
        return TraceRow(stage_params.n, stage.renyi_entropy(stage_params.alpha, base), bound, h_source)

    if threads > 1 and len(staged) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            rows = list(pool.map(run, staged))
    else:
        rows = [run(p) for p in staged]

    for row in rows:
        logging.info(f"📈 n={row.n}: H_alpha={row.H_alpha:.6f} bound={row.lower_bound:.6f}")
    return rows
