"""
Finite distributions with exact rational masses
================================================

Dist is a probability vector, Joint a probability matrix. Both hold
fractions.Fraction entries and validate on construction, so any value of
either type satisfies its invariants. Zero masses are kept in place.
"""
import json
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, List, Sequence, Tuple

import numpy as np

from errors import NegativeMass, NotNormalized, ZeroLength, ParseError


def parse_rational(value, source=None) -> Fraction:
    """Exact rational from an int, Fraction, "num/den" or finite decimal string"""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise ParseError(f"not a number: {value!r}", source)
    if isinstance(value, (int, float)):
        if isinstance(value, float) and not np.isfinite(value):
            raise ParseError(f"not a finite number: {value!r}", source)
        return Fraction(value)
    if isinstance(value, str):
        text = value.strip()
        try:
            return Fraction(text)
        except (ValueError, ZeroDivisionError):
            raise ParseError(f"not a rational number: {value!r}", source) from None
    raise ParseError(f"unsupported mass type {type(value).__name__}", source)


def _check_masses(masses: Sequence[Fraction], what: str):
    for index, mass in enumerate(masses):
        if mass < 0:
            raise NegativeMass(f"{what} entry {index} is negative ({mass})")
    total = sum(masses, Fraction(0))
    if total != 1:
        raise NotNormalized(f"{what} masses sum to {total}, not 1")


@dataclass(frozen=True)
class Dist:
    """Probability vector P = (p_1, ..., p_n)"""
    masses: Tuple[Fraction, ...]

    def __post_init__(self):
        if len(self.masses) == 0:
            raise ZeroLength("a distribution needs at least one mass")
        _check_masses(self.masses, "distribution")

    def __len__(self):
        return len(self.masses)

    def __getitem__(self, index):
        return self.masses[index]

    def __iter__(self):
        return iter(self.masses)

    def as_array(self) -> np.ndarray:
        return np.array([float(m) for m in self.masses], dtype=np.float64)

    def positive(self) -> List[Fraction]:
        return [m for m in self.masses if m > 0]

    def __str__(self):
        return "[" + ", ".join(str(m) for m in self.masses) + "]"


@dataclass(frozen=True)
class Joint:
    """Probability matrix S = (s_ij); rows index X, columns index Y"""
    rows: Tuple[Tuple[Fraction, ...], ...]

    def __post_init__(self):
        if len(self.rows) == 0 or len(self.rows[0]) == 0:
            raise ZeroLength("a joint distribution needs at least one row and one column")
        width = len(self.rows[0])
        for index, row in enumerate(self.rows):
            if len(row) != width:
                raise ParseError(f"row {index} has {len(row)} entries, expected {width}")
        _check_masses([s for row in self.rows for s in row], "joint")

    @property
    def shape(self) -> Tuple[int, int]:
        return len(self.rows), len(self.rows[0])

    def entries(self) -> Iterable[Tuple[int, int, Fraction]]:
        for i, row in enumerate(self.rows):
            for j, s in enumerate(row):
                yield i, j, s

    def flatten(self) -> Dist:
        return Dist(tuple(s for row in self.rows for s in row))

    def transpose(self) -> "Joint":
        return Joint(tuple(zip(*self.rows)))

    def key(self) -> Tuple[Fraction, ...]:
        """Row-major tuple; lexicographic order on it breaks objective ties"""
        return tuple(s for row in self.rows for s in row)

    def as_array(self) -> np.ndarray:
        return np.array([[float(s) for s in row] for row in self.rows], dtype=np.float64)

    def __str__(self):
        return "[" + ", ".join("[" + ", ".join(str(s) for s in row) + "]" for row in self.rows) + "]"


def make_dist(masses: Sequence) -> Dist:
    """Validated Dist; masses are kept verbatim, zeros included"""
    return Dist(tuple(parse_rational(m) for m in masses))


def make_joint(rows: Sequence[Sequence]) -> Joint:
    return Joint(tuple(tuple(parse_rational(s) for s in row) for row in rows))


def joint_from_cells(n: int, m: int, cells) -> Joint:
    """Joint from sparse {(i, j): mass} or an iterable of (i, j, mass)"""
    grid = [[Fraction(0)] * m for _ in range(n)]
    if isinstance(cells, dict):
        for (i, j), s in cells.items():
            grid[i][j] += s
    else:
        for i, j, s in cells:
            grid[i][j] += s
    return Joint(tuple(tuple(row) for row in grid))


def uniform(m: int) -> Dist:
    if m < 1:
        raise ZeroLength(f"uniform distribution needs m >= 1, got {m}")
    return Dist(tuple(Fraction(1, m) for _ in range(m)))


def product(P: Dist, Q: Dist) -> Joint:
    """Independent coupling P x Q"""
    return Joint(tuple(tuple(p * q for q in Q.masses) for p in P.masses))


def diag(P: Dist) -> Joint:
    n = len(P)
    return Joint(tuple(tuple(P[i] if i == j else Fraction(0) for j in range(n)) for i in range(n)))


def marginals(S: Joint) -> Tuple[Dist, Dist]:
    row_sums = tuple(sum(row, Fraction(0)) for row in S.rows)
    col_sums = tuple(sum(col, Fraction(0)) for col in zip(*S.rows))
    return Dist(row_sums), Dist(col_sums)


def support(P: Dist) -> Tuple[int, ...]:
    """Indices of strictly positive masses"""
    return tuple(i for i, p in enumerate(P.masses) if p > 0)


def support_size(P: Dist) -> int:
    return len(support(P))


def is_point_mass(P: Dist) -> bool:
    return support_size(P) == 1


def is_permutation_of(P: Dist, Q: Dist) -> bool:
    """Same multiset of positive masses (zeros ignored)"""
    return sorted(P.positive()) == sorted(Q.positive())


def permute(P: Dist, order: Sequence[int]) -> Dist:
    return Dist(tuple(P.masses[i] for i in order))


def pad(P: Dist, length: int) -> Dist:
    if length <= len(P):
        return P
    return Dist(P.masses + (Fraction(0),) * (length - len(P)))


# === Serialization ===

def dist_to_json(P: Dist) -> dict:
    return {"masses": [str(m) for m in P.masses]}


def dist_from_json(data, source=None) -> Dist:
    if isinstance(data, str):
        try:
            data = json.loads(data)
        except json.JSONDecodeError as e:
            raise ParseError(f"invalid JSON ({e})", source) from None
    if not isinstance(data, dict) or not isinstance(data.get("masses"), list):
        raise ParseError('expected {"masses": [...]}', source)
    return Dist(tuple(parse_rational(m, source) for m in data["masses"]))


def joint_to_json(S: Joint) -> dict:
    return {"rows": [[str(s) for s in row] for row in S.rows]}


def joint_from_json(data, source=None) -> Joint:
    if isinstance(data, str):
        try:
            data = json.loads(data)
        except json.JSONDecodeError as e:
            raise ParseError(f"invalid JSON ({e})", source) from None
    if not isinstance(data, dict) or not isinstance(data.get("rows"), list):
        raise ParseError('expected {"rows": [[...], ...]}', source)
    rows = data["rows"]
    if not all(isinstance(row, list) for row in rows):
        raise ParseError("every row must be a list", source)
    return Joint(tuple(tuple(parse_rational(s, source) for s in row) for row in rows))


def joint_to_csv(S: Joint) -> str:
    return "\n".join(",".join(str(s) for s in row) for row in S.rows)


# === Random instances for the test suites ===

def random_dist(rng: random.Random, n: int, max_weight: int = 9,
                zero_prob: float = 0.0) -> Dist:
    """Exact rational Dist from small integer weights (at least one positive)"""
    weights = [0 if rng.random() < zero_prob else rng.randint(1, max_weight) for _ in range(n)]
    if sum(weights) == 0:
        weights[rng.randrange(n)] = rng.randint(1, max_weight)
    total = sum(weights)
    return Dist(tuple(Fraction(w, total) for w in weights))


def random_joint(rng: random.Random, n: int, m: int, max_weight: int = 9,
                 zero_prob: float = 0.2) -> Joint:
    flat = random_dist(rng, n * m, max_weight, zero_prob)
    return Joint(tuple(tuple(flat.masses[i * m:(i + 1) * m]) for i in range(n)))
