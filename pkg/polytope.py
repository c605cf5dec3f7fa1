"""
Coupling polytopes C(P,Q) and C(P,m) and their vertices
========================================================

C(P,Q) is a transportation polytope. Its vertices are exactly the members
whose support, read as edges of the bipartite graph rows x columns, is a
forest. Every such forest has a leaf, and a leaf edge carries the whole
residual mass of its leaf line, so a vertex can be rebuilt by repeatedly
picking a cell (i, j), assigning min(residual p_i, residual q_j) and retiring
the exhausted line(s). ForestSearch walks these peelings and only accepts the
one that always retires the lowest-labelled leaf, so every support forest is
produced exactly once.

Search code works on integers: all masses are scaled by the least common
denominator of P and Q.
"""
import itertools
import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, List, Optional, Sequence, Tuple

from config import DEFAULT_VERTEX_CAP, DEFAULT_THREADS, DEBUG_POLYTOPE
from dist_core import Dist, Joint, joint_from_cells, marginals, support
from errors import DimensionMismatch, InvariantViolation, VertexCapExceeded

BOTH_MARGINALS = "both_marginals"
ONE_MARGINAL = "one_marginal"

Y_OF_X = "Y_of_X"
X_OF_Y = "X_of_Y"


@dataclass(frozen=True)
class CouplingSpec:
    """Either C(P,Q) (both marginals fixed) or C(P,m) (rows fixed, m columns)"""
    variant: str
    P: Dist
    Q: Optional[Dist] = None
    m: Optional[int] = None

    @classmethod
    def both(cls, P: Dist, Q: Dist) -> "CouplingSpec":
        return cls(BOTH_MARGINALS, P, Q=Q)

    @classmethod
    def one(cls, P: Dist, m: int) -> "CouplingSpec":
        if m < 1:
            raise InvariantViolation(f"C(P,m) needs m >= 1, got {m}")
        return cls(ONE_MARGINAL, P, m=m)

    @property
    def shape(self) -> Tuple[int, int]:
        if self.variant == BOTH_MARGINALS:
            return len(self.P), len(self.Q)
        return len(self.P), self.m

    def __str__(self):
        if self.variant == BOTH_MARGINALS:
            return f"C({self.P}, {self.Q})"
        return f"C({self.P}, {self.m})"


@dataclass(frozen=True)
class TransportVertex:
    """Basic feasible solution: the coupling and its positive cells"""
    joint: Joint
    support_edges: Tuple[Tuple[int, int], ...]


def _require_both(spec: CouplingSpec, operation: str):
    if spec.variant != BOTH_MARGINALS:
        raise InvariantViolation(f"{operation} needs a C(P,Q) spec, got {spec}")


def _require_one(spec: CouplingSpec, operation: str):
    if spec.variant != ONE_MARGINAL:
        raise InvariantViolation(f"{operation} needs a C(P,m) spec, got {spec}")


def contains(spec: CouplingSpec, S: Joint) -> bool:
    """Exact marginal test (rows only for C(P,m))"""
    if S.shape != spec.shape:
        raise DimensionMismatch(f"joint has shape {S.shape}, {spec} needs {spec.shape}")
    rows, cols = marginals(S)
    if rows != spec.P:
        return False
    return spec.variant == ONE_MARGINAL or cols == spec.Q


def positive_edges(S: Joint) -> Tuple[Tuple[int, int], ...]:
    return tuple((i, j) for i, j, s in S.entries() if s > 0)


def support_is_forest(edges: Sequence[Tuple[int, int]], n: int, m: int) -> bool:
    """Union-find cycle check on the bipartite graph rows x columns"""
    parent = list(range(n + m))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for i, j in edges:
        a, b = find(i), find(n + j)
        if a == b:
            return False
        parent[a] = b
    return True


def is_vertex(spec: CouplingSpec, S: Joint) -> bool:
    _require_both(spec, "is_vertex")
    n, m = spec.shape
    return contains(spec, S) and support_is_forest(positive_edges(S), n, m)


def is_functional(S: Joint, direction=Y_OF_X) -> bool:
    """Y_of_X: every row has at most one positive entry; X_of_Y: same for columns"""
    if direction == X_OF_Y:
        S = S.transpose()
    elif direction != Y_OF_X:
        raise InvariantViolation(f"unknown direction {direction!r}")
    return all(sum(1 for s in row if s > 0) <= 1 for row in S.rows)


def spanning_tree_bound(spec: CouplingSpec) -> int:
    """n'^(m'-1) * m'^(n'-1): spanning trees of the positive-support K_{n',m'}"""
    _require_both(spec, "spanning_tree_bound")
    n, m = len(support(spec.P)), len(support(spec.Q))
    return n ** (m - 1) * m ** (n - 1)


class ForestSearch:
    """
    Canonical leaf-peeling over the spanning-forest supports of C(P,Q).

    Lines are labelled rows 0..n-1 then columns n..n+m-1. A move is a cell
    (i, j) with both lines active; it assigns v = min(residual row, residual
    column) and retires the exhausted line(s). A move is accepted only if the
    retired line is the lowest-labelled leaf of the forest being built, which
    is enforced through `need`: lower-labelled active lines must still
    receive at least two edges.
    """

    def __init__(self, P: Dist, Q: Dist):
        self.n, self.m = len(P), len(Q)
        denominators = [p.denominator for p in P.masses] + [q.denominator for q in Q.masses]
        self.scale = math.lcm(*denominators)
        self.row_res = [int(p * self.scale) for p in P.masses]
        self.col_res = [int(q * self.scale) for q in Q.masses]
        self.need = [0] * (self.n + self.m)
        self.edges: List[Tuple[int, int, int]] = []
        self._trail = []

    def complete(self) -> bool:
        return not any(self.row_res)

    def active_rows(self) -> List[int]:
        return [i for i, r in enumerate(self.row_res) if r > 0]

    def active_cols(self) -> List[int]:
        return [j for j, c in enumerate(self.col_res) if c > 0]

    def moves(self) -> List[Tuple[int, int]]:
        cols = self.active_cols()
        return [(i, j) for i in self.active_rows() for j in cols]

    def apply(self, move: Tuple[int, int]) -> bool:
        """Assign the cell if canonical; returns False (state untouched) otherwise"""
        i, j = move
        n = self.n
        r, c = self.row_res[i], self.col_res[j]
        v = min(r, c)
        row_done, col_done = r == v, c == v
        retired = i if row_done else n + j

        # retired lines take this edge as their last one
        if row_done and self.need[i] > 1:
            return False
        if col_done and self.need[n + j] > 1:
            return False

        saved = {}
        for label in range(retired):
            if label == i or label == n + j:
                continue
            active = self.row_res[label] > 0 if label < n else self.col_res[label - n] > 0
            if active and self.need[label] < 2:
                saved[label] = self.need[label]
                self.need[label] = 2
        saved.setdefault(i, self.need[i])
        saved.setdefault(n + j, self.need[n + j])
        self.need[i] = max(self.need[i] - 1, 0)
        self.need[n + j] = max(self.need[n + j] - 1, 0)

        self.row_res[i] -= v
        self.col_res[j] -= v
        self.edges.append((i, j, v))
        self._trail.append((i, j, v, saved))
        return True

    def undo(self):
        i, j, v, saved = self._trail.pop()
        self.edges.pop()
        self.row_res[i] += v
        self.col_res[j] += v
        for label, value in saved.items():
            self.need[label] = value

    def cells(self, edges=None) -> dict:
        edges = self.edges if edges is None else edges
        return {(i, j): Fraction(v, self.scale) for i, j, v in edges}

    def to_vertex(self, edges=None) -> TransportVertex:
        cells = self.cells(edges)
        joint = joint_from_cells(self.n, self.m, cells)
        return TransportVertex(joint, tuple(sorted(cells)))


def _collect_branch(P: Dist, Q: Dist, root: Tuple[int, int], cap: int):
    search = ForestSearch(P, Q)
    found = []
    if not search.apply(root):
        return found

    def walk():
        if search.complete():
            found.append(tuple(search.edges))
            if len(found) > cap:
                raise VertexCapExceeded(len(found), cap)
            return
        for move in search.moves():
            if search.apply(move):
                walk()
                search.undo()

    walk()
    return found


def enumerate_vertices(spec: CouplingSpec, cap: int = DEFAULT_VERTEX_CAP,
                       threads: int = DEFAULT_THREADS) -> List[TransportVertex]:
    """
    All vertices of C(P,Q), sorted by row-major matrix order.

    Root moves are explored as independent branches (optionally on a thread
    pool); the merged, sorted list does not depend on the thread count.
    """
    _require_both(spec, "enumerate_vertices")
    P, Q = spec.P, spec.Q
    roots = ForestSearch(P, Q).moves()
    if threads > 1 and len(roots) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            branches = list(pool.map(lambda root: _collect_branch(P, Q, root, cap), roots))
    else:
        branches = [_collect_branch(P, Q, root, cap) for root in roots]

    builder = ForestSearch(P, Q)
    vertices = {}
    for branch in branches:
        for edges in branch:
            vertex = builder.to_vertex(edges)
            vertices.setdefault(vertex.joint.key(), vertex)
        if len(vertices) > cap:
            raise VertexCapExceeded(len(vertices), cap)

    logging.info(f"{spec}: {len(vertices)} vertices from {len(roots)} root branches")
    if DEBUG_POLYTOPE:
        for root, branch in zip(roots, branches):
            logging.info(f"   root {root}: {len(branch)} forests")
    return [vertices[key] for key in sorted(vertices)]


def enumerate_row_deterministic(spec: CouplingSpec) -> Iterator[Joint]:
    """The m^n' vertices of C(P,m): each positive row sends all its mass to one column"""
    _require_one(spec, "enumerate_row_deterministic")
    P, m = spec.P, spec.m
    rows = support(P)
    for columns in itertools.product(range(m), repeat=len(rows)):
        yield joint_from_cells(len(P), m, {(i, j): P[i] for i, j in zip(rows, columns)})


def northwest_corner(spec: CouplingSpec) -> TransportVertex:
    """Northwest-corner rule over the positive rows and columns"""
    _require_both(spec, "northwest_corner")
    search = ForestSearch(spec.P, spec.Q)
    rows, cols = support(spec.P), support(spec.Q)
    a, b = 0, 0
    edges = []
    while a < len(rows) and b < len(cols):
        i, j = rows[a], cols[b]
        v = min(search.row_res[i], search.col_res[j])
        search.row_res[i] -= v
        search.col_res[j] -= v
        edges.append((i, j, v))
        if search.row_res[i] == 0:
            a += 1
        if search.col_res[j] == 0:
            b += 1
    return search.to_vertex(edges)
