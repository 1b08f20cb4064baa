"""
Integer Chain Algebra
Sparse integer matrices, Smith normal form, (co)homology with generators,
induced maps, Lefschetz numbers, chain homotopies and boundary solving
"""

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Dict, List, Optional

import numpy as np

import config
import log_manager
from errors import InvariantError, LevelMismatchError, PreconditionError, ShapeError
from simplicial import SimplicialComplex, Subcomplex, simplex_labels


# ===== SPARSE MATRICES =====

def _zeros(rows, cols):
    return np.zeros((rows, cols), dtype=object)


def _identity(n):
    eye = _zeros(n, n)
    for i in range(n):
        eye[i, i] = 1
    return eye


def _matmul(a, b):
    """Exact product of object arrays, safe for empty inner dimension"""
    if a.shape[1] != b.shape[0]:
        raise ShapeError(f"cannot multiply {a.shape} by {b.shape}")
    if a.shape[1] == 0 or a.shape[0] == 0 or b.shape[1] == 0:
        return _zeros(a.shape[0], b.shape[1])
    return np.dot(a, b)


class SparseIntegerMatrix:
    """Integer matrix stored as {(row, col): nonzero int}"""

    def __init__(self, rows, cols, entries=None):
        self.rows = rows
        self.cols = cols
        self.entries = {}
        for (r, c), value in (entries or {}).items():
            if not (0 <= r < rows and 0 <= c < cols):
                raise ShapeError(f"entry ({r}, {c}) outside {rows}x{cols}")
            if value:
                self.entries[(r, c)] = int(value)
        self._columns = None

    @classmethod
    def zeros(cls, rows, cols):
        return cls(rows, cols)

    @classmethod
    def identity(cls, n):
        return cls(n, n, {(i, i): 1 for i in range(n)})

    @classmethod
    def from_dense(cls, data):
        array = np.array(data, dtype=object)
        if array.ndim != 2:
            array = array.reshape(len(data), -1)
        rows, cols = array.shape
        return cls(rows, cols, {(r, c): array[r, c] for r in range(rows) for c in range(cols)
                                if array[r, c] != 0})

    @property
    def shape(self):
        return (self.rows, self.cols)

    def get(self, r, c):
        return self.entries.get((r, c), 0)

    def column(self, c):
        """Nonzero entries of a column as {row: value}"""
        if self._columns is None:
            columns = {}
            for (r, cc), v in self.entries.items():
                columns.setdefault(cc, {})[r] = v
            self._columns = columns
        return self._columns.get(c, {})

    def to_array(self):
        array = _zeros(self.rows, self.cols)
        for (r, c), v in self.entries.items():
            array[r, c] = v
        return array

    def to_dense(self):
        return [[self.get(r, c) for c in range(self.cols)] for r in range(self.rows)]

    def transpose(self):
        return SparseIntegerMatrix(self.cols, self.rows, {(c, r): v for (r, c), v in self.entries.items()})

    def __matmul__(self, other):
        if self.cols != other.rows:
            raise ShapeError(f"cannot multiply {self.shape} by {other.shape}")
        by_row = {}
        for (k, j), v in other.entries.items():
            by_row.setdefault(k, []).append((j, v))
        result = {}
        for (i, k), a in self.entries.items():
            for j, b in by_row.get(k, ()):
                result[(i, j)] = result.get((i, j), 0) + a * b
        return SparseIntegerMatrix(self.rows, other.cols, result)

    def __add__(self, other):
        if self.shape != other.shape:
            raise ShapeError(f"cannot add {self.shape} and {other.shape}")
        result = dict(self.entries)
        for key, v in other.entries.items():
            result[key] = result.get(key, 0) + v
        return SparseIntegerMatrix(self.rows, self.cols, result)

    def __neg__(self):
        return SparseIntegerMatrix(self.rows, self.cols, {k: -v for k, v in self.entries.items()})

    def __sub__(self, other):
        return self + (-other)

    def __eq__(self, other):
        if not isinstance(other, SparseIntegerMatrix):
            return NotImplemented
        return self.shape == other.shape and self.entries == other.entries

    def __repr__(self):
        return f"SparseIntegerMatrix({self.rows}x{self.cols}, nnz={len(self.entries)})"

    def is_zero(self):
        return not self.entries

    def trace(self):
        if self.rows != self.cols:
            raise ShapeError("trace of a non-square matrix")
        return sum(v for (r, c), v in self.entries.items() if r == c)

    def select(self, rows=None, cols=None):
        """Submatrix on the given row and column index lists"""
        rows = list(range(self.rows)) if rows is None else list(rows)
        cols = list(range(self.cols)) if cols is None else list(cols)
        row_pos = {r: i for i, r in enumerate(rows)}
        col_pos = {c: j for j, c in enumerate(cols)}
        return SparseIntegerMatrix(len(rows), len(cols), {
            (row_pos[r], col_pos[c]): v for (r, c), v in self.entries.items()
            if r in row_pos and c in col_pos})

    def to_dict(self):
        return {'rows': self.rows, 'cols': self.cols,
                'entries': [[r, c, v] for (r, c), v in sorted(self.entries.items())]}


# ===== SMITH NORMAL FORM =====

@dataclass
class SmithDecomposition:
    """M = U D V with U, V unimodular; left M right = D where left = U^-1, right = V^-1"""
    U: SparseIntegerMatrix
    D: SparseIntegerMatrix
    V: SparseIntegerMatrix
    left: np.ndarray = field(repr=False)
    right: np.ndarray = field(repr=False)
    left_inverse: np.ndarray = field(repr=False)
    right_inverse: np.ndarray = field(repr=False)

    @property
    def diagonal(self):
        """Nonzero invariant factors d_1 | d_2 | ..."""
        return [self.D.get(i, i) for i in range(min(self.D.shape)) if self.D.get(i, i) != 0]

    @property
    def rank(self):
        return len(self.diagonal)

    def check(self, M):
        """Reconstruction, unimodularity and divisibility; raises InvariantError"""
        if self.U @ self.D @ self.V != M:
            raise InvariantError("Smith decomposition does not reconstruct the matrix")
        rows, cols = M.shape
        if not np.array_equal(_matmul(self.left, self.left_inverse), _identity(rows)):
            raise InvariantError("left transform is not unimodular")
        if not np.array_equal(_matmul(self.right_inverse, self.right), _identity(cols)):
            raise InvariantError("right transform is not unimodular")
        diag = self.diagonal
        for a, b in zip(diag, diag[1:]):
            if a <= 0 or b % a != 0:
                raise InvariantError(f"divisibility chain broken at {a}, {b}")
        return True


class _Reducer:
    """Row and column operations on an object array, tracking both transforms"""

    def __init__(self, array):
        self.A = array.copy()
        m, n = self.A.shape
        self.P = _identity(m)
        self.Pinv = _identity(m)
        self.Q = _identity(n)
        self.Qinv = _identity(n)

    def swap_rows(self, i, j):
        if i == j:
            return
        self.A[[i, j], :] = self.A[[j, i], :]
        self.P[[i, j], :] = self.P[[j, i], :]
        self.Pinv[:, [i, j]] = self.Pinv[:, [j, i]]

    def add_row(self, i, j, q):
        """row i += q * row j"""
        self.A[i, :] = self.A[i, :] + q * self.A[j, :]
        self.P[i, :] = self.P[i, :] + q * self.P[j, :]
        self.Pinv[:, j] = self.Pinv[:, j] - q * self.Pinv[:, i]

    def negate_row(self, i):
        self.A[i, :] = -self.A[i, :]
        self.P[i, :] = -self.P[i, :]
        self.Pinv[:, i] = -self.Pinv[:, i]

    def swap_cols(self, i, j):
        if i == j:
            return
        self.A[:, [i, j]] = self.A[:, [j, i]]
        self.Q[:, [i, j]] = self.Q[:, [j, i]]
        self.Qinv[[i, j], :] = self.Qinv[[j, i], :]

    def add_col(self, i, j, q):
        """col i += q * col j"""
        self.A[:, i] = self.A[:, i] + q * self.A[:, j]
        self.Q[:, i] = self.Q[:, i] + q * self.Q[:, j]
        self.Qinv[j, :] = self.Qinv[j, :] - q * self.Qinv[i, :]


def _find_pivot(A, t):
    """Smallest absolute nonzero entry of A[t:, t:], ties by (row, col)"""
    best = None
    m, n = A.shape
    for i in range(t, m):
        for j in range(t, n):
            value = A[i, j]
            if value != 0 and (best is None or abs(value) < best[0]):
                best = (abs(value), i, j)
    return best


def _smith_array(array):
    red = _Reducer(array)
    A = red.A
    m, n = A.shape
    for t in range(min(m, n)):
        pivot = _find_pivot(red.A, t)
        if pivot is None:
            break
        red.swap_rows(t, pivot[1])
        red.swap_cols(t, pivot[2])
        while True:
            A = red.A
            for i in range(t + 1, m):
                if A[i, t] != 0:
                    red.add_row(i, t, -(A[i, t] // A[t, t]))
            left = [i for i in range(t + 1, m) if red.A[i, t] != 0]
            if left:
                red.swap_rows(t, min(left, key=lambda i: (abs(red.A[i, t]), i)))
                continue
            A = red.A
            for j in range(t + 1, n):
                if A[t, j] != 0:
                    red.add_col(j, t, -(A[t, j] // A[t, t]))
            left = [j for j in range(t + 1, n) if red.A[t, j] != 0]
            if left:
                red.swap_cols(t, min(left, key=lambda j: (abs(red.A[t, j]), j)))
                continue
            A = red.A
            bad = next(((i, j) for i in range(t + 1, m) for j in range(t + 1, n)
                        if A[i, j] % A[t, t] != 0), None)
            if bad is None:
                break
            red.add_row(t, bad[0], 1)
        if red.A[t, t] < 0:
            red.negate_row(t)
    return red


def smith_normal_form(M):
    """
    Smith normal form of an integer matrix

    Pivot rule: smallest absolute value, ties broken by (row, col).

    Returns:
        SmithDecomposition with M = U D V
    """
    red = _smith_array(M.to_array())
    rows, cols = M.shape
    D = SparseIntegerMatrix(rows, cols, {(i, i): red.A[i, i] for i in range(min(rows, cols))})
    U = SparseIntegerMatrix(rows, rows, {(r, c): red.Pinv[r, c] for r in range(rows)
                                         for c in range(rows) if red.Pinv[r, c] != 0})
    V = SparseIntegerMatrix(cols, cols, {(r, c): red.Qinv[r, c] for r in range(cols)
                                         for c in range(cols) if red.Qinv[r, c] != 0})
    return SmithDecomposition(U, D, V, red.P, red.Q, red.Pinv, red.Qinv)


# ===== CHAINS =====

Chain = Dict[tuple, int]


def simplex_boundary(simplex):
    """Signed facets: d[v0..vk] = sum (-1)^i [v0..^vi..vk]"""
    if len(simplex) <= 1:
        return {}
    return {simplex[:i] + simplex[i + 1:]: (-1) ** i for i in range(len(simplex))}


def chain_add(a, b, scale=1):
    """a + scale * b, zeros dropped"""
    result = dict(a)
    for s, v in b.items():
        total = result.get(s, 0) + scale * v
        if total:
            result[s] = total
        else:
            result.pop(s, None)
    return result


def chain_boundary(chain):
    result = {}
    for s, v in chain.items():
        result = chain_add(result, simplex_boundary(s), v)
    return result


def chain_augmentation(chain):
    return sum(v for s, v in chain.items() if len(s) == 1)


def chain_support(chain):
    return {s for s, v in chain.items() if v}


def chain_degree(chain):
    degrees = {len(s) - 1 for s in chain}
    if len(degrees) > 1:
        raise ShapeError("chain mixes dimensions")
    return degrees.pop() if degrees else None


def chain_to_dict(chain):
    """JSON form: list of [coefficient, vertex labels] in sorted label order"""
    return sorted([[v, simplex_labels(s)] for s, v in chain.items()], key=lambda e: e[1])


# ===== CHAIN COMPLEXES =====

class ChainComplexData:
    """Simplicial chain complex C_*(K; Z) in the canonical basis"""

    def __init__(self, complex_):
        self.complex = complex_
        self.dimension = complex_.dimension
        self.basis = [complex_.simplices(k) for k in range(self.dimension + 1)]
        self.boundary = {}
        for k in range(1, self.dimension + 1):
            entries = {}
            for j, s in enumerate(self.basis[k]):
                for face, sign in simplex_boundary(s).items():
                    entries[(complex_.index(face), j)] = sign
            self.boundary[k] = SparseIntegerMatrix(self.size(k - 1), self.size(k), entries)
        self.augmentation = SparseIntegerMatrix(1, self.size(0), {(0, j): 1 for j in range(self.size(0))})
        self._reductions = {}

        for k in range(2, self.dimension + 1):
            if not (self.boundary[k - 1] @ self.boundary[k]).is_zero():
                raise InvariantError(f"boundary squared is nonzero in degree {k}")
        if self.dimension >= 1 and not (self.augmentation @ self.boundary[1]).is_zero():
            raise InvariantError("augmentation does not vanish on boundaries")

    def size(self, k):
        return self.complex.count(k)

    def boundary_matrix(self, k):
        """d_k: C_k -> C_{k-1}, zero matrix outside 1..dim"""
        if k in self.boundary:
            return self.boundary[k]
        return SparseIntegerMatrix(self.size(k - 1) if k >= 1 else 0, self.size(k))

    def vector(self, chain, k):
        vec = np.zeros(self.size(k), dtype=object)
        for s, v in chain.items():
            vec[self.complex.index(s)] = v
        return vec

    def chain_from_vector(self, vec, k):
        basis = self.complex.simplices(k)
        return {basis[i]: int(x) for i, x in enumerate(vec) if x != 0}

    def reduction(self, k, kind='homology', reduced=False):
        key = (k, kind, reduced)
        if key not in self._reductions:
            self._reductions[key] = _build_reduction(self, k, kind, reduced)
        return self._reductions[key]

    def degrees(self, reduced=False):
        start = -1 if reduced else 0
        return list(range(start, self.dimension + 1))

    def __repr__(self):
        return f"ChainComplexData({self.complex!r})"


@lru_cache(maxsize=None)
def boundary_matrices(c):
    """Chain complex data of a complex (cached per complex)"""
    if isinstance(c, Subcomplex):
        c = c.as_complex()
    return ChainComplexData(c)


# ===== HOMOLOGY =====

class _Reduction:
    """
    ker A / im B for one degree, with generators

    A: outgoing map from the degree (rows x n), B: incoming map (n x cols)
    """

    def __init__(self, n, A, B):
        self.n = n
        outgoing = _smith_array(A)
        self.rank_out = sum(1 for i in range(min(A.shape)) if outgoing.A[i, i] != 0)
        self.Q = outgoing.Q
        self.Qinv = outgoing.Qinv
        r = self.rank_out
        self.cycle_basis = self.Q[:, r:]
        in_cycles = _matmul(self.Qinv, B)[r:, :]
        incoming = _smith_array(in_cycles)
        self.z = n - r
        self.orders = [incoming.A[i, i] for i in range(min(in_cycles.shape)) if incoming.A[i, i] != 0]
        self.P = incoming.P
        self.generator_matrix = _matmul(self.cycle_basis, incoming.Pinv)

    @property
    def free_indices(self):
        return list(range(len(self.orders), self.z))

    @property
    def torsion_indices(self):
        return [i for i, d in enumerate(self.orders) if d > 1]

    @property
    def rank(self):
        return self.z - len(self.orders)

    @property
    def torsion(self):
        return [self.orders[i] for i in self.torsion_indices]

    def generator(self, i):
        return self.generator_matrix[:, i]

    def coordinates(self, vec):
        """Coordinates of a cycle in the generator basis (torsion part not reduced)"""
        full = _matmul(self.Qinv, vec.reshape(-1, 1))[:, 0]
        if any(x != 0 for x in full[:self.rank_out]):
            raise PreconditionError("vector is not a cycle")
        return _matmul(self.P, full[self.rank_out:].reshape(-1, 1))[:, 0]


def _build_reduction(cc, k, kind, reduced):
    n_k = 1 if k == -1 else cc.size(k)
    if kind == 'homology':
        if k == -1:
            A = _zeros(0, 1)
            B = cc.augmentation.to_array()
        else:
            if k == 0:
                A = cc.augmentation.to_array() if reduced else _zeros(0, n_k)
            else:
                A = cc.boundary_matrix(k).to_array()
            B = cc.boundary_matrix(k + 1).to_array()
            if k == cc.dimension:
                B = _zeros(n_k, 0)
    elif kind == 'cohomology':
        A = cc.boundary_matrix(k + 1).to_array().T.copy() if k < cc.dimension else _zeros(0, n_k)
        B = cc.boundary_matrix(k).to_array().T.copy() if k >= 1 else _zeros(n_k, 0)
    else:
        raise PreconditionError(f"unknown reduction kind {kind!r}")
    return _Reduction(n_k, A, B)


class HomologyProfile:
    """Per-degree free rank and torsion coefficients d_1 | d_2 | ..."""

    def __init__(self, groups):
        self.groups = {k: (rank, list(torsion)) for k, (rank, torsion) in groups.items()}
        for k, (_, torsion) in self.groups.items():
            for a, b in zip(torsion, torsion[1:]):
                if b % a != 0:
                    raise InvariantError(f"torsion of degree {k} breaks the divisibility chain")

    def rank(self, k):
        return self.groups.get(k, (0, []))[0]

    def torsion(self, k):
        return self.groups.get(k, (0, []))[1]

    def betti(self):
        return [self.rank(k) for k in sorted(self.groups) if k >= 0]

    def is_zero(self):
        return all(rank == 0 and not torsion for rank, torsion in self.groups.values())

    def nonzero_degrees(self):
        return [k for k in sorted(self.groups) if self.groups[k][0] or self.groups[k][1]]

    def direct_sum(self, other):
        groups = {}
        for k in set(self.groups) | set(other.groups):
            torsion = self.torsion(k) + other.torsion(k)
            groups[k] = (self.rank(k) + other.rank(k), _invariant_factors(torsion))
        return HomologyProfile(groups)

    def __eq__(self, other):
        if not isinstance(other, HomologyProfile):
            return NotImplemented
        degrees = set(self.groups) | set(other.groups)
        return all(self.rank(k) == other.rank(k) and self.torsion(k) == other.torsion(k)
                   for k in degrees)

    def __repr__(self):
        return f"HomologyProfile({self.to_dict()})"

    def to_dict(self):
        return {str(k): {'rank': rank, 'torsion': torsion}
                for k, (rank, torsion) in sorted(self.groups.items())}


def _invariant_factors(orders):
    """Normalize a list of cyclic orders to an invariant factor chain"""
    if not orders:
        return []
    diag = SparseIntegerMatrix(len(orders), len(orders), {(i, i): d for i, d in enumerate(orders)})
    return [d for d in smith_normal_form(diag).diagonal if d > 1]


def _profile(cc, kind, reduced):
    degrees = cc.degrees(reduced and kind == 'homology')
    if config.HOMOLOGY_WORKERS > 1:
        with ThreadPoolExecutor(max_workers=config.HOMOLOGY_WORKERS) as pool:
            reductions = list(pool.map(lambda k: cc.reduction(k, kind, reduced), degrees))
    else:
        reductions = [cc.reduction(k, kind, reduced) for k in degrees]
    return HomologyProfile({k: (red.rank, red.torsion) for k, red in zip(degrees, reductions)})


def homology(cc, reduced=False):
    """H_k = ker d_k / im d_{k+1} via Smith normal form; reduced uses the augmentation"""
    profile = _profile(cc, 'homology', reduced)
    if reduced and cc.complex.is_empty():
        profile.groups[-1] = (1, [])
    return profile


def cohomology(cc):
    """H^k from the transposed boundary matrices"""
    return _profile(cc, 'cohomology', False)


def homology_class(cc, chain, k, reduced=True):
    """Coordinates of a cycle's class: free part over Z, torsion part mod d_i"""
    red = cc.reduction(k, 'homology', reduced)
    coords = red.coordinates(cc.vector(chain, k))
    return {
        'degree': k,
        'free': [int(coords[i]) for i in red.free_indices],
        'torsion': [[int(coords[i] % red.orders[i]), int(red.orders[i])] for i in red.torsion_indices],
    }


def verify_uct(cc):
    """
    Universal coefficient check at finite scale

    For each n: rank H_n = rank H^n and torsion H_n = torsion H^{n+1}.
    """
    hom = homology(cc)
    coh = cohomology(cc)
    checks = []
    for n in range(cc.dimension + 1):
        checks.append({'degree': n, 'check': 'free rank',
                       'homology': hom.rank(n), 'cohomology': coh.rank(n),
                       'passed': hom.rank(n) == coh.rank(n)})
        checks.append({'degree': n, 'check': 'torsion',
                       'homology': hom.torsion(n), 'cohomology': coh.torsion(n + 1),
                       'passed': hom.torsion(n) == coh.torsion(n + 1)})
    report = UCTReport(checks)
    if not report.passed:
        log_manager.log(f"UCT check failed on {cc.complex!r}", 'error')
    return report


@dataclass
class UCTReport:
    checks: List[dict]

    @property
    def passed(self):
        return all(c['passed'] for c in self.checks)

    def to_dict(self):
        return {'passed': self.passed, 'checks': self.checks}


# ===== GRADED MAPS =====

class GradedIntegerMap:
    """Family of integer matrices C_k(source) -> C_{k+degree}(target)"""

    def __init__(self, source, target, degree, matrices):
        """
        Args:
            source: ChainComplexData
            target: ChainComplexData
            degree: 0 for chain maps and projections, +1 for homotopies
            matrices: dict k -> SparseIntegerMatrix of shape
                      (target.size(k + degree), source.size(k))
        """
        self.source = source
        self.target = target
        self.degree = degree
        self.matrices = {}
        for k, matrix in matrices.items():
            expected = (target.size(k + degree), source.size(k))
            if matrix.shape != expected:
                raise ShapeError(f"degree {k} matrix is {matrix.shape}, expected {expected}")
            if not matrix.is_zero():
                self.matrices[k] = matrix

    @classmethod
    def from_images(cls, source, target, images, degree=0):
        """Build from {source simplex: target chain}"""
        entries = {}
        for s, chain in images.items():
            k = len(s) - 1
            col = source.complex.index(s)
            for t, v in chain.items():
                if len(t) - 1 != k + degree:
                    raise ShapeError(f"image of {s!r} has the wrong dimension")
                entries.setdefault(k, {})[(target.complex.index(t), col)] = v
        matrices = {k: SparseIntegerMatrix(target.size(k + degree), source.size(k), e)
                    for k, e in entries.items()}
        return cls(source, target, degree, matrices)

    @classmethod
    def identity(cls, cc):
        return cls(cc, cc, 0, {k: SparseIntegerMatrix.identity(cc.size(k))
                               for k in range(cc.dimension + 1)})

    @classmethod
    def zero(cls, source, target, degree=0):
        return cls(source, target, degree, {})

    def matrix(self, k):
        if k in self.matrices:
            return self.matrices[k]
        return SparseIntegerMatrix(self.target.size(k + self.degree), self.source.size(k))

    def image(self, simplex):
        k = len(simplex) - 1
        if k not in self.matrices:
            return {}
        basis = self.target.complex.simplices(k + self.degree)
        column = self.matrices[k].column(self.source.complex.index(simplex))
        return {basis[r]: v for r, v in column.items()}

    def apply(self, chain):
        result = {}
        for s, v in chain.items():
            result = chain_add(result, self.image(s), v)
        return result

    def is_endomorphism(self):
        return self.degree == 0 and self.source.complex == self.target.complex

    def compose(self, first):
        """self after first"""
        if first.target.complex != self.source.complex:
            raise ShapeError("composition target/source mismatch")
        matrices = {}
        for k in range(first.source.dimension + 1):
            matrices[k] = self.matrix(k + first.degree) @ first.matrix(k)
        return GradedIntegerMap(first.source, self.target, self.degree + first.degree, matrices)

    def _check_same_shape(self, other):
        if (self.degree != other.degree or self.source.complex != other.source.complex
                or self.target.complex != other.target.complex):
            raise ShapeError("graded maps differ in source, target or degree")

    def __add__(self, other):
        self._check_same_shape(other)
        degrees = set(self.matrices) | set(other.matrices)
        return GradedIntegerMap(self.source, self.target, self.degree,
                                {k: self.matrix(k) + other.matrix(k) for k in degrees})

    def __neg__(self):
        return GradedIntegerMap(self.source, self.target, self.degree,
                                {k: -m for k, m in self.matrices.items()})

    def __sub__(self, other):
        return self + (-other)

    def __eq__(self, other):
        if not isinstance(other, GradedIntegerMap):
            return NotImplemented
        return (self.degree == other.degree and self.source.complex == other.source.complex
                and self.target.complex == other.target.complex
                and self.matrices == other.matrices)

    def is_zero(self):
        return not self.matrices

    def restrict_source(self, sub_cc):
        """Restriction to the chains of a subcomplex of the source"""
        matrices = {}
        for k, m in self.matrices.items():
            cols = [self.source.complex.index(s) for s in sub_cc.complex.simplices(k)]
            matrices[k] = m.select(cols=cols)
        return GradedIntegerMap(sub_cc, self.target, self.degree, matrices)

    def project_target(self, sub_cc):
        """Compose with the projection onto the chains of a target subcomplex"""
        matrices = {}
        for k, m in self.matrices.items():
            rows = [self.target.complex.index(s) for s in sub_cc.complex.simplices(k + self.degree)]
            matrices[k] = m.select(rows=rows)
        return GradedIntegerMap(self.source, sub_cc, self.degree, matrices)

    def trace(self, k):
        if not self.is_endomorphism():
            raise ShapeError("trace needs an endomorphism")
        return self.matrix(k).trace()

    def traces(self):
        return [self.trace(k) for k in range(self.source.dimension + 1)]

    def to_dict(self):
        return {'degree': self.degree,
                'matrices': {str(k): m.to_dict() for k, m in sorted(self.matrices.items())}}

    def __repr__(self):
        return f"GradedIntegerMap(degree={self.degree}, {self.source!r} -> {self.target!r})"


def simplicial_chain_map(smap, source=None, target=None):
    """Chain map of a simplicial map; degenerate simplices go to zero"""
    source = source or boundary_matrices(smap.source)
    target = target or boundary_matrices(smap.target)
    images = {}
    for s in smap.source.all_simplices():
        image, sign = smap.image(s)
        images[s] = {image: sign} if sign else {}
    return GradedIntegerMap.from_images(source, target, images)


@dataclass
class MapCheck:
    ok: bool
    witness: Optional[tuple] = None
    reason: str = ''

    def to_dict(self):
        return {'ok': self.ok, 'reason': self.reason,
                'witness': simplex_labels(self.witness) if self.witness else None}


def is_chain_map(f):
    """d f = f d in every degree and f preserves the augmentation"""
    if f.degree != 0:
        raise ShapeError("chain map check needs a degree 0 map")
    for k in range(f.source.dimension + 1):
        for s in f.source.complex.simplices(k):
            image = f.image(s)
            if k == 0:
                if chain_augmentation(image) != 1:
                    return MapCheck(False, s, 'augmentation not preserved')
            elif chain_boundary(image) != f.apply(simplex_boundary(s)):
                return MapCheck(False, s, 'does not commute with the boundary')
    return MapCheck(True)


def verify_chain_homotopy(f, g, d):
    """f - g = d D + D d in every degree"""
    if f.degree != 0 or g.degree != 0 or d.degree != 1:
        raise ShapeError("homotopy check needs degree 0 maps and a degree 1 homotopy")
    f._check_same_shape(g)
    if d.source.complex != f.source.complex or d.target.complex != f.target.complex:
        raise ShapeError("homotopy has a different source or target")
    for k in range(f.source.dimension + 1):
        for s in f.source.complex.simplices(k):
            lhs = chain_add(f.image(s), g.image(s), -1)
            rhs = chain_add(chain_boundary(d.image(s)), d.apply(simplex_boundary(s)))
            if lhs != rhs:
                return MapCheck(False, s, 'f - g differs from dD + Dd')
    return MapCheck(True)


def lefschetz_number(psi):
    """Alternating trace sum of a graded endomorphism"""
    if not psi.is_endomorphism():
        raise ShapeError("Lefschetz number needs a degree 0 endomorphism")
    return sum((-1) ** k * t for k, t in enumerate(psi.traces()))


# ===== BOUNDARY EQUATIONS =====

@dataclass
class BoundarySolution:
    """Solution c of dc = z, or the class of z that obstructs it"""
    chain: Optional[Chain]
    obstruction: Optional[dict] = None

    @property
    def solved(self):
        return self.chain is not None


@lru_cache(maxsize=None)
def _boundary_snf(complex_, k, reversed_basis):
    cc = boundary_matrices(complex_)
    matrix = cc.boundary_matrix(k + 1).to_array()
    if reversed_basis:
        matrix = matrix[:, ::-1].copy()
    return _smith_array(matrix)


def solve_boundary(z, within, rule=config.DEFAULT_FILLING_RULE):
    """
    Solve dc = z with c supported in a subcomplex

    Args:
        z: Cycle (reduced for 0-chains) supported in within
        within: Subcomplex or SimplicialComplex
        rule: 'snf' or 'reversed' (SNF of the column-reversed matrix)

    Returns:
        BoundarySolution; on failure its obstruction is the reduced class of z
    """
    complex_ = within.as_complex() if isinstance(within, Subcomplex) else within
    if not z:
        return BoundarySolution({})
    k = chain_degree(z)
    for s in z:
        if s not in complex_:
            raise PreconditionError(f"chain is not supported in the subcomplex: {s!r}")
    if k == 0:
        if chain_augmentation(z) != 0:
            raise PreconditionError("0-chain with nonzero augmentation is not a reduced cycle")
    elif chain_boundary(z):
        raise PreconditionError("chain is not a cycle")

    cc = boundary_matrices(complex_)
    red = _boundary_snf(complex_, k, rule == 'reversed')
    y = _matmul(red.P, cc.vector(z, k).reshape(-1, 1))[:, 0]
    m, n = red.A.shape
    w = np.zeros(n, dtype=object)
    solvable = True
    for i in range(m):
        d = red.A[i, i] if i < n else 0
        if d != 0:
            if y[i] % d != 0:
                solvable = False
                break
            w[i] = y[i] // d
        elif y[i] != 0:
            solvable = False
            break
    if not solvable:
        return BoundarySolution(None, homology_class(cc, z, k, reduced=True))

    c = _matmul(red.Q, w.reshape(-1, 1))[:, 0]
    if rule == 'reversed':
        c = c[::-1]
    solution = cc.chain_from_vector(c, k + 1)
    if chain_boundary(solution) != z:
        raise InvariantError("boundary solution does not reproduce the cycle")
    return BoundarySolution(solution)


# ===== INDUCED MAPS =====

@dataclass
class InducedMap:
    """Matrices of a chain self-map on (co)homology generators"""
    kind: str
    profile: HomologyProfile
    free: Dict[int, List[List[int]]]
    torsion: Dict[int, List[List[int]]]

    @property
    def lefschetz(self):
        return sum((-1) ** k * sum(m[i][i] for i in range(len(m))) for k, m in self.free.items())

    def to_dict(self):
        return {'kind': self.kind, 'profile': self.profile.to_dict(),
                'free': {str(k): m for k, m in sorted(self.free.items())},
                'torsion': {str(k): m for k, m in sorted(self.torsion.items())},
                'lefschetz': self.lefschetz}


def induced_map_on_homology(f, kind='homology'):
    """
    Induced map of a chain self-map on homology (or cohomology via the transpose)

    The free part is an integer matrix; the torsion part has entry (i, j)
    reduced modulo the order of generator i. Only free traces enter lambda.
    """
    if not f.is_endomorphism():
        raise ShapeError("induced map needs a degree 0 self-map")
    check = is_chain_map(f)
    if not check.ok:
        raise PreconditionError(f"not a chain map at {check.witness!r}: {check.reason}")

    cc = f.source
    free = {}
    torsion = {}
    groups = {}
    for k in range(cc.dimension + 1):
        red = cc.reduction(k, kind, False)
        matrix = f.matrix(k).to_array()
        if kind == 'cohomology':
            matrix = matrix.T.copy()
        images = {i: red.coordinates(_matmul(matrix, red.generator(i).reshape(-1, 1))[:, 0])
                  for i in red.free_indices + red.torsion_indices}
        free[k] = [[int(images[j][i]) for j in red.free_indices] for i in red.free_indices]
        torsion[k] = [[int(images[j][i] % red.orders[i]) for j in red.torsion_indices]
                      for i in red.torsion_indices]
        groups[k] = (red.rank, red.torsion)
    return InducedMap(kind, HomologyProfile(groups), free, torsion)


def induced_map_on_cohomology(f):
    return induced_map_on_homology(f, kind='cohomology')


# ===== SUBDIVISION CHAIN MAPS =====

@lru_cache(maxsize=None)
def _subdivision_step(coarse, fine):
    """b(j, j+1): a simplex goes to the cone from its barycenter over b of its boundary"""
    coarse_cc, fine_cc = boundary_matrices(coarse), boundary_matrices(fine)
    images = {}
    for k in range(coarse_cc.dimension + 1):
        for s in coarse.simplices(k):
            if k == 0:
                images[s] = {(s,): 1}
                continue
            fragments = {}
            for i, facet in enumerate(SimplicialComplex.facets(s)):
                fragments = chain_add(fragments, images[facet], (-1) ** i)
            # barycenter s sorts last in every flag
            images[s] = {t + (s,): (-1) ** k * c for t, c in fragments.items()}
    return GradedIntegerMap.from_images(coarse_cc, fine_cc, images)


def subdivision_chain_map(rec, k, l):
    """
    Barycentric subdivision operator b(k, l): C_*(tau^k) -> C_*(tau^l)

    Args:
        rec: Any SubdivisionRecord of the tower
        k: Coarse level
        l: Fine level, l >= k
    """
    if l < k:
        raise LevelMismatchError(f"subdivision goes from coarse to fine, got {k} -> {l}")
    current = rec.refined(k)
    result = GradedIntegerMap.identity(boundary_matrices(current.complex))
    for j in range(k, l):
        finer = current.refined(j + 1)
        result = _subdivision_step(current.complex, finer.complex).compose(result)
        current = finer
    return result
