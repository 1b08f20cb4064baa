"""
Rational Coefficient Oracle
Betti numbers over Q and Smith invariants through sympy, used as an
independent cross-check of the integer engine
"""

import log_manager
from chain import boundary_matrices
from errors import PreconditionError
from simplicial import Subcomplex

try:
    import sympy
    from sympy.matrices.normalforms import smith_normal_form as _sympy_smith
    SYMPY_AVAILABLE = True
except ImportError:
    SYMPY_AVAILABLE = False


def _require_sympy():
    if not SYMPY_AVAILABLE:
        log_manager.log("sympy not available - rational oracle disabled", 'warning')
        raise PreconditionError("the rational oracle needs sympy (pip install sympy)")


def _rank(matrix):
    if matrix.rows == 0 or matrix.cols == 0 or matrix.is_zero():
        return 0
    return sympy.Matrix(matrix.to_dense()).rank()


def rational_betti(cc, reduced=False):
    """
    Betti numbers over Q

    Args:
        cc: ChainComplexData
        reduced: Use the augmented complex (adds degree -1)

    Returns:
        dict degree -> rank of H_k(;Q)
    """
    _require_sympy()
    ranks = {k: _rank(cc.boundary_matrix(k)) for k in range(1, cc.dimension + 1)}
    ranks[0] = _rank(cc.augmentation) if reduced else 0
    betti = {}
    for k in range(cc.dimension + 1):
        betti[k] = cc.size(k) - ranks[k] - ranks.get(k + 1, 0)
    if reduced:
        betti[-1] = 1 - ranks[0]
    return betti


def is_rationally_acyclic(value):
    """Nonempty with vanishing reduced homology over Q"""
    complex_ = value.as_complex() if isinstance(value, Subcomplex) else value
    if complex_.is_empty():
        return False
    return all(b == 0 for b in rational_betti(boundary_matrices(complex_), reduced=True).values())


def smith_invariants(matrix):
    """Nonzero Smith invariants from sympy, for comparison with smith_normal_form()"""
    _require_sympy()
    if matrix.rows == 0 or matrix.cols == 0:
        return []
    from sympy.polys.domains import ZZ
    D = _sympy_smith(sympy.Matrix(matrix.to_dense()), domain=ZZ)
    diagonal = [abs(int(D[i, i])) for i in range(min(D.shape)) if D[i, i] != 0]
    return sorted(diagonal)
