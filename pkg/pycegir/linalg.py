from typing import List, Sequence, Tuple

import sympy
from sympy import QQ
from sympy.polys.matrices import DomainMatrix


Row = Sequence


def _matrix(rows: Sequence[Row], ncols: int) -> DomainMatrix:
    elements = [[QQ.convert(value) for value in row] for row in rows]
    return DomainMatrix(elements, (len(elements), ncols), QQ)


def rref(rows: Sequence[Row], ncols: int) -> Tuple[List[List[sympy.Rational]], Tuple[int, ...]]:
    """Reduced row echelon form over QQ; zero rows are dropped."""
    if not rows:
        return [], ()
    reduced, pivots = _matrix(rows, ncols).rref()
    matrix = reduced.to_Matrix()
    return [list(matrix.row(i)) for i in range(len(pivots))], tuple(pivots)


def rank(rows: Sequence[Row], ncols: int) -> int:
    if not rows:
        return 0
    return len(_matrix(rows, ncols).rref()[1])


def nullspace(rows: Sequence[Row], ncols: int) -> List[List[sympy.Rational]]:
    """Basis of the right nullspace, one vector per free column."""
    reduced, pivots = rref(rows, ncols)
    free = [col for col in range(ncols) if col not in pivots]
    basis = []
    for column in free:
        vector = [sympy.Integer(0)] * ncols
        vector[column] = sympy.Integer(1)
        for row, pivot in zip(reduced, pivots):
            vector[pivot] = -row[column]
        basis.append(vector)
    return basis

