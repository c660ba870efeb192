"""
Exact rational linear algebra

Everything ideality depends on is a rank condition, so all elimination here
is exact. Row-space questions (rank, independence, membership) are answered
on integer-scaled copies of the rows with gcd normalisation, which is much
faster than eliminating over ``Fraction`` and gives the same answers because
scaling a row by a nonzero constant does not change the span. Linear solves
that must return rational values use Gauss-Jordan over ``Fraction``.
"""

import math
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple, Union

Number = Union[int, Fraction]
Vector = Tuple[Fraction, ...]


def parse_rational(text: Union[str, int, Fraction]) -> Fraction:
    """
    Parse an exact rational from ``"3/2"``, ``"7"`` or an int

    Floats are rejected: a stored precision must round-trip exactly.

    Raises:
        ValueError: If the text is not an integer or a ratio of integers
    """
    if isinstance(text, bool):
        raise ValueError(f"Not a rational number: {text!r}")
    if isinstance(text, (int, Fraction)):
        return Fraction(text)
    if not isinstance(text, str):
        raise ValueError(f"Not a rational number: {text!r}")
    stripped = text.strip()
    if "." in stripped or "e" in stripped.lower():
        raise ValueError(f"Decimal notation is not exact, use p/q: {text!r}")
    return Fraction(stripped)


def format_rational(value: Number) -> str:
    """Render a rational as ``"p/q"``, or ``"p"`` when the denominator is 1"""
    value = Fraction(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def to_vector(values: Sequence[Number]) -> Vector:
    return tuple(Fraction(v) for v in values)


def dot(a: Sequence[Number], b: Sequence[Number]) -> Fraction:
    return sum((Fraction(x) * y for x, y in zip(a, b) if x and y), Fraction(0))


def transpose(rows: Sequence[Sequence[Number]]) -> List[List[Number]]:
    if not rows:
        return []
    return [list(col) for col in zip(*rows)]


def matmul(a: Sequence[Sequence[Number]], b: Sequence[Sequence[Number]]) -> List[List[Fraction]]:
    """Exact product of two rational matrices"""
    bt = transpose(b)
    return [[dot(row, col) for col in bt] for row in a]


def _as_integer_row(row: Sequence[Number]) -> List[int]:
    """Scale a rational row to a primitive integer row with the same span"""
    fractions = [Fraction(v) for v in row]
    scale = 1
    for v in fractions:
        if v.denominator != 1:
            scale = scale * v.denominator // math.gcd(scale, v.denominator)
    ints = [int(v * scale) for v in fractions]
    return _primitive(ints)


def _primitive(ints: List[int]) -> List[int]:
    g = 0
    for v in ints:
        if v:
            g = math.gcd(g, v)
            if g == 1:
                return ints
    if g > 1:
        return [v // g for v in ints]
    return ints


class EchelonBasis:
    """
    Incrementally built echelon basis of a row space

    Rows are added one at a time; ``add`` reports whether the row was
    independent of everything added before. Stored rows are integer and
    primitive, each with a distinct pivot column that is zero in every row
    added after it.
    """

    def __init__(self, width: int):
        self.width = width
        self._rows: List[Tuple[int, List[int]]] = []

    @property
    def rank(self) -> int:
        return len(self._rows)

    def reduce(self, row: Sequence[Number]) -> List[int]:
        """Return the (integer, primitive) remainder of ``row`` against the basis"""
        if len(row) != self.width:
            raise ValueError(f"Row of length {len(row)} does not match width {self.width}")
        current = _as_integer_row(row)
        for pivot, basis_row in self._rows:
            factor = current[pivot]
            if not factor:
                continue
            lead = basis_row[pivot]
            current = [lead * c - factor * b for c, b in zip(current, basis_row)]
            current = _primitive(current)
        return current

    def add(self, row: Sequence[Number]) -> bool:
        remainder = self.reduce(row)
        for index, value in enumerate(remainder):
            if value:
                self._rows.append((index, remainder))
                return True
        return False

    def contains(self, row: Sequence[Number]) -> bool:
        return not any(self.reduce(row))


def independent_rows(rows: Sequence[Sequence[Number]]) -> List[int]:
    """
    Indices of the lexicographically earliest maximal independent subset

    Rows are scanned in ascending index order and kept when they raise the
    rank, so the result is the greedy basis of the row space.
    """
    if not rows:
        return []
    basis = EchelonBasis(len(rows[0]))
    return [i for i, row in enumerate(rows) if basis.add(row)]


def rank(rows: Sequence[Sequence[Number]]) -> int:
    return len(independent_rows(rows))


def in_row_space(rows: Sequence[Sequence[Number]], target: Sequence[Number]) -> bool:
    """Whether ``target`` is a rational linear combination of ``rows``"""
    basis = EchelonBasis(len(target))
    for row in rows:
        basis.add(row)
    return basis.contains(target)


def solve_consistent(
    matrix: Sequence[Sequence[Number]], rhs: Sequence[Number]
) -> Optional[List[Fraction]]:
    """
    Solve ``matrix @ x = rhs`` exactly by Gauss-Jordan elimination

    Works for any shape. Returns ``None`` when the system is inconsistent;
    otherwise the solution with every free variable set to zero.
    """
    n_rows = len(matrix)
    n_cols = len(matrix[0]) if n_rows else 0
    if len(rhs) != n_rows:
        raise ValueError(f"Right-hand side has length {len(rhs)}, expected {n_rows}")

    aug = [[Fraction(v) for v in row] + [Fraction(b)] for row, b in zip(matrix, rhs)]
    pivots: List[int] = []
    r = 0
    for c in range(n_cols):
        pivot_row = next((i for i in range(r, n_rows) if aug[i][c] != 0), None)
        if pivot_row is None:
            continue
        aug[r], aug[pivot_row] = aug[pivot_row], aug[r]
        lead = aug[r][c]
        aug[r] = [v / lead for v in aug[r]]
        for i in range(n_rows):
            if i != r and aug[i][c] != 0:
                factor = aug[i][c]
                aug[i] = [v - factor * p for v, p in zip(aug[i], aug[r])]
        pivots.append(c)
        r += 1
        if r == n_rows:
            break

    for i in range(r, n_rows):
        if aug[i][n_cols] != 0:
            return None

    solution = [Fraction(0)] * n_cols
    for i, c in enumerate(pivots):
        solution[c] = aug[i][n_cols]
    return solution


def solve(matrix: Sequence[Sequence[Number]], rhs: Sequence[Number]) -> List[Fraction]:
    """
    Solve a square nonsingular system exactly

    Raises:
        ValueError: If the matrix is not square or is singular
    """
    n = len(matrix)
    if any(len(row) != n for row in matrix):
        raise ValueError("solve() needs a square matrix")
    if rank(matrix) < n:
        raise ValueError("Matrix is singular")
    solution = solve_consistent(matrix, rhs)
    assert solution is not None
    return solution


def solve_combination(
    rows: Sequence[Sequence[Number]], target: Sequence[Number]
) -> Optional[List[Fraction]]:
    """
    Coefficients ``c`` with ``sum_i c_i * rows[i] == target``, or ``None``

    Among the many solutions of a dependent system, the one with zero weight
    on every non-pivot row is returned, which makes the result deterministic.
    """
    if not rows:
        return [] if not any(target) else None
    return solve_consistent(transpose(rows), target)


def row_echelon_basis(rows: Sequence[Sequence[Number]]) -> List[List[Fraction]]:
    """
    Reduced row echelon basis of the row space, over ``Fraction``

    Independent of any particular choice among the input rows: two inputs with
    the same span give the same basis.
    """
    if not rows:
        return []
    width = len(rows[0])
    work = [[Fraction(v) for v in row] for row in rows]
    basis: List[List[Fraction]] = []
    r = 0
    for c in range(width):
        pivot_row = next((i for i in range(r, len(work)) if work[i][c] != 0), None)
        if pivot_row is None:
            continue
        work[r], work[pivot_row] = work[pivot_row], work[r]
        lead = work[r][c]
        work[r] = [v / lead for v in work[r]]
        for i in range(len(work)):
            if i != r and work[i][c] != 0:
                factor = work[i][c]
                work[i] = [v - factor * p for v, p in zip(work[i], work[r])]
        r += 1
        if r == len(work):
            break
    for row in work[:r]:
        basis.append(row)
    return basis
