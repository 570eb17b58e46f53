"""Exact Scalar Fields and Dense Linear Algebra for Preproj-Verify"""

import re
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

from sympy import GF, QQ, isprime
from sympy.polys.matrices import DomainMatrix

from errors import FieldError, ShapeMismatchError
from PreprojConstants import *

_SCALAR_LITERAL = re.compile(r'^-?\d+(/\d+)?$')


class ScalarField:
    """
    An exact field of scalars: the rationals, or residues modulo an odd prime.

    Scalars are sympy domain elements (``QQ`` or ``GF(p)`` with residues kept
    in [0, p)); matrices are ``DomainMatrix`` objects over the same domain.
    """

    def __init__(self, prime: Optional[int] = None):
        """
        Initialize the field.

        Args:
            prime: None for the rationals, otherwise an odd prime p for F_p
        """
        if prime is None:
            self.prime = None
            self.domain = QQ
        else:
            if prime <= 2 or not isprime(prime):
                raise FieldError(f"F_p needs an odd prime, got {prime}")
            self.prime = prime
            self.domain = GF(prime, symmetric=False)
        self.zero = self.domain.zero
        self.one = self.domain.one

    @classmethod
    def parse(cls, selection: str) -> 'ScalarField':
        """
        Parse a field selection: ``q`` or ``fp:<prime>``.

        Args:
            selection: Field selection text from the command line

        Returns:
            The selected field
        """
        text = selection.strip().lower()
        if text == DEFAULT_FIELD:
            return cls()
        if text.startswith(FIELD_PRIME_PREFIX):
            try:
                prime = int(text[len(FIELD_PRIME_PREFIX):])
            except ValueError:
                raise FieldError(f"bad prime in field '{selection}'") from None
            return cls(prime)
        raise FieldError(f"unknown field '{selection}' (use 'q' or 'fp:<prime>')")

    @property
    def name(self) -> str:
        if self.prime is None:
            return DEFAULT_FIELD
        return f"{FIELD_PRIME_PREFIX}{self.prime}"

    def __eq__(self, other) -> bool:
        return isinstance(other, ScalarField) and self.prime == other.prime

    def __hash__(self) -> int:
        return hash(('ScalarField', self.prime))

    def __repr__(self) -> str:
        return f"ScalarField({self.name})"

    # ----------------------------------------
    # Scalars
    # ----------------------------------------

    def __call__(self, value):
        """Coerce an int, Fraction, literal string or domain element into the field."""
        if isinstance(value, str):
            return self.parse_scalar(value)
        if isinstance(value, Fraction):
            return self._from_fraction(value)
        if isinstance(value, int):
            return self.domain(value)
        return self.domain.convert(value)

    def parse_scalar(self, text: str):
        """
        Parse a scalar literal ``n``, ``n/d`` or ``-n/d``.

        Args:
            text: The literal

        Returns:
            The scalar as a field element
        """
        literal = text.strip()
        if not _SCALAR_LITERAL.match(literal):
            raise FieldError(f"bad scalar literal '{text}'")
        try:
            value = Fraction(literal)
        except ZeroDivisionError:
            raise FieldError(f"zero denominator in '{text}'") from None
        return self._from_fraction(value)

    def _from_fraction(self, value: Fraction):
        numerator = self.domain(value.numerator)
        denominator = self.domain(value.denominator)
        if self.is_zero(denominator):
            raise FieldError(f"{value} is not defined over {self.name}")
        return self.domain.quo(numerator, denominator)

    def is_zero(self, x) -> bool:
        return x == self.zero

    def inverse(self, x):
        if self.is_zero(x):
            raise ZeroDivisionError("zero has no inverse")
        return self.domain.quo(self.one, x)

    def to_text(self, x) -> str:
        """Render a scalar: ``n`` or ``n/d`` over ℚ, the residue in [0, p) over F_p."""
        if self.prime is not None:
            return str(int(self.domain.to_int(x)))
        numerator = int(self.domain.numer(x))
        denominator = int(self.domain.denom(x))
        if denominator == 1:
            return str(numerator)
        return f"{numerator}/{denominator}"

    # ----------------------------------------
    # Matrices
    # ----------------------------------------

    def zeros(self, rows: int, cols: int) -> DomainMatrix:
        return DomainMatrix.zeros((rows, cols), self.domain).to_dense()

    def identity(self, n: int) -> DomainMatrix:
        if n == 0:
            return self.zeros(0, 0)
        return DomainMatrix.eye(n, self.domain).to_dense()

    def matrix(self, rows: Sequence[Sequence], cols: Optional[int] = None) -> DomainMatrix:
        """
        Build a matrix from nested rows, coercing every entry.

        Args:
            rows: Row lists of ints, Fractions, literals or field elements
            cols: Column count, needed only when there are no rows

        Returns:
            The matrix over this field
        """
        converted = [[self(x) for x in row] for row in rows]
        return self.raw_matrix(converted, len(converted), cols if cols is not None
                               else (len(converted[0]) if converted else 0))

    def raw_matrix(self, rows: List[List], nrows: int, ncols: int) -> DomainMatrix:
        """Build a matrix from rows that already hold field elements."""
        if nrows == 0 or ncols == 0:
            return self.zeros(nrows, ncols)
        for row in rows:
            if len(row) != ncols:
                raise ShapeMismatchError(f"row of length {len(row)} in a {nrows}x{ncols} matrix")
        return DomainMatrix(rows, (nrows, ncols), self.domain)


# ========================================
# Row reduction and derived operations
# ========================================

def entries(m: DomainMatrix) -> List[List]:
    """Nested list of the entries of a matrix."""
    rows, cols = m.shape
    if rows == 0:
        return []
    if cols == 0:
        return [[] for _ in range(rows)]
    return m.to_list()


def column_values(m: DomainMatrix) -> List:
    """Entries of a single-column matrix as a flat list."""
    return [row[0] for row in entries(m)]


def rref(m: DomainMatrix) -> Tuple[DomainMatrix, Tuple[int, ...]]:
    """
    Reduced row echelon form.

    Args:
        m: Any matrix over a ScalarField domain

    Returns:
        Tuple of (reduced matrix, strictly increasing pivot columns)
    """
    rows, cols = m.shape
    if rows == 0 or cols == 0:
        return m, ()
    reduced, pivots = m.rref()
    return reduced, tuple(pivots)


def rank(m: DomainMatrix) -> int:
    return len(rref(m)[1])


def kernel(m: DomainMatrix) -> List[List]:
    """
    Basis of the null space, one vector per free column, normalized from the rref.

    Args:
        m: Matrix of shape (rows, cols)

    Returns:
        List of vectors (lists of length cols)
    """
    domain = m.domain
    cols = m.shape[1]
    reduced, pivots = rref(m)
    reduced_rows = entries(reduced)
    pivot_set = set(pivots)
    basis = []
    for free in range(cols):
        if free in pivot_set:
            continue
        vector = [domain.zero] * cols
        vector[free] = domain.one
        for row_index, pivot in enumerate(pivots):
            vector[pivot] = -reduced_rows[row_index][free]
        basis.append(vector)
    return basis


def solve(m: DomainMatrix, b: Sequence) -> Optional[List]:
    """
    One solution of m·x = b (free variables set to zero), or None.

    Args:
        m: Coefficient matrix of shape (rows, cols)
        b: Right-hand side of length rows

    Returns:
        Solution vector of length cols, or None when the system is inconsistent
    """
    domain = m.domain
    rows, cols = m.shape
    if len(b) != rows:
        raise ShapeMismatchError(f"right-hand side of length {len(b)} for {rows} equations")
    if rows == 0:
        return [domain.zero] * cols
    rhs = DomainMatrix([[x] for x in b], (rows, 1), domain)
    if cols == 0:
        return [] if rhs.is_zero_matrix else None
    reduced, pivots = rref(m.hstack(rhs))
    if cols in pivots:
        return None
    reduced_rows = entries(reduced)
    solution = [domain.zero] * cols
    for row_index, pivot in enumerate(pivots):
        solution[pivot] = reduced_rows[row_index][cols]
    return solution


def matmul(a: DomainMatrix, b: DomainMatrix) -> DomainMatrix:
    """Matrix product that tolerates empty inner or outer dimensions."""
    if a.shape[1] != b.shape[0]:
        raise ShapeMismatchError(f"cannot multiply {a.shape} by {b.shape}")
    if 0 in (a.shape[0], a.shape[1], b.shape[1]):
        return DomainMatrix.zeros((a.shape[0], b.shape[1]), a.domain).to_dense()
    return a.matmul(b)


def transpose(m: DomainMatrix) -> DomainMatrix:
    rows, cols = m.shape
    if 0 in (rows, cols):
        return DomainMatrix.zeros((cols, rows), m.domain).to_dense()
    values = entries(m)
    return DomainMatrix([[values[r][c] for r in range(rows)] for c in range(cols)], (cols, rows), m.domain)


def kron(a: DomainMatrix, b: DomainMatrix) -> DomainMatrix:
    """Kronecker product, rows and columns ordered (index in a, index in b)."""
    ar, ac = a.shape
    br, bc = b.shape
    if 0 in (ar, ac, br, bc):
        return DomainMatrix.zeros((ar * br, ac * bc), a.domain).to_dense()
    left = entries(a)
    right = entries(b)
    rows = [[left[i][j] * right[k][l] for j in range(ac) for l in range(bc)]
            for i in range(ar) for k in range(br)]
    return DomainMatrix(rows, (ar * br, ac * bc), a.domain)


def quotient_basis(rows: List[List], ncols: int, field: ScalarField) -> Tuple[List[int], DomainMatrix]:
    """
    Complement of the span of some row vectors, and the projection onto it.

    The complement is spanned by the unit vectors of the non-pivot columns of
    the row reduced relations; the projection reduces a vector modulo the
    relations and reads off those columns.

    Args:
        rows: Relation vectors of length ncols
        ncols: Ambient dimension
        field: The scalar field

    Returns:
        Tuple of (free column indices, projection matrix of shape (len(free), ncols))
    """
    pivots: Tuple[int, ...] = ()
    reduced_rows: List[List] = []
    if rows and ncols:
        reduced, pivots = rref(field.raw_matrix(rows, len(rows), ncols))
        reduced_rows = entries(reduced)[:len(pivots)]
    pivot_row = {pivot: r for r, pivot in enumerate(pivots)}
    free = [k for k in range(ncols) if k not in pivot_row]

    projection = [[field.zero] * ncols for _ in free]
    for position, f in enumerate(free):
        projection[position][f] = field.one
        for pivot, r in pivot_row.items():
            projection[position][pivot] = -reduced_rows[r][f]
    return free, field.raw_matrix(projection, len(free), ncols)


def matrices_equal(a: DomainMatrix, b: DomainMatrix) -> bool:
    """Entrywise equality, independent of the internal matrix format."""
    return a.shape == b.shape and entries(a) == entries(b)
