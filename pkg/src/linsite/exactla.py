"""Exact linear algebra over prime fields and the rationals.

Two layers live here. The ``Matrix`` class and the functions ``rank``,
``kernel_basis``, ``solve`` and ``span_ops`` form the public API. Underneath
sit vector-level helpers (``rref``, ``nullspace``, ``span_basis`` ...) that
work on plain tuples and are what the rest of the package calls in its
inner loops.

Row reduction over F_p goes through a compiled kernel when it is available
and a pure-Python kernel otherwise; ``BACKEND`` names the one in use.
Rational elimination is fraction-free on integer rows and only normalizes
to ``Fraction`` at the end.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Iterable, Sequence

from .errors import FieldMismatch, ShapeError

if os.environ.get("LINSITE_PURE_PYTHON"):
    from ._kernels_py import rref_modp as _rref_modp

    BACKEND = "python"
else:
    try:
        from ._kernels import rref_modp as _rref_modp

        BACKEND = "compiled"
    except ImportError:  # extension not built
        from ._kernels_py import rref_modp as _rref_modp

        BACKEND = "python"


Vector = tuple


# ---------------------------------------------------------------------------
# Fields
# ---------------------------------------------------------------------------


class Field:
    """Base class for the two supported scalar fields."""

    zero = 0
    one = 1

    def __call__(self, x):
        raise NotImplementedError

    def inv(self, x):
        raise NotImplementedError

    def to_json(self) -> dict:
        raise NotImplementedError

    def scalar_to_json(self, x):
        raise NotImplementedError

    def scalar_from_json(self, v):
        raise NotImplementedError

    @property
    def is_finite(self) -> bool:
        return False


class PrimeField(Field):
    """The prime field F_p; elements are ints in ``range(p)``."""

    def __init__(self, p: int):
        if p < 2 or any(p % d == 0 for d in range(2, int(p**0.5) + 1)):
            raise ValueError(f"{p} is not a prime")
        self.p = p

    def __call__(self, x) -> int:
        if isinstance(x, Fraction):
            return (x.numerator * pow(x.denominator, self.p - 2, self.p)) % self.p
        return int(x) % self.p

    def inv(self, x) -> int:
        if x % self.p == 0:
            raise ZeroDivisionError("inverse of zero")
        return pow(x, self.p - 2, self.p)

    @property
    def is_finite(self) -> bool:
        return True

    def elements(self) -> range:
        return range(self.p)

    def to_json(self) -> dict:
        return {"type": "Fp", "p": self.p}

    def scalar_to_json(self, x) -> int:
        return int(x)

    def scalar_from_json(self, v) -> int:
        if isinstance(v, str):
            return self(_parse_fraction(v))
        if isinstance(v, bool) or not isinstance(v, int):
            raise ValueError(f"bad F_{self.p} scalar {v!r}")
        return v % self.p

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self):
        return hash(("Fp", self.p))

    def __repr__(self):
        return f"PrimeField({self.p})"


class RationalField(Field):
    """The rationals; elements are ``fractions.Fraction``."""

    zero = Fraction(0)
    one = Fraction(1)

    def __call__(self, x) -> Fraction:
        return x if isinstance(x, Fraction) else Fraction(x)

    def inv(self, x) -> Fraction:
        return 1 / Fraction(x)

    def to_json(self) -> dict:
        return {"type": "Q"}

    def scalar_to_json(self, x) -> str:
        x = Fraction(x)
        return f"{x.numerator}/{x.denominator}"

    def scalar_from_json(self, v) -> Fraction:
        if isinstance(v, str):
            return _parse_fraction(v)
        if isinstance(v, bool) or not isinstance(v, int):
            raise ValueError(f"bad rational scalar {v!r}")
        return Fraction(v)

    def __eq__(self, other):
        return isinstance(other, RationalField)

    def __hash__(self):
        return hash("Q")

    def __repr__(self):
        return "QQ"


def _parse_fraction(s: str) -> Fraction:
    num, sep, den = s.partition("/")
    try:
        return Fraction(int(num), int(den)) if sep else Fraction(int(num))
    except (ValueError, ZeroDivisionError) as exc:
        raise ValueError(f"bad rational {s!r}") from exc


GF2 = PrimeField(2)
QQ = RationalField()


def field_from_json(doc: dict) -> Field:
    """Build a field from its JSON descriptor."""
    kind = doc.get("type")
    if kind == "Fp":
        return PrimeField(int(doc["p"]))
    if kind == "Q":
        return QQ
    raise ValueError(f"unknown field descriptor {doc!r}")


# ---------------------------------------------------------------------------
# Vector-level kernels
# ---------------------------------------------------------------------------


def _rref_rational(rows, ncols):
    work = []
    for row in rows:
        den = 1
        for x in row:
            d = Fraction(x).denominator
            den = den * d // gcd(den, d)
        irow = [int(Fraction(x) * den) for x in row]
        if any(irow):
            work.append(irow)
    nrows = len(work)
    pivots = []
    r = 0
    for col in range(ncols):
        if r == nrows:
            break
        piv = next((i for i in range(r, nrows) if work[i][col]), -1)
        if piv < 0:
            continue
        work[r], work[piv] = work[piv], work[r]
        prow = work[r]
        a = prow[col]
        for i in range(nrows):
            if i == r:
                continue
            row = work[i]
            c = row[col]
            if c:
                new = [a * x - c * y for x, y in zip(row, prow)]
                g = 0
                for x in new:
                    if x:
                        g = gcd(g, x)
                        if g == 1:
                            break
                if g > 1:
                    new = [x // g for x in new]
                work[i] = new
        pivots.append(col)
        r += 1
    out = []
    for row, col in zip(work[:r], pivots):
        lead = row[col]
        out.append([Fraction(x, lead) for x in row])
    return out, pivots


def rref(field: Field, rows: Sequence[Sequence], ncols: int):
    """Reduced row echelon form of a list of rows.

    Args:
        field: Scalar field.
        rows: Row vectors (any sequences of field elements).
        ncols: Row length, needed when ``rows`` is empty.

    Returns:
        ``(basis, pivots)``: the nonzero reduced rows as tuples and the list of
        their pivot columns.
    """
    if not rows or ncols == 0:
        return [], []
    if isinstance(field, PrimeField):
        out, piv = _rref_modp([list(r) for r in rows], ncols, field.p)
        return [tuple(r) for r in out], list(piv)
    out, piv = _rref_rational(rows, ncols)
    return [tuple(r) for r in out], piv


def rank_rows(field: Field, rows, ncols: int) -> int:
    return len(rref(field, rows, ncols)[1])


def nullspace(field: Field, rows, ncols: int) -> list[Vector]:
    """Basis of ``{x : row·x = 0 for every row}``, one vector per free column."""
    red, pivots = rref(field, rows, ncols)
    pivset = set(pivots)
    zero, one = field.zero, field.one
    basis = []
    for free in range(ncols):
        if free in pivset:
            continue
        v = [zero] * ncols
        v[free] = one
        for row, pc in zip(red, pivots):
            c = row[free]
            if c:
                v[pc] = field(-c)
        basis.append(tuple(v))
    return basis


def span_basis(field: Field, vectors: Iterable[Sequence], dim: int) -> tuple:
    """Canonical basis (reduced echelon rows) of the span of ``vectors``."""
    vecs = [v for v in vectors]
    if not vecs:
        return ()
    return tuple(rref(field, vecs, dim)[0])


def solve_rows(field: Field, columns: Sequence[Sequence], target: Sequence, dim: int):
    """Coefficients ``c`` with ``sum c_i columns[i] = target``, or None.

    The returned solution is the reduced-echelon particular solution (free
    coefficients set to zero).
    """
    n = len(columns)
    rows = [[col[i] for col in columns] + [target[i]] for i in range(dim)]
    red, pivots = rref(field, rows, n + 1)
    if pivots and pivots[-1] == n:
        return None
    x = [field.zero] * n
    for row, pc in zip(red, pivots):
        x[pc] = row[n]
    return tuple(x)


def in_span(field: Field, basis: Sequence[Sequence], v: Sequence, dim: int) -> bool:
    if not any(v):
        return True
    if not basis:
        return False
    return rank_rows(field, list(basis) + [v], dim) == len(basis)


def span_contains(field: Field, big, small, dim: int) -> bool:
    """Whether span(small) ⊆ span(big); ``big`` must be a basis."""
    if not small:
        return True
    return rank_rows(field, list(big) + list(small), dim) == len(big)


def span_intersection(field: Field, a, b, dim: int) -> tuple:
    """Canonical basis of span(a) ∩ span(b)."""
    if not a or not b:
        return ()
    na = len(a)
    # columns of [a | -b]; kernel vectors (x, y) give sum x_i a_i
    rows = [[v[i] for v in a] + [field(-w[i]) for w in b] for i in range(dim)]
    kern = nullspace(field, rows, na + len(b))
    vecs = []
    for k in kern:
        vec = [field.zero] * dim
        for coeff, v in zip(k[:na], a):
            if coeff:
                for i in range(dim):
                    if v[i]:
                        vec[i] = field(vec[i] + coeff * v[i])
        vecs.append(vec)
    return span_basis(field, vecs, dim)


def mat_vec(field: Field, rows: Sequence[Sequence], v: Sequence) -> Vector:
    """Product of a row-major matrix with a vector."""
    out = []
    for row in rows:
        s = 0
        for a, b in zip(row, v):
            if a and b:
                s += a * b
        out.append(field(s))
    return tuple(out)


def mat_mul_rows(field: Field, a: Sequence[Sequence], b: Sequence[Sequence], bcols: int):
    """Row-major product ``a @ b``."""
    out = []
    for row in a:
        acc = [0] * bcols
        for k, x in enumerate(row):
            if x:
                brow = b[k]
                for j in range(bcols):
                    y = brow[j]
                    if y:
                        acc[j] += x * y
        out.append(tuple(field(s) for s in acc))
    return tuple(out)


# ---------------------------------------------------------------------------
# Matrix
# ---------------------------------------------------------------------------


class Matrix:
    """Immutable dense matrix over a field.

    Attributes:
        field: The scalar field.
        rows: Number of rows.
        cols: Number of columns.
        data: Tuple of row tuples.
    """

    __slots__ = ("field", "rows", "cols", "data")

    def __init__(self, field: Field, data: Sequence[Sequence], cols: int | None = None, *, trusted: bool = False):
        if trusted:
            rows_t = tuple(data)
        else:
            rows_t = tuple(tuple(field(x) for x in row) for row in data)
        if cols is None:
            if not rows_t:
                raise ShapeError("column count required for a matrix with no rows")
            cols = len(rows_t[0])
        for row in rows_t:
            if len(row) != cols:
                raise ShapeError("ragged matrix rows")
        object.__setattr__(self, "field", field)
        object.__setattr__(self, "rows", len(rows_t))
        object.__setattr__(self, "cols", cols)
        object.__setattr__(self, "data", rows_t)

    def __setattr__(self, name, value):
        raise AttributeError("Matrix is immutable")

    # construction helpers
    @classmethod
    def zeros(cls, field: Field, rows: int, cols: int) -> "Matrix":
        z = field.zero
        return cls(field, tuple((z,) * cols for _ in range(rows)), cols, trusted=True)

    @classmethod
    def identity(cls, field: Field, n: int) -> "Matrix":
        z, o = field.zero, field.one
        return cls(field, tuple(tuple(o if i == j else z for j in range(n)) for i in range(n)), n, trusted=True)

    @classmethod
    def from_columns(cls, field: Field, columns: Sequence[Sequence], rows: int) -> "Matrix":
        cols = [tuple(field(x) for x in c) for c in columns]
        return cls(field, tuple(tuple(c[i] for c in cols) for i in range(rows)), len(cols), trusted=True)

    @classmethod
    def from_entries(cls, field: Field, rows: int, cols: int, entries: Sequence) -> "Matrix":
        if len(entries) != rows * cols:
            raise ShapeError("entries.len must equal rows*cols")
        return cls(field, [entries[i * cols:(i + 1) * cols] for i in range(rows)], cols)

    @property
    def entries(self) -> tuple:
        return tuple(x for row in self.data for x in row)

    @property
    def shape(self) -> tuple[int, int]:
        return self.rows, self.cols

    def columns(self) -> list[Vector]:
        return [tuple(row[j] for row in self.data) for j in range(self.cols)]

    def column(self, j: int) -> Vector:
        return tuple(row[j] for row in self.data)

    def transpose(self) -> "Matrix":
        return Matrix(self.field, tuple(self.columns()), self.rows, trusted=True)

    def is_zero(self) -> bool:
        return not any(x for row in self.data for x in row)

    def _check(self, other: "Matrix"):
        if not isinstance(other, Matrix):
            raise TypeError("expected a Matrix")
        if other.field != self.field:
            raise FieldMismatch(f"{self.field!r} vs {other.field!r}")

    def __matmul__(self, other: "Matrix") -> "Matrix":
        self._check(other)
        if self.cols != other.rows:
            raise ShapeError(f"cannot multiply {self.shape} by {other.shape}")
        return Matrix(self.field, mat_mul_rows(self.field, self.data, other.data, other.cols), other.cols, trusted=True)

    def __add__(self, other: "Matrix") -> "Matrix":
        self._check(other)
        if self.shape != other.shape:
            raise ShapeError("shape mismatch in addition")
        f = self.field
        return Matrix(f, tuple(tuple(f(a + b) for a, b in zip(r, s)) for r, s in zip(self.data, other.data)), self.cols, trusted=True)

    def __neg__(self) -> "Matrix":
        f = self.field
        return Matrix(f, tuple(tuple(f(-a) for a in r) for r in self.data), self.cols, trusted=True)

    def __sub__(self, other: "Matrix") -> "Matrix":
        return self + (-other)

    def scale(self, c) -> "Matrix":
        f = self.field
        c = f(c)
        return Matrix(f, tuple(tuple(f(c * a) for a in r) for r in self.data), self.cols, trusted=True)

    def apply(self, v: Sequence) -> Vector:
        if len(v) != self.cols:
            raise ShapeError("vector length mismatch")
        return mat_vec(self.field, self.data, v)

    def hstack(self, other: "Matrix") -> "Matrix":
        self._check(other)
        if self.rows != other.rows:
            raise ShapeError("row count mismatch in hstack")
        return Matrix(self.field, tuple(a + b for a, b in zip(self.data, other.data)), self.cols + other.cols, trusted=True)

    def vstack(self, other: "Matrix") -> "Matrix":
        self._check(other)
        if self.cols != other.cols:
            raise ShapeError("column count mismatch in vstack")
        return Matrix(self.field, self.data + other.data, self.cols, trusted=True)

    def __eq__(self, other):
        return (
            isinstance(other, Matrix)
            and self.field == other.field
            and self.shape == other.shape
            and self.data == other.data
        )

    def __hash__(self):
        return hash((self.field, self.rows, self.cols, self.data))

    def __repr__(self):
        return f"Matrix({self.field!r}, {[list(r) for r in self.data]!r})"

    def tolist(self) -> list[list]:
        return [list(r) for r in self.data]


def _same_field(*ms: Matrix) -> Field:
    f = ms[0].field
    for m in ms[1:]:
        if m.field != f:
            raise FieldMismatch(f"{f!r} vs {m.field!r}")
    return f


# ---------------------------------------------------------------------------
# Public operations
# ---------------------------------------------------------------------------


def rank(m: Matrix) -> int:
    """Exact rank of ``m``."""
    return rank_rows(m.field, m.data, m.cols)


def kernel_basis(m: Matrix) -> Matrix:
    """Matrix whose columns form a basis of the right null space of ``m``."""
    basis = nullspace(m.field, m.data, m.cols)
    return Matrix.from_columns(m.field, basis, m.cols)


def solve(m: Matrix, b: Matrix) -> Matrix | None:
    """Solve ``m·x = b`` exactly.

    Args:
        m: Coefficient matrix.
        b: Right-hand side with ``rows(b) == rows(m)``.

    Returns:
        The reduced-echelon particular solution, or None when inconsistent.
    """
    f = _same_field(m, b)
    if m.rows != b.rows:
        raise ShapeError(f"rows(m)={m.rows} but rows(b)={b.rows}")
    n = m.cols
    aug = [ra + rb for ra, rb in zip(m.data, b.data)]
    red, pivots = rref(f, aug, n + b.cols)
    if any(pc >= n for pc in pivots):
        return None
    x = [[f.zero] * b.cols for _ in range(n)]
    for row, pc in zip(red, pivots):
        x[pc] = list(row[n:])
    return Matrix(f, x, b.cols)


@dataclass(frozen=True)
class SpanOps:
    """Result of comparing two column spans."""

    sum: Matrix
    intersection: Matrix
    containment: bool
    equality: bool


def span_ops(a: Matrix, b: Matrix) -> SpanOps:
    """Sum, intersection, containment (a ⊆ b) and equality of column spans."""
    f = _same_field(a, b)
    if a.rows != b.rows:
        raise ShapeError("span inputs must have the same number of rows")
    dim = a.rows
    ca, cb = a.columns(), b.columns()
    sa = span_basis(f, ca, dim)
    sb = span_basis(f, cb, dim)
    ssum = span_basis(f, list(sa) + list(sb), dim)
    sint = span_intersection(f, sa, sb, dim)
    contained = len(ssum) == len(sb)
    equal = sa == sb
    return SpanOps(
        sum=Matrix.from_columns(f, ssum, dim),
        intersection=Matrix.from_columns(f, sint, dim),
        containment=contained,
        equality=equal,
    )


def inverse(m: Matrix) -> Matrix | None:
    """Inverse of a square matrix, or None when singular."""
    if m.rows != m.cols:
        raise ShapeError("inverse of a non-square matrix")
    return solve(m, Matrix.identity(m.field, m.rows)) if rank(m) == m.rows else None
