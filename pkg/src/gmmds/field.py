"""Exact arithmetic over prime fields GF(p), univariate polynomials, and
dense linear algebra (determinant, rank, left nullspace).

Elements are stored as machine integers in [0, p); all intermediates fit in
double-width words for word-sized p, so every operation is exact.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence


# Witnesses sufficient for a deterministic Miller-Rabin test below 3.3 * 10^24,
# which covers every 64-bit modulus.
_MR_WITNESSES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin primality test for word-sized integers."""
    if n < 2:
        return False
    for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_WITNESSES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def next_prime(n: int) -> int:
    """Smallest prime >= n."""
    c = max(n, 2)
    while not is_prime(c):
        c += 1
    return c


class PrimeField:
    """The field GF(p) for a word-sized prime p."""

    __slots__ = ("p",)

    def __init__(self, p: int):
        if not is_prime(p):
            raise ValueError(f"modulus {p} is not prime")
        self.p = p

    def __call__(self, value: "int | FieldElement") -> "FieldElement":
        if isinstance(value, FieldElement):
            if value.field.p != self.p:
                raise ValueError("element from a different field")
            return value
        return FieldElement(value % self.p, self)

    def zero(self) -> "FieldElement":
        return FieldElement(0, self)

    def one(self) -> "FieldElement":
        return FieldElement(1, self)

    def random_element(self, rng) -> "FieldElement":
        return FieldElement(rng.randrange(self.p), self)

    def __eq__(self, other) -> bool:
        return isinstance(other, PrimeField) and self.p == other.p

    def __hash__(self) -> int:
        return hash(("PrimeField", self.p))

    def __repr__(self) -> str:
        return f"GF({self.p})"


@dataclass(frozen=True)
class FieldElement:
    """An element of GF(p); immutable, closed under field operations."""

    value: int
    field: PrimeField

    def _lift(self, other) -> "FieldElement":
        if isinstance(other, FieldElement):
            if other.field.p != self.field.p:
                raise ValueError("mixed fields")
            return other
        return FieldElement(other % self.field.p, self.field)

    def __add__(self, other) -> "FieldElement":
        o = self._lift(other)
        return FieldElement((self.value + o.value) % self.field.p, self.field)

    __radd__ = __add__

    def __sub__(self, other) -> "FieldElement":
        o = self._lift(other)
        return FieldElement((self.value - o.value) % self.field.p, self.field)

    def __rsub__(self, other) -> "FieldElement":
        return self._lift(other) - self

    def __mul__(self, other) -> "FieldElement":
        o = self._lift(other)
        return FieldElement(self.value * o.value % self.field.p, self.field)

    __rmul__ = __mul__

    def __neg__(self) -> "FieldElement":
        return FieldElement(-self.value % self.field.p, self.field)

    def inverse(self) -> "FieldElement":
        if self.value == 0:
            raise ZeroDivisionError("0 has no inverse")
        return FieldElement(pow(self.value, -1, self.field.p), self.field)

    def __truediv__(self, other) -> "FieldElement":
        return self * self._lift(other).inverse()

    def __pow__(self, e: int) -> "FieldElement":
        return FieldElement(pow(self.value, e, self.field.p), self.field)

    def __bool__(self) -> bool:
        return self.value != 0

    def __int__(self) -> int:
        return self.value

    def __repr__(self) -> str:
        return f"{self.value}"


def _as_int(x, p: int) -> int:
    if isinstance(x, FieldElement):
        if x.field.p != p:
            raise ValueError("mixed fields")
        return x.value
    return x % p


class UniPoly:
    """Univariate polynomial over GF(p), coefficients in ascending powers.

    Trailing zeros are trimmed; the zero polynomial has an empty coefficient
    list and degree -1.
    """

    __slots__ = ("field", "coeffs")

    def __init__(self, field: PrimeField, coeffs: Iterable = ()):
        cs = [_as_int(c, field.p) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        self.field = field
        self.coeffs = tuple(cs)

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def coefficient(self, i: int) -> FieldElement:
        v = self.coeffs[i] if 0 <= i < len(self.coeffs) else 0
        return FieldElement(v, self.field)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, UniPoly)
            and self.field.p == other.field.p
            and self.coeffs == other.coeffs
        )

    def __hash__(self) -> int:
        return hash((self.field.p, self.coeffs))

    def __add__(self, other: "UniPoly") -> "UniPoly":
        p = self.field.p
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] = (out[i] + c) % p
        return UniPoly(self.field, out)

    def __sub__(self, other: "UniPoly") -> "UniPoly":
        return self + other.scale(-1)

    def __mul__(self, other: "UniPoly") -> "UniPoly":
        if self.is_zero() or other.is_zero():
            return UniPoly(self.field)
        p = self.field.p
        out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] = (out[i + j] + a * b) % p
        return UniPoly(self.field, out)

    def scale(self, c) -> "UniPoly":
        cv = _as_int(c, self.field.p)
        return UniPoly(self.field, [cv * a for a in self.coeffs])

    def shift(self, ell: int) -> "UniPoly":
        """Multiply by x^ell."""
        if self.is_zero():
            return self
        return UniPoly(self.field, (0,) * ell + self.coeffs)

    def __call__(self, x) -> FieldElement:
        p = self.field.p
        xv = _as_int(x, p)
        acc = 0
        for c in reversed(self.coeffs):
            acc = (acc * xv + c) % p
        return FieldElement(acc, self.field)

    def __repr__(self) -> str:
        return f"UniPoly({list(self.coeffs)} over GF({self.field.p}))"


def poly_from_roots(field: PrimeField, roots: Sequence) -> UniPoly:
    """Monic polynomial prod (x - r) over the given roots.

    The empty product is the constant 1; repeated roots give repeated factors.
    """
    p = field.p
    out = [1]
    for r in roots:
        rv = _as_int(r, p)
        nxt = [0] * (len(out) + 1)
        for i, c in enumerate(out):
            nxt[i] = (nxt[i] - c * rv) % p
            nxt[i + 1] = (nxt[i + 1] + c) % p
        out = nxt
    return UniPoly(field, out)


def eval_poly(poly: UniPoly, x) -> FieldElement:
    """Horner evaluation of poly at x."""
    return poly(x)


class FieldMatrix:
    """Rectangular matrix over GF(p); immutable by convention.

    Entries are stored as plain integers in [0, p); accessors hand out
    FieldElement values.
    """

    __slots__ = ("field", "rows", "cols", "_m")

    def __init__(self, field: PrimeField, entries: Sequence[Sequence]):
        p = field.p
        m = [[_as_int(x, p) for x in row] for row in entries]
        if m and any(len(row) != len(m[0]) for row in m):
            raise ValueError("ragged rows")
        self.field = field
        self.rows = len(m)
        self.cols = len(m[0]) if m else 0
        self._m = m

    @classmethod
    def identity(cls, field: PrimeField, n: int) -> "FieldMatrix":
        return cls(field, [[1 if i == j else 0 for j in range(n)] for i in range(n)])

    def __getitem__(self, ij) -> FieldElement:
        i, j = ij
        return FieldElement(self._m[i][j], self.field)

    def int_rows(self) -> list[list[int]]:
        return [list(row) for row in self._m]

    def row(self, i: int) -> list[int]:
        return list(self._m[i])

    def column(self, j: int) -> list[int]:
        return [row[j] for row in self._m]

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, FieldMatrix)
            and self.field.p == other.field.p
            and self._m == other._m
        )

    def __matmul__(self, other: "FieldMatrix") -> "FieldMatrix":
        if self.cols != other.rows:
            raise ValueError("dimension mismatch")
        p = self.field.p
        bt = list(zip(*other._m)) if other._m else []
        out = [
            [sum(a * b for a, b in zip(row, col)) % p for col in bt]
            for row in self._m
        ]
        return FieldMatrix(self.field, out)

    def transpose(self) -> "FieldMatrix":
        return FieldMatrix(self.field, [list(c) for c in zip(*self._m)] if self._m else [])

    def submatrix(self, row_idx: Sequence[int], col_idx: Sequence[int]) -> "FieldMatrix":
        return FieldMatrix(
            self.field, [[self._m[i][j] for j in col_idx] for i in row_idx]
        )

    def det(self) -> FieldElement:
        """Determinant by pivoted Gaussian elimination; exact over GF(p)."""
        if self.rows != self.cols:
            raise ValueError("determinant of a non-square matrix")
        p = self.field.p
        m = [list(row) for row in self._m]
        n = self.rows
        det = 1
        for c in range(n):
            pivot = next((r for r in range(c, n) if m[r][c] != 0), None)
            if pivot is None:
                return FieldElement(0, self.field)
            if pivot != c:
                m[c], m[pivot] = m[pivot], m[c]
                det = -det % p
            pv = m[c][c]
            det = det * pv % p
            inv = pow(pv, -1, p)
            for r in range(c + 1, n):
                f = m[r][c] * inv % p
                if f:
                    mr, mc = m[r], m[c]
                    for j in range(c, n):
                        mr[j] = (mr[j] - f * mc[j]) % p
        return FieldElement(det, self.field)

    def rref(self) -> tuple["FieldMatrix", list[int]]:
        """Reduced row echelon form and the list of pivot columns."""
        p = self.field.p
        m = [list(row) for row in self._m]
        pivots: list[int] = []
        r = 0
        for c in range(self.cols):
            if r >= self.rows:
                break
            pivot = next((i for i in range(r, self.rows) if m[i][c] != 0), None)
            if pivot is None:
                continue
            m[r], m[pivot] = m[pivot], m[r]
            inv = pow(m[r][c], -1, p)
            m[r] = [x * inv % p for x in m[r]]
            for i in range(self.rows):
                if i != r and m[i][c]:
                    f = m[i][c]
                    m[i] = [(a - f * b) % p for a, b in zip(m[i], m[r])]
            pivots.append(c)
            r += 1
        return FieldMatrix(self.field, m), pivots

    def rank(self) -> int:
        return len(self.rref()[1])

    def right_nullspace(self) -> list[list[FieldElement]]:
        """Basis of {v : M v = 0}, one vector per free column."""
        p = self.field.p
        red, pivots = self.rref()
        pivot_set = set(pivots)
        free = [c for c in range(self.cols) if c not in pivot_set]
        basis = []
        for fc in free:
            v = [0] * self.cols
            v[fc] = 1
            for r, pc in enumerate(pivots):
                v[pc] = -red._m[r][fc] % p
            basis.append([FieldElement(x, self.field) for x in v])
        return basis

    def left_nullspace(self) -> list[list[FieldElement]]:
        """Basis of {v : v M = 0}; empty iff the rows are independent."""
        return self.transpose().right_nullspace()

    def __repr__(self) -> str:
        return f"FieldMatrix({self._m} over GF({self.field.p}))"


def det(matrix: FieldMatrix) -> FieldElement:
    return matrix.det()


def left_nullspace(matrix: FieldMatrix) -> list[list[FieldElement]]:
    return matrix.left_nullspace()
