"""Exact linear algebra over the Gaussian rationals Q(i).

Scalars are :class:`GaussianRational`, matrices are immutable
:class:`Matrix` values and subspaces are stored in a canonical reduced
echelon form so that equality of subspaces is equality of bases.
"""

from __future__ import annotations

import math
import re
from fractions import Fraction
from typing import Iterable, Sequence

__all__ = [
    "GaussianRational",
    "Matrix",
    "Subspace",
    "DimensionError",
    "NotHermitianError",
    "canonicalize",
    "meet",
    "join",
    "preimage",
    "quotient_matrix",
    "is_positive_definite_hermitian",
    "gr",
    "I",
    "ZERO",
    "ONE",
]


class DimensionError(ValueError):
    """Shapes or ambient dimensions do not fit together."""


class NotHermitianError(ValueError):
    """A matrix expected to be Hermitian is not."""


_RATIONAL_RE = re.compile(r"^\s*(-?\d+)\s*(?:/\s*(\d+)\s*)?$")


def _parse_rational(text: str) -> Fraction:
    m = _RATIONAL_RE.match(text)
    if not m:
        raise ValueError(f"malformed rational {text!r}")
    num = int(m.group(1))
    den = int(m.group(2)) if m.group(2) is not None else 1
    if den == 0:
        raise ValueError(f"zero denominator in {text!r}")
    return Fraction(num, den)


class GaussianRational:
    """An exact complex number ``re + im*i`` with rational parts.

    Stored as ``(a + b i) / d`` with integers, ``d > 0`` and
    ``gcd(a, b, d) = 1``; this keeps arithmetic on plain Python ints.
    """

    __slots__ = ("_a", "_b", "_d", "_hash")

    def __init__(self, re=0, im=0):
        fr = _to_fraction(re)
        fi = _to_fraction(im)
        d = fr.denominator * fi.denominator // math.gcd(fr.denominator, fi.denominator)
        a = fr.numerator * (d // fr.denominator)
        b = fi.numerator * (d // fi.denominator)
        self._set(a, b, d)

    def _set(self, a: int, b: int, d: int) -> None:
        if d < 0:
            a, b, d = -a, -b, -d
        g = math.gcd(a, b, d)
        if g != 1:
            a //= g
            b //= g
            d //= g
        self._a = a
        self._b = b
        self._d = d
        self._hash = None

    @classmethod
    def _raw(cls, a: int, b: int, d: int) -> "GaussianRational":
        obj = object.__new__(cls)
        obj._set(a, b, d)
        return obj

    @classmethod
    def coerce(cls, value) -> "GaussianRational":
        if isinstance(value, GaussianRational):
            return value
        if isinstance(value, complex):
            raise TypeError("floating complex values are not exact")
        if isinstance(value, str):
            return cls(_parse_rational(value))
        if isinstance(value, (int, Fraction)) and not isinstance(value, bool):
            f = Fraction(value)
            return cls._raw(f.numerator, 0, f.denominator)
        raise TypeError(f"cannot interpret {value!r} as a Gaussian rational")

    @property
    def re(self) -> Fraction:
        return Fraction(self._a, self._d)

    @property
    def im(self) -> Fraction:
        return Fraction(self._b, self._d)

    def is_real(self) -> bool:
        return self._b == 0

    def conjugate(self) -> "GaussianRational":
        if self._b == 0:
            return self
        return GaussianRational._raw(self._a, -self._b, self._d)

    def norm(self) -> Fraction:
        """``|z|^2`` as a rational."""
        return Fraction(self._a * self._a + self._b * self._b, self._d * self._d)

    def __bool__(self) -> bool:
        return self._a != 0 or self._b != 0

    def __add__(self, other):
        o = _coerce_or_none(other)
        if o is None:
            return NotImplemented
        if self._d == o._d:
            return GaussianRational._raw(self._a + o._a, self._b + o._b, self._d)
        return GaussianRational._raw(
            self._a * o._d + o._a * self._d,
            self._b * o._d + o._b * self._d,
            self._d * o._d,
        )

    __radd__ = __add__

    def __neg__(self):
        return GaussianRational._raw(-self._a, -self._b, self._d)

    def __pos__(self):
        return self

    def __sub__(self, other):
        o = _coerce_or_none(other)
        if o is None:
            return NotImplemented
        if self._d == o._d:
            return GaussianRational._raw(self._a - o._a, self._b - o._b, self._d)
        return GaussianRational._raw(
            self._a * o._d - o._a * self._d,
            self._b * o._d - o._b * self._d,
            self._d * o._d,
        )

    def __rsub__(self, other):
        o = _coerce_or_none(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        o = _coerce_or_none(other)
        if o is None:
            return NotImplemented
        a, b, d = self._a, self._b, self._d
        c, e, f = o._a, o._b, o._d
        if b == 0 and e == 0:
            return GaussianRational._raw(a * c, 0, d * f)
        return GaussianRational._raw(a * c - b * e, a * e + b * c, d * f)

    __rmul__ = __mul__

    def inverse(self) -> "GaussianRational":
        if not self:
            raise ZeroDivisionError("inverse of zero")
        # 1/((a+bi)/d) = d(a-bi)/(a^2+b^2)
        n = self._a * self._a + self._b * self._b
        return GaussianRational._raw(self._d * self._a, -self._d * self._b, n)

    def __truediv__(self, other):
        o = _coerce_or_none(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = _coerce_or_none(other)
        if o is None:
            return NotImplemented
        return o * self.inverse()

    def __pow__(self, k: int):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return self.inverse() ** (-k)
        result = ONE
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __eq__(self, other):
        o = _coerce_or_none(other)
        if o is None:
            return NotImplemented
        return self._a == o._a and self._b == o._b and self._d == o._d

    def __hash__(self):
        if self._hash is None:
            if self._b == 0:
                self._hash = hash(Fraction(self._a, self._d))
            else:
                self._hash = hash((self._a, self._b, self._d))
        return self._hash

    def __repr__(self):
        return f"GaussianRational({self})"

    def __str__(self):
        re_, im_ = self.re, self.im
        if im_ == 0:
            return str(re_)
        if re_ == 0:
            return f"{im_}i"
        sign = "+" if im_ > 0 else "-"
        return f"{re_}{sign}{abs(im_)}i"

    def to_json(self):
        """Rational string when real, otherwise ``{"re": .., "im": ..}``."""
        if self._b == 0:
            return _fraction_to_str(self.re)
        return {"re": _fraction_to_str(self.re), "im": _fraction_to_str(self.im)}


def _fraction_to_str(f: Fraction) -> str:
    return str(f.numerator) if f.denominator == 1 else f"{f.numerator}/{f.denominator}"


def _to_fraction(x) -> Fraction:
    if isinstance(x, bool):
        raise TypeError("booleans are not scalars")
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return _parse_rational(x)
    raise TypeError(f"cannot interpret {x!r} as an exact rational")


def _coerce_or_none(x):
    if isinstance(x, GaussianRational):
        return x
    if isinstance(x, (int, Fraction)) and not isinstance(x, bool):
        f = Fraction(x)
        return GaussianRational._raw(f.numerator, 0, f.denominator)
    return None


def gr(value=0, im=0) -> GaussianRational:
    """Shorthand constructor accepting ints, Fractions or ``"p/q"`` strings."""
    if isinstance(value, GaussianRational) and im == 0:
        return value
    return GaussianRational(value, im)


ZERO = GaussianRational(0)
ONE = GaussianRational(1)
I = GaussianRational(0, 1)


# ---------------------------------------------------------------------------
# Row reduction kernels working on mutable lists of GaussianRational.


def _rref(rows: list[list[GaussianRational]], ncols: int) -> tuple[list[list[GaussianRational]], list[int]]:
    """Reduced row echelon form; returns the nonzero rows and pivot columns.

    Elimination runs fraction-free on Gaussian-integer rows (each row is
    cleared of denominators and of its integer content), which avoids
    allocating a scalar object per arithmetic step.
    """
    work = []
    for row in rows:
        g = _gint_row(row)
        if g is not None:
            work.append(g)
    pivots: list[int] = []
    r = 0
    nrows = len(work)
    for c in range(ncols):
        if r == nrows:
            break
        piv = None
        best = None
        for k in range(r, nrows):
            a, b = work[k][c]
            if a or b:
                size = abs(a) + abs(b)
                if best is None or size < best:
                    piv, best = k, size
                    if size == 1:
                        break
        if piv is None:
            continue
        work[r], work[piv] = work[piv], work[r]
        prow = work[r]
        pa, pb = prow[c]
        nz = [j for j in range(c, ncols) if prow[j][0] or prow[j][1]]
        for k in range(nrows):
            if k == r:
                continue
            row = work[k]
            fa, fb = row[c]
            if not (fa or fb):
                continue
            if pb == 0 and pa == 1:
                new = list(row)
            elif pb == 0:
                new = [(pa * a, pa * b) for a, b in row]
            else:
                new = [(pa * a - pb * b, pa * b + pb * a) for a, b in row]
            for j in nz:
                x, y = prow[j]
                a, b = new[j]
                new[j] = (a - (fa * x - fb * y), b - (fa * y + fb * x))
            work[k] = _content_reduce(new)
        pivots.append(c)
        r += 1
    out = []
    for row, c in zip(work[:r], pivots):
        pa, pb = row[c]
        n = pa * pa + pb * pb
        out.append(
            [
                GaussianRational._raw(a * pa + b * pb, b * pa - a * pb, n) if (a or b) else ZERO
                for a, b in row
            ]
        )
    return out, pivots


def _gint_row(row):
    lcm = 1
    for x in row:
        d = x._d
        if d != 1:
            lcm = lcm * d // math.gcd(lcm, d)
    g = [(x._a * (lcm // x._d), x._b * (lcm // x._d)) for x in row]
    if not any(a or b for a, b in g):
        return None
    return _content_reduce(g)


def _content_reduce(row):
    g = 0
    for a, b in row:
        if a:
            g = math.gcd(g, a)
        if b:
            g = math.gcd(g, b)
        if g == 1:
            return row
    if g > 1:
        return [(a // g, b // g) for a, b in row]
    return row


def _nullspace_from_rref(rref_rows, pivots, ncols) -> list[list[GaussianRational]]:
    free = [c for c in range(ncols) if c not in set(pivots)]
    basis = []
    for f in free:
        v = [ZERO] * ncols
        v[f] = ONE
        for row, p in zip(rref_rows, pivots):
            if row[f]:
                v[p] = -row[f]
        basis.append(v)
    return basis


# ---------------------------------------------------------------------------


class Matrix:
    """Immutable dense matrix over Q(i), row-major."""

    __slots__ = ("_rows", "nrows", "ncols")

    def __init__(self, rows: Iterable[Iterable], ncols: int | None = None):
        data = tuple(tuple(GaussianRational.coerce(x) for x in row) for row in rows)
        if data:
            widths = {len(r) for r in data}
            if len(widths) != 1:
                raise DimensionError("ragged matrix rows")
            w = widths.pop()
            if ncols is not None and ncols != w:
                raise DimensionError("declared column count does not match rows")
            ncols = w
        elif ncols is None:
            ncols = 0
        self._rows = data
        self.nrows = len(data)
        self.ncols = ncols

    @classmethod
    def _from_trusted(cls, rows, nrows: int, ncols: int) -> "Matrix":
        m = object.__new__(cls)
        m._rows = tuple(tuple(r) for r in rows)
        m.nrows = nrows
        m.ncols = ncols
        return m

    # constructors -------------------------------------------------------
    @classmethod
    def zeros(cls, nrows: int, ncols: int) -> "Matrix":
        return cls._from_trusted([[ZERO] * ncols for _ in range(nrows)], nrows, ncols)

    @classmethod
    def identity(cls, n: int) -> "Matrix":
        return cls._from_trusted(
            [[ONE if i == j else ZERO for j in range(n)] for i in range(n)], n, n
        )

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence], nrows: int | None = None) -> "Matrix":
        cols = [[GaussianRational.coerce(x) for x in c] for c in columns]
        if not cols:
            if nrows is None:
                raise DimensionError("row count needed for an empty column list")
            return cls._from_trusted([[] for _ in range(nrows)], nrows, 0)
        n = len(cols[0])
        if any(len(c) != n for c in cols) or (nrows is not None and nrows != n):
            raise DimensionError("columns of unequal length")
        return cls._from_trusted([[c[i] for c in cols] for i in range(n)], n, len(cols))

    @classmethod
    def diagonal(cls, entries: Sequence) -> "Matrix":
        n = len(entries)
        return cls._from_trusted(
            [[GaussianRational.coerce(entries[i]) if i == j else ZERO for j in range(n)] for i in range(n)],
            n,
            n,
        )

    # access -------------------------------------------------------------
    @property
    def shape(self) -> tuple[int, int]:
        return (self.nrows, self.ncols)

    def __getitem__(self, key):
        i, j = key
        return self._rows[i][j]

    def row(self, i: int) -> tuple[GaussianRational, ...]:
        return self._rows[i]

    def rows(self) -> tuple[tuple[GaussianRational, ...], ...]:
        return self._rows

    def column(self, j: int) -> tuple[GaussianRational, ...]:
        return tuple(r[j] for r in self._rows)

    def columns(self) -> list[tuple[GaussianRational, ...]]:
        return [self.column(j) for j in range(self.ncols)]

    def __eq__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        return self.shape == other.shape and self._rows == other._rows

    def __hash__(self):
        return hash((self.shape, self._rows))

    def __repr__(self):
        body = "; ".join(", ".join(str(x) for x in r) for r in self._rows)
        return f"Matrix[{self.nrows}x{self.ncols}]({body})"

    # algebra ------------------------------------------------------------
    def __add__(self, other: "Matrix") -> "Matrix":
        self._same_shape(other)
        return Matrix._from_trusted(
            [[a + b for a, b in zip(r, s)] for r, s in zip(self._rows, other._rows)], self.nrows, self.ncols
        )

    def __sub__(self, other: "Matrix") -> "Matrix":
        self._same_shape(other)
        return Matrix._from_trusted(
            [[a - b for a, b in zip(r, s)] for r, s in zip(self._rows, other._rows)], self.nrows, self.ncols
        )

    def __neg__(self) -> "Matrix":
        return Matrix._from_trusted([[-a for a in r] for r in self._rows], self.nrows, self.ncols)

    def scale(self, s) -> "Matrix":
        s = GaussianRational.coerce(s)
        return Matrix._from_trusted([[s * a for a in r] for r in self._rows], self.nrows, self.ncols)

    def __matmul__(self, other):
        if isinstance(other, Matrix):
            if self.ncols != other.nrows:
                raise DimensionError(f"cannot multiply {self.shape} by {other.shape}")
            cols = other.columns()
            out = []
            for r in self._rows:
                nz = [(k, x) for k, x in enumerate(r) if x]
                out.append([_dot_sparse(nz, c) for c in cols])
            return Matrix._from_trusted(out, self.nrows, other.ncols)
        return self.apply(other)

    def apply(self, vector: Sequence) -> tuple[GaussianRational, ...]:
        if len(vector) != self.ncols:
            raise DimensionError("vector length does not match column count")
        v = [GaussianRational.coerce(x) for x in vector]
        return tuple(_dot_sparse([(k, x) for k, x in enumerate(r) if x], v) for r in self._rows)

    def _same_shape(self, other):
        if self.shape != other.shape:
            raise DimensionError(f"shape mismatch {self.shape} vs {other.shape}")

    @property
    def T(self) -> "Matrix":
        return Matrix._from_trusted(
            [[self._rows[i][j] for i in range(self.nrows)] for j in range(self.ncols)], self.ncols, self.nrows
        )

    def conj(self) -> "Matrix":
        return Matrix._from_trusted([[a.conjugate() for a in r] for r in self._rows], self.nrows, self.ncols)

    @property
    def H(self) -> "Matrix":
        """Conjugate transpose."""
        return self.conj().T

    def is_zero(self) -> bool:
        return not any(x for r in self._rows for x in r)

    def is_real(self) -> bool:
        return all(x.is_real() for r in self._rows for x in r)

    def is_square(self) -> bool:
        return self.nrows == self.ncols

    def hstack(self, *others: "Matrix") -> "Matrix":
        mats = (self,) + others
        if any(m.nrows != self.nrows for m in mats):
            raise DimensionError("hstack needs equal row counts")
        rows = [sum((list(m._rows[i]) for m in mats), []) for i in range(self.nrows)]
        return Matrix._from_trusted(rows, self.nrows, sum(m.ncols for m in mats))

    def vstack(self, *others: "Matrix") -> "Matrix":
        mats = (self,) + others
        if any(m.ncols != self.ncols for m in mats):
            raise DimensionError("vstack needs equal column counts")
        rows = [r for m in mats for r in m._rows]
        return Matrix._from_trusted(rows, len(rows), self.ncols)

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> "Matrix":
        return Matrix._from_trusted(
            [[self._rows[i][j] for j in cols] for i in rows], len(rows), len(cols)
        )

    def rref(self) -> tuple["Matrix", list[int]]:
        rows, piv = _rref([list(r) for r in self._rows], self.ncols)
        return Matrix._from_trusted(rows, len(rows), self.ncols), piv

    def rank(self) -> int:
        return len(_rref([list(r) for r in self._rows], self.ncols)[1])

    def nullspace(self) -> "Matrix":
        """Matrix whose columns form a basis of the kernel."""
        rows, piv = _rref([list(r) for r in self._rows], self.ncols)
        basis = _nullspace_from_rref(rows, piv, self.ncols)
        return Matrix.from_columns(basis, nrows=self.ncols)

    def inverse(self) -> "Matrix":
        if not self.is_square():
            raise DimensionError("inverse of a non-square matrix")
        n = self.nrows
        aug = [list(r) + [ONE if i == j else ZERO for j in range(n)] for i, r in enumerate(self._rows)]
        rows, piv = _rref(aug, 2 * n)
        if piv[:n] != list(range(n)) or len(rows) < n:
            raise ZeroDivisionError("matrix is singular")
        return Matrix._from_trusted([r[n:] for r in rows], n, n)

    def solve(self, rhs: "Matrix") -> "Matrix | None":
        """Some X with self @ X = rhs, or None when inconsistent."""
        if rhs.nrows != self.nrows:
            raise DimensionError("right-hand side has the wrong number of rows")
        n = self.ncols
        aug = [list(r) + list(s) for r, s in zip(self._rows, rhs._rows)]
        rows, piv = _rref(aug, n + rhs.ncols)
        if any(p >= n for p in piv):
            return None
        sol = [[ZERO] * rhs.ncols for _ in range(n)]
        for row, p in zip(rows, piv):
            sol[p] = row[n:]
        return Matrix._from_trusted(sol, n, rhs.ncols)

    def det(self) -> GaussianRational:
        if not self.is_square():
            raise DimensionError("determinant of a non-square matrix")
        rows = [list(r) for r in self._rows]
        n = self.nrows
        det = ONE
        for c in range(n):
            piv = next((k for k in range(c, n) if rows[k][c]), None)
            if piv is None:
                return ZERO
            if piv != c:
                rows[c], rows[piv] = rows[piv], rows[c]
                det = -det
            p = rows[c][c]
            det = det * p
            inv = p.inverse()
            for k in range(c + 1, n):
                f = rows[k][c]
                if f:
                    f = f * inv
                    rows[k] = [x - f * y for x, y in zip(rows[k], rows[c])]
        return det

    def power(self, k: int) -> "Matrix":
        if not self.is_square():
            raise DimensionError("power of a non-square matrix")
        result = Matrix.identity(self.nrows)
        for _ in range(k):
            result = result @ self
        return result

    def nilpotency_index(self) -> int | None:
        """Smallest k with self^k = 0, or None if not nilpotent."""
        if not self.is_square():
            raise DimensionError("nilpotency of a non-square matrix")
        p = Matrix.identity(self.nrows)
        for k in range(self.nrows + 1):
            if p.is_zero():
                return k
            p = p @ self
        return None

    def exp_nilpotent(self, scalar=1) -> "Matrix":
        """``exp(scalar * self)`` for a nilpotent matrix (finite sum)."""
        s = GaussianRational.coerce(scalar)
        n = self.nrows
        result = Matrix.identity(n)
        term = Matrix.identity(n)
        for k in range(1, n + 1):
            term = (term @ self).scale(s / k)
            if term.is_zero():
                return result
            result = result + term
        if not (term @ self).is_zero():
            raise ValueError("matrix is not nilpotent")
        return result

    def to_json(self):
        return [[x.to_json() for x in r] for r in self._rows]


def _dot_sparse(nz, v) -> GaussianRational:
    acc = ZERO
    for k, x in nz:
        y = v[k]
        if y:
            acc = acc + x * y
    return acc


# ---------------------------------------------------------------------------


class Subspace:
    """A subspace of Q(i)^n held in canonical reduced echelon form.

    ``basis`` has the canonical basis vectors as columns. Their transposes
    form the reduced row echelon matrix of the span, so two subspaces are
    equal exactly when their bases are identical.
    """

    __slots__ = ("ambient_dim", "_rows", "_pivots", "_eqs")

    def __init__(self, ambient_dim: int, rref_rows, pivots):
        self.ambient_dim = ambient_dim
        self._rows = tuple(tuple(r) for r in rref_rows)
        self._pivots = tuple(pivots)
        self._eqs = None

    # construction -------------------------------------------------------
    @classmethod
    def span(cls, ambient_dim: int, vectors: Iterable[Sequence]) -> "Subspace":
        rows = []
        for v in vectors:
            if len(v) != ambient_dim:
                raise DimensionError(f"vector of length {len(v)} in ambient dimension {ambient_dim}")
            rows.append([GaussianRational.coerce(x) for x in v])
        rref_rows, piv = _rref(rows, ambient_dim)
        return cls(ambient_dim, rref_rows, piv)

    @classmethod
    def zero(cls, ambient_dim: int) -> "Subspace":
        return cls(ambient_dim, [], [])

    @classmethod
    def full(cls, ambient_dim: int) -> "Subspace":
        return cls(
            ambient_dim,
            [[ONE if i == j else ZERO for j in range(ambient_dim)] for i in range(ambient_dim)],
            range(ambient_dim),
        )

    @classmethod
    def coordinate(cls, ambient_dim: int, indices: Iterable[int]) -> "Subspace":
        idx = sorted(set(indices))
        return cls(
            ambient_dim, [[ONE if j == i else ZERO for j in range(ambient_dim)] for i in idx], idx
        )

    # basic data ---------------------------------------------------------
    @property
    def dim(self) -> int:
        return len(self._rows)

    @property
    def basis(self) -> Matrix:
        return Matrix.from_columns(self._rows, nrows=self.ambient_dim)

    @property
    def pivots(self) -> tuple[int, ...]:
        return self._pivots

    def vectors(self) -> list[tuple[GaussianRational, ...]]:
        return list(self._rows)

    def __eq__(self, other):
        if not isinstance(other, Subspace):
            return NotImplemented
        return self.ambient_dim == other.ambient_dim and self._rows == other._rows

    def __hash__(self):
        return hash((self.ambient_dim, self._rows))

    def __repr__(self):
        return f"Subspace(dim={self.dim}, ambient={self.ambient_dim})"

    def is_zero(self) -> bool:
        return not self._rows

    def is_full(self) -> bool:
        return self.dim == self.ambient_dim

    # membership ---------------------------------------------------------
    def equations(self) -> Matrix:
        """Rows spanning the annihilator: ``v`` lies in self iff ``E v = 0``."""
        if self._eqs is None:
            basis = _nullspace_from_rref([list(r) for r in self._rows], list(self._pivots), self.ambient_dim)
            self._eqs = Matrix._from_trusted(basis, len(basis), self.ambient_dim)
        return self._eqs

    def contains(self, vector: Sequence) -> bool:
        eqs = self.equations()
        return not any(eqs.apply(vector))

    def contains_subspace(self, other: "Subspace") -> bool:
        _check_ambient(self, other)
        if other.dim > self.dim:
            return False
        eqs = self.equations()
        return all(not any(eqs.apply(v)) for v in other._rows)

    def __le__(self, other: "Subspace") -> bool:
        return other.contains_subspace(self)

    def coordinates(self, vector: Sequence) -> tuple[GaussianRational, ...]:
        """Coefficients of ``vector`` in the canonical basis."""
        if not self.contains(vector):
            raise ValueError("vector does not lie in the subspace")
        return tuple(GaussianRational.coerce(vector[p]) for p in self._pivots)

    # transformations ----------------------------------------------------
    def conj(self) -> "Subspace":
        return Subspace(self.ambient_dim, [[x.conjugate() for x in r] for r in self._rows], self._pivots)

    def image(self, f: Matrix) -> "Subspace":
        if f.ncols != self.ambient_dim:
            raise DimensionError("map domain does not match ambient dimension")
        return Subspace.span(f.nrows, [f.apply(v) for v in self._rows])

    def complement_in(self, inside: "Subspace") -> list[tuple[GaussianRational, ...]]:
        """Vectors of ``inside`` completing self's basis to one of ``inside``."""
        if not inside.contains_subspace(self):
            raise ValueError("subspace is not contained in the given space")
        chosen = []
        current = self
        for v in inside._rows:
            if not current.contains(v):
                chosen.append(v)
                current = join(current, Subspace.span(self.ambient_dim, [v]))
        return chosen


def _check_ambient(a: Subspace, b: Subspace) -> None:
    if a.ambient_dim != b.ambient_dim:
        raise DimensionError(f"ambient mismatch {a.ambient_dim} vs {b.ambient_dim}")


def canonicalize(vectors: Matrix, ambient_dim: int | None = None) -> Subspace:
    """Span of the columns of ``vectors`` in canonical form."""
    if ambient_dim is not None and vectors.nrows != ambient_dim:
        raise DimensionError(f"matrix has {vectors.nrows} rows, expected {ambient_dim}")
    return Subspace.span(vectors.nrows, vectors.columns())


def join(a: Subspace, b: Subspace) -> Subspace:
    _check_ambient(a, b)
    if a.is_zero() or b.is_full():
        return b
    if b.is_zero() or a.is_full():
        return a
    return Subspace.span(a.ambient_dim, list(a._rows) + list(b._rows))


def meet(a: Subspace, b: Subspace) -> Subspace:
    _check_ambient(a, b)
    if a.is_zero() or b.is_full():
        return a
    if b.is_zero() or a.is_full():
        return b
    eqs = a.equations().vstack(b.equations())
    return Subspace.span(a.ambient_dim, eqs.nullspace().columns())


def join_all(spaces: Iterable[Subspace], ambient_dim: int) -> Subspace:
    rows = []
    for s in spaces:
        if s.ambient_dim != ambient_dim:
            raise DimensionError("ambient mismatch in join_all")
        rows.extend(s._rows)
    return Subspace.span(ambient_dim, rows)


def preimage(f: Matrix, target: Subspace) -> Subspace:
    """``{v : f v in target}`` in canonical form."""
    if f.nrows != target.ambient_dim:
        raise DimensionError("map codomain does not match the target's ambient dimension")
    if target.is_full():
        return Subspace.full(f.ncols)
    constraint = target.equations() @ f
    return Subspace.span(f.ncols, constraint.nullspace().columns())


def quotient_matrix(sub: Subspace, inside: Subspace) -> Matrix:
    """Coordinates on ``inside / sub``.

    Returns a ``(dim inside - dim sub) x n`` matrix that vanishes on ``sub``
    and restricts to an isomorphism from a complement of ``sub`` in
    ``inside`` onto the quotient coordinates.
    """
    _check_ambient(sub, inside)
    if not inside.contains_subspace(sub):
        raise ValueError("sub is not contained in inside")
    n = sub.ambient_dim
    comp = sub.complement_in(inside)
    rest = inside.complement_in(Subspace.full(n))
    frame = Matrix.from_columns(list(sub._rows) + comp + rest, nrows=n)
    inv = frame.inverse()
    lo = sub.dim
    return inv.submatrix(range(lo, lo + len(comp)), range(n))


def is_positive_definite_hermitian(g: Matrix) -> bool:
    """Sylvester's criterion with exact leading principal minors."""
    if not g.is_square():
        raise DimensionError("Gram matrix must be square")
    if g.H != g:
        raise NotHermitianError("matrix is not Hermitian")
    for k in range(1, g.nrows + 1):
        minor = g.submatrix(range(k), range(k)).det()
        # minors of a Hermitian matrix are real
        if minor.im != 0 or minor.re <= 0:
            return False
    return True
