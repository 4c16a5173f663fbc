"""Dense complex matrices over the exact or float backend, plus the
elementary algebra (adjoint, commutator, rank, hermitian and PSD tests)."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .scalar import (
    EXACT,
    FLOAT,
    ONE,
    ZERO,
    BackendMismatch,
    Gaussian,
    backend_of,
    format_scalar,
    to_backend,
)


class ShapeError(ValueError):
    """Operand shapes are incompatible."""


@dataclass(frozen=True)
class Tolerance:
    """Relative thresholds for the float backend. The exact backend ignores them."""

    rank_rel: float = 1e-10
    residual_rel: float = 1e-10
    psd_rel: float = 1e-10

    def __post_init__(self):
        for name in ("rank_rel", "residual_rel", "psd_rel"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be strictly positive")


DEFAULT_TOL = Tolerance()


class Matrix:
    """Immutable dense m x n matrix.

    Exact matrices hold a tuple of row tuples of :class:`Gaussian`; float
    matrices hold a read-only ``complex128`` array.  Shapes with a zero
    dimension are allowed internally (empty factors, empty bases) even
    though user-facing inputs are always at least 1 x 1.
    """

    __slots__ = ("_rows", "_arr", "rows", "cols", "backend")

    def __init__(self, entries, backend: str | None = None):
        if isinstance(entries, np.ndarray):
            if backend == EXACT:
                raise BackendMismatch("numpy arrays are float-backend only")
            arr = np.array(entries, dtype=np.complex128)
            if arr.ndim != 2:
                raise ShapeError("matrix must be two-dimensional")
            self._init_float(arr)
            return
        rows = [list(r) for r in entries]
        if not rows:
            raise ShapeError("use Matrix.zeros for empty shapes")
        ncols = len(rows[0])
        if any(len(r) != ncols for r in rows):
            raise ShapeError("ragged rows")
        if backend is None:
            kinds = {backend_of(x) for r in rows for x in r}
            if len(kinds) > 1:
                # integers are backend-neutral; only float literals force float
                kinds = {FLOAT} if any(isinstance(x, (float, complex)) for r in rows for x in r) else {EXACT}
                if any(isinstance(x, Gaussian) for r in rows for x in r):
                    raise BackendMismatch("matrix entries mix exact and float scalars")
            backend = kinds.pop() if kinds else EXACT
        if backend == EXACT:
            self._init_exact(tuple(tuple(to_backend(x, EXACT) for x in r) for r in rows), len(rows), ncols)
        elif backend == FLOAT:
            if any(isinstance(x, Gaussian) for r in rows for x in r):
                raise BackendMismatch("exact entries given to a float matrix")
            self._init_float(np.array([[complex(x) for x in r] for r in rows], dtype=np.complex128).reshape(len(rows), ncols))
        else:
            raise ValueError(f"unknown backend {backend!r}")

    def _init_exact(self, rows, m, n):
        object.__setattr__(self, "_rows", rows)
        object.__setattr__(self, "_arr", None)
        object.__setattr__(self, "rows", m)
        object.__setattr__(self, "cols", n)
        object.__setattr__(self, "backend", EXACT)

    def _init_float(self, arr):
        arr = np.ascontiguousarray(arr, dtype=np.complex128)
        arr.setflags(write=False)
        object.__setattr__(self, "_rows", None)
        object.__setattr__(self, "_arr", arr)
        object.__setattr__(self, "rows", arr.shape[0])
        object.__setattr__(self, "cols", arr.shape[1])
        object.__setattr__(self, "backend", FLOAT)

    def __setattr__(self, name, value):
        raise AttributeError("Matrix is immutable")

    def __reduce__(self):
        if self._rows is not None:
            return (Matrix._exact, (self._rows, self.rows, self.cols))
        return (Matrix.from_array, (np.array(self._arr),))

    # construction helpers

    @classmethod
    def _exact(cls, rows, m: int | None = None, n: int | None = None) -> "Matrix":
        M = object.__new__(cls)
        rows = tuple(tuple(r) for r in rows)
        if m is None:
            m = len(rows)
        if n is None:
            n = len(rows[0]) if rows else 0
        M._init_exact(rows, m, n)
        return M

    @classmethod
    def from_array(cls, arr) -> "Matrix":
        M = object.__new__(cls)
        M._init_float(np.asarray(arr, dtype=np.complex128))
        return M

    @classmethod
    def zeros(cls, m: int, n: int, backend: str = EXACT) -> "Matrix":
        if backend == EXACT:
            return cls._exact([[ZERO] * n for _ in range(m)], m, n)
        return cls.from_array(np.zeros((m, n), dtype=np.complex128))

    @classmethod
    def identity(cls, n: int, backend: str = EXACT) -> "Matrix":
        if backend == EXACT:
            return cls._exact([[ONE if i == j else ZERO for j in range(n)] for i in range(n)], n, n)
        return cls.from_array(np.eye(n, dtype=np.complex128))

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence], nrows: int, backend: str) -> "Matrix":
        """Stack column vectors; an empty list gives an ``nrows x 0`` matrix."""
        if not columns:
            return cls.zeros(nrows, 0, backend)
        if backend == EXACT:
            return cls._exact([[columns[j][i] for j in range(len(columns))] for i in range(nrows)], nrows, len(columns))
        return cls.from_array(np.column_stack([np.asarray(c, dtype=np.complex128) for c in columns]))

    @classmethod
    def diag(cls, values: Sequence, backend: str | None = None) -> "Matrix":
        n = len(values)
        return cls([[values[i] if i == j else 0 for j in range(n)] for i in range(n)], backend)

    # access

    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    @property
    def is_square(self) -> bool:
        return self.rows == self.cols

    @property
    def exact(self) -> bool:
        return self.backend == EXACT

    def __getitem__(self, ij):
        i, j = ij
        if self._rows is not None:
            return self._rows[i][j]
        return complex(self._arr[i, j])

    def row(self, i: int) -> list:
        if self._rows is not None:
            return list(self._rows[i])
        return [complex(x) for x in self._arr[i]]

    def column(self, j: int) -> list:
        if self._rows is not None:
            return [r[j] for r in self._rows]
        return [complex(x) for x in self._arr[:, j]]

    def columns(self) -> list[list]:
        return [self.column(j) for j in range(self.cols)]

    def tolist(self) -> list[list]:
        return [self.row(i) for i in range(self.rows)]

    def to_numpy(self) -> np.ndarray:
        if self._arr is not None:
            return self._arr
        return np.array([[complex(x) for x in r] for r in self._rows], dtype=np.complex128).reshape(self.rows, self.cols)

    def to_float(self) -> "Matrix":
        return self if self._arr is not None else Matrix.from_array(self.to_numpy())

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> "Matrix":
        if self._rows is not None:
            return Matrix._exact([[self._rows[i][j] for j in cols] for i in rows], len(rows), len(cols))
        return Matrix.from_array(self._arr[np.ix_(list(rows), list(cols))])

    def hstack(self, other: "Matrix") -> "Matrix":
        _same_backend(self, other)
        if self.rows != other.rows:
            raise ShapeError(f"row counts differ: {self.rows} vs {other.rows}")
        if self._rows is not None:
            return Matrix._exact([a + b for a, b in zip(self._rows, other._rows)], self.rows, self.cols + other.cols)
        return Matrix.from_array(np.hstack([self._arr, other._arr]))

    def vstack(self, other: "Matrix") -> "Matrix":
        _same_backend(self, other)
        if self.cols != other.cols:
            raise ShapeError(f"column counts differ: {self.cols} vs {other.cols}")
        if self._rows is not None:
            return Matrix._exact(self._rows + other._rows, self.rows + other.rows, self.cols)
        return Matrix.from_array(np.vstack([self._arr, other._arr]))

    # arithmetic

    def __add__(self, other: "Matrix") -> "Matrix":
        _check_same(self, other)
        if self._rows is not None:
            return Matrix._exact([[a + b for a, b in zip(r, s)] for r, s in zip(self._rows, other._rows)], self.rows, self.cols)
        return Matrix.from_array(self._arr + other._arr)

    def __sub__(self, other: "Matrix") -> "Matrix":
        _check_same(self, other)
        if self._rows is not None:
            return Matrix._exact([[a - b for a, b in zip(r, s)] for r, s in zip(self._rows, other._rows)], self.rows, self.cols)
        return Matrix.from_array(self._arr - other._arr)

    def __neg__(self) -> "Matrix":
        if self._rows is not None:
            return Matrix._exact([[-a for a in r] for r in self._rows], self.rows, self.cols)
        return Matrix.from_array(-self._arr)

    def scale(self, c) -> "Matrix":
        if self._rows is not None:
            c = to_backend(c, EXACT)
            return Matrix._exact([[c * a for a in r] for r in self._rows], self.rows, self.cols)
        if isinstance(c, Gaussian):
            raise BackendMismatch("exact scalar times float matrix")
        return Matrix.from_array(complex(c) * self._arr)

    def __rmul__(self, c) -> "Matrix":
        if isinstance(c, Matrix):
            return NotImplemented
        return self.scale(c)

    def __mul__(self, c) -> "Matrix":
        if isinstance(c, Matrix):
            raise TypeError("use @ for matrix products")
        return self.scale(c)

    def __matmul__(self, other: "Matrix") -> "Matrix":
        _same_backend(self, other)
        if self.cols != other.rows:
            raise ShapeError(f"cannot multiply {self.shape} by {other.shape}")
        if self._rows is None:
            return Matrix.from_array(self._arr @ other._arr)
        return Matrix._exact(_exact_matmul(self._rows, other._rows, other.cols), self.rows, other.cols)

    def __pow__(self, k: int) -> "Matrix":
        if not self.is_square:
            raise ShapeError("power of a non-square matrix")
        if k < 0:
            raise ValueError("negative matrix power")
        result = Matrix.identity(self.rows, self.backend)
        base = self
        while k:
            if k & 1:
                result = result @ base
            k >>= 1
            if k:
                base = base @ base
        return result

    def __eq__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        if self.backend != other.backend or self.shape != other.shape:
            return False
        if self._rows is not None:
            return self._rows == other._rows
        return bool(np.array_equal(self._arr, other._arr))

    def __hash__(self):
        if self._rows is not None:
            return hash((self.shape, self._rows))
        return hash((self.shape, self._arr.tobytes()))

    def __repr__(self):
        body = "; ".join(", ".join(format_scalar(x) for x in r) for r in self.tolist())
        return f"Matrix[{self.backend}]({self.rows}x{self.cols}: {body})"

    def is_zero(self) -> bool:
        """Exact zero test (both backends; float compares to 0.0 literally)."""
        if self._rows is not None:
            return not any(x for r in self._rows for x in r)
        return not np.any(self._arr)


def _integer_form(vec):
    """Scale a vector of Gaussians to Gaussian integers: (den, [(re, im), ...])."""
    den = 1
    for x in vec:
        den = math.lcm(den, x.re.denominator, x.im.denominator)
    return den, [(x.re.numerator * (den // x.re.denominator), x.im.numerator * (den // x.im.denominator))
                 for x in vec]


def _exact_matmul(A, B, ncols):
    """Gaussian-rational product.  Each row of A and column of B is brought
    to a common denominator so the inner sums run over Python integers,
    with one normalization per output entry."""
    cols = [_integer_form(col) for col in zip(*B)] if B else [(1, [])] * ncols
    out = []
    for r in A:
        da, arow = _integer_form(r)
        nz = [(k, ar, ai) for k, (ar, ai) in enumerate(arow) if ar or ai]
        new = []
        for db, col in cols:
            re = im = 0
            for k, ar, ai in nz:
                br, bi = col[k]
                re += ar * br - ai * bi
                im += ar * bi + ai * br
            d = da * db
            new.append(Gaussian._raw(Fraction(re, d), Fraction(im, d)))
        out.append(new)
    return out


def _same_backend(A: Matrix, B: Matrix):
    if A.backend != B.backend:
        raise BackendMismatch(f"cannot combine {A.backend} and {B.backend} matrices")


def _check_same(A: Matrix, B: Matrix):
    _same_backend(A, B)
    if A.shape != B.shape:
        raise ShapeError(f"shape mismatch {A.shape} vs {B.shape}")


def adjoint(M: Matrix) -> Matrix:
    """Conjugate transpose."""
    if M.exact:
        return Matrix._exact([[M._rows[i][j].conjugate() for i in range(M.rows)] for j in range(M.cols)], M.cols, M.rows)
    return Matrix.from_array(M._arr.conj().T)


def commutator(A: Matrix, B: Matrix) -> Matrix:
    """``[A, B] = AB - BA``."""
    _same_backend(A, B)
    if not (A.is_square and A.shape == B.shape):
        raise ShapeError(f"commutator needs equal square shapes, got {A.shape} and {B.shape}")
    return A @ B - B @ A


def trace(M: Matrix):
    if not M.is_square:
        raise ShapeError("trace of a non-square matrix")
    if M.exact:
        t = ZERO
        for i in range(M.rows):
            t = t + M._rows[i][i]
        return t
    return complex(np.trace(M._arr))


def frobenius_sq(M: Matrix):
    """Squared Frobenius norm: a Fraction for exact matrices, float otherwise."""
    if M.exact:
        return sum((x.abs2() for r in M._rows for x in r), Fraction(0))
    return float(np.vdot(M._arr, M._arr).real)


def frobenius(M: Matrix) -> float:
    return math.sqrt(frobenius_sq(M))


def rref(M: Matrix) -> tuple[Matrix, list[int]]:
    """Reduced row echelon form of an exact matrix and its pivot columns."""
    if not M.exact:
        raise BackendMismatch("rref is exact-backend only; float rank uses the SVD")
    rows = [list(r) for r in M._rows]
    m, n = M.rows, M.cols
    pivots: list[int] = []
    r = 0
    for c in range(n):
        if r == m:
            break
        p = next((i for i in range(r, m) if rows[i][c]), None)
        if p is None:
            continue
        rows[r], rows[p] = rows[p], rows[r]
        inv = rows[r][c].inverse()
        rows[r] = [x * inv if x else x for x in rows[r]]
        for i in range(m):
            if i != r:
                f = rows[i][c]
                if f:
                    rows[i] = [a - f * b if b else a for a, b in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
    return Matrix._exact(rows, m, n), pivots


def _rank_exact(M: Matrix) -> int:
    """Fraction-free (Bareiss) elimination on Gaussian-integer-scaled rows."""
    if M.rows == 0 or M.cols == 0:
        return 0
    rows = []
    for r in M._rows:
        den = 1
        for x in r:
            den = math.lcm(den, x.re.denominator, x.im.denominator)
        rows.append([(int(x.re * den), int(x.im * den)) for x in r])
    m, n = M.rows, M.cols
    rank = 0
    prev = (1, 0)
    for c in range(n):
        if rank == m:
            break
        p = next((i for i in range(rank, m) if rows[i][c] != (0, 0)), None)
        if p is None:
            continue
        rows[rank], rows[p] = rows[p], rows[rank]
        pr, pi = rows[rank][c]
        dr, di = prev
        dd = dr * dr + di * di
        for i in range(rank + 1, m):
            fr, fi = rows[i][c]
            new = []
            for k in range(n):
                ar, ai = rows[i][k]
                br, bi = rows[rank][k]
                # pivot*a - f*b, then exact division by the previous pivot
                xr = pr * ar - pi * ai - (fr * br - fi * bi)
                xi = pr * ai + pi * ar - (fr * bi + fi * br)
                # (x / prev) = x * conj(prev) / |prev|^2
                qr = xr * dr + xi * di
                qi = xi * dr - xr * di
                new.append((qr // dd, qi // dd))
            rows[i] = new
        prev = (pr, pi)
        rank += 1
    return rank


def singular_values(M: Matrix) -> np.ndarray:
    if M.rows == 0 or M.cols == 0:
        return np.zeros(0)
    return np.linalg.svd(M.to_numpy(), compute_uv=False)


def float_rank_from_sv(s: np.ndarray, shape: tuple[int, int], tol: Tolerance) -> int:
    if s.size == 0 or s[0] == 0:
        return 0
    cutoff = tol.rank_rel * s[0] * max(shape)
    return int(np.sum(s > cutoff))


def rank(M: Matrix, tol: Tolerance = DEFAULT_TOL) -> int:
    if M.exact:
        return _rank_exact(M)
    return float_rank_from_sv(singular_values(M), M.shape, tol)


def is_hermitian(M: Matrix, tol: Tolerance = DEFAULT_TOL) -> bool:
    if not M.is_square:
        raise ShapeError("hermitian test needs a square matrix")
    A = adjoint(M)
    if M.exact:
        return M == A
    return frobenius(M - A) <= tol.residual_rel * (1 + frobenius(M))


def char_poly_coeffs(M: Matrix) -> list[Gaussian]:
    """Faddeev-LeVerrier: ``c`` with det(xI - M) = sum c[k] x^(n-k), c[0] = 1."""
    if not (M.exact and M.is_square):
        raise ValueError("char_poly_coeffs needs a square exact matrix")
    n = M.rows
    c = [ONE]
    Mk = Matrix.zeros(n, n)
    eye = Matrix.identity(n)
    for k in range(1, n + 1):
        Mk = M @ Mk + eye.scale(c[-1])
        c.append(-trace(M @ Mk) / k)
    return c


def principal_minor_sums(M: Matrix) -> list[Gaussian]:
    """``e_k`` = sum of the k x k principal minors, for k = 0..n."""
    c = char_poly_coeffs(M)
    return [ck if k % 2 == 0 else -ck for k, ck in enumerate(c)]


def is_psd(M: Matrix, tol: Tolerance = DEFAULT_TOL) -> bool:
    """Positive semidefiniteness of a hermitian matrix.

    Exact: a hermitian matrix is PSD iff every principal-minor sum is >= 0
    (its characteristic polynomial then has no positive roots of
    alternating sign).  Float: eigenvalues of the symmetrized matrix.
    """
    if not is_hermitian(M, tol):
        raise ValueError("is_psd requires a hermitian matrix")
    if M.rows == 0:
        return True
    if M.exact:
        return all(e.im == 0 and e.re >= 0 for e in principal_minor_sums(M))
    A = M.to_numpy()
    H = (A + A.conj().T) / 2
    w = np.linalg.eigvalsh(H)
    scale = float(np.max(np.abs(w))) if w.size else 0.0
    return bool(np.all(w >= -tol.psd_rel * scale))


def as_matrix(x: Matrix | Iterable, backend: str | None = None) -> Matrix:
    return x if isinstance(x, Matrix) else Matrix(x, backend)


def inverse(M: Matrix) -> Matrix:
    """Inverse of a nonsingular square matrix (Gauss-Jordan when exact)."""
    if not M.is_square:
        raise ShapeError("inverse of a non-square matrix")
    n = M.rows
    if n == 0:
        return M
    if not M.exact:
        return Matrix.from_array(np.linalg.inv(M.to_numpy()))
    R, piv = rref(M.hstack(Matrix.identity(n)))
    if piv[:n] != list(range(n)) or len(piv) < n:
        raise ZeroDivisionError("matrix is singular")
    return R.submatrix(range(n), range(n, 2 * n))


def agree(A: Matrix, B: Matrix, tol: Tolerance = DEFAULT_TOL) -> tuple[bool, float]:
    """Matrix equality verdict and Frobenius residual ``||A - B||``.

    Exact matrices compare entrywise.  Float matrices pass when the residual
    is at most ``residual_rel * (1 + ||A|| + ||B||)``.
    """
    diff = A - B
    res = frobenius(diff)
    if A.exact:
        return diff.is_zero(), res
    return res <= tol.residual_rel * (1 + frobenius(A) + frobenius(B)), res


def negligible(A: Matrix, tol: Tolerance = DEFAULT_TOL, scale: float = 0.0) -> tuple[bool, float]:
    """Zero test with the same convention as :func:`agree`; ``scale`` is the
    norm of the quantities whose difference produced ``A``."""
    res = frobenius(A)
    if A.exact:
        return res == 0, res
    return res <= tol.residual_rel * (1 + scale), res
