"""Exact rational and floating-point matrix routines.

Exact matrices are numpy object arrays of :class:`fractions.Fraction`; floating
matrices are ``float64`` arrays.  The exact backend decides every zero test;
the floating backend only exists for quick large-``d`` work.
"""

from __future__ import annotations

import csv
import io
import json
import math
from fractions import Fraction
from typing import Sequence

import numpy as np

__all__ = [
    "SingularMatrixError",
    "DEFAULT_TOL",
    "as_exact",
    "is_exact",
    "det_exact",
    "det_integer",
    "integer_scaled",
    "submatrix",
    "cross_indices",
    "invert_exact",
    "is_pd_exact",
    "is_pd_float",
    "min_eigenvalue",
    "hadamard_bound",
    "det_zero_float",
    "matrix_to_json",
    "matrix_from_json",
    "matrix_to_csv",
    "matrix_from_csv",
    "format_fraction",
    "parse_fraction",
]

DEFAULT_TOL = 1e-9


class SingularMatrixError(ArithmeticError):
    pass


def as_exact(M) -> np.ndarray:
    """Copy ``M`` into an object array of Fractions (floats are converted exactly)."""
    A = np.asarray(M, dtype=object)
    out = np.empty(A.shape, dtype=object)
    for idx, v in np.ndenumerate(A):
        out[idx] = v if isinstance(v, Fraction) else Fraction(v)
    return out


def is_exact(M) -> bool:
    return isinstance(M, np.ndarray) and M.dtype == object


def integer_scaled(M) -> tuple[list[list[int]], int]:
    """Return ``(N, L)`` with ``N = L * M`` an integer matrix and ``L > 0``."""
    rows = [[Fraction(v) for v in row] for row in np.asarray(M, dtype=object)]
    L = 1
    for row in rows:
        for v in row:
            L = math.lcm(L, v.denominator)
    return [[v.numerator * (L // v.denominator) for v in row] for row in rows], L


def det_integer(N: Sequence[Sequence[int]]) -> int:
    """Determinant of an integer matrix by fraction-free (Bareiss) elimination."""
    a = [list(row) for row in N]
    n = len(a)
    if n == 0:
        return 1
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for r in range(k + 1, n):
                if a[r][k] != 0:
                    a[k], a[r] = a[r], a[k]
                    sign = -sign
                    break
            else:
                return 0
        pivot = a[k][k]
        row_k = a[k]
        for i in range(k + 1, n):
            row_i = a[i]
            f = row_i[k]
            for j in range(k + 1, n):
                row_i[j] = (pivot * row_i[j] - f * row_k[j]) // prev
            row_i[k] = 0
        prev = pivot
    return sign * a[n - 1][n - 1]


def det_exact(M) -> Fraction:
    """Exact determinant of a rational matrix."""
    A = np.asarray(M, dtype=object)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise ValueError(f"square matrix required, got shape {A.shape}")
    N, L = integer_scaled(A)
    return Fraction(det_integer(N), L ** A.shape[0])


def cross_indices(i: int, j: int, K) -> tuple[list[int], list[int]]:
    """Row and column index lists (1-indexed) for the cross-submatrix ``M_{iK,jK}``.

    The distinguished node goes first, then ``K`` ascending.
    """
    ks = sorted(K)
    return [i] + ks, [j] + ks


def submatrix(M, rows: Sequence[int], cols: Sequence[int]) -> np.ndarray:
    """Submatrix on 1-indexed ``rows`` and ``cols``, kept in the given order."""
    A = np.asarray(M)
    n, m = A.shape
    if any(not 1 <= r <= n for r in rows) or any(not 1 <= c <= m for c in cols):
        raise ValueError(f"indices out of range for a {n}x{m} matrix")
    return A[np.ix_([r - 1 for r in rows], [c - 1 for c in cols])]


def invert_exact(M) -> np.ndarray:
    """Exact inverse by Gauss-Jordan elimination over the rationals."""
    A = as_exact(M)
    n = A.shape[0]
    if A.shape != (n, n):
        raise ValueError("square matrix required")
    aug = [list(A[r]) + [Fraction(int(r == c)) for c in range(n)] for r in range(n)]
    for k in range(n):
        piv = next((r for r in range(k, n) if aug[r][k] != 0), None)
        if piv is None:
            raise SingularMatrixError("matrix is singular")
        aug[k], aug[piv] = aug[piv], aug[k]
        inv_p = 1 / aug[k][k]
        aug[k] = [v * inv_p for v in aug[k]]
        for r in range(n):
            if r != k and aug[r][k] != 0:
                f = aug[r][k]
                row_k = aug[k]
                aug[r] = [a - f * b for a, b in zip(aug[r], row_k)]
    out = np.empty((n, n), dtype=object)
    for r in range(n):
        for c in range(n):
            out[r, c] = aug[r][n + c]
    return out


def _check_symmetric(M: np.ndarray) -> None:
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise ValueError(f"square matrix required, got shape {M.shape}")
    if is_exact(M):
        if any(M[a, b] != M[b, a] for a in range(M.shape[0]) for b in range(a)):
            raise ValueError("matrix is not symmetric")
    elif not np.allclose(M, M.T, rtol=1e-12, atol=1e-14):
        raise ValueError("matrix is not symmetric")


def is_pd_exact(M) -> bool:
    """Exact positive-definiteness via the signs of LDL^T pivots."""
    A = as_exact(M)
    _check_symmetric(A)
    n = A.shape[0]
    a = [list(row) for row in A]
    for k in range(n):
        if a[k][k] <= 0:
            return False
        for i in range(k + 1, n):
            f = a[i][k] / a[k][k]
            if f:
                for j in range(k + 1, n):
                    a[i][j] -= f * a[k][j]
    return True


def is_pd_float(M) -> bool:
    M = np.asarray(M, dtype=float)
    _check_symmetric(M)
    try:
        np.linalg.cholesky(M)
    except np.linalg.LinAlgError:
        return False
    return True


def min_eigenvalue(M) -> float:
    M = np.asarray(M, dtype=float)
    _check_symmetric(M)
    return float(np.linalg.eigvalsh(M)[0])


def hadamard_bound(M) -> float:
    """Product of the Euclidean row norms, an upper bound on ``|det M|``."""
    M = np.asarray(M, dtype=float)
    return float(np.prod(np.linalg.norm(M, axis=1)))


def det_zero_float(M, tol: float = DEFAULT_TOL) -> bool:
    """Floating zero test ``|det M| <= tol * hadamard_bound(M)``."""
    M = np.asarray(M, dtype=float)
    if M.size == 0:
        return False
    return abs(float(np.linalg.det(M))) <= tol * hadamard_bound(M)


def format_fraction(x, decimal: bool = False) -> str:
    x = Fraction(x)
    if decimal:
        return f"{float(x):.12g}"
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def parse_fraction(s) -> Fraction:
    if isinstance(s, bool):
        raise ValueError(f"not a number: {s!r}")
    if isinstance(s, (int, float, Fraction)):
        return Fraction(s)
    if isinstance(s, str):
        try:
            return Fraction(s.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise ValueError(f"cannot parse rational {s!r}") from exc
    raise ValueError(f"cannot parse rational {s!r}")


def matrix_to_json(M, decimal: bool = False) -> dict:
    A = np.asarray(M, dtype=object)
    return {"n": A.shape[0], "entries": [[format_fraction(v, decimal) for v in row] for row in A]}


def matrix_from_json(obj) -> np.ndarray:
    """Parse ``{"entries": [["num/den", ...], ...]}`` (``n`` optional) into an exact matrix."""
    if isinstance(obj, (str, bytes)):
        obj = json.loads(obj)
    rows = obj["entries"] if isinstance(obj, dict) else obj
    if not rows or any(len(r) != len(rows) for r in rows):
        raise ValueError("matrix must be square and nonempty")
    if isinstance(obj, dict) and "n" in obj and obj["n"] != len(rows):
        raise ValueError("'n' does not match the number of rows")
    return as_exact([[parse_fraction(v) for v in r] for r in rows])


def matrix_to_csv(M) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    for row in np.asarray(M, dtype=float):
        w.writerow([repr(float(v)) for v in row])
    return buf.getvalue()


def matrix_from_csv(text: str) -> np.ndarray:
    rows = [r for r in csv.reader(io.StringIO(text)) if r]
    try:
        M = np.array([[float(v) for v in r] for r in rows], dtype=float)
    except ValueError as exc:
        raise ValueError(f"malformed CSV matrix: {exc}") from exc
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise ValueError("CSV matrix must be square")
    if not np.all(np.isfinite(M)):
        raise ValueError("CSV matrix has non-finite entries")
    return M
