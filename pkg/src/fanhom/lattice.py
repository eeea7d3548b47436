"""Exact integer linear algebra: Smith normal form, kernels, saturations.

Every matrix is a dense 2-d numpy array with ``dtype=object`` whose entries
are Python ints, so all arithmetic is arbitrary precision and nothing here
ever touches floating point.  Matrices with zero rows or zero columns are
legal everywhere and denote zero maps (chain complexes routinely have empty
terms).

The pivot rule is fixed: among the nonzero entries of the working block,
take one of minimal absolute value, ties broken by (row, column)
lexicographic order.  Every decomposition, kernel and complement produced
here is therefore reproducible.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = [
    "imat",
    "zeros",
    "identity",
    "mdot",
    "SmithDecomposition",
    "smith_normal_form",
    "elementary_divisors",
    "integer_rank",
    "kernel_basis",
    "saturation_and_complement",
    "unimodular_inverse",
    "determinant",
    "rank_mod_prime",
]


def imat(data, shape=None):
    """Build an integer matrix: a 2-d object ndarray of Python ints.

    ``shape`` is only needed for degenerate inputs, e.g.
    ``imat([], shape=(0, 3))``.
    """
    if isinstance(data, np.ndarray):
        if data.ndim != 2:
            raise ValueError("expected a 2-d array")
        out = np.empty(data.shape, dtype=object)
        for i in range(data.shape[0]):
            for j in range(data.shape[1]):
                out[i, j] = int(data[i, j])
        return out
    rows = [[int(x) for x in row] for row in data]
    if shape is None:
        m = len(rows)
        n = len(rows[0]) if rows else 0
    else:
        m, n = shape
        if not rows and n == 0:
            rows = [[] for _ in range(m)]
    if len(rows) != m or any(len(r) != n for r in rows):
        raise ValueError(f"matrix data does not match shape {m} x {n}")
    out = np.empty((m, n), dtype=object)
    for i in range(m):
        row = rows[i]
        for j in range(n):
            out[i, j] = row[j]
    return out


def zeros(rows, cols):
    A = np.empty((rows, cols), dtype=object)
    A[...] = 0
    return A


def identity(n):
    A = zeros(n, n)
    for i in range(n):
        A[i, i] = 1
    return A


def _as_matrix(A):
    if isinstance(A, np.ndarray) and A.dtype == object and A.ndim == 2:
        return A
    return imat(A)


def mdot(A, B):
    """Exact matrix product, safe for empty shapes."""
    A = _as_matrix(A)
    B = _as_matrix(B)
    if A.shape[1] != B.shape[0]:
        raise ValueError(f"shape mismatch: {A.shape} @ {B.shape}")
    if A.shape[0] == 0 or B.shape[1] == 0 or A.shape[1] == 0:
        return zeros(A.shape[0], B.shape[1])
    return A.dot(B)


def _pivot_position(S, t):
    """Nonzero entry of minimal |.| in S[t:, t:], ties (row, col) lex."""
    block = S[t:, t:]
    if block.size == 0:
        return None
    unit = (block == 1) | (block == -1)
    if unit.any():
        flat = int(unit.argmax())
    else:
        nz = block != 0
        if not nz.any():
            return None
        vals = np.abs(block)
        big = int(vals.max()) + 1
        vals = np.where(nz, vals, big)
        flat = int(vals.argmin())
    i, j = divmod(flat, block.shape[1])
    return (t + i, t + j)


# The elimination runs on int64 while every tracked entry stays below this
# bound, which makes a full round of row/column operations provably free of
# overflow (products < 2^52, sums of <= 2^10 of them < 2^62); past the bound
# the state is promoted to Python ints.  Results are identical either way.
_MACHINE_LIMIT = 2**26
_MACHINE_DIM = 1024


def _to_object(arr):
    out = np.empty(arr.shape, dtype=object)
    if arr.size:
        flat = out.reshape(-1)
        for i, v in enumerate(arr.reshape(-1).tolist()):
            flat[i] = v
    return out


def _fits_machine(arr):
    if arr.size == 0:
        return True
    return int(np.abs(arr).max()) < _MACHINE_LIMIT


def _snf(A, track=()):
    """Diagonalise A by unimodular row and column operations.

    Returns ``(S, diagonal, parts)`` where ``parts`` holds whichever of
    "U", "V", "U_inv", "V_inv" were requested in ``track``, satisfying
    U @ A @ V == S with U, V unimodular.
    """
    S = _as_matrix(A).copy()
    m, n = S.shape
    machine = False
    if max(m, n) <= _MACHINE_DIM:
        try:
            S64 = S.astype(np.int64)
        except (OverflowError, TypeError):
            S64 = None
        if S64 is not None and _fits_machine(S64):
            S = S64
            machine = True

    def _eye(k):
        return np.eye(k, dtype=np.int64) if machine else identity(k)

    U = _eye(m) if "U" in track else None
    Ui = _eye(m) if "U_inv" in track else None
    V = _eye(n) if "V" in track else None
    Vi = _eye(n) if "V_inv" in track else None

    def promote_if_needed():
        nonlocal S, U, Ui, V, Vi, machine
        if not machine:
            return
        if all(
            arr is None or _fits_machine(arr) for arr in (S, U, Ui, V, Vi)
        ):
            return
        S = _to_object(S)
        U = None if U is None else _to_object(U)
        Ui = None if Ui is None else _to_object(Ui)
        V = None if V is None else _to_object(V)
        Vi = None if Vi is None else _to_object(Vi)
        machine = False

    def swap_rows(a, b):
        S[[a, b]] = S[[b, a]]
        if U is not None:
            U[[a, b]] = U[[b, a]]
        if Ui is not None:
            Ui[:, [a, b]] = Ui[:, [b, a]]

    def swap_cols(a, b):
        S[:, [a, b]] = S[:, [b, a]]
        if V is not None:
            V[:, [a, b]] = V[:, [b, a]]
        if Vi is not None:
            Vi[[a, b]] = Vi[[b, a]]

    def negate_row(a):
        S[a] = -S[a]
        if U is not None:
            U[a] = -U[a]
        if Ui is not None:
            Ui[:, a] = -Ui[:, a]

    def rows_sub(rows, t, qs):
        # row_i -= q_i * row_t
        S[rows] -= qs[:, None] * S[t]
        if U is not None:
            U[rows] -= qs[:, None] * U[t]
        if Ui is not None:
            Ui[:, t] += Ui[:, rows].dot(qs)

    def cols_sub(cols, t, qs):
        # col_j -= q_j * col_t
        S[:, cols] -= np.outer(S[:, t], qs)
        if V is not None:
            V[:, cols] -= np.outer(V[:, t], qs)
        if Vi is not None:
            Vi[t] += qs.dot(Vi[cols])

    def add_row(t, i):
        # row_t += row_i
        S[t] += S[i]
        if U is not None:
            U[t] += U[i]
        if Ui is not None:
            Ui[:, i] -= Ui[:, t]

    def place_pivot(t):
        pos = _pivot_position(S, t)
        if pos is None:
            return False
        i, j = pos
        if i != t:
            swap_rows(t, i)
        if j != t:
            swap_cols(t, j)
        if S[t, t] < 0:
            negate_row(t)
        return True

    limit = min(m, n)
    t = 0
    while t < limit and place_pivot(t):
        while True:
            promote_if_needed()
            p = S[t, t]
            col = S[t + 1:, t]
            idx = np.nonzero(col)[0]
            if idx.size:
                rows_sub(idx + t + 1, t, col[idx] // p)
                if (S[t + 1:, t] != 0).any():
                    place_pivot(t)
                    continue
            row = S[t, t + 1:]
            idx = np.nonzero(row)[0]
            if idx.size:
                cols_sub(idx + t + 1, t, row[idx] // p)
                if (S[t, t + 1:] != 0).any():
                    place_pivot(t)
                    continue
            p = S[t, t]
            if p > 1 and t + 1 < m and t + 1 < n:
                rem = S[t + 1:, t + 1:] % p
                nzr = np.nonzero(rem)
                if nzr[0].size:
                    add_row(t, t + 1 + int(nzr[0][0]))
                    continue
            break
        t += 1

    diagonal = tuple(int(S[i, i]) for i in range(limit))
    # external contract: object matrices of Python ints
    if machine:
        S = _to_object(S)
        U = None if U is None else _to_object(U)
        Ui = None if Ui is None else _to_object(Ui)
        V = None if V is None else _to_object(V)
        Vi = None if Vi is None else _to_object(Vi)
    parts = {}
    if U is not None:
        parts["U"] = U
    if Ui is not None:
        parts["U_inv"] = Ui
    if V is not None:
        parts["V"] = V
    if Vi is not None:
        parts["V_inv"] = Vi
    return S, diagonal, parts


@dataclass(frozen=True)
class SmithDecomposition:
    """U @ A @ V == S with U, V unimodular and S diagonal.

    The diagonal entries are nonnegative, each divides the next, and zeros
    come last; their nonzero count is the rank of A.  ``U_inv`` and
    ``V_inv`` are the exact inverses (handy because numpy cannot invert
    integer matrices exactly).
    """

    U: np.ndarray
    S: np.ndarray
    V: np.ndarray
    U_inv: np.ndarray
    V_inv: np.ndarray
    diagonal: tuple[int, ...]

    @property
    def rank(self) -> int:
        return sum(1 for d in self.diagonal if d)


def smith_normal_form(A) -> SmithDecomposition:
    """Smith normal form of an integer matrix, with transforms."""
    S, diagonal, parts = _snf(A, track=("U", "V", "U_inv", "V_inv"))
    return SmithDecomposition(
        U=parts["U"],
        S=S,
        V=parts["V"],
        U_inv=parts["U_inv"],
        V_inv=parts["V_inv"],
        diagonal=diagonal,
    )


def elementary_divisors(A) -> tuple[int, ...]:
    """The diagonal of the Smith normal form (no transforms computed)."""
    return _snf(A)[1]


def integer_rank(A) -> int:
    return sum(1 for d in elementary_divisors(A) if d)


def kernel_basis(A) -> np.ndarray:
    """Basis of the saturated integer kernel {v : A v = 0}, as rows.

    The basis extends to a basis of the ambient lattice, so the returned
    lattice equals its own saturation; the row count is cols - rank.
    """
    A = _as_matrix(A)
    _, diagonal, parts = _snf(A, track=("V",))
    r = sum(1 for d in diagonal if d)
    return parts["V"][:, r:].T.copy()


def saturation_and_complement(B) -> tuple[np.ndarray, np.ndarray]:
    """Saturate the row span of B in Z^n and complete it to a basis.

    Returns ``(sat, comp)``, both as rows: ``sat`` is a basis of
    span_Q(rows of B) intersected with Z^n, and stacking ``sat`` over
    ``comp`` gives a unimodular n x n matrix.  Empty input yields an empty
    saturation and the standard basis as complement.
    """
    B = _as_matrix(B)
    _, diagonal, parts = _snf(B, track=("V_inv",))
    r = sum(1 for d in diagonal if d)
    Vi = parts["V_inv"]
    return Vi[:r].copy(), Vi[r:].copy()


def unimodular_inverse(P) -> np.ndarray:
    """Exact inverse of a unimodular integer matrix."""
    P = _as_matrix(P)
    if P.shape[0] != P.shape[1]:
        raise ValueError("matrix is not square")
    _, diagonal, parts = _snf(P, track=("U", "V"))
    if any(d != 1 for d in diagonal):
        raise ValueError("matrix is not unimodular")
    return mdot(parts["V"], parts["U"])


def determinant(A) -> int:
    """Exact determinant by fraction-free (Bareiss) elimination."""
    M = _as_matrix(A).copy()
    m, n = M.shape
    if m != n:
        raise ValueError("determinant needs a square matrix")
    if n == 0:
        return 1
    sign = 1
    prev = 1
    for k in range(n - 1):
        if M[k, k] == 0:
            pivot_row = None
            for i in range(k + 1, n):
                if M[i, k] != 0:
                    pivot_row = i
                    break
            if pivot_row is None:
                return 0
            M[[k, pivot_row]] = M[[pivot_row, k]]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                M[i, j] = (M[i, j] * M[k, k] - M[i, k] * M[k, j]) // prev
            M[i, k] = 0
        prev = M[k, k]
    return sign * int(M[n - 1, n - 1])


def rank_mod_prime(A, q: int) -> int:
    """Rank of A over the prime field F_q, by exact modular elimination."""
    M0 = _as_matrix(A)
    m, n = M0.shape
    if q <= 1:
        raise ValueError("modulus must be at least 2")
    if m == 0 or n == 0:
        return 0
    if q < 2**31:
        M = (M0 % q).astype(np.int64)
    else:
        M = M0 % q
    r = 0
    for c in range(n):
        piv = None
        for i in range(r, m):
            if M[i, c] % q:
                piv = i
                break
        if piv is None:
            continue
        if piv != r:
            M[[r, piv]] = M[[piv, r]]
        inv = pow(int(M[r, c]), -1, q)
        M[r] = (M[r] * inv) % q
        below = M[r + 1:, c]
        nz = np.nonzero(below)[0]
        if nz.size:
            rows = nz + r + 1
            M[rows] = (M[rows] - np.outer(M[rows, c], M[r])) % q
        r += 1
        if r == m:
            break
    return r
