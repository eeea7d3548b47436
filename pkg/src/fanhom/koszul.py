"""The Koszul complex of a fan's Chow module, one weight subcomplex at a time.

Tensoring the Chow module with the exterior algebra of the character
lattice gives the complex whose homology the reports are about.  The
differential contracts one exterior factor into the module action with the
sign convention d(a (x) e_{i1}^...^e_{is}) = sum_j (-1)^(j-1)
(e_{ij} . a) (x) (drop j); it preserves the label c = (Chow degree) - 2s,
so the complex splits into finite subcomplexes indexed by even c, each
carrying weight c/2 and contributing to total degree j = c + s at exterior
size s.  Every assembled subcomplex is checked to satisfy d о d = 0.
"""

from __future__ import annotations

import itertools

import numpy as np

from .chow import ChowModule
from .errors import InternalConsistencyError
from .fan import Fan
from .lattice import zeros


def exterior_basis(n: int, s: int):
    """All strictly increasing s-subsets of the n coordinate axes, lex order."""
    if s < 0:
        raise ValueError("exterior degree must be nonnegative")
    return list(itertools.combinations(range(n), s))


class WeightSubcomplex:
    """Terms and differentials of the subcomplex with label c.

    ``terms[s]`` lists the basis pairs (chow element, exterior subset) of
    K_s; ``sparse(s)`` gives the columns of D_s : K_s -> K_{s-1} as
    {row: coefficient} dicts and ``matrix(s)`` the same map densely.
    ``matrix(n + 1)`` is the empty map into K_n.
    """

    def __init__(self, c: int, n: int, terms, sparse_columns):
        self.c = c
        self.n = n
        self.terms = terms
        self._sparse = sparse_columns
        self._dense: dict[int, np.ndarray] = {}

    @property
    def weight(self) -> int:
        return self.c // 2

    def rank(self, s: int) -> int:
        if 0 <= s <= self.n:
            return len(self.terms[s])
        return 0

    def chow_degree(self, s: int) -> int:
        return self.c + 2 * s

    def total_degree(self, s: int) -> int:
        return self.c + s

    def sparse(self, s: int):
        if 1 <= s <= self.n:
            return self._sparse[s]
        return [dict() for _ in range(self.rank(s))]

    def matrix(self, s: int) -> np.ndarray:
        """Dense D_s : K_s -> K_{s-1} (rows K_{s-1}, columns K_s)."""
        cached = self._dense.get(s)
        if cached is not None:
            return cached
        rows = self.rank(s - 1)
        cols = self.rank(s)
        D = zeros(rows, cols)
        if 1 <= s <= self.n:
            for col, column in enumerate(self._sparse[s]):
                for row, coeff in column.items():
                    D[row, col] = coeff
        self._dense[s] = D
        return D


def _build_subcomplex(chow: ChowModule, c: int) -> WeightSubcomplex:
    n = chow.n
    terms = []
    indexes = []
    for s in range(n + 1):
        ext = exterior_basis(n, s)
        basis = chow.basis_in_degree(c + 2 * s)
        pairs = [(a, w) for a in basis for w in ext]
        terms.append(pairs)
        indexes.append({pair: i for i, pair in enumerate(pairs)})
    sparse = [None]
    std = chow.standard_characters
    for s in range(1, n + 1):
        columns = []
        target = indexes[s - 1]
        for a, w in terms[s]:
            column: dict[int, int] = {}
            for pos in range(len(w)):
                image = chow.act_character(std[w[pos]], a)
                if not image:
                    continue
                sign = -1 if pos % 2 else 1
                rest = w[:pos] + w[pos + 1:]
                for element, coeff in image.items():
                    row = target.get((element, rest))
                    if row is None:
                        raise InternalConsistencyError(
                            "differential image misses the target basis"
                        )
                    val = column.get(row, 0) + sign * coeff
                    if val:
                        column[row] = val
                    elif row in column:
                        del column[row]
            columns.append(column)
        sparse.append(columns)
    return WeightSubcomplex(c, n, terms, sparse)


def _check_square_zero(sub: WeightSubcomplex):
    for s in range(2, sub.n + 1):
        lower = sub.sparse(s - 1)
        for column in sub.sparse(s):
            acc: dict[int, int] = {}
            for row, coeff in column.items():
                for row2, coeff2 in lower[row].items():
                    val = acc.get(row2, 0) + coeff * coeff2
                    if val:
                        acc[row2] = val
                    elif row2 in acc:
                        del acc[row2]
            if acc:
                raise InternalConsistencyError(
                    f"d o d != 0 on the weight subcomplex c={sub.c} at s={s}"
                )


def differential_matrix(fan: Fan, c: int, s: int) -> np.ndarray:
    """Dense Koszul differential D_s : K_s -> K_{s-1} of the c-subcomplex."""
    if s < 0:
        raise ValueError("exterior position must be nonnegative")
    sub = _build_subcomplex(ChowModule(fan), c)
    return sub.matrix(s)


def assemble_subcomplexes(fan: Fan, chow: ChowModule | None = None):
    """Every weight subcomplex with even c in [-n, 2n], d o d verified.

    Subcomplexes outside this band cannot meet total degrees 0..2n.  A
    failed square-zero check raises InternalConsistencyError: it would mean
    the Chow rewriting itself is broken.
    """
    if chow is None:
        chow = ChowModule(fan)
    n = fan.rank
    out = []
    start = -n if (-n) % 2 == 0 else -n + 1
    for c in range(start, 2 * n + 1, 2):
        sub = _build_subcomplex(chow, c)
        _check_square_zero(sub)
        out.append(sub)
    return out
