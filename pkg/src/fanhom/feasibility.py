"""Exact feasibility of linear inequality systems over the rationals.

Fourier-Motzkin elimination with integer coefficients only; witnesses are
returned as tuples of ``Fraction``.  A system is a list of pairs
``(coeffs, rhs)`` encoding ``sum(coeffs[i] * y[i]) >= rhs``.  Intended for
desk-scale cone geometry (a handful of variables and inequalities), where
the projection blowup is harmless after normalisation and deduplication.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd

_ROW_LIMIT = 200_000  # safety valve; desk-scale systems stay tiny


def _normalize(coeffs, rhs):
    g = 0
    for c in coeffs:
        g = gcd(g, abs(c))
    g = gcd(g, abs(rhs))
    if g > 1:
        coeffs = tuple(c // g for c in coeffs)
        rhs = rhs // g
    return tuple(coeffs), rhs


def solve(rows, nvars):
    """A rational point satisfying every ``coeffs . y >= rhs``, or None.

    Strict constraints should be encoded as ``>= 1`` (homogeneous systems
    can always be scaled).
    """
    seen = set()
    clean = []
    for coeffs, rhs in rows:
        coeffs = tuple(int(c) for c in coeffs)
        if len(coeffs) != nvars:
            raise ValueError("coefficient length does not match nvars")
        key = _normalize(coeffs, int(rhs))
        if key not in seen:
            seen.add(key)
            clean.append(key)
    return _solve(clean, nvars)


def _solve(rows, nvars):
    if nvars == 0:
        return () if all(rhs <= 0 for _, rhs in rows) else None
    pos, neg, rest = [], [], []
    for coeffs, rhs in rows:
        c = coeffs[-1]
        if c > 0:
            pos.append((coeffs, rhs))
        elif c < 0:
            neg.append((coeffs, rhs))
        else:
            rest.append((coeffs[:-1], rhs))
    seen = set(rest)
    proj = list(seen)
    for a, alpha in pos:
        for b, beta in neg:
            c, d = a[-1], b[-1]
            coeffs = tuple(c * b[i] - d * a[i] for i in range(nvars - 1))
            key = _normalize(coeffs, c * beta - d * alpha)
            if key not in seen:
                seen.add(key)
                proj.append(key)
            if len(proj) > _ROW_LIMIT:
                raise RuntimeError("Fourier-Motzkin projection blew up")
    sub = _solve(proj, nvars - 1)
    if sub is None:
        return None
    lo = hi = None
    for coeffs, rhs in pos + neg:
        c = coeffs[-1]
        bound = Fraction(
            rhs - sum(ci * wi for ci, wi in zip(coeffs[:-1], sub)), c
        )
        if c > 0:
            lo = bound if lo is None else max(lo, bound)
        else:
            hi = bound if hi is None else min(hi, bound)
    if lo is not None:
        y = lo
    elif hi is not None:
        y = hi
    else:
        y = Fraction(0)
    return sub + (y,)


def feasible(rows, nvars) -> bool:
    return solve(rows, nvars) is not None
