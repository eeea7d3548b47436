"""The equivariant Chow module of a toric variety, in normal form.

As an abelian group the module is free on pairs (cone, monomial): the
monomial lives in the symmetric algebra of the rank-(dim cone) quotient of
the character lattice, written in the cone's section basis, and the pair
sits in homological degree 2(codim - monomial degree).  A character m acts
by splitting against (perp, section): the section part multiplies the
monomial, the perp part pushes the generator one dimension up along every
incidence, weighted by the pairing with the incidence normal, and the
pending monomial is re-expanded there factor by factor.  Each push strictly
raises the cone dimension, so the rewriting terminates.

Everything is deterministic: bases are ordered by cone index then
lexicographic exponents, and all arithmetic is exact.
"""

from __future__ import annotations

from typing import NamedTuple

import numpy as np

from .fan import Fan


class ChowBasisElement(NamedTuple):
    cone: int
    exponents: tuple[int, ...]


def _exponent_tuples(d: int, total: int):
    """All length-d nonnegative tuples with the given sum, lex ascending."""
    if d == 0:
        return [()] if total == 0 else []
    out = []

    def rec(prefix, remaining, slots):
        if slots == 1:
            out.append(prefix + (remaining,))
            return
        for v in range(remaining + 1):
            rec(prefix + (v,), remaining - v, slots - 1)

    rec((), total, d)
    return out


def _add_term(acc: dict, key, coeff):
    val = acc.get(key, 0) + coeff
    if val:
        acc[key] = val
    elif key in acc:
        del acc[key]


class ChowModule:
    """The module attached to one fan, with memoised character action."""

    def __init__(self, fan: Fan):
        self.fan = fan
        self.n = fan.rank
        self._act_cache: dict = {}
        self._push_cache: dict = {}
        self._basis_cache: dict = {}
        self._index_cache: dict = {}
        self.standard_characters = [
            tuple(1 if i == j else 0 for j in range(self.n))
            for i in range(self.n)
        ]

    # -- basis ------------------------------------------------------------

    def degree(self, element: ChowBasisElement) -> int:
        cone = self.fan.cones[element.cone]
        return 2 * (cone.codim - sum(element.exponents))

    def basis_in_degree(self, k: int) -> list[ChowBasisElement]:
        """Basis elements of homological degree k (empty for odd k)."""
        cached = self._basis_cache.get(k)
        if cached is not None:
            return cached
        out: list[ChowBasisElement] = []
        if k % 2 == 0:
            half = k // 2
            for ci, cone in enumerate(self.fan.cones):
                e = cone.codim - half
                if e < 0:
                    continue
                for exps in _exponent_tuples(cone.dim, e):
                    out.append(ChowBasisElement(ci, exps))
        self._basis_cache[k] = out
        return out

    def basis_index(self, k: int) -> dict:
        cached = self._index_cache.get(k)
        if cached is None:
            cached = {e: i for i, e in enumerate(self.basis_in_degree(k))}
            self._index_cache[k] = cached
        return cached

    # -- module action ----------------------------------------------------

    def act_character(self, m, element: ChowBasisElement) -> dict:
        """m . element as a normal-form combination {basis element: int}.

        Homogeneous of degree deg(element) - 2.
        """
        m = tuple(int(x) for x in m)
        if len(m) != self.n:
            raise ValueError("character has the wrong length")
        key = (m, element.cone, element.exponents)
        cached = self._act_cache.get(key)
        if cached is not None:
            return dict(cached)
        cone = self.fan.cones[element.cone]
        d = cone.dim
        coords = np.array(m, dtype=object).dot(cone.split_coords)
        perp_coords = coords[: self.n - d]
        section_coords = coords[self.n - d:]
        out: dict = {}
        exps = element.exponents
        for j in range(d):
            bj = int(section_coords[j])
            if bj:
                bumped = exps[:j] + (exps[j] + 1,) + exps[j + 1:]
                _add_term(out, ChowBasisElement(element.cone, bumped), bj)
        if perp_coords.size and (perp_coords != 0).any():
            m_perp = perp_coords.dot(cone.m_perp_basis)
            factors = []
            for j in range(d):
                factors.extend(
                    [tuple(int(x) for x in cone.l_section_basis[j])] * exps[j]
                )
            factors = tuple(factors)
            for inc in self.fan.incidences_from[element.cone]:
                weight = int(
                    sum(a * b for a, b in zip(m_perp, inc.normal))
                )
                if weight == 0:
                    continue
                for key2, coeff in self._apply_factors(factors, inc.cone).items():
                    _add_term(out, key2, weight * coeff)
        self._act_cache[key] = out
        return dict(out)

    def _apply_factors(self, factors, cone_index) -> dict:
        """factors[0] . (factors[1] . (... . x_cone)), memoised."""
        if not factors:
            d = self.fan.cones[cone_index].dim
            return {ChowBasisElement(cone_index, (0,) * d): 1}
        key = (factors, cone_index)
        cached = self._push_cache.get(key)
        if cached is not None:
            return dict(cached)
        base = self._apply_factors(factors[1:], cone_index)
        out: dict = {}
        head = factors[0]
        for element, coeff in base.items():
            for key2, coeff2 in self.act_character(head, element).items():
                _add_term(out, key2, coeff * coeff2)
        self._push_cache[key] = out
        return dict(out)

    def act(self, m, chow_element: dict) -> dict:
        """Linear extension of the character action to combinations."""
        out: dict = {}
        for element, coeff in chow_element.items():
            for key2, coeff2 in self.act_character(m, element).items():
                _add_term(out, key2, coeff * coeff2)
        return out

    def normal_form(self, expression) -> dict:
        """Normal form of a formal Sym(M)-combination of generators.

        ``expression`` is either a ChowElement (a dict, returned cleaned and
        unchanged: generators are already in normal form) or an iterable of
        terms ``(coefficient, factors, cone_index)`` where ``factors`` lists
        the characters whose product multiplies the generator x_cone.
        """
        if isinstance(expression, dict):
            out: dict = {}
            for element, coeff in expression.items():
                cone = self.fan.cones[element.cone]
                if len(element.exponents) != cone.dim or any(
                    e < 0 for e in element.exponents
                ):
                    raise ValueError(f"not a basis element: {element}")
                _add_term(out, element, int(coeff))
            return out
        out = {}
        for coeff, factors, cone_index in expression:
            coeff = int(coeff)
            if coeff == 0:
                continue
            factors = tuple(tuple(int(x) for x in f) for f in factors)
            for element, c in self._apply_factors(factors, cone_index).items():
                _add_term(out, element, coeff * c)
        return out
