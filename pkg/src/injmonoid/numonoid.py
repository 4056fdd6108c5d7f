"""Additive submonoids of the nonnegative integers.

A numerical monoid is the set of nonnegative integer combinations of a finite
generating set.  Every such monoid has a unique minimal generating set: the
nonzero elements that are not sums of two nonzero elements.  Membership is
decided by dynamic programming up to a conductor, beyond which membership is
periodic with period gcd(generators), so queries are O(1) after construction.

The zero monoid {0} is represented by an empty generating set.
"""

from __future__ import annotations

import math
from typing import Iterable

from ._scanner import Scanner

__all__ = ["NumericalMonoid", "generate", "parse_monoid", "format_monoid"]


class NumericalMonoid:
    """Immutable numerical monoid, normalized to its minimal generating set."""

    __slots__ = ("gens", "gcd", "conductor_over_gcd", "_table")

    def __init__(self, raw_gens: Iterable[int]):
        gens = sorted({g for g in raw_gens if g != 0})
        if any(g < 0 or not isinstance(g, int) for g in gens):
            raise ValueError("generators must be nonnegative integers")
        if not gens:
            self.gens = ()
            self.gcd = 0
            self.conductor_over_gcd = 0
            self._table = (True,)
            return
        d = math.gcd(*gens)
        reduced = [g // d for g in gens]
        table, conductor = _reach_table(reduced)
        self.gcd = d
        self.conductor_over_gcd = conductor
        self._table = table
        self.gens = tuple(
            d * g for g in reduced if not _is_sum_of_two(g, table, conductor)
        )

    # -- queries -----------------------------------------------------------

    def contains(self, n: int) -> bool:
        if n < 0:
            return False
        if n == 0:
            return True
        if self.gcd == 0:
            return False
        q, r = divmod(n, self.gcd)
        if r != 0:
            return False
        if q >= self.conductor_over_gcd:
            return True
        return self._table[q]

    def min_gens(self) -> tuple:
        return self.gens

    def in_nongenerator_part(self, n: int) -> bool:
        """True for members that are not minimal generators (and not 0)."""
        return n != 0 and self.contains(n) and n not in self.gens

    def is_zero_monoid(self) -> bool:
        return not self.gens

    def __eq__(self, other):
        if not isinstance(other, NumericalMonoid):
            return NotImplemented
        return self.gens == other.gens

    def __hash__(self):
        return hash(self.gens)

    def __repr__(self):
        return format_monoid(self)


def generate(raw_gens: Iterable[int]) -> NumericalMonoid:
    """Build the monoid generated by the given nonnegative integers (0s dropped)."""
    return NumericalMonoid(raw_gens)


def _reach_table(gens: list) -> tuple:
    """Reachability table and conductor for a gcd-1 generating set.

    Doubles the table size until a full window of min(gens) consecutive
    reachable values appears; everything at or beyond that window is
    reachable by adding multiples of min(gens).
    """
    lo = min(gens)
    bound = max(gens) * lo + lo + 1
    while True:
        table = [False] * (bound + 1)
        table[0] = True
        for i in range(1, bound + 1):
            for g in gens:
                if g <= i and table[i - g]:
                    table[i] = True
                    break
        run = 0
        for i in range(bound + 1):
            run = run + 1 if table[i] else 0
            if run == lo:
                return tuple(table), i - lo + 1
        bound *= 2


def _is_sum_of_two(g: int, table: tuple, conductor: int) -> bool:
    """Whether g is a sum of two nonzero members (i.e. not a minimal generator)."""

    def member(x):
        return x >= conductor or (0 <= x < len(table) and table[x])

    return any(member(m) and member(g - m) for m in range(1, g))


# -- text grammar -------------------------------------------------------------
#
#   NumericalMonoid ::= "nm(" [INT ("," INT)*] ")"


def format_monoid(m: NumericalMonoid) -> str:
    return "nm(" + ",".join(str(g) for g in m.gens) + ")"


def parse_monoid(text: str) -> NumericalMonoid:
    sc = Scanner(text)
    sc.skip_ws()
    sc.expect("nm(")
    values = []
    if not sc.try_take(")"):
        values.append(sc.integer())
        while sc.try_take(","):
            values.append(sc.integer())
        sc.expect(")")
    sc.end()
    return NumericalMonoid(values)
