"""Concrete injective endomaps of the naturals.

Maps are written on the right: composing f then g sends x to g(f(x)), and
``conjugate(m, a)`` evaluates x -> (a then m then a^-1)(x).  The closed class
of maps with computable exact cycle types is the dressed maps p.base.q with p
and q finitary permutations around a canonical realization; arbitrary
composites remain evaluable and keep an exact coimage count, but their full
cycle type is not recovered here.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterator, List, Optional, Sequence

from ..cycletype import OMEGA, CycleType, ExtNat
from ..cycletype import ZERO as _ZERO
from .carrier import CanonicalMap

__all__ = [
    "FinitaryPerm",
    "DressedMap",
    "ComposedMap",
    "CoimagePoints",
    "LazyBijection",
    "dressed",
    "compose",
    "conjugate",
    "CoimageMismatchError",
    "PreconditionViolatedError",
    "WitnessUnsupportedError",
]


class CoimageMismatchError(ValueError):
    """Completing g = f.h to a permutation needs equal coimage sizes."""


class PreconditionViolatedError(ValueError):
    """The map does not satisfy the hypothesis of the requested operation."""


class WitnessUnsupportedError(ValueError):
    """Witness construction is restricted to a smaller class than the decision."""


class FinitaryPerm:
    """A permutation of the naturals moving only finitely many points.

    Stored as the graph of the non-fixed part; composition is written
    left-to-right to match the right-action convention.
    """

    __slots__ = ("_map", "_inv")

    def __init__(self, mapping: Optional[dict] = None):
        cleaned = {}
        for k, v in (mapping or {}).items():
            if k < 0 or v < 0:
                raise ValueError("carrier points are nonnegative integers")
            if k != v:
                cleaned[k] = v
        if sorted(cleaned) != sorted(cleaned.values()):
            raise ValueError("support map must be a bijection of its domain")
        self._map = cleaned
        self._inv = {v: k for k, v in cleaned.items()}

    @classmethod
    def identity(cls) -> "FinitaryPerm":
        return cls()

    @classmethod
    def transposition(cls, a: int, b: int) -> "FinitaryPerm":
        if a == b:
            raise ValueError("a transposition needs two distinct points")
        return cls({a: b, b: a})

    @classmethod
    def from_cycles(cls, cycles: Sequence[Sequence[int]]) -> "FinitaryPerm":
        mapping = {}
        seen = set()
        for cyc in cycles:
            if len(set(cyc)) != len(cyc):
                raise ValueError(f"repeated point in cycle {cyc}")
            if seen & set(cyc):
                raise ValueError("cycles must be disjoint")
            seen |= set(cyc)
            for i, x in enumerate(cyc):
                mapping[x] = cyc[(i + 1) % len(cyc)]
        return cls(mapping)

    def apply(self, x: int) -> int:
        return self._map.get(x, x)

    def inverse_apply(self, x: int) -> int:
        return self._inv.get(x, x)

    def inverse(self) -> "FinitaryPerm":
        return FinitaryPerm(self._inv)

    def support(self) -> frozenset:
        return frozenset(self._map)

    def then(self, other: "FinitaryPerm") -> "FinitaryPerm":
        """Composition self-then-other: x -> other(self(x))."""
        mapping = {}
        for x in self.support() | other.support():
            mapping[x] = other.apply(self.apply(x))
        return FinitaryPerm(mapping)

    def cycles(self) -> List[tuple]:
        """Nontrivial cycles, each starting at its least point, sorted."""
        out = []
        seen = set()
        for start in sorted(self._map):
            if start in seen:
                continue
            cyc = [start]
            seen.add(start)
            x = self._map[start]
            while x != start:
                cyc.append(x)
                seen.add(x)
                x = self._map[x]
            out.append(tuple(cyc))
        return out

    def parity(self) -> int:
        """0 for even, 1 for odd."""
        return sum(len(c) - 1 for c in self.cycles()) % 2

    def is_even(self) -> bool:
        return self.parity() == 0

    def is_identity(self) -> bool:
        return not self._map

    def is_transposition(self) -> bool:
        return len(self._map) == 2

    def __eq__(self, other):
        if not isinstance(other, FinitaryPerm):
            return NotImplemented
        return self._map == other._map

    def __hash__(self):
        return hash(frozenset(self._map.items()))

    def __repr__(self):
        from . import textio

        return textio.format_perm(self)


@dataclass
class CoimagePoints:
    """The points outside the image of a map.

    ``points`` is the complete finite list when the coimage is finite;
    otherwise ``is_infinite`` is set and ``enumerate_points`` streams them.
    """

    is_infinite: bool
    points: Optional[list]
    _enumerator: Optional[Callable[[], Iterator[int]]] = None

    def enumerate_points(self) -> Iterator[int]:
        if self.points is not None:
            return iter(self.points)
        return self._enumerator()


class DressedMap:
    """p then canonical-base then q, for finitary p and q.

    Evaluation is x -> q(base(p(x))).  The exact cycle type of a dressed map
    differs from the base type in only finitely many finite-cycle counts, and
    its coimage is q(base coimage), so it has the same size.
    """

    __slots__ = ("p", "base", "q", "_structure")

    def __init__(self, p: FinitaryPerm, base: CanonicalMap, q: FinitaryPerm):
        self.p = p
        self.base = base
        self.q = q
        self._structure = None

    def eval(self, alpha: int) -> int:
        return self.q.apply(self.base.eval(self.p.apply(alpha)))

    def preimage(self, alpha: int) -> Optional[int]:
        mid = self.base.preimage(self.q.inverse_apply(alpha))
        if mid is None:
            return None
        return self.p.inverse_apply(mid)

    @property
    def coimage(self) -> ExtNat:
        return self.base.type.fwd

    def coimage_points(self) -> CoimagePoints:
        fwd = self.base.type.fwd
        if fwd.is_finite:
            pts = [self.q.apply(r) for r in self.base.root_points()]
            return CoimagePoints(False, pts)

        def stream():
            for r in self.base.root_points():
                yield self.q.apply(r)

        return CoimagePoints(True, None, stream)

    def coimage_index(self, alpha: int) -> Optional[int]:
        """Rank of alpha in the coimage enumeration, or None if in the image."""
        if self.preimage(alpha) is not None:
            return None
        root = self.q.inverse_apply(alpha)
        _, c, _ = self.base.decode(root)
        return c

    def coimage_point(self, rank: int) -> int:
        s = self.base.spec_index("fwd")
        return self.q.apply(self.base.encode(s, rank, 0))

    def then_perm(self, h: FinitaryPerm) -> "DressedMap":
        """The map self-then-h, still dressed."""
        return DressedMap(self.p, self.base, self.q.then(h))

    def perm_then(self, h: FinitaryPerm) -> "DressedMap":
        """The map h-then-self, still dressed."""
        return DressedMap(h.then(self.p), self.base, self.q)

    def structure(self):
        if self._structure is None:
            from .structure import MapStructure

            self._structure = MapStructure(self)
        return self._structure

    def exact_type(self) -> CycleType:
        return self.structure().exact_type

    def __repr__(self):
        from . import textio

        return textio.format_dressed(self)


def dressed(cycle_type: CycleType, p: Optional[FinitaryPerm] = None, q: Optional[FinitaryPerm] = None) -> DressedMap:
    """Dress a canonical realization of the given type."""
    return DressedMap(p or FinitaryPerm(), CanonicalMap(cycle_type), q or FinitaryPerm())


def conjugate(m: DressedMap, a: FinitaryPerm) -> DressedMap:
    """The conjugate map x -> (a then m then a^-1)(x); same exact type."""
    return DressedMap(a.then(m.p), m.base, m.q.then(a.inverse()))


class ComposedMap:
    """Left-to-right composite of dressed maps.

    Coimage sizes add under composition, so the composite's coimage is the
    saturating sum of the factors' coimages without computing its cycle type.
    """

    __slots__ = ("factors",)

    def __init__(self, factors: Sequence[DressedMap]):
        self.factors = tuple(factors)

    def eval(self, alpha: int) -> int:
        for f in self.factors:
            alpha = f.eval(alpha)
        return alpha

    def preimage(self, alpha: int) -> Optional[int]:
        for f in reversed(self.factors):
            alpha = f.preimage(alpha)
            if alpha is None:
                return None
        return alpha

    @property
    def coimage(self) -> ExtNat:
        total = ExtNat(0)
        for f in self.factors:
            total = total + f.coimage
        return total

    def __repr__(self):
        return f"ComposedMap({len(self.factors)} factors, coimage={self.coimage})"


def compose(f: DressedMap, g: DressedMap) -> ComposedMap:
    return ComposedMap([f, g])


class LazyBijection:
    """A computable bijection of the naturals given by a pair of callables."""

    __slots__ = ("_fwd", "_bwd", "label")

    def __init__(self, fwd: Callable[[int], int], bwd: Callable[[int], int], label: str = ""):
        self._fwd = fwd
        self._bwd = bwd
        self.label = label

    @classmethod
    def identity(cls) -> "LazyBijection":
        return cls(lambda x: x, lambda x: x, "id")

    @classmethod
    def from_perm(cls, perm: FinitaryPerm) -> "LazyBijection":
        return cls(perm.apply, perm.inverse_apply, "finitary")

    def apply(self, x: int) -> int:
        return self._fwd(x)

    def inverse_apply(self, x: int) -> int:
        return self._bwd(x)

    def inverse(self) -> "LazyBijection":
        return LazyBijection(self._bwd, self._fwd, f"inv({self.label})")

    def then(self, other: "LazyBijection") -> "LazyBijection":
        return LazyBijection(
            lambda x: other.apply(self.apply(x)),
            lambda x: self.inverse_apply(other.inverse_apply(x)),
            f"{self.label};{other.label}",
        )

    def __repr__(self):
        return f"LazyBijection({self.label})"
