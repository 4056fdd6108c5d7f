"""Exact algebra of cycle-type invariants for injective endomaps of a countable set.

An injective map of a countably infinite carrier decomposes the carrier into
disjoint cycles: finite n-cycles, open cycles (order type of the integers),
and forward cycles (order type of the naturals; their initial points are
exactly the points outside the image).  The multiset of cycle sizes and kinds
is a complete conjugacy invariant, so deciding conjugacy, the coarser
relations used for finitary and even-finitary dressing, and cycle surgery can
all be done symbolically on the invariant alone.  This module implements that
invariant:

* :class:`ExtNat` -- a count in ``N ∪ {ω}`` with saturating arithmetic,
* :class:`CountFunction` -- ``n ↦ C_n`` stored as finite exceptions over a
  default value (the smallest class closed under the operations here that
  still contains maps such as "one cycle of every length"),
* :class:`CycleType` -- the full invariant ``(C_n, C_open, C_fwd)`` plus the
  relations and surgery operations on it.

All values are immutable; every operation is pure.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Iterable, Mapping, Optional, Union

from ._scanner import ParseError, Scanner

__all__ = [
    "ExtNat",
    "OMEGA",
    "CountFunction",
    "CycleType",
    "ParityResult",
    "SymClass",
    "ClassKind",
    "CycleTypeError",
    "EmptyTypeError",
    "FiniteCarrierError",
    "NoInfiniteCycleError",
    "NoSuchFiniteCycleError",
    "NotInvertibleError",
    "make_type",
    "conjugate_equal",
    "parse_extnat",
    "format_extnat",
    "parse_cycle_type",
    "format_cycle_type",
]


class CycleTypeError(ValueError):
    """Base class for cycle-type domain errors."""


class EmptyTypeError(CycleTypeError):
    """The type describes no cycle at all."""


class FiniteCarrierError(CycleTypeError):
    """The type describes a finite carrier; the carrier must be countably infinite."""


class NoInfiniteCycleError(CycleTypeError):
    """Surgery requires at least one infinite (open or forward) cycle."""


class NoSuchFiniteCycleError(CycleTypeError):
    """Merge requires at least one finite cycle of the requested length."""


class NotInvertibleError(CycleTypeError):
    """Only permutation types (no forward cycles) are invertible."""


ExtNatLike = Union[int, "ExtNat", str]


class ExtNat:
    """An element of N ∪ {ω} under saturating addition.

    ω absorbs addition and dominates the order; subtraction of a finite
    amount saturates at ω (removing finitely many objects from a countably
    infinite supply leaves a countably infinite supply).
    """

    __slots__ = ("_v",)

    def __init__(self, value: ExtNatLike):
        if isinstance(value, ExtNat):
            self._v = value._v
        elif value == "w":
            self._v = None
        elif isinstance(value, int) and not isinstance(value, bool):
            if value < 0:
                raise ValueError("ExtNat must be nonnegative")
            self._v = value
        else:
            raise TypeError(f"cannot build ExtNat from {value!r}")

    @property
    def is_omega(self) -> bool:
        return self._v is None

    @property
    def is_finite(self) -> bool:
        return self._v is not None

    def to_int(self) -> int:
        if self._v is None:
            raise ValueError("ω is not a finite integer")
        return self._v

    def __add__(self, other: ExtNatLike) -> "ExtNat":
        other = ExtNat(other)
        if self._v is None or other._v is None:
            return OMEGA
        return ExtNat(self._v + other._v)

    __radd__ = __add__

    def __sub__(self, other: int) -> "ExtNat":
        if isinstance(other, ExtNat):
            other = other.to_int()
        if self._v is None:
            return OMEGA
        if self._v - other < 0:
            raise ValueError("ExtNat subtraction went negative")
        return ExtNat(self._v - other)

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, str)):
            try:
                other = ExtNat(other)
            except (TypeError, ValueError):
                return NotImplemented
        if not isinstance(other, ExtNat):
            return NotImplemented
        return self._v == other._v

    def __hash__(self):
        return hash(("ExtNat", self._v))

    def _key(self):
        # finite values sort by magnitude, ω above everything
        return (1, 0) if self._v is None else (0, self._v)

    def __lt__(self, other: ExtNatLike) -> bool:
        return self._key() < ExtNat(other)._key()

    def __le__(self, other: ExtNatLike) -> bool:
        return self._key() <= ExtNat(other)._key()

    def __gt__(self, other: ExtNatLike) -> bool:
        return self._key() > ExtNat(other)._key()

    def __ge__(self, other: ExtNatLike) -> bool:
        return self._key() >= ExtNat(other)._key()

    def __repr__(self):
        return f"ExtNat({'w' if self._v is None else self._v!r})"

    def __str__(self):
        return "w" if self._v is None else str(self._v)


OMEGA = ExtNat("w")
ZERO = ExtNat(0)
ONE = ExtNat(1)


def format_extnat(value: ExtNat) -> str:
    return str(value)


def parse_extnat(text: str) -> ExtNat:
    sc = Scanner(text)
    value = _scan_extnat(sc)
    sc.end()
    return value


def _scan_extnat(sc: Scanner) -> ExtNat:
    if sc.try_take("w"):
        return OMEGA
    return ExtNat(sc.integer())


class CountFunction:
    """A map ``n ↦ C_n`` on positive cycle lengths, as exceptions over a default.

    The normal form stores no exception equal to the default, so structural
    equality of two count functions is equality of the underlying maps.
    """

    __slots__ = ("default", "_exc")

    def __init__(self, default: ExtNatLike = 0, exceptions: Optional[Mapping[int, ExtNatLike]] = None):
        self.default = ExtNat(default)
        exc = {}
        for n, v in (exceptions or {}).items():
            if not isinstance(n, int) or n < 1:
                raise ValueError(f"cycle length must be a positive integer, got {n!r}")
            v = ExtNat(v)
            if v != self.default:
                exc[n] = v
        self._exc = exc

    @property
    def exceptions(self) -> dict:
        return dict(self._exc)

    def value_at(self, n: int) -> ExtNat:
        if n < 1:
            raise ValueError("cycle length must be positive")
        return self._exc.get(n, self.default)

    def with_value(self, n: int, value: ExtNatLike) -> "CountFunction":
        exc = dict(self._exc)
        exc[n] = ExtNat(value)
        return CountFunction(self.default, exc)

    def exception_lengths(self) -> list:
        return sorted(self._exc)

    def differing_lengths(self, other: "CountFunction") -> Optional[list]:
        """Lengths where the two functions disagree, or None if cofinitely many."""
        if self.default != other.default:
            return None
        keys = set(self._exc) | set(other._exc)
        return sorted(n for n in keys if self.value_at(n) != other.value_at(n))

    def support_is_finite(self) -> bool:
        """True when only finitely many lengths have a nonzero count."""
        return self.default == ZERO

    def __eq__(self, other) -> bool:
        if not isinstance(other, CountFunction):
            return NotImplemented
        return self.default == other.default and self._exc == other._exc

    def __hash__(self):
        return hash((self.default, frozenset(self._exc.items())))

    def __repr__(self):
        items = ", ".join(f"{n}: {v}" for n, v in sorted(self._exc.items()))
        return f"CountFunction(default={self.default}, {{{items}}})"


class SymClass(enum.Enum):
    """Position of a cycle type relative to the chain of normal subgroups of Sym."""

    NOT_A_PERMUTATION = "NotAPermutation"
    IDENTITY = "Identity"
    EVEN_FINITARY = "EvenFinitary"
    ODD_FINITARY = "OddFinitary"
    INFINITARY = "Infinitary"


class ClassKind(enum.Enum):
    """Coarse shape of a cycle type, used to bucket descriptor classes."""

    PERMUTATION = "Permutation"
    TWO_PLUS_INFINITE = "TwoPlusInfinite"
    INFINITE_MULTIPLICITY = "InfiniteMultiplicity"
    SINGLE_INFINITE_FINITE_COUNTS = "SingleInfiniteFiniteCounts"


@dataclass(frozen=True)
class ParityResult:
    """Outcome of the signed count comparison between two finitarily related types.

    ``parity`` is the total count difference mod 2 and is present exactly when
    the types are finitarily related (finitely many differing lengths, all
    finite), since otherwise the sum is undefined.
    """

    fin_related: bool
    parity: Optional[int] = None

    def __post_init__(self):
        if self.fin_related != (self.parity is not None):
            raise ValueError("parity must be present iff fin_related")


class CycleType:
    """The conjugacy invariant of an injective endomap of a countable carrier.

    ``counts`` holds the finite-cycle multiplicities, ``open_count`` the
    number of open cycles and ``fwd`` the number of forward cycles.  Two maps
    are conjugate under the full symmetric group iff their CycleTypes are
    equal, so equality here is plain structural equality of the normal form.
    """

    __slots__ = ("counts", "open_count", "fwd")

    def __init__(self, counts: CountFunction, open_count: ExtNatLike = 0, fwd: ExtNatLike = 0):
        self.counts = counts
        self.open_count = ExtNat(open_count)
        self.fwd = ExtNat(fwd)

    # -- validity ---------------------------------------------------------

    def _has_any_cycle(self) -> bool:
        if self.open_count > ZERO or self.fwd > ZERO:
            return True
        if self.counts.default > ZERO:
            return True
        return any(v > ZERO for v in self.counts.exceptions.values())

    def _carrier_is_infinite(self) -> bool:
        if self.open_count > ZERO or self.fwd > ZERO:
            return True
        if self.counts.default > ZERO:
            return True  # cofinitely many lengths occur
        return any(v.is_omega for v in self.counts.exceptions.values())

    def validate(self) -> "CycleType":
        """Raise unless the type describes at least one cycle on an infinite carrier."""
        if not self._has_any_cycle():
            raise EmptyTypeError("type has no cycles")
        if not self._carrier_is_infinite():
            total = sum(n * v.to_int() for n, v in self.counts.exceptions.items())
            raise FiniteCarrierError(f"type covers only {total} points; carrier must be infinite")
        return self

    def is_valid(self) -> bool:
        try:
            self.validate()
            return True
        except CycleTypeError:
            return False

    # -- basic invariants --------------------------------------------------

    @property
    def coimage(self) -> ExtNat:
        """Number of carrier points outside the image: one per forward cycle."""
        return self.fwd

    def infinite_cycles(self) -> ExtNat:
        return self.open_count + self.fwd

    def has_infinite_cycle(self) -> bool:
        return self.infinite_cycles() >= ONE

    def is_permutation(self) -> bool:
        return self.fwd == ZERO

    def single_infinite_finite_counts(self) -> bool:
        """Exactly one infinite cycle and finitely many cycles of each length."""
        return (
            self.infinite_cycles() == ONE
            and self.counts.default.is_finite
            and all(v.is_finite for v in self.counts.exceptions.values())
        )

    # -- equality / relations ----------------------------------------------

    def __eq__(self, other) -> bool:
        if not isinstance(other, CycleType):
            return NotImplemented
        return (
            self.counts == other.counts
            and self.open_count == other.open_count
            and self.fwd == other.fwd
        )

    def __hash__(self):
        return hash((self.counts, self.open_count, self.fwd))

    def approx_fin(self, other: "CycleType") -> bool:
        """Finitary relation: equal open and forward counts, finitely many
        differing finite-cycle counts, and every differing count finite on
        both sides."""
        if self.open_count != other.open_count or self.fwd != other.fwd:
            return False
        diffs = self.counts.differing_lengths(other.counts)
        if diffs is None:
            return False
        for n in diffs:
            if self.counts.value_at(n).is_omega or other.counts.value_at(n).is_omega:
                return False
        return True

    def parity_sum(self, other: "CycleType") -> ParityResult:
        """Sum of count differences mod 2, defined when finitarily related."""
        if not self.approx_fin(other):
            return ParityResult(False)
        total = 0
        for n in self.counts.differing_lengths(other.counts):
            total += self.counts.value_at(n).to_int() - other.counts.value_at(n).to_int()
        return ParityResult(True, total % 2)

    def approx_even(self, other: "CycleType") -> bool:
        result = self.parity_sum(other)
        return result.fin_related and result.parity == 0

    # -- classification ----------------------------------------------------

    def sym_class(self) -> SymClass:
        if self.fwd >= ONE:
            return SymClass.NOT_A_PERMUTATION
        identity_counts = CountFunction(0, {1: OMEGA})
        if self.open_count == ZERO and self.counts == identity_counts:
            return SymClass.IDENTITY
        finite_support = (
            self.open_count == ZERO
            and self.counts.default == ZERO
            and all(v.is_finite for n, v in self.counts.exceptions.items() if n >= 2)
        )
        if not finite_support:
            return SymClass.INFINITARY
        parity = sum(
            (n - 1) * v.to_int() for n, v in self.counts.exceptions.items() if n >= 2
        )
        return SymClass.EVEN_FINITARY if parity % 2 == 0 else SymClass.ODD_FINITARY

    def class_kind(self) -> ClassKind:
        if self.fwd == ZERO:
            return ClassKind.PERMUTATION
        if self.infinite_cycles() >= ExtNat(2):
            return ClassKind.TWO_PLUS_INFINITE
        if self.counts.default >= ONE or any(
            v.is_omega for v in self.counts.exceptions.values()
        ):
            return ClassKind.INFINITE_MULTIPLICITY
        return ClassKind.SINGLE_INFINITE_FINITE_COUNTS

    # -- surgery -----------------------------------------------------------

    def split_cycle(self, n: int) -> "CycleType":
        """Type after one transposition that cuts an n-cycle off an infinite cycle."""
        if n < 1:
            raise ValueError("cycle length must be positive")
        if not self.has_infinite_cycle():
            raise NoInfiniteCycleError("splitting requires an infinite cycle")
        counts = self.counts.with_value(n, self.counts.value_at(n) + 1)
        return CycleType(counts, self.open_count, self.fwd)

    def merge_cycle(self, n: int) -> "CycleType":
        """Type after one transposition that absorbs an n-cycle into an infinite cycle."""
        if n < 1:
            raise ValueError("cycle length must be positive")
        if not self.has_infinite_cycle():
            raise NoInfiniteCycleError("merging requires an infinite cycle")
        current = self.counts.value_at(n)
        if current < ONE:
            raise NoSuchFiniteCycleError(f"no cycle of length {n} to merge")
        counts = self.counts.with_value(n, current - 1)
        return CycleType(counts, self.open_count, self.fwd)

    def invert_type(self) -> "CycleType":
        """Cycle type of the inverse map; only permutations are invertible,
        and inversion preserves the type (each cycle reverses in place)."""
        if self.fwd >= ONE:
            raise NotInvertibleError("maps with forward cycles are not surjective")
        return self

    def __repr__(self):
        return format_cycle_type(self)


def conjugate_equal(a: CycleType, b: CycleType) -> bool:
    """Decide conjugacy: two maps are conjugate iff their cycle types coincide."""
    return a == b


def make_type(
    open_count: ExtNatLike = 0,
    fwd: ExtNatLike = 0,
    default: ExtNatLike = 0,
    counts: Optional[Mapping[int, ExtNatLike]] = None,
    validate: bool = True,
) -> CycleType:
    """Convenience constructor; values may be ints, ExtNat, or the string 'w'."""
    t = CycleType(CountFunction(default, counts), open_count, fwd)
    if validate:
        t.validate()
    return t


# -- text grammar -----------------------------------------------------------
#
#   ExtNat    ::= DIGITS | "w"
#   CycleType ::= "ct(" "open=" ExtNat "," "fwd=" ExtNat "," "default=" ExtNat
#                 [ "," LEN ":" ExtNat ... ] ")"
#
# Example: ct(open=0,fwd=1,default=0,3:2,5:w)


def format_cycle_type(t: CycleType) -> str:
    parts = [
        f"open={t.open_count}",
        f"fwd={t.fwd}",
        f"default={t.counts.default}",
    ]
    for n in t.counts.exception_lengths():
        parts.append(f"{n}:{t.counts.value_at(n)}")
    return "ct(" + ",".join(parts) + ")"


def parse_cycle_type(text: str) -> CycleType:
    sc = Scanner(text)
    t = scan_cycle_type(sc)
    sc.end()
    return t


def scan_cycle_type(sc: Scanner) -> CycleType:
    sc.skip_ws()
    sc.expect("ct(")
    sc.expect("open=")
    open_count = _scan_extnat(sc)
    sc.expect(",")
    sc.expect("fwd=")
    fwd = _scan_extnat(sc)
    sc.expect(",")
    sc.expect("default=")
    default = _scan_extnat(sc)
    exceptions = {}
    while sc.try_take(","):
        at = sc.pos
        n = sc.integer()
        if n == 0:
            sc.pos = at
            sc.error("cycle length 0 is not allowed")
        if n in exceptions:
            sc.pos = at
            sc.error(f"duplicate cycle length {n}")
        sc.expect(":")
        exceptions[n] = _scan_extnat(sc)
    sc.expect(")")
    return CycleType(CountFunction(default, exceptions), open_count, fwd)
