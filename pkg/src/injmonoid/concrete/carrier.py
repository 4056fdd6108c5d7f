"""Concrete carrier encoding and canonical realizations of cycle types.

The carrier is the set of nonnegative integers.  For a fixed cycle type the
points are identified with triples (spec, copy, position):

* spec enumerates the kinds of cycle present: the open-cycle spec first (if
  any open cycles exist), then the forward-cycle spec (if any), then the
  finite lengths with a nonzero count in increasing order.  When the count
  default is nonzero there are infinitely many specs.
* copy indexes the cycles of that spec, ``0 <= copy < multiplicity``.
* position indexes points within one cycle: residues ``0..n-1`` in a finite
  n-cycle, naturals in a forward cycle, and integers in an open cycle stored
  via the zigzag code 0, -1, 1, -2, 2, ...

Triples are enumerated by increasing max(spec, copy, position), then
lexicographically, which is a bijection with the naturals whatever mixture of
finite and infinite multiplicities the type has.  Both directions are
computable; the canonical map acts by position+1 within each cycle, so the
points with no preimage are exactly the forward-cycle positions 0.
"""

from __future__ import annotations

from typing import Iterator, Optional, Tuple

from ..cycletype import OMEGA, CycleType, ExtNat

__all__ = ["CanonicalMap", "Spec", "zigzag_encode", "zigzag_decode"]


def zigzag_encode(z: int) -> int:
    """Integer -> natural: 0,-1,1,-2,2,... maps to 0,1,2,3,4,..."""
    return 2 * z if z > 0 else -2 * z - 1 if z < 0 else 0


def zigzag_decode(code: int) -> int:
    return code // 2 if code % 2 == 0 else -(code + 1) // 2


class Spec:
    """One kind of cycle in a type: ('open',), ('fwd',) or ('fin', n)."""

    __slots__ = ("kind", "length", "mult")

    def __init__(self, kind: str, length: Optional[int], mult: ExtNat):
        self.kind = kind  # 'open' | 'fwd' | 'fin'
        self.length = length  # cycle length for 'fin', else None
        self.mult = mult

    @property
    def is_infinite_cycle(self) -> bool:
        return self.kind != "fin"

    def poslen(self) -> ExtNat:
        """Number of position codes inside one cycle of this spec."""
        return ExtNat(self.length) if self.kind == "fin" else OMEGA

    def class_key(self) -> tuple:
        return ("fin", self.length) if self.kind == "fin" else (self.kind,)

    def __repr__(self):
        if self.kind == "fin":
            return f"Spec(fin {self.length} x{self.mult})"
        return f"Spec({self.kind} x{self.mult})"


def _cap(e: ExtNat, cap: int) -> int:
    return cap if e.is_omega else min(e.to_int(), cap)


class CanonicalMap:
    """The canonical injective endomap of the naturals realizing a cycle type."""

    def __init__(self, cycle_type: CycleType):
        cycle_type.validate()
        self.type = cycle_type
        counts = cycle_type.counts
        self._head_specs = []
        if cycle_type.open_count >= 1:
            self._head_specs.append(Spec("open", None, cycle_type.open_count))
        if cycle_type.fwd >= 1:
            self._head_specs.append(Spec("fwd", None, cycle_type.fwd))
        if counts.default >= 1:
            # cofinitely many lengths occur; these are the missing ones
            self._absent = sorted(
                n for n, v in counts.exceptions.items() if v == ExtNat(0)
            )
            self._fin_lengths = None  # infinitely many
        else:
            self._absent = None
            self._fin_lengths = sorted(
                n for n, v in counts.exceptions.items() if v >= 1
            )
        self._full = []  # cumulative triple counts per shell, grown on demand
        self._spec_cache = list(self._head_specs)
        self._decode_cache = {}
        self._encode_cache = {}

    # -- spec enumeration ----------------------------------------------------

    def spec_count(self) -> ExtNat:
        if self._fin_lengths is None:
            return OMEGA
        return ExtNat(len(self._head_specs) + len(self._fin_lengths))

    def _fin_length_at(self, idx: int) -> int:
        """idx-th finite length present (0-based)."""
        if self._fin_lengths is not None:
            return self._fin_lengths[idx]
        # idx-th positive integer not in the sorted absence list
        n = idx + 1
        for a in self._absent:
            if a <= n:
                n += 1
            else:
                break
        return n

    def _fin_index_of(self, n: int) -> Optional[int]:
        """Spec offset (within finite specs) of length n, or None if absent."""
        if self._fin_lengths is not None:
            lo, hi = 0, len(self._fin_lengths)
            while lo < hi:
                mid = (lo + hi) // 2
                if self._fin_lengths[mid] < n:
                    lo = mid + 1
                else:
                    hi = mid
            if lo < len(self._fin_lengths) and self._fin_lengths[lo] == n:
                return lo
            return None
        if n in self._absent:
            return None
        below = sum(1 for a in self._absent if a < n)
        return n - 1 - below

    def spec(self, s: int) -> Spec:
        while len(self._spec_cache) <= s:
            idx = len(self._spec_cache) - len(self._head_specs)
            n = self._fin_length_at(idx)
            self._spec_cache.append(Spec("fin", n, self.type.counts.value_at(n)))
        return self._spec_cache[s]

    def spec_index(self, kind: str, length: Optional[int] = None) -> Optional[int]:
        """Index of a spec, or None if the type has no such cycles."""
        if kind == "open":
            return 0 if self.type.open_count >= 1 else None
        if kind == "fwd":
            if self.type.fwd < ExtNat(1):
                return None
            return 1 if self.type.open_count >= 1 else 0
        offset = self._fin_index_of(length)
        if offset is None or self.type.counts.value_at(length) < ExtNat(1):
            return None
        return len(self._head_specs) + offset

    # -- dovetail enumeration --------------------------------------------------

    def _full_through(self, m: int) -> int:
        """Number of triples with spec, copy and position all <= m."""
        if m < 0:
            return 0
        while len(self._full) <= m:
            mm = len(self._full)
            cap = mm + 1
            sc = self.spec_count()
            top = cap if sc.is_omega else min(sc.to_int(), cap)
            total = 0
            for s in range(top):
                sp = self.spec(s)
                total += _cap(sp.mult, cap) * _cap(sp.poslen(), cap)
            self._full.append(total)
        return self._full[m]

    def encode(self, s: int, c: int, p: int) -> int:
        key = (s, c, p)
        hit = self._encode_cache.get(key)
        if hit is not None:
            return hit
        m = max(s, c, p)
        rank = self._full_through(m - 1)
        cap = m + 1
        sc = self.spec_count()
        top = cap if sc.is_omega else min(sc.to_int(), cap)
        for s2 in range(min(s, top)):
            sp = self.spec(s2)
            a = _cap(sp.mult, cap)
            b = _cap(sp.poslen(), cap)
            if s2 == m:
                rank += a * b
            else:
                rank += a * b - min(a, m) * min(b, m)
        sp = self.spec(s)
        a = _cap(sp.mult, cap)
        b = _cap(sp.poslen(), cap)
        if s == m:
            rank += c * b + p
        else:
            # copies c' < c: position must reach m unless c' == m (impossible, c' < c <= m)
            if c == m:
                rank += c * (1 if b == cap else 0) + p
            else:
                rank += c * (1 if b == cap else 0)
                # c' == c, p' < p, need max == m: only p' == m qualifies, but p' < p <= m
                if max(s, c) == m:
                    rank += p
        self._encode_cache[key] = rank
        self._decode_cache[rank] = key
        return rank

    def decode(self, i: int) -> Tuple[int, int, int]:
        hit = self._decode_cache.get(i)
        if hit is not None:
            return hit
        if i < 0:
            raise ValueError("carrier index must be nonnegative")
        m = 0
        while self._full_through(m) <= i:
            m += 1
        r = i - self._full_through(m - 1)
        cap = m + 1
        sc = self.spec_count()
        top = cap if sc.is_omega else min(sc.to_int(), cap)
        for s in range(top):
            sp = self.spec(s)
            a = _cap(sp.mult, cap)
            b = _cap(sp.poslen(), cap)
            if s == m:
                size = a * b
            else:
                size = a * b - min(a, m) * min(b, m)
            if r >= size:
                r -= size
                continue
            if s == m:
                c, p = divmod(r, b)
            elif b == cap:
                # copies < m contribute position m only; copy m (if any) is full
                edge = min(a, m)
                if r < edge:
                    c, p = r, m
                else:
                    c, p = m, r - edge
            else:
                c, p = m, r
            triple = (s, c, p)
            self._decode_cache[i] = triple
            self._encode_cache[triple] = i
            return triple
        raise AssertionError("decode fell off the spec list")

    # -- the canonical action ----------------------------------------------------

    def eval(self, alpha: int) -> int:
        s, c, p = self.decode(alpha)
        sp = self.spec(s)
        if sp.kind == "fin":
            p2 = p + 1 if p + 1 < sp.length else 0
        elif sp.kind == "fwd":
            p2 = p + 1
        else:
            p2 = zigzag_encode(zigzag_decode(p) + 1)
        return self.encode(s, c, p2)

    def preimage(self, alpha: int) -> Optional[int]:
        s, c, p = self.decode(alpha)
        sp = self.spec(s)
        if sp.kind == "fin":
            p2 = p - 1 if p >= 1 else sp.length - 1
        elif sp.kind == "fwd":
            if p == 0:
                return None
            p2 = p - 1
        else:
            p2 = zigzag_encode(zigzag_decode(p) - 1)
        return self.encode(s, c, p2)

    def position_key(self, s: int, p: int) -> int:
        """Monotone position along a cycle: raw for fin/fwd, zigzag-decoded for open."""
        return zigzag_decode(p) if self.spec(s).kind == "open" else p

    def point_at_key(self, s: int, c: int, key: int) -> int:
        sp = self.spec(s)
        p = zigzag_encode(key) if sp.kind == "open" else key
        return self.encode(s, c, p)

    def root_points(self) -> Iterator[int]:
        """The points with no preimage: position 0 of each forward cycle."""
        s = self.spec_index("fwd")
        if s is None:
            return
        mult = self.spec(s).mult
        c = 0
        while mult.is_omega or c < mult.to_int():
            yield self.encode(s, c, 0)
            c += 1

    def __repr__(self):
        return f"CanonicalMap({self.type!r})"
