"""Exact cycle structure of dressed maps.

A dressed map m = p.base.q differs from its canonical base on a finite set,
so every cycle of m either is a cycle of the base untouched, or meets a
finite "disturbance" set D that can be computed from the supports of p and q.
D is chosen to contain every point whose image or preimage under m differs
from the base, together with the images of those points under both maps;
then a base cycle disjoint from D is closed under m and m-preimages and is
therefore exactly one m-cycle of the same size and kind, while the union of
base cycles meeting D is m-closed and every m-cycle inside it meets D.

Tracing the m-orbit of each D point therefore enumerates all modified
cycles.  Each trace terminates:

* a forward trace either returns to its start (a finite cycle), or enters an
  infinite base cycle at a position beyond every D position of that cycle,
  after which m agrees with the base forever and the positions grow
  monotonically, never re-entering D (an escape);
* a backward trace either reaches a point with no preimage (a forward
  cycle), descends an open base cycle below every D position (an escape), or
  descends a forward base cycle to its root;
* between D positions the walk follows the base, so it moves in jumps from
  one D position to the next and only finitely many D positions exist.

The traced cycles are stored as runs of consecutive base positions, which
also yields a computable indexing of every cycle of m (modified cycles
first, in trace order, then untouched canonical cycles in copy order); the
indexing is what conjugacy witnesses are built from.
"""

from __future__ import annotations

from bisect import bisect_left, bisect_right, insort
from typing import Dict, List, Optional, Tuple

from ..cycletype import OMEGA, CountFunction, CycleType, ExtNat
from .carrier import CanonicalMap
from .maps import DressedMap

__all__ = ["MapStructure", "TracedCycle", "OPEN_KEY", "FWD_KEY", "fin_key"]

OPEN_KEY = ("open",)
FWD_KEY = ("fwd",)


def fin_key(n: int) -> tuple:
    return ("fin", n)


class _Segment:
    """A run of consecutive positions of one base cycle inside a traced m-cycle."""

    __slots__ = ("cid", "key_lo", "key_hi", "pos_lo")

    def __init__(self, cid, key_lo, key_hi, pos_lo):
        self.cid = cid
        self.key_lo = key_lo
        self.key_hi = key_hi
        self.pos_lo = pos_lo

    @property
    def pos_hi(self):
        return self.pos_lo + (self.key_hi - self.key_lo)

    def shift(self, delta):
        self.pos_lo += delta

    def __repr__(self):
        return f"Seg{self.cid}[{self.key_lo}..{self.key_hi}]@{self.pos_lo}"


class TracedCycle:
    """A cycle of the dressed map that meets the disturbance set."""

    __slots__ = ("kind", "segments", "length", "fwd_tail", "bwd_tail", "index_in_class")

    def __init__(self, kind, segments, length=None, fwd_tail=None, bwd_tail=None):
        self.kind = kind  # 'fin' | 'fwd' | 'open'
        self.segments = segments  # sorted by pos_lo
        self.length = length
        self.fwd_tail = fwd_tail  # (cid, key_start, pos_start)
        self.bwd_tail = bwd_tail
        self.index_in_class = None

    def class_key(self):
        return fin_key(self.length) if self.kind == "fin" else (self.kind,)


class MapStructure:
    """Complete computable cycle structure (and exact type) of a dressed map."""

    def __init__(self, m: DressedMap):
        self.m = m
        self.base = m.base
        self._locate_cache = {}
        self._disturbance()
        self._trace_all()
        self._index()
        self._assemble_type()

    # -- disturbance -------------------------------------------------------

    def _disturbance(self):
        m, base = self.m, self.base
        first = set(m.p.support())
        for y in m.q.support():
            pre = base.preimage(y)
            if pre is not None:
                first.add(pre)
        points = set(first)
        for x in first:
            points.add(m.eval(x))
            points.add(base.eval(x))
        points |= set(m.q.support())
        self.disturbed = points
        self.keymap: Dict[tuple, list] = {}
        for d in points:
            s, c, p = base.decode(d)
            key = base.position_key(s, p)
            insort(self.keymap.setdefault((s, c), []), key)

    def _kind_of_spec(self, s: int) -> str:
        return self.base.spec(s).kind

    # -- tracing -----------------------------------------------------------

    def _trace_all(self):
        self.traced: List[TracedCycle] = []
        visited = set()
        for d in sorted(self.disturbed):
            if d in visited:
                continue
            tc = self._trace(d, visited)
            self.traced.append(tc)

    def _trace(self, x0: int, visited) -> TracedCycle:
        base, m = self.base, self.m
        s0, c0, p0 = base.decode(x0)
        key0 = base.position_key(s0, p0)
        segments = [_Segment((s0, c0), key0, key0, 0)]
        visited.add(x0)

        # forward phase
        cur, cid, key, pos = x0, (s0, c0), key0, 0
        seg = segments[0]
        closed_length = None
        fwd_tail = None
        while True:
            if cur in self.disturbed:
                nxt = m.eval(cur)
                if nxt == x0:
                    closed_length = pos + 1
                    break
                s2, c2, p2 = base.decode(nxt)
                cid2 = (s2, c2)
                key2 = base.position_key(s2, p2)
                if cid2 == cid and key2 == key + 1:
                    seg.key_hi = key2
                else:
                    seg = _Segment(cid2, key2, key2, pos + 1)
                    segments.append(seg)
                visited.add(nxt)
                cur, cid, key, pos = nxt, cid2, key2, pos + 1
                continue
            # clean point: follow the base in one jump to the next D position
            keys = self.keymap.get(cid, [])
            spec = base.spec(cid[0])
            if spec.kind != "fin":
                idx = bisect_right(keys, key)
                if idx == len(keys):
                    fwd_tail = (cid, key + 1, pos + 1)
                    break
                k2 = keys[idx]
                land = base.point_at_key(cid[0], cid[1], k2)
                if land == x0:
                    seg.key_hi = k2 - 1
                    closed_length = pos + (k2 - key)
                    break
                seg.key_hi = k2
                visited.add(land)
                cur, key, pos = land, k2, pos + (k2 - key)
            else:
                n = spec.length
                idx = bisect_right(keys, key)
                if idx < len(keys):
                    k2 = keys[idx]
                    land = base.point_at_key(cid[0], cid[1], k2)
                    if land == x0:
                        seg.key_hi = k2 - 1
                        closed_length = pos + (k2 - key)
                        break
                    seg.key_hi = k2
                    visited.add(land)
                    cur, key, pos = land, k2, pos + (k2 - key)
                else:
                    # wrap through position 0
                    k2 = keys[0]
                    seg.key_hi = n - 1
                    pos_at_zero = pos + ((n - 1) - key) + 1
                    land = base.point_at_key(cid[0], cid[1], k2)
                    if land == x0:
                        if k2 >= 1:
                            segments.append(_Segment(cid, 0, k2 - 1, pos_at_zero))
                        closed_length = pos_at_zero + k2
                        break
                    seg = _Segment(cid, 0, k2, pos_at_zero)
                    segments.append(seg)
                    visited.add(land)
                    cur, key, pos = land, k2, pos_at_zero + k2

        if closed_length is not None:
            segments.sort(key=lambda g: g.pos_lo)
            return TracedCycle("fin", segments, length=closed_length)

        # backward phase from x0
        cur, cid, key, pos = x0, (s0, c0), key0, 0
        seg = segments[0]
        root_found = False
        bwd_tail = None
        while True:
            if cur in self.disturbed:
                prv = m.preimage(cur)
                if prv is None:
                    root_found = True
                    break
                assert prv != x0, "backward walk revisited its start"
                s2, c2, p2 = base.decode(prv)
                cid2 = (s2, c2)
                key2 = base.position_key(s2, p2)
                if cid2 == cid and key2 == key - 1:
                    seg.key_lo = key2
                    seg.pos_lo = pos - 1
                else:
                    seg = _Segment(cid2, key2, key2, pos - 1)
                    segments.append(seg)
                visited.add(prv)
                cur, cid, key, pos = prv, cid2, key2, pos - 1
                continue
            keys = self.keymap.get(cid, [])
            spec = base.spec(cid[0])
            if spec.kind == "open":
                idx = bisect_left(keys, key)
                if idx == 0:
                    bwd_tail = (cid, key - 1, pos - 1)
                    break
                k2 = keys[idx - 1]
                land = base.point_at_key(cid[0], cid[1], k2)
                assert land != x0
                seg.key_lo = k2
                seg.pos_lo = pos - (key - k2)
                visited.add(land)
                cur, key, pos = land, k2, pos - (key - k2)
            elif spec.kind == "fwd":
                idx = bisect_left(keys, key)
                if idx == 0:
                    # clean descent to the forward root
                    seg.key_lo = 0
                    seg.pos_lo = pos - key
                    pos -= key
                    cur = base.point_at_key(cid[0], cid[1], 0)
                    visited.add(cur)
                    key = 0
                    root_found = True
                    break
                k2 = keys[idx - 1]
                land = base.point_at_key(cid[0], cid[1], k2)
                assert land != x0
                seg.key_lo = k2
                seg.pos_lo = pos - (key - k2)
                visited.add(land)
                cur, key, pos = land, k2, pos - (key - k2)
            else:
                n = spec.length
                idx = bisect_left(keys, key)
                if idx > 0:
                    k2 = keys[idx - 1]
                    land = base.point_at_key(cid[0], cid[1], k2)
                    assert land != x0
                    seg.key_lo = k2
                    seg.pos_lo = pos - (key - k2)
                    visited.add(land)
                    cur, key, pos = land, k2, pos - (key - k2)
                else:
                    # wrap backward through position 0 to the top of the cycle
                    k2 = keys[-1]
                    seg.key_lo = 0
                    seg.pos_lo = pos - key
                    pos_at_top = pos - key - 1  # position of key n-1
                    land = base.point_at_key(cid[0], cid[1], k2)
                    assert land != x0
                    seg = _Segment(cid, k2, n - 1, pos_at_top - (n - 1 - k2))
                    segments.append(seg)
                    visited.add(land)
                    cur, key, pos = land, k2, pos_at_top - (n - 1 - k2)

        segments.sort(key=lambda g: g.pos_lo)
        if root_found:
            # re-anchor so the root sits at position 0
            delta = -segments[0].pos_lo
            for g in segments:
                g.shift(delta)
            assert fwd_tail is not None, "a rooted trace must have escaped forward"
            cid_t, k_t, p_t = fwd_tail
            return TracedCycle("fwd", segments, fwd_tail=(cid_t, k_t, p_t + delta))
        assert fwd_tail is not None and bwd_tail is not None
        return TracedCycle("open", segments, fwd_tail=fwd_tail, bwd_tail=bwd_tail)

    # -- indexing ----------------------------------------------------------

    def _index(self):
        self.traced_by_class: Dict[tuple, list] = {}
        for tc in self.traced:
            lst = self.traced_by_class.setdefault(tc.class_key(), [])
            tc.index_in_class = len(lst)
            lst.append(tc)
        self.affected_copies: Dict[int, list] = {}
        for (s, c) in self.keymap:
            insort(self.affected_copies.setdefault(s, []), c)
        # per base cycle: traversal runs and tails, for locate()
        self.cid_runs: Dict[tuple, list] = {}
        self.cid_fwd_tail: Dict[tuple, tuple] = {}
        self.cid_bwd_tail: Dict[tuple, tuple] = {}
        for ti, tc in enumerate(self.traced):
            for g in tc.segments:
                self.cid_runs.setdefault(g.cid, []).append(
                    (g.key_lo, g.key_hi, ti, g.pos_lo)
                )
            if tc.fwd_tail is not None:
                cid, k, p = tc.fwd_tail
                assert cid not in self.cid_fwd_tail
                self.cid_fwd_tail[cid] = (ti, k, p)
            if tc.bwd_tail is not None:
                cid, k, p = tc.bwd_tail
                assert cid not in self.cid_bwd_tail
                self.cid_bwd_tail[cid] = (ti, k, p)
        for runs in self.cid_runs.values():
            runs.sort()

    def _assemble_type(self):
        base_type = self.base.type
        removed: Dict[tuple, int] = {}
        for (s, c) in self.keymap:
            ck = self.base.spec(s).class_key()
            removed[ck] = removed.get(ck, 0) + 1
        added: Dict[tuple, int] = {}
        for tc in self.traced:
            ck = tc.class_key()
            added[ck] = added.get(ck, 0) + 1

        open_count = base_type.open_count
        fwd = base_type.fwd
        counts = base_type.counts
        for ck in set(removed) | set(added):
            r = removed.get(ck, 0)
            a = added.get(ck, 0)
            if ck == OPEN_KEY:
                open_count = (open_count - r) + a
            elif ck == FWD_KEY:
                fwd = (fwd - r) + a
            else:
                n = ck[1]
                counts = counts.with_value(n, (counts.value_at(n) - r) + a)
        exact = CycleType(counts, open_count, fwd).validate()
        assert exact.fwd == base_type.fwd, "coimage must match the base"
        assert exact.approx_fin(base_type), "dressing must stay finitarily related"
        self.exact_type = exact

    # -- cycle indexing API --------------------------------------------------

    def _clean_rank(self, s: int, c: int) -> int:
        aff = self.affected_copies.get(s, [])
        i = bisect_left(aff, c)
        assert i >= len(aff) or aff[i] != c, "clean rank queried for a traced cycle"
        return c - i

    def _copy_from_clean_rank(self, s: int, rank: int) -> int:
        c = rank
        for a in self.affected_copies.get(s, []):
            if a <= c:
                c += 1
            else:
                break
        return c

    def locate(self, alpha: int) -> Tuple[tuple, int, int]:
        """Return (class_key, cycle_rank, position) of a carrier point."""
        hit = self._locate_cache.get(alpha)
        if hit is not None:
            return hit
        base = self.base
        s, c, p = base.decode(alpha)
        cid = (s, c)
        key = base.position_key(s, p)
        if cid not in self.keymap:
            ck = base.spec(s).class_key()
            rank = len(self.traced_by_class.get(ck, ())) + self._clean_rank(s, c)
            result = (ck, rank, key)
        else:
            result = None
            for key_lo, key_hi, ti, pos_lo in self.cid_runs.get(cid, ()):
                if key_lo <= key <= key_hi:
                    tc = self.traced[ti]
                    result = (tc.class_key(), tc.index_in_class, pos_lo + (key - key_lo))
                    break
            if result is None and cid in self.cid_fwd_tail:
                ti, k0, p0 = self.cid_fwd_tail[cid]
                if key >= k0:
                    tc = self.traced[ti]
                    result = (tc.class_key(), tc.index_in_class, p0 + (key - k0))
            if result is None and cid in self.cid_bwd_tail:
                ti, k0, p0 = self.cid_bwd_tail[cid]
                if key <= k0:
                    tc = self.traced[ti]
                    result = (tc.class_key(), tc.index_in_class, p0 - (k0 - key))
            assert result is not None, f"point {alpha} not located in affected cycle {cid}"
        self._locate_cache[alpha] = result
        return result

    def point_at(self, class_key: tuple, rank: int, pos: int) -> int:
        """Inverse of locate: the point at a position of the rank-th cycle."""
        base = self.base
        tlist = self.traced_by_class.get(class_key, ())
        if rank < len(tlist):
            tc = tlist[rank]
            if tc.kind == "fin":
                pos %= tc.length
            for g in tc.segments:
                if g.pos_lo <= pos <= g.pos_hi:
                    key = g.key_lo + (pos - g.pos_lo)
                    return base.point_at_key(g.cid[0], g.cid[1], key)
            if tc.fwd_tail is not None:
                cid, k0, p0 = tc.fwd_tail
                if pos >= p0:
                    return base.point_at_key(cid[0], cid[1], k0 + (pos - p0))
            if tc.bwd_tail is not None:
                cid, k0, p0 = tc.bwd_tail
                if pos <= p0:
                    return base.point_at_key(cid[0], cid[1], k0 - (p0 - pos))
            raise AssertionError(f"position {pos} outside traced cycle")
        rank -= len(tlist)
        if class_key == OPEN_KEY:
            s = base.spec_index("open")
        elif class_key == FWD_KEY:
            s = base.spec_index("fwd")
        else:
            s = base.spec_index("fin", class_key[1])
        assert s is not None, f"no clean cycles in class {class_key}"
        c = self._copy_from_clean_rank(s, rank)
        spec = base.spec(s)
        if spec.kind == "fin":
            pos %= spec.length
        else:
            assert spec.kind == "open" or pos >= 0, "forward cycles have no negative positions"
        return base.point_at_key(s, c, pos)

    def class_count(self, class_key: tuple) -> ExtNat:
        t = self.exact_type
        if class_key == OPEN_KEY:
            return t.open_count
        if class_key == FWD_KEY:
            return t.fwd
        return t.counts.value_at(class_key[1])

    def infinite_cycle_point(self, rank: int, pos: int = 0) -> int:
        """A point on the rank-th infinite cycle (open cycles first, then forward)."""
        opens = self.exact_type.open_count
        if opens.is_omega or rank < opens.to_int():
            return self.point_at(OPEN_KEY, rank, pos)
        return self.point_at(FWD_KEY, rank - opens.to_int(), pos)

    def finite_cycle_point(self, n: int, rank: int = 0, pos: int = 0) -> int:
        return self.point_at(fin_key(n), rank, pos)
