"""Constructive witnesses for the relations between concrete maps.

Everything here returns data that can be checked pointwise: a conjugating
bijection, a completing permutation, or a transposition whose composition
with the map performs one step of cycle surgery.
"""

from __future__ import annotations

from typing import List, Optional, Tuple

from ..cycletype import (
    OMEGA,
    CycleType,
    ExtNat,
    NoInfiniteCycleError,
    NoSuchFiniteCycleError,
)
from .carrier import CanonicalMap, zigzag_encode
from .maps import (
    CoimageMismatchError,
    DressedMap,
    FinitaryPerm,
    LazyBijection,
    PreconditionViolatedError,
)
from .structure import FWD_KEY, OPEN_KEY, MapStructure, fin_key

__all__ = [
    "conjugacy_witness",
    "complete_to_permutation",
    "split_witness",
    "merge_witness",
    "parity_effect",
    "even_adjust_witness",
    "relate_witness",
    "reversal_involution",
    "inverse_dressed",
]


def structure_witness(src: MapStructure, dst: MapStructure) -> LazyBijection:
    """Bijection a with dst-map = a . src-map . a^-1, built by matching the
    cycle indexings of the two structures class by class.

    Requires equal exact types.  Applying a to a point of the dst map's k-th
    cycle of a class at position i gives the src map's k-th cycle at the same
    position, which is exactly the intertwining relation.
    """

    def fwd(alpha: int) -> int:
        return src.point_at(*dst.locate(alpha))

    def bwd(beta: int) -> int:
        return dst.point_at(*src.locate(beta))

    return LazyBijection(fwd, bwd, "conjugacy")


def conjugacy_witness(m1: DressedMap, m2: DressedMap) -> Optional[LazyBijection]:
    """A computable permutation a with m2 = a.m1.a^-1, or None if the exact
    cycle types differ (no such permutation exists)."""
    s1, s2 = m1.structure(), m2.structure()
    if s1.exact_type != s2.exact_type:
        return None
    return structure_witness(s1, s2)


def complete_to_permutation(f: DressedMap, g: DressedMap) -> LazyBijection:
    """The permutation h with g = f.h: defined by h(f(x)) = g(x) on the image
    of f and by matching the two coimages in enumeration order elsewhere."""
    if f.coimage != g.coimage:
        raise CoimageMismatchError(
            f"coimage sizes differ: {f.coimage} vs {g.coimage}"
        )

    def fwd(beta: int) -> int:
        x = f.preimage(beta)
        if x is not None:
            return g.eval(x)
        return g.coimage_point(f.coimage_index(beta))

    def bwd(gamma: int) -> int:
        x = g.preimage(gamma)
        if x is not None:
            return f.eval(x)
        return f.coimage_point(g.coimage_index(gamma))

    return LazyBijection(fwd, bwd, "completion")


def _iterate(m: DressedMap, alpha: int, steps: int) -> int:
    for _ in range(steps):
        alpha = m.eval(alpha)
    return alpha


def split_witness(f: DressedMap, n: int) -> FinitaryPerm:
    """A transposition h with exact_type(f.h) = exact_type(f) with one more
    n-cycle: h swaps a point of an infinite cycle with its n-th image."""
    if n < 1:
        raise ValueError("cycle length must be positive")
    st = f.structure()
    if not st.exact_type.has_infinite_cycle():
        raise NoInfiniteCycleError("splitting requires an infinite cycle")
    alpha = st.infinite_cycle_point(0)
    beta = _iterate(f, alpha, n)
    return FinitaryPerm.transposition(alpha, beta)


def merge_witness(f: DressedMap, n: int) -> FinitaryPerm:
    """A transposition h with exact_type(f.h) = exact_type(f) with one fewer
    n-cycle: h swaps an infinite-cycle point with a point of an n-cycle."""
    if n < 1:
        raise ValueError("cycle length must be positive")
    st = f.structure()
    if not st.exact_type.has_infinite_cycle():
        raise NoInfiniteCycleError("merging requires an infinite cycle")
    if st.exact_type.counts.value_at(n) < ExtNat(1):
        raise NoSuchFiniteCycleError(f"no cycle of length {n} to merge")
    alpha = st.infinite_cycle_point(0)
    beta = st.finite_cycle_point(n, 0, 0)
    return FinitaryPerm.transposition(alpha, beta)


def parity_effect(f: DressedMap, h: FinitaryPerm) -> int:
    """Total finite-cycle count change caused by one transposition, for maps
    with exactly one infinite cycle and all finite counts finite.  The result
    is always -1 (a cycle was split off or apart) or +1 (two cycles merged)."""
    t1 = f.exact_type()
    if not t1.single_infinite_finite_counts():
        raise PreconditionViolatedError(
            "parity effect needs one infinite cycle and finite counts"
        )
    if not h.is_transposition():
        raise PreconditionViolatedError("h must be a transposition")
    t2 = f.then_perm(h).exact_type()
    total = 0
    for n in t1.counts.differing_lengths(t2.counts):
        total += t1.counts.value_at(n).to_int() - t2.counts.value_at(n).to_int()
    return total


def even_adjust_witness(f: DressedMap, h: FinitaryPerm) -> FinitaryPerm:
    """An even permutation g with exact_type(f.g) = exact_type(f.h).

    Exists whenever f has at least two infinite cycles, or one infinite cycle
    plus some length occurring infinitely often: appending one more
    transposition either swaps tails of two infinite cycles (no type change)
    or splits one more cycle off a length that already occurs infinitely
    often (no type change)."""
    t = f.exact_type()
    two_infinite = t.infinite_cycles() >= ExtNat(2)
    omega_length = t.counts.default.is_omega or any(
        v.is_omega for v in t.counts.exceptions.values()
    )
    if not (two_infinite or (t.has_infinite_cycle() and omega_length)):
        raise PreconditionViolatedError(
            "even adjustment needs two infinite cycles or an infinite length"
        )
    if h.is_even():
        return h
    fh = f.then_perm(h)
    st = fh.structure()
    if two_infinite:
        sigma = st.infinite_cycle_point(0)
        gamma = st.infinite_cycle_point(1)
        extra = FinitaryPerm.transposition(sigma, gamma)
    else:
        counts = st.exact_type.counts
        if counts.default.is_omega:
            n = 1
            while counts.value_at(n) != OMEGA:
                n += 1
        else:
            n = min(k for k, v in counts.exceptions.items() if v.is_omega)
        extra = split_witness(fh, n)
    g = h.then(extra)
    assert g.is_even()
    return g


def relate_witness(
    f: DressedMap, g: DressedMap, require_even: bool = False
) -> Optional[Tuple[List[FinitaryPerm], LazyBijection]]:
    """Transpositions h_1..h_m and a permutation a such that
    f = a.(g.h_1...h_m).a^-1, maps with infinite cycles only.

    Returns None when the exact types are not finitarily related (or not
    evenly related, when an even count of transpositions is demanded).  The
    transpositions perform merge/split surgery steps on g until its exact
    type equals f's; the conjugacy witness finishes the job.
    """
    tf, tg = f.exact_type(), g.exact_type()
    if not (tf.has_infinite_cycle() and tg.has_infinite_cycle()):
        raise PreconditionViolatedError("both maps need an infinite cycle")
    if not tf.approx_fin(tg):
        return None
    if require_even and not tf.approx_even(tg):
        return None

    transpositions = []
    current = g
    for n in tg.counts.differing_lengths(tf.counts):
        have = tg.counts.value_at(n).to_int()
        want = tf.counts.value_at(n).to_int()
        for _ in range(have, want):
            h = split_witness(current, n)
            transpositions.append(h)
            current = current.then_perm(h)
        for _ in range(want, have):
            h = merge_witness(current, n)
            transpositions.append(h)
            current = current.then_perm(h)
    if require_even and len(transpositions) % 2 == 1:
        # a split/merge pair at the same length is a net no-op
        h = split_witness(current, 1)
        transpositions.append(h)
        current = current.then_perm(h)
        h = merge_witness(current, 1)
        transpositions.append(h)
        current = current.then_perm(h)
    witness = conjugacy_witness(current, f)
    assert witness is not None, "surgery must land on f's exact type"
    return transpositions, witness


def reversal_involution(base: CanonicalMap) -> LazyBijection:
    """The involution reversing every cycle of a canonical permutation
    (position p -> -p within each cycle); conjugating the canonical map by it
    gives the inverse map."""

    def rev(alpha: int) -> int:
        s, c, p = base.decode(alpha)
        spec = base.spec(s)
        if spec.kind == "fin":
            p2 = (spec.length - p) % spec.length
        elif spec.kind == "open":
            p2 = zigzag_encode(-base.position_key(s, p))
        else:
            raise PreconditionViolatedError("forward cycles cannot be reversed")
        return base.encode(s, c, p2)

    return LazyBijection(rev, rev, "reversal")


def inverse_dressed(m: DressedMap) -> Tuple[DressedMap, LazyBijection]:
    """For an invertible dressed map (no forward cycles), a dressed
    representative of the inverse: returns (w, r) where r is the base's
    cycle-reversal involution and r.w.r evaluates the inverse of m pointwise.

    In particular w has the same exact type as the inverse of m.
    """
    if m.base.type.fwd >= ExtNat(1):
        raise PreconditionViolatedError("maps with forward cycles are not invertible")
    r = reversal_involution(m.base)

    def transport(perm: FinitaryPerm) -> FinitaryPerm:
        return FinitaryPerm(
            {r.apply(a): r.apply(b) for a, b in zip(perm.support(), map(perm.apply, perm.support()))}
        )

    w = DressedMap(transport(m.q.inverse()), m.base, transport(m.p.inverse()))
    return w, r
