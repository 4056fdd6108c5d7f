"""Factoring a map into a product of two conjugates with prescribed types.

For injective non-surjective maps, a product of conjugates of f and g can
realize h exactly when the coimage sizes add up: coimage(f) + coimage(g) =
coimage(h).  The decision is pure cardinal arithmetic on the types.  The
constructive direction builds, on an explicit coordinate grid, maps F, G, H
with H = F.G and prescribed exact types, then converts each to a conjugate
of the corresponding canonical map.

Construction outline.  Lay out k = k1 + k2 columns, each a copy of the
naturals, and let H0 shift every column up (k forward cycles).  Partition
the columns into groups of size >= 2; on each group take the round-robin
chain R (visit the group's columns left to right, then move up one row) and
the diagonal map D (step down-left within the group, jumping to the right
edge from the left edge).  Then R and D compose to the column shift in
either order, R has one forward chain per group and D has size-1 forward
chains per group, so choosing which side gets R gives any split k = k1 + k2.

Finite cycles are then carved with transposition surgery.  Multiplying on
the right touches H and G only, multiplying on the left touches H and F
only, so the targets are sculpted in phases: H first (pollution lands on G),
then G (each transposition verified to leave H's type fixed), then F (same
guard).  Guard freedom comes from the column layout: a transposition whose
two points lie in distinct infinite cycles of a map only swaps their tails
and never changes its type.  Every step is chosen from a small deterministic
candidate list and validated by re-deriving exact types, so the construction
is self-checking; the final witnesses are assembled from conjugacy witnesses
of the dressed views and the coordinate bijections.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import List, Optional, Tuple

from ..cycletype import CycleType, ExtNat, make_type
from .carrier import CanonicalMap
from .maps import (
    DressedMap,
    FinitaryPerm,
    LazyBijection,
    PreconditionViolatedError,
    WitnessUnsupportedError,
    dressed,
)
from .witnesses import conjugacy_witness

__all__ = ["FactorResult", "factor_into_conjugates", "eval_conjugate_product"]


@dataclass
class FactorResult:
    """Decision and, when supported, witnesses for h = a.f.a^-1.b.g.b^-1."""

    decision: bool
    supported: bool
    a: Optional[LazyBijection] = None
    b: Optional[LazyBijection] = None
    f: Optional[DressedMap] = None
    g: Optional[DressedMap] = None
    unsupported_reason: Optional[str] = None


def _restricted(t: CycleType) -> Optional[str]:
    """Why a type falls outside the witness class (None when inside)."""
    if t.fwd.is_omega:
        return "infinite coimage"
    if t.open_count != ExtNat(0):
        return "open cycles cannot be produced by finitary surgery"
    if t.counts.default != ExtNat(0):
        return "infinitely many finite cycle lengths"
    if any(v.is_omega for v in t.counts.exceptions.values()):
        return "a length with infinitely many cycles"
    return None


def factor_into_conjugates(tf: CycleType, tg: CycleType, th: CycleType) -> FactorResult:
    """Decide coimage additivity and build witnesses in the finite-type class."""
    for t in (tf, tg, th):
        t.validate()
        if t.fwd < ExtNat(1):
            raise PreconditionViolatedError("all three maps must be non-surjective")
    decision = (tf.fwd + tg.fwd) == th.fwd
    if not decision:
        return FactorResult(False, False)
    reasons = [r for r in map(_restricted, (tf, tg, th)) if r is not None]
    if reasons:
        return FactorResult(True, False, unsupported_reason=reasons[0])
    builder = _Builder(tf, tg, th)
    a, b, f, g = builder.build()
    return FactorResult(True, True, a=a, b=b, f=f, g=g)


def eval_conjugate_product(
    a: LazyBijection, f: DressedMap, b: LazyBijection, g: DressedMap, alpha: int
) -> int:
    """(alpha) a.f.a^-1.b.g.b^-1 -- the right-hand side of the factorization."""
    x = a.inverse_apply(f.eval(a.apply(alpha)))
    return b.inverse_apply(g.eval(b.apply(x)))


class ConstructionError(WitnessUnsupportedError):
    """No candidate transposition passed verification (should not happen)."""


class _Group:
    __slots__ = ("start", "size", "rr_chain", "diag_chain0")

    def __init__(self, start, size, rr_chain, diag_chain0):
        self.start = start
        self.size = size
        self.rr_chain = rr_chain  # global chain index of the round-robin chain
        self.diag_chain0 = diag_chain0  # first global chain index of the diagonals


class _Builder:
    def __init__(self, tf: CycleType, tg: CycleType, th: CycleType):
        self.tf, self.tg, self.th = tf, tg, th
        self.k1 = tf.fwd.to_int()
        self.k2 = tg.fwd.to_int()
        self.k = self.k1 + self.k2
        self.g_led = self.k1 >= self.k2
        ngroups = self.k2 if self.g_led else self.k1
        sizes = [2] * (ngroups - 1) + [self.k - 2 * (ngroups - 1)]
        self.groups: List[_Group] = []
        start = rr_i = diag_i = 0
        for s in sizes:
            self.groups.append(_Group(start, s, rr_i, diag_i))
            start += s
            rr_i += 1
            diag_i += s - 1
        self.group_of_col = []
        for gi, grp in enumerate(self.groups):
            self.group_of_col.extend([gi] * grp.size)

        self.base_f = CanonicalMap(make_type(fwd=self.k1))
        self.base_g = CanonicalMap(make_type(fwd=self.k2))
        self.base_h = CanonicalMap(make_type(fwd=self.k))
        self.pf = self.qf = FinitaryPerm()
        self.pg = self.qg = FinitaryPerm()
        self.ph = self.qh = FinitaryPerm()
        self._fresh = 2

    # -- core grid ----------------------------------------------------------

    def _core(self, col: int, h: int) -> int:
        return h * self.k + col

    def _colh(self, point: int) -> Tuple[int, int]:
        h, col = divmod(point, self.k)
        return col, h

    # (chain, pos) <-> (col, h) for the two chain shapes

    def _rr_fwd(self, grp: _Group, pos: int) -> Tuple[int, int]:
        h, j = divmod(pos, grp.size)
        return grp.start + j, h

    def _rr_bwd(self, grp: _Group, col: int, h: int) -> int:
        return h * grp.size + (col - grp.start)

    def _diag_fwd(self, grp: _Group, d: int, pos: int) -> Tuple[int, int]:
        s = grp.size
        if pos <= d:
            return grp.start + d - pos, pos
        q = pos - (d + 1)
        b, t = divmod(q, s)
        return grp.start + s - 1 - t, d + b * (s - 1) + t

    def _diag_bwd(self, grp: _Group, col: int, h: int) -> Tuple[int, int]:
        s = grp.size
        j = col - grp.start
        d = (j + h) % (s - 1)
        if h <= d and j == d - h:
            return d, h
        t = s - 1 - j
        b, rem = divmod(h - d - t, s - 1)
        assert rem == 0 and b >= 0, "point off its diagonal chain"
        return d, d + 1 + b * s + t

    # -- canonical <-> core bijections per side -----------------------------

    def _phi(self, side: str) -> LazyBijection:
        base = {"f": self.base_f, "g": self.base_g, "h": self.base_h}[side]
        rr_side = ("g" if self.g_led else "f")

        def fwd(alpha: int) -> int:
            _, chain, pos = base.decode(alpha)
            if side == "h":
                return self._core(chain, pos)
            if side == rr_side:
                grp = self.groups[chain]
                return self._core(*self._rr_fwd(grp, pos))
            for grp in self.groups:
                if chain < grp.diag_chain0 + grp.size - 1:
                    return self._core(*self._diag_fwd(grp, chain - grp.diag_chain0, pos))
            raise AssertionError("chain index out of range")

        def bwd(point: int) -> int:
            col, h = self._colh(point)
            if side == "h":
                return base.encode(0, col, h)
            grp = self.groups[self.group_of_col[col]]
            if side == rr_side:
                return base.encode(0, grp.rr_chain, self._rr_bwd(grp, col, h))
            d, pos = self._diag_bwd(grp, col, h)
            return base.encode(0, grp.diag_chain0 + d, pos)

        return LazyBijection(fwd, bwd, f"phi_{side}")

    # -- dressed views -------------------------------------------------------

    def _view(self, side: str) -> DressedMap:
        if side == "f":
            return DressedMap(self.pf, self.base_f, self.qf)
        if side == "g":
            return DressedMap(self.pg, self.base_g, self.qg)
        return DressedMap(self.ph, self.base_h, self.qh)

    def _transport(self, phi: LazyBijection, t_core: Tuple[int, int]) -> FinitaryPerm:
        return FinitaryPerm.transposition(
            phi.inverse_apply(t_core[0]), phi.inverse_apply(t_core[1])
        )

    def _side_eval(self, side: str, phi: LazyBijection, x_core: int) -> int:
        return phi.apply(self._view(side).eval(phi.inverse_apply(x_core)))

    # -- verified surgery ----------------------------------------------------

    def _commit_right(self, t_core):
        self.qg = self.qg.then(self._transport(self.phi_g, t_core))
        self.qh = self.qh.then(self._transport(self.phi_h, t_core))

    def _commit_left(self, t_core):
        self.pf = self._transport(self.phi_f, t_core).then(self.pf)
        self.ph = self._transport(self.phi_h, t_core).then(self.ph)

    def _try(self, mult: str, t_core, want_type: CycleType, guard_h: bool) -> bool:
        """Apply the transposition if the sculpted side reaches want_type and,
        when guarded, H's exact type is unchanged."""
        if t_core[0] == t_core[1]:
            return False
        th_before = self._view("h").exact_type()
        if mult == "right":
            tg_c = self._transport(self.phi_g, t_core)
            th_c = self._transport(self.phi_h, t_core)
            side_after = DressedMap(self.pg, self.base_g, self.qg.then(tg_c)).exact_type()
            h_after = DressedMap(self.ph, self.base_h, self.qh.then(th_c)).exact_type()
        else:
            tf_c = self._transport(self.phi_f, t_core)
            th_c = self._transport(self.phi_h, t_core)
            side_after = DressedMap(tf_c.then(self.pf), self.base_f, self.qf).exact_type()
            h_after = DressedMap(th_c.then(self.ph), self.base_h, self.qh).exact_type()
        if side_after != want_type:
            return False
        if guard_h and h_after != th_before:
            return False
        if mult == "right":
            self._commit_right(t_core)
        else:
            self._commit_left(t_core)
        return True

    def _advance_fresh(self, span: int):
        self._fresh += span + 3

    def _split(self, mult: str, side: str, phi, n: int, guard_h: bool) -> bool:
        """One transposition adding an n-cycle to the side; tries every column."""
        want = self._view(side).exact_type().split_cycle(n)
        for h_off in (0, 1):
            for col in range(self.k):
                x = self._core(col, self._fresh + h_off * (n + 2))
                y = x
                for _ in range(n):
                    y = self._side_eval(side, phi, y)
                if self._try(mult, (x, y), want, guard_h):
                    self._advance_fresh(2 * n + 6)
                    return True
        return False

    def _merge(self, mult: str, side: str, phi, n: int, guard_h: bool):
        """One transposition absorbing an n-cycle of the side back into an
        infinite cycle; tries every (column, cycle point) pair."""
        view = self._view(side)
        want = view.exact_type().merge_cycle(n)
        st = view.structure()
        for pos in range(n):
            y_canon = st.finite_cycle_point(n, 0, pos)
            y = phi.apply(y_canon)
            for h_off in (0, 1):
                for col in range(self.k):
                    x = self._core(col, self._fresh + h_off)
                    if self._try(mult, (x, y), want, guard_h):
                        self._advance_fresh(4)
                        return
        raise ConstructionError(f"no guarded merge of a {n}-cycle on side {side}")

    def _chop(self, mult: str, side: str, phi, m: int, guard_h: bool):
        """Split a 1-cycle off an m-cycle (adjacent-pair transposition)."""
        view = self._view(side)
        t = view.exact_type()
        counts = t.counts.with_value(m, t.counts.value_at(m) - 1)
        counts = counts.with_value(m - 1, counts.value_at(m - 1) + 1)
        counts = counts.with_value(1, counts.value_at(1) + 1)
        want = CycleType(counts, t.open_count, t.fwd)
        st = view.structure()
        ranks = t.counts.value_at(m).to_int()
        for rank in range(ranks):
            pts = [phi.apply(st.finite_cycle_point(m, rank, i)) for i in range(m)]
            for i in range(m):
                pair = (pts[i], pts[(i + 1) % m])
                if self._try(mult, pair, want, guard_h):
                    return
        raise ConstructionError(f"no guarded chop of a {m}-cycle on side {side}")

    def _add_cycle(self, mult: str, side: str, phi, n: int, guard_h: bool):
        """Add one n-cycle: a direct split, or a longer split chopped down."""
        if self._split(mult, side, phi, n, guard_h):
            return
        for extra in (1, 2):
            if self._split(mult, side, phi, n + extra, guard_h):
                for m in range(n + extra, n, -1):
                    self._chop(mult, side, phi, m, guard_h)
                return
        raise ConstructionError(f"no guarded split of a {n}-cycle on side {side}")

    def _reconcile(self, mult: str, side: str, phi, target: CycleType, guard_h: bool):
        """Drive the side's exact type to the target by split/merge surgery."""
        for _ in range(10000):
            current = self._view(side).exact_type()
            diffs = current.counts.differing_lengths(target.counts)
            assert diffs is not None
            if not diffs:
                return
            n = max(diffs)
            have = current.counts.value_at(n).to_int()
            want = target.counts.value_at(n).to_int()
            if have > want:
                self._merge(mult, side, phi, n, guard_h)
            else:
                self._add_cycle(mult, side, phi, n, guard_h)
        raise ConstructionError("reconciliation did not converge")

    # -- assembly -------------------------------------------------------------

    def build(self):
        self.phi_f = self._phi("f")
        self.phi_g = self._phi("g")
        self.phi_h = self._phi("h")

        # phase H: sculpt H's finite cycles with right multiplications
        for n in sorted(self.th.counts.exceptions, reverse=True):
            count = self.th.counts.value_at(n).to_int()
            for _ in range(count):
                want = self._view("h").exact_type().split_cycle(n)
                placed = False
                for col in range(self.k):
                    x = self._core(col, self._fresh)
                    y = x
                    for _ in range(n):
                        y = self._side_eval("h", self.phi_h, y)
                    if self._try("right", (x, y), want, guard_h=False):
                        self._advance_fresh(2 * n + 6)
                        placed = True
                        break
                if not placed:
                    raise ConstructionError(f"could not split an {n}-cycle on H")

        # phase G: reconcile G to its target, guarding H
        self._reconcile("right", "g", self.phi_g, self.tg, guard_h=True)
        # phase F: reconcile F with left multiplications, guarding H
        self._reconcile("left", "f", self.phi_f, self.tf, guard_h=True)

        df, dg, dh = self._view("f"), self._view("g"), self._view("h")
        assert df.exact_type() == self.tf
        assert dg.exact_type() == self.tg
        assert dh.exact_type() == self.th

        f = dressed(self.tf)
        g = dressed(self.tg)
        h = dressed(self.th)
        wf = conjugacy_witness(f, df)
        wg = conjugacy_witness(g, dg)
        wh = conjugacy_witness(h, dh)
        assert wf is not None and wg is not None and wh is not None
        a = wh.inverse().then(self.phi_h).then(self.phi_f.inverse()).then(wf)
        b = wh.inverse().then(self.phi_h).then(self.phi_g.inverse()).then(wg)
        return a, b, f, g
