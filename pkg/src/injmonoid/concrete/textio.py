"""Text grammar for finitary permutations and dressed maps.

    FinitaryPerm ::= "perm(" CYCLE* ")"      CYCLE ::= "(" INT (" " INT)* ")"
    DressedMap   ::= "dmap(p=" PERM ",t=" CT ",q=" PERM ")"

Example: dmap(p=perm(),t=ct(open=0,fwd=1,default=0),q=perm((0 3))).
Formatting is canonical: cycles sorted by least point, each starting there.
"""

from __future__ import annotations

from .._scanner import Scanner
from ..cycletype import format_cycle_type, scan_cycle_type
from .carrier import CanonicalMap
from .maps import DressedMap, FinitaryPerm

__all__ = ["format_perm", "parse_perm", "format_dressed", "parse_dressed"]


def format_perm(p: FinitaryPerm) -> str:
    return "perm(" + "".join(
        "(" + " ".join(str(x) for x in cyc) + ")" for cyc in p.cycles()
    ) + ")"


def parse_perm(text: str) -> FinitaryPerm:
    sc = Scanner(text)
    p = scan_perm(sc)
    sc.end()
    return p


def scan_perm(sc: Scanner) -> FinitaryPerm:
    sc.skip_ws()
    sc.expect("perm(")
    cycles = []
    while True:
        sc.skip_ws()
        if sc.try_take(")"):
            break
        at = sc.pos
        sc.expect("(")
        cyc = [sc.integer()]
        while True:
            sc.skip_ws()
            if sc.try_take(")"):
                break
            cyc.append(sc.integer())
        if len(cyc) < 2:
            sc.pos = at
            sc.error("a cycle needs at least two points")
        cycles.append(cyc)
    try:
        return FinitaryPerm.from_cycles(cycles)
    except ValueError as exc:
        sc.error(str(exc))


def format_dressed(m: DressedMap) -> str:
    return (
        f"dmap(p={format_perm(m.p)},t={format_cycle_type(m.base.type)},q={format_perm(m.q)})"
    )


def parse_dressed(text: str) -> DressedMap:
    sc = Scanner(text)
    sc.skip_ws()
    sc.expect("dmap(p=")
    p = scan_perm(sc)
    sc.expect(",t=")
    t = scan_cycle_type(sc)
    sc.expect(",q=")
    q = scan_perm(sc)
    sc.expect(")")
    sc.end()
    return DressedMap(p, CanonicalMap(t), q)
