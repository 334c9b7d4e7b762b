"""Interval structures carried by an oriented edge.

Each kind expands into a Family: finitely many rigid generator traces
plus flexible fragments (direction + window in which arbitrary monotone
sub-runs are allowed) plus the set of positions whose trivial loops are
controlled.  Built-in kinds:

  natural     every path on the edge
  directed    every increasing path
  one_jump    a single rigid full traversal; endpoints flexible
  n_stop(n)   n rigid unit jumps between the anchors k/n
  delayed_minus / delayed_plus
              rigid full traversal that must dwell at its start / end
  reversible_one_jump
              rigid full traversals both ways
  siphon      increasing fragment plus a rigid full backward run
  siphon_osc  increasing fragment, decreasing fragment that may not
              start at 1, plus the rigid full backward run
  still       trivial loops everywhere, nothing moves
  discrete_c  no controlled path at all, not even trivial loops
  custom      an explicit Family (used by derived constructions)
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Union

from .model import (ONE, ZERO, ModelError, Rat, RigidTrace, TraceStep)

ALL = "all"


@dataclass(frozen=True)
class Fragment:
    """Arbitrary monotone sub-runs of one edge within a window.

    ``start_not`` / ``end_not`` forbid a generator instance from
    starting / ending at the listed positions; they are only meaningful
    at window extremes (where an instance boundary is forced).
    """
    dir: int
    lo: Rat = ZERO
    hi: Rat = ONE
    lo_open: bool = False
    hi_open: bool = False
    start_not: frozenset = frozenset()
    end_not: frozenset = frozenset()

    def admits(self, a: Rat, b: Rat, direction: int) -> bool:
        """Does the window admit a run covering [min,max] in `direction`?"""
        if direction != self.dir:
            return False
        lo, hi = min(a, b), max(a, b)
        if lo < self.lo or (self.lo_open and lo == self.lo):
            return False
        if hi > self.hi or (self.hi_open and hi == self.hi):
            return False
        return True

    def reversed(self) -> "Fragment":
        return Fragment(-self.dir, self.lo, self.hi, self.lo_open, self.hi_open,
                        start_not=self.end_not, end_not=self.start_not)


@dataclass(frozen=True)
class Family:
    """Generator family of one edge."""
    rigid: tuple = ()       # of RigidTrace, steps on this edge
    fragments: tuple = ()   # of Fragment
    flexible: Union[str, frozenset] = frozenset()  # ALL or positions in [0,1]

    def position_flexible(self, t: Rat) -> bool:
        if self.flexible == ALL:
            return True
        return t in self.flexible


@dataclass(frozen=True)
class EdgeKind:
    name: str
    n: int = 0                 # n_stop arity
    family: Family = None      # custom payload

    def __post_init__(self):
        if self.name not in _KIND_NAMES:
            raise ModelError(f"unknown edge kind {self.name!r}")
        if self.name == "n_stop" and self.n < 1:
            raise ModelError("n_stop needs n >= 1")
        if self.name == "custom" and self.family is None:
            raise ModelError("custom kind needs a family")


_KIND_NAMES = {
    "natural", "directed", "one_jump", "n_stop", "delayed_minus",
    "delayed_plus", "reversible_one_jump", "siphon", "siphon_osc",
    "still", "discrete_c", "custom",
}

NATURAL = None  # assigned below, after EdgeKind exists


def kind(name: str, n: int = 0, family: Family = None) -> EdgeKind:
    return EdgeKind(name, n, family)


NATURAL = kind("natural")
DIRECTED = kind("directed")
ONE_JUMP = kind("one_jump")
DELAYED_MINUS = kind("delayed_minus")
DELAYED_PLUS = kind("delayed_plus")
REVERSIBLE_ONE_JUMP = kind("reversible_one_jump")
SIPHON = kind("siphon")
SIPHON_OSC = kind("siphon_osc")
STILL = kind("still")
DISCRETE_C = kind("discrete_c")


def n_stop(n: int) -> EdgeKind:
    return kind("n_stop", n=n)


def custom(family: Family) -> EdgeKind:
    return kind("custom", family=family)


def _full(edge: str, direction: int, pauses=frozenset()) -> RigidTrace:
    if direction > 0:
        return RigidTrace((TraceStep(edge, ZERO, ONE),), frozenset(pauses))
    return RigidTrace((TraceStep(edge, ONE, ZERO),), frozenset(pauses))


def kind_generators(k: EdgeKind, edge: str) -> Family:
    """Expand a kind on a named edge into its generator family."""
    name = k.name
    if name == "natural":
        return Family(fragments=(Fragment(1), Fragment(-1)), flexible=ALL)
    if name == "directed":
        return Family(fragments=(Fragment(1),), flexible=ALL)
    if name == "one_jump":
        return Family(rigid=(_full(edge, 1),), flexible=frozenset({ZERO, ONE}))
    if name == "n_stop":
        anchors = [Fraction(i, k.n) for i in range(k.n + 1)]
        rigid = tuple(RigidTrace((TraceStep(edge, anchors[i], anchors[i + 1]),))
                      for i in range(k.n))
        return Family(rigid=rigid, flexible=frozenset(anchors))
    if name == "delayed_minus":
        return Family(rigid=(_full(edge, 1, {0}),), flexible=frozenset({ZERO, ONE}))
    if name == "delayed_plus":
        return Family(rigid=(_full(edge, 1, {1}),), flexible=frozenset({ZERO, ONE}))
    if name == "reversible_one_jump":
        return Family(rigid=(_full(edge, 1), _full(edge, -1)),
                      flexible=frozenset({ZERO, ONE}))
    if name == "siphon":
        return Family(rigid=(_full(edge, -1),), fragments=(Fragment(1),),
                      flexible=ALL)
    if name == "siphon_osc":
        return Family(rigid=(_full(edge, -1),),
                      fragments=(Fragment(1), Fragment(-1, start_not=frozenset({ONE}))),
                      flexible=ALL)
    if name == "still":
        return Family(flexible=ALL)
    if name == "discrete_c":
        return Family()
    if name == "custom":
        return k.family
    raise ModelError(f"unknown kind {name!r}")


def kind_flexible_points(k: EdgeKind, edge: str = "e"):
    """ALL, or the frozenset of flexible positions on the edge."""
    return kind_generators(k, edge).flexible


def kind_flexible_fragment(k: EdgeKind, edge: str = "e") -> tuple:
    """The kind's flexible fragments (possibly empty)."""
    return kind_generators(k, edge).fragments


def family_reversed(fam: Family) -> Family:
    """The family generating exactly the reversed paths (same coordinates)."""
    return Family(rigid=tuple(t.reversed() for t in fam.rigid),
                  fragments=tuple(f.reversed() for f in fam.fragments),
                  flexible=fam.flexible)


def family_union(f1: Family, f2: Family) -> Family:
    def key(x):
        return repr(x)
    rigid = tuple(sorted(set(f1.rigid) | set(f2.rigid), key=key))
    frags = tuple(sorted(set(f1.fragments) | set(f2.fragments), key=key))
    if f1.flexible == ALL or f2.flexible == ALL:
        flex = ALL
    else:
        flex = frozenset(f1.flexible | f2.flexible)
    return Family(rigid=rigid, fragments=frags, flexible=flex)
