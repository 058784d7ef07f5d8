"""Degree lattice Z^t for a product of projective spaces.

Twists of line bundles on P^{n_1} x ... x P^{n_t} are indexed by integer
vectors of length t.  This module provides the componentwise partial order,
the canonical twist, and the combinatorics of "safe" twists: the twists a
such that O(k*d_1, ..., k*d_t)(a) has no intermediate cohomology for any
integer k.  Safe twists form the test region of the splitting criterion in
``splitter``.
"""

import itertools
from dataclasses import dataclass


class LatticeError(ValueError):
    pass


def vadd(a, b):
    return tuple(x + y for x, y in zip(a, b))


def vsub(a, b):
    return tuple(x - y for x, y in zip(a, b))


def vneg(a):
    return tuple(-x for x in a)


def vscale(k, a):
    return tuple(k * x for x in a)


@dataclass(frozen=True)
class ProductSpace:
    """P^{n_1} x ... x P^{n_t}, recorded by its factor dimensions."""

    factor_dims: tuple

    def __post_init__(self):
        dims = tuple(int(n) for n in self.factor_dims)
        if not dims:
            raise LatticeError("a product space needs at least one factor")
        if any(n < 1 for n in dims):
            raise LatticeError("factor dimensions must be >= 1, got %r" % (dims,))
        object.__setattr__(self, "factor_dims", dims)

    @property
    def t(self):
        return len(self.factor_dims)

    @property
    def m(self):
        return sum(self.factor_dims)

    def degree(self, a):
        """Validate a multidegree and normalize it to a tuple of ints."""
        a = tuple(int(x) for x in a)
        if len(a) != self.t:
            raise LatticeError(
                "multidegree %r has length %d, expected %d" % (a, len(a), self.t)
            )
        return a

    def to_json(self):
        return {"factor_dims": list(self.factor_dims)}

    @classmethod
    def from_json(cls, obj):
        return cls(tuple(obj["factor_dims"]))


@dataclass(frozen=True)
class Polarization:
    """A very ample multidegree d = (d_1, ..., d_t), all d_j >= 1.

    O(kH) means O(k*d_1, ..., k*d_t).
    """

    d: tuple

    def __post_init__(self):
        d = tuple(int(x) for x in self.d)
        if any(x < 1 for x in d):
            raise LatticeError("polarization degrees must be >= 1, got %r" % (d,))
        object.__setattr__(self, "d", d)

    def times(self, k):
        return vscale(k, self.d)


@dataclass(frozen=True)
class Window:
    """A closed box lo <= a <= hi in Z^t.  All region and table operations
    are window-relative and never extrapolate silently."""

    lo: tuple
    hi: tuple

    def __post_init__(self):
        lo = tuple(int(x) for x in self.lo)
        hi = tuple(int(x) for x in self.hi)
        if len(lo) != len(hi):
            raise LatticeError("window corners have mismatched lengths")
        if any(l > h for l, h in zip(lo, hi)):
            raise LatticeError("empty window: lo=%r hi=%r" % (lo, hi))
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)

    def __contains__(self, a):
        return all(l <= x <= h for l, x, h in zip(self.lo, a, self.hi))

    def twists(self):
        """All lattice points of the box in lexicographic order."""
        ranges = [range(l, h + 1) for l, h in zip(self.lo, self.hi)]
        return itertools.product(*ranges)

    @property
    def size(self):
        n = 1
        for l, h in zip(self.lo, self.hi):
            n *= h - l + 1
        return n

    def to_json(self):
        return {"lo": list(self.lo), "hi": list(self.hi)}

    @classmethod
    def from_json(cls, obj):
        return cls(tuple(obj["lo"]), tuple(obj["hi"]))


def leq(a, b):
    """Componentwise partial order a <= b."""
    if len(a) != len(b):
        raise LatticeError("cannot compare degrees of different lengths")
    return all(x <= y for x, y in zip(a, b))


def lt(a, b):
    """Strict partial order: a <= b and a != b."""
    return leq(a, b) and tuple(a) != tuple(b)


def canonical_twist(space):
    """The twist of the canonical sheaf: (-n_1-1, ..., -n_t-1)."""
    return tuple(-n - 1 for n in space.factor_dims)


def intermediate_k_range(space, d, a):
    """All integers k for which O(kH)(a) has nonzero intermediate cohomology.

    Mixing needs one factor in the global-sections range (k*d_j + a_j >= 0)
    and another in the top range (k*d_i + a_i <= -n_i - 1), which pins k to
    the interval [min_j ceil(-a_j/d_j), max_i floor((-a_i-n_i-1)/d_i)].
    Every k in that interval is tested exactly; outside it no factor pair
    can have opposite signs.  Returns a sorted tuple, possibly empty.
    """
    from . import bott

    a = space.degree(a)
    dd = d.d if isinstance(d, Polarization) else Polarization(d).d
    if len(dd) != space.t:
        raise LatticeError("polarization length does not match space")
    lo = min(-(aj // dj) for aj, dj in zip(a, dd))
    hi = max((-aj - nj - 1) // dj for aj, nj, dj in zip(a, space.factor_dims, dd))
    ks = []
    for k in range(lo, hi + 1):
        sig = bott.signature(space, vadd(vscale(k, dd), a))
        if sig is not None and 0 < sig[0] < space.m:
            ks.append(k)
    return tuple(ks)


def safe_region(space, d, window):
    """Twists a in the window for which no O(kH)(a) has intermediate
    cohomology -- the region the splitting hypothesis quantifies over."""
    return frozenset(
        a for a in window.twists() if not intermediate_k_range(space, d, a)
    )


def render_region(cells, window):
    """ASCII grid of a 2-D set of twists.

    Columns are the first coordinate ascending left to right, rows the
    second coordinate descending top to bottom; members are '#', the rest
    '.'.  Higher-dimensional regions must be sliced to 2-D first.
    """
    if len(window.lo) != 2:
        raise LatticeError("render_region draws 2-D windows only; slice first")
    cells = set(tuple(c) for c in cells)
    lines = []
    for a2 in range(window.hi[1], window.lo[1] - 1, -1):
        row = "".join(
            "#" if (a1, a2) in cells else "."
            for a1 in range(window.lo[0], window.hi[0] + 1)
        )
        lines.append(row)
    return "\n".join(lines)
