"""Dimension-level bookkeeping for Tate resolutions.

For a sheaf F the Tate resolution is a minimal exact complex over the
exterior algebra whose term in homological degree d collects every
H^{d-|a|}(F(a)).  Only dimensions are tracked here: the term of internal
degree b receives h^i(F(a)) with weight prod_j C(n_j+1, b_j-a_j) from each
twist a in the box 0 <= b_j - a_j <= n_j + 1, placed in homological degree
d = |a| + i.  Exactness of the resolution -- and of its quadrant strands
and corner cones -- forces every alternating sum of those dimensions to
vanish, which turns a cohomology table into a pile of verifiable checksums.

The vanishing-propagation rule is the minimality consequence along a
one-factor strand: if H^n(F(a)), H^{n-1}(F(a+e_j)), ..., H^{n-n_j}(F(a+n_j e_j))
all vanish, then H^n(F(a-e_j)) vanishes too.  Applied to a computed window
it extends certified zeros in the decreasing directions and cross-checks
the input table; it never defaults a cell to zero silently.
"""

import csv
import io

from .bott import binom
from .lattice import LatticeError, ProductSpace, Window

STATUS_COMPUTED = "computed"
STATUS_INFERRED = "inferred_zero"


class TateCoverageError(ValueError):
    """A checksum needed twists outside the table's certified knowledge."""

    def __init__(self, missing):
        self.missing = tuple(sorted(set(missing)))
        super().__init__(
            "table does not cover required twists: %s"
            % ", ".join(repr(a) for a in self.missing)
        )


class StrandInconsistency(ValueError):
    """Propagation derived zero at a cell the table says is nonzero."""

    def __init__(self, cell, dim, antecedents):
        self.cell = cell
        self.dim = dim
        self.antecedents = tuple(antecedents)
        super().__init__(
            "strand rule forces h^%d(F(%r)) = 0 but the table has %d"
            % (cell[1], cell[0], dim)
        )


class CohomologyTable:
    """A window of cohomology dimensions h^i(F(a)) with per-cell provenance.

    Cells are keyed (a, i); a stored cell is trusted knowledge, either
    computed by an engine or inferred zero by the strand rule (cells may
    sit outside the window after propagation).  Absent cells are unknown.
    Indices outside [0, m] vanish for every sheaf and count as known zero
    without being stored.
    """

    def __init__(self, space, window, cells=None):
        self.space = space
        self.window = window
        if len(window.lo) != space.t:
            raise LatticeError("window dimension does not match space")
        self.cells = dict(cells or {})

    def set_cell(self, a, i, dim, status=STATUS_COMPUTED):
        a = self.space.degree(a)
        if dim < 0:
            raise ValueError("negative dimension at %r" % ((a, i),))
        if status == STATUS_INFERRED and dim != 0:
            raise ValueError("inferred cells must be zero")
        self.cells[(a, int(i))] = (int(dim), status)

    def get(self, a, i):
        """(dim, status) or None if the cell is unknown."""
        if i < 0 or i > self.space.m:
            return (0, STATUS_COMPUTED)
        return self.cells.get((tuple(a), i))

    def known_dim(self, a, i):
        cell = self.get(a, i)
        return None if cell is None else cell[0]

    def known_zero(self, a, i):
        cell = self.get(a, i)
        return cell is not None and cell[0] == 0

    def h_vector(self, a):
        """The full (h^0..h^m) vector at a, or None if any cell is unknown."""
        out = []
        for i in range(self.space.m + 1):
            cell = self.get(a, i)
            if cell is None:
                return None
            out.append(cell[0])
        return tuple(out)

    def copy(self):
        return CohomologyTable(self.space, self.window, self.cells)

    def __eq__(self, other):
        return (
            isinstance(other, CohomologyTable)
            and self.space == other.space
            and self.window == other.window
            and self.cells == other.cells
        )

    def sorted_cells(self):
        return sorted(self.cells.items())

    def to_json(self):
        return {
            "space": self.space.to_json(),
            "window": self.window.to_json(),
            "cells": [
                {"a": list(a), "i": i, "dim": dim, "status": status}
                for (a, i), (dim, status) in self.sorted_cells()
            ],
        }

    @classmethod
    def from_json(cls, obj):
        space = ProductSpace.from_json(obj["space"])
        window = Window.from_json(obj["window"])
        table = cls(space, window)
        for cell in obj["cells"]:
            table.set_cell(tuple(cell["a"]), cell["i"], cell["dim"], cell["status"])
        return table

    def to_csv(self):
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(
            ["a%d" % (j + 1) for j in range(self.space.t)] + ["i", "dim", "status"]
        )
        for (a, i), (dim, status) in self.sorted_cells():
            writer.writerow(list(a) + [i, dim, status])
        return buf.getvalue()


class TateTermProfile:
    """Dimensions of the Tate terms in one internal degree b, per
    homological degree d."""

    def __init__(self, b, dims):
        self.b = tuple(b)
        self.dims = {int(d): int(v) for d, v in dims.items() if v}

    def __eq__(self, other):
        return (
            isinstance(other, TateTermProfile)
            and self.b == other.b
            and self.dims == other.dims
        )

    def __repr__(self):
        return "TateTermProfile(b=%r, dims=%r)" % (self.b, dict(sorted(self.dims.items())))

    def checksum(self):
        return sum((-1) ** (d % 2) * v for d, v in self.dims.items())

    def to_json(self):
        return {"b": list(self.b), "dims": {str(d): v for d, v in sorted(self.dims.items())}}


def support_box(space, b):
    """Twists contributing to internal degree b: 0 <= b_j - a_j <= n_j + 1."""
    b = space.degree(b)
    lo = tuple(bj - nj - 1 for bj, nj in zip(b, space.factor_dims))
    return Window(lo, b)


def _weight(space, b, a):
    w = 1
    for nj, bj, aj in zip(space.factor_dims, b, a):
        w *= binom(nj + 1, bj - aj)
    return w


def _gather(T, b, keep=None):
    """Accumulate weighted dimensions over the support box, optionally
    filtered by a twist predicate.  Raises on unknown cells."""
    space = T.space
    b = space.degree(b)
    dims = {}
    missing = []
    for a in support_box(space, b).twists():
        if keep is not None and not keep(a):
            continue
        w = _weight(space, b, a)
        if w == 0:
            continue
        for i in range(space.m + 1):
            cell = T.get(a, i)
            if cell is None:
                missing.append(a)
                break
            if cell[0]:
                d = sum(a) + i
                dims[d] = dims.get(d, 0) + w * cell[0]
    if missing:
        raise TateCoverageError(missing)
    return dims


def tate_term_dims(T, b):
    """The dimension profile of the Tate term in internal degree b."""
    return TateTermProfile(T.space.degree(b), _gather(T, b))


def tate_checksum(T, b):
    """Alternating sum over the profile of internal degree b; exactness of
    the resolution predicts 0 whenever the support box is covered."""
    return tate_term_dims(T, b).checksum()


def strand_is_guaranteed(space, I, J, K):
    """Exactness of the quadrant strand is guaranteed only when the three
    index sets do not exhaust the factors."""
    return len(set(I) | set(J) | set(K)) < space.t


def strand_checksum(T, c, I, J, K, b):
    """Alternating dimension sum of the quadrant strand at c restricted to
    internal degree b: a_i < c_i on I, = c_i on J, >= c_i on K (factor
    indices are 0-based).  Predicted 0 when I|J|K is a proper subset of the
    factors; the value is still computed otherwise, without the guarantee.
    """
    space = T.space
    c = space.degree(c)
    I, J, K = frozenset(I), frozenset(J), frozenset(K)
    if (I & J) or (I & K) or (J & K):
        raise ValueError("I, J, K must be disjoint")

    def keep(a):
        for j in I:
            if not a[j] < c[j]:
                return False
        for j in J:
            if a[j] != c[j]:
                return False
        for j in K:
            if not a[j] >= c[j]:
                return False
        return True

    dims = _gather(T, b, keep)
    return sum((-1) ** (d % 2) * v for d, v in dims.items())


def corner_checksum(T, c, b):
    """Alternating sum over the corner cone at c in internal degree b.

    The cone joins the strictly-lower quadrant (shifted so its terms land
    one degree higher, t steps back) to the upper quadrant, and is exact;
    the lower part therefore enters the checksum with sign (-1)^(t-1).
    """
    space = T.space
    c = space.degree(c)

    def upper(a):
        return all(x >= y for x, y in zip(a, c))

    def lower(a):
        return all(x < y for x, y in zip(a, c))

    dims_up = _gather(T, b, upper)
    dims_lo = _gather(T, b, lower)
    chi_up = sum((-1) ** (d % 2) * v for d, v in dims_up.items())
    chi_lo = sum((-1) ** (d % 2) * v for d, v in dims_lo.items())
    return chi_up + (-1) ** ((space.t - 1) % 2) * chi_lo


def strand_propagate(T, extend=None):
    """Close a table under the strand vanishing rule.

    Runs the per-factor rule to a fixed point: whenever the n_j+1 cells
    h^n(F(a)), h^{n-1}(F(a+e_j)), ..., h^{n-n_j}(F(a+n_j e_j)) are all
    known zero, the cell h^n(F(a-e_j)) is marked inferred_zero.  New cells
    may extend below the window by at most `extend` steps per factor
    (default n_j + 1); pass 0 to forbid extension.  A derived zero clashing
    with a computed nonzero cell raises StrandInconsistency, which signals
    an invalid input table since the rule holds for every coherent sheaf.
    Returns a new table; the input is not modified.
    """
    space = T.space
    if extend is None:
        margins = tuple(nj + 1 for nj in space.factor_dims)
    elif isinstance(extend, int):
        margins = (extend,) * space.t
    else:
        margins = tuple(int(x) for x in extend)
    lo = tuple(l - mg for l, mg in zip(T.window.lo, margins))
    hi = T.window.hi
    box = Window(lo, hi)
    out = T.copy()
    m = space.m

    def known_zero(a, i):
        if i < 0 or i > m:
            return True
        cell = out.cells.get((a, i))
        return cell is not None and cell[0] == 0

    changed = True
    while changed:
        changed = False
        for j in range(space.t):
            nj = space.factor_dims[j]
            step = tuple(1 if jj == j else 0 for jj in range(space.t))
            for a in box.twists():
                target = tuple(x - s for x, s in zip(a, step))
                if target not in box:
                    continue
                for n in range(m + 1):
                    if (target, n) in out.cells:
                        continue
                    ante = [
                        (tuple(x + k * s for x, s in zip(a, step)), n - k)
                        for k in range(nj + 1)
                    ]
                    if all(known_zero(aa, ii) for aa, ii in ante):
                        out.cells[(target, n)] = (0, STATUS_INFERRED)
                        changed = True
    # Consistency: re-run the rule over computed cells and flag clashes.
    for j in range(space.t):
        nj = space.factor_dims[j]
        step = tuple(1 if jj == j else 0 for jj in range(space.t))
        for (a, n), (dim, status) in T.cells.items():
            if dim == 0 or status != STATUS_COMPUTED:
                continue
            src = tuple(x + s for x, s in zip(a, step))
            ante = [
                (tuple(x + k * s for x, s in zip(src, step)), n - k)
                for k in range(nj + 1)
            ]
            if all(known_zero(aa, ii) for aa, ii in ante):
                raise StrandInconsistency((a, n), dim, ante)
    return out
