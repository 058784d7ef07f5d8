"""The Z^t-graded coordinate ring of a product of projective spaces.

Variables come in factor blocks x_{j,0}, ..., x_{j,n_j}; the multidegree of
a monomial is the vector of per-factor exponent sums.  On top of the
polynomials sit direct sums of twisted line bundles and bounded complexes
of them with multihomogeneous polynomial differentials -- the input format
for every sheaf this package computes with.

Twist convention: the summand O(b) contributes, in twist a, the monomials
of multidegree a + b, and a map O(b) -> O(c) is multiplication by a
polynomial of degree c - b (zero whenever c - b has a negative coordinate).
The represented sheaf is the degree-0 cohomology sheaf of the complex;
exactness away from degree 0 is asserted by the caller, not verified.
"""

import itertools
from dataclasses import dataclass
from fractions import Fraction

from . import linalg
from .lattice import LatticeError, ProductSpace, vadd, vsub


class CoxError(ValueError):
    pass


class SchemaError(ValueError):
    """Raised on malformed JSON input; the message carries the path."""


def compositions(total, parts):
    """All tuples of `parts` nonnegative ints summing to `total`, lex order."""
    if parts == 0:
        if total == 0:
            yield ()
        return
    if parts == 1:
        if total >= 0:
            yield (total,)
        return
    for first in range(total + 1):
        for rest in compositions(total - first, parts - 1):
            yield (first,) + rest


def monomials(space, degree):
    """All exponent vectors of the given multidegree, lexicographic order.

    An exponent vector is a tuple of per-factor exponent tuples.  Empty when
    some coordinate of the degree is negative.
    """
    degree = space.degree(degree)
    if any(dj < 0 for dj in degree):
        return ()
    per_factor = [
        tuple(compositions(dj, nj + 1))
        for dj, nj in zip(degree, space.factor_dims)
    ]
    return tuple(itertools.product(*per_factor))


def expvec_degree(space, e):
    if len(e) != space.t:
        raise CoxError("exponent vector has %d factor blocks, expected %d" % (len(e), space.t))
    for block, nj in zip(e, space.factor_dims):
        if len(block) != nj + 1:
            raise CoxError("exponent block %r has wrong length" % (block,))
        if any(x < 0 for x in block):
            raise CoxError("negative exponent in %r" % (e,))
    return tuple(sum(block) for block in e)


class MultiHomogPoly:
    """A multihomogeneous polynomial: a declared multidegree plus a term map
    exponent-vector -> nonzero coefficient.  The zero polynomial keeps its
    declared degree so matrix shapes stay meaningful."""

    __slots__ = ("space", "field", "degree", "terms")

    def __init__(self, space, field, degree, terms):
        degree = space.degree(degree)
        clean = {}
        for e, c in terms.items():
            e = tuple(tuple(int(x) for x in block) for block in e)
            if expvec_degree(space, e) != degree:
                raise CoxError(
                    "term %r has degree %r, declared %r"
                    % (e, expvec_degree(space, e), degree)
                )
            c = field.coerce(c)
            if c == field.coerce(0):
                continue
            if e in clean:
                raise CoxError("duplicate exponent vector %r" % (e,))
            clean[e] = c
        if clean and any(dj < 0 for dj in degree):
            raise CoxError("nonzero polynomial with negative degree %r" % (degree,))
        self.space = space
        self.field = field
        self.degree = degree
        self.terms = clean

    @classmethod
    def zero(cls, space, field, degree):
        p = object.__new__(cls)
        p.space, p.field, p.degree, p.terms = space, field, tuple(degree), {}
        return p

    @classmethod
    def monomial(cls, space, field, coeff, e):
        e = tuple(tuple(block) for block in e)
        return cls(space, field, expvec_degree(space, e), {e: coeff})

    @classmethod
    def variable(cls, space, field, j, i, coeff=1):
        """The variable x_{j,i} (factor j, homogeneous coordinate i)."""
        e = tuple(
            tuple(1 if (jj == j and ii == i) else 0 for ii in range(nj + 1))
            for jj, nj in enumerate(space.factor_dims)
        )
        return cls.monomial(space, field, coeff, e)

    def is_zero(self):
        return not self.terms

    def __eq__(self, other):
        return (
            isinstance(other, MultiHomogPoly)
            and self.space == other.space
            and self.terms == other.terms
            and (self.terms or self.degree == other.degree)
        )

    def __hash__(self):
        return hash((self.space, self.degree, tuple(sorted(self.terms.items()))))

    def __neg__(self):
        return MultiHomogPoly(
            self.space, self.field, self.degree,
            {e: self.field.neg(c) for e, c in self.terms.items()},
        )

    def __add__(self, other):
        if self.degree != other.degree and self.terms and other.terms:
            raise CoxError("cannot add degrees %r and %r" % (self.degree, other.degree))
        terms = dict(self.terms)
        for e, c in other.terms.items():
            terms[e] = self.field.add(terms.get(e, self.field.coerce(0)), c)
        deg = self.degree if self.terms or not other.terms else other.degree
        return MultiHomogPoly(self.space, self.field, deg, terms)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        return poly_mult(self, other)

    def scale(self, c):
        c = self.field.coerce(c)
        return MultiHomogPoly(
            self.space, self.field, self.degree,
            {e: self.field.mul(co, c) for e, co in self.terms.items()},
        )

    def __repr__(self):
        if not self.terms:
            return "0[deg=%r]" % (self.degree,)
        bits = []
        for e in sorted(self.terms):
            mono = "*".join(
                "x%d_%d%s" % (j, i, "" if p == 1 else "^%d" % p)
                for j, block in enumerate(e)
                for i, p in enumerate(block)
                if p
            ) or "1"
            bits.append("%s*%s" % (self.terms[e], mono))
        return " + ".join(bits)

    def to_json(self):
        return {
            "degree": list(self.degree),
            "terms": [
                {"c": _coeff_to_json(c, self.field), "e": [list(block) for block in e]}
                for e, c in sorted(self.terms.items())
            ],
        }

    @classmethod
    def from_json(cls, space, field, obj, path="poly"):
        try:
            degree = tuple(obj["degree"])
            terms = {}
            for k, term in enumerate(obj.get("terms", [])):
                e = tuple(tuple(block) for block in term["e"])
                terms[e] = term["c"]
        except (KeyError, TypeError) as exc:
            raise SchemaError("%s: %s" % (path, exc)) from exc
        try:
            return cls(space, field, degree, terms)
        except (CoxError, LatticeError) as exc:
            raise SchemaError("%s: %s" % (path, exc)) from exc


def _coeff_to_json(c, field):
    if isinstance(c, Fraction):
        return str(c) if c.denominator != 1 else int(c)
    # Balanced lift keeps small coefficients portable across fields.
    c = int(c)
    if hasattr(field, "p") and c > field.p // 2:
        c -= field.p
    return c


def poly_mult(f, g):
    """Product of two multihomogeneous polynomials (degrees add)."""
    if f.space != g.space:
        raise CoxError("polynomials live on different spaces")
    degree = vadd(f.degree, g.degree)
    terms = {}
    zero = f.field.coerce(0)
    for e1, c1 in f.terms.items():
        for e2, c2 in g.terms.items():
            e = tuple(
                tuple(x + y for x, y in zip(b1, b2)) for b1, b2 in zip(e1, e2)
            )
            terms[e] = f.field.add(terms.get(e, zero), f.field.mul(c1, c2))
    return MultiHomogPoly(f.space, f.field, degree, terms)


@dataclass(frozen=True)
class FreeSum:
    """A finite direct sum of line bundles, recorded by its twists."""

    twists: tuple

    def __post_init__(self):
        object.__setattr__(
            self, "twists", tuple(tuple(int(x) for x in b) for b in self.twists)
        )

    def __len__(self):
        return len(self.twists)


class LineBundleComplex:
    """A bounded complex of twisted free sums.

    terms maps homological degree p to a FreeSum; diffs maps p to the
    matrix of the map term(p) -> term(p+1), stored as rows over target
    summands with entries MultiHomogPoly or None (zero).  The represented
    sheaf is the degree-0 cohomology sheaf; the caller asserts the complex
    is exact in every other degree.
    """

    def __init__(self, space, field, terms, diffs=None):
        self.space = space
        self.field = field
        self.terms = {int(p): FreeSum(tuple(tw)) for p, tw in terms.items()}
        self.diffs = {}
        for p, mat in (diffs or {}).items():
            self.diffs[int(p)] = tuple(tuple(row) for row in mat)
        self._validated = None

    @property
    def degrees(self):
        return sorted(self.terms)

    def summands(self, p):
        fs = self.terms.get(p)
        return fs.twists if fs else ()

    def entry(self, p, row, col):
        mat = self.diffs.get(p)
        if mat is None:
            return None
        e = mat[row][col]
        return None if (e is None or (hasattr(e, "is_zero") and e.is_zero())) else e

    def is_free_term(self):
        """True for a single term concentrated in degree 0: a plain direct
        sum of line bundles."""
        return set(self.terms) == {0} and not self.diffs

    def to_json(self):
        terms = [
            {"p": p, "twists": [list(b) for b in self.terms[p].twists]}
            for p in self.degrees
        ]
        diffs = []
        for p in sorted(self.diffs):
            rows = []
            for row in self.diffs[p]:
                rows.append([0 if e is None or e.is_zero() else e.to_json() for e in row])
            diffs.append({"p": p, "entries": rows})
        return {
            "space": self.space.to_json(),
            "field": _field_name(self.field),
            "complex": {"terms": terms, "diffs": diffs},
        }

    @classmethod
    def from_json(cls, obj, field_override=None):
        try:
            space = ProductSpace.from_json(obj["space"])
        except (KeyError, TypeError, LatticeError) as exc:
            raise SchemaError("space: %s" % exc) from exc
        try:
            field = field_override or linalg.parse_field(obj.get("field", "p:%d" % linalg.DEFAULT_PRIME))
        except linalg.FieldError as exc:
            raise SchemaError("field: %s" % exc) from exc
        body = obj.get("complex")
        if not isinstance(body, dict):
            raise SchemaError("complex: missing or not an object")
        terms = {}
        try:
            for entry in body["terms"]:
                terms[int(entry["p"])] = [space.degree(b) for b in entry["twists"]]
        except (KeyError, TypeError, ValueError, LatticeError) as exc:
            raise SchemaError("complex.terms: %s" % exc) from exc
        diffs = {}
        for d, dent in enumerate(body.get("diffs", [])):
            try:
                p = int(dent["p"])
                rows = dent["entries"]
            except (KeyError, TypeError, ValueError) as exc:
                raise SchemaError("complex.diffs[%d]: %s" % (d, exc)) from exc
            mat = []
            for r, row in enumerate(rows):
                out = []
                for c, e in enumerate(row):
                    if e == 0 or e is None:
                        out.append(None)
                    else:
                        out.append(
                            MultiHomogPoly.from_json(
                                space, field, e,
                                path="complex.diffs[%d].entries[%d][%d]" % (d, r, c),
                            )
                        )
                mat.append(tuple(out))
            diffs[p] = tuple(mat)
        return cls(space, field, terms, diffs)


def _field_name(field):
    return field.name


def free_complex(space, twists, field=None):
    """The complex with a single term in degree 0: the sheaf is the direct
    sum of the given twists."""
    return LineBundleComplex(space, field or linalg.default_field(), {0: tuple(twists)})


def validate_complex(C):
    """Structural check of a line-bundle complex.

    Verifies matrix shapes, homogeneity of every entry (declared degree
    equal to target twist minus source twist, entry zero when that has a
    negative coordinate) and d o d = 0 symbolically.  Returns a list of
    violation tuples (p, row, col, kind, detail); empty means ok.  Exactness
    away from degree 0 is not checked.
    """
    if C._validated is not None:
        return C._validated
    out = []
    for p, mat in sorted(C.diffs.items()):
        src = C.summands(p)
        tgt = C.summands(p + 1)
        if len(mat) != len(tgt) or any(len(row) != len(src) for row in mat):
            out.append((p, -1, -1, "shape",
                        "matrix is %dx%d, expected %dx%d"
                        % (len(mat), len(mat[0]) if mat else 0, len(tgt), len(src))))
            continue
        for r, row in enumerate(mat):
            for c, e in enumerate(row):
                if e is None or e.is_zero():
                    continue
                want = vsub(tgt[r], src[c])
                if e.degree != want:
                    out.append((p, r, c, "degree",
                                "entry degree %r, expected %r" % (e.degree, want)))
                elif any(x < 0 for x in want):
                    out.append((p, r, c, "degree",
                                "nonzero entry where twist step %r is negative" % (want,)))
    # d o d = 0, symbolically.
    for p in sorted(C.diffs):
        if p + 1 not in C.diffs:
            continue
        d1, d2 = C.diffs[p], C.diffs[p + 1]
        src = C.summands(p)
        mid = C.summands(p + 1)
        tgt = C.summands(p + 2)
        if len(d1) != len(mid) or len(d2) != len(tgt):
            continue  # shape violation already recorded
        for r in range(len(tgt)):
            for c in range(len(src)):
                acc = None
                for s in range(len(mid)):
                    e2 = C.entry(p + 1, r, s)
                    e1 = C.entry(p, s, c)
                    if e1 is None or e2 is None:
                        continue
                    prod = poly_mult(e2, e1)
                    acc = prod if acc is None else acc + prod
                if acc is not None and not acc.is_zero():
                    out.append((p, r, c, "dd", "composite %r is nonzero" % (acc,)))
    C._validated = out
    return out


def graded_basis(space, S, a):
    """Ordered monomial basis of a free sum in twist a.

    Summand O(b) contributes the monomials of multidegree a + b (none when
    a + b has a negative coordinate).  Tokens are (summand index, exponent
    vector), summand-major then lexicographic, so every assembled matrix is
    reproducible bit for bit.
    """
    a = space.degree(a)
    S = S if isinstance(S, FreeSum) else FreeSum(tuple(S))
    basis = []
    for s, b in enumerate(S.twists):
        for e in monomials(space, vadd(a, b)):
            basis.append((s, e))
    return tuple(basis)


def mult_matrix(entry, source_twist, target_twist, a):
    """Matrix of multiplication by a polynomial entry, in twist a.

    Maps the monomial basis of O(source_twist) in twist a to the basis of
    O(target_twist); the entry must have degree target - source unless it
    is zero.  Rows are indexed by target monomials, columns by source
    monomials.
    """
    space = entry.space
    src = space.degree(source_twist)
    tgt = space.degree(target_twist)
    want = vsub(tgt, src)
    if not entry.is_zero() and entry.degree != want:
        raise CoxError(
            "entry degree %r does not match twist step %r" % (entry.degree, want)
        )
    src_basis = monomials(space, vadd(a, src))
    tgt_basis = monomials(space, vadd(a, tgt))
    tgt_index = {e: i for i, e in enumerate(tgt_basis)}
    zero = entry.field.coerce(0)
    rows = [[zero] * len(src_basis) for _ in tgt_basis]
    for c, e in enumerate(src_basis):
        for ev, coeff in entry.terms.items():
            prod = tuple(
                tuple(x + y for x, y in zip(b1, b2)) for b1, b2 in zip(e, ev)
            )
            r = tgt_index[prod]
            rows[r][c] = entry.field.add(rows[r][c], coeff)
    return rows


def syzygies_in_window(space, field, source_twists, target_twists, entries, window):
    """Degree-by-degree kernels of a homogeneous polynomial matrix.

    entries is a matrix (rows over target summands) of MultiHomogPoly or
    None describing a map (+) O(b_s) -> (+) O(c_r).  For every twist a in
    the window the assembled multiplication matrix is solved exactly; the
    kernel basis is reported as tuples of polynomials, one of degree
    a + b_s per source summand.  Completeness holds only inside the window.
    """
    source_twists = [space.degree(b) for b in source_twists]
    target_twists = [space.degree(c) for c in target_twists]
    results = {}
    for a in window.twists():
        src_bases = [monomials(space, vadd(a, b)) for b in source_twists]
        tgt_bases = [monomials(space, vadd(a, c)) for c in target_twists]
        ncols = sum(len(bb) for bb in src_bases)
        nrows = sum(len(bb) for bb in tgt_bases)
        if ncols == 0:
            continue
        rows = [[field.coerce(0)] * ncols for _ in range(nrows)]
        col0 = 0
        for s, b in enumerate(source_twists):
            row0 = 0
            for r, c_tw in enumerate(target_twists):
                e = entries[r][s]
                if e is not None and not e.is_zero():
                    block = mult_matrix(e, b, c_tw, a)
                    for i, brow in enumerate(block):
                        for j, val in enumerate(brow):
                            rows[row0 + i][col0 + j] = val
                row0 += len(tgt_bases[r])
            col0 += len(src_bases[s])
        kernel = linalg.nullspace(rows, ncols, field)
        if not kernel:
            continue
        vectors = []
        for v in kernel:
            comps = []
            col0 = 0
            for s, b in enumerate(source_twists):
                terms = {}
                for j, e in enumerate(src_bases[s]):
                    c = v[col0 + j]
                    if c:
                        terms[e] = c
                col0 += len(src_bases[s])
                deg = vadd(a, b)
                if terms:
                    comps.append(MultiHomogPoly(space, field, deg, terms))
                else:
                    comps.append(MultiHomogPoly.zero(space, field, deg))
            vectors.append(tuple(comps))
        results[a] = vectors
    return results
