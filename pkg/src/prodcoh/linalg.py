"""Exact rank and kernel computations over prime fields and the rationals.

Prime-field elimination runs on numpy int64 arrays (the default modulus
65521 keeps every intermediate product far below 2**63).  Rational ranks go
through fraction-free (Bareiss) elimination on integer matrices after
clearing denominators; rational kernels use Fraction back-substitution.
Pivoting is deterministic everywhere: first nonzero entry in row-major
order.
"""

from fractions import Fraction

import numpy as np

DEFAULT_PRIME = 65521


class FieldError(ValueError):
    pass


def _is_prime(p):
    if p < 2:
        return False
    i = 2
    while i * i <= p:
        if p % i == 0:
            return False
        i += 1
    return True


class PrimeField:
    """Arithmetic in Z/p for an odd prime p; elements are ints in [0, p)."""

    def __init__(self, p):
        p = int(p)
        if p <= 2 or not _is_prime(p):
            raise FieldError("modulus must be an odd prime, got %d" % p)
        self.p = p

    @property
    def name(self):
        return "p:%d" % self.p

    def coerce(self, x):
        if isinstance(x, str):
            x = Fraction(x)
        if isinstance(x, Fraction):
            den = x.denominator % self.p
            if den == 0:
                raise FieldError("denominator divisible by %d" % self.p)
            return (x.numerator % self.p) * pow(den, -1, self.p) % self.p
        return int(x) % self.p

    def add(self, a, b):
        return (a + b) % self.p

    def mul(self, a, b):
        return (a * b) % self.p

    def neg(self, a):
        return (-a) % self.p

    def inv(self, a):
        if a % self.p == 0:
            raise ZeroDivisionError("inverse of 0 in F_%d" % self.p)
        return pow(a, -1, self.p)

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self):
        return hash(("PrimeField", self.p))

    def __repr__(self):
        return "PrimeField(%d)" % self.p


class RationalField:
    """The field Q; elements are fractions.Fraction."""

    name = "q"

    def coerce(self, x):
        return Fraction(x)

    def add(self, a, b):
        return a + b

    def mul(self, a, b):
        return a * b

    def neg(self, a):
        return -a

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError("inverse of 0 in Q")
        return 1 / Fraction(a)

    def __eq__(self, other):
        return isinstance(other, RationalField)

    def __hash__(self):
        return hash("RationalField")

    def __repr__(self):
        return "RationalField()"


RATIONALS = RationalField()


def default_field():
    return PrimeField(DEFAULT_PRIME)


def parse_field(spec):
    """Parse a field flag: "q" for the rationals, "p:<prime>" for F_p."""
    spec = spec.strip()
    if spec == "q":
        return RATIONALS
    if spec == "p":
        return default_field()
    if spec.startswith("p:"):
        return PrimeField(int(spec[2:]))
    raise FieldError("unrecognized field %r (expected 'q' or 'p:<prime>')" % spec)


def rank(rows, ncols, field):
    """Rank of a matrix given as a list of rows over the field."""
    if isinstance(field, PrimeField):
        if not rows or ncols == 0:
            return 0
        a = np.array([[int(x) for x in r] for r in rows], dtype=np.int64) % field.p
        return _rank_mod_p(a, field.p)
    return _rank_bareiss([[Fraction(x) for x in r] for r in rows], ncols)


def nullspace(rows, ncols, field):
    """Basis of the right kernel, as a list of length-ncols vectors.

    Vectors correspond to the free columns of the reduced row echelon form,
    in ascending column order, so the result is deterministic.
    """
    if ncols == 0:
        return []
    if not rows:
        rows = [[0] * ncols]
    if isinstance(field, PrimeField):
        a = np.array([[int(x) for x in r] for r in rows], dtype=np.int64) % field.p
        return _nullspace_mod_p(a, field.p)
    return _nullspace_rational([[Fraction(x) for x in r] for r in rows], ncols)


def rank_mod_p_array(a, p):
    """Rank of a numpy int64 matrix with entries already reduced mod p."""
    if a.size == 0:
        return 0
    return _rank_mod_p(a.copy(), p)


def _rank_mod_p(a, p):
    nrows, ncols = a.shape
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        col = a[r:, c]
        nz = np.nonzero(col)[0]
        if nz.size == 0:
            continue
        piv = r + int(nz[0])
        if piv != r:
            a[[r, piv]] = a[[piv, r]]
        inv = pow(int(a[r, c]), -1, p)
        a[r] = a[r] * inv % p
        below = a[r + 1 :, c]
        hit = np.nonzero(below)[0]
        if hit.size:
            a[r + 1 + hit] = (a[r + 1 + hit] - np.outer(below[hit], a[r])) % p
        r += 1
    return r


def _rref_mod_p(a, p):
    """Reduced row echelon form in place; returns the pivot column list."""
    nrows, ncols = a.shape
    pivots = []
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        col = a[r:, c]
        nz = np.nonzero(col)[0]
        if nz.size == 0:
            continue
        piv = r + int(nz[0])
        if piv != r:
            a[[r, piv]] = a[[piv, r]]
        inv = pow(int(a[r, c]), -1, p)
        a[r] = a[r] * inv % p
        other = a[:, c].copy()
        other[r] = 0
        hit = np.nonzero(other)[0]
        if hit.size:
            a[hit] = (a[hit] - np.outer(other[hit], a[r])) % p
        pivots.append(c)
        r += 1
    return pivots


def _nullspace_mod_p(a, p):
    nrows, ncols = a.shape
    a = a.copy()
    pivots = _rref_mod_p(a, p)
    pivot_set = set(pivots)
    free = [c for c in range(ncols) if c not in pivot_set]
    basis = []
    for f in free:
        v = [0] * ncols
        v[f] = 1
        for r, c in enumerate(pivots):
            v[c] = (-int(a[r, f])) % p
        basis.append(v)
    return basis


def _rank_bareiss(rows, ncols):
    # Clear denominators row by row; rank is unchanged.
    m = []
    for row in rows:
        den = 1
        for x in row:
            den = den * x.denominator // _gcd(den, x.denominator)
        m.append([int(x * den) for x in row])
    nrows = len(m)
    prev = 1
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        piv = next((i for i in range(r, nrows) if m[i][c]), None)
        if piv is None:
            continue
        if piv != r:
            m[r], m[piv] = m[piv], m[r]
        for i in range(r + 1, nrows):
            mic = m[i][c]
            mrc = m[r][c]
            for j in range(c + 1, ncols):
                m[i][j] = (mrc * m[i][j] - mic * m[r][j]) // prev
            m[i][c] = 0
        prev = m[r][c]
        r += 1
    return r


def _gcd(a, b):
    while b:
        a, b = b, a % b
    return a if a else 1


def _nullspace_rational(rows, ncols):
    m = [list(r) for r in rows]
    nrows = len(m)
    pivots = []
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        piv = next((i for i in range(r, nrows) if m[i][c]), None)
        if piv is None:
            continue
        if piv != r:
            m[r], m[piv] = m[piv], m[r]
        inv = 1 / m[r][c]
        m[r] = [x * inv for x in m[r]]
        for i in range(nrows):
            if i != r and m[i][c]:
                f = m[i][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
    pivot_set = set(pivots)
    free = [c for c in range(ncols) if c not in pivot_set]
    basis = []
    for f in free:
        v = [Fraction(0)] * ncols
        v[f] = Fraction(1)
        for r, c in enumerate(pivots):
            v[c] = -m[r][f]
        basis.append(v)
    return basis
