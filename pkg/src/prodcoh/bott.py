"""Closed-form cohomology of line bundles on a product of projective spaces.

On a single factor P^n only two groups of O(a) can be nonzero:

    h^0 = C(a+n, n)   for a >= 0,
    h^n = C(-a-1, n)  for a <= -n-1,

and everything in between vanishes.  On a product the Kunneth formula
multiplies the factor contributions, so O(a_1, ..., a_t) has at most one
nonzero group, in degree sum(n_j) over the set S of factors whose twist is
in the top range, and only when every factor outside S has a_j >= 0.

Dimensions of line-bundle cohomology do not depend on the base field.
"""

import math

from .lattice import canonical_twist


def binom(n, k):
    """Combinatorial binomial coefficient, zero outside 0 <= k <= n."""
    if k < 0 or n < 0 or k > n:
        return 0
    return math.comb(n, k)


def poly_binom(x, n):
    """C(x, n) as the degree-n polynomial x(x-1)...(x-n+1)/n!, any integer x.

    Used for Euler characteristics, where the polynomial extension avoids
    the sign ambiguity of negative-argument binomials.
    """
    num = 1
    for i in range(n):
        num *= x - i
    return num // math.factorial(n)


def factor_h(n, a):
    """Cohomology vector (h^0, ..., h^n) of O(a) on P^n."""
    if n < 1:
        raise ValueError("factor dimension must be >= 1")
    h = [0] * (n + 1)
    if a >= 0:
        h[0] = binom(a + n, n)
    elif a <= -n - 1:
        h[n] = binom(-a - 1, n)
    return tuple(h)


def line_bundle_h(space, a):
    """Cohomology vector (h^0, ..., h^m) of O(a) on the product."""
    a = space.degree(a)
    h = [0] * (space.m + 1)
    sig = signature(space, a)
    if sig is None:
        return tuple(h)
    i, neg = sig
    dim = 1
    for j, (nj, aj) in enumerate(zip(space.factor_dims, a)):
        if j in neg:
            dim *= binom(-aj - 1, nj)
        else:
            dim *= binom(aj + nj, nj)
    h[i] = dim
    return tuple(h)


def signature(space, a):
    """Sparse view of line-bundle cohomology.

    Returns None when every group vanishes, otherwise (i, S) with i the
    unique nonzero cohomological index and S the frozenset of factors whose
    twist sits in the top range.  Intermediate means 0 < i < m.
    """
    a = space.degree(a)
    neg = frozenset(
        j for j, (nj, aj) in enumerate(zip(space.factor_dims, a)) if aj <= -nj - 1
    )
    for j, aj in enumerate(a):
        if j not in neg and aj < 0:
            return None
    i = sum(space.factor_dims[j] for j in neg)
    return (i, neg)


def is_intermediate(space, sig):
    return sig is not None and 0 < sig[0] < space.m


def euler_characteristic(space, a):
    """chi(O(a)) = prod_j C(a_j + n_j, n_j), polynomial binomials."""
    a = space.degree(a)
    chi = 1
    for nj, aj in zip(space.factor_dims, a):
        chi *= poly_binom(aj + nj, nj)
    return chi


def serre_dual_twist(space, a):
    """The twist paired with a under Serre duality: -a + canonical."""
    return tuple(w - x for w, x in zip(canonical_twist(space), space.degree(a)))
