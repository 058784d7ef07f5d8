"""Decision procedure for splitting into a direct sum of O(kH).

A torsion-free sheaf F on a product of projective spaces splits as a sum
of powers O(kH) of a very ample O(H) = O(d_1, ..., d_t) exactly when F has
no intermediate cohomology at any twist where the bundles O(kH) themselves
have none (the safe region).  The procedure works window-by-window:

1. compute/accept a cohomology table, close it under strand propagation,
   and check the monotonicity of top cohomology (a failed check means the
   table does not come from a sheaf);
2. scan the safe region for intermediate cohomology: a hit is a certified
   NonSplit witness;
3. find the maximal twists with nonzero h^m; for a splitting candidate one
   of them must be aligned, i.e. of the form k*d + canonical twist;
4. extract summand multiplicities by descending h^0 counts and verify the
   whole window against the closed-form table of the candidate sum.

The verdict is Split only when every finite check passes; anything the
window cannot certify comes back Inconclusive rather than extrapolated.
Torsion-freeness is an input assertion, recorded in the verdict, never
verified.
"""

from dataclasses import dataclass

from . import bott, cech, tate
from .lattice import (
    Polarization,
    Window,
    canonical_twist,
    lt,
    safe_region,
    vadd,
    vscale,
)


class SplitterError(ValueError):
    pass


@dataclass
class ExtremalReport:
    """Certified maximal twists of the h^m-nonvanishing locus.

    positions lists twists a with h^m(F(a)) != 0 and h^m(F(a+e_j)) known
    zero for every j (by top-cohomology monotonicity that certifies
    h^m(F(c)) = 0 for every c > a).  aligned_k is the k with some position
    equal to k*d + canonical twist, if any.  When the locus touches the
    window in an increasing direction, certified is False and notes name
    the offending twists.
    """

    positions: tuple = ()
    aligned_k: int = None
    certified: bool = True
    notes: tuple = ()


@dataclass
class SplitVerdict:
    kind: str  # "split" | "nonsplit" | "inconclusive"
    summands: tuple = ()  # ((k, mult), ...) with k descending
    witness: tuple = None  # (twist, i)
    reason: str = ""
    window: Window = None
    torsion_free_asserted: bool = False
    safe_region_size: int = 0
    extremal_positions: tuple = ()
    aligned_k: int = None
    mode: str = "product"

    def to_json(self):
        out = {
            "verdict": self.kind,
            "window": self.window.to_json() if self.window else None,
            "assertions": {"torsion_free": self.torsion_free_asserted},
            "safe_region_size": self.safe_region_size,
            "extremal_positions": [list(a) for a in self.extremal_positions],
            "aligned_k": self.aligned_k,
            "mode": self.mode,
        }
        if self.kind == "split":
            out["summands"] = [{"k": k, "mult": m} for k, m in self.summands]
        elif self.kind == "nonsplit":
            out["witness"] = {"twist": list(self.witness[0]), "i": self.witness[1]}
        else:
            out["reason"] = self.reason
        return out

    @classmethod
    def from_json(cls, obj):
        kind = obj["verdict"]
        v = cls(
            kind=kind,
            window=Window.from_json(obj["window"]) if obj.get("window") else None,
            torsion_free_asserted=obj["assertions"]["torsion_free"],
            safe_region_size=obj["safe_region_size"],
            extremal_positions=tuple(tuple(a) for a in obj["extremal_positions"]),
            aligned_k=obj.get("aligned_k"),
            mode=obj.get("mode", "product"),
        )
        if kind == "split":
            v.summands = tuple((s["k"], s["mult"]) for s in obj["summands"])
        elif kind == "nonsplit":
            v.witness = (tuple(obj["witness"]["twist"]), obj["witness"]["i"])
        else:
            v.reason = obj.get("reason", "")
        return v


def hypothesis_violations(T, d):
    """Safe-region twists in the window carrying intermediate cohomology.

    Returned in lexicographic twist order, lowest index first, so the first
    entry is the canonical witness.
    """
    space = T.space
    d = d if isinstance(d, Polarization) else Polarization(d)
    out = []
    safe = safe_region(space, d, T.window)
    for a in sorted(safe):
        for i in range(1, space.m):
            dim = T.known_dim(a, i)
            if dim:
                out.append((a, i))
    return out


def hm_monotonicity_check(T):
    """Top cohomology can only grow downward: h^m(F(a)) != 0 forces
    h^m(F(b)) != 0 for every b <= a.  Checks every unit step in the window;
    returns None or the offending pair (lower twist, upper twist)."""
    space = T.space
    m = space.m
    for a in T.window.twists():
        upper = T.known_dim(a, m)
        if not upper:
            continue
        for j in range(space.t):
            b = tuple(x - (1 if jj == j else 0) for jj, x in enumerate(a))
            if b in T.window and T.known_dim(b, m) == 0:
                return (b, a)
    return None


def extremal_hm(T, d):
    """Maximal elements of the h^m-nonvanishing locus, with certification.

    A position a is certified extremal when h^m(F(a)) != 0 and every
    h^m(F(a+e_j)) is known zero; monotonicity then kills everything above.
    Maximal nonvanishing twists with an unknown upper neighbour make the
    report uncertified.
    """
    space = T.space
    d = d if isinstance(d, Polarization) else Polarization(d)
    m = space.m
    locus = [
        a
        for (a, i), (dim, _) in T.cells.items()
        if i == m and dim > 0
    ]
    locus_set = set(locus)
    positions = []
    notes = []
    certified = True
    for a in sorted(locus):
        if any(lt(a, c) for c in locus_set if c != a):
            continue
        ups = [tuple(x + (1 if jj == j else 0) for jj, x in enumerate(a)) for j in range(space.t)]
        if all(T.known_zero(u, m) for u in ups):
            positions.append(a)
        else:
            certified = False
            notes.append(a)
    aligned = None
    omega = canonical_twist(space)
    for a in positions:
        ks = set()
        ok = True
        for aj, wj, dj in zip(a, omega, d.d):
            num = aj - wj
            if num % dj:
                ok = False
                break
            ks.add(num // dj)
        if ok and len(ks) == 1:
            aligned = ks.pop()
            break
    return ExtremalReport(
        positions=tuple(positions),
        aligned_k=aligned,
        certified=certified,
        notes=tuple(notes),
    )


def _h0_of_twist_sum(space, d, ks_mults, shift_k):
    """h^0 of (+) O(k_j H)^{m_j} twisted by shift_k * H, via the closed form."""
    total = 0
    for k, mult in ks_mults:
        total += mult * bott.line_bundle_h(space, vscale(k + shift_k, d.d))[0]
    return total


def multiplicities(T, d):
    """Summand multiplicities of a split candidate by h^0 descent.

    k_max is the largest k with h^0(F(-kH)) nonzero; descending from there,
    mult(k) = h^0(F(-kH)) - sum_{k'>k} mult(k') * h^0(O((k'-k)H)).  The
    descent stops at the k pinned by the aligned extremal position (the
    smallest summand twist of any splitting) and is verified one step
    further down when the window allows.  Negative residuals, missing
    window coverage or a missing aligned position raise SplitterError.
    """
    space = T.space
    d = d if isinstance(d, Polarization) else Polarization(d)
    report = extremal_hm(T, d)
    if not report.certified:
        raise SplitterError(
            "extremality uncertifiable: h^m locus touches the window at %r"
            % (report.notes,)
        )
    if report.aligned_k is None:
        raise SplitterError("no aligned extremal position of the form k*d + canonical")
    k_low = -report.aligned_k

    def h0(k):
        a = vscale(-k, d.d)
        if a not in T.window:
            raise SplitterError("window does not cover twist -kH for k=%d" % k)
        dim = T.known_dim(a, 0)
        if dim is None:
            raise SplitterError("h^0(F(%r)) unknown" % (a,))
        return dim

    # Largest k with sections, certified by a vanishing h^0 one step above.
    k = k_low
    while True:
        a = vscale(-(k + 1), d.d)
        if a not in T.window:
            raise SplitterError(
                "window too small to certify the largest summand twist (need %r)" % (a,)
            )
        if h0(k + 1) == 0:
            break
        k += 1
    k_max = k
    if h0(k_max) == 0:
        raise SplitterError("h^0(F(-kH)) vanishes at the aligned k; table inconsistent")

    mults = []
    for k in range(k_max, k_low - 1, -1):
        residual = h0(k) - _h0_of_twist_sum(space, d, mults, -k)
        if residual < 0:
            raise SplitterError("negative residual %d at k=%d" % (residual, k))
        if residual:
            mults.append((k, residual))
    if not mults or mults[-1][0] != k_low:
        raise SplitterError(
            "aligned extremal position predicts a summand at k=%d but the "
            "h^0 descent found none" % k_low
        )
    below = vscale(-(k_low - 1), d.d)
    if below in T.window:
        residual = h0(k_low - 1) - _h0_of_twist_sum(space, d, mults, -(k_low - 1))
        if residual != 0:
            raise SplitterError(
                "nonzero residual %d below the smallest summand twist" % residual
            )
    return tuple(mults)


def verify_split(T, ms, d):
    """Necessary-condition check: compare the table cell by cell with the
    closed-form table of (+) O(kH)^mult.  Returns None or the first
    mismatch (a, i, got, expected) in lexicographic order."""
    space = T.space
    d = d if isinstance(d, Polarization) else Polarization(d)
    for a in T.window.twists():
        expected = [0] * (space.m + 1)
        for k, mult in ms:
            h = bott.line_bundle_h(space, vadd(vscale(k, d.d), a))
            expected = [x + mult * y for x, y in zip(expected, h)]
        for i in range(space.m + 1):
            got = T.known_dim(a, i)
            if got != expected[i]:
                return (a, i, got, expected[i])
    return None


def split_check(C, d, window, torsion_free_asserted=False, depth=None):
    """Run the full splitting pipeline on a line-bundle complex.

    cohomology table -> strand propagation -> monotonicity -> hypothesis
    scan (hit = NonSplit) -> extremal positions -> multiplicity extraction
    -> verification (pass = Split).  Upstream failures and every condition
    the window cannot certify yield Inconclusive with a reason.
    """
    space = C.space
    d = d if isinstance(d, Polarization) else Polarization(d)
    mode = "product" if space.t >= 2 else "single-factor-classical"

    def inconclusive(reason, **kw):
        return SplitVerdict(
            kind="inconclusive",
            reason=reason,
            window=window,
            torsion_free_asserted=torsion_free_asserted,
            mode=mode,
            **kw,
        )

    try:
        table = cech.cohomology_table(C, window, depth=depth)
    except (cech.CechError, cech.TruncationInstability) as exc:
        return inconclusive("cohomology computation failed: %s" % exc)

    try:
        table = tate.strand_propagate(table)
    except tate.StrandInconsistency as exc:
        return inconclusive("strand propagation inconsistency: %s" % exc)

    violation = hm_monotonicity_check(table)
    if violation is not None:
        return inconclusive(
            "top-cohomology monotonicity fails between %r and %r; the table "
            "cannot come from a sheaf" % violation
        )

    safe_size = len(safe_region(space, d, window))
    violations = hypothesis_violations(table, d)
    if violations:
        a, i = violations[0]
        return SplitVerdict(
            kind="nonsplit",
            witness=(a, i),
            window=window,
            torsion_free_asserted=torsion_free_asserted,
            safe_region_size=safe_size,
            mode=mode,
        )

    if all(dim == 0 for (_, _), (dim, _) in table.cells.items()):
        return SplitVerdict(
            kind="split",
            summands=(),
            window=window,
            torsion_free_asserted=torsion_free_asserted,
            safe_region_size=safe_size,
            mode=mode,
        )

    report = extremal_hm(table, d)
    if not report.certified:
        return inconclusive(
            "extremality uncertifiable: h^m locus touches the window at %r"
            % (report.notes,),
            safe_region_size=safe_size,
        )
    if report.aligned_k is None:
        return inconclusive(
            "no extremal position of the aligned form k*d + canonical; "
            "window evidence cannot certify a splitting",
            safe_region_size=safe_size,
            extremal_positions=report.positions,
        )

    # Sections must dominate top cohomology at the aligned position.
    k = report.aligned_k
    kd = vscale(k, d.d)
    if kd in window:
        h0 = table.known_dim(kd, 0)
        hm = table.known_dim(vadd(kd, canonical_twist(space)), space.m)
        if h0 is not None and hm is not None and h0 < hm:
            return inconclusive(
                "h^0(F(kH)) < h^m(F(kH + canonical)) at k=%d; table cannot "
                "come from a torsion-free sheaf satisfying the hypothesis" % k,
                safe_region_size=safe_size,
                extremal_positions=report.positions,
                aligned_k=k,
            )

    try:
        ms = multiplicities(table, d)
    except SplitterError as exc:
        return inconclusive(
            str(exc),
            safe_region_size=safe_size,
            extremal_positions=report.positions,
            aligned_k=report.aligned_k,
        )

    mismatch = verify_split(table, ms, d)
    if mismatch is not None:
        a, i, got, expected = mismatch
        return inconclusive(
            "candidate sum disagrees with the table at a=%r, i=%d (%s vs %s)"
            % (a, i, got, expected),
            safe_region_size=safe_size,
            extremal_positions=report.positions,
            aligned_k=report.aligned_k,
        )

    return SplitVerdict(
        kind="split",
        summands=ms,
        window=window,
        torsion_free_asserted=torsion_free_asserted,
        safe_region_size=safe_size,
        extremal_positions=report.positions,
        aligned_k=report.aligned_k,
        mode=mode,
    )
