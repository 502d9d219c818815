"""Distinguished element classes of a multiplicative lattice, and radicals.

Every classifier checks its defining condition exhaustively and returns an
element-set bit mask.  Results are memoized on the lattice, since the
topology and harness layers ask for the same classes repeatedly.
"""

from __future__ import annotations

from enum import Enum

from .lattice import LatticeError, bits, mask_of

__all__ = [
    "ClassTag",
    "DefinitionMismatch",
    "classify",
    "radical_of",
    "jacobson",
    "p_radical",
    "s_radical",
    "inf_v",
]


class ClassTag(str, Enum):
    """CLI tokens for the built-in element classes."""

    PROP = "prop"
    SPEC = "spec"
    MIN_PRIME = "min-prime"
    MAX = "max"
    IRR = "irr"
    IRR_STRONG = "irr+"
    IRR_COMPLETE = "irr++"
    RAD = "rad"
    PRIM = "prim"
    NIL = "nil"
    IDEM = "idem"
    COMPACT = "compact"

    def __str__(self):
        return self.value


class DefinitionMismatch(LatticeError):
    """The two defining formulas for a radical disagree.

    Cannot happen on a validated finite lattice (all elements are compact,
    and semiprime elements are meets of primes there); raising instead of
    silently picking a side keeps the checker honest.
    """

    def __init__(self, x, meet_form, join_form):
        self.x = x
        self.meet_form = meet_form
        self.join_form = join_form
        super().__init__(
            f"radical({x}): meet form {meet_form} != join form {join_form}")


def _is_prime(lat, p):
    if p == lat.top:
        return False
    for x in range(lat.n):
        if lat.leq(x, p):
            continue
        row = lat.mul_tab[x]
        for y in range(x, lat.n):
            if lat.leq(row[y], p) and not lat.leq(y, p):
                return False
    return True


def _spec_mask(lat):
    return mask_of(p for p in lat.elements() if _is_prime(lat, p))


def _stable_powers(lat):
    return tuple(lat.stable_power(x) for x in lat.elements())


def _radical_vector(lat):
    """radical of every element, via both defining formulas.

    meet form: meet of the primes above x.  join form: join of the
    elements some power of which drops below x (every element of a finite
    carrier is compact, so the compactness restriction is vacuous).  The
    power sequence of y descends, so "some power <= x" is equivalent to
    "the stable power <= x".
    """
    spec = classify(lat, ClassTag.SPEC)
    stable = lat.cached(("stable-powers",), lambda: _stable_powers(lat))
    out = []
    for x in lat.elements():
        meet_form = lat.meet_set(lat.up[x] & spec)
        join_form = lat.join_set(
            mask_of(y for y in lat.elements() if lat.leq(stable[y], x)))
        if meet_form != join_form:
            raise DefinitionMismatch(x, meet_form, join_form)
        out.append(meet_form)
    return tuple(out)


def radical_of(lat, x):
    """Meet of the primes above x (checked against the power/join form)."""
    return lat.cached(("radical-vector",), lambda: _radical_vector(lat))[x]


def _classify_uncached(lat, tag):
    n = lat.n
    top = lat.top
    proper = lat.proper_mask
    if tag is ClassTag.PROP:
        return proper
    if tag is ClassTag.SPEC:
        return _spec_mask(lat)
    if tag is ClassTag.MIN_PRIME:
        # Read with strict order: no prime strictly below.  The non-strict
        # reading would empty the class (every prime lies below itself).
        spec = classify(lat, ClassTag.SPEC)
        return mask_of(p for p in bits(spec)
                       if spec & lat.down[p] & ~(1 << p) == 0)
    if tag is ClassTag.MAX:
        return mask_of(m for m in bits(proper)
                       if lat.up[m] & proper & ~(1 << m) == 0)
    if tag is ClassTag.IRR:
        out = 0
        for s in bits(proper):
            ok = True
            for x in range(n):
                for y in range(x, n):
                    if lat.meet_tab[x][y] == s and x != s and y != s:
                        ok = False
                        break
                if not ok:
                    break
            if ok:
                out |= 1 << s
        return out
    if tag is ClassTag.IRR_STRONG:
        out = 0
        for s in bits(proper):
            ok = True
            for x in range(n):
                if lat.leq(x, s):
                    continue
                for y in range(x, n):
                    if lat.leq(lat.meet_tab[x][y], s) and not lat.leq(y, s):
                        ok = False
                        break
                if not ok:
                    break
            if ok:
                out |= 1 << s
        return out
    if tag is ClassTag.IRR_COMPLETE:
        # s is completely irreducible iff it differs from the meet of its
        # strict upper bounds; equivalent on a finite carrier to membership
        # in every family meeting to s (unit-tested against the subset
        # definition).  The top element is the empty meet and is excluded.
        out = 0
        for s in bits(proper):
            strict_up = lat.up[s] & ~(1 << s)
            if lat.meet_set(strict_up) != s:
                out |= 1 << s
        return out
    if tag is ClassTag.RAD:
        return mask_of(x for x in lat.elements() if radical_of(lat, x) == x)
    if tag is ClassTag.PRIM:
        out = 0
        for q in bits(proper):
            rq = radical_of(lat, q)
            ok = True
            for x in range(n):
                row = lat.mul_tab[x]
                for y in range(n):
                    if lat.leq(row[y], q) and not lat.leq(x, q) \
                            and not lat.leq(y, rq):
                        ok = False
                        break
                if not ok:
                    break
            if ok:
                out |= 1 << q
        return out
    if tag is ClassTag.NIL:
        stable = lat.cached(("stable-powers",), lambda: _stable_powers(lat))
        return mask_of(x for x in lat.elements() if stable[x] == lat.bot)
    if tag is ClassTag.IDEM:
        return mask_of(x for x in lat.elements() if lat.mul_tab[x][x] == x)
    if tag is ClassTag.COMPACT:
        from .lattice import is_compact_element

        return mask_of(c for c in lat.elements()
                       if is_compact_element(lat, c))
    raise ValueError(f"unknown class tag {tag!r}")


def classify(lat, cls):
    """Element set of a class: a ClassTag, its token, or a custom mask."""
    if isinstance(cls, ClassTag):
        tag = cls
    elif isinstance(cls, str):
        tag = ClassTag(cls)
    elif isinstance(cls, int):
        if cls & ~lat.full_mask:
            raise ValueError("custom class mask has members outside carrier")
        return cls
    else:
        raise TypeError(f"cannot classify {cls!r}")
    return lat.cached(("class", tag), lambda: _classify_uncached(lat, tag))


def jacobson(lat):
    """Meet of all maximal elements (top when there are none)."""
    return lat.meet_set(classify(lat, ClassTag.MAX))


def p_radical(lat):
    """Meet of all prime elements."""
    return lat.meet_set(classify(lat, ClassTag.SPEC))


def s_radical(lat):
    """Meet of all strongly irreducible elements."""
    return lat.meet_set(classify(lat, ClassTag.IRR_STRONG))


def inf_v(lat, sigma, x):
    """Meet of the members of sigma lying above x (top if none do)."""
    sigma_mask = classify(lat, sigma) if not isinstance(sigma, int) else sigma
    return lat.meet_set(lat.up[x] & sigma_mask)
