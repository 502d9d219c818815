"""Coarse lower topologies on distinguished element classes.

A :class:`LowerSpace` is a subset ``sigma`` of a lattice carrier whose
closed sets are generated by the up-sets ``v(x) = {s in sigma : x <= s}``
taken as a subbasis.  Intersections of v-sets are again v-sets
(``v(x) & v(y) = v(x v y)``), so the generated closed family is exactly the
union-closure of the v-family together with the empty set.

Checkers return a :class:`Verdict` rather than a bare bool so that negative
outcomes carry a replayable witness.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from typing import Any

from .classes import ClassTag, classify, inf_v, radical_of
from .lattice import bits, mask_of

__all__ = [
    "HOLDS",
    "HYPOTHESIS_NOT_MET",
    "COUNTEREXAMPLE",
    "Verdict",
    "FamilyTooLarge",
    "NotClosedError",
    "LowerSpace",
    "DEFAULT_MAX_CLOSED_SETS",
    "max_closed_sets_limit",
]

HOLDS = "holds"
HYPOTHESIS_NOT_MET = "hypothesis-not-met"
COUNTEREXAMPLE = "counterexample"

DEFAULT_MAX_CLOSED_SETS = 1 << 20


def max_closed_sets_limit():
    """Closed-family size guard, overridable via LATKIT_MAX_CLOSED_SETS."""
    raw = os.environ.get("LATKIT_MAX_CLOSED_SETS")
    if raw is None:
        return DEFAULT_MAX_CLOSED_SETS
    try:
        value = int(raw)
    except ValueError:
        return DEFAULT_MAX_CLOSED_SETS
    return value if value > 0 else DEFAULT_MAX_CLOSED_SETS


@dataclass(frozen=True)
class Verdict:
    """Outcome of one check: holds / hypothesis-not-met / counterexample.

    Universally quantified checks attach a concrete witness to every
    counterexample.  Existence checks (``strongly_disconnects``) attach the
    witness to a positive outcome instead and return a witness-free
    counterexample when the exhaustive search finds nothing.
    """

    status: str
    witness: Any = None
    details: dict = field(default_factory=dict)

    @property
    def holds(self):
        return self.status == HOLDS

    @staticmethod
    def ok(**details):
        return Verdict(HOLDS, details=details)

    @staticmethod
    def hyp(**details):
        return Verdict(HYPOTHESIS_NOT_MET, details=details)

    @staticmethod
    def cex(witness, **details):
        return Verdict(COUNTEREXAMPLE, witness=witness, details=details)


class FamilyTooLarge(Exception):
    def __init__(self, size, limit):
        self.size = size
        self.limit = limit
        super().__init__(f"closed family exceeded {limit} sets (at {size})")


class NotClosedError(Exception):
    pass


def _indices(mask):
    return tuple(bits(mask))


class LowerSpace:
    """A class of lattice elements under the coarse lower topology."""

    def __init__(self, lattice, sigma, label=None, max_closed=None):
        self.lattice = lattice
        if isinstance(sigma, (ClassTag, str)):
            tag = ClassTag(sigma)
            self.sigma = classify(lattice, tag)
            self.label = label or tag.value
        else:
            self.sigma = classify(lattice, sigma)
            self.label = label or "custom"
        self.max_closed = max_closed or max_closed_sets_limit()
        self._v = tuple(lattice.up[x] & self.sigma
                        for x in range(lattice.n))
        # Deduplicated subbasis: point set -> every generator producing it.
        sub = {}
        for x in range(lattice.n):
            sub.setdefault(self._v[x], []).append(x)
        self.subbasis = {m: tuple(g) for m, g in sorted(sub.items())}
        self._closed_list = None
        self._closed_set = None
        self._point_closures = None

    # -- basic structure ----------------------------------------------------

    @property
    def size(self):
        return self.sigma.bit_count()

    def points(self):
        return bits(self.sigma)

    def v_set(self, x):
        """{s in sigma : x <= s} for a carrier element x."""
        return self._v[x]

    def generate_closed_sets(self):
        """The full closed family: union-closure of the subbasis.

        Intersections come for free (v-sets are intersection-closed and
        unions distribute over them), which the spectrality checker
        re-verifies literally.  Guarded by ``max_closed``.
        """
        if self._closed_list is not None:
            return self._closed_list
        family = set(self.subbasis)
        family.add(0)
        family.add(self.sigma)
        work = sorted(family)
        while work:
            nxt = []
            current = sorted(family)
            for a in work:
                for b in current:
                    u = a | b
                    if u not in family:
                        family.add(u)
                        nxt.append(u)
                        if len(family) > self.max_closed:
                            raise FamilyTooLarge(len(family), self.max_closed)
            work = nxt
        self._closed_set = frozenset(family)
        self._closed_list = tuple(sorted(family))
        return self._closed_list

    @property
    def closed_sets(self):
        return self.generate_closed_sets()

    def is_closed(self, subset):
        self.generate_closed_sets()
        return subset in self._closed_set

    def closure(self, subset):
        """Smallest closed superset of a subset of sigma."""
        if subset & ~self.sigma:
            raise ValueError("closure of a set with points outside sigma")
        acc = self.sigma
        for c in self.generate_closed_sets():
            if subset & ~c == 0:
                acc &= c
        return acc

    def point_closures(self):
        """closure({p}) for every point p, as a dict."""
        if self._point_closures is None:
            self._point_closures = {p: self.closure(1 << p)
                                    for p in self.points()}
        return self._point_closures

    # -- topology formation (the closed-set criterion) -----------------------

    def forms_closed_topology(self):
        """Whether the v-sets, with the trivial sets adjoined, are already
        closed under binary union and arbitrary intersection.

        Intersections of subfamilies fold through binary intersections on a
        finite carrier, so the scan is pairwise.  The
        empty set and sigma are adjoined before checking: when the top
        element belongs to sigma no v-set is empty, and demanding a raw
        empty member would wrongly fail classes like the radical elements
        even though their v-family is union-stable.
        """
        family = set(self.subbasis)
        family.add(0)
        family.add(self.sigma)
        members = sorted(family)
        for i, a in enumerate(members):
            for b in members[i:]:
                union = a | b
                if union not in family:
                    return Verdict.cex({
                        "left": _indices(a),
                        "right": _indices(b),
                        "left_gens": self.subbasis.get(a, ()),
                        "right_gens": self.subbasis.get(b, ()),
                        "union": _indices(union),
                    }, reason="union escapes the v-family")
                inter = a & b
                if inter not in family:
                    return Verdict.cex({
                        "left": _indices(a),
                        "right": _indices(b),
                        "intersection": _indices(inter),
                    }, reason="intersection escapes the v-family")
        return Verdict.ok(family_size=len(family))

    def hkp_property(self):
        """meet(x, y) <= s implies x <= s or y <= s, over all of L and sigma."""
        lat = self.lattice
        for s in self.points():
            up_s = lat.up
            for x in range(lat.n):
                if (up_s[x] >> s) & 1:
                    continue
                meet_row = lat.meet_tab[x]
                for y in range(x, lat.n):
                    if (up_s[meet_row[y]] >> s) & 1 and not (up_s[y] >> s) & 1:
                        return Verdict.cex({"x": x, "y": y, "s": s})
        return Verdict.ok()

    # -- separation ----------------------------------------------------------

    def is_T0(self):
        seen = {}
        for p, cl in self.point_closures().items():
            if cl in seen:
                return Verdict.cex({"p": seen[cl], "q": p,
                                    "closure": _indices(cl)})
            seen[cl] = p
        return Verdict.ok()

    def is_T1(self):
        for p, cl in self.point_closures().items():
            if cl != 1 << p:
                return Verdict.cex({"p": p, "closure": _indices(cl)})
        return Verdict.ok()

    # -- irreducibility and sobriety ------------------------------------------

    def irreducible_closed_sets(self):
        """Every irreducible member of the closed family.

        On a finite space the irreducible closed sets are exactly the
        distinct point closures: an irreducible C is the finite union of
        the closures of its points, hence equals one of them, and a point
        closure splits across no closed cover of the point.  The
        definitional two-set scan is kept for the test suite.
        """
        return tuple(sorted(set(self.point_closures().values())))

    def _irreducible_definitional(self, c):
        if c == 0 or not self.is_closed(c):
            return False
        closed = self.generate_closed_sets()
        for i, a in enumerate(closed):
            if c & ~a == 0:
                continue
            for b in closed[i:]:
                if c & ~(a | b) == 0 and c & ~b != 0:
                    return False
        return True

    def generic_points(self, c):
        """Points whose closure is exactly c; c must be closed."""
        if not self.is_closed(c):
            raise NotClosedError(f"{_indices(c)} is not closed")
        return mask_of(p for p, cl in self.point_closures().items() if cl == c)

    def is_sober(self):
        for c in self.irreducible_closed_sets():
            generics = self.generic_points(c)
            if generics.bit_count() != 1:
                return Verdict.cex({"closed": _indices(c),
                                    "generics": _indices(generics)})
        return Verdict.ok(irreducible_count=len(self.irreducible_closed_sets()))

    def sober_criterion(self):
        """For every nonempty irreducible subbasic v(x): meet v(x) in sigma."""
        lat = self.lattice
        irreducible = set(self.irreducible_closed_sets())
        for v, gens in self.subbasis.items():
            if v == 0 or v not in irreducible:
                continue
            m = lat.meet_set(v)
            if not (self.sigma >> m) & 1:
                return Verdict.cex({"x": gens[0], "v": _indices(v), "meet": m})
        return Verdict.ok()

    # -- compactness -----------------------------------------------------------

    def is_compact_space(self):
        """Finite-intersection property over the subbasis.

        Any subbasis subfamily of a finite space is its own finite
        subfamily, so no violating configuration can exist; the verdict
        records that fact instead of assuming it silently.
        """
        return Verdict.ok(note="every subfamily of a finite subbasis is finite")

    # -- connectedness -----------------------------------------------------------

    def is_connected(self):
        closed = self.generate_closed_sets()
        closed_set = self._closed_set
        for c in closed:
            if c == 0 or c == self.sigma:
                continue
            if (self.sigma & ~c) in closed_set:
                return Verdict.cex({"piece": _indices(c),
                                    "complement": _indices(self.sigma & ~c)})
        return Verdict.ok()

    def strongly_disconnects(self, subfamily=False):
        """Search for a disjoint nonempty subbasic cover of the space.

        The default takes the two pieces to be single subbasis members
        v(x), v(y); with ``subfamily=True`` each piece may be a union of
        subbasis members, which on these finite spaces coincides with a
        clopen split of the space.
        """
        if not subfamily:
            members = [m for m in self.subbasis if m]
            for i, a in enumerate(members):
                for b in members[i:]:
                    if a & b == 0 and a | b == self.sigma:
                        return Verdict(HOLDS, witness={
                            "x": self.subbasis[a][0],
                            "y": self.subbasis[b][0],
                            "v_x": _indices(a),
                            "v_y": _indices(b),
                        })
            return Verdict(COUNTEREXAMPLE,
                           details={"reason": "no disconnecting pair of "
                                              "subbasis members"})
        closed_set = set(self.generate_closed_sets())
        for c in self.generate_closed_sets():
            if c == 0 or c == self.sigma:
                continue
            comp = self.sigma & ~c
            if comp not in closed_set:
                continue
            left = [m for m in self.subbasis if m and m & ~c == 0]
            right = [m for m in self.subbasis if m and m & ~comp == 0]
            covers_left = 0
            for m in left:
                covers_left |= m
            covers_right = 0
            for m in right:
                covers_right |= m
            if covers_left == c and covers_right == comp:
                return Verdict(HOLDS, witness={
                    "left_gens": tuple(self.subbasis[m][0] for m in left),
                    "right_gens": tuple(self.subbasis[m][0] for m in right),
                    "piece": _indices(c),
                })
        return Verdict(COUNTEREXAMPLE,
                       details={"reason": "no disconnecting subfamilies"})

    # -- spectrality ---------------------------------------------------------

    def is_spectral(self):
        """Compact + T0 + sober, plus a literal basis re-verification.

        On a finite space every open set is compact and the opens form a
        basis closed under finite intersections as soon as the closed
        family is genuinely a topology, which is re-checked here pairwise.
        """
        t0 = self.is_T0()
        sober = self.is_sober()
        compact = self.is_compact_space()
        closed = self.generate_closed_sets()
        closed_set = self._closed_set
        for i, a in enumerate(closed):
            for b in closed[i:]:
                if (a | b) not in closed_set or (a & b) not in closed_set:
                    return Verdict.cex(
                        {"left": _indices(a), "right": _indices(b)},
                        reason="closed family is not a topology")
        for bad in (t0, sober, compact):
            if not bad.holds:
                return Verdict.cex(bad.witness, failed_part=bad.details)
        return Verdict.ok(t0=True, sober=True, compact=True,
                          basis="all opens; compact and intersection-closed")

    # -- v-set identities ------------------------------------------------------

    def check_v_radical(self):
        """The three equivalent forms of v(x) = v(radical x).

        Checked as a chain of biconditionals between: the identity over all
        of L, the identity over sigma only, and sigma consisting of radical
        elements.  The stronger "sigma equals the radical class" reading is
        evaluated and reported in the details but not asserted; only the
        containment makes the equivalences provable.
        """
        lat = self.lattice
        rad_class = classify(lat, ClassTag.RAD)
        all_eq = True
        all_witness = None
        for x in range(lat.n):
            if self._v[x] != self._v[radical_of(lat, x)]:
                all_eq = False
                all_witness = x
                break
        sigma_eq = True
        sigma_witness = None
        for x in self.points():
            if self._v[x] != self._v[radical_of(lat, x)]:
                sigma_eq = False
                sigma_witness = x
                break
        subset_rad = self.sigma & ~rad_class == 0
        equals_rad = self.sigma == rad_class
        details = {
            "v_eq_all": all_eq,
            "v_eq_sigma": sigma_eq,
            "subset_rad": subset_rad,
            "equals_rad": equals_rad,
            "equality_reading_agrees": all_eq == equals_rad,
        }
        if all_eq == sigma_eq == subset_rad:
            return Verdict.ok(**details)
        return Verdict.cex({"all_witness": all_witness,
                            "sigma_witness": sigma_witness}, **details)

    def _meet_dense(self):
        lat = self.lattice
        return all(lat.meet_set(self._v[x]) == x for x in range(lat.n))

    def check_hrx(self, part=None):
        """The five inf-of-v identities; ``part`` picks one of 1..5.

        Part 5 is stated for lattices all of whose elements are radical; its
        derivation additionally needs every element to be a meet of sigma
        members (true for the radical class on such lattices, not for an
        arbitrary class), so that meet-density is the hypothesis gated on.
        """
        if part is None:
            worst = None
            for k in range(1, 6):
                v = self.check_hrx(k)
                if v.status == COUNTEREXAMPLE:
                    return Verdict.cex(v.witness, part=k)
                if v.status == HYPOTHESIS_NOT_MET:
                    worst = v
            return Verdict.ok() if worst is None else Verdict.ok(
                note="part 5 hypothesis not met")
        lat = self.lattice
        if part == 1:
            for x in range(lat.n):
                if not lat.leq(x, lat.meet_set(self._v[x])):
                    return Verdict.cex({"x": x})
            return Verdict.ok()
        if part == 2:
            for x in self.points():
                if lat.meet_set(self._v[x]) != x:
                    return Verdict.cex({"x": x,
                                        "meet": lat.meet_set(self._v[x])})
            return Verdict.ok()
        if part == 3:
            for x in range(lat.n):
                if self._v[x] != self._v[lat.meet_set(self._v[x])]:
                    return Verdict.cex({"x": x})
            return Verdict.ok()
        if part == 4:
            for x in range(lat.n):
                mx = lat.meet_set(self._v[x])
                for y in range(lat.n):
                    contain = self._v[x] & ~self._v[y] == 0
                    my = lat.meet_set(self._v[y])
                    if contain != lat.leq(my, mx):
                        return Verdict.cex({"x": x, "y": y})
            return Verdict.ok()
        if part == 5:
            rad_class = classify(lat, ClassTag.RAD)
            if rad_class != lat.full_mask:
                return Verdict.hyp(reason="some element is not radical")
            if not self._meet_dense():
                return Verdict.hyp(
                    reason="sigma is not meet-dense in the carrier")
            for x in range(lat.n):
                for y in range(lat.n):
                    contain = self._v[x] & ~self._v[y] == 0
                    if contain != lat.leq(y, x):
                        return Verdict.cex({"x": x, "y": y})
            return Verdict.ok()
        raise ValueError(f"unknown part {part!r}")

    def check_lfc(self):
        """v(x) empty exactly at the top element iff sigma covers Max.

        Stated for classes of proper elements: if the top element belongs
        to sigma no v-set is ever empty and the forward reading degenerates
        at x = top, so such classes report hypothesis-not-met.
        """
        from .lattice import is_compactly_generated, is_max_bounded

        lat = self.lattice
        if (self.sigma >> lat.top) & 1:
            return Verdict.hyp(reason="sigma contains the top element")
        if not is_compactly_generated(lat) or not is_max_bounded(lat):
            return Verdict.hyp(reason="carrier hypotheses fail")
        prop_side = True
        witness = None
        for x in range(lat.n):
            if (self._v[x] == 0) != (x == lat.top):
                prop_side = False
                witness = x
                break
        max_side = classify(lat, ClassTag.MAX) & ~self.sigma == 0
        if prop_side == max_side:
            return Verdict.ok(empty_only_at_top=prop_side,
                              contains_max=max_side)
        return Verdict.cex({"x": witness},
                           empty_only_at_top=prop_side, contains_max=max_side)
