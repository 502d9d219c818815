"""Multiplicative-lattice homomorphisms and their induced continuous maps.

A valid hom preserves order, binary joins and meets, multiplication, the
top element, and the bottom element.  Bottom preservation is what makes
the right adjoint (the contraction) exist: with it, ``phi(x) <= y`` iff
``x <= adjoint[y]`` holds for every pair, which is the property all the
continuity and embedding arguments rest on.

The contraction of a target element is the single source element
``join {x : phi(x) <= y}``; the fiber reading of preimages survives as
:func:`kernel_set` where membership of individual elements matters.
"""

from __future__ import annotations

from .classes import ClassTag, classify
from .lattice import bits, divisors_of, mask_of
from .topology import COUNTEREXAMPLE, HOLDS, LowerSpace, Verdict

__all__ = [
    "HomViolation",
    "ContractionPropertyFails",
    "NotSurjective",
    "LatticeHom",
    "validate_hom",
    "identity_hom",
    "divisor_quotient_hom",
    "compose_homs",
    "contraction",
    "kernel_set",
    "kernel_element",
    "has_contraction_property",
    "induced_map",
    "check_continuity",
    "check_embedding",
    "check_density",
    "check_subspace_density",
]


class HomViolation(Exception):
    def __init__(self, law, witness):
        self.law = law
        self.witness = witness
        super().__init__(f"hom law {law!r} fails at {witness!r}")


class ContractionPropertyFails(Exception):
    def __init__(self, y):
        self.y = y
        super().__init__(f"contraction of target element {y} leaves the class")


class NotSurjective(Exception):
    pass


class LatticeHom:
    """A validated hom with its precomputed adjoint (contraction) table."""

    __slots__ = ("source", "target", "map", "adjoint")

    def __init__(self, source, target, mapping, adjoint):
        self.source = source
        self.target = target
        self.map = tuple(mapping)
        self.adjoint = tuple(adjoint)

    def __call__(self, x):
        return self.map[x]

    def is_surjective(self):
        return len(set(self.map)) == self.target.n

    def __repr__(self):
        return f"LatticeHom({self.source!r} -> {self.target!r})"


def validate_hom(source, target, mapping):
    """Check all hom laws exhaustively and build the adjoint table."""
    if len(mapping) != source.n:
        raise HomViolation("totality", (len(mapping), source.n))
    for x, y in enumerate(mapping):
        if not 0 <= y < target.n:
            raise HomViolation("range", (x, y))
    mapping = tuple(mapping)
    if mapping[source.top] != target.top:
        raise HomViolation("unit", (source.top,))
    if mapping[source.bot] != target.bot:
        raise HomViolation("bottom", (source.bot,))
    for x in range(source.n):
        for y in range(x, source.n):
            if source.leq(x, y) and not target.leq(mapping[x], mapping[y]):
                raise HomViolation("monotone", (x, y))
            if mapping[source.join_tab[x][y]] != \
                    target.join_tab[mapping[x]][mapping[y]]:
                raise HomViolation("join", (x, y))
            if mapping[source.meet_tab[x][y]] != \
                    target.meet_tab[mapping[x]][mapping[y]]:
                raise HomViolation("meet", (x, y))
            if mapping[source.mul_tab[x][y]] != \
                    target.mul_tab[mapping[x]][mapping[y]]:
                raise HomViolation("mul", (x, y))
    adjoint = []
    for y in range(target.n):
        below = mask_of(x for x in range(source.n)
                        if target.leq(mapping[x], y))
        adjoint.append(source.join_set(below))
    for y in range(target.n):  # the Galois adjunction itself
        for x in range(source.n):
            if target.leq(mapping[x], y) != source.leq(x, adjoint[y]):
                raise HomViolation("adjunction", (x, y))
    return LatticeHom(source, target, mapping, adjoint)


def identity_hom(lat):
    return validate_hom(lat, lat, list(range(lat.n)))


def divisor_quotient_hom(src, dst):
    """The quotient map between divisor quantales, d |-> gcd(d, n)."""
    import math

    m, n = src.divisor_modulus, dst.divisor_modulus
    if m is None or n is None or m % n != 0:
        raise HomViolation("quotient", (m, n))
    src_div = sorted(divisors_of(m), reverse=True)
    dst_div = sorted(divisors_of(n), reverse=True)
    dst_idx = {d: i for i, d in enumerate(dst_div)}
    mapping = [dst_idx[math.gcd(d, n)] for d in src_div]
    return validate_hom(src, dst, mapping)


def compose_homs(first, then):
    """The composite hom x |-> then(first(x))."""
    if first.target is not then.source:
        raise HomViolation("composition", None)
    return validate_hom(first.source, then.target,
                        [then.map[first.map[x]] for x in range(first.source.n)])


def contraction(hom, y):
    """Largest source element mapping below y."""
    return hom.adjoint[y]


def kernel_set(hom):
    """Fiber of the bottom element, as a mask."""
    return mask_of(x for x in range(hom.source.n)
                   if hom.map[x] == hom.target.bot)


def kernel_element(hom):
    """Contraction of bottom, the join of the kernel fiber."""
    return hom.adjoint[hom.target.bot]


def has_contraction_property(hom, cls):
    """Whether contraction keeps the given class, for this hom."""
    src_mask = classify(hom.source, cls)
    tgt_mask = classify(hom.target, cls)
    for y in bits(tgt_mask):
        if not (src_mask >> hom.adjoint[y]) & 1:
            return Verdict.cex({"y": y, "contraction": hom.adjoint[y]})
    return Verdict.ok()


def induced_map(hom, cls):
    """phi_*: the contraction restricted to target-class points."""
    witness = has_contraction_property(hom, cls)
    if not witness.holds:
        raise ContractionPropertyFails(witness.witness["y"])
    tgt_mask = classify(hom.target, cls)
    return {y: hom.adjoint[y] for y in bits(tgt_mask)}


def _spaces(hom, cls):
    return LowerSpace(hom.source, cls), LowerSpace(hom.target, cls)


def _preimage(phi_star, subset):
    return mask_of(y for y, img in phi_star.items() if (subset >> img) & 1)


def _image_of(phi_star, subset):
    return mask_of(phi_star[y] for y in bits(subset))


def check_continuity(hom, cls):
    """phi_* pulls closed sets back to closed sets.

    Also verifies the generator-level identity: the phi_* preimage of
    v(x) in the source space is v(phi(x)) in the target space.
    """
    phi_star = induced_map(hom, cls)
    src_space, tgt_space = _spaces(hom, cls)
    for x in range(hom.source.n):
        if _preimage(phi_star, src_space.v_set(x)) != \
                tgt_space.v_set(hom.map[x]):
            return Verdict.cex({"x": x}, reason="preimage identity fails")
    for c in src_space.generate_closed_sets():
        pre = _preimage(phi_star, c)
        if not tgt_space.is_closed(pre):
            return Verdict.cex({"closed": tuple(bits(c))},
                               reason="preimage not closed")
    return Verdict.ok()


def check_embedding(hom, cls):
    """phi_* is a homeomorphism onto the up-set of the kernel element.

    Requires phi surjective on carriers; the image must equal
    ``{x in sigma : kernel_element <= x}`` and the subspace topology must
    match the pushed-forward one exactly.
    """
    if not hom.is_surjective():
        raise NotSurjective("hom is not surjective on carriers")
    phi_star = induced_map(hom, cls)
    src_space, tgt_space = _spaces(hom, cls)
    image = _image_of(phi_star, tgt_space.sigma)
    if len(set(phi_star.values())) != len(phi_star):
        return Verdict.cex({"image": tuple(bits(image))},
                           reason="phi_* not injective")
    ker_up = hom.source.up[kernel_element(hom)] & src_space.sigma
    if image != ker_up:
        return Verdict.cex({"image": tuple(bits(image)),
                            "kernel_upset": tuple(bits(ker_up))},
                           reason="image differs from kernel up-set")
    cont = check_continuity(hom, cls)
    if not cont.holds:
        return cont
    pushed = {_image_of(phi_star, d)
              for d in tgt_space.generate_closed_sets()}
    subspace = {c & image for c in src_space.generate_closed_sets()}
    if pushed != subspace:
        return Verdict.cex({"pushed": sorted(pushed),
                            "subspace": sorted(subspace)},
                           reason="subspace topology mismatch")
    return Verdict.ok(image=tuple(bits(image)))


def check_density(hom, cls):
    """Density of the image of phi_* against the kernel condition.

    Both sides of the biconditional are computed independently: the
    closure of the image in the source space, and whether every kernel
    member (equivalently the kernel element) sits below the meet of the
    whole source class.
    """
    phi_star = induced_map(hom, cls)
    src_space, _ = _spaces(hom, cls)
    image = _image_of(phi_star, classify(hom.target, cls))
    dense = src_space.closure(image) == src_space.sigma
    inf_sigma = hom.source.meet_set(src_space.sigma)
    ker_cond_set = all(hom.source.leq(k, inf_sigma)
                       for k in bits(kernel_set(hom)))
    ker_cond_elem = hom.source.leq(kernel_element(hom), inf_sigma)
    details = {"dense": dense, "kernel_below_inf": ker_cond_set,
               "kernel_element_below_inf": ker_cond_elem}
    if dense == ker_cond_set:
        return Verdict.ok(**details)
    return Verdict.cex({"image": tuple(bits(image))}, **details)


def check_subspace_density(lat):
    """Density of Max and Spec inside the strongly-irreducible space.

    Asserts the pairing that the closure formula actually yields:
    Max dense iff the Jacobson radical equals the s-radical, and Spec
    dense iff the p-radical equals the s-radical.  The swapped pairing is
    evaluated alongside and reported in the details.
    """
    from .classes import jacobson, p_radical, s_radical

    space = LowerSpace(lat, ClassTag.IRR_STRONG)
    max_mask = classify(lat, ClassTag.MAX) & space.sigma
    spec_mask = classify(lat, ClassTag.SPEC) & space.sigma
    max_dense = space.closure(max_mask) == space.sigma
    spec_dense = space.closure(spec_mask) == space.sigma
    jac, prad, srad = jacobson(lat), p_radical(lat), s_radical(lat)
    corrected = (max_dense == (jac == srad)) and (spec_dense == (prad == srad))
    swapped = (max_dense == (prad == srad)) and (spec_dense == (jac == srad))
    details = {
        "max_dense": max_dense,
        "spec_dense": spec_dense,
        "jac_eq_srad": jac == srad,
        "prad_eq_srad": prad == srad,
        "swapped_pairing_agrees": swapped,
    }
    if corrected:
        return Verdict.ok(**details)
    return Verdict.cex({"jac": jac, "p_radical": prad, "s_radical": srad},
                       **details)
