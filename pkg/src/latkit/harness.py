"""Run every cataloged statement over a corpus of finite lattices.

Each statement id binds to one checker.  Hypotheses that finite carriers
satisfy automatically (compact generation, compact top, max-boundedness)
are still executed so the runs document them instead of assuming them.

Three statements carry two textual readings whose intended one is
ambiguous; those are "discrepancy tracked": both readings are evaluated,
their agreement rates land in the report, and a disagreement is recorded
as a DISCREPANCY line rather than a counterexample.  Everything else
fails the run on any counterexample.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from .classes import ClassTag, classify, jacobson
from .homs import (NotSurjective, check_continuity, check_density,
                   check_embedding, check_subspace_density,
                   divisor_quotient_hom, has_contraction_property,
                   identity_hom)
from .lattice import (bits, build_chain_quantale, build_divisor_quantale,
                      build_powerset_frame, build_product, divisors_of,
                      enumerate_lattices, is_compact_element,
                      is_compactly_generated, is_max_bounded, mask_of)
from .latfile import lattice_from_latfile, parse_latfile, serialize_latfile
from .topology import (COUNTEREXAMPLE, HOLDS, HYPOTHESIS_NOT_MET, LowerSpace,
                       Verdict)

__all__ = [
    "THEOREM_IDS",
    "TAGGED_IDS",
    "TRACKED_READINGS",
    "DEFAULT_SIGMA_TAGS",
    "UnknownTheorem",
    "CorpusSpec",
    "corpus_items",
    "check",
    "run_corpus",
    "run_checks",
    "Report",
    "replay_counterexample",
    "get_space",
]

THEOREM_IDS = (
    "BIP1", "BIP2", "BIP3", "BIP4",
    "HKT", "HRRAD",
    "HRX1", "HRX2", "HRX3", "HRX4", "HRX5",
    "LFC", "CSB", "CQC",
    "T0A", "IRRC", "SPIIR", "ZARISKI_T1",
    "SOB", "QSS", "TSQS",
    "PR1", "CONN",
    "CONMAP1", "CONMAP2", "CONMAP3",
    "DENSITY_MAX", "DENSITY_SPEC",
)

# Statements whose verdict depends on the chosen class.
TAGGED_IDS = frozenset({
    "HKT", "HRRAD", "HRX1", "HRX2", "HRX3", "HRX4", "HRX5", "LFC", "CSB",
    "CQC", "T0A", "IRRC", "ZARISKI_T1", "SOB", "PR1", "CONN",
    "CONMAP1", "CONMAP2", "CONMAP3",
})

# (statement, reading) pairs reported as agreement rates, never as failures.
TRACKED_READINGS = (
    ("ZARISKI_T1", "literal"),
    ("ZARISKI_T1", "corrected"),
    ("HRRAD", "equality"),
    ("DENSITY_MAX", "literal"),
    ("DENSITY_SPEC", "literal"),
)

DEFAULT_SIGMA_TAGS = (
    ClassTag.PROP, ClassTag.SPEC, ClassTag.MIN_PRIME, ClassTag.MAX,
    ClassTag.IRR, ClassTag.IRR_STRONG, ClassTag.IRR_COMPLETE, ClassTag.RAD,
    ClassTag.PRIM,
)

# Per (statement, reading): how many disagreeing pairs a report exhibits.
DISCREPANCY_EXHIBIT_LIMIT = 5


class UnknownTheorem(Exception):
    pass


def get_space(lat, tag):
    """Shared LowerSpace per (lattice, class); spaces are immutable."""
    tag = ClassTag(tag)
    return lat.cached(("space", tag), lambda: LowerSpace(lat, tag))


# -- corpus -------------------------------------------------------------------


@dataclass(frozen=True)
class CorpusSpec:
    divisor_max: int = 60
    powerset_max: int = 3
    chain_max: int = 8
    products: bool = True
    enumerate_max: int = 5

    def describe(self):
        return (f"divisor<={self.divisor_max} powerset<={self.powerset_max} "
                f"chain<={self.chain_max} "
                f"products={'on' if self.products else 'off'} "
                f"enum<={self.enumerate_max}")

    @classmethod
    def parse(cls, text):
        """"default" or comma-separated key=value overrides."""
        if text == "default":
            return cls()
        kwargs = {}
        keys = {"divisor": "divisor_max", "powerset": "powerset_max",
                "chain": "chain_max", "products": "products",
                "enum": "enumerate_max"}
        for part in text.split(","):
            if not part:
                continue
            key, _, value = part.partition("=")
            if key not in keys or not value.lstrip("-").isdigit():
                raise ValueError(f"bad corpus spec component {part!r}")
            val = int(value)
            kwargs[keys[key]] = bool(val) if key == "products" else val
        return cls(**kwargs)


def _product_smalls():
    return (
        ("divisor:4", build_divisor_quantale(4)),
        ("divisor:6", build_divisor_quantale(6)),
        ("powerset:2", build_powerset_frame(2)),
        ("chain-meet:3", build_chain_quantale(3, "meet")),
        ("chain-luk:3", build_chain_quantale(3, "lukasiewicz")),
    )


def corpus_items(spec=None):
    """Deterministic list of (key, lattice) pairs for a corpus spec."""
    spec = spec or CorpusSpec()
    items = []
    for n in range(1, spec.divisor_max + 1):
        items.append((f"divisor:{n}", build_divisor_quantale(n)))
    for k in range(0, spec.powerset_max + 1):
        items.append((f"powerset:{k}", build_powerset_frame(k)))
    for n in range(1, spec.chain_max + 1):
        items.append((f"chain-meet:{n}", build_chain_quantale(n, "meet")))
    for n in range(1, spec.chain_max + 1):
        items.append((f"chain-luk:{n}",
                      build_chain_quantale(n, "lukasiewicz")))
    if spec.products:
        smalls = _product_smalls()
        for i, (k1, l1) in enumerate(smalls):
            for k2, l2 in smalls[i:]:
                items.append((f"product:{k1}*{k2}", build_product(l1, l2)))
    if spec.enumerate_max > 0:
        for idx, lat in enumerate(enumerate_lattices(spec.enumerate_max)):
            items.append((f"enum:{lat.n}:{idx}", lat))
    return items


# -- per-statement checkers -----------------------------------------------------


def _check_bip(lat, part):
    n = lat.n
    if part == 1:
        for x in range(n):
            for y in range(x, n):
                if not lat.leq(lat.mul_tab[x][y], lat.meet_tab[x][y]):
                    return Verdict.cex({"x": x, "y": y})
        return Verdict.ok()
    if part == 2:
        for x in range(n):
            if lat.mul_tab[x][lat.bot] != lat.bot:
                return Verdict.cex({"x": x})
        return Verdict.ok()
    if part == 3:
        for x in range(n):
            for y in bits(lat.up[x]):
                for z in range(n):
                    if not lat.leq(lat.mul_tab[x][z], lat.mul_tab[y][z]):
                        return Verdict.cex({"x": x, "y": y, "z": z})
        return Verdict.ok()
    for x in range(n):
        for y in bits(lat.up[x]):
            for u in range(n):
                for v in bits(lat.up[u]):
                    if not lat.leq(lat.mul_tab[x][u], lat.mul_tab[y][v]):
                        return Verdict.cex({"x": x, "y": y, "u": u, "v": v})
    return Verdict.ok()


def _finite_hypotheses(lat):
    return (is_compactly_generated(lat)
            and is_compact_element(lat, lat.top)
            and is_max_bounded(lat))


def _check_hkt(space):
    forms = space.forms_closed_topology()
    hkp = space.hkp_property()
    if forms.holds == hkp.holds:
        return Verdict.ok(forms=forms.status, hkp=hkp.status)
    return Verdict.cex({
        "forms": forms.status, "forms_witness": forms.witness,
        "hkp": hkp.status, "hkp_witness": hkp.witness,
    })


def _check_csb(lat, space):
    if not _finite_hypotheses(lat):
        return Verdict.hyp(reason="carrier hypotheses fail")
    max_mask = classify(lat, ClassTag.MAX)
    if max_mask & ~space.sigma:
        return Verdict.hyp(reason="sigma misses a maximal element")
    verdict = space.is_compact_space()
    return verdict if verdict.holds else Verdict.cex(verdict.witness)


def _check_cqc(lat, space):
    if not is_compactly_generated(lat) or \
            not is_compact_element(lat, lat.top):
        return Verdict.hyp(reason="carrier hypotheses fail")
    compact_side = space.is_compact_space().holds
    max_sigma = mask_of(s for s in space.points()
                        if lat.up[s] & space.sigma & ~(1 << s) == 0)
    bounded = all(lat.up[x] & max_sigma for x in space.points())
    max_space = LowerSpace(lat, max_sigma, label="max-of-sigma")
    other_side = bounded and max_space.is_compact_space().holds
    if compact_side == other_side:
        return Verdict.ok(compact=compact_side, bounded_by_max=bounded)
    return Verdict.cex({"compact": compact_side, "bounded": bounded,
                        "max_sigma": tuple(bits(max_sigma))})


def _check_irrc(space):
    irreducible = set(space.irreducible_closed_sets())
    for p in space.points():
        v = space.v_set(p)
        cl = space.closure(1 << p)
        if v != cl:
            return Verdict.cex({"x": p, "v": tuple(bits(v)),
                                "closure": tuple(bits(cl))})
        if v not in irreducible:
            return Verdict.cex({"x": p, "v": tuple(bits(v))},
                               reason="v(x) not irreducible")
    return Verdict.ok()


def _check_spiir(lat):
    space = get_space(lat, ClassTag.PROP)
    irreducible = set(space.irreducible_closed_sets())
    for v, gens in space.subbasis.items():
        if v and v not in irreducible:
            return Verdict.cex({"x": gens[0], "v": tuple(bits(v))})
    return Verdict.ok()


def _check_zariski_t1(lat, space):
    if not is_compactly_generated(lat) or \
            not is_compact_element(lat, lat.top):
        return Verdict.hyp(reason="carrier hypotheses fail")
    t1 = space.is_T1().holds
    max_mask = classify(lat, ClassTag.MAX)
    corrected_rhs = space.sigma & ~max_mask == 0
    literal_rhs = max_mask & ~space.sigma == 0
    details = {
        "t1": t1,
        "sigma_within_max": corrected_rhs,
        "max_within_sigma": literal_rhs,
        "corrected_agrees": t1 == corrected_rhs,
        "literal_agrees": t1 == literal_rhs,
    }
    if not details["corrected_agrees"]:
        if t1:
            details["witness"] = {"non_maximal_point":
                                  next(bits(space.sigma & ~max_mask))}
        else:
            details["witness"] = space.is_T1().witness
    return Verdict.ok(**details)


def _check_sob(space):
    direct = space.is_sober()
    criterion = space.sober_criterion()
    if direct.holds == criterion.holds:
        return Verdict.ok(sober=direct.status, criterion=criterion.status)
    return Verdict.cex({
        "sober": direct.status, "sober_witness": direct.witness,
        "criterion": criterion.status, "criterion_witness": criterion.witness,
    })


def _check_qss(lat):
    for tag in (ClassTag.PROP, ClassTag.SPEC, ClassTag.IRR_STRONG):
        verdict = get_space(lat, tag).is_sober()
        if not verdict.holds:
            return Verdict.cex({"class": tag.value,
                                "witness": verdict.witness})
    return Verdict.ok()


def _check_tsqs(lat):
    if not _finite_hypotheses(lat):
        return Verdict.hyp(reason="carrier hypotheses fail")
    verdict = get_space(lat, ClassTag.PROP).is_spectral()
    return verdict if verdict.holds else Verdict.cex(verdict.witness)


def _check_pr1(lat, space):
    max_mask = classify(lat, ClassTag.MAX)
    if jacobson(lat) != lat.bot:
        return Verdict.hyp(reason="Jacobson radical is not bottom")
    if max_mask & ~space.sigma:
        return Verdict.hyp(reason="sigma misses a maximal element")
    split = space.strongly_disconnects()
    if not split.holds:
        return Verdict.ok(disconnected=False)
    idem = classify(lat, ClassTag.IDEM)
    nontrivial = idem & ~(1 << lat.bot) & ~(1 << lat.top)
    if nontrivial:
        return Verdict.ok(disconnected=True,
                          idempotent=next(bits(nontrivial)),
                          split=split.witness)
    return Verdict.cex({"split": split.witness},
                       reason="no nontrivial idempotent")


def _check_conn(lat, space):
    if not (space.sigma >> lat.bot) & 1:
        return Verdict.hyp(reason="bottom element not in sigma")
    verdict = space.is_connected()
    return verdict if verdict.holds else Verdict.cex(verdict.witness)


def _hom_family(lat):
    """Identity plus, for divisor quantales, every quotient map."""
    def build():
        family = [("identity", identity_hom(lat))]
        if lat.divisor_modulus:
            m = lat.divisor_modulus
            for n in sorted(divisors_of(m)):
                if n == m:
                    continue
                target = build_divisor_quantale(n)
                family.append((f"divisor-quotient:{m}->{n}",
                               divisor_quotient_hom(lat, target)))
        return tuple(family)
    return lat.cached(("hom-family",), build)


def _check_conmap(lat, tag, which):
    evaluated = 0
    for key, hom in _hom_family(lat):
        if not has_contraction_property(hom, tag).holds:
            continue
        evaluated += 1
        if which == 1:
            verdict = check_continuity(hom, tag)
        elif which == 2:
            try:
                verdict = check_embedding(hom, tag)
            except NotSurjective:
                continue
        else:
            verdict = check_density(hom, tag)
        if not verdict.holds:
            witness = {"hom": key, "map": list(hom.map),
                       "target": serialize_latfile(hom.target),
                       "inner": verdict.witness, "details": verdict.details}
            return Verdict.cex(witness)
    if evaluated == 0:
        return Verdict.hyp(reason="no hom satisfies the contraction property")
    return Verdict.ok(homs=evaluated)


def _check_density(lat, which):
    verdict = check_subspace_density(lat)
    d = verdict.details
    if which == "max":
        corrected = d["max_dense"] == d["jac_eq_srad"]
        literal = d["max_dense"] == d["prad_eq_srad"]
    else:
        corrected = d["spec_dense"] == d["prad_eq_srad"]
        literal = d["spec_dense"] == d["jac_eq_srad"]
    details = dict(d)
    details["literal_agrees"] = literal
    if corrected:
        return Verdict.ok(**details)
    return Verdict.cex(dict(d), **details)


def check(lat, sigma_tag, theorem_id):
    """Evaluate one statement on one lattice (and class, where relevant)."""
    tid = theorem_id.upper()
    if tid not in THEOREM_IDS:
        raise UnknownTheorem(theorem_id)
    if tid in TAGGED_IDS and sigma_tag is None:
        raise ValueError(f"{tid} needs a class tag")
    space = get_space(lat, sigma_tag) if tid in TAGGED_IDS else None
    if tid.startswith("BIP"):
        return _check_bip(lat, int(tid[3]))
    if tid == "HKT":
        return _check_hkt(space)
    if tid == "HRRAD":
        return space.check_v_radical()
    if tid.startswith("HRX"):
        return space.check_hrx(int(tid[3]))
    if tid == "LFC":
        return space.check_lfc()
    if tid == "CSB":
        return _check_csb(lat, space)
    if tid == "CQC":
        return _check_cqc(lat, space)
    if tid == "T0A":
        return space.is_T0()
    if tid == "IRRC":
        return _check_irrc(space)
    if tid == "SPIIR":
        return _check_spiir(lat)
    if tid == "ZARISKI_T1":
        return _check_zariski_t1(lat, space)
    if tid == "SOB":
        return _check_sob(space)
    if tid == "QSS":
        return _check_qss(lat)
    if tid == "TSQS":
        return _check_tsqs(lat)
    if tid == "PR1":
        return _check_pr1(lat, space)
    if tid == "CONN":
        return _check_conn(lat, space)
    if tid == "CONMAP1":
        return _check_conmap(lat, sigma_tag, 1)
    if tid == "CONMAP2":
        return _check_conmap(lat, sigma_tag, 2)
    if tid == "CONMAP3":
        return _check_conmap(lat, sigma_tag, 3)
    if tid == "DENSITY_MAX":
        return _check_density(lat, "max")
    if tid == "DENSITY_SPEC":
        return _check_density(lat, "spec")
    raise UnknownTheorem(theorem_id)


# -- report --------------------------------------------------------------------


@dataclass
class Tally:
    holds: int = 0
    hyp_fail: int = 0
    cex: int = 0

    def add(self, status):
        if status == HOLDS:
            self.holds += 1
        elif status == HYPOTHESIS_NOT_MET:
            self.hyp_fail += 1
        else:
            self.cex += 1


def _json(obj):
    return json.dumps(obj, sort_keys=True, separators=(",", ":"),
                      default=str)


@dataclass
class Report:
    corpus_desc: str
    theorems: tuple
    tallies: dict = field(default_factory=dict)
    counterexamples: list = field(default_factory=list)
    discrepancies: list = field(default_factory=list)
    reading_totals: dict = field(default_factory=dict)
    lattice_files: dict = field(default_factory=dict)

    @property
    def exit_status(self):
        return 1 if self.counterexamples else 0

    def tally(self, tid):
        return self.tallies.setdefault(tid, Tally())

    def render(self):
        lines = [f"CORPUS {self.corpus_desc}"]
        for tid in self.theorems:
            t = self.tallies.get(tid, Tally())
            lines.append(f"THEOREM {tid} holds={t.holds} "
                         f"hyp_fail={t.hyp_fail} cex={t.cex}")
        for (tid, reading) in TRACKED_READINGS:
            if (tid, reading) in self.reading_totals:
                agree, total = self.reading_totals[(tid, reading)]
                lines.append(f"READING {tid} {reading} agree={agree}/{total}")
        shown = {}
        for rec in self.discrepancies:
            slot = (rec["theorem"], rec["reading"])
            shown[slot] = shown.get(slot, 0) + 1
            if shown[slot] > DISCREPANCY_EXHIBIT_LIMIT:
                continue  # full counts live on the READING lines
            lines.append(
                f"DISCREPANCY {rec['theorem']} {rec['reading']} "
                f"lattice={rec['lattice']} sigma={rec['sigma']} "
                f"detail={_json(rec['detail'])}")
        for rec in self.counterexamples:
            lines.append(
                f"CEX {rec['theorem']} lattice={rec['lattice']} "
                f"sigma={rec['sigma']} witness={_json(rec['witness'])}")
        for key in sorted(self.lattice_files):
            lines.append(f"LATTICE {key}")
            for row in self.lattice_files[key].rstrip("\n").split("\n"):
                lines.append(f"  {row}")
        return "\n".join(lines) + "\n"


def _track_readings(report, tid, key, tag_value, verdict):
    d = verdict.details
    if tid == "ZARISKI_T1" and "corrected_agrees" in d:
        for reading, agrees in (("literal", d["literal_agrees"]),
                                ("corrected", d["corrected_agrees"])):
            agree, total = report.reading_totals.get((tid, reading), (0, 0))
            report.reading_totals[(tid, reading)] = (agree + agrees, total + 1)
            if not agrees:
                report.discrepancies.append({
                    "theorem": tid, "reading": reading, "lattice": key,
                    "sigma": tag_value,
                    "detail": {"t1": d["t1"],
                               "sigma_within_max": d["sigma_within_max"],
                               "max_within_sigma": d["max_within_sigma"]},
                })
    elif tid == "HRRAD" and "equality_reading_agrees" in d:
        agrees = d["equality_reading_agrees"]
        agree, total = report.reading_totals.get((tid, "equality"), (0, 0))
        report.reading_totals[(tid, "equality")] = (agree + agrees, total + 1)
        if not agrees:
            report.discrepancies.append({
                "theorem": tid, "reading": "equality", "lattice": key,
                "sigma": tag_value,
                "detail": {"v_eq_all": d["v_eq_all"],
                           "equals_rad": d["equals_rad"]},
            })
    elif tid in ("DENSITY_MAX", "DENSITY_SPEC") and "literal_agrees" in d:
        agrees = d["literal_agrees"]
        agree, total = report.reading_totals.get((tid, "literal"), (0, 0))
        report.reading_totals[(tid, "literal")] = (agree + agrees, total + 1)
        if not agrees:
            report.discrepancies.append({
                "theorem": tid, "reading": "literal", "lattice": key,
                "sigma": tag_value,
                "detail": {k: v for k, v in d.items() if isinstance(v, bool)},
            })


def run_checks(items, theorems=None, sigma_tags=None, corpus_desc="explicit"):
    """Evaluate statements over explicit (key, lattice) pairs."""
    theorems = tuple(t.upper() for t in (theorems or THEOREM_IDS))
    for tid in theorems:
        if tid not in THEOREM_IDS:
            raise UnknownTheorem(tid)
    sigma_tags = tuple(ClassTag(t) for t in (sigma_tags or DEFAULT_SIGMA_TAGS))
    report = Report(corpus_desc=corpus_desc, theorems=theorems)
    for key, lat in items:
        for tid in theorems:
            tags = sigma_tags if tid in TAGGED_IDS else (None,)
            for tag in tags:
                tag_value = tag.value if tag else "-"
                verdict = check(lat, tag, tid)
                report.tally(tid).add(verdict.status)
                _track_readings(report, tid, key, tag_value, verdict)
                if verdict.status == COUNTEREXAMPLE:
                    latfile = serialize_latfile(lat)
                    report.counterexamples.append({
                        "theorem": tid, "lattice": key, "sigma": tag_value,
                        "witness": verdict.witness,
                        "details": verdict.details,
                        "latfile": latfile,
                    })
                    report.lattice_files.setdefault(key, latfile)
    report.counterexamples.sort(
        key=lambda r: (THEOREM_IDS.index(r["theorem"]), r["lattice"],
                       r["sigma"]))
    report.discrepancies.sort(
        key=lambda r: (THEOREM_IDS.index(r["theorem"]), r["reading"],
                       r["lattice"], r["sigma"]))
    return report


def run_corpus(spec=None, theorems=None, sigma_tags=None):
    spec = spec or CorpusSpec()
    return run_checks(corpus_items(spec), theorems, sigma_tags,
                      corpus_desc=spec.describe())


def replay_counterexample(record):
    """Re-run a reported counterexample from its serialized payload."""
    lat = lattice_from_latfile(parse_latfile(record["latfile"]))
    tid = record["theorem"]
    tag = None if record["sigma"] == "-" else ClassTag(record["sigma"])
    if tid.startswith("CONMAP") and isinstance(record.get("witness"), dict) \
            and "map" in record["witness"]:
        from .homs import validate_hom

        target = lattice_from_latfile(
            parse_latfile(record["witness"]["target"]))
        hom = validate_hom(lat, target, record["witness"]["map"])
        which = int(tid[-1])
        if which == 1:
            return check_continuity(hom, tag)
        if which == 2:
            return check_embedding(hom, tag)
        return check_density(hom, tag)
    return check(lat, tag, tid)
