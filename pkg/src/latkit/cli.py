"""Command-line interface.

Exit codes: 0 when everything checked holds, 1 when some check produced a
counterexample (or the input fails lattice validation), 2 on usage or
parse errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .classes import ClassTag, classify
from .harness import (DEFAULT_SIGMA_TAGS, THEOREM_IDS, CorpusSpec,
                      UnknownTheorem, corpus_items, run_checks)
from .homs import (ContractionPropertyFails, HomViolation, NotSurjective,
                   check_continuity, check_density, check_embedding,
                   has_contraction_property, validate_hom)
from .lattice import BoundExceeded, LatticeError, bits, enumerate_lattices
from .latfile import (LatFileError, emit_dot, emit_space_dot,
                      lattice_from_latfile, parse_latfile, serialize_latfile)
from .topology import COUNTEREXAMPLE, FamilyTooLarge, LowerSpace

_CLASS_TOKENS = ", ".join(t.value for t in ClassTag)


def _compact(obj):
    return json.dumps(obj, sort_keys=True, separators=(",", ":"), default=str)


def _load(path):
    return parse_latfile(Path(path).read_text(encoding="utf-8"))


def _sigma_mask(lat, parsed, token):
    if token.startswith("custom:"):
        name = token[len("custom:"):]
        if name not in parsed.sigmas:
            raise LatFileError(f"no SIGMA {name} in file", 1)
        mask = 0
        for i in parsed.sigmas[name]:
            mask |= 1 << i
        return mask, token
    return classify(lat, ClassTag(token)), token


def _cmd_validate(args):
    parsed = _load(args.file)
    try:
        lat = lattice_from_latfile(parsed)
    except LatticeError as exc:
        print(f"invalid: {exc}", file=sys.stderr)
        return 1
    print(f"valid multiplicative lattice: n={lat.n} "
          f"bot={lat.name_of(lat.bot)} top={lat.name_of(lat.top)}")
    return 0


def _cmd_classify(args):
    parsed = _load(args.file)
    lat = lattice_from_latfile(parsed)
    mask, token = _sigma_mask(lat, parsed, args.cls)
    print(f"{token} size={mask.bit_count()}")
    for i in bits(mask):
        print(f"{i} {lat.name_of(i)}")
    return 0


_TOPOLOGY_CHECKS = (
    "forms_closed_topology", "hkp_property", "is_T0", "is_T1", "is_sober",
    "sober_criterion", "is_compact_space", "is_connected", "is_spectral",
    "check_v_radical", "check_hrx", "check_lfc",
)


def _cmd_topology(args):
    parsed = _load(args.file)
    lat = lattice_from_latfile(parsed)
    mask, token = _sigma_mask(lat, parsed, args.sigma)
    space = LowerSpace(lat, mask, label=token)
    print(f"sigma={token} size={space.size}")
    print(f"subbasis={len(space.subbasis)}")
    print(f"closed_sets={len(space.generate_closed_sets())}")
    status = 0
    for name in _TOPOLOGY_CHECKS:
        verdict = getattr(space, name)()
        line = f"{name} {verdict.status}"
        if verdict.witness is not None:
            line += f" witness={_compact(verdict.witness)}"
        if verdict.details:
            line += f" details={_compact(verdict.details)}"
        print(line)
        if verdict.status == COUNTEREXAMPLE:
            status = 1
    for subfamily in (False, True):
        verdict = space.strongly_disconnects(subfamily=subfamily)
        kind = "subfamily" if subfamily else "pair"
        found = "yes" if verdict.holds else "no"
        line = f"strongly_disconnects[{kind}] {found}"
        if verdict.witness is not None:
            line += f" witness={_compact(verdict.witness)}"
        print(line)
    return status


def _parse_theorems(text):
    if text in (None, "all"):
        return None
    return [t for t in text.split(",") if t]


def _cmd_check(args):
    theorems = _parse_theorems(args.theorems)
    tags = args.sigma.split(",") if args.sigma else None
    if args.corpus:
        spec = CorpusSpec.parse(args.corpus)
        report = run_checks(corpus_items(spec), theorems, tags,
                            corpus_desc=spec.describe())
    else:
        parsed = _load(args.file)
        lat = lattice_from_latfile(parsed)
        key = Path(args.file).stem
        report = run_checks([(key, lat)], theorems, tags, corpus_desc=key)
    sys.stdout.write(report.render())
    return report.exit_status


def _cmd_hom(args):
    src = lattice_from_latfile(_load(args.source))
    dst = lattice_from_latfile(_load(args.target))
    parsed = _load(args.homfile)
    if not parsed.homs:
        raise LatFileError("no HOM block in hom file", 1)
    pairs = parsed.homs[0].mapping
    mapping = [None] * src.n
    for a, b in pairs:
        if a >= src.n or b >= dst.n:
            raise LatFileError(f"hom entry {a} -> {b} out of range", 1)
        mapping[a] = b
    if None in mapping:
        missing = mapping.index(None)
        print(f"hom is not total: source index {missing} unmapped",
              file=sys.stderr)
        return 1
    try:
        hom = validate_hom(src, dst, mapping)
    except HomViolation as exc:
        print(f"invalid hom: {exc}", file=sys.stderr)
        return 1
    print(f"valid hom; kernel element = "
          f"{src.name_of(hom.adjoint[dst.bot])}")
    tag = ClassTag(args.cls)
    contraction_ok = has_contraction_property(hom, tag)
    print(f"contraction_property[{tag.value}] {contraction_ok.status}")
    status = 0
    wanted = (("continuity", check_continuity), ("embedding", check_embedding),
              ("density", check_density))
    if args.check != "all":
        wanted = tuple(w for w in wanted if w[0] == args.check)
    for name, fn in wanted:
        try:
            verdict = fn(hom, tag)
        except ContractionPropertyFails as exc:
            print(f"{name} blocked: {exc}")
            status = 1
            continue
        except NotSurjective as exc:
            print(f"{name} blocked: {exc}")
            status = 1
            continue
        line = f"{name} {verdict.status}"
        if verdict.witness is not None:
            line += f" witness={_compact(verdict.witness)}"
        if verdict.details:
            line += f" details={_compact(verdict.details)}"
        print(line)
        if verdict.status == COUNTEREXAMPLE:
            status = 1
    return status


def _cmd_enumerate(args):
    out_dir = Path(args.out) if args.out else None
    if out_dir:
        out_dir.mkdir(parents=True, exist_ok=True)
    count = 0
    for idx, lat in enumerate(enumerate_lattices(args.max_size)):
        text = serialize_latfile(lat)
        if out_dir:
            (out_dir / f"enum-{lat.n}-{idx}.lat").write_text(
                text, encoding="utf-8")
        else:
            if count:
                print()
            sys.stdout.write(text)
        count += 1
    print(f"# {count} lattices", file=sys.stderr)
    return 0


def _cmd_dot(args):
    parsed = _load(args.file)
    lat = lattice_from_latfile(parsed)
    if args.sigma:
        mask, token = _sigma_mask(lat, parsed, args.sigma)
        sys.stdout.write(emit_space_dot(LowerSpace(lat, mask, label=token)))
    else:
        sys.stdout.write(emit_dot(lat))
    return 0


def build_parser():
    parser = argparse.ArgumentParser(
        prog="latkit",
        description="finite multiplicative lattices and their lower spaces")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="validate a .lat file")
    p.add_argument("file")
    p.set_defaults(fn=_cmd_validate)

    p = sub.add_parser("classify", help="list the members of a class")
    p.add_argument("file")
    p.add_argument("--class", dest="cls", required=True,
                   help=f"one of: {_CLASS_TOKENS}, or custom:<name>")
    p.set_defaults(fn=_cmd_classify)

    p = sub.add_parser("topology", help="inspect a lower space")
    p.add_argument("file")
    p.add_argument("--sigma", required=True)
    p.set_defaults(fn=_cmd_topology)

    p = sub.add_parser("check", help="run the statement checkers")
    p.add_argument("file", nargs="?")
    p.add_argument("--corpus", help='"default" or key=value overrides')
    p.add_argument("--theorems", default="all",
                   help="all or comma-separated ids")
    p.add_argument("--sigma", help="comma-separated class tags")
    p.set_defaults(fn=_cmd_check)

    p = sub.add_parser("hom", help="check a lattice homomorphism")
    p.add_argument("source")
    p.add_argument("target")
    p.add_argument("homfile")
    p.add_argument("--class", dest="cls", required=True)
    p.add_argument("--check", default="all",
                   choices=("continuity", "embedding", "density", "all"))
    p.set_defaults(fn=_cmd_hom)

    p = sub.add_parser("enumerate", help="enumerate small lattices")
    p.add_argument("--max-size", type=int, default=5)
    p.add_argument("--out")
    p.set_defaults(fn=_cmd_enumerate)

    p = sub.add_parser("dot", help="emit a DOT diagram")
    p.add_argument("file")
    p.add_argument("--sigma")
    p.set_defaults(fn=_cmd_dot)
    return parser


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0
    if args.command == "check" and bool(args.file) == bool(args.corpus):
        print("check needs exactly one of <file> or --corpus",
              file=sys.stderr)
        return 2
    try:
        return args.fn(args)
    except (LatFileError, UnknownTheorem, ValueError, FileNotFoundError,
            BoundExceeded) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except LatticeError as exc:
        print(f"invalid lattice: {exc}", file=sys.stderr)
        return 1
    except FamilyTooLarge as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
