"""The .lat text format: parsing, canonical serialization, DOT output.

A file holds an ``N`` count, optional ``NAMES``, an ``ORDER`` block of n
rows of n characters over {0,1} (row i, column j is 1 iff element i <=
element j), a ``MUL`` block of n rows of n indices, any number of named
``SIGMA`` index lists, and ``HOM`` blocks carrying optional source/target
file references plus ``i -> j`` mapping lines.  ``#`` starts a comment,
blank lines are ignored.  Canonical output uses a fixed section order and
single spaces, so serialize(parse(text)) == text for canonical files.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from .lattice import MultLattice, bits, validate_lattice

__all__ = [
    "LatFileError",
    "LatSyntaxError",
    "DimensionMismatch",
    "IndexOutOfRange",
    "DuplicateSection",
    "HomBlock",
    "LatFile",
    "parse_latfile",
    "serialize_latfile",
    "lattice_from_latfile",
    "latfile_of",
    "emit_dot",
    "emit_space_dot",
]


class LatFileError(Exception):
    """Base parse error; always carries a 1-based position."""

    def __init__(self, message, line, col=1):
        self.line = line
        self.col = col
        super().__init__(f"line {line}, col {col}: {message}")


class LatSyntaxError(LatFileError):
    def __init__(self, expected, line, col=1):
        self.expected = expected
        super().__init__(f"expected {expected}", line, col)


class DimensionMismatch(LatFileError):
    pass


class IndexOutOfRange(LatFileError):
    pass


class DuplicateSection(LatFileError):
    pass


@dataclass
class HomBlock:
    source_ref: str | None = None
    target_ref: str | None = None
    mapping: list = field(default_factory=list)  # (source idx, target idx)


@dataclass
class LatFile:
    n: int | None = None
    names: list | None = None
    order_rows: list | None = None
    mul_rows: list | None = None
    sigmas: dict = field(default_factory=dict)
    homs: list = field(default_factory=list)


_SECTION_WORDS = {"N", "NAMES", "ORDER", "MUL", "SIGMA", "HOM"}
_NAME_RE = re.compile(r"^[A-Za-z0-9_+\-]+$")
_ARROW_RE = re.compile(r"^(\d+)\s*->\s*(\d+)$")


def _strip_comment(raw):
    cut = raw.find("#")
    return raw if cut < 0 else raw[:cut]


def parse_latfile(text):
    """Parse text into a LatFile; every rejection carries line/col."""
    if isinstance(text, bytes):
        try:
            text = text.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise LatSyntaxError("UTF-8 text", 1, exc.start + 1) from None
    out = LatFile()
    lines = text.split("\n")
    i = 0

    def content_at(k):
        return _strip_comment(lines[k]).rstrip()

    def next_content(k):
        while k < len(lines) and not content_at(k).strip():
            k += 1
        return k

    while True:
        i = next_content(i)
        if i >= len(lines):
            break
        line = content_at(i)
        stripped = line.strip()
        col = line.index(stripped[0]) + 1
        word = stripped.split()[0]
        lineno = i + 1
        if word == "N":
            if out.n is not None:
                raise DuplicateSection("second N section", lineno, col)
            parts = stripped.split()
            if len(parts) != 2 or not parts[1].isdigit() or int(parts[1]) < 1:
                raise LatSyntaxError("N <positive count>", lineno, col)
            out.n = int(parts[1])
            i += 1
        elif word == "NAMES":
            if out.names is not None:
                raise DuplicateSection("second NAMES section", lineno, col)
            if out.n is None:
                raise LatSyntaxError("N before NAMES", lineno, col)
            tokens = stripped.split()[1:]
            if len(tokens) != out.n:
                raise DimensionMismatch(
                    f"NAMES needs {out.n} tokens, got {len(tokens)}",
                    lineno, col)
            out.names = tokens
            i += 1
        elif word == "ORDER":
            if out.order_rows is not None:
                raise DuplicateSection("second ORDER section", lineno, col)
            if out.n is None:
                raise LatSyntaxError("N before ORDER", lineno, col)
            if stripped != "ORDER":
                raise LatSyntaxError("bare ORDER line", lineno, col)
            rows = []
            i += 1
            for r in range(out.n):
                i = next_content(i)
                if i >= len(lines):
                    raise LatSyntaxError(f"ORDER row {r}", len(lines), 1)
                row = content_at(i).strip()
                if len(row) != out.n:
                    raise DimensionMismatch(
                        f"ORDER row of length {out.n}, got {len(row)}",
                        i + 1, 1)
                bad = next((c for c, ch in enumerate(row) if ch not in "01"),
                           None)
                if bad is not None:
                    raise LatSyntaxError("0/1 digits", i + 1, bad + 1)
                rows.append([1 if ch == "1" else 0 for ch in row])
                i += 1
            out.order_rows = rows
        elif word == "MUL":
            if out.mul_rows is not None:
                raise DuplicateSection("second MUL section", lineno, col)
            if out.n is None:
                raise LatSyntaxError("N before MUL", lineno, col)
            if stripped != "MUL":
                raise LatSyntaxError("bare MUL line", lineno, col)
            rows = []
            i += 1
            for r in range(out.n):
                i = next_content(i)
                if i >= len(lines):
                    raise LatSyntaxError(f"MUL row {r}", len(lines), 1)
                toks = content_at(i).split()
                if len(toks) != out.n:
                    raise DimensionMismatch(
                        f"MUL row of {out.n} entries, got {len(toks)}",
                        i + 1, 1)
                row = []
                for t in toks:
                    if not t.isdigit():
                        raise LatSyntaxError("index", i + 1,
                                             content_at(i).index(t) + 1)
                    v = int(t)
                    if v >= out.n:
                        raise IndexOutOfRange(
                            f"index {v} >= {out.n}", i + 1,
                            content_at(i).index(t) + 1)
                    row.append(v)
                rows.append(row)
                i += 1
            out.mul_rows = rows
        elif word == "SIGMA":
            if out.n is None:
                raise LatSyntaxError("N before SIGMA", lineno, col)
            parts = stripped.split()
            if len(parts) < 2 or not _NAME_RE.match(parts[1]):
                raise LatSyntaxError("SIGMA <name> <indices...>", lineno, col)
            name = parts[1]
            if name in out.sigmas:
                raise DuplicateSection(f"second SIGMA {name}", lineno, col)
            members = []
            for t in parts[2:]:
                if not t.isdigit():
                    raise LatSyntaxError("index", lineno,
                                         stripped.index(t) + col)
                v = int(t)
                if v >= out.n:
                    raise IndexOutOfRange(f"index {v} >= {out.n}",
                                          lineno, stripped.index(t) + col)
                members.append(v)
            out.sigmas[name] = tuple(members)
            i += 1
        elif word == "HOM":
            parts = stripped.split()
            if len(parts) not in (1, 3):
                raise LatSyntaxError("HOM [<source> <target>]", lineno, col)
            block = HomBlock(source_ref=parts[1] if len(parts) == 3 else None,
                             target_ref=parts[2] if len(parts) == 3 else None)
            i += 1
            while True:
                i = next_content(i)
                if i >= len(lines):
                    break
                body = content_at(i).strip()
                if body.split()[0] in _SECTION_WORDS:
                    break
                m = _ARROW_RE.match(body)
                if not m:
                    raise LatSyntaxError("i -> j", i + 1, 1)
                block.mapping.append((int(m.group(1)), int(m.group(2))))
                i += 1
            out.homs.append(block)
        else:
            raise LatSyntaxError("a section keyword", lineno, col)
    return out


def lattice_from_latfile(parsed):
    """Validate the ORDER/MUL payload of a parsed file into a lattice."""
    if parsed.n is None or parsed.order_rows is None or parsed.mul_rows is None:
        raise LatSyntaxError("N, ORDER and MUL sections", 1, 1)
    return validate_lattice(parsed.order_rows, parsed.mul_rows,
                            names=parsed.names)


def latfile_of(lat, sigmas=None, homs=None):
    """LatFile carrying a lattice plus optional extras."""
    out = LatFile(
        n=lat.n,
        names=list(lat.names) if lat.names else None,
        order_rows=[[1 if lat.leq(i, j) else 0 for j in range(lat.n)]
                    for i in range(lat.n)],
        mul_rows=[list(row) for row in lat.mul_tab],
    )
    if sigmas:
        out.sigmas = {k: tuple(v) for k, v in sigmas.items()}
    if homs:
        out.homs = list(homs)
    return out


def serialize_latfile(obj, sigmas=None, homs=None):
    """Canonical text form: fixed section order, single spaces."""
    parsed = obj if isinstance(obj, LatFile) else latfile_of(obj, sigmas, homs)
    chunks = []
    if parsed.n is not None:
        chunks.append(f"N {parsed.n}")
    if parsed.names is not None:
        chunks.append("NAMES " + " ".join(parsed.names))
    if parsed.order_rows is not None:
        chunks.append("ORDER")
        for row in parsed.order_rows:
            chunks.append("".join("1" if v else "0" for v in row))
    if parsed.mul_rows is not None:
        chunks.append("MUL")
        for row in parsed.mul_rows:
            chunks.append(" ".join(str(v) for v in row))
    for name in sorted(parsed.sigmas):
        chunks.append(f"SIGMA {name} " +
                      " ".join(str(v) for v in parsed.sigmas[name]))
    for block in parsed.homs:
        if block.source_ref and block.target_ref:
            chunks.append(f"HOM {block.source_ref} {block.target_ref}")
        else:
            chunks.append("HOM")
        for a, b in block.mapping:
            chunks.append(f"{a} -> {b}")
    return "\n".join(chunks) + "\n"


def _quote(label):
    return '"' + label.replace("\\", "\\\\").replace('"', '\\"') + '"'


def emit_dot(lat):
    """Hasse diagram of the lattice: covering edges only, bottom lowest."""
    lines = ["digraph lattice {", "  rankdir=BT;"]
    for i in range(lat.n):
        lines.append(f"  n{i} [label={_quote(lat.name_of(i))}];")
    for i, j in sorted(lat.covers()):
        lines.append(f"  n{i} -> n{j};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def emit_space_dot(space):
    """Specialization order of a lower space, annotated with closures."""
    lat = space.lattice
    pts = list(space.points())
    closed_count = len(space.generate_closed_sets())
    lines = ["digraph lower_space {", "  rankdir=BT;",
             f"  label=\"closed sets: {closed_count}\";"]
    for p in pts:
        cl = space.closure(1 << p)
        members = ",".join(lat.name_of(q) for q in bits(cl))
        lines.append(
            f"  n{p} [label={_quote(lat.name_of(p) + ' cl={' + members + '}')}];")
    pset = set(pts)
    for p in pts:
        for q in bits(lat.up[p] & space.sigma & ~(1 << p)):
            if q not in pset:
                continue
            between = lat.up[p] & lat.down[q] & space.sigma & ~(1 << p) & ~(1 << q)
            if between == 0:
                lines.append(f"  n{p} -> n{q};")
    lines.append("}")
    return "\n".join(lines) + "\n"
