import random
from pathlib import Path

import pytest

from latkit.lattice import (build_chain_quantale, build_divisor_quantale,
                            build_powerset_frame)
from latkit.latfile import (DimensionMismatch, DuplicateSection, HomBlock,
                            IndexOutOfRange, LatFileError, LatSyntaxError,
                            emit_dot, emit_space_dot, latfile_of,
                            lattice_from_latfile, parse_latfile,
                            serialize_latfile)
from latkit.topology import LowerSpace

GOLDEN = Path(__file__).parent / "golden"

CANONICAL_2CHAIN = """N 2
ORDER
11
01
MUL
0 0
0 1
"""


def test_canonical_two_chain_round_trip():
    parsed = parse_latfile(CANONICAL_2CHAIN)
    assert serialize_latfile(parsed) == CANONICAL_2CHAIN
    lat = lattice_from_latfile(parsed)
    assert lat.n == 2 and lat.bot == 0


def test_comments_and_blank_lines():
    text = "# header\n\nN 2   # two elements\nORDER\n11\n01\n\nMUL\n0 0\n0 1\n"
    lat = lattice_from_latfile(parse_latfile(text))
    assert lat.n == 2


def test_round_trip_is_identity_on_corpus():
    for lat in [build_divisor_quantale(12), build_divisor_quantale(60),
                build_powerset_frame(3), build_chain_quantale(5, "meet")]:
        text = serialize_latfile(lat)
        again = lattice_from_latfile(parse_latfile(text))
        assert again.up == lat.up
        assert again.mul_tab == lat.mul_tab
        assert again.names == lat.names
        assert serialize_latfile(parse_latfile(text)) == text


def test_golden_d12_latfile():
    text = serialize_latfile(build_divisor_quantale(12))
    assert text == (GOLDEN / "d12.lat").read_text(encoding="utf-8")


def test_order_row_length_error_positioned():
    text = "N 3\nORDER\n111\n01\n001\nMUL\n0 0 0\n0 1 1\n0 1 2\n"
    with pytest.raises(DimensionMismatch) as err:
        parse_latfile(text)
    assert err.value.line == 4


def test_order_bad_digit_column():
    with pytest.raises(LatSyntaxError) as err:
        parse_latfile("N 2\nORDER\n1x\n01\nMUL\n0 0\n0 1\n")
    assert (err.value.line, err.value.col) == (3, 2)


def test_mul_index_out_of_range():
    with pytest.raises(IndexOutOfRange) as err:
        parse_latfile("N 2\nORDER\n11\n01\nMUL\n0 9\n0 1\n")
    assert err.value.line == 6


def test_duplicate_sections():
    with pytest.raises(DuplicateSection):
        parse_latfile("N 2\nN 2\n")
    with pytest.raises(DuplicateSection):
        parse_latfile("N 1\nSIGMA a 0\nSIGMA a 0\n")


def test_names_arity():
    with pytest.raises(DimensionMismatch):
        parse_latfile("N 2\nNAMES only\n")


def test_sections_need_n_first():
    with pytest.raises(LatSyntaxError):
        parse_latfile("ORDER\n1\n")
    with pytest.raises(LatSyntaxError):
        parse_latfile("SIGMA a 0\n")


def test_missing_sections_rejected_at_lattice_build():
    with pytest.raises(LatSyntaxError):
        lattice_from_latfile(parse_latfile("N 2\n"))


def test_sigma_and_hom_blocks():
    text = CANONICAL_2CHAIN + "SIGMA odd 1\nHOM a.lat b.lat\n0 -> 0\n1 -> 1\n"
    parsed = parse_latfile(text)
    assert parsed.sigmas == {"odd": (1,)}
    assert parsed.homs[0].source_ref == "a.lat"
    assert parsed.homs[0].mapping == [(0, 0), (1, 1)]
    assert serialize_latfile(parsed) == text


def test_bare_hom_block():
    parsed = parse_latfile("HOM\n0 -> 2\n")
    assert parsed.homs[0].source_ref is None
    assert parsed.homs[0].mapping == [(0, 2)]


def test_serialize_of_latfile_object():
    lf = latfile_of(build_chain_quantale(2, "meet"),
                    sigmas={"pt": (0,)},
                    homs=[HomBlock(mapping=[(0, 0), (1, 1)])])
    text = serialize_latfile(lf)
    reparsed = parse_latfile(text)
    assert reparsed.sigmas == {"pt": (0,)}
    assert serialize_latfile(reparsed) == text


def test_parser_totality_under_mutation():
    base = serialize_latfile(build_divisor_quantale(12))
    rng = random.Random(20260810)
    alphabet = "01 ->#NORDERMULSIGMAH\nabcxyz9"
    for _ in range(2000):
        chars = list(base)
        for _ in range(rng.randint(1, 4)):
            op = rng.randrange(3)
            pos = rng.randrange(len(chars))
            if op == 0:
                chars[pos] = rng.choice(alphabet)
            elif op == 1:
                chars.insert(pos, rng.choice(alphabet))
            elif len(chars) > 1:
                del chars[pos]
        mutant = "".join(chars)
        try:
            parse_latfile(mutant)
        except LatFileError as exc:
            assert exc.line >= 1 and exc.col >= 1
    # bytes input is accepted and decode errors are positioned
    with pytest.raises(LatFileError):
        parse_latfile(b"N 1\xff\xfe")


def test_golden_dot():
    dot = emit_dot(build_divisor_quantale(12))
    assert dot == (GOLDEN / "d12.dot").read_text(encoding="utf-8")
    assert dot.count("->") == 7
    assert dot.count("[label=") == 6


def test_dot_single_node():
    dot = emit_dot(build_divisor_quantale(1))
    assert dot.count("[label=") == 1
    assert "->" not in dot


def test_dot_is_acyclic():
    lat = build_powerset_frame(3)
    edges = [(i, j) for i, j in lat.covers()]
    # follow edges upward; a cycle would revisit a node on the path
    adj = {}
    for a, b in edges:
        adj.setdefault(a, []).append(b)

    def dfs(node, seen):
        assert node not in seen
        for nxt in adj.get(node, []):
            dfs(nxt, seen | {node})

    for start in range(lat.n):
        dfs(start, frozenset())


def test_space_dot_mentions_closures():
    lat = build_divisor_quantale(12)
    dot = emit_space_dot(LowerSpace(lat, "spec"))
    assert "closed sets: 4" in dot
    assert dot.count("[label=") == 2
