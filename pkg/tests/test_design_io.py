import pytest

from models.graph import Block, Design, DownLink, HostKind, HostSpec, P4
from models.schemas import WitnessManifest
from services.graph_core import verify_downlink
from utils.design_io import (
    canonical_text,
    is_bundle,
    parse_design,
    parse_design_with_comments,
    parse_downlink,
    parse_edge_list,
    parse_graph_arg,
    parse_host_arg,
    read_bundle,
    read_design,
    read_edge_host,
    read_text,
    serialize_design,
    write_bundle,
)
from utils.errors import DesignParseError, UsageError
from utils.settings import get_settings

K4_TEXT = """design P4 host=K 4
# two Hamiltonian paths
block 0 1 3 2
block 1 2 0 3
"""


@pytest.fixture
def k4_design():
    return parse_design(K4_TEXT)


def test_parse_design(k4_design):
    design, comments = parse_design_with_comments(K4_TEXT)
    assert design.host == HostSpec.complete(4)
    assert design.shape == P4
    assert [b.vertices for b in design.blocks] == [(0, 1, 3, 2), (1, 2, 0, 3)]
    assert comments == ["two Hamiltonian paths"]
    assert serialize_design(k4_design, comments) == K4_TEXT


def test_parse_bipartite_and_edge_hosts():
    d = parse_design("design P4 host=K 3 4\nblock 0 3 1 4\n")
    assert d.host == HostSpec.bipartite(3, 4)

    d = parse_design("\n\ndesign P4 host=edges\nblock 0 1 2 3\nedge 0 1\nedge 1 2\nedge 2 3\n")
    assert d.host.kind == HostKind.EDGES
    assert d.host.graph.size == 3
    assert parse_design(serialize_design(d)).host.graph.edges == d.host.graph.edges


@pytest.mark.parametrize("text, line", [
    ("", 1),
    ("design P4 K 4\n", 1),
    ("design Q4 host=K 4\n", 1),
    ("design P4 host=K 0\n", 1),
    ("design P4 host=K 4\nblock 0 1 2\n", 2),
    ("design P4 host=K 4\nblock 0 1 2 3\nblock 0 1 x 3\n", 3),
    ("design P4 host=K 4\n# note\nblock 0 1 -2 3\n", 3),
    ("design P4 host=K 4\n\nblok 0 1 2 3\n", 3),
    ("design P4 host=K 4\nedge 0 1\n", 2),
    ("design P4 host=edges\nedge 0 0\n", 2),
])
def test_parse_errors_carry_line_numbers(text, line):
    with pytest.raises(DesignParseError) as exc:
        parse_design(text)
    assert exc.value.line == line
    assert exc.value.exit_code == 3


def test_parse_host_arg():
    assert parse_host_arg("K9") == HostSpec.complete(9)
    assert parse_host_arg("K_9") == HostSpec.complete(9)
    assert parse_host_arg("K3,4") == HostSpec.bipartite(3, 4)
    assert parse_host_arg("k5x6") == HostSpec.bipartite(5, 6)
    with pytest.raises(UsageError):
        parse_host_arg("X9")


def test_edge_list_hosts(tmp_path):
    plain = tmp_path / "path.txt"
    plain.write_text("# a path\n0 1\nedge 1 2\n\n2 3\n", encoding="utf-8")
    host = parse_host_arg(f"edges:{plain}")
    assert host.kind == HostKind.EDGES
    assert host.graph.edges == frozenset({(0, 1), (1, 2), (2, 3)})
    assert parse_graph_arg(str(plain)) == host
    assert parse_graph_arg("K3,4") == HostSpec.bipartite(3, 4)

    design_file = tmp_path / "k4.pld"
    design_file.write_text(K4_TEXT, encoding="utf-8")
    assert read_edge_host(design_file) == HostSpec.complete(4)

    bad = tmp_path / "bad.txt"
    bad.write_text("0 1\n2 2\n", encoding="utf-8")
    with pytest.raises(DesignParseError) as exc:
        read_edge_host(bad)
    assert exc.value.line == 2
    with pytest.raises(DesignParseError):
        parse_edge_list("# nothing\n")


def test_unreadable_files_are_parse_errors(tmp_path):
    binary = tmp_path / "binary.pld"
    binary.write_bytes(b"design P4 host=K 4\nblock 0 1 2 3\nblock 1 \xff 0 3\n")
    with pytest.raises(DesignParseError) as exc:
        read_design(binary)
    assert exc.value.line == 3
    assert exc.value.exit_code == 3

    with pytest.raises(DesignParseError):
        read_text(tmp_path / "missing.pld")
    with pytest.raises(DesignParseError):
        read_text(tmp_path)


@pytest.mark.parametrize("name", ["k24x9_p5.pld", "k24x10_p4.pld"])
def test_canonical_text_is_stable(name):
    d = read_design(get_settings().catalog / name)
    text = canonical_text(d)
    assert canonical_text(parse_design(text)) == text
    assert text.count("\nblock ") == len(d)


def test_canonical_text_ignores_orientation(k4_design):
    flipped = Design(k4_design.host, P4, tuple(Block(P4, b.vertices[::-1]) for b in reversed(k4_design.blocks)))
    assert canonical_text(flipped) == canonical_text(k4_design)


def test_parse_downlink():
    domain, codomain, pairs = parse_downlink("# comment\ndownlink a.pld b.pld\nlink 0 1\n\nlink 1 0\n")
    assert (domain, codomain, pairs) == ("a.pld", "b.pld", [(0, 1), (1, 0)])
    with pytest.raises(DesignParseError):
        parse_downlink("")
    with pytest.raises(DesignParseError) as exc:
        parse_downlink("downlink a.pld b.pld\nlink 0\n")
    assert exc.value.line == 2


def test_bundle_round_trip(tmp_path, k4_design):
    dl = DownLink(k4_design, k4_design, ((0, 0), (1, 1)))
    manifest = WitnessManifest(gamma="P4", v=4, n=4, construction="identity", trace=["none"])
    target = tmp_path / "bundles" / "P4_v4_n4"

    write_bundle(target, manifest, dl, codomain_comments=["none"])
    assert is_bundle(target)
    assert sorted(p.name for p in target.iterdir()) == ["codomain.pld", "domain.pld", "link.pll", "manifest.json"]

    loaded, again = read_bundle(target)
    assert loaded == manifest
    assert again == dl
    assert verify_downlink(again).valid

    # rewriting replaces the bundle and leaves no staging directories behind
    write_bundle(target, manifest.model_copy(update={"construction": "again"}), dl)
    assert read_bundle(target)[0].construction == "again"
    assert [p.name for p in target.parent.iterdir()] == ["P4_v4_n4"]


def test_read_bundle_needs_manifest(tmp_path):
    with pytest.raises(DesignParseError):
        read_bundle(tmp_path)
    (tmp_path / "manifest.json").write_text("{}", encoding="utf-8")
    with pytest.raises(DesignParseError):
        read_bundle(tmp_path)
