import json

import pytest

import main
from models.graph import HostSpec, P4
from services.apex_decomposer import p4_free_core, two_apex_join
from services.design_catalog import base_design
from services.graph_core import complete_graph
from utils.design_io import parse_design_with_comments, read_design, read_text, write_design


def run(*argv):
    return main.main([str(a) for a in argv])


@pytest.fixture
def d9(tmp_path):
    return write_design(tmp_path / "d9.pld", base_design(P4, HostSpec.complete(9)))


def test_construct(tmp_path, capsys):
    out = tmp_path / "k34.pld"
    assert run("construct", "--shape", "P4", "--host", "K3,4", "-o", out, "--trace") == 0
    assert len(read_design(out)) == 4
    assert "# (K 3 4,P4) row matrices, x=4" in capsys.readouterr().out


def test_construct_failures():
    assert run("construct", "--shape", "P4", "--host", "K5") == 3
    assert run("construct", "--shape", "P6", "--host", "K15") == 1


@pytest.mark.parametrize("argv", [
    [],
    ["construct", "--shape", "P4"],
    ["construct", "--shape", "Q4", "--host", "K4"],
    ["construct", "--shape", "P4", "--host", "L4"],
    ["nonsense"],
])
def test_usage_errors_exit_3(argv):
    assert run(*argv) == 3


def test_verify_exit_codes(tmp_path, d9):
    assert run("verify", d9) == 0

    broken = tmp_path / "broken.pld"
    broken.write_text("design P4 host=K 4\nblock 0 1 2 3\nblock 0 1 2 3\n", encoding="utf-8")
    assert run("verify", broken) == 1

    garbled = tmp_path / "garbled.pld"
    garbled.write_text("design P4 host=K 4\nblok 0 1 2 3\n", encoding="utf-8")
    assert run("verify", garbled) == 3
    assert run("verify", tmp_path / "missing.pld") == 3


def test_downlink_c4_bundle(tmp_path, capsys):
    bundle = tmp_path / "c4"
    assert run("downlink", "--gamma", "C4", "--v", 25, "--target", 25, "-o", bundle) == 0
    assert len(read_design(bundle / "codomain.pld")) == 100
    assert json.loads((bundle / "manifest.json").read_text(encoding="utf-8"))["construction"] == "c4-difference-family"
    assert run("verify", bundle) == 0
    assert "valid: witness (C4, v=25) -> n=25" in capsys.readouterr().out

    assert run("verify", bundle / "link.pll") == 0


def test_downlink_from_design(tmp_path, d9):
    bundle = tmp_path / "generic"
    assert run("downlink", "--design", d9, "--target", 12, "-o", bundle) == 0
    assert run("verify", bundle) == 0
    assert run("downlink", "--design", d9, "-o", bundle) == 3
    assert run("downlink", "--gamma", "C4", "--v", 9, "--target", 11) == 3


def test_embed(tmp_path, d9):
    out = tmp_path / "k12.pld"
    assert run("embed", "--shape", "P4", "--design", d9, "--m", 12, "-o", out) == 0
    assert len(read_design(out)) == 22
    assert run("embed", "--shape", "P4", "--design", d9, "--m", 11) == 3
    assert run("embed", "--shape", "P6", "--design", d9, "--m", 12) == 3


def test_embed_partial(tmp_path):
    partial = tmp_path / "partial.pld"
    partial.write_text("design P4 host=K 5\nblock 0 1 2 3\nblock 3 0 2 4\n", encoding="utf-8")
    out = tmp_path / "k7.pld"
    assert run("embed", "--shape", "P4", "--design", partial, "--m", 7, "--partial", "-o", out) == 0
    assert len(read_design(out)) == 7


def test_oracle_exit_codes(tmp_path):
    out = tmp_path / "k6.pld"
    assert run("oracle", "--shape", "P4", "--host", "K6", "-o", out) == 0
    assert len(read_design(out)) == 5
    assert run("oracle", "--shape", "P4", "--host", "K5") == 1
    assert run("oracle", "--shape", "P4", "--host", "K5", "--skips", 1) == 0
    assert run("oracle", "--shape", "P4", "--host", "K9", "--max-nodes", 1) == 2
    assert run("oracle", "--shape", "P4") == 3


def test_oracle_on_edge_hosts(tmp_path):
    host = tmp_path / "path.pld"
    host.write_text("design P4 host=edges\nedge 0 1\nedge 1 2\nedge 2 3\nedge 3 4\n", encoding="utf-8")
    assert run("oracle", "--shape", "P4", "--edges", host) == 1
    assert run("oracle", "--shape", "P5", "--edges", host) == 0


def test_spectrum(tmp_path, capsys):
    out = tmp_path / "spectrum"
    assert run("spectrum", "--gamma", "C4", "--v", 9, "--n-max", 13, "-o", out, "--csv") == 0
    printed = capsys.readouterr().out
    assert "witnessed: [9, 10, 12, 13]" in printed
    assert "closed form matches" in printed
    assert (out / "report.json").exists()
    assert (out / "report.csv").exists()
    assert run("spectrum", "--gamma", "C4", "--v", 10, "--n-max", 13, "-o", out) == 3


def edge_file(path, g):
    path.write_text("".join(f"{u} {v}\n" for u, v in g.edge_list), encoding="utf-8")
    return path


def test_construct_with_apexes(tmp_path, capsys):
    g, alpha, beta = two_apex_join(*p4_free_core(0, 0, 1))
    host = edge_file(tmp_path / "k4.txt", g)
    out = tmp_path / "k4.pld"
    assert run("construct", "--shape", "P4", "--host", f"edges:{host}", "--apex", f"{alpha},{beta}",
               "--trace", "-o", out) == 0
    printed = capsys.readouterr().out
    assert "# iii_22" in printed
    assert "# a_1" in printed
    assert len(read_design(out)) == 2


def test_construct_with_apexes_records_leftover(tmp_path):
    host = edge_file(tmp_path / "k5.txt", complete_graph(5))
    out = tmp_path / "k5.pld"
    assert run("construct", "--shape", "P4", "--host", f"edges:{host}", "--apex", "3,4", "-o", out) == 0
    design, comments = parse_design_with_comments(read_text(out))
    assert len(design) == 3
    assert len(comments) == 1
    assert comments[0].startswith("leftover ")
    assert design.host.graph.size == 9


@pytest.mark.parametrize("shape, apex", [("P4", "0,0"), ("P4", "2"), ("P4", "a,b"), ("P5", "2,3")])
def test_construct_apex_usage_errors(tmp_path, shape, apex):
    g, _, _ = two_apex_join(*p4_free_core(0, 0, 1))
    host = edge_file(tmp_path / "k4.txt", g)
    assert run("construct", "--shape", shape, "--host", f"edges:{host}", "--apex", apex) == 3


def test_construct_records_row_provenance(tmp_path):
    out = tmp_path / "k56.pld"
    assert run("construct", "--shape", "P6", "--host", "K5,6", "-o", out) == 0
    design, comments = parse_design_with_comments(read_text(out))
    assert len(design) == 6
    assert comments == [f"block {i + 1}: {row}" for i, row in enumerate(
        ["M row 1", "M row 2", "M row 3", "M-bar row 1", "M-bar row 2", "M-bar row 3"])]


def test_construct_difference_family(tmp_path, capsys):
    out = tmp_path / "c4.pld"
    assert run("construct", "--shape", "C4", "--host", "K17", "--method", "difference-family",
               "--trace", "-o", out) == 0
    assert len(read_design(out)) == 34
    assert "# base cycle (0,1,9,3)" in capsys.readouterr().out
    assert run("construct", "--shape", "P4", "--host", "K9", "--method", "difference-family") == 3
    assert run("construct", "--shape", "C4", "--host", "K16", "--method", "difference-family") == 3


def test_verify_unreadable_files(tmp_path):
    binary = tmp_path / "binary.pld"
    binary.write_bytes(b"design P4 host=K 4\nblock 0 1 \xff 3\n")
    assert run("verify", binary) == 3

    link = tmp_path / "dangling.pll"
    link.write_text("downlink nope.pld nope.pld\nlink 0 0\n", encoding="utf-8")
    assert run("verify", link) == 3

    bundle = tmp_path / "bundle"
    bundle.mkdir()
    (bundle / "manifest.json").write_bytes(b"\xff\xfe")
    assert run("verify", bundle) == 3


def test_oracle_graph_argument(tmp_path):
    assert run("oracle", "--shape", "P4", "--graph", "K7") == 0
    assert run("oracle", "--shape", "P4", "--graph", "K5") == 1
    assert run("oracle", "--shape", "P4", "--graph", "K3,4") == 0
    g, _, _ = two_apex_join(*p4_free_core(0, 0, 1))
    host = edge_file(tmp_path / "k4.txt", g)
    assert run("oracle", "--shape", "P4", "--graph", host) == 0
    assert run("oracle", "--shape", "P4", "--graph", f"edges:{host}") == 0
    assert run("oracle", "--shape", "P4", "--graph", tmp_path / "missing.txt") == 3
    assert run("oracle", "--shape", "P4", "--graph", "K7", "--host", "K7") == 3


def test_downlink_long_shapes_by_gamma(tmp_path):
    bundle = tmp_path / "c9"
    assert run("downlink", "--gamma", "C9", "--v", 9, "--target", 10, "-o", bundle) == 0
    assert json.loads((bundle / "manifest.json").read_text(encoding="utf-8"))["n"] == 10
    assert run("verify", bundle) == 0

    generic = tmp_path / "p6"
    assert run("downlink", "--gamma", "P6", "--v", 6, "--target", 9, "-o", generic) == 0
    assert run("verify", generic) == 0
    assert run("downlink", "--gamma", "C9", "--v", 9, "--target", 12) == 3
