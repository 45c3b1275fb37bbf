import json

import pytest

from models.graph import BlockShape, C4, P5
from models.schemas import ProbeStatus
from services.linker import verify_spectrum_membership
from services.spectrum_service import (
    bundle_name,
    cmd_spectrum,
    domain_admissible,
    load_witness,
    probe_floor,
    write_report,
)
from utils.design_io import is_bundle
from utils.errors import UsageError


@pytest.fixture(scope="module")
def c4_report(tmp_path_factory):
    out = tmp_path_factory.mktemp("c4")
    return cmd_spectrum(C4, 9, 15, out), out


def test_c4_spectrum_matches_closed_form(c4_report):
    report, _ = c4_report
    assert report.witnessed() == [9, 10, 12, 13, 15]
    assert report.closed_form == [9, 10, 12, 13, 15]
    assert report.matches_closed_form()
    assert report.eta == 9

    by_n = {e.n: e for e in report.entries}
    assert by_n[9].construction == "c4-difference-family"
    assert by_n[12].construction == "c4-difference-family+closure"
    assert by_n[11].status == ProbeStatus.INADMISSIBLE
    assert by_n[14].status == ProbeStatus.INADMISSIBLE


def test_bundles_reverify_from_disk(c4_report):
    report, out = c4_report
    for n in report.witnessed():
        path = out / bundle_name(C4, 9, n)
        assert is_bundle(path)
        w = load_witness(path)
        assert (w.v, w.n) == (9, n)
        assert verify_spectrum_membership(w).valid


def test_report_file(c4_report, tmp_path):
    report, _ = c4_report
    data = json.loads(write_report(report, tmp_path).read_text(encoding="utf-8"))
    assert data["eta"] == 9
    assert len(data["entries"]) == 7

    frame = report.to_frame()
    assert list(frame["n"]) == list(range(9, 16))
    assert frame["closed_form"].sum() == 5


def test_p5_spectrum(tmp_path):
    report = cmd_spectrum(P5, 8, 13, tmp_path)
    assert report.witnessed() == [7, 9, 10, 12, 13]
    assert report.matches_closed_form()
    assert report.entries[0].construction == "p5-gluing"


def test_long_cycle_spectrum(tmp_path):
    report = cmd_spectrum(BlockShape.cycle(9), 9, 12, tmp_path)
    assert report.witnessed() == [9, 10, 12]
    assert report.closed_form is None
    assert report.matches_closed_form() is None


@pytest.mark.parametrize("gamma, v, n_max", [
    (C4, 10, 20),
    (P5, 10, 20),
    (BlockShape.cycle(3), 7, 12),
    (C4, 9, 8),
])
def test_usage_errors(tmp_path, gamma, v, n_max):
    with pytest.raises(UsageError):
        cmd_spectrum(gamma, v, n_max, tmp_path)


def test_domain_admissibility_and_floor():
    assert domain_admissible(C4, 17)
    assert not domain_admissible(C4, 16)
    assert domain_admissible(P5, 16)
    assert not domain_admissible(BlockShape.path(6), 7)
    assert probe_floor(C4, 9) == 9
    assert probe_floor(P5, 8) == 7
    assert probe_floor(BlockShape.cycle(13), 13) == 12
