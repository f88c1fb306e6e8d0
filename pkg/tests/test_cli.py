import json
import subprocess
import sys

import pytest

from ammannbars.cli import main
from ammannbars.files import (
    CATALOG,
    dump_matrix,
    dump_slope,
    parse_matrix,
    parse_slope,
    patch_from_dict,
    patch_to_dict,
    read_json,
    sha256_file,
)
from ammannbars.multigrid import generate_patch


@pytest.mark.parametrize("name", sorted(CATALOG))
def test_slope_round_trip(name):
    E = CATALOG[name]()
    F = parse_slope(dump_slope(E))
    assert F.generators == E.generators and F.field == E.field and F.name == E.name


def test_matrix_round_trip(cyr, cyr_fine):
    assert parse_matrix(dump_matrix(cyr_fine), cyr.field) == cyr_fine


def test_patch_round_trip(cyr, cyr_fine):
    P = generate_patch(cyr, cyr_fine, 2, seed=4)
    doc = json.loads(json.dumps(patch_to_dict(P)))
    Q = patch_from_dict(doc)
    assert Q.tiles == P.tiles and Q.projection == P.projection
    assert Q.grid.shift == P.grid.shift and Q.k == P.k
    assert Q.slope.generators == cyr.generators


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_usage_errors(capsys, tmp_path):
    assert run(capsys)[0] == 2
    assert run(capsys, "nonsense")[0] == 2
    assert run(capsys, "slope", "show", str(tmp_path / "missing.toml"))[0] == 2
    bad = tmp_path / "bad.toml"
    bad.write_text("n = 4\n")
    assert run(capsys, "slope", "show", str(bad))[0] == 2
    assert run(capsys, "tiling", "generate", "cyrenaic", "--k", "notanumber")[0] == 2


def test_slope_commands(capsys):
    code, out, _ = run(capsys, "slope", "show", "cyrenaic")
    assert code == 0 and "x^2 - 3" in out
    code, out, _ = run(capsys, "slope", "characterize", "cyrenaic")
    assert code == 0 and out.startswith("characterized")
    code, out, _ = run(capsys, "slope", "subperiods", "cyrenaic", "--lift")
    assert code == 0 and len(out.strip().splitlines()) == 4


def test_projection_commands(capsys, tmp_path):
    out_file = tmp_path / "fine.toml"
    code, _, _ = run(capsys, "projection", "fine", "cyrenaic", "--k", "4", "--out", str(out_file))
    assert code == 0 and out_file.exists()
    code, out, _ = run(capsys, "projection", "check", "cyrenaic", str(out_file), "--k", "4")
    assert code == 0 and out.startswith("valid")
    code, out, _ = run(capsys, "projection", "fine", "golden-octagonal", "--k", "4")
    assert code == 1 and out.strip() == "none"


def test_tiling_and_verify_pipeline(capsys, tmp_path):
    patch = tmp_path / "patch.json"
    code, _, _ = run(capsys, "tiling", "generate", "cyrenaic", "--projection", "fine",
                     "--k", "6", "--seed", "3", "--out", str(patch))
    assert code == 0
    man = read_json(str(patch) + ".manifest.json")
    assert man["argv"][0] == "ammannbars" and "--seed" in man["argv"]
    assert man["outputs"][str(patch)] == sha256_file(patch)
    code, out, _ = run(capsys, "verify", "shadows", str(patch))
    assert code == 0 and out.count("PASS") == 4
    code, out, _ = run(capsys, "verify", "planarity", str(patch))
    assert code == 0 and "strongly planar: True" in out
    code, out, _ = run(capsys, "verify", "continuity", str(patch))
    assert code == 0 and out.startswith("PASS")
    svg = tmp_path / "p.svg"
    code, _, _ = run(capsys, "render", str(patch), "--lines", "--out", str(svg))
    assert code == 0 and svg.read_text().startswith("<svg")
    shadow = tmp_path / "shadow.json"
    code, _, _ = run(capsys, "tiling", "shadow", str(patch), "--drop", "3", "--out", str(shadow))
    assert code == 0 and read_json(shadow)["dropped"] == [3]


def test_generation_is_reproducible(capsys, tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    for f in (a, b):
        assert run(capsys, "tiling", "generate", "cyrenaic", "--k", "3", "--seed", "9", "--out", str(f))[0] == 0
    assert a.read_bytes() == b.read_bytes()


def test_verify_penrose(capsys):
    code, out, _ = run(capsys, "verify", "penrose")
    assert code == 0 and "FAIL" not in out


def test_atlas_command(capsys, tmp_path):
    out_file = tmp_path / "atlas.json"
    code, _, _ = run(capsys, "atlas", "compute", "cyrenaic", "--r", "1", "--out", str(out_file))
    assert code == 0 and read_json(out_file)["count"] == 36


def test_ammann_tileset_command(capsys, tmp_path):
    out_file, svg = tmp_path / "tiles.json", tmp_path / "tiles.svg"
    code, _, _ = run(capsys, "ammann", "tileset", "cyrenaic", "--out", str(out_file), "--svg", str(svg))
    assert code == 0 and read_json(out_file)["count"] == 36
    assert svg.read_text().count("<polygon") == 36


def test_survey_command_is_byte_stable(capsys, tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    for f in (a, b):
        code, _, err = run(capsys, "survey", "--samples", "8", "--seed", "4", "--no-timing", "--out", str(f))
        assert code == 0 and "8 slopes" in err
    assert a.read_bytes() == b.read_bytes()


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "ammannbars", "slope", "show", "rauzy"],
                         capture_output=True, text=True)
    assert res.returncode == 0 and "n = 3" in res.stdout
    res = subprocess.run([sys.executable, "-m", "ammannbars", "bogus"], capture_output=True, text=True)
    assert res.returncode == 2
