"""Command line interface: caching, determinism, rendering, tables."""
import json

import pytest

from parslit.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, out


def test_cells_command(capsys):
    code, out = run(capsys, "cells", "--h", "2", "--m", "0")
    assert code == 0
    assert "total 8" in out


def test_homology_command_all_coefficients(capsys):
    code, out = run(capsys, "homology", "--g", "1", "--m", "0",
                    "--coeff", "all", "--method", "both")
    assert code == 0
    assert out.count("(Z, Z)") == 8  # four coefficient tags, two methods


def test_matrices_command(capsys):
    code, out = run(capsys, "matrices", "--h", "2", "--m", "0")
    assert code == 0
    assert "vertical" in out and "horizontal" in out


def test_fundamental_class_command(capsys, tmp_path):
    target = tmp_path / "mu.txt"
    code, out = run(capsys, "fundamental-class", "--g", "1", "--m", "0",
                    "--out", str(target))
    assert code == 0
    assert "2 terms" in out and "verified" in out
    assert target.read_text().count("\n") == 2


def test_cache_round_trip(capsys, tmp_path):
    cache = str(tmp_path / "cache")
    args = ("homology", "--g", "1", "--m", "1", "--cache", cache)
    code1, out1 = run(capsys, *args)
    code2, out2 = run(capsys, *args)
    assert code1 == code2 == 0
    assert out1 == out2
    key_dir = tmp_path / "cache" / "v1-h3-m1-plain"
    assert (key_dir / "cells.txt").exists()
    assert (key_dir / "meta.json").exists()


def test_cache_env_variable(capsys, tmp_path, monkeypatch):
    monkeypatch.setenv("PARSLIT_CACHE", str(tmp_path / "envcache"))
    code, _ = run(capsys, "cells", "--h", "2", "--m", "0")
    assert code == 0
    assert (tmp_path / "envcache" / "v1-h2-m0-plain" / "cells.txt").exists()


def test_cache_refuses_mismatched_config(capsys, tmp_path):
    key_dir = tmp_path / "v1-h2-m0-plain"
    key_dir.mkdir(parents=True)
    meta = {"format": "parslit-cache v1", "h": 3, "m": 1, "numbered": False}
    (key_dir / "meta.json").write_text(json.dumps(meta, sort_keys=True))
    with pytest.raises(SystemExit, match="different configuration"):
        main(["cells", "--h", "2", "--m", "0", "--cache", str(tmp_path)])


def test_cache_lock_excludes_second_job(capsys, tmp_path):
    key_dir = tmp_path / "v1-h2-m0-plain"
    key_dir.mkdir(parents=True)
    (key_dir / "lock").write_text("12345\n")
    with pytest.raises(SystemExit, match="locked"):
        main(["cells", "--h", "2", "--m", "0", "--cache", str(tmp_path)])


def test_determinism_across_threads_and_thresholds(capsys):
    base = ("homology", "--g", "1", "--m", "1")
    _, out1 = run(capsys, *base, "--threads", "1", "--lll-bits", "64")
    _, out2 = run(capsys, *base, "--threads", "3", "--lll-bits", "64")
    _, out3 = run(capsys, *base, "--threads", "1", "--lll-bits", "8")
    assert out1 == out2 == out3


SIGMA1 = "4 2 : 3,4,1,2,0 ; 1,4,3,2,0 ; 1,2,3,4,0"


def test_render_is_deterministic(capsys, tmp_path):
    _, out1 = run(capsys, "render", "--cell", SIGMA1)
    _, out2 = run(capsys, "render", "--cell", SIGMA1)
    assert out1 == out2
    assert "<svg" in out1 and out1.count("circle") == 4  # two slit pairs


def test_render_weights_and_output_file(capsys, tmp_path):
    target = tmp_path / "cell.svg"
    code, _ = run(capsys, "render", "--cell", SIGMA1,
                  "--a", "1,2,1,2,1", "--b", "1,1,2", "--out", str(target))
    assert code == 0
    assert target.read_text().startswith("<?xml")


def test_render_rejects_degenerate_cells(capsys):
    degenerate = "4 2 : 3,4,1,2,0 ; 1,2,3,4,0 ; 1,2,3,4,0"
    with pytest.raises(SystemExit, match="degenerate"):
        main(["render", "--cell", degenerate])


def test_render_identity_cell_is_a_plain_plane(capsys):
    code, out = run(capsys, "render", "--cell", "0 0 : 0")
    assert code == 0
    assert "<svg" in out and "circle" not in out


def test_tables_small(capsys):
    code, out = run(capsys, "tables", "--max-h", "3")
    assert code == 0
    assert "all rows pass" in out
    assert out.count("[pass]") == 5


def test_long_cases_are_gated(capsys):
    with pytest.raises(SystemExit, match="--long"):
        main(["homology", "--h", "5", "--m", "1"])
    with pytest.raises(SystemExit, match="--long"):
        main(["tables", "--max-h", "5"])


def test_type_resolution_errors(capsys):
    with pytest.raises(SystemExit, match="even"):
        main(["cells", "--h", "4", "--m", "1"])
    with pytest.raises(SystemExit, match="inconsistent"):
        main(["cells", "--g", "1", "--m", "1", "--h", "4"])
    with pytest.raises(SystemExit, match="--m"):
        main(["cells", "--g", "1"])
