import json
import math

import numpy as np
import pytest

from hypertess import Seed, Sphere
from hypertess.cli import jl_sample_size, main
from hypertess.formats import read_codes, save_points


def run(*argv):
    return main([str(a) for a in argv])


def test_gen_is_byte_identical(tmp_path):
    a, b = tmp_path / "a.hpm", tmp_path / "b.hpm"
    assert run("gen", "--seed", 7, "--m", 100, "--n", 10, "--out", a) == 0
    assert run("gen", "--seed", 7, "--m", 100, "--n", 10, "--out", b) == 0
    assert a.read_bytes() == b.read_bytes()


def test_gen_missing_required_flag_is_usage_error(tmp_path):
    assert run("gen", "--seed", 7, "--n", 10, "--out", tmp_path / "x.hpm") == 2


def test_unknown_command_is_usage_error():
    assert run("frobnicate") == 2


def test_embed_zero_points(tmp_path):
    mat = tmp_path / "m.hpm"
    pts = tmp_path / "none.csv"
    out = tmp_path / "c.hpc"
    run("gen", "--seed", 1, "--m", 50, "--n", 4, "--out", mat)
    pts.write_text("")
    assert run("embed", "--matrix", mat, "--points", pts, "--out", out) == 0
    assert read_codes(out) == []
    raw = out.read_bytes()
    assert int.from_bytes(raw[16:24], "little") == 50  # header keeps the true m


def test_embed_matches_library(tmp_path):
    mat, ptsf, out = tmp_path / "m.hpm", tmp_path / "p.csv", tmp_path / "c.hpc"
    run("gen", "--seed", 2, "--m", 64, "--n", 5, "--out", mat)
    pts = Sphere(5).sample_many(9, Seed(3, 1))
    save_points(ptsf, pts)
    assert run("embed", "--matrix", mat, "--points", ptsf, "--out", out) == 0
    from hypertess import batch_embed
    from hypertess.formats import read_matrix

    assert read_codes(out) == batch_embed(read_matrix(mat), pts)


def test_audit_single_point_finite_model(tmp_path):
    ptsf = tmp_path / "one.csv"
    save_points(ptsf, np.array([[1.0, 0.0, 0.0]]))
    rep = tmp_path / "r.json"
    rc = run(
        "audit", "--model", f"finite:path={ptsf}", "--m", 100,
        "--seed", 1, "--delta", 0.5, "--report", rep,
    )
    assert rc == 0
    payload = json.loads(rep.read_text())
    assert payload["delta_max"] == 0.0
    assert payload["passed"] is True


def test_audit_soft_bound_is_delta_plus_2t(tmp_path):
    rep = tmp_path / "r.json"
    rc = run(
        "audit", "--model", "sphere:n=6", "--m", 500, "--samples", 20,
        "--seed", 4, "--t", 0.1, "--delta", 0.15, "--report", rep,
    )
    payload = json.loads(rep.read_text())
    assert payload["bound"] == pytest.approx(0.35)
    assert payload["t"] == 0.1
    assert rc in (0, 1)


def test_audit_fail_exit_code(tmp_path):
    rc = run(
        "audit", "--model", "sphere:n=8", "--m", 50, "--samples", 30,
        "--seed", 5, "--delta", 0.0001,
    )
    assert rc == 1


def test_audit_report_roundtrip_reproduces(tmp_path):
    rep1, rep2 = tmp_path / "r1.json", tmp_path / "r2.json"
    args = [
        "audit", "--model", "sparse:n=12,s=2", "--m", 800, "--samples", 50,
        "--seed", 9, "--delta", 0.3,
    ]
    assert run(*args, "--report", rep1) == 0
    cfg = json.loads(rep1.read_text())["config"]
    assert run(
        "audit", "--model", cfg["model"], "--m", cfg["m"], "--samples", cfg["samples"],
        "--seed", cfg["seed"], "--delta", cfg["delta"], "--report", rep2,
    ) == 0
    d1 = json.loads(rep1.read_text())
    d2 = json.loads(rep2.read_text())
    assert d1["delta_max"] == d2["delta_max"]
    assert d1["worst_pairs"] == d2["worst_pairs"]


def test_audit_model_matrix_clash(tmp_path):
    mat = tmp_path / "m.hpm"
    run("gen", "--seed", 1, "--m", 32, "--n", 7, "--out", mat)
    rc = run("audit", "--model", "sphere:n=5", "--matrix", mat, "--seed", 1)
    assert rc == 2


def test_missing_file_is_io_error(tmp_path):
    rc = run("embed", "--matrix", tmp_path / "nope.hpm", "--points", tmp_path / "p.csv", "--out", tmp_path / "o.hpc")
    assert rc == 3


def test_jl_sample_size_formula():
    # two points, delta 0.2, eta 0.01: ceil((2 ln 2 + ln 200) / 0.08) = 84
    assert jl_sample_size(2, 0.2, 0.01) == 84
    assert jl_sample_size(2, 0.2, 0.01) == math.ceil(
        (2 * math.log(2) + math.log(2 / 0.01)) / (2 * 0.2**2)
    )


def test_jl_two_antipodal_points(tmp_path):
    ptsf, rep = tmp_path / "p.csv", tmp_path / "r.json"
    save_points(ptsf, np.array([[1.0, 0.0], [-1.0, 0.0]]))
    rc = run("jl", "--points", ptsf, "--delta", 0.2, "--eta", 0.01, "--seed", 3, "--report", rep)
    payload = json.loads(rep.read_text())
    assert payload["m"] == 84
    assert rc in (0, 1)


def test_jl_delta_one_always_passes(tmp_path):
    ptsf = tmp_path / "p.csv"
    save_points(ptsf, Sphere(4).sample_many(8, Seed(6, 1)))
    assert run("jl", "--points", ptsf, "--delta", 1.0, "--seed", 2) == 0


def test_jl_needs_two_points(tmp_path):
    ptsf = tmp_path / "p.csv"
    save_points(ptsf, np.array([[1.0, 0.0]]))
    assert run("jl", "--points", ptsf, "--delta", 0.2, "--seed", 2) == 2


def test_jl_32_points_on_s9(tmp_path):
    ptsf = tmp_path / "p.csv"
    save_points(ptsf, Sphere(10).sample_many(32, Seed(7, 1)))
    assert run("jl", "--points", ptsf, "--delta", 0.15, "--seed", 11) == 0


def test_meanwidth_report(tmp_path):
    rep = tmp_path / "mw.json"
    assert run("meanwidth", "--model", "sphere:n=10", "--trials", 20000, "--seed", 8, "--report", rep) == 0
    payload = json.loads(rep.read_text())
    oracle = math.sqrt(2) * math.gamma(5.5) / math.gamma(5)
    assert abs(payload["gaussian_width"] - oracle) <= 3 * payload["std_error"]


def test_graph_single_node_dot(tmp_path):
    mat, ptsf, codes, dot = (
        tmp_path / "m.hpm", tmp_path / "p.csv", tmp_path / "c.hpc", tmp_path / "g.dot",
    )
    run("gen", "--seed", 1, "--m", 16, "--n", 3, "--out", mat)
    save_points(ptsf, np.array([[1.0, 0.0, 0.0]] * 4))
    run("embed", "--matrix", mat, "--points", ptsf, "--out", codes)
    assert run("graph", "--codes", codes, "--out", dot, "--json", tmp_path / "g.json") == 0
    text = dot.read_text()
    assert text.count("label") == 1 and "--" not in text
    assert json.loads((tmp_path / "g.json").read_text())["nodes"][0]["points"] == [0, 1, 2, 3]


def test_cells_pass_and_fail(tmp_path):
    args = ["cells", "--model", "sparse:n=20,s=2", "--m", 4000, "--samples", 200, "--seed", 3]
    assert run(*args, "--delta", 0.5) == 0
    assert run(*args, "--delta", 0.0) in (0, 1)  # fails unless all cells singleton


def test_l1_report(tmp_path):
    rep = tmp_path / "l1.json"
    assert run("l1", "--model", "sphere:n=10", "--m", 400, "--samples", 60, "--seed", 4, "--report", rep) == 0
    payload = json.loads(rep.read_text())
    assert payload["z"] >= 0 and payload["pair_defect"] >= 0


def test_affine_cli_roundtrip(tmp_path):
    ptsf, rep, arrf = tmp_path / "cloud.csv", tmp_path / "aff.json", tmp_path / "a.hpa"
    rng = np.random.default_rng(20)
    save_points(ptsf, 3.0 * rng.standard_normal((40, 2)))
    rc = run(
        "affine", "--points", ptsf, "--t", 4.0, "--m", 5000, "--seed", 6,
        "--delta", 0.35, "--out", arrf, "--report", rep,
    )
    assert rc == 0
    payload = json.loads(rep.read_text())
    assert payload["kind"] == "affine"
    assert payload["lambda"] == pytest.approx(np.pi * 4.0)
    from hypertess.formats import read_arrangement

    assert read_arrangement(arrf).m == 5000


def test_csv_summary(tmp_path):
    rep, csv = tmp_path / "r.json", tmp_path / "w.csv"
    assert run(
        "audit", "--model", "sphere:n=5", "--m", 200, "--samples", 15,
        "--seed", 5, "--report", rep, "--csv", csv,
    ) == 0
    lines = csv.read_text().strip().splitlines()
    assert lines[0] == "i,j,d_geo,d_ham,abs_error"
    assert len(lines) > 1
