import json
import subprocess
import sys

import numpy as np
import pytest

from genpseudo import gsvd, mmio, problems, transient
from genpseudo import pseudospectra as ps
from genpseudo.cli import RunConfig, main, parse_times, render


@pytest.fixture
def jordan_file(tmp_path):
    path = tmp_path / "j_A.mtx"
    mmio.write_matrix_market(path, problems.jordan(2, 0).a)
    return path


def read_csv(path):
    lines = path.read_text().splitlines()
    assert lines[0].startswith("# genpseudo 0.1.0 ")
    return lines[1].split(","), [ln.split(",") for ln in lines[2:]]


def test_psgrid_matches_library(tmp_path, jordan_file):
    out = tmp_path / "grid.csv"
    assert main(["psgrid", "--a", str(jordan_file), "--region=-1,1,-1,1", "--nx", "3", "--ny", "3", "--out", str(out)]) == 0
    cols, rows = read_csv(out)
    assert cols == ["re", "im", "eps_b"]
    assert len(rows) == 9
    g = ps.grid(problems.jordan(2, 0), (-1, 1, -1, 1), 3, 3)
    got = np.array([float(r[2]) for r in rows])
    np.testing.assert_array_equal(got, g.values.ravel())
    np.testing.assert_array_equal([complex(float(r[0]), float(r[1])) for r in rows], g.points().ravel())


def test_header_echoes_parameters(tmp_path, jordan_file):
    out = tmp_path / "g.csv"
    main(["psgrid", "--a", str(jordan_file), "--nx", "2", "--ny", "2", "--out", str(out)])
    header = out.read_text().splitlines()[0]
    params = json.loads(header.split(" ", 4)[4])
    assert params["nx"] == 2 and params["subcommand"] == "psgrid" and params["a"] == str(jordan_file)


def test_stabradius_normal(tmp_path):
    p = problems.normal_from_spectrum([-1 + 5j, -3], seed=0)
    a = tmp_path / "n.mtx"
    mmio.write_matrix_market(a, p.a)
    out = tmp_path / "r.json"
    assert main(["stabradius", "--a", str(a), "--out", str(out)]) == 0
    res = json.loads(out.read_text())
    assert res["result"]["radius"] == pytest.approx(1.0, abs=1e-8)
    assert res["result"]["global_guarantee"] is False
    assert res["meta"]["subcommand"] == "stabradius"


def test_scatter_zero_eps(tmp_path):
    p = problems.random_pencil(3, seed=2)
    a, m = tmp_path / "a.mtx", tmp_path / "m.mtx"
    mmio.write_matrix_market(a, p.a)
    mmio.write_matrix_market(m, p.m)
    out = tmp_path / "s.csv"
    assert main(["scatter", "--a", str(a), "--m", str(m), "--eps", "0", "--npert", "4", "--seed", "5",
                 "--out", str(out)]) == 0
    _, rows = read_csv(out)
    z = np.array([complex(float(r[0]), float(r[1])) for r in rows])
    lam = p.eigenvalues()
    assert z.size == 12
    assert max(np.min(np.abs(lam - zi)) for zi in z) <= 1e-10
    meta = json.loads((tmp_path / "s.csv.meta.json").read_text())
    assert meta["result"]["seed"] == 5 and meta["result"]["strategy"] == "rank1"


def test_scatter_matches_library_bitwise(tmp_path, jordan_file):
    out = tmp_path / "s.json"
    main(["scatter", "--a", str(jordan_file), "--eps", "0.01", "--npert", "5", "--seed", "3", "--strategy", "full",
          "--format", "json", "--out", str(out)])
    res = json.loads(out.read_text())["result"]
    lib = ps.perturbation_scatter(problems.jordan(2, 0), 0.01, 5, 3, "full")
    np.testing.assert_array_equal(np.array(res["re"]) + 1j * np.array(res["im"]), lib.eigenvalues)


def test_gsvd_csv(tmp_path):
    a, b = tmp_path / "a.mtx", tmp_path / "b.mtx"
    mmio.write_matrix_market(a, np.diag([3.0, 8.0]))
    mmio.write_matrix_market(b, np.diag([1.0, 2.0]))
    out = tmp_path / "g.csv"
    assert main(["gsvd", "--a", str(a), "--b", str(b), "--out", str(out)]) == 0
    cols, rows = read_csv(out)
    assert cols == ["alpha", "beta", "mu", "degenerate"]
    assert sorted(float(r[2]) for r in rows) == pytest.approx([3, 4])
    assert {r[3] for r in rows} == {"false"}


def test_gsvd_degenerate_json(tmp_path):
    a = tmp_path / "a.mtx"
    mmio.write_matrix_market(a, np.diag([1.0, 0.0]))
    out = tmp_path / "g.json"
    assert main(["gsvd", "--a", str(a), "--b", str(a), "--format", "json", "--out", str(out)]) == 0
    res = json.loads(out.read_text())["result"]
    assert res["degenerate"] is True and res["values"] == "all_nonnegative"


def test_numrange_and_growth(tmp_path):
    p = problems.random_stable_pencil(4, seed=1)
    a, m = tmp_path / "a.mtx", tmp_path / "m.mtx"
    mmio.write_matrix_market(a, p.a)
    mmio.write_matrix_market(m, p.m)
    out = tmp_path / "nr.csv"
    assert main(["numrange", "--a", str(a), "--m", str(m), "--ntheta", "16", "--out", str(out)]) == 0
    cols, rows = read_csv(out)
    assert cols == ["theta", "re", "im", "lambda_theta"] and len(rows) == 16
    lib = transient.numerical_range(p, 16)
    np.testing.assert_array_equal([float(r[3]) for r in rows], lib.support_values)
    for route in transient.ROUTES:
        out = tmp_path / f"g_{route}.csv"
        assert main(["growth", "--a", str(a), "--m", str(m), "--times", "0:2:5", "--route", route,
                     "--out", str(out)]) == 0
        cols, rows = read_csv(out)
        assert cols == ["t", "G", "route"] and len(rows) == 5 and rows[0][2] == route
        lib = transient.growth_curve(p, np.linspace(0, 2, 5), route)
        np.testing.assert_array_equal([float(r[1]) for r in rows], lib.growth)


def test_gen_round_trip(tmp_path):
    prefix = tmp_path / "fem"
    assert main(["gen", "--problem", "fem", "--n", "5", "--param", "c=3", "--param", "nu=0.2",
                 "--out", str(prefix)]) == 0
    ref = problems.fem_advection_diffusion(5, 3.0, 0.2)
    assert mmio.parse_matrix_market(f"{prefix}_A.mtx").tobytes() == ref.a.tobytes()
    assert mmio.parse_matrix_market(f"{prefix}_M.mtx").tobytes() == ref.m.tobytes()


def test_gen_complex_param(tmp_path):
    prefix = tmp_path / "j"
    assert main(["gen", "--problem", "jordan", "--n", "3", "--param", "lam=1+2j", "--out", str(prefix)]) == 0
    np.testing.assert_array_equal(np.diag(mmio.parse_matrix_market(f"{prefix}_A.mtx")), 1 + 2j)


def test_exit_codes(tmp_path, jordan_file, capsys):
    out = tmp_path / "x.csv"
    assert main(["psgrid", "--a", str(tmp_path / "missing.mtx"), "--out", str(out)]) == 1
    assert not out.exists()
    err = capsys.readouterr().err.strip().splitlines()
    assert len(err) == 1 and "input error" in err[0]

    bad_m = tmp_path / "bad.mtx"
    mmio.write_matrix_market(bad_m, -np.eye(2))
    assert main(["psgrid", "--a", str(jordan_file), "--m", str(bad_m), "--out", str(out)]) == 1

    jordan3 = tmp_path / "j3.mtx"
    mmio.write_matrix_market(jordan3, problems.jordan(3, -1).a)
    assert main(["growth", "--a", str(jordan3), "--times", "0,1", "--out", str(out)]) == 2
    assert "numerical failure" in capsys.readouterr().err
    assert not out.exists()

    assert main(["psgrid", "--a", str(jordan_file), "--mode", "generalized"]) == 1
    assert main(["psgrid", "--a", str(jordan_file), "--nx", "zero"]) == 1
    assert main(["scatter", "--a", str(jordan_file), "--eps", "-1"]) == 1


def test_parse_error_mentions_line(tmp_path, capsys):
    bad = tmp_path / "bad.mtx"
    bad.write_text("%%MatrixMarket matrix coordinate real general\n2 2 2\n1 1 1\n1 1 1\n")
    assert main(["psgrid", "--a", str(bad)]) == 1
    assert "line 4" in capsys.readouterr().err


def test_byte_identical_runs(tmp_path, jordan_file):
    texts = []
    for _ in range(2):
        main(["scatter", "--a", str(jordan_file), "--eps", "0.1", "--npert", "20", "--seed", "9",
              "--out", str(tmp_path / "s.csv")])
        texts.append((tmp_path / "s.csv").read_bytes() + (tmp_path / "s.csv.meta.json").read_bytes())
    assert texts[0] == texts[1]


def test_batch(tmp_path, jordan_file):
    cfg = [
        {"subcommand": "psgrid", "a": str(jordan_file), "nx": 2, "ny": 2, "out": str(tmp_path / "g.csv")},
        {"subcommand": "growth", "a": str(jordan_file), "times": "0:1:3", "out": str(tmp_path / "bad.csv")},
        {"subcommand": "stabradius", "a": str(jordan_file), "format": "json", "out": str(tmp_path / "r.json")},
    ]
    path = tmp_path / "batch.json"
    path.write_text(json.dumps(cfg))
    # the nilpotent Jordan block is defective, so the growth run fails numerically
    assert main(["batch", str(path)]) == 2
    assert (tmp_path / "g.csv").exists() and (tmp_path / "r.json").exists()
    assert not (tmp_path / "bad.csv").exists()
    path.write_text(json.dumps([{"subcommand": "psgrid", "bogus": 1}]))
    assert main(["batch", str(path)]) == 1


def test_parse_times():
    assert parse_times("0:1:3") == [0.0, 0.5, 1.0]
    assert parse_times("0,2.5") == [0.0, 2.5]


def test_render_validation():
    with pytest.raises(ValueError):
        render(RunConfig("psgrid"))
    with pytest.raises(ValueError):
        render(RunConfig("gen"))


def test_module_entry_point(jordan_file):
    proc = subprocess.run(
        [sys.executable, "-m", "genpseudo", "stabradius", "--a", str(jordan_file), "--format", "csv"],
        capture_output=True, text=True, check=False,
    )
    assert proc.returncode == 0
    assert proc.stdout.splitlines()[1] == "radius,argmin_y,global_guarantee,unstable"
