import json
import math
import subprocess
import sys
from pathlib import Path

import pytest
from hypothesis import given, strategies as st

from genaw.cli import (
    EXIT_INPUT,
    EXIT_NONCONV,
    EXIT_OK,
    EXIT_TOL,
    RunConfig,
    fmt,
    identity_suite,
    main,
)

ROOT = Path(__file__).resolve().parents[1]
STOCK = str(ROOT / "configs" / "stock.json")
TAGS = {
    "aw_backward_difference", "aw_difference_equation", "aw_forward_difference",
    "aw_series_vs_recurrence", "aw_shift_relation", "gen_basic_series", "gen_determinant",
    "gen_difference_equation", "gen_difference_rep", "gen_norm_identity", "gen_recurrence",
    "gen_shift_down", "gen_shift_up", "gen_shifted_two_term", "gen_two_term",
    "kernel_forms", "qracah_relation",
}


def run(argv, capsys):
    code = main(argv)
    out, err = capsys.readouterr()
    return code, out, err


def test_exit_codes_distinct():
    assert len({EXIT_OK, EXIT_TOL, EXIT_INPUT, EXIT_NONCONV}) == 4


def test_residuals_stock(capsys):
    code, out, _ = run(["residuals", "--config", STOCK, "--nmax", "6"], capsys)
    assert code == EXIT_OK
    data = json.loads(out)
    tags = [r["identity_tag"] for r in data["results"]]
    assert sorted(tags) == sorted(TAGS) and len(tags) == len(set(tags))
    for r in data["results"]:
        assert set(r) == {"identity_tag", "n", "point", "residual", "tolerance", "pass"}
        assert r["pass"] and r["residual"] < r["tolerance"]
    assert data["pass"] is True


def test_identity_suite_keys():
    from genaw.askey_wilson import FamilyContext
    from genaw.cli import sample_points

    cfg = RunConfig()
    ctx = FamilyContext.build(cfg.params, 3)
    assert set(identity_suite(ctx, cfg.masses, cfg.racah, sample_points(cfg, ctx))) == TAGS


def test_residuals_deterministic(capsys, tmp_path):
    outs = []
    for k in range(2):
        path = tmp_path / f"r{k}.json"
        assert main(["residuals", "--config", STOCK, "--nmax", "4", "--out", str(path)]) == EXIT_OK
        outs.append(path.read_bytes())
    assert outs[0] == outs[1]


def test_seed_changes_points(capsys):
    _, a, _ = run(["residuals", "--nmax", "2", "--seed", "1"], capsys)
    _, b, _ = run(["residuals", "--nmax", "2", "--seed", "2"], capsys)
    assert json.loads(a)["points_qs"] != json.loads(b)["points_qs"]


def test_tight_tolerance_fails(capsys):
    code, out, _ = run(["residuals", "--nmax", "4", "--tol", "1e-30"], capsys)
    assert code == EXIT_TOL
    assert json.loads(out)["pass"] is False


@pytest.mark.parametrize(
    "argv",
    [
        ["residuals", "--q", "1.5"],
        ["residuals", "--param-a", "1.2"],
        ["residuals", "--param-a", "0.5", "--param-b", "2.0"],
        ["residuals", "--mass-neg", "-1"],
        ["residuals", "--nmax", "-1"],
        ["residuals", "--config", "/nonexistent/cfg.json"],
        ["residuals", "--param-c", "abc"],
    ],
)
def test_invalid_input(argv, capsys):
    code, _, err = run(argv, capsys)
    assert code == EXIT_INPUT
    assert "invalid input" in err


def test_unknown_config_key(tmp_path, capsys):
    path = tmp_path / "bad.json"
    path.write_text(json.dumps({"a": 0.5, "bogus": 1}))
    code, _, err = run(["show-config", "--config", str(path)], capsys)
    assert code == EXIT_INPUT and "bogus" in err


def test_show_config_roundtrip(tmp_path, capsys):
    code, out, _ = run(["show-config", "--config", STOCK], capsys)
    assert code == EXIT_OK
    assert json.loads(out) == json.loads(Path(STOCK).read_text())
    path = tmp_path / "cfg.json"
    path.write_text(out)
    _, out2, _ = run(["show-config", "--config", str(path)], capsys)
    assert out2 == out


@given(
    st.floats(-0.9, 0.9).filter(lambda v: abs(v) > 1e-3),
    st.floats(-0.9, 0.9),
    st.floats(1e-3, 0.99),
    st.floats(0, 100),
)
def test_config_roundtrip_exact(re, im, q, mass):
    cfg = RunConfig(a=complex(re, im), q=q, mass_pos=mass)
    back = RunConfig.from_dict(json.loads(cfg.dumps()))
    assert back == RunConfig.from_dict(cfg.to_dict())
    assert complex(back.a) == complex(re, im)
    assert back.q == q and back.mass_pos == mass


@pytest.mark.parametrize("v", [0.1, 1 / 3, -2.5e-17, complex(0.3, -0.4), math.pi])
def test_fmt_roundtrip(v):
    assert complex(fmt(v)) == complex(v)


def test_gram_zero_degree(capsys):
    code, out, _ = run(["gram", "--nmax", "0", "--mass-neg", "0", "--mass-pos", "0"], capsys)
    assert code == EXIT_OK
    data = json.loads(out)
    assert data["results"] == [{"i": 0, "j": 0, "value": pytest.approx(1.0, rel=1e-13)}]


def test_gram_with_masses(capsys):
    code, out, _ = run(["gram", "--config", STOCK, "--nmax", "4"], capsys)
    assert code == EXIT_OK
    data = json.loads(out)
    assert data["max_offdiag_rel"] < 1e-8 and len(data["results"]) == 25


def test_eval_zero_masses_reduce(capsys):
    code, out, _ = run(["eval", "--mass-neg", "0", "--mass-pos", "0", "--degrees", "0,2,5",
                        "--points=-0.9,0.2,0.8"], capsys)
    assert code == EXIT_OK
    for r in json.loads(out)["results"]:
        assert r["gen_kernel"] == pytest.approx(r["aw_recurrence"], rel=1e-12, abs=1e-14)


def test_eval_mass_points(capsys):
    code, out, _ = run(["eval", "--config", STOCK, "--degrees", "3", "--points=-1,1"], capsys)
    assert code == EXIT_OK
    rows = json.loads(out)["results"]
    assert all(r["gen_two_term"] is None and r["gen_basic_series"] is None for r in rows)


def test_eval_csv(capsys):
    code, out, _ = run(["eval", "--format", "csv", "--degrees", "1,2", "--points=-1,0.3"], capsys)
    assert code == EXIT_OK
    lines = out.strip().splitlines()
    assert len(lines) == 5
    width = {len(line.split(",")) for line in lines}
    assert len(width) == 1


def test_racah_check(capsys):
    code, out, _ = run(["racah-check", "--nmax", "8", "--racah", "0.3,0.2,0.4,0.6"], capsys)
    assert code == EXIT_OK
    rows = json.loads(out)["results"]
    assert len(rows) == 4 * 9 and max(r["residual"] for r in rows) < 1e-9


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "genaw", "show-config"], capture_output=True, text=True,
                          timeout=60)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["q"] == 0.5


def test_eval_degree_zero(capsys):
    code, out, _ = run(["eval", "--degrees", "0", "--points=-0.7,0.0,0.4"], capsys)
    assert code == EXIT_OK
    for r in json.loads(out)["results"]:
        assert r["aw_recurrence"] == 1.0 and r["gen_kernel"] == 1.0


def test_gram_equal_masses(capsys):
    code, _, _ = run(["gram", "--config", STOCK, "--mass-neg", "0.5", "--mass-pos", "0.5", "--nmax", "5"], capsys)
    assert code == EXIT_OK


def test_product_at_inverse_q_rejected(capsys):
    # a b = q^{-1} needs a modulus above one, which the admissibility check names
    code, _, err = run(["gram", "--param-a", "0.8", "--param-b", "2.5", "--q", "0.5"], capsys)
    assert code == EXIT_INPUT and "max(|a|,|b|,|c|,|d|) < 1" in err
