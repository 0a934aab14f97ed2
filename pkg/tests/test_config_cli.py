import json

import pytest
from hypothesis import given
from hypothesis import strategies as st

from optseq import cli
from optseq.config import RunConfig, load_config, parse_config_text, parse_pairs
from optseq.errors import InvalidArgumentError


def test_defaults_and_overrides(tmp_path):
    path = tmp_path / "run.cfg"
    path.write_text("# caps\nn_cap = 10\ngrid=300  # finer\n\nverdict_tol = 0.1\n")
    cfg = load_config(str(path), {"grid": "400", "seed": "18446744073709551615"})
    assert (cfg.n_cap, cfg.grid, cfg.verdict_tol) == (10, 400, 0.1)
    assert cfg.seed == 2**64 - 1


@pytest.mark.parametrize("values", [{"nope": "1"}, {"n_cap": "2"}, {"grid": "1.5"},
                                    {"seed": "-1"}, {"format": "xml"},
                                    {"verdict_tol": "2"}])
def test_bad_values(values):
    with pytest.raises(InvalidArgumentError):
        RunConfig().updated(values)


def test_parse_errors():
    with pytest.raises(InvalidArgumentError):
        parse_config_text("n_cap 3")
    with pytest.raises(InvalidArgumentError):
        parse_pairs("a=1,b")


@given(n_cap=st.integers(4, 64), grid=st.integers(100, 5000), seed=st.integers(0, 2**64 - 1),
       tol=st.floats(1e-6, 0.9), fmt=st.sampled_from(["json", "csv"]))
def test_config_text_round_trip(n_cap, grid, seed, tol, fmt):
    cfg = RunConfig(n_cap=n_cap, grid=grid, seed=seed, verdict_tol=tol, format=fmt)
    text = "\n".join(f"{k} = {v!r}" if isinstance(v, float) else f"{k} = {v}"
                     for k, v in cfg.as_dict().items())
    assert RunConfig().updated(parse_config_text(text)) == cfg


def run(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_cli_norm(capsys):
    assert run(capsys, "norm", "lp:p=2", "--vec", "3,4") == (0, "5\n", "")


def test_cli_norm_from_file(capsys, tmp_path):
    f = tmp_path / "a.txt"
    f.write_text("# vector\n1\n1\n1\n1\n")
    code, out, _ = run(capsys, "norm", "lpq:p=2,q=inf", "--file", str(f))
    assert code == 0
    assert float(out) == pytest.approx(2.0)


def test_cli_parse_error(capsys):
    code, out, err = run(capsys, "norm", "lp:p=@", "--vec", "1")
    assert code == 2
    assert out == ""
    assert "'@'" in err and len(err.strip().splitlines()) == 1


def test_cli_bad_caps(capsys):
    code, _, err = run(capsys, "norm", "lp:p=2", "--vec", "1", "--caps", "bogus=3")
    assert code == 2
    assert "bogus" in err


def test_cli_resource_limit(capsys):
    code, _, err = run(capsys, "rearrange", "--vec", "1,2")
    assert code == 0
    big = ",".join(["1"] * 4000)
    code, _, err = run(capsys, "tensor", "--vec", big, "--vec2", big)
    assert code == 3
    assert "resource limit" in err


def test_cli_indices_csv(capsys):
    code, out, _ = run(capsys, "indices", "lp:p=2", "lorentz:q=2,w=power(0.5)")
    assert code == 0
    lines = out.splitlines()
    assert lines[0].startswith("# config: ")
    assert lines[1] == "family,params,mu,nu,delta,sigma,method,residual"
    assert lines[2] == "lp,p=2,0.5,0.5,2,2,closed_form,0"
    assert lines[3].startswith("lorentz,q=2;w=power(0.5),0.25,0.25,2,4,")


def test_cli_optimal_json_embeds_config(capsys):
    code, out, _ = run(capsys, "optimal", "lp:p=2", "--n", "2", "--kind", "upper",
                       "--caps", "L_max=2,restarts=1,max_evals=20", "--seed", "5")
    assert code == 0
    doc = json.loads(out)
    assert doc["config"]["seed"] == 5
    assert doc["upper"]["direction"] == "lower_bound_of_sup"
    assert doc["upper"]["value"] == pytest.approx(2 ** 0.5)


def test_cli_criteria_and_strict(capsys, tmp_path):
    out_path = tmp_path / "rep.json"
    code, out, _ = run(capsys, "criteria", "orlicz:power(3)", "--out", str(out_path),
                       "--caps", "tensor_samples=3")
    assert out == ""
    doc = json.loads(out_path.read_text())
    assert code == 0
    assert all(c["verdict"] != "inconclusive" for c in doc["criteria"])


def test_cli_classify(capsys):
    code, out, _ = run(capsys, "classify", "lpq:p=3,q=1", "--strict")
    assert code == 0
    doc = json.loads(out)
    assert doc["classification"]["X_U"] == ["lp:p=1"]


def test_cli_output_is_deterministic(capsys):
    args = ("criteria", "lp:p=2", "--caps", "tensor_samples=3,pairing_samples=50")
    assert run(capsys, *args) == run(capsys, *args)


def test_cli_verify_subset(capsys):
    code, out, _ = run(capsys, "verify", "--only", "9")
    assert code == 0
    doc = json.loads(out)
    assert doc["passed"] and [r["id"] for r in doc["results"]] == [9]
    code, _, err = run(capsys, "verify", "--only", "11")
    assert code == 2
