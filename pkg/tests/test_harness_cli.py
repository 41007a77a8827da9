import csv
import io
import json
import math

import numpy as np
import pytest

from perfectgen.cli import main
from perfectgen.errors import ScaleError, ValidationError
from perfectgen.generator import gen
from perfectgen.graphcore import graph6_decode
from perfectgen.harness import (
    EXPERIMENT_NAMES,
    ExperimentSpec,
    big_h_vs_ln,
    canonical_json,
    graph_invariants,
    h_normality_stats,
    run,
    thread_count,
    trial_rng,
)


def spec(**kw) -> ExperimentSpec:
    base = dict(name="invariants", n=20, trials=5, seed=7)
    base.update(kw)
    return ExperimentSpec(**base)


def test_spec_validation():
    with pytest.raises(ValidationError):
        spec(name="unknown")
    with pytest.raises(ValidationError):
        spec(trials=0)
    with pytest.raises(ValidationError):
        spec(n=0)
    with pytest.raises(ValidationError):
        spec(sign="plus")
    with pytest.raises(ValidationError):
        spec(pattern="D]o")  # pattern only makes sense for trichotomy
    with pytest.raises(ValidationError):
        spec(name="trichotomy")  # and there it is required
    assert spec(name="trichotomy", pattern="D]o").pattern == "D]o"


def test_spec_forced_sign():
    assert spec(sign="+").forced_sign == 1
    assert spec(sign="-").forced_sign == -1
    assert spec(sign="mixed").forced_sign is None


def test_experiment_names_all_runnable():
    # every advertised name runs end to end on a small instance
    for name in EXPERIMENT_NAMES:
        kw = {"name": name, "n": 60, "trials": 2, "seed": 3}
        if name == "trichotomy":
            kw["pattern"] = "D]o"
        rep = run(ExperimentSpec(**kw))
        assert rep.spec["name"] == name
        assert len(rep.trials) == 2
        assert rep.summary["errors"] == 0


def test_run_is_deterministic(monkeypatch):
    monkeypatch.setenv("PERFECTGEN_THREADS", "1")
    a = run(spec(trials=8)).to_json()
    monkeypatch.setenv("PERFECTGEN_THREADS", "2")
    b = run(spec(trials=8)).to_json()
    assert a == b


def test_run_records_trial_errors_without_aborting():
    # a two-vertex graph cannot carry a Hamilton cycle, so every trial
    # fails; the batch must still complete and count the failures
    rep = run(spec(name="hamilton", n=2, trials=4))
    assert rep.summary["errors"] == 4
    assert all("error" in t for t in rep.trials)


def test_report_json_shape():
    rep = run(spec(trials=3))
    obj = json.loads(rep.to_json())
    assert obj["spec"]["name"] == "invariants"
    assert len(obj["trials"]) == 3
    assert "summary" in obj and "environment" in obj
    assert obj["environment"]["version"]


def test_report_csv_shape():
    rep = run(spec(name="hamilton", n=30, trials=4))
    rows = list(csv.reader(io.StringIO(rep.to_csv())))
    header = rows[0]
    assert header == sorted(set(header))
    assert "trial" in header and "kind" in header
    assert len(rows) == 5
    width = len(header)
    assert all(len(r) == width for r in rows)


def test_canonical_json_is_stable_and_strict():
    assert canonical_json({"b": 1, "a": [True, None]}) == '{"a":[true,null],"b":1}'
    with pytest.raises(ValueError):
        canonical_json({"x": float("nan")})


def test_thread_count_env(monkeypatch):
    monkeypatch.setenv("PERFECTGEN_THREADS", "3")
    assert thread_count() == 3
    monkeypatch.setenv("PERFECTGEN_THREADS", "zero")
    with pytest.raises(ValidationError):
        thread_count()
    monkeypatch.setenv("PERFECTGEN_THREADS", "0")
    with pytest.raises(ValidationError):
        thread_count()
    monkeypatch.delenv("PERFECTGEN_THREADS")
    assert thread_count() >= 1


def test_trial_rng_reproducible():
    a = trial_rng(5, 2).integers(0, 1 << 30, size=4)
    b = trial_rng(5, 2).integers(0, 1 << 30, size=4)
    c = trial_rng(5, 3).integers(0, 1 << 30, size=4)
    assert (a == b).all()
    assert (a != c).any()


def test_h_normality_stats_contracts():
    with pytest.raises(ValidationError):
        h_normality_stats(49, 10, 0)
    st = h_normality_stats(60, 1, 5)
    assert st.variance is None and st.skewness is None and st.ks_distance is None
    st = h_normality_stats(60, 40, 5)
    assert st.variance is not None and st.variance > 0
    assert st.target_mean == pytest.approx(60 / (2 * math.log(60)))
    assert st.target_variance == pytest.approx(60 / (2 * math.log(60) ** 2))


def test_big_h_report_contracts():
    rep = big_h_vs_ln(60, 30, 4)
    assert 0.0 <= rep.tv_distance <= 1.0
    assert rep.noise_floor == pytest.approx(math.sqrt(rep.support / 30))
    assert rep.support >= 1


def test_graph_invariants_consistency():
    g, arr = gen(40, np.random.default_rng(8))
    inv = graph_invariants(g, arr)
    assert inv.h == min(inv.alpha, inv.omega)
    assert inv.big_h == max(inv.alpha, inv.omega)
    assert inv.kappa <= inv.delta <= inv.cap_delta
    assert inv.cap_delta <= inv.chi_prime <= inv.cap_delta + 1


def test_graph_invariants_needs_arrangement_when_large():
    g, arr = gen(70, np.random.default_rng(1))
    with pytest.raises(ScaleError):
        graph_invariants(g)
    inv = graph_invariants(g, arr)
    assert inv.alpha >= 1 and inv.omega >= 1


# -- command line ---------------------------------------------------------


def test_cli_gen_prints_graph6(capsys):
    assert main(["gen", "--n", "6", "--trials", "3", "--seed", "9"]) == 0
    lines = capsys.readouterr().out.strip().splitlines()
    assert len(lines) == 3
    for line in lines:
        assert graph6_decode(line.encode()).n == 6
    main(["gen", "--n", "6", "--trials", "3", "--seed", "9"])
    assert capsys.readouterr().out.strip().splitlines() == lines


def test_cli_gen_json_payload(tmp_path, capsys):
    out = tmp_path / "draws.json"
    assert main(["gen", "--n", "5", "--trials", "2", "--seed", "1", "--json", str(out)]) == 0
    capsys.readouterr()
    obj = json.loads(out.read_text())
    assert obj["n"] == 5 and obj["seed"] == 1
    assert len(obj["graphs"]) == 2
    for entry in obj["graphs"]:
        assert {"trial", "graph6", "arrangement"} <= set(entry)
        assert entry["arrangement"]["sign"] in (1, -1)


def test_cli_gen_arrangement_out_needs_single_trial(tmp_path, capsys):
    out = tmp_path / "arr.json"
    code = main(
        ["gen", "--n", "5", "--trials", "2", "--seed", "1", "--arrangement-out", str(out)]
    )
    capsys.readouterr()
    assert code == 2


def test_cli_gen_analyze_round_trip(tmp_path, capsys):
    arrfile = tmp_path / "arr.json"
    assert main(["gen", "--n", "30", "--seed", "4", "--arrangement-out", str(arrfile)]) == 0
    gfile = tmp_path / "g.g6"
    gfile.write_text(capsys.readouterr().out)
    assert main(["analyze", "--in", str(gfile), "--arrangement", str(arrfile)]) == 0
    out = capsys.readouterr().out
    assert "alpha = " in out and "chi_prime = " in out and "graph = 0" in out


def test_cli_analyze_missing_file(capsys):
    assert main(["analyze", "--in", "/nonexistent/x.g6"]) == 2
    assert capsys.readouterr().err.strip()


def test_cli_ldist_csv(tmp_path, capsys):
    out = tmp_path / "ldist.csv"
    assert main(["ldist", "--n", "12", "--csv", str(out)]) == 0
    capsys.readouterr()
    rows = list(csv.reader(io.StringIO(out.read_text())))
    assert rows[0] == ["k", "pmf", "log2_ell"]
    assert len(rows) == 14
    pmf = [float(r[1]) for r in rows[1:]]
    assert sum(pmf) == pytest.approx(1.0)


def test_cli_ldist_samples_reproducible(capsys):
    assert main(["ldist", "--n", "40", "--samples", "5", "--seed", "8"]) == 0
    first = capsys.readouterr().out
    assert main(["ldist", "--n", "40", "--samples", "5", "--seed", "8"]) == 0
    assert capsys.readouterr().out == first
    assert "samples = " in first and "mu = " in first


def test_cli_partition_output(capsys):
    assert main(["partition", "--m", "6", "--trials", "2", "--seed", "5"]) == 0
    lines = capsys.readouterr().out.strip().splitlines()
    assert len(lines) == 2
    for line in lines:
        members = sorted(int(x) for block in line.split("|") for x in block.split())
        assert members == list(range(6))


def test_cli_density_on_file(tmp_path, capsys):
    gfile = tmp_path / "k4.g6"
    gfile.write_text("C~\n")
    assert main(["density", "--in", str(gfile), "--pattern", "K3"]) == 0
    out = capsys.readouterr().out
    assert "t_graphon_ref = 7/32" in out
    assert "t_inj = 1/1" in out


def test_cli_density_graphon_only(capsys):
    assert main(["density", "--pattern", "K3", "--graphon"]) == 0
    out = capsys.readouterr().out
    assert "t_graphon = 7/32" in out
    assert "t_graphon_float = 0.21875" in out


def test_cli_density_needs_some_target(capsys):
    code = main(["density", "--pattern", "K3"])
    capsys.readouterr()
    assert code == 2


def test_cli_density_bad_pattern(capsys):
    code = main(["density", "--pattern", "K9", "--graphon"])
    capsys.readouterr()
    assert code == 2


def test_cli_experiment_summary(capsys):
    assert (
        main(
            [
                "experiment", "--name", "connectivity",
                "--n", "40", "--trials", "3", "--seed", "2",
            ]
        )
        == 0
    )
    out = capsys.readouterr().out
    assert "kappa_equals_delta_rate = " in out
    assert "errors = 0" in out


def test_cli_experiment_trichotomy_pattern(tmp_path, capsys):
    out = tmp_path / "report.json"
    assert (
        main(
            [
                "experiment", "--name", "trichotomy", "--pattern", "K2",
                "--n", "30", "--trials", "2", "--seed", "2", "--json", str(out),
            ]
        )
        == 0
    )
    capsys.readouterr()
    obj = json.loads(out.read_text())
    assert obj["spec"]["pattern"]  # stored in graph6 form
    assert len(obj["trials"]) == 2


def test_cli_exit_codes(tmp_path, capsys):
    assert main(["experiment", "--name", "bogus", "--n", "5", "--trials", "1", "--seed", "0"]) == 2
    capsys.readouterr()
    assert main(["ldist", "--n", "0"]) == 2
    capsys.readouterr()
    # a 70-vertex graph without a layout exceeds the exact-oracle scale
    from perfectgen.graphcore import Graph, graph6_encode

    gfile = tmp_path / "big.g6"
    gfile.write_text(graph6_encode(Graph.empty(70)).decode() + "\n")
    assert main(["analyze", "--in", str(gfile)]) == 3
    capsys.readouterr()
