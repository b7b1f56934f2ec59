import json

import pytest

from acqc.cli import build_parser, cell_seed, main


def _write_graphs(tmp_path, count=1, n_nodes=4):
    out = tmp_path / "graphs"
    code = main(
        [
            "generate",
            "--rows",
            "3",
            "--cols",
            "3",
            "--n-nodes",
            str(n_nodes),
            "--count",
            str(count),
            "--seed",
            "5",
            "--out",
            str(out),
        ]
    )
    assert code == 0
    return sorted(out.glob("graph_*.json"))


def test_cell_seed_is_stable():
    # Frozen values: derived from sha256, so they must never change.
    assert cell_seed(0, "graph_0000", "acqc", 1.0) == 4519909079622345450
    assert cell_seed(0, "graph_0000", "acqc", 0.1) == 11098807232614457622
    assert cell_seed(1, "graph_0000", "acqc", 1.0) != cell_seed(
        0, "graph_0000", "acqc", 1.0
    )
    assert cell_seed(0, "graph_0000", "smooth", 1.0) != cell_seed(
        0, "graph_0000", "acqc", 1.0
    )


def test_parser_covers_subcommands():
    parser = build_parser()
    args = parser.parse_args(["generate", "--rows", "2", "--cols", "2", "--n-nodes", "2"])
    assert args.command == "generate"
    args = parser.parse_args(["run", "g.json", "--times", "0.5,1"])
    assert args.graphs == ["g.json"]
    args = parser.parse_args(["schedule", "--protocol", "smooth"])
    assert args.protocol == "smooth"
    args = parser.parse_args(["verify"])
    assert args.command == "verify"


def test_generate_writes_instances(tmp_path, capsys):
    paths = _write_graphs(tmp_path, count=3)
    assert len(paths) == 3
    lines = [l for l in capsys.readouterr().out.splitlines() if l]
    assert len(lines) == 3
    assert "mis=" in lines[0]
    docs = [json.loads(p.read_text()) for p in paths]
    seeds = [d["seed"] for d in docs]
    assert seeds == [5, 6, 7]
    assert all(len(d["positions"]) == 4 for d in docs)


def test_generate_is_deterministic(tmp_path):
    a = _write_graphs(tmp_path / "a", count=2)
    b = _write_graphs(tmp_path / "b", count=2)
    for pa, pb in zip(a, b):
        assert pa.read_bytes() == pb.read_bytes()


def test_schedule_export_json(tmp_path):
    out = tmp_path / "s.json"
    code = main(
        ["schedule", "--protocol", "smooth", "--time", "0.5", "--out", str(out)]
    )
    assert code == 0
    doc = json.loads(out.read_text())
    assert doc["protocol"] == "smooth"
    assert doc["T_us"] == 0.5


def test_schedule_export_warns_on_synthesized_peak(tmp_path, capsys):
    out = tmp_path / "s.csv"
    code = main(
        [
            "schedule",
            "--protocol",
            "acqc",
            "--time",
            "1.0",
            "--format",
            "csv",
            "--out",
            str(out),
        ]
    )
    assert code == 0
    err = capsys.readouterr().err
    assert "amplitude peaks at" in err
    lines = out.read_text().splitlines()
    assert lines[0] == "t,omega,delta,phi"


def test_run_writes_aggregate_and_cells(tmp_path):
    graphs = _write_graphs(tmp_path)
    out = tmp_path / "results"
    code = main(
        [
            "run",
            str(graphs[0]),
            "--protocols",
            "smooth",
            "--times",
            "0.15",
            "--shots",
            "50",
            "--seed",
            "2",
            "--out",
            str(out),
        ]
    )
    assert code == 0
    lines = (out / "aggregate.csv").read_text().splitlines()
    assert lines[0].startswith("# config sha256=")
    assert lines[1] == "instance,protocol,T,r,ci,min_ratio,ground_pop,status"
    assert lines[2].endswith(",ok")
    cell = json.loads((out / "graph_0000_smooth_T0.15.json").read_text())
    assert cell["shots"] == 50
    summary = json.loads((out / "summary.json").read_text())
    assert summary["groups"][0]["count"] == 1
    assert 0.0 <= summary["groups"][0]["r"]["median"] <= 1.2


def test_run_is_deterministic_across_jobs(tmp_path):
    graphs = _write_graphs(tmp_path, count=2)
    argv = [
        "run",
        *[str(p) for p in graphs],
        "--protocols",
        "smooth",
        "--times",
        "0.15",
        "--shots",
        "40",
        "--seed",
        "9",
    ]
    out1 = tmp_path / "j1"
    out2 = tmp_path / "j2"
    assert main(argv + ["--out", str(out1), "--jobs", "1"]) == 0
    assert main(argv + ["--out", str(out2), "--jobs", "2"]) == 0
    assert (out1 / "aggregate.csv").read_bytes() == (out2 / "aggregate.csv").read_bytes()


def test_run_reports_cell_failures(tmp_path):
    graphs = _write_graphs(tmp_path)
    out = tmp_path / "results"
    code = main(
        [
            "run",
            str(graphs[0]),
            "--protocols",
            "smooth",
            "--times",
            "-1.0",
            "--out",
            str(out),
        ]
    )
    assert code == 1
    lines = (out / "aggregate.csv").read_text().splitlines()
    assert "error:" in lines[2]


def test_run_requires_out(tmp_path, capsys):
    graphs = _write_graphs(tmp_path)
    assert main(["run", str(graphs[0])]) == 2
    assert "requires --out" in capsys.readouterr().err


def test_unknown_protocol_is_config_error(tmp_path, capsys):
    graphs = _write_graphs(tmp_path)
    code = main(
        ["run", str(graphs[0]), "--protocols", "bogus", "--out", str(tmp_path / "r")]
    )
    assert code == 2
    assert "unknown protocol" in capsys.readouterr().err


def test_config_errors_exit_2(tmp_path):
    # bad n_samples surfaces as a config error, not a traceback
    code = main(
        [
            "schedule",
            "--protocol",
            "smooth",
            "--n-samples",
            "1",
            "--out",
            str(tmp_path / "s.json"),
        ]
    )
    assert code == 2


def test_usage_error_exits_2():
    with pytest.raises(SystemExit) as exc:
        build_parser().parse_args(["run"])
    assert exc.value.code == 2
