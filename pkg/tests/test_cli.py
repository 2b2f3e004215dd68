import logging

import pytest

from app import build_parser, main


@pytest.fixture(autouse=True)
def restore_logging():
    root = logging.getLogger()
    handlers, level = root.handlers[:], root.level
    yield
    root.handlers[:] = handlers
    root.setLevel(level)


@pytest.fixture
def workspace(tmp_path, monkeypatch):
    monkeypatch.setenv("CSM_OUTPUT_DIR", str(tmp_path / "out"))
    return tmp_path


def test_generate_elevator(workspace, capsys):
    out = workspace / "e.txt"
    assert main(["generate", "elevator", "--out", str(out), "--records", "200", "--persons", "10",
                 "--seed", "1"]) == 0
    assert len(out.read_text(encoding="utf-8").splitlines()) == 200
    assert "200 records written" in capsys.readouterr().out


def test_generate_uses_output_dir(workspace):
    assert main(["generate", "restaurant", "--students", "5", "--professors", "2", "--records", "100"]) == 0
    assert (workspace / "out" / "restaurant.txt").exists()


def test_log_flag_writes_under_output_dir(workspace):
    assert main(["--log", "generate", "elevator", "--records", "20", "--persons", "2"]) == 0
    for handler in logging.getLogger().handlers:
        handler.flush()
    log = workspace / "out" / "logs" / "csmhr.log"
    assert "IntellElevator" in log.read_text(encoding="utf-8")


def test_build_predict_report(workspace, capsys):
    data = workspace / "campus.txt"
    main(["generate", "elevator", "--out", str(data), "--records", "500", "--persons", "10", "--seed", "4"])
    capsys.readouterr()

    assert main(["build", str(data), "--identify", "--window", "60"]) == 0
    out = capsys.readouterr().out
    assert "conversion_ms" in out
    models = workspace / "out" / "models"
    assert (models / "campus.csm-meta.json").exists()

    assert main(["predict", "campus", "--object", "urn:intellelevator:person:P0001", "--format", "table"]) == 0
    out = capsys.readouterr().out
    assert "prediction:" in out

    assert main(["predict", "campus", "--object", "urn:intellelevator:person:P0002", "--situation", "--laplace",
                 "--threshold", "0"]) == 0
    assert "prediction:" in capsys.readouterr().out

    xlsx = workspace / "report.xlsx"
    assert main(["report", str(data), "--xlsx", str(xlsx)]) == 0
    out = capsys.readouterr().out
    assert "DEFLATE" in out
    assert xlsx.exists()


def test_predict_unknown_object_fails(workspace, capsys):
    data = workspace / "small.txt"
    main(["generate", "elevator", "--out", str(data), "--records", "50", "--persons", "5"])
    main(["build", str(data)])
    assert main(["predict", "small", "--object", "nobody"]) == 1
    assert main(["predict", "missing-model", "--object", "0"]) == 1


def test_report_without_model_fails(workspace):
    data = workspace / "x.txt"
    data.write_text("", encoding="utf-8")
    assert main(["report", str(data)]) == 1


def test_empty_input_builds(workspace, capsys):
    data = workspace / "empty.txt"
    data.write_text("", encoding="utf-8")
    assert main(["build", str(data)]) == 0
    assert main(["report", str(data)]) == 0
    assert "degenerate" in capsys.readouterr().out


def test_missing_input_is_an_engine_error(workspace):
    assert main(["build", str(workspace / "nothing.txt"), "--no-save"]) == 1


def test_bad_settings_are_engine_errors(workspace):
    data = workspace / "e.txt"
    main(["generate", "elevator", "--out", str(data), "--records", "20", "--persons", "2"])
    assert main(["build", str(data), "--R", "0", "--no-save"]) == 1
    assert main(["build", str(data), "--bin", "BloodSugar", "--no-save"]) == 1


def test_bench_sweep(workspace, capsys):
    assert main(["bench-sweep", "--sizes", "200,400", "--persons", "5,10", "--format", "csv"]) == 0
    lines = [line for line in capsys.readouterr().out.splitlines() if line.startswith("elevator")]
    assert len(lines) == 4


@pytest.mark.parametrize("argv", [
    [],
    ["unknown"],
    ["generate", "plane"],
    ["bench-sweep", "--sizes", "ten"],
    ["predict", "model"],
])
def test_usage_errors_exit_2(argv):
    with pytest.raises(SystemExit) as info:
        build_parser().parse_args(argv)
    assert info.value.code == 2
