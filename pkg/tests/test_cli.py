from sturmlab.cli import EXIT_OK, EXIT_PRECISION, EXIT_SPEC, EXIT_USAGE, build_parser, main

import json
import tempfile
import os
import pytest


def write_spec(directory, data):
    path = os.path.join(directory, "spec.json")
    with open(path, "w") as f:
        json.dump(data, f)
    return path


def test_sunit_command(capsys):
    assert main(["sunit", "--zmax", "10"]) == EXIT_OK
    data = json.loads(capsys.readouterr().out)
    assert data["command"] == "sunit"
    assert [1, 2, 1, 0] in [sol["z"] for sol in data["results"]["solutions"]]


def test_complexity_csv(capsys):
    assert main(["complexity", "--prefix", "500", "--nmax", "50", "--format", "csv"]) == EXIT_OK
    lines = capsys.readouterr().out.splitlines()
    assert lines[0] == "n,p_2,r_2,D,certified"
    assert len(lines) == 51
    assert lines[1].startswith("1,2,3,1,")


def test_output_is_reproducible(capsys):
    args = ["complexity", "--bases", "2", "3", "--prefix", "300", "--nmax", "40"]
    main(args)
    first = capsys.readouterr().out
    main(args)
    assert capsys.readouterr().out == first


def test_out_file():
    with tempfile.TemporaryDirectory() as temp_dir:
        spec = write_spec(temp_dir, {"type": "mechanical", "slope_cf": [1]})
        out = os.path.join(temp_dir, "table.csv")
        assert main(["complexity", "--spec", spec, "-L", "400", "--nmax", "20", "--format", "csv",
                     "--out", out]) == EXIT_OK
        with open(out) as f:
            assert f.readline().strip() == "n,p_2,r_2,D,certified"


def test_cf_command(capsys):
    assert main(["cf", "-b", "2", "-L", "300"]) == EXIT_OK
    data = json.loads(capsys.readouterr().out)
    assert data["results"]["M"] == 34


def test_precision_failure():
    assert main(["cf", "--prefix", "1"]) == EXIT_PRECISION


def test_invalid_spec():
    with tempfile.TemporaryDirectory() as temp_dir:
        assert main(["complexity", "--spec", os.path.join(temp_dir, "missing.json")]) == EXIT_SPEC
        spec = write_spec(temp_dir, {"type": "rational", "value": "1/3"})
        assert main(["dependent", "--spec", spec, "--bases", "2", "4", "-L", "100", "--nmax", "10"]) == EXIT_SPEC


def test_independent_bases_are_refused():
    assert main(["dependent", "--bases", "2", "3", "-L", "200", "--nmax", "20"]) == EXIT_USAGE


def test_random_spec_seed(capsys):
    with tempfile.TemporaryDirectory() as temp_dir:
        spec = write_spec(temp_dir, {"type": "random", "base": 3})
        args = ["complexity", "--spec", spec, "--bases", "3", "-L", "500", "--nmax", "10", "--seed", "4"]
        main(args)
        first = capsys.readouterr().out
        main(args)
        assert capsys.readouterr().out == first
        assert json.loads(first)["config"]["spec"]["seed"] == 4


def test_parser_requires_command():
    with pytest.raises(SystemExit):
        build_parser().parse_args([])
    with pytest.raises(SystemExit):
        build_parser().parse_args(["complexity", "--format", "xml"])


@pytest.mark.parametrize(
    "argv",
    [
        [],
        ["complexity", "--format", "xml"],
        ["cf", "--base", "two"],
        ["sunit", "--unknown"],
    ]
)
def test_bad_arguments_are_usage_errors(argv):
    assert main(argv) == EXIT_USAGE


def test_version_exits_cleanly(capsys):
    assert main(["--version"]) == EXIT_OK
    assert "sturmlab" in capsys.readouterr().out
