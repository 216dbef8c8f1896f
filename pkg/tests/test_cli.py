import json

import pytest

from carpetgaps.cli import main
from carpetgaps.corpus import corpus_text


@pytest.fixture
def corpus_file(tmp_path):
    def write(name):
        path = tmp_path / f"{name}.json"
        path.write_text(corpus_text(name))
        return str(path)
    return write


def run_json(capsys, argv):
    code = main(argv)
    out = capsys.readouterr().out
    return code, json.loads(out)


def test_classify_command(capsys, corpus_file):
    code, doc = run_json(capsys, ["classify", "--digitset",
                                  corpus_file("d1")])
    assert code == 0
    assert doc["schema"] == "carpetgaps/classify/v1"
    assert doc["classification"]["digit_count"] == 8
    assert doc["classification"]["row_counts"] == [3, 1, 4]


def test_components_command(capsys, corpus_file):
    code, doc = run_json(capsys, ["components", "--digitset",
                                  corpus_file("full_square"), "--k", "3"])
    assert code == 0
    assert doc["component_count"] == 1


def test_components_tilde(capsys, corpus_file):
    code, doc = run_json(capsys, ["components", "--digitset",
                                  corpus_file("strong_separation"),
                                  "--k", "1", "--tilde"])
    assert code == 0
    assert doc["component_count"] == 18
    assert doc["domain"] == "tilde"


def test_csc_command(capsys, corpus_file):
    code, doc = run_json(capsys, ["csc", "--digitset",
                                  corpus_file("strong_separation"),
                                  "--kmax", "3"])
    assert code == 0
    assert doc["found"] and doc["certificate"]["level"] == 1


def test_cardinality_command(capsys, corpus_file):
    code, doc = run_json(capsys, ["cardinality", "--digitset",
                                  corpus_file("e3_standin")])
    assert code == 0
    assert doc["verdict"] == "infinite"
    assert doc["evidence"] == "linear_rule"


def test_gaps_command(capsys, corpus_file):
    code, doc = run_json(capsys, ["gaps", "--digitset",
                                  corpus_file("cantor_product"), "--k", "3"])
    assert code == 0
    assert doc["entries"] == [{"multiplicity": 1, "value": "4/27"},
                              {"multiplicity": 2, "value": "1/27"}]


def test_hbracket_command(capsys, corpus_file):
    code, doc = run_json(capsys, ["hbracket", "--digitset",
                                  corpus_file("cantor_product"),
                                  "--level", "5", "--delta", "1/2"])
    assert code == 0
    assert (doc["h_low"], doc["h_high"]) == (1, 1)


def test_exponent_csv(capsys, corpus_file):
    code = main(["exponent", "--digitset", corpus_file("strong_separation"),
                 "--kmin", "2", "--kmax", "4", "--format", "csv"])
    out = capsys.readouterr().out
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0] == "delta_num,delta_den,h_low,h_high,L"
    assert lines[1] == "1,9,2,2,4"
    assert len(lines) == 4


def test_exponent_json(capsys, corpus_file):
    code, doc = run_json(capsys, ["exponent", "--digitset",
                                  corpus_file("strong_separation"),
                                  "--kmin", "2", "--kmax", "6"])
    assert code == 0
    assert doc["relative_error"] < 0.01
    assert doc["predicted"]["case_tag"] == "nonlinear_partial_rows"


def test_compare_command(capsys, corpus_file):
    code, doc = run_json(capsys, ["compare", "--a", corpus_file("d1"),
                                  "--b", corpus_file("d2")])
    assert code == 0
    assert doc["comparability"]["verdict"] == "not_comparable"
    assert "not Lipschitz equivalent" in doc["conclusion"]


def test_render_svg_and_csv(capsys, corpus_file):
    path = corpus_file("strong_separation")
    assert main(["render", "--digitset", path, "--k", "1"]) == 0
    svg = capsys.readouterr().out
    assert svg.count("<rect") == 2
    assert main(["render", "--digitset", path, "--k", "1",
                 "--format", "csv"]) == 0
    csv = capsys.readouterr().out
    assert "X,Y" in csv and "3,1" in csv


def test_output_file_written(tmp_path, corpus_file):
    target = tmp_path / "out.json"
    code = main(["classify", "--digitset", corpus_file("d2"),
                 "--output", str(target)])
    assert code == 0
    assert json.loads(target.read_text())["classification"]["digit_count"] \
        == 12


def test_byte_identical_reruns(capsys, corpus_file):
    argv = ["compare", "--a", corpus_file("d1"), "--b", corpus_file("d2")]
    main(argv)
    first = capsys.readouterr().out
    main(argv)
    second = capsys.readouterr().out
    assert first == second


def test_exit_codes(capsys, tmp_path, corpus_file):
    assert main(["classify", "--digitset",
                 str(tmp_path / "missing.json")]) == 4
    bad = tmp_path / "bad.json"
    bad.write_text('{"n":3,"m":4,"digits":[[0,0],[1,1]]}')
    assert main(["classify", "--digitset", str(bad)]) == 2
    assert main(["components", "--digitset", corpus_file("d2"),
                 "--k", "12"]) == 3
    capsys.readouterr()


def test_reproduce_fast_subset(capsys):
    code = main(["reproduce", "--criteria", "2,4"])
    out = capsys.readouterr().out
    assert code == 0
    assert "[PASS] criterion 2" in out
    assert "[PASS] criterion 4" in out
    assert "2/2 criteria passed" in out
