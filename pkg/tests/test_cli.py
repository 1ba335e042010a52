import io
from fractions import Fraction

import pytest

from padicwave import constants
from padicwave.cli import build_parser, main, resolve_config, run
from padicwave.metric import DeformedMetric, complete_flag
from padicwave.padic import PadicScalar
from padicwave.utils.checks import (
    check_alpha, check_digits, check_layer, check_matrix, check_metric,
    check_prime)
from padicwave.utils.io import (
    Report, parse_matrix, parse_metric, parse_padic, parse_rational,
    read_metric, write_metric)

HALF = Fraction(1, 2)


def _config(*argv):
    return resolve_config(build_parser().parse_args(list(argv)))


def test_defaults(metric_s, S):
    cfg = _config("basis")
    assert cfg.metric == metric_s
    assert cfg.matrix == S
    assert (cfg.scales, cfg.depth) == (constants.DEFAULT_SCALES,
                                       constants.DEFAULT_DEPTH)
    assert cfg.alpha == (1, 2)
    assert (cfg.series_depth, cfg.grid) == constants.MONNA_DEFAULTS[2]
    assert cfg.layer == "auto"


def test_flag_defaults(flag3, cyclic3):
    cfg = _config("spectral", "--prime", "3")
    assert cfg.metric == flag3
    assert cfg.matrix == cyclic3

    cfg = _config("parseval", "--prime", "5", "--dim", "1")
    assert cfg.metric == complete_flag(5, 1)
    assert cfg.matrix.to_integers() == ((5,),)
    assert (cfg.series_depth, cfg.grid) == constants.MONNA_DEFAULTS[1]


def test_options():
    cfg = _config("spectral", "--metric", "q", "--alpha", "1/2,3",
                  "--layer", "float", "--digits", "0,0;0,1", "--seed", "7")
    assert cfg.matrix.to_integers() == constants.MATRIX_Q
    assert cfg.alpha == (HALF, 3)
    assert cfg.layer == "float"
    assert cfg.digits == ((0, 0), (0, 1))
    assert cfg.seed == 7


@pytest.mark.parametrize('argv', [
    ["parseval", "--prime", "4"],
    ["monna", "--series-depth", "5", "--grid", "6"],
    ["spectral", "--alpha", "-1"],
    ["spectral", "--layer", "symbolic"],
    ["basis", "--metric", "q", "--prime", "3"],
    ["basis", "--matrix", "1,2;3"],
    ["basis", "--seed", "x"],
], ids=[' not a prime ', ' grid above series depth ', ' negative alpha ',
        ' unknown layer ', ' metric over another prime ', ' ragged matrix ',
        ' seed '])
def test_configuration_errors(argv, capsys):
    assert main(argv) == constants.EXIT_CONFIG
    assert "padicwave: " in capsys.readouterr().err


def test_unknown_command():
    with pytest.raises(SystemExit):
        build_parser().parse_args(["plot"])


def test_parseval_command(capsys):
    code = main(["parseval", "--prime", "3", "--dim", "1", "--scales", "4"])
    out = capsys.readouterr().out
    assert code == constants.EXIT_OK
    assert out.startswith("# padicwave parseval")
    assert "sum: 80/81" in out
    assert out.endswith("result: pass\n")


def test_dilation_command(capsys):
    argv = ["verify-dilation", "--metric", "q", "--matrix", "Q"]
    assert main(argv) == constants.EXIT_OK
    assert "[ball actions]" in capsys.readouterr().out

    argv = ["verify-dilation", "--metric", "q", "--matrix", "S"]
    assert main(argv) == constants.EXIT_FAILURE
    assert "FAIL A is a dilation" in capsys.readouterr().out


def test_isometry_command(capsys):
    assert main(["verify-isometry", "--trials", "200"]) == constants.EXIT_OK
    out = capsys.readouterr().out
    assert "deformed isometry: False" in out
    assert "PASS classifier agrees with oracle" in out


def test_basis_and_spectral_commands(tmp_path):
    argv = ["--metric", "q", "--matrix", "Q", "--scales", "1", "--depth", "1"]
    for command in ("basis", "spectral"):
        out = tmp_path / "{}.txt".format(command)
        assert main([command] + argv + ["--out", str(out)]) == \
            constants.EXIT_OK
        assert out.read_text().endswith("result: pass\n")


def test_monna_command(tmp_path, capsys):
    csv = tmp_path / "unit.csv"
    argv = ["monna", "--prime", "2", "--dim", "1", "--series-depth", "12",
            "--grid", "6"]
    assert main(argv + ["--csv", str(csv)]) == constants.EXIT_OK
    out = capsys.readouterr().out
    assert "outer m=6: 1" in out
    assert "PASS rho maps 2-adic wavelets to Haar wavelets" in out

    lines = csv.read_text().splitlines()
    assert lines[0] == "# A: 2"
    assert len([line for line in lines if not line.startswith("#")]) == 4096
    intervals = (tmp_path / "unit.csv.intervals").read_text().splitlines()
    assert intervals[-2:] == ["0,1/2,1", "1/2,1,-1"]

    assert main(argv + ["--digits", "0;3"]) == constants.EXIT_FAILURE
    assert "FAIL R has measure one" in capsys.readouterr().out


def test_guard_exit(capsys):
    argv = ["monna", "--prime", "2", "--dim", "1", "--series-depth", "23",
            "--grid", "6"]
    assert main(argv) == constants.EXIT_CONFIG
    assert "guard: MAX_SERIES_POINTS" in capsys.readouterr().out


def test_run(metric_q, Q):
    cfg = _config("parseval", "--metric", "q", "--matrix", "Q",
                  "--scales", "3")
    stream = io.StringIO()
    code, report = run(cfg, stream)
    assert code == constants.EXIT_OK
    assert report.passed
    assert stream.getvalue() == report.render()
    assert "sum: 7/8" in report.lines


def test_report():
    report = Report("demo")
    report.field("p", 2)
    report.section("checks")
    report.check("first", True)
    report.check("second", False, "1 != 2")
    report.extend(["witness"])
    assert not report.passed
    assert report.render() == "\n".join([
        "# demo", "p: 2", "[checks]", "PASS first", "FAIL second (1 != 2)",
        "  witness", "result: fail (1 failed)"]) + "\n"


def test_check_prime():
    assert check_prime("7") == 7
    for bad in ("1", "9", "two"):
        with pytest.raises(ValueError):
            check_prime(bad)


def test_check_matrix(Q):
    assert check_matrix("quincunx", 2, 2) == Q
    assert check_matrix("1,-1;1,1", 2, 2) == Q
    assert check_matrix("UQU", 2, 2).to_integers() == ((2, -1), (2, 0))
    assert check_matrix("cyclic", 3, 1).to_integers() == ((3,),)
    with pytest.raises(ValueError):
        check_matrix("S", 3, 2)
    with pytest.raises(ValueError):
        check_matrix("1,0,0;0,1,0;0,0,1", 2, 2)
    with pytest.raises(ValueError):
        check_matrix("R", 2, 2)


def test_check_metric(metric_s, metric_q, tmp_path):
    assert check_metric("s") == metric_s
    assert check_metric("Q") == metric_q
    assert check_metric(None) == DeformedMetric.standard(2, 2)
    assert check_metric("standard", 3, 3) == DeformedMetric.standard(3, 3)
    assert check_metric("flag", 2, 3) == complete_flag(2, 3)
    assert check_metric("1/2,0|1 0; 1 1", 2) == metric_q
    assert check_metric("1/2,0", 2, 2) == metric_s

    path = tmp_path / "q.metric"
    write_metric(metric_q, str(path))
    assert check_metric(str(path), 2, 2) == metric_q
    assert read_metric(str(path)) == metric_q

    with pytest.raises(ValueError):
        check_metric("1/2,0")
    with pytest.raises(ValueError):
        check_metric("s", 2, 3)


def test_parse_metric():
    text = "# comment\nprime: 3\nweights: 2/3 1/3 0  # flag\n"
    assert parse_metric(text) == complete_flag(3, 3)
    for bad in ("weights: 0 0", "prime: 2\ndimension: 3\nweights: 0 0",
                "prime: 2\nweights: 0\nradius: 1", "prime 2"):
        with pytest.raises(ValueError):
            parse_metric(bad)


def test_literals():
    assert parse_rational(" 3/4 ") == Fraction(3, 4)
    assert parse_rational("0.5") == HALF
    assert parse_matrix("1,-1;1,1") == ((1, -1), (1, 1))
    assert parse_padic("2:-1:1 1", 8) == \
        PadicScalar.from_rational(Fraction(3, 2), 2, 8)
    with pytest.raises(ValueError):
        parse_rational("1/0")
    with pytest.raises(ValueError):
        parse_matrix("1,2;3")


def test_other_checks():
    assert check_alpha("1/2") == HALF
    assert check_alpha(0) == 0
    assert check_digits("0,0; 0,1;", 2) == ((0, 0), (0, 1))
    for bad in ("0,1/2", "0;1", ";"):
        with pytest.raises(ValueError):
            check_digits(bad, 2)
    assert check_layer("exact") == "exact"


if __name__ == '__main__':
    pytest.main([str(__file__.replace('\\', '/')), '-v'])
