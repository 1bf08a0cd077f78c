"""End-to-end checks of the command line interface: CSV shapes, exit codes,
determinism of seeded commands, and the buffered-output guarantee that a
failed command never emits a partial table."""

import math
import subprocess
import sys

import pytest

from alphanorm import AlphaNormal, cli


def run_cli(capsys, *argv):
    code = cli.main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_density_table(capsys):
    code, out, err = run_cli(
        capsys, "density-table", "--alpha", "1", "--xmin", "-1", "--xmax", "1",
        "--steps", "3",
    )
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "x,pdf"
    assert lines[2] == "0,inf"
    d = AlphaNormal(1.0)
    assert float(lines[1].split(",")[1]) == pytest.approx(d.pdf(-1.0), rel=1e-11)


def test_cdf_table_values(capsys):
    code, out, _ = run_cli(
        capsys, "cdf-table", "--alpha", "2", "--xmin", "0", "--xmax", "1",
        "--steps", "2",
    )
    assert code == 0
    rows = [line.split(",") for line in out.splitlines()[1:]]
    assert float(rows[0][1]) == 0.5
    assert float(rows[1][1]) == pytest.approx(AlphaNormal(2.0).cdf(1.0), rel=1e-11)


def test_quantile_list(capsys):
    code, out, _ = run_cli(capsys, "quantile", "--alpha", "2", "--u", "0.1,0.5,0.9")
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "u,quantile"
    assert lines[2] == "0.5,0"
    assert float(lines[3].split(",")[1]) == pytest.approx(
        AlphaNormal(2.0).quantile(0.9), rel=1e-11
    )


def test_quantile_domain_failure_no_partial_output(capsys):
    code, out, err = run_cli(capsys, "quantile", "--alpha", "2", "--u", "0.5,0")
    assert code == 2
    assert out == ""
    assert "error" in err.lower()


def test_sample_header_and_determinism(capsys):
    args = ("sample", "--alpha", "2", "--n", "5", "--seed", "7", "--stream", "1")
    code1, out1, _ = run_cli(capsys, *args)
    code2, out2, _ = run_cli(capsys, *args)
    assert code1 == code2 == 0
    assert out1 == out2
    lines = out1.splitlines()
    assert lines[0] == "# seed=7 stream=1"
    assert lines[1] == "value"
    assert len(lines) == 7


def test_sample_seed_changes_output(capsys):
    _, out1, _ = run_cli(capsys, "sample", "--alpha", "2", "--n", "5", "--seed", "1")
    _, out2, _ = run_cli(capsys, "sample", "--alpha", "2", "--n", "5", "--seed", "2")
    assert out1 != out2


def test_moments_table(capsys):
    code, out, _ = run_cli(capsys, "moments", "--alpha", "1", "--p", "0.5,1,2")
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "p,absolute_moment"
    assert lines[2] == "1,1"
    assert lines[3] == "2,3"
    assert float(lines[1].split(",")[1]) == pytest.approx(
        math.sqrt(2.0 / math.pi), rel=1e-11
    )


def test_entropy_both_families(capsys):
    code, out, _ = run_cli(capsys, "entropy", "--alpha", "2")
    assert code == 0
    assert out.splitlines()[1].split(",")[1] == "1.41893853320"[:13] or float(
        out.splitlines()[1].split(",")[1]
    ) == pytest.approx(1.4189385332046727, rel=1e-11)

    code, out, _ = run_cli(
        capsys, "entropy", "--family", "weibull", "--shape", "2", "--scale", "1"
    )
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "shape,scale,entropy"
    assert float(lines[1].split(",")[2]) == pytest.approx(0.5954606518908211, rel=1e-11)


def test_entropy_requires_matching_family_flags(capsys):
    code, _, err = run_cli(capsys, "entropy", "--family", "weibull", "--alpha", "2")
    assert code == 1
    code, _, _ = run_cli(capsys, "entropy", "--family", "alpha-normal", "--shape", "2")
    assert code == 1


def test_psi_norm_numeric_column(capsys):
    code, out, _ = run_cli(capsys, "psi-norm", "--alpha", "2", "--numeric")
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "alpha,psi_norm,psi_norm_numeric"
    closed, numeric = lines[1].split(",")[1:]
    assert float(closed) == pytest.approx(math.sqrt(8.0 / 3.0), rel=1e-11)
    assert float(numeric) == pytest.approx(float(closed), rel=1e-7)


def test_psi_norm_weibull(capsys):
    code, out, _ = run_cli(
        capsys, "psi-norm", "--family", "weibull", "--shape", "1,2", "--scale", "2"
    )
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "shape,scale,psi_norm"
    assert float(lines[1].split(",")[2]) == pytest.approx(4.0, rel=1e-11)


def test_tails_threshold_header_and_booleans(capsys):
    code, out, _ = run_cli(
        capsys, "tails", "--alpha", "2", "--tmin", "0", "--tmax", "2", "--steps", "3"
    )
    assert code == 0
    lines = out.splitlines()
    assert lines[0].startswith("# threshold=")
    assert float(lines[0].split("=")[1]) == pytest.approx(1.7040975300119277, rel=1e-10)
    assert lines[1] == "t,exact_tail,upper_bound,lower_bound,upper_ok,lower_ok"
    for row in lines[2:]:
        cells = row.split(",")
        assert cells[4] == "true"
        assert cells[5] == "true"


def test_mv_density(tmp_path, capsys):
    sigma = tmp_path / "sigma.csv"
    sigma.write_text("2\n1.0,0.5\n0.5,1.0\n")
    code, out, _ = run_cli(
        capsys, "mv-density", "--sigma", str(sigma), "--alpha", "2",
        "--x", "0.5,0.5",
    )
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "x1,x2,pdf"
    from alphanorm import CorrelationMatrix, MultivariateAlphaNormal

    m = MultivariateAlphaNormal(CorrelationMatrix.bivariate(0.5), 2.0)
    assert float(lines[1].split(",")[2]) == pytest.approx(
        m.joint_pdf([0.5, 0.5]), rel=1e-11
    )


def test_mv_density_singular_point_fails_cleanly(tmp_path, capsys):
    sigma = tmp_path / "sigma.csv"
    sigma.write_text("2\n1.0,0.5\n0.5,1.0\n")
    code, out, err = run_cli(
        capsys, "mv-density", "--sigma", str(sigma), "--alpha", "1", "--x", "0,0.5"
    )
    assert code == 2
    assert out == ""
    assert "singular" in err


def test_mv_cdf_repeatable_and_exact_when_bivariate(tmp_path, capsys):
    sigma = tmp_path / "sigma.csv"
    sigma.write_text("2\n1.0,0.5\n0.5,1.0\n")
    args = (
        "mv-cdf", "--sigma", str(sigma), "--alpha", "1",
        "--x", "0,0", "--x", "0.5,0.5", "--n", "50000", "--seed", "3",
    )
    code1, out1, _ = run_cli(capsys, *args)
    code2, out2, _ = run_cli(capsys, *args)
    assert code1 == code2 == 0
    assert out1 == out2
    lines = out1.splitlines()
    assert lines[0] == "x1,x2,cdf,std_error"
    first = lines[1].split(",")
    assert float(first[2]) == pytest.approx(1.0 / 3.0, abs=1e-10)
    assert float(first[3]) == 0.0


def test_mv_cdf_bad_matrix_file(tmp_path, capsys):
    sigma = tmp_path / "bad.csv"
    sigma.write_text("2\n1.0,0.5\n")
    code, out, err = run_cli(
        capsys, "mv-cdf", "--sigma", str(sigma), "--alpha", "1", "--x", "0,0"
    )
    assert code == 2
    assert out == ""


def test_mv_missing_sigma_file(capsys):
    code, _, err = run_cli(
        capsys, "mv-density", "--sigma", "/nonexistent/sigma.csv", "--alpha", "1",
        "--x", "0,0",
    )
    assert code == 2


def test_limit_pmf_rho(capsys):
    code, out, _ = run_cli(capsys, "limit-pmf", "--rho", "0.5")
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "s1,s2,pmf,std_error"
    table = {tuple(r.split(",")[:2]): r.split(",")[2] for r in lines[1:]}
    assert float(table[("1", "1")]) == pytest.approx(1.0 / 3.0, abs=1e-11)
    assert float(table[("-1", "1")]) == pytest.approx(1.0 / 6.0, abs=1e-11)
    assert len(lines) == 5


def test_limit_pmf_sigma_matrix(tmp_path, capsys):
    sigma = tmp_path / "sigma.csv"
    sigma.write_text("3\n1.0,0.5,0.5\n0.5,1.0,0.5\n0.5,0.5,1.0\n")
    code, out, _ = run_cli(
        capsys, "limit-pmf", "--sigma", str(sigma), "--n", "50000", "--seed", "1"
    )
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "s1,s2,s3,pmf,std_error"
    assert len(lines) == 9
    total = sum(float(r.split(",")[3]) for r in lines[1:])
    assert total == pytest.approx(1.0, abs=1e-9)


def test_limit_pmf_requires_exactly_one_source(capsys):
    code, _, _ = run_cli(capsys, "limit-pmf")
    assert code == 1
    code, _, _ = run_cli(capsys, "limit-pmf", "--rho", "0.5", "--sigma", "x.csv")
    assert code == 1


def test_figure1_columns_and_center_row(capsys):
    code, out, _ = run_cli(capsys, "figure1", "--steps", "3")
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "x,pdf_alpha_1,pdf_alpha_2,pdf_alpha_3,pdf_alpha_5"
    center = lines[2].split(",")
    assert center[0] == "0"
    assert center[1] == "inf"
    assert float(center[2]) == pytest.approx(1.0 / math.sqrt(2 * math.pi), rel=1e-11)
    assert center[3] == "0"
    assert center[4] == "0"


def test_figure1_default_grid_size(capsys):
    code, out, _ = run_cli(capsys, "figure1")
    assert code == 0
    assert len(out.splitlines()) == 602


def test_verify_subset_pass(capsys):
    code, out, _ = run_cli(
        capsys, "verify", "--suite", "gaussian-reduction,weibull-entropy"
    )
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "criterion,status,measured,tolerance,detail"
    assert lines[1].startswith("gaussian-reduction,pass,")
    assert lines[2].startswith("weibull-entropy,pass,")


def test_verify_unknown_suite_is_usage_error(capsys):
    code, out, err = run_cli(capsys, "verify", "--suite", "bogus")
    assert code == 1
    assert out == ""


def test_unknown_command(capsys):
    assert run_cli(capsys, "nosuchcmd")[0] == 1


def test_missing_required_flag(capsys):
    assert run_cli(capsys, "sample", "--alpha", "2")[0] == 1


def test_bad_float_list(capsys):
    assert run_cli(capsys, "quantile", "--alpha", "2", "--u", "0.5,oops")[0] == 1


def test_grid_validation(capsys):
    code, _, _ = run_cli(
        capsys, "density-table", "--alpha", "2", "--xmin", "1", "--xmax", "-1"
    )
    assert code == 1
    code, _, _ = run_cli(
        capsys, "density-table", "--alpha", "2", "--steps", "1"
    )
    assert code == 1


def test_help_exits_zero(capsys):
    assert run_cli(capsys, "--help")[0] == 0
    assert run_cli(capsys, "sample", "--help")[0] == 0


def test_no_arguments_is_usage_error(capsys):
    assert run_cli(capsys)[0] == 1


def test_entry_point_subprocess_round_trip():
    # The installed module runs standalone and byte-reproduces seeded output.
    cmd = [
        sys.executable, "-m", "alphanorm.cli",
        "sample", "--alpha", "1.5", "--n", "4", "--seed", "11", "--stream", "2",
    ]
    a = subprocess.run(cmd, capture_output=True, timeout=120)
    b = subprocess.run(cmd, capture_output=True, timeout=120)
    assert a.returncode == b.returncode == 0
    assert a.stdout == b.stdout
    assert a.stdout.startswith(b"# seed=11 stream=2\n")


def test_error_diagnostics_respect_no_color(capsys, monkeypatch):
    monkeypatch.setenv("NO_COLOR", "1")
    code, _, err = run_cli(capsys, "quantile", "--alpha", "2", "--u", "0")
    assert code == 2
    assert "\x1b[" not in err
