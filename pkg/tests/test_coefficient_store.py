import os
import stat

import pytest

from maasslab.core.errors import CoefficientParseError, InvariantViolationError, OddFormError
from maasslab.models.form import MaassForm
from maasslab.services.coefficient_store import (
    format_form,
    ingest_form,
    load_form,
    parse_form,
    store_form,
    write_atomic,
)
from maasslab.services.hecke import hecke_extend

HEADER = "t 13.779751351890\nparity even\nrho1 1.25\n"


def test_store_and_load_reproduce_every_double(synthetic_form, tmp_path):
    path = tmp_path / "form.txt"
    store_form(synthetic_form, path)
    loaded = load_form(path)
    assert loaded.t == synthetic_form.t
    assert loaded.rho_one == synthetic_form.rho_one
    assert loaded.hecke.prime_eigenvalues == synthetic_form.hecke.prime_eigenvalues
    assert loaded.hecke.values == synthetic_form.hecke.values
    assert loaded.hecke.extent == 36
    assert format_form(loaded) == path.read_text(encoding="utf-8")


def test_format_layout(synthetic_form):
    lines = format_form(synthetic_form).splitlines()
    assert lines[0].startswith("t ")
    assert lines[1] == "parity even"
    assert lines[2] == "rho1 1"
    assert lines[3].split()[0] == "2"
    assert len(lines) == 3 + 11


def test_header_only_file():
    form = parse_form(HEADER)
    assert form.hecke.extent == 1
    assert form.rho_one == 1.25


def test_extent_reaches_the_next_prime():
    form = parse_form(HEADER + "2 0.5\n3 -0.25\n5 0.125\n")
    assert form.hecke.extent == 6
    assert form.hecke[6] == pytest.approx(-0.125)


@pytest.mark.parametrize(
    "body, line",
    [
        ("2 0.5\n2 0.5\n", 5),
        ("3 0.5\n2 0.5\n", 5),
        ("2 0.5\n4 0.1\n", 5),
        ("2 0.5\n3\n", 5),
        ("2 0.5\n3 abc\n", 5),
        ("2 0.5\n3 nan\n", 5),
        ("x 0.5\n", 4),
    ],
)
def test_malformed_prime_lines_report_line_numbers(body, line):
    with pytest.raises(CoefficientParseError) as excinfo:
        parse_form(HEADER + body)
    assert excinfo.value.line == line
    assert f"line {line}" in str(excinfo.value)


def test_gap_in_primes_is_rejected():
    with pytest.raises(CoefficientParseError) as excinfo:
        parse_form(HEADER + "2 0.5\n5 0.1\n")
    assert "3" in str(excinfo.value)


def test_truncated_header():
    with pytest.raises(CoefficientParseError) as excinfo:
        parse_form("t 13.78\nparity even\n")
    assert excinfo.value.line == 3
    with pytest.raises(CoefficientParseError):
        parse_form("tau 13.78\nparity even\nrho1 1\n")


def test_odd_parity_and_non_positive_header_values():
    with pytest.raises(OddFormError):
        parse_form("t 13.78\nparity odd\nrho1 1\n")
    with pytest.raises(InvariantViolationError):
        parse_form("t -1\nparity even\nrho1 1\n")
    with pytest.raises(InvariantViolationError):
        parse_form("t 13.78\nparity even\nrho1 0\n")


def test_soft_bound_violations_load_with_warning(tmp_path, caplog):
    form = MaassForm(t=13.78, hecke=hecke_extend({2: 5.0, 3: 0.1}, 4), rho_one=1.0)
    path = tmp_path / "loud.txt"
    store_form(form, path)
    loaded = ingest_form(path)
    assert loaded.hecke.bound_violations == (2, 4)
    assert "soft bound" in caplog.text


def test_rho_outside_expected_window_is_logged(tmp_path, caplog):
    path = tmp_path / "rho.txt"
    path.write_text("t 100\nparity even\nrho1 50\n2 0.5\n", encoding="utf-8")
    ingest_form(path)
    assert "outside [t^-1/2, t^1/2]" in caplog.text


def test_atomic_write_into_missing_directory_fails_cleanly(tmp_path):
    target = tmp_path / "missing" / "out.json"
    with pytest.raises(OSError):
        write_atomic(target, "{}\n")
    assert not target.exists()


def test_atomic_write_replaces_existing_file(tmp_path):
    target = tmp_path / "out.json"
    target.write_text("old", encoding="utf-8")
    write_atomic(target, "new\n")
    assert target.read_text(encoding="utf-8") == "new\n"
    assert [p.name for p in tmp_path.iterdir()] == ["out.json"]


@pytest.mark.parametrize("umask, mode", [(0o022, 0o644), (0o027, 0o640)])
def test_atomic_write_honours_the_umask(tmp_path, umask, mode):
    previous = os.umask(umask)
    try:
        write_atomic(tmp_path / "out.json", "{}\n")
    finally:
        os.umask(previous)
    assert stat.S_IMODE((tmp_path / "out.json").stat().st_mode) == mode
