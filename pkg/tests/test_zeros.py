"""Zero-table tests: bundled-file counts, validation gates, and the
file-format rules (ascending, 9+ decimal digits, comments allowed)."""

import pytest

from oscillax.zeros import ZeroSet, ZeroTableError, builtin_zeros_path, load_zeros


def test_builtin_counts(zeros5200):
    assert len(zeros5200) == 5000
    assert zeros5200.count_upto(3000.0) == 2469
    assert zeros5200.count_upto(5200.0) == 4734
    assert abs(zeros5200.gamma(1) - 14.134725141734693) < 1e-12
    assert abs(zeros5200.gamma(2) - 21.022039638771555) < 1e-12


def test_gamma_indexing_is_one_based(zeros5200):
    with pytest.raises(IndexError):
        zeros5200.gamma(0)
    with pytest.raises(IndexError):
        zeros5200.gamma(5001)
    hi, lo = zeros5200.gamma_dd(1)
    assert hi == zeros5200.gamma(1)
    assert abs(lo) < 1e-15  # low word refines below float64


def test_validate_builtin(zeros5200):
    worst = zeros5200.validate(indices=[1, 2, 3, 2469, 5000])
    assert worst < 1e-8


def test_validate_catches_non_zero(zeros5200):
    fake = ZeroSet(
        gammas=zeros5200.gammas[:3] + 0.001,
        gammas_lo=zeros5200.gammas_lo[:3],
        stated_precision=zeros5200.stated_precision,
        source="perturbed",
    )
    with pytest.raises(ZeroTableError, match="not a zero"):
        fake.validate(indices=[1])


def test_truncate(zeros5200):
    zs = zeros5200.truncate(100.0)
    assert len(zs) == 29
    assert zs.gamma(29) <= 100.0 < zeros5200.gamma(30)


def test_load_parses_comments_and_blanks(tmp_path):
    path = tmp_path / "zeros.txt"
    path.write_text(
        "# first three ordinates\n"
        "14.134725142\n"
        "\n"
        "21.022039639\n"
        "25.010857580\n"
    )
    zs = load_zeros(path)
    assert len(zs) == 3
    assert zs.stated_precision >= 9
    assert zs.source == str(path)


def test_load_rejects_low_precision(tmp_path):
    path = tmp_path / "zeros.txt"
    path.write_text("14.1347251\n21.0220396\n25.01085\n")
    with pytest.raises(ZeroTableError, match="decimal"):
        load_zeros(path)


def test_load_rejects_non_ascending(tmp_path):
    path = tmp_path / "zeros.txt"
    path.write_text("21.022039639\n14.134725142\n")
    with pytest.raises(ZeroTableError, match="ascending"):
        load_zeros(path)


def test_load_rejects_garbage(tmp_path):
    path = tmp_path / "zeros.txt"
    path.write_text("14.134725142\nnot-a-number\n")
    with pytest.raises(ZeroTableError):
        load_zeros(path)


def test_builtin_path_exists():
    assert builtin_zeros_path().endswith(".txt")
