import pytest

from blrc.analysis import build_report
from blrc.code import validate
from blrc.codefile import (
    CodeFileError,
    code_digest,
    read_code_text,
    render_report,
    write_code_text,
)
from blrc.gf import FieldSpec
from blrc.presets import blrc_15_10_w3


def test_round_trip_is_byte_stable(code_15_10):
    text = write_code_text(code_15_10, meta={"name": "x"})
    code, meta = read_code_text(text)
    again = write_code_text(code, meta={k: v for k, v in meta.items() if k != "seed"})
    assert again == text
    assert code.P == code_15_10.P
    assert code.spec == code_15_10.spec


def test_seed_travels_in_meta(code_15_10):
    text = write_code_text(code_15_10)
    code, meta = read_code_text(text)
    assert meta["seed"] == str(code_15_10.seed)
    assert code.seed == code_15_10.seed


def test_wide_field_uses_four_hex_digits():
    from blrc.code import CodeSpec, assign_coefficients
    from blrc.search import random_support

    field = FieldSpec(12, 0x1053)
    spec = CodeSpec(8, 5, 2, field)
    support = random_support(spec, seed=1)
    code = assign_coefficients(support, spec, seed=1)
    text = write_code_text(code)
    row = text.splitlines()[6]
    assert all(len(tok) == 4 for tok in row.split())
    back, _ = read_code_text(text)
    assert back.P == code.P


def test_parse_errors():
    with pytest.raises(CodeFileError):
        read_code_text("not a code file\n")
    good = write_code_text(blrc_15_10_w3())
    with pytest.raises(CodeFileError):
        read_code_text(good.replace("field m 8 poly 0x11d", "field broken"))
    with pytest.raises(CodeFileError):
        read_code_text(good.replace("n 15", "n nope"))
    # drop a parity row
    lines = good.splitlines()
    del lines[8]
    with pytest.raises(CodeFileError):
        read_code_text("\n".join(lines) + "\n")
    with pytest.raises(CodeFileError):
        read_code_text(good.replace("\nP\n", "\n"))


def test_corrupted_coefficient_fails_validation(code_15_10):
    text = write_code_text(code_15_10)
    lines = text.splitlines()
    first_row = lines[6].split()
    j = next(i for i, tok in enumerate(first_row) if tok != "00")
    first_row[j] = "00"
    lines[6] = " ".join(first_row)
    code, _ = read_code_text("\n".join(lines) + "\n")
    report = validate(code.P, code.spec)
    assert not report.passed
    assert any(
        c.name == "row_weights" and "1" in c.detail for c in report.failures()
    )


def test_digest_changes_with_content(code_15_10):
    a = write_code_text(code_15_10)
    b = a.replace("seed 123", "seed 124")
    assert code_digest(a) != code_digest(b)
    assert len(code_digest(a)) == 64


def test_render_report_has_units(code_15_10):
    report = build_report(code_15_10)
    text = render_report(report, 15, 10, 2.5e21, 3.3e14, "decimal")
    lines = text.splitlines()
    assert lines[0] == "blrc-report v1"
    for line in lines[1:]:
        assert len(line.split()) == 3
    assert "avg_repair_single 6 blocks" in text
    assert "mttdl_system 3.3e+14 days" in text
    assert "units decimal convention" in text
