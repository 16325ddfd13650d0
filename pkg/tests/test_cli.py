"""Command line behavior: output shape, determinism, exit codes."""

import json
import re

import pytest

import heatgen as hg
from heatgen.cli import main

RATIONAL = re.compile(r"^-?[0-9]+(/[0-9]+)?$")


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


# ---------------------------------------------------------------------------
# catalog / validate
# ---------------------------------------------------------------------------


def test_catalog_lists_builtins(capsys):
    code, out, _ = run(capsys, "catalog")
    assert code == 0
    for name in ("S2", "S6", "S2xS2", "S2xS3", "flat(n)"):
        assert name in out


def test_validate_sphere_passes(capsys):
    code, out, _ = run(capsys, "validate", "S3")
    assert code == 0
    for check in (
        "generator_connection_identity",
        "curvature_integrability",
        "structure_jacobi",
        "riemann_symmetries",
    ):
        assert f"[PASS] {check}" in out
    assert "R = 6, R_H = 3/2, R_G = 6" in out


def test_validate_json_schema(capsys):
    code, out, _ = run(capsys, "validate", "S2", "--json")
    assert code == 0
    doc = json.loads(out)
    assert doc["space"] == "S2"
    assert doc["order"] is None
    assert doc["a"] == []
    assert doc["timing_ms"] is None
    assert len(doc["checks"]) == 4
    assert all(c["pass"] for c in doc["checks"])


def test_validate_bad_file_exits_one(capsys, tmp_path):
    base = hg.builtin("S3")
    from fractions import Fraction as F

    bad = hg.SpaceSpec(
        name="squashed",
        n=3,
        p=3,
        g=base.g,
        beta=((F(1), F(0), F(0)), (F(0), F(1), F(0)), (F(0), F(0), F(2))),
        E=base.E,
    )
    path = tmp_path / "squashed.json"
    hg.save(bad, path)
    code, out, _ = run(capsys, "validate", str(path))
    assert code == 1
    assert "[FAIL] generator_connection_identity" in out


# ---------------------------------------------------------------------------
# coeffs
# ---------------------------------------------------------------------------


def test_coeffs_json_document(capsys):
    code, out, _ = run(capsys, "coeffs", "S2", "--order", "2", "--json")
    assert code == 0
    doc = json.loads(out)
    assert set(doc) == {"space", "order", "a", "checks", "timing_ms"}
    assert doc["space"] == "S2"
    assert doc["order"] == 2
    assert doc["a"] == ["1", "1/3", "1/15"]
    assert doc["timing_ms"] is None
    assert all(c["pass"] for c in doc["checks"])
    assert all(RATIONAL.match(s) for s in doc["a"])


def test_coeffs_text_output(capsys):
    code, out, _ = run(capsys, "coeffs", "flat3", "--order", "5")
    assert code == 0
    assert "a_0 = 1" in out
    assert "a_5 = 0" in out
    assert "." not in out.split("a_0")[1].splitlines()[0]


def test_coeffs_rationals_never_floats(capsys):
    code, out, _ = run(capsys, "coeffs", "S4", "--order", "3", "--json")
    assert code == 0
    doc = json.loads(out)
    assert doc["a"] == ["1", "2", "29/15", "74/63"]


def test_coeffs_is_byte_deterministic(capsys):
    _, first, _ = run(capsys, "coeffs", "S3", "--order", "3", "--json")
    _, second, _ = run(capsys, "coeffs", "S3", "--order", "3", "--json")
    assert first == second


def test_coeffs_timing_flag(capsys):
    code, out, _ = run(
        capsys, "coeffs", "S2", "--order", "1", "--json", "--timing"
    )
    assert code == 0
    doc = json.loads(out)
    assert isinstance(doc["timing_ms"], float) and doc["timing_ms"] > 0


def test_coeffs_budget_exhaustion_exits_one(capsys):
    code, _, err = run(
        capsys, "coeffs", "S4", "--order", "4", "--budget", "100"
    )
    assert code == 1
    assert "budget" in err


def test_coeffs_negative_order_exits_two(capsys):
    code, _, err = run(capsys, "coeffs", "S2", "--order", "-1")
    assert code == 2
    assert "error:" in err


def test_coeffs_from_saved_file(capsys, tmp_path):
    path = tmp_path / "two_sphere.json"
    hg.save(hg.builtin("S2"), path)
    code, out, _ = run(capsys, "coeffs", str(path), "--order", "2", "--json")
    assert code == 0
    assert json.loads(out)["a"] == ["1", "1/3", "1/15"]


def test_unknown_space_exits_two(capsys):
    code, _, err = run(capsys, "coeffs", "S99")
    assert code == 2
    assert "error:" in err


def test_unparseable_file_exits_one(capsys, tmp_path):
    path = tmp_path / "broken.json"
    path.write_text("{not json")
    code, _, err = run(capsys, "coeffs", str(path))
    assert code == 1
    assert "error:" in err


# ---------------------------------------------------------------------------
# eval
# ---------------------------------------------------------------------------


def test_eval_series_json(capsys):
    code, out, _ = run(
        capsys, "eval", "S2", "--t", "0.05", "--order", "4", "--json"
    )
    assert code == 0
    doc = json.loads(out)
    want = hg.heat_coefficients(hg.builtin("S2"), 4).eval_float(0.05)
    assert doc["value"] == f"{want:.17g}"
    assert doc["method"] == "series"
    assert doc["std_error"] is None


def test_eval_seventeen_digit_floats(capsys):
    _, out, _ = run(capsys, "eval", "S3", "--t", "0.1", "--json")
    value = json.loads(out)["value"]
    mantissa = value.replace("-", "").replace(".", "").split("e")[0]
    assert len(mantissa) >= 15


def test_eval_nonpositive_t_exits_two(capsys):
    code, _, err = run(capsys, "eval", "S2", "--t", "0")
    assert code == 2
    assert "error:" in err


def test_eval_mc_reproducible(capsys):
    args = ("eval", "S2", "--t", "0.05", "--method", "mc", "--samples",
            "2000", "--seed", "11", "--json")
    _, first, _ = run(capsys, *args)
    _, second, _ = run(capsys, *args)
    assert first == second
    doc = json.loads(first)
    assert doc["method"] == "mc"
    assert doc["singularity_hits"] >= 0


def test_eval_quadrature_too_many_generators_exits_two(capsys):
    code, _, err = run(
        capsys, "eval", "S4", "--t", "0.05", "--method", "quadrature"
    )
    assert code == 2
    assert "p <= 3" in err


# ---------------------------------------------------------------------------
# compare
# ---------------------------------------------------------------------------


def test_compare_s2_passes(capsys):
    code, out, _ = run(
        capsys, "compare", "S2", "--order", "2", "--t", "0.05",
        "--nodes", "24", "--json"
    )
    assert code == 0
    doc = json.loads(out)
    names = [c["name"] for c in doc["checks"]]
    assert "a1_closed_form" in names
    assert "spectral_oracle@t=0.05" in names
    assert "numeric_average@t=0.05" in names
    assert all(c["pass"] for c in doc["checks"])
    assert set(doc) == {"space", "order", "a", "checks", "timing_ms"}


def test_compare_multiple_times(capsys):
    code, out, _ = run(
        capsys, "compare", "S2", "--order", "2", "--t", "0.05,0.1",
        "--nodes", "20", "--json"
    )
    assert code == 0
    names = [c["name"] for c in json.loads(out)["checks"]]
    assert "numeric_average@t=0.05" in names
    assert "numeric_average@t=0.1" in names


def test_compare_bad_grid_exits_two(capsys):
    code, _, err = run(capsys, "compare", "S2", "--t", "abc")
    assert code == 2
    assert "error:" in err


def test_compare_negative_time_exits_two(capsys):
    code, _, err = run(capsys, "compare", "S2", "--t", "0.05,-0.1")
    assert code == 2
    assert "error:" in err
