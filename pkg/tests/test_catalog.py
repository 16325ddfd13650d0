"""Builtin catalog and the space file format."""

import json
from fractions import Fraction as F

import pytest

import heatgen as hg
from heatgen import catalog


def test_catalog_names_cover_builtins():
    names = catalog.catalog_names()
    for name in ("S2", "S6", "S2xS2", "S2xS3", "flat(n)"):
        assert name in names


@pytest.mark.parametrize("n", range(2, 7))
def test_sphere_dimensions(n):
    spec = hg.builtin(f"S{n}")
    assert spec.n == n
    assert spec.p == n * (n - 1) // 2


def test_flat_accepts_both_spellings():
    a = hg.builtin("flat3")
    b = hg.builtin("flat(3)")
    assert a == b
    assert a.n == 3 and a.p == 0


def test_flat_zero_dimension_rejected():
    with pytest.raises(hg.UnknownSpace):
        hg.builtin("flat0")


def test_unknown_name():
    with pytest.raises(hg.UnknownSpace, match="S2xS3"):
        hg.builtin("S7")


def test_product_is_block_sum():
    prod = hg.builtin("S2xS3")
    s2, s3 = hg.builtin("S2"), hg.builtin("S3")
    assert prod.n == 5 and prod.p == 4
    # tangent blocks
    for a in range(2):
        for b in range(2):
            assert prod.g[a][b] == s2.g[a][b]
            assert prod.g[2 + a][b] == 0
    # first factor's generator lives in the first block only
    assert prod.E[0][0][1] == s2.E[0][0][1]
    assert all(prod.E[0][2 + i][2 + j] == 0 for i in range(3) for j in range(3))
    # second factor's generators live in the second block only
    assert prod.E[1][2][3] == s3.E[0][0][1]
    assert all(prod.E[1][i][j] == 0 for i in range(2) for j in range(2))


def test_sphere_dimension_helper():
    assert catalog.sphere_dimension("S4") == 4
    assert catalog.sphere_dimension("S2xS2") is None
    assert catalog.sphere_dimension("flat(2)") is None


def test_roundtrip_is_exact(tmp_path):
    for name in ("S3", "S2xS2", "flat2"):
        spec = hg.builtin(name)
        path = tmp_path / f"{name}.json"
        hg.save(spec, path)
        loaded = hg.load(path)
        assert loaded == spec


def test_roundtrip_preserves_non_integer_rationals(tmp_path):
    s2 = hg.builtin("S2")
    spec = hg.SpaceSpec(
        "S2-third",
        2,
        1,
        s2.g,
        ((F(1, 3),),),
        s2.E,
    )
    path = tmp_path / "third.json"
    hg.save(spec, path)
    assert hg.load(path) == spec
    assert '"1/3"' in path.read_text()


def test_load_rejects_bad_json_with_location(tmp_path):
    path = tmp_path / "broken.json"
    path.write_text('{\n  "schema_version": 1,\n  "name": }\n')
    with pytest.raises(hg.ParseError, match="line 3"):
        hg.load(path)


def test_load_rejects_unknown_field(tmp_path):
    spec = hg.builtin("S2")
    path = tmp_path / "extra.json"
    hg.save(spec, path)
    doc = json.loads(path.read_text())
    doc["comment"] = "hello"
    path.write_text(json.dumps(doc))
    with pytest.raises(hg.ParseError, match="unknown fields"):
        hg.load(path)


def test_load_rejects_wrong_schema_version(tmp_path):
    spec = hg.builtin("S2")
    path = tmp_path / "v9.json"
    hg.save(spec, path)
    doc = json.loads(path.read_text())
    doc["schema_version"] = 9
    path.write_text(json.dumps(doc))
    with pytest.raises(hg.ParseError, match="schema_version"):
        hg.load(path)


def test_load_rejects_float_contamination(tmp_path):
    spec = hg.builtin("S2")
    path = tmp_path / "float.json"
    hg.save(spec, path)
    doc = json.loads(path.read_text())
    doc["g"][0][0] = "1.5"
    path.write_text(json.dumps(doc))
    with pytest.raises(hg.ParseError, match=r"g\[0\]\[0\]"):
        hg.load(path)


def test_load_rejects_zero_denominator(tmp_path):
    spec = hg.builtin("S2")
    path = tmp_path / "zden.json"
    hg.save(spec, path)
    doc = json.loads(path.read_text())
    doc["beta"][0][0] = "3/0"
    path.write_text(json.dumps(doc))
    with pytest.raises(hg.ParseError, match="denominator"):
        hg.load(path)


def test_load_names_non_antisymmetric_generator(tmp_path):
    spec = hg.builtin("S3")
    path = tmp_path / "asym.json"
    hg.save(spec, path)
    doc = json.loads(path.read_text())
    doc["E"][1][0][2] = "5"  # breaks antisymmetry of generator 1
    path.write_text(json.dumps(doc))
    with pytest.raises(hg.ParseError, match="generator 1"):
        hg.load(path)


def test_load_missing_field(tmp_path):
    path = tmp_path / "missing.json"
    path.write_text('{"schema_version": 1, "name": "x"}')
    with pytest.raises(hg.ParseError, match="missing fields"):
        hg.load(path)


def test_load_validates_by_default(tmp_path):
    # An anisotropically squashed S3 parses fine but is not symmetric.
    s3 = hg.builtin("S3")
    squashed = hg.SpaceSpec(
        "squashed",
        3,
        3,
        s3.g,
        ((F(1), F(0), F(0)), (F(0), F(1), F(0)), (F(0), F(0), F(2))),
        s3.E,
    )
    path = tmp_path / "squashed.json"
    hg.save(squashed, path)
    with pytest.raises(hg.ValidationError) as err:
        hg.load(path)
    assert "generator_connection_identity" in str(err.value)
    # ... unless validation is explicitly waived.
    loaded = hg.load(path, validate=False)
    assert loaded == squashed


def test_uniformly_rescaled_sphere_file_loads(tmp_path):
    # A uniform beta rescale is a radius change and must stay loadable.
    s3 = hg.builtin("S3")
    rescaled = hg.SpaceSpec(
        "S3-rescaled",
        3,
        3,
        s3.g,
        tuple(tuple(2 * x for x in row) for row in s3.beta),
        s3.E,
    )
    path = tmp_path / "rescaled.json"
    hg.save(rescaled, path)
    assert hg.load(path) == rescaled
