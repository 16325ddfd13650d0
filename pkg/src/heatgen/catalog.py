"""Builtin curvature data and a JSON interchange format for space files.

Builtins cover the unit spheres S2 through S6, the products S2xS2 and
S2xS3, and flat(n) for any n.  For a unit n-sphere the generators are
indexed by coordinate pairs c < d with (E^(cd))_ab = delta_ca delta_db -
delta_da delta_cb, the metric is the identity, and beta is the identity,
which reconstructs R_abcd = g_ac g_bd - g_ad g_bc exactly.  Products are
block direct sums of their factors.

Files are JSON with every rational written as a string such as "3" or
"-7/2"; floats never appear.  Loading validates the structural identities
by default.
"""

from __future__ import annotations

import json
import re
from fractions import Fraction
from pathlib import Path

from .curvature import SpaceSpec, derive_holonomy, validate_symmetric_space
from .errors import InvalidSpaceSpec, ParseError, UnknownSpace, ValidationError

SCHEMA_VERSION = 1

_SPHERES = ("S2", "S3", "S4", "S5", "S6")
PRODUCT_FACTORS: dict[str, tuple[str, str]] = {
    "S2xS2": ("S2", "S2"),
    "S2xS3": ("S2", "S3"),
}
_FLAT_RE = re.compile(r"^flat\(?([0-9]+)\)?$")
_RATIONAL_RE = re.compile(r"^-?[0-9]+(/[0-9]+)?$")


def sphere_dimension(name: str) -> int | None:
    """Tangent dimension when the name is a builtin unit sphere, else None."""
    return int(name[1:]) if name in _SPHERES else None


def catalog_names() -> tuple[str, ...]:
    """All builtin names, with flat(n) shown generically."""
    return _SPHERES + tuple(PRODUCT_FACTORS) + ("flat(n)",)


def _sphere_spec(n: int, name: str) -> SpaceSpec:
    pairs = [(c, d) for c in range(n) for d in range(c + 1, n)]
    p = len(pairs)
    one, zero = Fraction(1), Fraction(0)
    E = []
    for c, d in pairs:
        mat = [[zero] * n for _ in range(n)]
        mat[c][d] = one
        mat[d][c] = -one
        E.append(tuple(tuple(row) for row in mat))
    ident = tuple(
        tuple(one if i == j else zero for j in range(n)) for i in range(n)
    )
    identp = tuple(
        tuple(one if i == j else zero for j in range(p)) for i in range(p)
    )
    return SpaceSpec(name=name, n=n, p=p, g=ident, beta=identp, E=tuple(E))


def _flat_spec(n: int, name: str) -> SpaceSpec:
    one, zero = Fraction(1), Fraction(0)
    ident = tuple(
        tuple(one if i == j else zero for j in range(n)) for i in range(n)
    )
    return SpaceSpec(name=name, n=n, p=0, g=ident, beta=(), E=())


def product_spec(name: str, left: SpaceSpec, right: SpaceSpec) -> SpaceSpec:
    """Block direct sum of two curvature data."""
    n = left.n + right.n
    p = left.p + right.p
    zero = Fraction(0)

    def embed(mat, size, offset):
        out = [[zero] * n for _ in range(n)]
        for i in range(size):
            for j in range(size):
                out[offset + i][offset + j] = mat[i][j]
        return tuple(tuple(row) for row in out)

    g = [[zero] * n for _ in range(n)]
    for i in range(left.n):
        for j in range(left.n):
            g[i][j] = left.g[i][j]
    for i in range(right.n):
        for j in range(right.n):
            g[left.n + i][left.n + j] = right.g[i][j]
    beta = [[zero] * p for _ in range(p)]
    for i in range(left.p):
        for j in range(left.p):
            beta[i][j] = left.beta[i][j]
    for i in range(right.p):
        for j in range(right.p):
            beta[left.p + i][left.p + j] = right.beta[i][j]
    E = tuple(embed(m, left.n, 0) for m in left.E) + tuple(
        embed(m, right.n, left.n) for m in right.E
    )
    return SpaceSpec(
        name=name,
        n=n,
        p=p,
        g=tuple(tuple(row) for row in g),
        beta=tuple(tuple(row) for row in beta),
        E=E,
    )


def builtin(name: str) -> SpaceSpec:
    """Return the builtin curvature datum with the given name.

    Sphere names are S2..S6, products S2xS2 and S2xS3, and flat spaces may
    be written flat(3) or flat3.
    """
    if name in _SPHERES:
        return _sphere_spec(int(name[1:]), name)
    if name in PRODUCT_FACTORS:
        a, b = PRODUCT_FACTORS[name]
        return product_spec(name, builtin(a), builtin(b))
    m = _FLAT_RE.match(name)
    if m:
        n = int(m.group(1))
        if n == 0:
            raise UnknownSpace("flat dimension must be at least 1")
        return _flat_spec(n, f"flat({n})")
    raise UnknownSpace(
        f"no builtin space named {name!r}; known: {', '.join(catalog_names())}"
    )


# ---------------------------------------------------------------------------
# File format
# ---------------------------------------------------------------------------

_REQUIRED_FIELDS = ("schema_version", "name", "n", "p", "g", "beta", "E")


def _parse_rational(text, where: str) -> Fraction:
    if not isinstance(text, str) or not _RATIONAL_RE.match(text):
        raise ParseError(
            f"{where}: expected a rational string like '3' or '-7/2', "
            f"got {text!r}"
        )
    try:
        return Fraction(text)
    except ZeroDivisionError as exc:
        raise ParseError(f"{where}: zero denominator in {text!r}") from exc


def _parse_matrix(data, rows: int, cols: int, where: str):
    if not isinstance(data, list) or len(data) != rows:
        raise ParseError(f"{where}: expected {rows} rows")
    out = []
    for i, row in enumerate(data):
        if not isinstance(row, list) or len(row) != cols:
            raise ParseError(f"{where}[{i}]: expected {cols} entries")
        out.append(
            tuple(
                _parse_rational(x, f"{where}[{i}][{j}]")
                for j, x in enumerate(row)
            )
        )
    return tuple(out)


def load(path, validate: bool = True) -> SpaceSpec:
    """Read a space file, optionally running the structural validator.

    Syntax errors, wrong schema versions, unknown fields, malformed
    rationals, and generator-level defects raise ParseError with the
    offending location; identity-check failures raise ValidationError.
    """
    text = Path(path).read_text()
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(
            f"{path}: invalid JSON at line {exc.lineno}, column {exc.colno}: "
            f"{exc.msg}"
        ) from exc
    if not isinstance(doc, dict):
        raise ParseError(f"{path}: top level must be an object")
    unknown = sorted(set(doc) - set(_REQUIRED_FIELDS))
    if unknown:
        raise ParseError(f"{path}: unknown fields {unknown}")
    missing = [f for f in _REQUIRED_FIELDS if f not in doc]
    if missing:
        raise ParseError(f"{path}: missing fields {missing}")
    if doc["schema_version"] != SCHEMA_VERSION:
        raise ParseError(
            f"{path}: unsupported schema_version {doc['schema_version']!r}"
        )
    name = doc["name"]
    if not isinstance(name, str) or not name:
        raise ParseError(f"{path}: name must be a nonempty string")
    n, p = doc["n"], doc["p"]
    if not isinstance(n, int) or isinstance(n, bool) or n < 0:
        raise ParseError(f"{path}: n must be a nonnegative integer")
    if not isinstance(p, int) or isinstance(p, bool) or p < 0:
        raise ParseError(f"{path}: p must be a nonnegative integer")
    g = _parse_matrix(doc["g"], n, n, "g")
    beta = _parse_matrix(doc["beta"], p, p, "beta")
    if not isinstance(doc["E"], list) or len(doc["E"]) != p:
        raise ParseError(f"E: expected {p} generator matrices")
    E = tuple(
        _parse_matrix(mat, n, n, f"E[{i}]") for i, mat in enumerate(doc["E"])
    )
    try:
        spec = SpaceSpec(name=name, n=n, p=p, g=g, beta=beta, E=E)
    except InvalidSpaceSpec as exc:
        raise ParseError(f"{path}: {exc}") from exc
    if validate:
        report = validate_symmetric_space(spec, derive_holonomy(spec))
        if not report.all_passed:
            raise ValidationError(
                f"{path}: structural checks failed: "
                + ", ".join(report.failed_names()),
                report=report,
            )
    return spec


def _format_rational(x: Fraction) -> str:
    return str(x)


def save(spec: SpaceSpec, path) -> None:
    """Write a space file that load() reproduces exactly."""
    doc = {
        "schema_version": SCHEMA_VERSION,
        "name": spec.name,
        "n": spec.n,
        "p": spec.p,
        "g": [[_format_rational(x) for x in row] for row in spec.g],
        "beta": [[_format_rational(x) for x in row] for row in spec.beta],
        "E": [
            [[_format_rational(x) for x in row] for row in mat]
            for mat in spec.E
        ],
    }
    Path(path).write_text(json.dumps(doc, indent=2) + "\n")
