"""Reader for the line-based algebra definition format.

::

    # comments run to the end of the line
    field Q                      # or: field Fp 7
    univariate x : x^3 - 1/2 x

    field Q
    structure
    basis 1 e
    mul e e = e

    tensor dual.alg sqrt2.alg    # paths relative to this file

Coefficients are integers or fractions ``p/q``. Products not listed in a
``structure`` block are zero, products with the unit ``1`` are implied, and a
listed product also fixes its transpose.
"""
from __future__ import annotations

import re
from fractions import Fraction
from pathlib import Path

from .algebra import Algebra, make_algebra, tensor_algebras, univariate_quotient
from .errors import AlgebraFileError, FrobkitError
from .linalg import Field

_TERM = re.compile(
    r"\s*(?P<sign>[+-])?\s*(?P<coeff>\d+(?:/\d+)?)?\s*(?P<star>\*)?\s*"
    r"(?P<label>[A-Za-z_][A-Za-z0-9_']*)?\s*(?:\^\s*(?P<exp>\d+))?\s*"
)


def parse_terms(text: str, line: int | None = None, path=None) -> list[tuple[Fraction, str | None, int]]:
    """``[(coefficient, label or None, exponent)]`` for a signed sum of terms."""
    if "." in text:
        raise AlgebraFileError(f"decimal literal in {text.strip()!r}; write rationals as p/q", line, path)
    out = []
    pos = 0
    text = text.rstrip()
    if not text.strip():
        raise AlgebraFileError("empty expression", line, path)
    while pos < len(text):
        m = _TERM.match(text, pos)
        g = m.groupdict()
        if m.end() == pos or (g["coeff"] is None and g["label"] is None):
            raise AlgebraFileError(f"cannot read term at {text[pos:].strip()!r}", line, path)
        if out and g["sign"] is None:
            raise AlgebraFileError(f"missing + or - before {text[pos:].strip()!r}", line, path)
        if g["star"] and not (g["coeff"] and g["label"]):
            raise AlgebraFileError(f"dangling '*' in {text.strip()!r}", line, path)
        if g["exp"] is not None and g["label"] is None:
            raise AlgebraFileError(f"exponent without a variable in {text.strip()!r}", line, path)
        c = Fraction(g["coeff"]) if g["coeff"] else Fraction(1)
        if g["sign"] == "-":
            c = -c
        out.append((c, g["label"], int(g["exp"]) if g["exp"] is not None else 1))
        pos = m.end()
    return out


def _parse_field(words, line, path) -> Field:
    if words == ["Q"]:
        return Field.rationals()
    if len(words) == 2 and words[0] == "Fp" and words[1].isdigit():
        try:
            return Field.prime(int(words[1]))
        except ValueError as e:
            raise AlgebraFileError(str(e), line, path) from None
    raise AlgebraFileError("expected 'field Q' or 'field Fp <prime>'", line, path)


def _univariate(field: Field, body: str, line, path, name) -> Algebra:
    var, sep, poly = body.partition(":")
    var = var.strip()
    if not sep or not re.fullmatch(r"[A-Za-z_][A-Za-z0-9_]*", var):
        raise AlgebraFileError("expected 'univariate <label> : <polynomial>'", line, path)
    coeffs: dict[int, Fraction] = {}
    for c, label, exp in parse_terms(poly, line, path):
        if label is None:
            exp = 0
        elif label != var:
            raise AlgebraFileError(f"unknown variable {label!r} (expected {var!r})", line, path)
        coeffs[exp] = coeffs.get(exp, 0) + c
    deg = max(coeffs)
    low_to_high = [field(str(coeffs.get(i, 0))) for i in range(deg + 1)]
    try:
        return univariate_quotient(field, low_to_high, var, name)
    except FrobkitError as e:
        raise AlgebraFileError(str(e), line, path) from None


def _structure(field: Field, basis, muls, line, path, name) -> Algebra:
    if not basis:
        raise AlgebraFileError("structure block needs a 'basis' line", line, path)
    labels, basis_line = basis
    if "1" not in labels:
        raise AlgebraFileError("the unit basis element must be named '1'", basis_line, path)
    if len(set(labels)) != len(labels):
        raise AlgebraFileError("repeated basis label", basis_line, path)
    n = len(labels)
    index = {lab: i for i, lab in enumerate(labels)}
    u = index["1"]
    table = [[None] * n for _ in range(n)]
    for i in range(n):
        table[u][i] = table[i][u] = {i: Fraction(1)}
    explicit = set()
    for (a, b, rhs), ln in muls:
        for lab in (a, b):
            if lab not in index:
                raise AlgebraFileError(f"unknown basis label {lab!r}", ln, path)
        vec: dict[int, Fraction] = {}
        if rhs.strip() != "0":
            for c, lab, exp in parse_terms(rhs, ln, path):
                lab = "1" if lab is None else lab
                if lab not in index or exp != 1:
                    raise AlgebraFileError(f"{lab!r} is not a basis label", ln, path)
                vec[index[lab]] = vec.get(index[lab], 0) + c
        i, j = index[a], index[b]
        table[i][j] = vec
        explicit.add((i, j))
        if (j, i) not in explicit:
            table[j][i] = vec
    structure = [[[field(str((table[i][j] or {}).get(k, 0))) for k in range(n)] for j in range(n)] for i in range(n)]
    unit = [field.one if k == u else field.zero for k in range(n)]
    try:
        return make_algebra(field, labels, structure, unit, name)
    except FrobkitError as e:
        raise AlgebraFileError(f"{type(e).__name__}: {e}", line, path) from None


def parse_algebra(text: str, path: str | Path | None = None, _seen=()) -> Algebra:
    """Build the algebra described by ``text``; ``path`` anchors ``tensor`` lines."""
    base = Path(path).parent if path is not None else Path(".")
    name = Path(path).stem if path is not None else ""
    field = None
    result = None
    basis = None
    muls = []
    in_structure = None
    for ln, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        head, _, rest = line.partition(" ")
        rest = rest.strip()
        if head == "field":
            if field is not None:
                raise AlgebraFileError("duplicate 'field' line", ln, path)
            field = _parse_field(rest.split(), ln, path)
            continue
        if in_structure is not None and head in ("basis", "mul"):
            if head == "basis":
                if basis is not None:
                    raise AlgebraFileError("duplicate 'basis' line", ln, path)
                basis = (rest.split(), ln)
            else:
                lhs, eq, rhs = rest.partition("=")
                factors = lhs.split()
                if not eq or len(factors) != 2:
                    raise AlgebraFileError("expected 'mul <a> <b> = <combination>'", ln, path)
                muls.append(((factors[0], factors[1], rhs), ln))
            continue
        if result is not None or in_structure is not None:
            raise AlgebraFileError(f"unexpected {head!r}: an algebra is already defined", ln, path)
        if head == "univariate":
            result = _univariate(_need_field(field, ln, path), rest, ln, path, name)
        elif head == "structure" and not rest:
            in_structure = ln
            _need_field(field, ln, path)
        elif head == "tensor":
            parts = rest.split()
            if len(parts) != 2:
                raise AlgebraFileError("expected 'tensor <fileA> <fileB>'", ln, path)
            algs = [_load(base / p, ln, path, _seen) for p in parts]
            if field is not None and any(a.field != field for a in algs):
                raise AlgebraFileError("tensor factors are not over the declared field", ln, path)
            try:
                result, _, _ = tensor_algebras(*algs)
            except FrobkitError as e:
                raise AlgebraFileError(str(e), ln, path) from None
        else:
            raise AlgebraFileError(f"unknown directive {head!r}", ln, path)
    if in_structure is not None:
        result = _structure(field, basis, muls, in_structure, path, name)
    if result is None:
        raise AlgebraFileError("no algebra defined (need univariate, structure or tensor)", None, path)
    return result


def _need_field(field, ln, path) -> Field:
    if field is None:
        raise AlgebraFileError("'field' must come first", ln, path)
    return field


def _load(p: Path, ln, path, seen) -> Algebra:
    p = p.resolve()
    if p in seen:
        raise AlgebraFileError(f"cyclic tensor reference to {p}", ln, path)
    try:
        text = p.read_text()
    except OSError as e:
        raise AlgebraFileError(f"cannot read {p}: {e.strerror}", ln, path) from None
    return parse_algebra(text, p, seen + (p,))


def load_algebra(path: str | Path) -> Algebra:
    p = Path(path)
    return _load(p, None, None, ())
