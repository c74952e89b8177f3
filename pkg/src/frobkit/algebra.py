"""Finite-dimensional commutative unital algebras given by structure constants.

Two concrete kinds share one interface:

* ``SimpleAlgebra`` -- an algebra entered by its multiplication table.
* ``TensorAlgebra`` -- a flat tensor product of simple factors.

Tensor products are normalised strictly: nested products are flattened and
1-dimensional factors (copies of the ground field) are dropped, so
``k (x) A`` *is* ``A`` and ``(A (x) B) (x) C`` *is* ``A (x) (B (x) C)``.
Every algebra therefore exposes ``factors``: a tuple of simple algebras of
dimension >= 2, with basis index equal to the lexicographic multi-index
over the factors (first factor most significant).
"""
from __future__ import annotations

import functools
import itertools
import math
import random
from dataclasses import dataclass, field as dc_field
from enum import Enum
from typing import Sequence

from .errors import (
    AlgebraMismatch,
    BadUnit,
    DimensionMismatch,
    FieldMismatch,
    NonMonic,
    NotAnAlgebraMap,
    NotAssociative,
    NotCommutative,
    SmallCharacteristic,
)
from .linalg import Field, Matrix, extend_to_complement, kernel_basis, rank, solve, solve_matrix
from .poly import DEFAULT_DEGREE_BUDGET, find_factor, make_poly, poly_coeffs


class Algebra:
    """Common interface; see module docstring."""

    field: Field
    factors: tuple["SimpleAlgebra", ...]

    @property
    def dim(self) -> int:
        raise NotImplementedError

    @property
    def labels(self) -> tuple[str, ...]:
        raise NotImplementedError

    # -- multi-index bookkeeping -------------------------------------------
    @functools.cached_property
    def factor_dims(self) -> tuple[int, ...]:
        return tuple(f.dim for f in self.factors)

    @functools.cached_property
    def strides(self) -> tuple[int, ...]:
        out = []
        s = 1
        for d in reversed(self.factor_dims):
            out.append(s)
            s *= d
        return tuple(reversed(out))

    def multi(self, i: int) -> tuple[int, ...]:
        return tuple((i // s) % d for s, d in zip(self.strides, self.factor_dims))

    def index(self, mi: Sequence[int]) -> int:
        return sum(a * s for a, s in zip(mi, self.strides))

    @functools.cached_property
    def unit_sparse(self) -> dict:
        out = {(): self.field.one}
        for f in self.factors:
            terms = [(i, c) for i, c in enumerate(f.unit) if c != 0]
            out = {k + (i,): v * c for k, v in out.items() for i, c in terms}
        return out

    # -- arithmetic -----------------------------------------------------------
    def mul_multi(self, mi: tuple, mj: tuple) -> dict:
        """Product of two basis monomials as a sparse dict {multi-index: coeff}."""
        parts = [f._prod[a][b] for f, a, b in zip(self.factors, mi, mj)]
        out = {}
        for combo in itertools.product(*parts):
            c = self.field.one
            key = []
            for k, v in combo:
                key.append(k)
                c = c * v
            key = tuple(key)
            out[key] = out.get(key, self.field.zero) + c
        return {k: v for k, v in out.items() if v != 0}

    def sparse_mul(self, x: dict, y: dict) -> dict:
        out = {}
        zero = self.field.zero
        for mi, a in x.items():
            for mj, b in y.items():
                for k, c in self.mul_multi(mi, mj).items():
                    out[k] = out.get(k, zero) + a * b * c
        return {k: v for k, v in out.items() if v != 0}

    def to_sparse(self, x: Sequence) -> dict:
        return {self.multi(i): v for i, v in enumerate(x) if v != 0}

    def to_dense(self, x: dict) -> list:
        out = [self.field.zero] * self.dim
        for mi, v in x.items():
            out[self.index(mi)] += v
        return out

    def basis_product(self, i: int, j: int) -> list:
        return self.to_dense(self.mul_multi(self.multi(i), self.multi(j)))

    def mul(self, x: Sequence, y: Sequence) -> list:
        return self.to_dense(self.sparse_mul(self.to_sparse(x), self.to_sparse(y)))

    def unit_vector(self) -> list:
        return self.to_dense(self.unit_sparse)

    def basis_vector(self, i: int) -> list:
        v = [self.field.zero] * self.dim
        v[i] = self.field.one
        return v

    def element(self, coords: Sequence) -> list:
        if len(coords) != self.dim:
            raise DimensionMismatch(f"expected {self.dim} coordinates, got {len(coords)}")
        return [self.field(c) for c in coords]

    def power(self, x: Sequence, n: int) -> list:
        out = self.unit_vector()
        for _ in range(n):
            out = self.mul(out, x)
        return out

    def structure_constants(self) -> list[list[list]]:
        """Dense ``c[i][j][k]`` with ``b_i b_j = sum_k c[i][j][k] b_k``."""
        n = self.dim
        return [[self.basis_product(i, j) for j in range(n)] for i in range(n)]

    def factor_regular(self, f: int, t: int) -> Matrix:
        """Left multiplication by basis element ``t`` of factor ``f`` on the whole algebra."""
        return _factor_regular(self, f, t)

    def left_matrix(self, x: Sequence) -> Matrix:
        """Matrix of ``y -> x y`` in the standard basis."""
        n = self.dim
        cols = [self.mul(x, self.basis_vector(j)) for j in range(n)]
        return Matrix.from_columns(self.field, cols, n)

    def radical_generators(self) -> list[tuple[int, list]]:
        """Ideal generators of the nilradical: ``(factor, factor-coordinates)`` pairs.

        Over a perfect field the radical of a tensor product is generated by the
        radicals of the factors.
        """
        out = []
        for fi, f in enumerate(self.factors):
            for v in nilradical(f).generators:
                out.append((fi, v))
        return out

    def semisimple_dim(self) -> int:
        """dim A/rad(A); raises SmallCharacteristic like ``nilradical``."""
        return math.prod(f.dim - len(nilradical(f).generators) for f in self.factors)


@functools.lru_cache(maxsize=4096)
def _factor_regular(alg: Algebra, f: int, t: int) -> Matrix:
    fac = alg.factors[f]
    before = math.prod(alg.factor_dims[:f])
    after = math.prod(alg.factor_dims[f + 1:])
    n = alg.dim
    entries = {}
    prod_t = fac._prod[t]
    d = fac.dim
    for b in range(before):
        for j in range(d):
            for a in range(after):
                col = (b * d + j) * after + a
                for k, c in prod_t[j]:
                    entries[((b * d + k) * after + a, col)] = c
    return Matrix.from_dict(alg.field, entries, n, n)


@dataclass(frozen=True, eq=True)
class SimpleAlgebra(Algebra):
    """An algebra given directly by its multiplication table (validated)."""

    field: Field
    basis_labels: tuple[str, ...]
    # _prod[i][j] = ((k, c), ...) nonzero terms of b_i b_j
    _prod: tuple = dc_field(repr=False)
    unit: tuple = ()
    name: str = dc_field(default="", compare=False)

    @property
    def dim(self) -> int:
        return len(self.basis_labels)

    @property
    def labels(self) -> tuple[str, ...]:
        return self.basis_labels

    @property
    def factors(self) -> tuple["SimpleAlgebra", ...]:
        return () if self.dim == 1 else (self,)

    def __repr__(self):
        tag = self.name or "x".join(self.basis_labels)
        return f"SimpleAlgebra<{self.field.name}, dim {self.dim}, {tag}>"

    @functools.cached_property
    def unit_basis(self) -> int | None:
        """Index ``t`` with ``b_t == 1``, if the unit is a basis vector."""
        nz = [i for i, c in enumerate(self.unit) if c != 0]
        if len(nz) == 1 and self.unit[nz[0]] == 1:
            return nz[0]
        return None

    def left_basis_matrix(self, i: int) -> Matrix:
        n = self.dim
        entries = {}
        for j in range(n):
            for k, c in self._prod[i][j]:
                entries[(k, j)] = c
        return Matrix.from_dict(self.field, entries, n, n)

    @functools.cached_property
    def generators(self) -> tuple[int, ...]:
        """Basis indices generating the algebra (greedy closure)."""
        n = self.dim
        chosen: list[int] = []
        span = Matrix.from_columns(self.field, [self.unit_vector()], n)
        for i in range(n):
            if rank(span) == n:
                break
            test = Matrix.hstack([span, Matrix.from_columns(self.field, [self.basis_vector(i)], n)])
            if rank(test) == rank(span):
                continue
            chosen.append(i)
            span = _subalgebra_span(self, chosen)
        return tuple(chosen)


def _subalgebra_span(a: SimpleAlgebra, gens: list[int]) -> Matrix:
    n = a.dim
    vecs = [a.unit_vector()]
    frontier = [a.unit_vector()]
    basis = Matrix.from_columns(a.field, vecs, n)
    while frontier:
        new = []
        for v in frontier:
            for g in gens:
                w = a.mul(v, a.basis_vector(g))
                cand = Matrix.hstack([basis, Matrix.from_columns(a.field, [w], n)])
                if rank(cand) > rank(basis):
                    basis = cand
                    new.append(w)
        frontier = new
    return basis


@dataclass(frozen=True, eq=True)
class TensorAlgebra(Algebra):
    """Flat tensor product of at least two simple factors."""

    factors: tuple[SimpleAlgebra, ...]

    def __post_init__(self):
        if len(self.factors) < 2:
            raise ValueError("use tensor_algebras() to build tensor products")

    @property
    def field(self) -> Field:
        return self.factors[0].field

    @property
    def dim(self) -> int:
        return math.prod(self.factor_dims)

    @functools.cached_property
    def labels(self) -> tuple[str, ...]:
        return tuple("⊗".join(p) for p in itertools.product(*(f.labels for f in self.factors)))

    def __repr__(self):
        inner = ", ".join(f.name or f"dim{f.dim}" for f in self.factors)
        return f"TensorAlgebra<{self.field.name}, dim {self.dim}, [{inner}]>"


@functools.lru_cache(maxsize=None)
def ground(field: Field) -> SimpleAlgebra:
    """The base field as a 1-dimensional algebra."""
    return SimpleAlgebra(field, ("1",), ((((0, field.one),),),), (field.one,), field.name)


def from_factors(field: Field, factors: Sequence[SimpleAlgebra]) -> Algebra:
    flat = tuple(f for f in factors if f.dim > 1)
    for f in flat:
        if f.field != field:
            raise FieldMismatch(f"{f.field.name} vs {field.name}")
    if not flat:
        return ground(field)
    if len(flat) == 1:
        return flat[0]
    return TensorAlgebra(flat)


# -- constructors ---------------------------------------------------------------

def make_algebra(field: Field, basis_labels: Sequence[str], structure, unit, name: str = "") -> SimpleAlgebra:
    """Validate a multiplication table ``structure[i][j][k]`` and unit vector.

    Raises NotCommutative / NotAssociative / BadUnit naming the offending indices.
    """
    n = len(basis_labels)
    if n == 0:
        raise DimensionMismatch("an algebra needs at least one basis element")
    if len(structure) != n or any(len(r) != n or any(len(c) != n for c in r) for r in structure):
        raise DimensionMismatch(f"structure constants must be {n}x{n}x{n}")
    c = [[[field(x) for x in structure[i][j]] for j in range(n)] for i in range(n)]
    u = [field(x) for x in unit]
    if len(u) != n:
        raise DimensionMismatch("unit vector has wrong length")
    for i in range(n):
        for j in range(i + 1, n):
            if c[i][j] != c[j][i]:
                raise NotCommutative(i, j)

    def mul(x, y):
        out = [field.zero] * n
        for i, xi in enumerate(x):
            if xi == 0:
                continue
            for j, yj in enumerate(y):
                if yj == 0:
                    continue
                s = xi * yj
                for k, ck in enumerate(c[i][j]):
                    if ck != 0:
                        out[k] += s * ck
        return out

    e = [[field.one if a == b else field.zero for a in range(n)] for b in range(n)]
    for i in range(n):
        if mul(u, e[i]) != e[i]:
            raise BadUnit(i)
    for i in range(n):
        for j in range(n):
            bij = c[i][j]
            for k in range(j, n):
                left = mul(bij, e[k])
                right = mul(e[i], c[j][k])
                if left != right:
                    raise NotAssociative(i, j, k)
    prod = tuple(
        tuple(tuple((k, v) for k, v in enumerate(c[i][j]) if v != 0) for j in range(n))
        for i in range(n)
    )
    return SimpleAlgebra(field, tuple(basis_labels), prod, tuple(u), name)


def univariate_quotient(field: Field, poly: Sequence, var: str = "x", name: str = "") -> SimpleAlgebra:
    """``k[x]/(f)`` for monic ``f`` given low-to-high; basis 1, x, ..., x^(d-1)."""
    f = [field(c) for c in poly]
    while f and f[-1] == 0:
        f.pop()
    d = len(f) - 1
    if d < 1:
        raise NonMonic("polynomial must have degree >= 1")
    if f[-1] != 1:
        raise NonMonic(f"leading coefficient is {field.format(f[-1])}, expected 1")
    n = d
    # reduce x^m for m < 2d - 1 to the monomial basis
    powers = []
    for m in range(2 * d - 1):
        if m < d:
            v = [field.zero] * d
            v[m] = field.one
        else:
            prev = powers[m - 1]
            top = prev[d - 1]
            v = [field.zero] + prev[: d - 1]
            for k in range(d):
                v[k] -= top * f[k]
        powers.append(v)
    structure = [[powers[i + j] for j in range(n)] for i in range(n)]
    labels = ["1"] + [var if m == 1 else f"{var}^{m}" for m in range(1, d)]
    unit = [field.one] + [field.zero] * (d - 1)
    if not name:
        name = f"{field.name}[{var}]/({_format_poly(field, f, var)})"
    return make_algebra(field, labels, structure, unit, name)


def _format_poly(field, f, var):
    terms = []
    for m in range(len(f) - 1, -1, -1):
        c = f[m]
        if c == 0:
            continue
        mono = "" if m == 0 else (var if m == 1 else f"{var}^{m}")
        cs = field.format(c)
        if mono and cs == "1":
            terms.append(mono)
        elif mono and cs == "-1":
            terms.append("-" + mono)
        else:
            terms.append(cs + mono)
    return " + ".join(terms).replace("+ -", "- ")


def split_algebra(field: Field, n: int, name: str = "") -> SimpleAlgebra:
    """``k^n`` with the orthogonal idempotents e1..en as basis."""
    structure = [[[field.one if (i == j == k) else field.zero for k in range(n)] for j in range(n)] for i in range(n)]
    unit = [field.one] * n
    labels = [f"e{i + 1}" for i in range(n)]
    if n == 1:
        return ground(field)
    return make_algebra(field, labels, structure, unit, name or f"{field.name}^{n}")


# -- maps -------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class AlgebraMap:
    source: Algebra
    target: Algebra
    matrix: Matrix  # target.dim x source.dim

    def __call__(self, x: Sequence) -> list:
        return self.matrix.vector_apply(list(x))

    def image_of_basis(self, i: int) -> list:
        return self.matrix.column(i)

    def validate(self) -> "AlgebraMap":
        s, t = self.source, self.target
        if self.matrix.shape != (t.dim, s.dim):
            raise DimensionMismatch(f"map matrix {self.matrix.shape}, expected {(t.dim, s.dim)}")
        if self(s.unit_vector()) != t.unit_vector():
            raise NotAnAlgebraMap("unit is not preserved")
        cols = self.matrix.columns()
        for i in range(s.dim):
            for j in range(i, s.dim):
                lhs = self(s.basis_product(i, j))
                rhs = t.mul(cols[i], cols[j])
                if lhs != rhs:
                    raise NotAnAlgebraMap(f"f(b{i} b{j}) != f(b{i}) f(b{j})")
        return self

    def compose(self, other: "AlgebraMap") -> "AlgebraMap":
        """``other`` after ``self``."""
        if self.target != other.source:
            raise AlgebraMismatch("maps are not composable")
        return AlgebraMap(self.source, other.target, other.matrix @ self.matrix)


def identity_map(a: Algebra) -> AlgebraMap:
    return AlgebraMap(a, a, Matrix.identity(a.field, a.dim))


def _inclusion(big: Algebra, small: Algebra, offset: int) -> AlgebraMap:
    # small's factors occupy positions offset.. of big's factors; the rest carry their unit
    k = len(small.factors)
    before = from_factors(big.field, big.factors[:offset]).unit_sparse
    after = from_factors(big.field, big.factors[offset + k:]).unit_sparse
    cols = []
    for i in range(small.dim):
        mi = small.multi(i)
        x = {b + mi + a: cb * ca for b, cb in before.items() for a, ca in after.items()}
        cols.append(big.to_dense(x))
    return AlgebraMap(small, big, Matrix.from_columns(big.field, cols, big.dim))


def tensor_algebras(a: Algebra, b: Algebra, validate: bool = False):
    """``(a (x) b, inclusion_left, inclusion_right)``."""
    if a.field != b.field:
        raise FieldMismatch(f"{a.field.name} vs {b.field.name}")
    t = from_factors(a.field, a.factors + b.factors)
    left = _inclusion(t, a, 0)
    right = _inclusion(t, b, len(a.factors))
    if validate:
        left.validate()
        right.validate()
    return t, left, right


def tensor_power(a: Algebra, m: int) -> Algebra:
    return from_factors(a.field, a.factors * m)


def multiplication_map(a: Algebra, copies: int, validate: bool = True) -> AlgebraMap:
    """``a^(x)m -> a`` sending ``x1 (x) ... (x) xm`` to the product."""
    if copies < 1:
        raise ValueError("copies must be >= 1")
    src = tensor_power(a, copies)
    n = a.dim
    cols = []
    for i in range(src.dim):
        mi = src.multi(i)
        k = len(a.factors)
        parts = [mi[c * k:(c + 1) * k] for c in range(copies)]
        x = {parts[0]: a.field.one}
        for p in parts[1:]:
            x = a.sparse_mul(x, {p: a.field.one})
        cols.append(a.to_dense(x))
    m = AlgebraMap(src, a, Matrix.from_columns(a.field, cols, n))
    return m.validate() if validate else m


# -- ideals and radicals ----------------------------------------------------------

@dataclass(frozen=True, eq=False)
class IdealBasis:
    algebra: Algebra
    generators: tuple  # coordinate vectors spanning the ideal as a subspace

    @property
    def dim(self) -> int:
        return len(self.generators)

    def matrix(self) -> Matrix:
        return Matrix.from_columns(self.algebra.field, list(self.generators), self.algebra.dim)

    def is_ideal(self) -> bool:
        a = self.algebra
        span = self.matrix()
        r = rank(span)
        for g in self.generators:
            for i in range(a.dim):
                w = a.mul(a.basis_vector(i), g)
                if rank(Matrix.hstack([span, Matrix.from_columns(a.field, [w], a.dim)])) > r:
                    return False
        return True


@functools.lru_cache(maxsize=256)
def nilradical(a: Algebra) -> IdealBasis:
    """Nilpotent elements, as the kernel of the trace form (Dickson's criterion)."""
    p = a.field.characteristic
    n = a.dim
    if p and p <= n:
        raise SmallCharacteristic(f"trace-form radical needs char 0 or char > {n}, got {p}")
    traces = []
    for k in range(n):
        traces.append(sum((a.basis_product(k, l)[l] for l in range(n)), a.field.zero))
    form = [[sum((c * traces[k] for k, c in enumerate(a.basis_product(i, j))), a.field.zero) for j in range(n)] for i in range(n)]
    ker = kernel_basis(Matrix.from_rows(a.field, form))
    return IdealBasis(a, tuple(tuple(c) for c in ker.columns()))


def is_reduced(a: Algebra) -> bool:
    return nilradical(a).dim == 0


# -- field test -------------------------------------------------------------------

class FieldVerdict(Enum):
    TRUE = "true"
    FALSE = "false"
    UNKNOWN = "unknown"


@dataclass(frozen=True)
class FieldTest:
    verdict: FieldVerdict
    witness: tuple | None = None
    # FALSE: (x, y) nonzero with x*y = 0; TRUE: (x, minimal polynomial coefficients)

    def __bool__(self):
        return self.verdict is FieldVerdict.TRUE


def minimal_polynomial(a: Algebra, x: Sequence, unit: Sequence | None = None) -> list:
    """Monic minimal polynomial (low-to-high) of ``x``; ``unit`` lets it run inside a block eA."""
    f = a.field
    unit = list(unit) if unit is not None else a.unit_vector()
    powers = [unit]
    while True:
        nxt = a.mul(powers[-1], x)
        basis = Matrix.from_columns(f, powers, a.dim)
        sol = solve(basis, nxt)
        if sol is not None:
            return [-c for c in sol] + [f.one]
        powers.append(nxt)


def _eval_poly(a: Algebra, coeffs, x, unit):
    out = [a.field.zero] * a.dim
    for c in reversed(coeffs):
        out = a.mul(out, x)
        out = [o + c * u for o, u in zip(out, unit)]
    return out


def _random_element(a: Algebra, rng: random.Random, span: Sequence | None = None):
    f = a.field
    vecs = span if span is not None else [a.basis_vector(i) for i in range(a.dim)]
    out = [f.zero] * a.dim
    for v in vecs:
        c = f(rng.randint(-9, 9))
        out = [o + c * w for o, w in zip(out, v)]
    return out


def is_field(a: Algebra, degree_budget: int = DEFAULT_DEGREE_BUDGET, tries: int = 8, seed: int = 0) -> FieldTest:
    """Three-valued field test with certificates (see FieldTest)."""
    f = a.field
    n = a.dim
    if n == 1:
        return FieldTest(FieldVerdict.TRUE, (a.unit_vector(), [f(-1), f.one]))
    rng = random.Random(seed)
    candidates = [a.basis_vector(i) for i in range(n)] + [_random_element(a, rng) for _ in range(tries)]
    unit = a.unit_vector()
    for x in candidates:
        if all(v == 0 for v in x):
            continue
        ker = kernel_basis(a.left_matrix(x))
        if ker.cols:
            return FieldTest(FieldVerdict.FALSE, (x, ker.column(0)))
    for x in candidates:
        mu = minimal_polynomial(a, x)
        poly = make_poly(f, mu)
        g, complete = find_factor(f, poly, degree_budget)
        if g is not None:
            h = poly // g
            gx = _eval_poly(a, poly_coeffs(f, g), x, unit)
            hx = _eval_poly(a, poly_coeffs(f, h), x, unit)
            return FieldTest(FieldVerdict.FALSE, (gx, hx))
        if complete and len(mu) - 1 == n:
            return FieldTest(FieldVerdict.TRUE, (x, mu))
    return FieldTest(FieldVerdict.UNKNOWN)


# -- decomposition ----------------------------------------------------------------

def block_algebra(a: Algebra, e: Sequence, name: str = "") -> SimpleAlgebra:
    """The algebra ``eA`` with unit ``e``, in a basis of the image of ``L_e``."""
    f = a.field
    Le = a.left_matrix(e)
    from .linalg import column_basis

    B = column_basis(Le)
    basis = B.columns()
    m = len(basis)
    structure = []
    for i in range(m):
        row = []
        for j in range(m):
            row.append(solve(B, a.mul(basis[i], basis[j])))
        structure.append(row)
    unit = solve(B, list(e))
    labels = [f"u{i}" for i in range(m)]
    return make_algebra(f, labels, structure, unit, name)


def _split_idempotent(a: Algebra, e, budget, rng, tries):
    f = a.field
    Le = a.left_matrix(e)
    from .linalg import column_basis

    block = column_basis(Le).columns()
    candidates = [a.mul(e, a.basis_vector(i)) for i in range(a.dim)]
    candidates += [_random_element(a, rng, block) for _ in range(tries)]
    for y in candidates:
        mu = minimal_polynomial(a, y, unit=e)
        if len(mu) <= 2:
            continue
        poly = make_poly(f, mu)
        g, _ = find_factor(f, poly, budget)
        if g is None:
            continue
        G = poly.gcd(g ** (len(mu) - 1))
        H = poly // G
        if H.degree() < 1:
            continue
        d, u, v = G.xgcd(H)
        # d is a nonzero constant since G, H are coprime
        vh = v * H
        cs = [c / d.coeffs()[0] for c in poly_coeffs(f, vh)]
        e1 = _eval_poly(a, cs, y, e)
        e2 = [x - z for x, z in zip(e, e1)]
        if any(v != 0 for v in e1) and any(v != 0 for v in e2):
            return e1, e2
    return None


def decompose(a: Algebra, degree_budget: int = DEFAULT_DEGREE_BUDGET, tries: int = 6, seed: int = 0):
    """Best-effort splitting into blocks by orthogonal idempotents.

    Returns ``[(block_algebra, idempotent), ...]``. A single block means no
    splitting was found, not a proof of indecomposability.
    """
    rng = random.Random(seed)
    pending = [a.unit_vector()]
    done = []
    while pending:
        e = pending.pop()
        split = _split_idempotent(a, e, degree_budget, rng, tries)
        if split is None:
            done.append(e)
        else:
            pending.extend(split)
    done.sort(key=lambda v: [-1 if x != 0 else 0 for x in v])
    return [(block_algebra(a, e, name=f"block{i}"), e) for i, e in enumerate(done)]
