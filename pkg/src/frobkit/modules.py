"""Finite-dimensional modules over the algebras of ``frobkit.algebra``.

A module stores, for each simple factor of its algebra and each basis element
of that factor, the matrix by which it acts. The action of a general algebra
element is the product of the factor actions, so modules over large tensor
powers stay cheap to describe.

Objects that only need to *act* on vectors (terms of big chain complexes)
implement the smaller ``Term`` protocol instead of materialising matrices.
"""
from __future__ import annotations

import functools
import itertools
import math
import random
from dataclasses import dataclass
from enum import Enum
from typing import Sequence

from .algebra import Algebra, AlgebraMap, from_factors
from .errors import AlgebraMismatch, DimensionMismatch, ModuleError
from .linalg import Field, Matrix, column_basis, extend_to_complement, kernel_basis, kron, rank


# -- matrix helpers ---------------------------------------------------------------

def assemble(field: Field, nrows: int, ncols: int, blocks) -> Matrix:
    """Matrix built from ``(row0, col0, Matrix)`` placements; overlaps add."""
    rows = [[0] * ncols for _ in range(nrows)]
    for r0, c0, m in blocks:
        if m.rows == 0 or m.cols == 0:
            continue
        for i, row in enumerate(m.tolist()):
            out = rows[r0 + i]
            for j, v in enumerate(row):
                if v != 0:
                    out[c0 + j] = out[c0 + j] + v
    return Matrix._trusted(field, rows, nrows, ncols)


def split_rows(m: Matrix, sizes: Sequence[int]) -> list[Matrix]:
    rows = m.tolist()
    out = []
    start = 0
    for s in sizes:
        out.append(Matrix._trusted(m.field, rows[start:start + s], s, m.cols))
        start += s
    return out


def stack_rows(field: Field, parts: Sequence[Matrix], ncols: int) -> Matrix:
    rows = []
    for p in parts:
        rows.extend(p.tolist())
    return Matrix._trusted(field, rows, len(rows), ncols)


def hcat(field: Field, parts: Sequence[Matrix], nrows: int) -> Matrix:
    parts = [p for p in parts if p.cols]
    if not parts:
        return Matrix.zeros(field, nrows, 0)
    if len(parts) == 1:
        return parts[0]
    return Matrix.hstack(parts)


def block_apply(L: Matrix, V: Matrix, copies: int) -> Matrix:
    """``(I_copies (x) L) @ V`` without forming the big matrix."""
    n = L.cols
    k = V.cols
    if copies == 0 or k == 0:
        return Matrix.zeros(V.field, L.rows * copies, k)
    if copies == 1:
        return L @ V
    rows = V.tolist()
    wide = [[] for _ in range(n)]
    for p in range(copies):
        for i in range(n):
            wide[i].extend(rows[p * n + i])
    W = L @ Matrix._trusted(V.field, wide, n, copies * k)
    wl = W.tolist()
    out = []
    for p in range(copies):
        for i in range(L.rows):
            out.append(wl[i][p * k:(p + 1) * k])
    return Matrix._trusted(V.field, out, L.rows * copies, k)


def quotient_data(relations: Matrix, ambient: int):
    """Section indices and projection for ``k^ambient / span(relations)``.

    Returns ``(section, proj)``: ``section`` lists standard basis indices whose
    images form a basis of the quotient, ``proj`` (q x ambient) gives quotient
    coordinates and vanishes on the relations.
    """
    field = relations.field
    rel = column_basis(relations) if relations.cols else relations
    comp = extend_to_complement(rel, ambient)
    basis = Matrix.hstack([rel, _unit_columns(field, ambient, comp)]) if rel.cols else _unit_columns(field, ambient, comp)
    inv = basis.inverse()
    proj = inv.submatrix(range(rel.cols, ambient), range(ambient))
    return comp, proj


def _unit_columns(field: Field, n: int, idx: Sequence[int]) -> Matrix:
    return Matrix.from_dict(field, {(i, c): 1 for c, i in enumerate(idx)}, n, len(idx))


# -- terms ------------------------------------------------------------------------

class Term:
    """Something an algebra acts on: ``dim`` plus ``apply_factor``."""

    algebra: Algebra
    dim: int

    @property
    def field(self) -> Field:
        return self.algebra.field

    def apply_factor(self, f: int, t: int, V: Matrix) -> Matrix:
        raise NotImplementedError

    def apply_multi(self, positions: Sequence[int], mi: Sequence[int], V: Matrix) -> Matrix:
        """Apply the basis monomial ``mi`` living on factor ``positions``."""
        for f, t in zip(positions, mi):
            if self.algebra.factors[f].unit_basis != t:
                V = self.apply_factor(f, t, V)
        return V

    def apply_element(self, positions: Sequence[int], x: dict, V: Matrix) -> Matrix:
        out = Matrix.zeros(self.field, self.dim, V.cols)
        for mi, c in x.items():
            out = out + self.apply_multi(positions, mi, V).scale(c)
        return out

    def element_matrix(self, positions: Sequence[int], x: dict) -> Matrix:
        return self.apply_element(positions, x, Matrix.identity(self.field, self.dim))

    def span_images(self, V: Matrix, positions: Sequence[int] | None = None) -> Matrix:
        """Columns ``b v`` for every basis monomial ``b`` on ``positions``.

        Column order is (monomial lexicographic, column of V).
        """
        if positions is None:
            positions = range(len(self.algebra.factors))
        positions = list(positions)
        for f in reversed(positions):
            d = self.algebra.factors[f].dim
            V = hcat(self.field, [self.apply_factor(f, t, V) for t in range(d)], self.dim)
        return V

    def as_module(self) -> "Module":
        eye = Matrix.identity(self.field, self.dim)
        acts = tuple(
            tuple(self.apply_factor(f, t, eye) for t in range(fac.dim))
            for f, fac in enumerate(self.algebra.factors)
        )
        return Module(self.algebra, self.dim, acts)


class Module(Term):
    """Module with one action matrix per (factor, factor-basis element)."""

    def __init__(self, algebra: Algebra, dim: int, factor_action, validate: bool = True, label: str = ""):
        self.algebra = algebra
        self.dim = dim
        self.factor_action = tuple(tuple(ms) for ms in factor_action)
        self.label = label
        self._cache: dict = {}
        if len(self.factor_action) != len(algebra.factors):
            raise DimensionMismatch("one action list per algebra factor is required")
        for fac, ms in zip(algebra.factors, self.factor_action):
            if len(ms) != fac.dim or any(m.shape != (dim, dim) for m in ms):
                raise DimensionMismatch("action matrices have the wrong shape")
        if validate:
            self.validate()

    def __repr__(self):
        tag = f" {self.label}" if self.label else ""
        return f"Module<dim {self.dim} over {self.algebra!r}{tag}>"

    @property
    def rank(self) -> int:
        return self.dim

    @classmethod
    def from_action(cls, algebra: Algebra, matrices: Sequence[Matrix], validate: bool = True) -> "Module":
        """Module from one matrix per basis element of ``algebra``."""
        if len(matrices) != algebra.dim:
            raise DimensionMismatch(f"expected {algebra.dim} action matrices")
        dim = matrices[0].rows if matrices else 0
        acts = []
        offset = 0
        for fac in algebra.factors:
            single = from_factors(algebra.field, [fac])
            from .algebra import _inclusion

            inc = _inclusion(algebra, single, offset)
            ms = []
            for t in range(fac.dim):
                col = inc.image_of_basis(t)
                m = Matrix.zeros(algebra.field, dim, dim)
                for i, c in enumerate(col):
                    if c != 0:
                        m = m + matrices[i].scale(c)
                ms.append(m)
            acts.append(ms)
            offset += 1
        mod = cls(algebra, dim, acts, validate=False)
        if validate:
            mod.validate()
            for i in range(algebra.dim):
                if mod.action(i) != matrices[i]:
                    raise ModuleError(f"action of basis element {i} is not multiplicative")
        return mod

    def validate(self) -> "Module":
        field = self.field
        eye = Matrix.identity(field, self.dim)
        for f, (fac, ms) in enumerate(zip(self.algebra.factors, self.factor_action)):
            unit = Matrix.zeros(field, self.dim, self.dim)
            for t, c in enumerate(fac.unit):
                if c != 0:
                    unit = unit + ms[t].scale(c)
            if unit != eye:
                raise ModuleError(f"unit of factor {f} does not act as the identity")
            for s in range(fac.dim):
                for t in range(s, fac.dim):
                    lhs = ms[s] @ ms[t]
                    rhs = Matrix.zeros(field, self.dim, self.dim)
                    for k, c in fac._prod[s][t]:
                        rhs = rhs + ms[k].scale(c)
                    if lhs != rhs:
                        raise ModuleError(f"factor {f}: action of b{s} b{t} is not multiplicative")
        gens = self.generator_actions()
        for (f, a), (g, b) in itertools.combinations(gens, 2):
            if f != g and a @ b != b @ a:
                raise ModuleError(f"actions of factors {f} and {g} do not commute")
        return self

    def generator_actions(self) -> list[tuple[int, Matrix]]:
        """``(factor, matrix)`` for algebra generators of each factor."""
        out = []
        for f, fac in enumerate(self.algebra.factors):
            for t in fac.generators:
                out.append((f, self.factor_action[f][t]))
        return out

    def apply_factor(self, f, t, V):
        return self.factor_action[f][t] @ V

    def multi_action(self, positions: tuple, mi: tuple) -> Matrix:
        key = ("m", positions, mi)
        m = self._cache.get(key)
        if m is None:
            m = Matrix.identity(self.field, self.dim)
            for f, t in zip(positions, mi):
                if self.algebra.factors[f].unit_basis != t:
                    m = self.factor_action[f][t] @ m
            self._cache[key] = m
        return m

    def action(self, i: int) -> Matrix:
        """Action of the ``i``-th basis element of the whole algebra."""
        n = len(self.algebra.factors)
        return self.multi_action(tuple(range(n)), self.algebra.multi(i))

    def element_matrix(self, positions, x: dict) -> Matrix:
        positions = tuple(positions)
        key = ("e", positions, tuple(sorted(x.items())))
        m = self._cache.get(key)
        if m is None:
            m = Matrix.zeros(self.field, self.dim, self.dim)
            for mi, c in x.items():
                m = m + self.multi_action(positions, tuple(mi)).scale(c)
            self._cache[key] = m
        return m

    def apply_element(self, positions, x, V):
        return self.element_matrix(positions, x) @ V

    def act(self, x: Sequence) -> Matrix:
        """Action of a dense algebra element."""
        n = len(self.algebra.factors)
        return self.element_matrix(tuple(range(n)), self.algebra.to_sparse(list(x)))

    def as_module(self) -> "Module":
        return self

    def permuted(self, order: Sequence[int]) -> "Module":
        """Same space with factors reordered: new factor ``k`` is old factor ``order[k]``."""
        alg = from_factors(self.field, [self.algebra.factors[i] for i in order])
        return Module(alg, self.dim, [self.factor_action[i] for i in order], validate=False, label=self.label)


@dataclass(eq=False)
class DirectSumTerm(Term):
    parts: tuple

    def __post_init__(self):
        self.algebra = self.parts[0].algebra
        self.dim = sum(p.dim for p in self.parts)
        self.sizes = [p.dim for p in self.parts]

    def apply_factor(self, f, t, V):
        pieces = split_rows(V, self.sizes)
        return stack_rows(self.field, [p.apply_factor(f, t, w) for p, w in zip(self.parts, pieces)], V.cols)

    def apply_element(self, positions, x, V):
        pieces = split_rows(V, self.sizes)
        return stack_rows(self.field, [p.apply_element(positions, x, w) for p, w in zip(self.parts, pieces)], V.cols)


class ZeroTerm(Term):
    def __init__(self, algebra: Algebra):
        self.algebra = algebra
        self.dim = 0

    def apply_factor(self, f, t, V):
        return V


class PermutedTerm(Term):
    """``inner`` with its factors reordered (new factor k = inner factor order[k])."""

    def __init__(self, inner: Term, order: Sequence[int]):
        self.inner = inner
        self.order = tuple(order)
        self.algebra = from_factors(inner.field, [inner.algebra.factors[i] for i in self.order])
        self.dim = inner.dim

    def apply_factor(self, f, t, V):
        return self.inner.apply_factor(self.order[f], t, V)

    def apply_element(self, positions, x, V):
        return self.inner.apply_element([self.order[p] for p in positions], x, V)


class FreeTerm(Term):
    """``R^rank`` with basis ordered (copy, algebra basis index)."""

    def __init__(self, algebra: Algebra, rank: int):
        self.algebra = algebra
        self.rank = rank
        self.dim = rank * algebra.dim

    def apply_factor(self, f, t, V):
        return block_apply(self.algebra.factor_regular(f, t), V, self.rank)


# -- constructors -----------------------------------------------------------------

def free_module(a: Algebra, rank: int) -> Module:
    acts = []
    for f, fac in enumerate(a.factors):
        ms = []
        for t in range(fac.dim):
            L = a.factor_regular(f, t)
            ms.append(Matrix.block_diag([L] * rank, a.field) if rank else Matrix.zeros(a.field, 0, 0))
        acts.append(ms)
    return Module(a, rank * a.dim, acts, validate=False, label=f"free rank {rank}")


def regular_module(a: Algebra) -> Module:
    return free_module(a, 1)


def diagonal_module(space: Sequence, assign: Sequence[int], label: str = "") -> Module:
    """The product ``P_0 (x) P_1 (x) ...`` of simple algebras, as a module over
    the algebra whose ``k``-th factor is ``space[assign[k]]`` acting on slot
    ``assign[k]`` by multiplication.
    """
    space = tuple(space)
    if not space:
        raise ModuleError("diagonal module needs at least one slot; use the ground module")
    field = space[0].field
    prod = from_factors(field, space)
    ambient = from_factors(field, [space[j] for j in assign])
    acts = []
    for j in assign:
        acts.append([prod.factor_regular(j, t) for t in range(space[j].dim)])
    return Module(ambient, prod.dim, acts, validate=False, label=label)


def ground_module(a: Algebra) -> Module:
    """The 1-dimensional module over the ground-field algebra."""
    if a.factors:
        raise ModuleError("ground module lives over the base field only")
    return Module(a, 1, [], validate=False)


def quotient(m: Module, gens: Matrix, label: str = "") -> Module:
    """``m`` modulo the submodule generated by the columns of ``gens``."""
    sub = m.span_images(gens) if gens.cols else gens
    section, proj = quotient_data(sub, m.dim)
    return _induced(m.field, proj, section, m.dim, m.factor_action, m.algebra, label)


@dataclass(frozen=True, eq=False)
class ModuleMap:
    source: Module
    target: Module
    matrix: Matrix

    def validate(self) -> "ModuleMap":
        if self.source.algebra != self.target.algebra:
            raise AlgebraMismatch("module map between modules over different algebras")
        if self.matrix.shape != (self.target.dim, self.source.dim):
            raise DimensionMismatch("module map has the wrong shape")
        for f, fac in enumerate(self.source.algebra.factors):
            for t in range(fac.dim):
                if self.matrix @ self.source.factor_action[f][t] != self.target.factor_action[f][t] @ self.matrix:
                    raise ModuleError(f"map does not intertwine factor {f} element {t}")
        return self

    def is_invertible(self) -> bool:
        return self.matrix.rows == self.matrix.cols and rank(self.matrix) == self.matrix.rows


# -- change of rings --------------------------------------------------------------

def restrict(f: AlgebraMap, m: Module) -> Module:
    """View ``m`` (over ``f.target``) as a module over ``f.source``."""
    if m.algebra != f.target:
        raise AlgebraMismatch("module is not over the target of the map")
    src = f.source
    acts = []
    offset = 0
    from .algebra import _inclusion

    for fac in src.factors:
        inc = _inclusion(src, from_factors(src.field, [fac]), offset)
        ms = []
        for t in range(fac.dim):
            ms.append(m.act(f(inc.image_of_basis(t))))
        acts.append(ms)
        offset += 1
    return Module(src, m.dim, acts, validate=False, label=m.label)


def _induced(field, proj, section, ambient_dim, matrices_by_factor, algebra, label=""):
    E = _unit_columns(field, ambient_dim, section)
    acts = [[proj @ (m @ E) for m in ms] for ms in matrices_by_factor]
    return Module(algebra, len(section), acts, validate=True, label=label)


def extend(f: AlgebraMap, m: Module) -> Module:
    """Base change ``m (x)_A B`` along ``f: A -> B``; ``B`` acts on the right factor."""
    if m.algebra != f.source:
        raise AlgebraMismatch("module is not over the source of the map")
    a, b = f.source, f.target
    field = a.field
    nb = b.dim
    eye_m = Matrix.identity(field, m.dim)
    eye_b = Matrix.identity(field, nb)
    rels = []
    offset = 0
    from .algebra import _inclusion

    for fi, fac in enumerate(a.factors):
        inc = _inclusion(a, from_factors(field, [fac]), offset)
        for t in fac.generators:
            img = f(inc.image_of_basis(t))
            rels.append(kron(m.factor_action[fi][t], eye_b) - kron(eye_m, b.left_matrix(img)))
        offset += 1
    n = m.dim * nb
    relations = hcat(field, rels, n)
    section, proj = quotient_data(relations, n)
    acts = [[kron(eye_m, b.factor_regular(g, t)) for t in range(fac.dim)] for g, fac in enumerate(b.factors)]
    return _induced(field, proj, section, n, acts, b, label=m.label)


def tensor_over_middle(m: Module, n: Module, a: Algebra, b: Algebra, c: Algebra) -> Module:
    """``m (x)_B n`` for ``m`` over ``A (x) B`` and ``n`` over ``B (x) C``; result over ``A (x) C``."""
    na, nb = len(a.factors), len(b.factors)
    if m.algebra.factors != a.factors + b.factors:
        raise AlgebraMismatch("first module is not over A (x) B")
    if n.algebra.factors != b.factors + c.factors:
        raise AlgebraMismatch("second module is not over B (x) C")
    field = a.field
    em = Matrix.identity(field, m.dim)
    en = Matrix.identity(field, n.dim)
    rels = []
    for k, fac in enumerate(b.factors):
        for t in fac.generators:
            rels.append(kron(m.factor_action[na + k][t], en) - kron(em, n.factor_action[k][t]))
    dim = m.dim * n.dim
    relations = hcat(field, rels, dim)
    section, proj = quotient_data(relations, dim)
    acts = [[kron(x, en) for x in m.factor_action[k]] for k in range(na)]
    acts += [[kron(em, x) for x in n.factor_action[nb + k]] for k in range(len(c.factors))]
    alg = from_factors(field, a.factors + c.factors)
    return _induced(field, proj, section, dim, acts, alg)


def external_module(m: Module, n: Module) -> Module:
    """``m (x)_k n`` over the concatenated algebra."""
    field = m.field
    em = Matrix.identity(field, m.dim)
    en = Matrix.identity(field, n.dim)
    acts = [[kron(x, en) for x in ms] for ms in m.factor_action]
    acts += [[kron(em, x) for x in ms] for ms in n.factor_action]
    alg = from_factors(field, m.algebra.factors + n.algebra.factors)
    return Module(alg, m.dim * n.dim, acts, validate=False)


# -- Hom --------------------------------------------------------------------------

def _hom_system(m: Module, n: Module) -> Matrix:
    # unknown X (n.dim x m.dim) row-major; X rho_m(g) = rho_n(g) X for generators g
    field = m.field
    em = Matrix.identity(field, m.dim)
    en = Matrix.identity(field, n.dim)
    eqs = []
    for (f, gm), (_, gn) in zip(m.generator_actions(), n.generator_actions()):
        eqs.append(kron(gn, em) - kron(en, gm.T))
    if not eqs:
        return Matrix.zeros(field, 0, m.dim * n.dim)
    return Matrix.vstack(eqs)


def hom_space(m: Module, n: Module) -> list[ModuleMap]:
    """Basis of ``Hom_R(m, n)``."""
    if m.algebra != n.algebra:
        raise AlgebraMismatch("Hom between modules over different algebras")
    m, n = m.as_module(), n.as_module()
    ker = kernel_basis(_hom_system(m, n))
    out = []
    for col in ker.columns():
        X = Matrix._trusted(m.field, [col[i * m.dim:(i + 1) * m.dim] for i in range(n.dim)], n.dim, m.dim)
        out.append(ModuleMap(m, n, X))
    return out


def hom_dim(m: Module, n: Module) -> int:
    if m.algebra != n.algebra:
        raise AlgebraMismatch("Hom between modules over different algebras")
    sys = _hom_system(m.as_module(), n.as_module())
    return m.dim * n.dim - rank(sys)


class IsoVerdict(Enum):
    YES = "yes"
    NO = "no"
    UNKNOWN = "unknown"


@dataclass(frozen=True)
class IsoResult:
    verdict: IsoVerdict
    witness: ModuleMap | None = None
    reason: str = ""

    def __bool__(self):
        return self.verdict is IsoVerdict.YES


def module_iso(m: Module, n: Module, tries: int = 12, seed: int = 0) -> IsoResult:
    """Decide ``m ~= n`` with certificates; random sampling for the positive case."""
    if m.algebra != n.algebra:
        raise AlgebraMismatch("modules over different algebras")
    if m.dim != n.dim:
        return IsoResult(IsoVerdict.NO, reason=f"dimensions {m.dim} != {n.dim}")
    if m.dim == 0:
        z = Matrix.zeros(m.field, 0, 0)
        return IsoResult(IsoVerdict.YES, ModuleMap(m.as_module(), n.as_module(), z))
    m, n = m.as_module(), n.as_module()
    hmn = hom_space(m, n)
    hnm = hom_dim(n, m)
    if len(hmn) != hnm:
        return IsoResult(IsoVerdict.NO, reason=f"dim Hom(m,n)={len(hmn)} but dim Hom(n,m)={hnm}")
    emm, enn = hom_dim(m, m), hom_dim(n, n)
    if emm != enn:
        return IsoResult(IsoVerdict.NO, reason=f"dim End(m)={emm} but dim End(n)={enn}")
    if not hmn:
        return IsoResult(IsoVerdict.NO, reason="Hom(m, n) = 0")
    rng = random.Random(seed)
    for attempt in range(tries):
        bound = 2 + 3 * attempt
        X = Matrix.zeros(m.field, n.dim, m.dim)
        for h in hmn:
            X = X + h.matrix.scale(rng.randint(-bound, bound))
        if rank(X) == m.dim:
            return IsoResult(IsoVerdict.YES, ModuleMap(m, n, X))
    return IsoResult(IsoVerdict.UNKNOWN, reason=f"no invertible map in {tries} samples")


# -- freeness ---------------------------------------------------------------------

def free_frame(term: Term, positions: Sequence[int], tries: int = 3, seed: int = 0):
    """Try to show ``term`` is free over the factors at ``positions``.

    Returns ``(G, Phi)`` with ``G`` the chosen generators (dim x s) and ``Phi``
    the invertible matrix whose column ``p * dimB + b`` is ``b g_p``; or None
    when no frame is found (which does not prove non-freeness).
    """
    field = term.field
    positions = list(positions)
    dimb = math.prod(term.algebra.factors[p].dim for p in positions)
    if term.dim % dimb:
        return None
    s = term.dim // dimb
    if s == 0:
        z = Matrix.zeros(field, 0, 0)
        return z, z
    if dimb == 1:
        eye = Matrix.identity(field, term.dim)
        return eye, eye
    rng = random.Random(seed)
    for _ in range(tries):
        G = Matrix._trusted(field, [[rng.randint(-3, 3) for _ in range(s)] for _ in range(term.dim)], term.dim, s)
        imgs = term.span_images(G, positions)
        # reorder (b, p) -> (p, b)
        order = [b * s + p for p in range(s) for b in range(dimb)]
        Phi = imgs.submatrix(range(term.dim), order)
        if rank(Phi) == term.dim:
            return G, Phi
    return None
