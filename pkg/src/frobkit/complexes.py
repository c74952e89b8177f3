"""Bounded chain complexes, homology, free replacements and tensor products.

Indexing is homological: ``d_i`` maps degree ``i`` to degree ``i - 1``.
Total complexes use ``d(x (x) y) = dx (x) y + (-1)^|x| x (x) dy``.

Every complex carries ``valid_through``: the largest degree through which its
homology agrees with the untruncated object it stands for (``math.inf`` when
nothing was truncated). A free replacement computed through degree ``T`` is
certified through ``T - 1``.
"""
from __future__ import annotations

import math
import random
from dataclasses import dataclass, field as dc_field
from typing import Sequence

from .algebra import Algebra, from_factors, nilradical
from .errors import ComplexError, DimensionMismatch, SmallCharacteristic, TruncationExhausted
from .linalg import Field, Matrix, kernel_data, rank
from .modules import (
    DirectSumTerm,
    FreeTerm,
    Module,
    PermutedTerm,
    Term,
    ZeroTerm,
    assemble,
    free_frame,
    hcat,
    quotient_data,
    split_rows,
    stack_rows,
    _unit_columns,
)


@dataclass(frozen=True)
class GradedDims:
    """Degree -> dimension, certified through ``valid_through``."""

    dims: dict
    valid_through: float = math.inf

    def __getitem__(self, i: int) -> int:
        if i > self.valid_through:
            raise TruncationExhausted(i, self.valid_through)
        return self.dims.get(i, 0)

    def as_list(self, lo: int, hi: int) -> list[int]:
        return [self[i] for i in range(lo, hi + 1)]

    def nonzero(self) -> dict:
        return {k: v for k, v in sorted(self.dims.items()) if v}

    def __eq__(self, other):
        if isinstance(other, GradedDims):
            return self.nonzero() == other.nonzero()
        if isinstance(other, dict):
            return self.nonzero() == {k: v for k, v in other.items() if v}
        return NotImplemented


# -- chain complexes --------------------------------------------------------------

class ChainComplex:
    """Terms ``lo .. top`` with k-matrix differentials between them."""

    def __init__(self, algebra: Algebra, lo: int, terms: Sequence[Term], diffs: dict,
                 valid_through: float = math.inf, check: bool = True):
        self.algebra = algebra
        self.lo = lo
        self.terms = list(terms)
        self._diffs = dict(diffs)
        self.valid_through = valid_through
        for t in self.terms:
            if t.algebra != algebra:
                raise ComplexError("term over the wrong algebra")
        for i in range(lo + 1, self.top + 1):
            d = self.d(i)
            if d.shape != (self.term(i - 1).dim, self.term(i).dim):
                raise DimensionMismatch(f"d_{i} has shape {d.shape}")
        if check:
            self.check_square_zero()

    @property
    def field(self) -> Field:
        return self.algebra.field

    @property
    def top(self) -> int:
        return self.lo + len(self.terms) - 1

    def term(self, i: int) -> Term:
        if self.lo <= i <= self.top:
            return self.terms[i - self.lo]
        return ZeroTerm(self.algebra)

    def dim(self, i: int) -> int:
        return self.term(i).dim

    def d(self, i: int) -> Matrix:
        m = self._diffs.get(i)
        if m is None:
            return Matrix.zeros(self.field, self.dim(i - 1), self.dim(i))
        return m

    def check_square_zero(self):
        for i in range(self.lo + 2, self.top + 1):
            if not (self.d(i - 1) @ self.d(i)).is_zero():
                raise ComplexError(f"d_{i - 1} d_{i} != 0")

    def check_linear(self):
        """Differentials commute with every factor basis element."""
        for i in range(self.lo + 1, self.top + 1):
            d = self.d(i)
            src, tgt = self.term(i), self.term(i - 1)
            eye = Matrix.identity(self.field, src.dim)
            for f, fac in enumerate(self.algebra.factors):
                for t in range(fac.dim):
                    if d @ src.apply_factor(f, t, eye) != tgt.apply_factor(f, t, d):
                        raise ComplexError(f"d_{i} is not linear for factor {f} element {t}")

    @classmethod
    def concentrated(cls, m: Term, degree: int = 0) -> "ChainComplex":
        return cls(m.algebra, degree, [m], {}, math.inf, check=False)

    def truncated(self, top: int) -> "ChainComplex":
        if top >= self.top:
            return self
        dropped = any(self.dim(i) for i in range(top + 1, self.top + 1))
        valid = min(self.valid_through, top - 1) if dropped else self.valid_through
        keep = self.terms[: max(0, top - self.lo + 1)]
        diffs = {i: m for i, m in self._diffs.items() if i <= top}
        return ChainComplex(self.algebra, self.lo, keep, diffs, valid, check=False)

    def permuted(self, order: Sequence[int]) -> "ChainComplex":
        terms = [PermutedTerm(t, order) for t in self.terms]
        alg = from_factors(self.field, [self.algebra.factors[i] for i in order])
        return ChainComplex(alg, self.lo, terms, self._diffs, self.valid_through, check=False)

    def is_module(self) -> bool:
        """Concentrated in a single degree."""
        return len(self.terms) == 1


def homology(c: ChainComplex, degrees: Sequence[int] | None = None, validate: bool = True) -> list:
    """``[(degree, Module)]`` with the induced actions."""
    if degrees is None:
        degrees = range(c.lo, c.top + 1)
    out = []
    for i in degrees:
        if i > c.valid_through:
            raise TruncationExhausted(i, c.valid_through)
        out.append((i, _homology_at(c, i, validate)))
    return out


def homology_dims(c: ChainComplex, hi: int, lo: int | None = None) -> GradedDims:
    """Dimensions only; cheaper than ``homology``."""
    if hi > c.valid_through:
        raise TruncationExhausted(hi, c.valid_through)
    lo = c.lo if lo is None else lo
    dims = {}
    ranks = {}

    def rk(i):
        if i not in ranks:
            ranks[i] = rank(c.d(i))
        return ranks[i]

    for i in range(lo, hi + 1):
        dims[i] = c.dim(i) - rk(i) - rk(i + 1)
    return GradedDims(dims, c.valid_through)


def _homology_at(c: ChainComplex, i: int, validate: bool) -> Module:
    field = c.field
    term = c.term(i)
    Z, free = kernel_data(c.d(i))
    nxt = c.d(i + 1)
    bz = nxt.submatrix(free, range(nxt.cols)) if nxt.cols else Matrix.zeros(field, len(free), 0)
    section, proj = quotient_data(bz, len(free))
    reps = Z @ _unit_columns(field, len(free), section)
    acts = []
    for f, fac in enumerate(c.algebra.factors):
        ms = []
        for t in range(fac.dim):
            img = term.apply_factor(f, t, reps)
            coords = img.submatrix(free, range(img.cols))
            ms.append(proj @ coords)
        acts.append(ms)
    return Module(c.algebra, len(section), acts, validate=validate, label=f"H_{i}")


# -- free complexes ---------------------------------------------------------------

@dataclass(eq=False)
class FreeComplex:
    """Terms ``R^{ranks[k]}`` in degree ``lo + k``; differentials as matrices over ``R``.

    ``diffs[k]`` maps degree ``lo + k`` to ``lo + k - 1`` and is a dict
    ``(row, col) -> sparse algebra element``.
    """

    algebra: Algebra
    lo: int
    ranks: list
    diffs: list
    valid_through: float = math.inf
    _kcache: dict = dc_field(default_factory=dict, repr=False)

    @property
    def top(self) -> int:
        return self.lo + len(self.ranks) - 1

    def rank_at(self, i: int) -> int:
        if self.lo <= i <= self.top:
            return self.ranks[i - self.lo]
        return 0

    def diff(self, i: int) -> dict:
        if self.lo < i <= self.top:
            return self.diffs[i - self.lo]
        return {}

    def kmatrix(self, i: int) -> Matrix:
        if i not in self._kcache:
            self._kcache[i] = rmatrix_to_k(self.algebra, self.diff(i), self.rank_at(i - 1), self.rank_at(i))
        return self._kcache[i]

    def as_chain_complex(self, check: bool = True) -> ChainComplex:
        terms = [FreeTerm(self.algebra, r) for r in self.ranks]
        diffs = {i: self.kmatrix(i) for i in range(self.lo + 1, self.top + 1)}
        return ChainComplex(self.algebra, self.lo, terms, diffs, self.valid_through, check=check)

    def truncated(self, top: int) -> "FreeComplex":
        if top >= self.top:
            return self
        n = max(0, top - self.lo + 1)
        dropped = any(self.ranks[n:])
        valid = min(self.valid_through, top - 1) if dropped else self.valid_through
        return FreeComplex(self.algebra, self.lo, self.ranks[:n], self.diffs[:n], valid)

    def check_square_zero(self):
        R = self.algebra
        for i in range(self.lo + 2, self.top + 1):
            prod = rmatrix_mul(R, self.diff(i - 1), self.diff(i))
            if any(prod.values()):
                raise ComplexError(f"d_{i - 1} d_{i} != 0")


def rmatrix_mul(R: Algebra, a: dict, b: dict) -> dict:
    out = {}
    by_row = {}
    for (k, j), y in b.items():
        by_row.setdefault(k, []).append((j, y))
    for (i, k), x in a.items():
        for j, y in by_row.get(k, ()):
            z = R.sparse_mul(x, y)
            acc = out.setdefault((i, j), {})
            for mi, c in z.items():
                acc[mi] = acc.get(mi, R.field.zero) + c
    return {key: {mi: c for mi, c in v.items() if c != 0} for key, v in out.items()}


def _left_multi(R: Algebra, mi: tuple) -> Matrix:
    m = Matrix.identity(R.field, R.dim)
    for f, t in enumerate(mi):
        if R.factors[f].unit_basis != t:
            m = R.factor_regular(f, t) @ m
    return m


def left_element_matrix(R: Algebra, x: dict) -> Matrix:
    m = Matrix.zeros(R.field, R.dim, R.dim)
    for mi, c in x.items():
        m = m + _left_multi(R, mi).scale(c)
    return m


def rmatrix_to_k(R: Algebra, entries: dict, nrows: int, ncols: int) -> Matrix:
    n = R.dim
    blocks = [(q * n, p * n, left_element_matrix(R, x)) for (q, p), x in entries.items() if x]
    return assemble(R.field, nrows * n, ncols * n, blocks)


def _vector_to_relements(R: Algebra, v: Sequence, r: int) -> list[dict]:
    n = R.dim
    out = []
    for q in range(r):
        out.append({R.multi(b): c for b, c in enumerate(v[q * n:(q + 1) * n]) if c != 0})
    return out


# -- free replacement -------------------------------------------------------------

@dataclass(eq=False)
class Replacement:
    """A free complex ``free`` with comparison maps ``maps[i]: F_i -> C_i``."""

    free: FreeComplex
    maps: dict
    source: ChainComplex


def _radical_elements(R: Algebra):
    """Sparse generators of the radical of ``R`` and whether ``R/rad`` is the ground field."""
    try:
        gens = []
        for f, v in R.radical_generators():
            x = {}
            for t, c in enumerate(v):
                if c != 0:
                    x[(f, t)] = c
            gens.append((f, x))
        split = R.semisimple_dim() == 1
        return gens, split
    except SmallCharacteristic:
        return None, False


def free_replacement(c: ChainComplex, top: int, seed: int = 0) -> Replacement:
    """Free complex quasi-isomorphic to ``c`` through degree ``top - 1``.

    Built by killing cycles of the mapping cone degree by degree; generators
    are chosen modulo the radical so resolutions are minimal whenever the
    radical is available.
    """
    R = c.algebra
    field = R.field
    n = R.dim
    rad, split = _radical_elements(R)
    rng = random.Random(seed)
    ranks: list[int] = []
    rdiffs: list[dict] = []
    kd: dict[int, Matrix] = {}
    maps: dict[int, Matrix] = {}
    lo = c.lo
    complete = False
    for i in range(lo, top + 1):
        prev_rank = ranks[-1] if ranks else 0
        fprev = FreeTerm(R, prev_rank)
        ci = c.term(i)
        cone = DirectSumTerm((fprev, ci))
        # cone differential: (x, y) -> (-dF x, f x + dC y)
        fp_dim = fprev.dim
        fpp_dim = (ranks[-2] if len(ranks) >= 2 else 0) * n
        cm1 = c.dim(i - 1)
        blocks = []
        if i - 1 in kd:
            blocks.append((0, 0, -kd[i - 1]))
        if i - 1 in maps:
            blocks.append((fpp_dim, 0, maps[i - 1]))
        blocks.append((fpp_dim, fp_dim, c.d(i)))
        D = assemble(field, fpp_dim + cm1, fp_dim + ci.dim, blocks)
        Z, _ = kernel_data(D)
        nz = Z.cols
        # boundaries already present: (0, d_C y)
        dnext = c.d(i + 1)
        have = [Matrix.vstack([Matrix.zeros(field, fp_dim, dnext.cols), dnext])] if dnext.cols else []
        if rad:
            for f, x in rad:
                have.append(_apply_factor_element(cone, f, x, Z))
        current = hcat(field, have, cone.dim)
        cur_rank = rank(current) if current.cols else 0
        gens = []
        if cur_rank < nz:
            gens = _choose_generators(cone, Z, current, cur_rank, nz, split, rng)
        r = len(gens)
        ranks.append(r)
        # record differential and comparison map
        entries = {}
        fcols, ccols = [], []
        for p, g in enumerate(gens):
            gl = g.column(0)
            zf, zc = gl[:fp_dim], gl[fp_dim:]
            for q, x in enumerate(_vector_to_relements(R, [-v for v in zf], prev_rank)):
                if x:
                    entries[(q, p)] = x
            fcols.append(FreeTerm(R, prev_rank).span_images(Matrix.from_columns(field, [[-v for v in zf]], fp_dim)) if fp_dim else None)
            ccols.append(ci.span_images(Matrix.from_columns(field, [zc], ci.dim)) if ci.dim else None)
        rdiffs.append(entries)
        if fp_dim:
            kd[i] = hcat(field, fcols, fp_dim) if r else Matrix.zeros(field, fp_dim, 0)
        else:
            kd[i] = Matrix.zeros(field, 0, r * n)
        maps[i] = hcat(field, ccols, ci.dim) if (r and ci.dim) else Matrix.zeros(field, ci.dim, r * n)
        if r == 0 and i > c.top:
            complete = True
            ranks.pop()
            rdiffs.pop()
            break
    if complete:
        valid = c.valid_through
    else:
        valid = min(c.valid_through, top - 1)
    fc = FreeComplex(R, lo, ranks, rdiffs, valid)
    for i in list(kd):
        if lo < i <= fc.top:
            fc._kcache[i] = kd[i]
    return Replacement(fc, {i: m for i, m in maps.items() if i <= fc.top}, c)


def _apply_factor_element(term: Term, f: int, x: dict, V: Matrix) -> Matrix:
    out = Matrix.zeros(term.field, term.dim, V.cols)
    for (_, t), coeff in x.items():
        out = out + term.apply_factor(f, t, V).scale(coeff)
    return out


def _choose_generators(cone: Term, Z: Matrix, current: Matrix, cur_rank: int, target: int, split: bool, rng):
    field = cone.field
    gens = []
    nz = Z.cols
    if split:
        # R/rad = k: any lift of a basis of Z / current is a minimal generating set
        aug = hcat(field, [current, Z], cone.dim)
        from .linalg import rref

        _, pivots, _ = rref(aug)
        for pc in pivots:
            if pc >= current.cols:
                gens.append(Z.submatrix(range(Z.rows), [pc - current.cols]))
        return gens
    span = current
    candidates = []
    for _ in range(2 * nz + 4):
        coeffs = [[rng.randint(-97, 97)] for _ in range(nz)]
        candidates.append(Z @ Matrix._trusted(field, coeffs, nz, 1))
    candidates += [Z.submatrix(range(Z.rows), [j]) for j in range(nz)]
    for z in candidates:
        if cur_rank >= target:
            break
        test = hcat(field, [span, z], cone.dim)
        if rank(test) == cur_rank:
            continue
        gens.append(z)
        span = hcat(field, [span, cone.span_images(z)], cone.dim)
        cur_rank = rank(span)
    return gens


@dataclass(eq=False)
class FreeResolution:
    """Free resolution of a module, truncated at ``cutoff``."""

    algebra: Algebra
    module: Module
    complex: FreeComplex
    augmentation: Matrix
    cutoff: int

    @property
    def ranks(self) -> list[int]:
        out = list(self.complex.ranks)
        return out + [0] * (self.cutoff + 1 - len(out))

    @property
    def differentials(self) -> list[dict]:
        return self.complex.diffs

    def kmatrix(self, i: int) -> Matrix:
        return self.complex.kmatrix(i)


def free_resolution(m: Module, cutoff: int, seed: int = 0) -> FreeResolution:
    """Minimal free resolution ``F_cutoff -> ... -> F_0 -> m``."""
    if cutoff < 0:
        raise ValueError("cutoff must be >= 0")
    rep = free_replacement(ChainComplex.concentrated(m), cutoff, seed=seed)
    aug = rep.maps.get(0, Matrix.zeros(m.field, m.dim, 0))
    return FreeResolution(m.algebra, m, rep.free, aug, cutoff)


# -- operations on free complexes --------------------------------------------------

def _concat_elements(x: dict, y: dict) -> dict:
    return {a + b: c * d for a, c in x.items() for b, d in y.items()}


def external_free(x: FreeComplex, y: FreeComplex, top: int | None = None) -> FreeComplex:
    """``x (x)_k y`` over the concatenated algebra."""
    R1, R2 = x.algebra, y.algebra
    R = from_factors(R1.field, R1.factors + R2.factors)
    u1, u2 = R1.unit_sparse, R2.unit_sparse
    lo = x.lo + y.lo
    hi = x.top + y.top
    if top is not None:
        hi = min(hi, top)
    index = {}
    ranks = []
    for d in range(lo, hi + 1):
        k = 0
        for i in range(x.lo, x.top + 1):
            j = d - i
            if not (y.lo <= j <= y.top):
                continue
            for p in range(x.rank_at(i)):
                for q in range(y.rank_at(j)):
                    index[(i, p, j, q)] = k
                    k += 1
        ranks.append(k)
    diffs = [{}]
    for d in range(lo + 1, hi + 1):
        entries = {}
        for (i, p, j, q), col in index.items():
            if i + j != d:
                continue
            for (p2, pp), m in x.diff(i).items():
                if pp == p:
                    row = index[(i - 1, p2, j, q)]
                    entries[(row, col)] = _concat_elements(m, u2)
            sign = -1 if i % 2 else 1
            for (q2, qq), m in y.diff(j).items():
                if qq == q:
                    row = index[(i, p, j - 1, q2)]
                    e = _concat_elements(u1, m)
                    entries[(row, col)] = {k: sign * v for k, v in e.items()}
        diffs.append(entries)
    valid = min(x.valid_through + y.lo, y.valid_through + x.lo)
    if hi < x.top + y.top:
        valid = min(valid, hi - 1)
    return FreeComplex(R, lo, ranks, diffs, valid)


def permute_free(x: FreeComplex, order: Sequence[int]) -> FreeComplex:
    """New factor ``k`` is old factor ``order[k]``."""
    R = from_factors(x.algebra.field, [x.algebra.factors[i] for i in order])
    diffs = []
    for entries in x.diffs:
        diffs.append({key: {tuple(mi[i] for i in order): c for mi, c in e.items()} for key, e in entries.items()})
    return FreeComplex(R, x.lo, list(x.ranks), diffs, x.valid_through)


# -- framing over a middle algebra --------------------------------------------------

@dataclass(eq=False)
class FramedComplex:
    """A complex free over ``middle`` with an explicit basis in every degree.

    ``diffs[k]`` and ``other_action[k][f][t]`` are dicts ``(row, col) -> element
    of middle`` describing, in the chosen bases, the differential out of degree
    ``lo + k`` and the action of basis element ``t`` of the ``f``-th
    non-middle factor.
    """

    middle: Algebra
    other: tuple
    lo: int
    ranks: list
    diffs: list
    other_action: list
    valid_through: float = math.inf

    @property
    def top(self) -> int:
        return self.lo + len(self.ranks) - 1

    def rank_at(self, i):
        return self.ranks[i - self.lo] if self.lo <= i <= self.top else 0

    def diff(self, i):
        return self.diffs[i - self.lo] if self.lo < i <= self.top else {}


def frame_free(x: FreeComplex, mid: Sequence[int]) -> FramedComplex:
    """Frame a free ``R``-complex over the factors ``mid`` of ``R``."""
    R = x.algebra
    mid = list(mid)
    oth = [f for f in range(len(R.factors)) if f not in mid]
    B = from_factors(R.field, [R.factors[f] for f in mid])
    O = from_factors(R.field, [R.factors[f] for f in oth])
    no = O.dim
    ub = B.unit_sparse
    field = R.field
    diffs = []
    actions = []
    for k, r in enumerate(x.ranks):
        i = x.lo + k
        entries = {}
        for (q, p), m in x.diff(i).items():
            for alpha in range(no):
                am = O.multi(alpha)
                for mi, c in m.items():
                    o = tuple(mi[f] for f in oth)
                    beta = tuple(mi[f] for f in mid)
                    for o2, c2 in O.mul_multi(am, o).items():
                        key = (q * no + O.index(o2), p * no + alpha)
                        acc = entries.setdefault(key, {})
                        acc[beta] = acc.get(beta, field.zero) + c * c2
        diffs.append({key: {b: v for b, v in e.items() if v != 0} for key, e in entries.items()})
        act = []
        for f, fac in enumerate(O.factors):
            per_t = []
            for t in range(fac.dim):
                entries = {}
                for p in range(r):
                    for alpha in range(no):
                        am = O.multi(alpha)
                        for k2, c in fac._prod[t][am[f]]:
                            o2 = am[:f] + (k2,) + am[f + 1:]
                            entries[(p * no + O.index(o2), p * no + alpha)] = {b: c * v for b, v in ub.items()}
                per_t.append(entries)
            act.append(per_t)
        actions.append(act)
    ranks = [r * no for r in x.ranks]
    return FramedComplex(B, O.factors, x.lo, ranks, diffs, actions, x.valid_through)


def frame_complex(c: ChainComplex, mid: Sequence[int], seed: int = 0) -> FramedComplex | None:
    """Frame a complex whose terms are free over the factors ``mid``; None if no frame is found."""
    R = c.algebra
    mid = list(mid)
    oth = [f for f in range(len(R.factors)) if f not in mid]
    B = from_factors(R.field, [R.factors[f] for f in mid])
    nb = B.dim
    frames = []
    for t in c.terms:
        fr = free_frame(t, mid, seed=seed)
        if fr is None:
            return None
        frames.append(fr)
    field = R.field

    def blocks_of(coords: Matrix, s_rows: int) -> dict:
        out = {}
        rows = coords.tolist()
        for col in range(coords.cols):
            for q in range(s_rows):
                x = {B.multi(b): rows[q * nb + b][col] for b in range(nb) if rows[q * nb + b][col] != 0}
                if x:
                    out[(q, col)] = x
        return out

    invs = [Phi.inverse() if Phi.rows else Phi for _, Phi in frames]
    ranks = [G.cols for G, _ in frames]
    diffs = []
    actions = []
    for k, t in enumerate(c.terms):
        i = c.lo + k
        G = frames[k][0]
        if k > 0 and G.cols and invs[k - 1].rows:
            diffs.append(blocks_of(invs[k - 1] @ (c.d(i) @ G), ranks[k - 1]))
        else:
            diffs.append({})
        act = []
        for f in oth:
            per_t = []
            for tt in range(R.factors[f].dim):
                if G.cols:
                    per_t.append(blocks_of(invs[k] @ t.apply_factor(f, tt, G), ranks[k]))
                else:
                    per_t.append({})
            act.append(per_t)
        actions.append(act)
    other = tuple(R.factors[f] for f in oth)
    return FramedComplex(B, other, c.lo, ranks, diffs, actions, c.valid_through)


class FramedTensorTerm(Term):
    """``B^s (x)_B inner``: ``s`` copies of ``inner``.

    Result factors are the framed complex's other factors followed by the kept
    inner factors (or the reverse when ``frame_first`` is False).
    """

    def __init__(self, inner: Term, s: int, inner_mid, keep, other, frame_action, frame_first: bool):
        self.inner = inner
        self.s = s
        self.inner_mid = tuple(inner_mid)
        self.keep = tuple(keep)
        self.frame_action = frame_action
        self.frame_first = frame_first
        kept = [inner.algebra.factors[p] for p in self.keep]
        facs = list(other) + kept if frame_first else kept + list(other)
        self.algebra = from_factors(inner.field, facs)
        self.dim = s * inner.dim
        nf = len(other)
        if frame_first:
            self._map = [("f", k) for k in range(nf)] + [("i", p) for p in self.keep]
        else:
            self._map = [("i", p) for p in self.keep] + [("f", k) for k in range(nf)]

    def apply_factor(self, f, t, V):
        kind, idx = self._map[f]
        d = self.inner.dim
        blocks = split_rows(V, [d] * self.s)
        if kind == "i":
            return stack_rows(self.field, [self.inner.apply_factor(idx, t, b) for b in blocks], V.cols)
        out = [None] * self.s
        for (q, p), beta in self.frame_action[idx][t].items():
            img = self.inner.apply_element(self.inner_mid, beta, blocks[p])
            out[q] = img if out[q] is None else out[q] + img
        zero = Matrix.zeros(self.field, d, V.cols)
        return stack_rows(self.field, [o if o is not None else zero for o in out], V.cols)


def framed_tensor(fr: FramedComplex, y: ChainComplex, y_mid: Sequence[int], keep: Sequence[int],
                  frame_first: bool, top: int) -> ChainComplex:
    """Total complex of ``fr (x)_B y`` through degree ``top``."""
    y_mid = list(y_mid)
    if tuple(y.algebra.factors[p] for p in y_mid) != fr.middle.factors:
        raise ComplexError("middle algebra mismatch")
    field = y.field
    lo = fr.lo + y.lo
    hi = min(top, fr.top + y.top)
    algebra = FramedTensorTerm(y.term(y.lo), 0, y_mid, keep, fr.other, None, frame_first).algebra
    terms = []
    layout = []  # per degree: list of (i, j, offset, size)
    for d in range(lo, hi + 1):
        parts = []
        comps = []
        off = 0
        for i in range(fr.lo, fr.top + 1):
            j = d - i
            if not (y.lo <= j <= y.top):
                continue
            s = fr.rank_at(i)
            action = fr.other_action[i - fr.lo]
            t = FramedTensorTerm(y.term(j), s, y_mid, keep, fr.other, action, frame_first)
            parts.append(t)
            comps.append((i, j, off, t.dim))
            off += t.dim
        if not parts:
            terms.append(ZeroTerm(algebra))
        elif len(parts) == 1:
            terms.append(parts[0])
        else:
            terms.append(DirectSumTerm(tuple(parts)))
        layout.append(comps)
    diffs = {}
    for d in range(lo + 1, hi + 1):
        src = layout[d - lo]
        tgt = {(i, j): (off, size) for i, j, off, size in layout[d - 1 - lo]}
        blocks = []
        for i, j, off, size in src:
            ydim = y.dim(j)
            s = fr.rank_at(i)
            # framed differential: block (q, p) acts by beta_qp on y_j
            if (i - 1, j) in tgt:
                toff, _ = tgt[(i - 1, j)]
                sign = 1 if frame_first or j % 2 == 0 else -1
                inner = y.term(j)
                for (q, p), beta in fr.diff(i).items():
                    m = inner.element_matrix(y_mid, beta)
                    blocks.append((toff + q * ydim, off + p * ydim, m if sign == 1 else -m))
            if (i, j - 1) in tgt:
                toff, _ = tgt[(i, j - 1)]
                sign = -1 if frame_first and i % 2 else 1
                dy = y.d(j)
                tdim = y.dim(j - 1)
                for p in range(s):
                    blocks.append((toff + p * tdim, off + p * ydim, dy if sign == 1 else -dy))
        ndim = terms[d - 1 - lo].dim
        diffs[d] = assemble(field, ndim, terms[d - lo].dim, blocks)
    valid = min(fr.valid_through + y.lo, y.valid_through + fr.lo)
    if hi < fr.top + y.top:
        valid = min(valid, hi - 1)
    return ChainComplex(algebra, lo, terms, diffs, valid)


def external_complex(x: ChainComplex, y: ChainComplex, top: int) -> ChainComplex:
    """``x (x)_k y`` over the concatenated algebra, through degree ``top``."""
    fr = frame_complex(x, [])
    return framed_tensor(fr, y, [], range(len(y.algebra.factors)), True, top)


def derived_tensor_middle(x: FreeComplex, y: FreeComplex, na: int, nb: int) -> FreeComplex:
    """``x (x)_B y`` for ``x`` free over ``A (x) B`` and ``y`` free over ``B (x) C``.

    ``na``/``nb`` count the simple factors of ``A`` and ``B``. The result is free
    over ``A (x) C`` with basis ``e_p (x) f_q (x) beta`` for ``beta`` running
    over a basis of ``B``.
    """
    R1, R2 = x.algebra, y.algebra
    field = R1.field
    A = from_factors(field, R1.factors[:na])
    B = from_factors(field, R1.factors[na:])
    if R2.factors[:nb] != B.factors:
        raise ComplexError("middle algebra mismatch")
    C = from_factors(field, R2.factors[nb:])
    R = from_factors(field, A.factors + C.factors)
    ua, uc = A.unit_sparse, C.unit_sparse
    nbd = B.dim
    lo = x.lo + y.lo
    hi = x.top + y.top
    index = {}
    ranks = []
    for d in range(lo, hi + 1):
        k = 0
        for i in range(x.lo, x.top + 1):
            j = d - i
            if not (y.lo <= j <= y.top):
                continue
            for p in range(x.rank_at(i)):
                for q in range(y.rank_at(j)):
                    for b in range(nbd):
                        index[(i, p, j, q, b)] = k
                        k += 1
        ranks.append(k)
    diffs = [{}]
    for d in range(lo + 1, hi + 1):
        entries = {}

        def add(row, col, elem):
            acc = entries.setdefault((row, col), {})
            for mi, c in elem.items():
                acc[mi] = acc.get(mi, field.zero) + c

        for (i, p, j, q, b), col in index.items():
            if i + j != d:
                continue
            bm = B.multi(b)
            for (p2, pp), m in x.diff(i).items():
                if pp != p:
                    continue
                for mi, c in m.items():
                    a_part, b_part = mi[:na], mi[na:]
                    for b2, c2 in B.mul_multi(b_part, bm).items():
                        row = index[(i - 1, p2, j, q, B.index(b2))]
                        add(row, col, {a_part + u: c * c2 * cu for u, cu in uc.items()})
            sign = -1 if i % 2 else 1
            for (q2, qq), m in y.diff(j).items():
                if qq != q:
                    continue
                for mi, c in m.items():
                    b_part, c_part = mi[:nb], mi[nb:]
                    for b2, c2 in B.mul_multi(b_part, bm).items():
                        row = index[(i, p, j - 1, q2, B.index(b2))]
                        add(row, col, {u + c_part: sign * c * c2 * cu for u, cu in ua.items()})
        diffs.append({k: {mi: c for mi, c in v.items() if c != 0} for k, v in entries.items()})
    valid = min(x.valid_through + y.lo, y.valid_through + x.lo)
    return FreeComplex(R, lo, ranks, diffs, valid)


# -- Tor and Ext ------------------------------------------------------------------

def tor(m: Module, n: Module, cutoff: int, seed: int = 0):
    """``(GradedDims, [(degree, Module)])`` for ``Tor^R_*(m, n)`` in degrees ``0..cutoff``."""
    if m.algebra != n.algebra:
        from .errors import AlgebraMismatch

        raise AlgebraMismatch("Tor of modules over different algebras")
    res = free_resolution(m, cutoff + 1, seed=seed)
    allpos = range(len(m.algebra.factors))
    fr = frame_free(res.complex, allpos)
    tot = framed_tensor(fr, ChainComplex.concentrated(n), allpos, allpos, True, cutoff + 1)
    hs = homology(tot, range(0, cutoff + 1))
    dims = GradedDims({i: h.dim for i, h in hs}, tot.valid_through)
    return dims, hs


def ext_dims(m: Module, n: Module, cutoff: int, seed: int = 0) -> GradedDims:
    """``dim Ext^i_R(m, n)`` for ``i = 0..cutoff``."""
    from .errors import AlgebraMismatch

    if m.algebra != n.algebra:
        raise AlgebraMismatch("Ext of modules over different algebras")
    R = m.algebra
    res = free_resolution(m, cutoff + 1, seed=seed)
    F = res.complex
    allpos = tuple(range(len(R.factors)))
    nd = n.dim
    field = R.field

    def delta(i):
        # Hom(F_i, n) = n^{r_i} -> Hom(F_{i+1}, n) = n^{r_{i+1}}
        r0, r1 = F.rank_at(i), F.rank_at(i + 1)
        blocks = []
        for (q, p), x in F.diff(i + 1).items():
            blocks.append((p * nd, q * nd, n.element_matrix(allpos, x)))
        return assemble(field, r1 * nd, r0 * nd, blocks)

    dims = {}
    for i in range(0, cutoff + 1):
        dim_i = F.rank_at(i) * nd
        rk_out = rank(delta(i)) if dim_i else 0
        rk_in = rank(delta(i - 1)) if i > 0 and dim_i else 0
        dims[i] = dim_i - rk_out - rk_in
    return GradedDims(dims, min(F.valid_through, cutoff))
