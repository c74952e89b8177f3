"""Kernels between algebras and their composition.

A kernel ``A -> B`` is a bounded complex of ``A (x) B``-modules (source factors
first). Composition is the derived tensor product over the middle algebra and
is written in diagrammatic order: ``compose(k1, k2)`` runs ``k1`` first, as in
the bordism language's ``;``.

Derived tensors are formed without resolving both sides: whichever side is
already free over the middle algebra is framed directly, otherwise one side is
replaced by its free normal form. Kernels built from the canonical generators
("diagonal" kernels) know their normal form in closed form: an external
product of resolutions of ``P`` over ``P^(x)m`` for the simple factors ``P``.

Over the base field a kernel ``k -> k`` is just a complex of vector spaces; its
homology is the value of the kernel's integral transform on the point, which
is how closed surfaces are evaluated.
"""
from __future__ import annotations

import functools
import math
from dataclasses import dataclass, field as dc_field
from enum import Enum
from typing import Sequence

from .algebra import (
    Algebra,
    FieldVerdict,
    SimpleAlgebra,
    decompose,
    from_factors,
    ground,
    is_field,
    is_reduced,
    tensor_algebras,
)
from .complexes import (
    ChainComplex,
    FreeComplex,
    GradedDims,
    external_complex,
    external_free,
    frame_complex,
    frame_free,
    framed_tensor,
    free_replacement,
    free_resolution,
    homology,
    homology_dims,
    ext_dims,
    permute_free,
)
from .errors import AlgebraMismatch, FieldMismatch, TruncationExhausted
from .linalg import Field
from .modules import IsoVerdict, Module, diagonal_module, ground_module, module_iso, regular_module

DEFAULT_CUTOFF = 4


# -- normal forms of diagonal kernels -------------------------------------------------

_MULTI_CACHE: dict = {}


def multidiagonal_resolution(p: SimpleAlgebra, m: int, top: int) -> FreeComplex:
    """Resolution of ``p`` over ``p^(x)m`` (multiplication action) through degree ``top``."""
    key = (p, m)
    have = _MULTI_CACHE.get(key)
    if have is not None and (have.top >= top or have.valid_through == math.inf):
        return have.truncated(top)
    res = free_resolution(diagonal_module([p], [0] * m), top).complex
    _MULTI_CACHE[key] = res
    return res


def diagonal_normal_form(space: Sequence[SimpleAlgebra], assign: Sequence[int], top: int) -> FreeComplex:
    field = space[0].field
    order = []  # ambient positions grouped by slot
    nf = None
    for j, p in enumerate(space):
        members = [k for k, a in enumerate(assign) if a == j]
        order.extend(members)
        piece = multidiagonal_resolution(p, len(members), top)
        nf = piece if nf is None else external_free(nf, piece, top)
    perm = [order.index(k) for k in range(len(assign))]
    out = permute_free(nf, perm)
    if out.algebra != from_factors(field, [space[a] for a in assign]):
        raise AssertionError("normal form algebra mismatch")
    return out


def _ground_free(field: Field) -> FreeComplex:
    return FreeComplex(ground(field), 0, [1], [{}], math.inf)


# -- kernels ------------------------------------------------------------------------

@dataclass(eq=False)
class Kernel:
    source: Algebra
    target: Algebra
    body: ChainComplex
    label: str = ""
    diag: tuple | None = None  # (space, assign) for diagonal kernels
    _nf: dict = dc_field(default_factory=dict, repr=False)

    def __post_init__(self):
        want = from_factors(self.source.field, self.source.factors + self.target.factors)
        if self.body.algebra != want:
            raise AlgebraMismatch("kernel body is not over source (x) target")

    @property
    def field(self) -> Field:
        return self.source.field

    @property
    def algebra(self) -> Algebra:
        return self.body.algebra

    @property
    def valid_through(self) -> float:
        return self.body.valid_through

    def __repr__(self):
        return f"Kernel<{self.label or '?'}: dim {self.source.dim} -> dim {self.target.dim}>"

    def normal_form(self, top: int) -> FreeComplex:
        """A free complex quasi-isomorphic to the body, certified through ``top - 1``."""
        nf = self._nf.get(top)
        if nf is None:
            if self.diag is not None:
                space, assign = self.diag
                nf = diagonal_normal_form(space, assign, top) if space else _ground_free(self.field)
            else:
                nf = free_replacement(self.body.truncated(top), top).free
            self._nf[top] = nf
        return nf

    def homology_dims(self, cutoff: int) -> GradedDims:
        return homology_dims(self.body, cutoff, lo=min(0, self.body.lo))

    def homology(self, cutoff: int) -> list:
        return homology(self.body, range(min(0, self.body.lo), cutoff + 1))


def diagonal_kernel(source: Algebra, target: Algebra, space, assign, label: str) -> Kernel:
    field = source.field
    if not space:
        body = ChainComplex.concentrated(ground_module(ground(field)))
    else:
        body = ChainComplex.concentrated(diagonal_module(space, assign, label=label))
    return Kernel(source, target, body, label, (tuple(space), tuple(assign)))


def identity_kernel(a: Algebra) -> Kernel:
    s = len(a.factors)
    return diagonal_kernel(a, a, a.factors, list(range(s)) * 2, "cyl")


def mult_kernel(a: Algebra) -> Kernel:
    s = len(a.factors)
    aa = from_factors(a.field, a.factors * 2)
    return diagonal_kernel(aa, a, a.factors, list(range(s)) * 3, "pants")


def comult_kernel(a: Algebra) -> Kernel:
    s = len(a.factors)
    aa = from_factors(a.field, a.factors * 2)
    return diagonal_kernel(a, aa, a.factors, list(range(s)) * 3, "copants")


def unit_kernel(a: Algebra) -> Kernel:
    return diagonal_kernel(ground(a.field), a, a.factors, list(range(len(a.factors))), "cup")


def counit_kernel(a: Algebra) -> Kernel:
    return diagonal_kernel(a, ground(a.field), a.factors, list(range(len(a.factors))), "cap")


def swap_kernel(a: Algebra, b: Algebra) -> Kernel:
    sa, sb = len(a.factors), len(b.factors)
    ia, ib = list(range(sa)), list(range(sa, sa + sb))
    ab = from_factors(a.field, a.factors + b.factors)
    ba = from_factors(a.field, b.factors + a.factors)
    return diagonal_kernel(ab, ba, a.factors + b.factors, ia + ib + ib + ia, "swap")


def _check_field(*algs):
    f = algs[0].field
    for a in algs[1:]:
        if a.field != f:
            raise FieldMismatch(f"{a.field.name} vs {f.name}")


def external(k1: Kernel, k2: Kernel) -> Kernel:
    """``k1 [x] k2 : A (x) C -> B (x) D``; body factors reordered to (A, C, B, D)."""
    _check_field(k1.source, k2.source)
    na, nb = len(k1.source.factors), len(k1.target.factors)
    nc, nd = len(k2.source.factors), len(k2.target.factors)
    src = from_factors(k1.field, k1.source.factors + k2.source.factors)
    tgt = from_factors(k1.field, k1.target.factors + k2.target.factors)
    label = f"({k1.label} | {k2.label})"
    if k1.diag is not None and k2.diag is not None:
        s1, a1 = k1.diag
        s2, a2 = k2.diag
        off = len(s1)
        a2s = [x + off for x in a2]
        assign = list(a1[:na]) + a2s[:nc] + list(a1[na:]) + a2s[nc:]
        return diagonal_kernel(src, tgt, tuple(s1) + tuple(s2), assign, label)
    x, y = k1.body, k2.body
    body = external_complex(x, y, x.top + y.top)
    # concatenated order is A, B, C, D
    A = list(range(na))
    B = list(range(na, na + nb))
    C = list(range(na + nb, na + nb + nc))
    D = list(range(na + nb + nc, na + nb + nc + nd))
    body = body.permuted(A + C + B + D)
    return Kernel(src, tgt, body, label)


def compose(k1: Kernel, k2: Kernel, cutoff: int = DEFAULT_CUTOFF) -> Kernel:
    """Derived composite ``k1`` then ``k2``, certified through degree ``cutoff``."""
    if k1.target.factors != k2.source.factors or k1.field != k2.field:
        raise AlgebraMismatch(f"cannot compose {k1!r} with {k2!r}")
    top = cutoff + 1
    na, nb = len(k1.source.factors), len(k1.target.factors)
    nc = len(k2.target.factors)
    mid1 = list(range(na, na + nb))
    mid2 = list(range(nb))
    keep1 = list(range(na))
    keep2 = list(range(nb, nb + nc))
    x = k1.body.truncated(top)
    y = k2.body.truncated(top)
    label = f"{k1.label} ; {k2.label}"

    def done(body):
        return Kernel(k1.source, k2.target, body, label)

    fr = frame_complex(y, mid2)
    if fr is not None:
        return done(framed_tensor(fr, x, mid1, keep1, False, top))
    fr = frame_complex(x, mid1)
    if fr is not None:
        return done(framed_tensor(fr, y, mid2, keep2, True, top))
    # resolve one side; diagonal kernels have cheap normal forms
    if k2.diag is not None or (k1.diag is None and _size(y) <= _size(x)):
        fr = frame_free(k2.normal_form(top), mid2)
        return done(framed_tensor(fr, x, mid1, keep1, False, top))
    fr = frame_free(k1.normal_form(top), mid1)
    return done(framed_tensor(fr, y, mid2, keep2, True, top))


def _size(c: ChainComplex) -> int:
    return sum(t.dim for t in c.terms)


# -- comparison up to quasi-isomorphism -------------------------------------------------

class Status(Enum):
    PASS = "pass"
    FAIL = "fail"
    INCONCLUSIVE = "inconclusive"


@dataclass
class Comparison:
    status: Status
    dims_left: dict
    dims_right: dict
    degree: int | None = None  # first failing / inconclusive degree
    reason: str = ""
    witnesses: dict = dc_field(default_factory=dict, repr=False)


def compare_kernels(k1: Kernel, k2: Kernel, cutoff: int) -> Comparison:
    """Degreewise comparison of homology modules through ``cutoff``."""
    if k1.algebra != k2.algebra:
        raise AlgebraMismatch("kernels have different source/target algebras")
    for k in (k1, k2):
        if k.valid_through < cutoff:
            raise TruncationExhausted(cutoff, k.valid_through)
    lo = min(0, k1.body.lo, k2.body.lo)
    h1 = dict(homology(k1.body, range(lo, cutoff + 1)))
    h2 = dict(homology(k2.body, range(lo, cutoff + 1)))
    d1 = {i: h.dim for i, h in h1.items()}
    d2 = {i: h.dim for i, h in h2.items()}
    witnesses = {}
    inconclusive = None
    for i in range(lo, cutoff + 1):
        if d1[i] != d2[i]:
            return Comparison(Status.FAIL, d1, d2, i, f"H_{i} dimensions {d1[i]} != {d2[i]}")
        r = module_iso(h1[i], h2[i])
        if r.verdict is IsoVerdict.NO:
            return Comparison(Status.FAIL, d1, d2, i, f"H_{i} not isomorphic: {r.reason}")
        if r.verdict is IsoVerdict.UNKNOWN:
            inconclusive = inconclusive if inconclusive is not None else i
            continue
        witnesses[i] = r.witness
    if inconclusive is not None:
        return Comparison(Status.INCONCLUSIVE, d1, d2, inconclusive, "isomorphism undecided", witnesses)
    return Comparison(Status.PASS, d1, d2, None, "", witnesses)


# -- the diagonal Frobenius object -----------------------------------------------------

@dataclass
class FrobeniusData:
    algebra: Algebra
    mult: Kernel
    comult: Kernel
    unit: Kernel
    counit: Kernel

    @classmethod
    def diagonal(cls, a: Algebra) -> "FrobeniusData":
        return cls(a, mult_kernel(a), comult_kernel(a), unit_kernel(a), counit_kernel(a))


AXIOMS = (
    "left_unit",
    "right_unit",
    "associativity",
    "left_counit",
    "right_counit",
    "coassociativity",
    "commutativity",
    "cocommutativity",
    "frobenius_left",
    "frobenius_right",
)


def axiom_sides(data: FrobeniusData, name: str, cutoff: int) -> tuple[Kernel, Kernel]:
    a = data.algebra
    mu, de, eta, eps = data.mult, data.comult, data.unit, data.counit
    cyl = identity_kernel(a)
    sw = swap_kernel(a, a)

    def c(*ks):
        out = ks[0]
        for k in ks[1:]:
            out = compose(out, k, cutoff)
        return out

    x = external
    sides = {
        "left_unit": lambda: (c(x(eta, cyl), mu), cyl),
        "right_unit": lambda: (c(x(cyl, eta), mu), cyl),
        "associativity": lambda: (c(x(mu, cyl), mu), c(x(cyl, mu), mu)),
        "left_counit": lambda: (c(de, x(eps, cyl)), cyl),
        "right_counit": lambda: (c(de, x(cyl, eps)), cyl),
        "coassociativity": lambda: (c(de, x(de, cyl)), c(de, x(cyl, de))),
        "commutativity": lambda: (c(sw, mu), mu),
        "cocommutativity": lambda: (c(de, sw), de),
        "frobenius_left": lambda: (c(x(de, cyl), x(cyl, mu)), c(mu, de)),
        "frobenius_right": lambda: (c(x(cyl, de), x(mu, cyl)), c(mu, de)),
    }
    return sides[name]()


def verify_frobenius(a: Algebra, cutoff: int = 3, data: FrobeniusData | None = None,
                     axioms: Sequence[str] = AXIOMS) -> dict:
    """``{axiom: Comparison}`` for the Frobenius algebra object axioms."""
    data = data or FrobeniusData.diagonal(a)
    out = {}
    for name in axioms:
        left, right = axiom_sides(data, name, cutoff)
        out[name] = compare_kernels(left, right, cutoff)
    return out


def corrupted_mult_kernel(a: Algebra) -> Kernel:
    """A wrong multiplication: the output copy is disconnected from the inputs."""
    s = len(a.factors)
    aa = from_factors(a.field, a.factors * 2)
    assign = list(range(s)) * 2 + [s + i for i in range(s)]
    return diagonal_kernel(aa, a, a.factors * 2, assign, "bad-pants")


# -- closed surfaces -------------------------------------------------------------------

def evaluate_closed_surface(a: Algebra, genus: int, cutoff: int = DEFAULT_CUTOFF) -> GradedDims:
    """Graded dimension of the state assigned to the closed genus-``genus`` surface.

    ``Delta (x)^L_S ... (x)^L_S Delta`` (``genus + 1`` copies, ``S = A (x) A``)
    viewed as a complex of vector spaces.
    """
    if genus < 0:
        raise ValueError("genus must be >= 0")
    top = cutoff + 1
    ident = identity_kernel(a)
    allpos = list(range(len(ident.algebra.factors)))
    fr = frame_free(ident.normal_form(top), allpos)
    x = ident.body
    for _ in range(genus):
        x = framed_tensor(fr, x, allpos, allpos, True, top)
    return homology_dims(x, cutoff, lo=0)


def hochschild_dims(a: Algebra, cutoff: int = DEFAULT_CUTOFF) -> GradedDims:
    return evaluate_closed_surface(a, 1, cutoff)


# -- the no-go obstruction ----------------------------------------------------------------

class Verdict(Enum):
    FIELD_POINT = "FieldPoint"
    DIRECT_SUM_OF_POINTS = "DirectSumOfPoints"
    NON_REDUCED_OUT_OF_SCOPE = "NonReducedOutOfScope"
    OBSTRUCTION_VANISHES = "ObstructionVanishes"
    UNDETERMINED = "Undetermined"


@dataclass
class ObstructionReport:
    algebra: Algebra
    reduced: bool
    blocks_found: int
    hom_diag_to_free_dims: GradedDims
    verdict: Verdict
    field_test: object = None


def diagonal_module_of(a: Algebra) -> Module:
    return identity_kernel(a).body.terms[0]


def no_go_check(a: Algebra, cutoff: int = 2) -> ObstructionReport:
    """Hom/Ext from the diagonal to the free rank-1 module, with the verdict table."""
    reduced = is_reduced(a)
    blocks = decompose(a)
    delta = diagonal_module_of(a)
    dims = ext_dims(delta, regular_module(delta.algebra), cutoff)
    ft = is_field(a)
    if not reduced:
        verdict = Verdict.NON_REDUCED_OUT_OF_SCOPE
    elif ft.verdict is FieldVerdict.TRUE:
        verdict = Verdict.FIELD_POINT
    elif len(blocks) >= 2:
        verdict = Verdict.DIRECT_SUM_OF_POINTS
    elif dims[0] == 0:
        verdict = Verdict.OBSTRUCTION_VANISHES
    else:
        verdict = Verdict.UNDETERMINED
    return ObstructionReport(a, reduced, len(blocks), dims, verdict, ft)
