import math
import random

import pytest
from hypothesis import given, settings, strategies as st

from frobkit.algebra import ground, multiplication_map, tensor_algebras
from frobkit.complexes import (
    ChainComplex,
    FreeComplex,
    GradedDims,
    derived_tensor_middle,
    external_complex,
    frame_complex,
    framed_tensor,
    free_replacement,
    free_resolution,
    homology,
    homology_dims,
    tor,
)
from frobkit.errors import ComplexError, TruncationExhausted
from frobkit.linalg import QQ, Matrix, rank
from frobkit.modules import (
    free_module,
    module_iso,
    regular_module,
    restrict,
    tensor_over_middle,
)

from builders import CUBE, DUAL, QXQ, RATIONALS, SMALL, SPLIT, SQRT2, random_complex, random_module
from oracles import dual_numbers_hochschild, dual_numbers_periodic_resolution_exact

algebras = st.sampled_from(SMALL)
seeds = st.integers(0, 10**6)


def delta(a):
    return restrict(multiplication_map(a, 2), regular_module(a))


def assert_exact(res):
    """Rank bookkeeping: the truncated resolution is exact at every interior spot."""
    F = res.complex
    n = res.algebra.dim
    assert rank(res.augmentation) == res.module.dim
    # at F_0: image of d_1 equals kernel of the augmentation
    d1 = F.kmatrix(1)
    assert F.rank_at(0) * n - res.module.dim == rank(d1)
    assert (res.augmentation @ d1).is_zero()
    for i in range(1, F.top):
        assert F.rank_at(i) * n == rank(F.kmatrix(i)) + rank(F.kmatrix(i + 1))


# -- graded dims and homology -----------------------------------------------------

def test_graded_dims_truncation():
    g = GradedDims({0: 2, 1: 1}, valid_through=1)
    assert g[0] == 2 and g == {0: 2, 1: 1}
    with pytest.raises(TruncationExhausted) as e:
        g[2]
    assert e.value.requested == 2 and e.value.valid_through == 1


def test_homology_with_zero_differentials_returns_terms():
    m = regular_module(DUAL)
    c = ChainComplex(DUAL, 0, [m, m], {})
    hs = homology(c)
    assert [h.dim for _, h in hs] == [2, 2]
    assert all(module_iso(h, m) for _, h in hs)


def test_identity_complex_is_acyclic():
    m = regular_module(CUBE)
    c = ChainComplex(CUBE, 0, [m, m], {1: Matrix.identity(QQ, 3)})
    assert homology_dims(c, 1) == {}


def test_square_zero_is_enforced():
    m = regular_module(RATIONALS)
    one = Matrix.identity(QQ, 1)
    with pytest.raises(ComplexError):
        ChainComplex(RATIONALS, 0, [m, m, m], {1: one, 2: one})


def test_check_linear_catches_non_module_maps():
    m = regular_module(DUAL)
    c = ChainComplex(DUAL, 0, [m, m], {1: Matrix.from_rows(QQ, [[1, 0], [0, 0]])})
    with pytest.raises(ComplexError):
        c.check_linear()


def test_periodic_dual_complex_truncated():
    res = free_resolution(delta(DUAL), 5)
    fr = res.complex.as_chain_complex()
    total = framed_tensor(frame_complex(fr, [0, 1]), ChainComplex.concentrated(delta(DUAL)), [0, 1], [], True, 5)
    assert total.algebra == ground(QQ)
    assert homology_dims(total, 4) == dual_numbers_hochschild(4)


# -- resolutions ------------------------------------------------------------------

def test_free_module_resolution():
    res = free_resolution(free_module(SQRT2, 3), 4)
    assert res.ranks == [3, 0, 0, 0, 0]
    assert res.complex.valid_through == math.inf


def test_dual_diagonal_resolution_is_periodic():
    assert dual_numbers_periodic_resolution_exact(6)
    res = free_resolution(delta(DUAL), 4)
    assert res.ranks == [1, 1, 1, 1, 1]
    assert_exact(res)
    # differentials are x(x)1 - 1(x)x and x(x)1 + 1(x)x up to a scalar
    for i in range(1, 5):
        (entry,) = res.differentials[i].values()
        a, b = entry.get((1, 0), 0), entry.get((0, 1), 0)
        assert set(entry) <= {(1, 0), (0, 1)} and a != 0
        assert b == (-a if i % 2 else a)


def test_separable_diagonal_resolution():
    # the diagonal is projective but not free, so a free resolution cannot stop
    for a in (QXQ, SPLIT, SQRT2):
        res = free_resolution(delta(a), 4)
        assert res.ranks == [1, 1, 1, 1, 1]
        assert_exact(res)


@settings(max_examples=25, deadline=None)
@given(algebras, seeds)
def test_resolution_exactness(a, seed):
    m = random_module(a, random.Random(seed))
    res = free_resolution(m, 3)
    assert_exact(res)
    res.complex.check_square_zero()


# -- Tor ----------------------------------------------------------------------------

def test_tor_examples():
    s = tensor_algebras(DUAL, DUAL)[0]
    dims, hs = tor(delta(DUAL), delta(DUAL), 4)
    assert dims == dual_numbers_hochschild(4)
    assert dims.as_list(0, 4) == [2, 1, 1, 1, 1]
    assert all(h.algebra == s for _, h in hs)
    assert tor(delta(SPLIT), delta(SPLIT), 4)[0].as_list(0, 4) == [2, 0, 0, 0, 0]
    m = random_module(CUBE, random.Random(3))
    assert tor(regular_module(CUBE), m, 2)[0] == {0: m.dim}


@settings(max_examples=20, deadline=None)
@given(algebras, seeds)
def test_tor_symmetry(a, seed):
    rng = random.Random(seed)
    m, n = random_module(a, rng), random_module(a, rng)
    assert tor(m, n, 3)[0] == tor(n, m, 3)[0]


@settings(max_examples=15, deadline=None)
@given(algebras, seeds, st.integers(1, 2))
def test_tor_vanishes_for_free(a, seed, r):
    n = random_module(a, random.Random(seed))
    dims, _ = tor(free_module(a, r), n, 3)
    assert dims == {0: r * n.dim}


@settings(max_examples=15, deadline=None)
@given(algebras, seeds)
def test_tor_zero_is_plain_tensor(a, seed):
    rng = random.Random(seed)
    m, n = random_module(a, rng), random_module(a, rng)
    k = ground(QQ)
    plain = tensor_over_middle(m, n, k, a, k)
    assert tor(m, n, 0)[0][0] == plain.dim


# -- free replacement ---------------------------------------------------------------

def test_free_complex_is_its_own_replacement():
    c = ChainComplex.concentrated(free_module(DUAL, 2))
    rep = free_replacement(c, 4)
    assert rep.free.ranks == [2] and rep.free.valid_through == math.inf


def test_contractible_two_term_complex():
    m = free_module(CUBE, 1)
    c = ChainComplex(CUBE, 0, [m, m], {1: Matrix.identity(QQ, 3)})
    rep = free_replacement(c, 3)
    assert homology_dims(rep.free.as_chain_complex(), 2, lo=0) == {}


def test_replacement_of_single_module_is_resolution():
    d = delta(DUAL)
    assert free_replacement(ChainComplex.concentrated(d), 4).free.ranks == free_resolution(d, 4).ranks


@settings(max_examples=20, deadline=None)
@given(algebras, seeds)
def test_replacement_preserves_homology(a, seed):
    c = random_complex(a, random.Random(seed))
    rep = free_replacement(c, c.top + 3)
    f = rep.free.as_chain_complex()
    f.check_linear()
    hc = dict(homology(c, range(0, c.top + 1)))
    hf = dict(homology(f, range(0, c.top + 1)))
    for i in hc:
        assert module_iso(hc[i], hf[i]), i


# -- derived tensor over the middle -------------------------------------------------

def test_derived_tensor_middle_examples():
    q = free_resolution(delta(RATIONALS), 3).complex
    out = derived_tensor_middle(q, q, 0, 0)
    assert homology_dims(out.as_chain_complex(), 2, lo=0) == {0: 1}
    # Hochschild: both factors of S are the middle
    x = free_resolution(delta(DUAL), 5).complex
    hh = derived_tensor_middle(x, x, 0, 2).as_chain_complex()
    assert homology_dims(hh, 4, lo=0) == dual_numbers_hochschild(4)
    # over the middle copy of A the diagonal is the unit for composition
    comp = derived_tensor_middle(x, x, 1, 1).as_chain_complex()
    assert homology_dims(comp, 3, lo=0) == {0: 2}
    assert module_iso(homology(comp, [0])[0][1], delta(DUAL))


def test_derived_tensor_of_free_modules():
    ab = tensor_algebras(DUAL, SQRT2)[0]
    bc = tensor_algebras(SQRT2, CUBE)[0]
    x = FreeComplex(ab, 0, [2], [{}])
    y = FreeComplex(bc, 0, [3], [{}])
    out = derived_tensor_middle(x, y, 1, 1)
    assert out.ranks == [2 * 3 * SQRT2.dim]


@settings(max_examples=10, deadline=None)
@given(st.sampled_from([DUAL, QXQ, SQRT2]), seeds)
def test_one_sided_free_reproduces_plain_tensor(a, seed):
    # x = free rank 1 over A (x) B, y = a B (x) C-module resolved
    rng = random.Random(seed)
    bc = tensor_algebras(a, a)[0]
    n = random_module(bc, rng, max_dim=6)
    y = free_resolution(n, 3).complex
    x = FreeComplex(tensor_algebras(DUAL, a)[0], 0, [1], [{}])
    out = derived_tensor_middle(x, y, 1, 1).as_chain_complex()
    plain = tensor_over_middle(regular_module(x.algebra), n, DUAL, a, a)
    assert homology_dims(out, 2, lo=0) == {0: plain.dim}


def test_external_complex_sign_convention():
    m = regular_module(DUAL)
    x_eps = Matrix.from_rows(QQ, [[0, 0], [1, 0]])
    c = ChainComplex(DUAL, 0, [m, m], {1: x_eps})
    e = external_complex(c, c, 4)
    e.check_linear()
    # H(c) = k in degrees 0 and 1 (as vector spaces): Kunneth gives 1, 2, 1
    assert homology_dims(e, 2, lo=0) == {0: 1, 1: 2, 2: 1}
