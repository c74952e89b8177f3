import random

import pytest
from hypothesis import given, settings, strategies as st

from frobkit.algebra import multiplication_map, split_algebra, tensor_algebras, univariate_quotient
from frobkit.complexes import homology_dims
from frobkit.errors import AlgebraMismatch, FieldMismatch, TruncationExhausted
from frobkit.kernels import (
    FrobeniusData,
    Kernel,
    Status,
    Verdict,
    compare_kernels,
    comult_kernel,
    compose,
    corrupted_mult_kernel,
    counit_kernel,
    evaluate_closed_surface,
    external,
    identity_kernel,
    mult_kernel,
    no_go_check,
    swap_kernel,
    unit_kernel,
    verify_frobenius,
)
from frobkit.linalg import QQ, Field
from frobkit.modules import module_iso, regular_module, restrict

from builders import CUBE, DUAL, QXQ, RATIONALS, SQRT2, random_complex
from oracles import dual_numbers_hochschild

TINY = [RATIONALS, DUAL, QXQ, SQRT2, CUBE]


def test_generator_kernels_have_the_right_bodies():
    for a in (RATIONALS, DUAL, QXQ):
        ident = identity_kernel(a)
        assert ident.body.is_module()
        assert module_iso(ident.body.terms[0], restrict(multiplication_map(a, 2), regular_module(a)))
        m = mult_kernel(a)
        assert module_iso(m.body.terms[0], restrict(multiplication_map(a, 3), regular_module(a)))
        assert comult_kernel(a).body.terms[0].dim == a.dim
        assert unit_kernel(a).body.terms[0].dim == a.dim
        assert counit_kernel(a).source is a
    assert identity_kernel(RATIONALS).body.terms[0].dim == 1


def test_kernel_body_must_match_source_and_target():
    body = identity_kernel(DUAL).body
    with pytest.raises(AlgebraMismatch):
        Kernel(DUAL, QXQ, body)


def test_compose_examples():
    q = compose(mult_kernel(RATIONALS), comult_kernel(RATIONALS))
    assert q.homology_dims(3) == {0: 1}
    a = DUAL
    left = compose(external(identity_kernel(a), unit_kernel(a)), mult_kernel(a))
    assert compare_kernels(left, identity_kernel(a), 3).status is Status.PASS
    with pytest.raises(AlgebraMismatch):
        compose(mult_kernel(a), mult_kernel(a))


def test_external_examples():
    u = external(unit_kernel(RATIONALS), unit_kernel(RATIONALS))
    assert u.body.terms[0].dim == 1
    a = DUAL
    ii = external(identity_kernel(a), identity_kernel(a))
    aa = tensor_algebras(a, a)[0]
    assert compare_kernels(ii, identity_kernel(aa), 2).status is Status.PASS
    with pytest.raises(FieldMismatch):
        external(identity_kernel(a), identity_kernel(univariate_quotient(Field.prime(5), [0, 0, 1])))


def test_external_of_complexes_multiplies_dims():
    rng = random.Random(5)
    k1 = Kernel(RATIONALS, DUAL, random_complex(DUAL, rng))
    k2 = Kernel(QXQ, RATIONALS, random_complex(QXQ, rng))
    e = external(k1, k2)
    assert e.source.factors == QXQ.factors and e.target.factors == DUAL.factors
    d1, d2 = k1.homology_dims(2), k2.homology_dims(2)
    expect = {}
    for i, x in d1.nonzero().items():
        for j, y in d2.nonzero().items():
            expect[i + j] = expect.get(i + j, 0) + x * y
    assert e.homology_dims(3) == expect


def test_swap_kernel():
    assert swap_kernel(RATIONALS, RATIONALS).body.terms[0].dim == 1
    s = swap_kernel(DUAL, SQRT2)
    back = compose(s, swap_kernel(SQRT2, DUAL))
    ds = tensor_algebras(DUAL, SQRT2)[0]
    assert compare_kernels(back, identity_kernel(ds), 2).status is Status.PASS
    assert compose(swap_kernel(DUAL, DUAL), mult_kernel(DUAL)).homology_dims(3) == mult_kernel(DUAL).homology_dims(3)


@pytest.mark.parametrize("a", TINY, ids=lambda a: a.name or "Q")
def test_verify_frobenius_all_pass(a):
    report = verify_frobenius(a, 2)
    assert {k: v.status for k, v in report.items()} == {k: Status.PASS for k in report}


def test_corrupted_mult_fails_at_degree_zero():
    data = FrobeniusData.diagonal(DUAL)
    data.mult = corrupted_mult_kernel(DUAL)
    report = verify_frobenius(DUAL, 2, data=data, axioms=["left_unit", "associativity", "commutativity"])
    r = report["left_unit"]
    assert r.status is Status.FAIL and r.degree == 0
    assert any(c.status is Status.FAIL and c.degree == 0 for c in report.values())


def test_closed_surface_examples():
    for a in TINY:
        assert evaluate_closed_surface(a, 0) == {0: a.dim}
    assert evaluate_closed_surface(DUAL, 1, 4) == dual_numbers_hochschild(4)
    for g in range(4):
        assert evaluate_closed_surface(QXQ, g, 3) == {0: 2}
    with pytest.raises(ValueError):
        evaluate_closed_surface(DUAL, -1)


def test_truncation_is_enforced():
    k = compose(identity_kernel(DUAL), comult_kernel(DUAL), cutoff=1)
    k2 = compose(k, mult_kernel(DUAL), cutoff=1)
    assert k2.valid_through >= 1
    with pytest.raises(TruncationExhausted):
        homology_dims(k2.body, int(k2.valid_through) + 1)


def test_no_go_examples():
    r = no_go_check(RATIONALS)
    assert r.verdict is Verdict.FIELD_POINT and r.hom_diag_to_free_dims[0] == 1
    r = no_go_check(QXQ)
    assert r.verdict is Verdict.DIRECT_SUM_OF_POINTS and r.blocks_found == 2
    assert r.hom_diag_to_free_dims[0] == 2
    r = no_go_check(DUAL)
    assert r.verdict is Verdict.NON_REDUCED_OUT_OF_SCOPE and not r.reduced
    assert r.hom_diag_to_free_dims[0] == 2
    assert no_go_check(SQRT2).verdict is Verdict.FIELD_POINT


@pytest.mark.parametrize("n", [1, 2, 3])
def test_split_products_have_n_dimensional_obstruction(n):
    a = split_algebra(QQ, n)
    assert no_go_check(a).hom_diag_to_free_dims[0] == n
    for g in range(4):
        assert evaluate_closed_surface(a, g, 2) == {0: n}


@st.composite
def random_kernels(draw):
    a = draw(st.sampled_from([RATIONALS, DUAL, SQRT2, QXQ]))
    b = draw(st.sampled_from([RATIONALS, DUAL, SQRT2, QXQ, CUBE] if a is RATIONALS else [RATIONALS, DUAL, QXQ]))
    rng = random.Random(draw(st.integers(0, 10**6)))
    ab = tensor_algebras(a, b)[0]
    return Kernel(a, b, random_complex(ab, rng), "K")


@settings(max_examples=20, deadline=None)
@given(random_kernels())
def test_identity_laws(k):
    for composite in (compose(identity_kernel(k.source), k, 2), compose(k, identity_kernel(k.target), 2)):
        r = compare_kernels(composite, k, 2)
        assert r.status is Status.PASS, r.reason


@settings(max_examples=6, deadline=None)
@given(st.integers(0, 10**6))
def test_compose_is_associative(seed):
    rng = random.Random(seed)
    a, b, c, d = DUAL, QXQ, RATIONALS, SQRT2
    k1 = Kernel(a, b, random_complex(tensor_algebras(a, b)[0], rng))
    k2 = Kernel(b, c, random_complex(tensor_algebras(b, c)[0], rng))
    k3 = Kernel(c, d, random_complex(tensor_algebras(c, d)[0], rng))
    left = compose(compose(k1, k2, 2), k3, 2)
    right = compose(k1, compose(k2, k3, 2), 2)
    r = compare_kernels(left, right, 2)
    assert r.status is not Status.FAIL, r.reason
    assert r.dims_left == r.dims_right


def test_external_is_monoidal_on_identities():
    for a, b in [(DUAL, QXQ), (SQRT2, DUAL), (RATIONALS, CUBE)]:
        ab = tensor_algebras(a, b)[0]
        e = external(identity_kernel(a), identity_kernel(b))
        assert compare_kernels(e, identity_kernel(ab), 2).status is Status.PASS
