import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from oracles import brute_force_max_rank
from zeroprod.errors import NotPreserverError, PreconditionError, UnsupportedError
from zeroprod.exact_linalg import QQ, Mat, PrimeField, field_from_name, inverse
from zeroprod.fixtures import (
    GenSpec,
    example_band_nilpotent,
    example_ors,
    example_symmetric_killer,
    random_zpp_map,
)
from zeroprod.linmap import LinMap
from zeroprod.nilspace import (
    TrivialMultForm,
    canonicalize_trivial_mult,
    check_field_size,
    generate_pattern_subspace,
    matches_pattern,
    verify_form,
)
from zeroprod.verify import check_pairwise_zero, check_rank_one_square_zero, check_trivial_mult, random_invertible

GF3, GF11 = PrimeField(3), PrimeField(11)


def conj(basis, T):
    Ti = inverse(T)
    return [T @ Z @ Ti for Z in basis]


# -- generator ---------------------------------------------------------------------------

def test_generator_examples():
    basis = generate_pattern_subspace(2, 1, 0, 0, 0, 2, QQ, 0)
    for Z in basis:
        assert Z[0, 0] == Z[1, 0] == Z[1, 1] == 0
    basis = generate_pattern_subspace(5, 2, 1, 1, 1, 3, GF11, 0)
    assert len(basis) == 3
    assert all((A @ B).is_zero() for A in basis for B in basis)
    with pytest.raises(PreconditionError):
        generate_pattern_subspace(5, 2, 2, 1, 1, 3, GF11, 0)


@st.composite
def pattern_params(draw, max_l=8):
    p = draw(st.integers(0, max_l // 2))
    q = draw(st.integers(0, max_l - 2 * p))
    u, v = draw(st.integers(0, p)), draw(st.integers(0, q))
    return 2 * p + q, p, q, u, v


@given(pattern_params(), st.integers(1, 4), st.integers(0, 2 ** 32))
def test_pattern_closure(params, dim, seed):
    l, p, q, u, v = params
    if l == 0:
        return
    basis = generate_pattern_subspace(l, p, q, u, v, dim, GF11, seed)
    assert check_pairwise_zero(basis).holds
    assert all(matches_pattern(Z, p, q, u, v) for Z in basis)


# -- canonicalizer ---------------------------------------------------------------------

def test_zero_span():
    form = canonicalize_trivial_mult([Mat.zeros(GF11, 4)])
    assert (form.p, form.q, form.u, form.v, form.S0) == (0, 4, 0, 0, Mat.identity(GF11, 4))


def test_rejections():
    with pytest.raises(NotPreserverError):
        canonicalize_trivial_mult([Mat.unit(QQ, 2, 0, 1), Mat.unit(QQ, 2, 1, 0)])
    with pytest.raises(UnsupportedError):
        check_field_size(GF3, 4)
    check_field_size(GF3, 3)
    check_field_size(QQ, 40)


@st.composite
def full_support_cases(draw):
    l = draw(st.integers(2, 8))
    p = draw(st.integers(1, l // 2))
    q = l - 2 * p
    dim = draw(st.integers(2, 3))
    u = draw(st.integers(0, p))
    v = draw(st.integers(0, q)) if u else 0
    if u and not v:
        u = 0
    if u and (dim - 1) * min(u, v) < max(u, v):
        u = v = 0
    return l, p, q, u, v, dim, draw(st.integers(0, 2 ** 32))


@given(full_support_cases())
def test_canonical_round_trip(case):
    l, p, q, u, v, dim, seed = case
    basis = generate_pattern_subspace(l, p, q, u, v, dim, GF11, seed, full_support=True)
    T = random_invertible(GF11, l, random.Random(seed))
    hidden = conj(basis, T)
    form = canonicalize_trivial_mult(hidden, seed)
    assert (form.p, form.q, form.u, form.v) == (p, q, u, v)
    assert verify_form(hidden, form).holds
    Si = inverse(form.S0)
    assert all(matches_pattern(Si @ Z @ form.S0, p, q, u, v) for Z in hidden)


@given(pattern_params(max_l=3), st.integers(1, 3), st.integers(0, 2 ** 32))
def test_p_matches_exhaustive_oracle(params, dim, seed):
    l, p, q, u, v = params
    if l == 0:
        return
    basis = generate_pattern_subspace(l, p, q, u, v, dim, GF3, seed)
    hidden = conj(basis, random_invertible(GF3, l, random.Random(seed)))
    form = canonicalize_trivial_mult(hidden, seed)
    assert form.p == brute_force_max_rank([Z.tolist() for Z in hidden], 3)
    assert verify_form(hidden, form).holds


def test_form_json():
    basis = generate_pattern_subspace(5, 2, 1, 1, 1, 3, GF11, 4, full_support=True)
    form = canonicalize_trivial_mult(basis, 0)
    doc = form.to_json()
    assert doc["l"] == 5 and {"S0", "p", "q", "u", "v", "certificate"} <= doc.keys()
    assert isinstance(form, TrivialMultForm)


# -- rank-one criterion ------------------------------------------------------------------

def zpp_fixtures(f):
    out = [example_symmetric_killer(f), example_band_nilpotent(2, 3, f), example_ors(2, 4, f),
           LinMap.identity(f, 2), LinMap.zero(f, 2, 3)]
    for seed in range(4):
        out.append(random_zpp_map(GenSpec(2, 5, 0, f.name, seed, "trivial_mult"))[0])
        out.append(random_zpp_map(GenSpec(2, 6, 1, f.name, seed, "trivial_mult"))[0])
    return out


@pytest.mark.parametrize("fname", ["GF(5)", "GF(11)", "Q"])
def test_rank_one_square_zero_criterion(fname):
    f = field_from_name(fname)
    seen = set()
    for phi in zpp_fixtures(f):
        tm = check_trivial_mult(phi).holds
        assert tm == check_rank_one_square_zero(phi).holds
        seen.add(tm)
    assert seen == {True, False}
