import itertools
import random

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from oracles import all_matrices, brute_force_zpp
from zeroprod.errors import NotPreserverError, PreconditionError, UnsupportedError
from zeroprod.exact_linalg import QQ, Mat, PrimeField, direct_sum, field_from_name, inverse, kron
from zeroprod.fixtures import example_band_nilpotent, example_symmetric_killer, random_jordan_map
from zeroprod.linmap import LinMap, tensor_map
from zeroprod.verify import (
    IdempotentCounterexample,
    PairCounterexample,
    check_idempotent_preserver,
    check_jordan,
    check_pairwise_zero,
    check_power_products,
    check_rank_one_square_zero,
    check_ring_hom,
    check_trivial_mult,
    check_zpp,
    fuzz_preserver,
    random_invertible,
    random_matrix,
    recheck,
    recheck_pairwise,
    sample_zero_pair,
)

GF2, GF3, GF7 = PrimeField(2), PrimeField(3), PrimeField(7)


def units(f, n):
    return {(i, j): Mat.unit(f, n, i, j) for i in range(n) for j in range(n)}


def a_plus_at(f, n=2):
    return LinMap.from_function(f, n, 2 * n, lambda E: direct_sum(E, E.T))


# -- check_zpp ---------------------------------------------------------------------

def test_zpp_examples():
    assert check_zpp(LinMap.identity(QQ, 3)).holds
    assert check_zpp(example_band_nilpotent(2, 3, QQ)).holds
    v = check_zpp(LinMap.transpose_map(QQ, 2))
    assert not v.holds
    w = v.witness
    E = units(QQ, 2)
    assert isinstance(w, PairCounterexample)
    assert (w.A, w.B) == (E[0, 1], E[0, 0])
    assert w.product == E[1, 0]
    assert recheck(LinMap.transpose_map(QQ, 2), w)


def test_zpp_trivial_domains():
    rng = random.Random(0)
    assert check_zpp(LinMap(QQ, 1, 3, [random_matrix(QQ, 3, 3, rng)])).holds
    assert check_zpp(LinMap.zero(QQ, 3, 0)).holds


@st.composite
def gf_maps(draw):
    p = draw(st.sampled_from([2, 3]))
    r = draw(st.integers(1, 3))
    rng = random.Random(draw(st.integers(0, 2 ** 32)))
    f = PrimeField(p)
    sparse = draw(st.booleans())
    imgs = []
    for _ in range(4):
        m = random_matrix(f, r, r, rng)
        if sparse:
            keep = rng.randrange(r * r)
            m = Mat(f, [[m[i, j] if i * r + j == keep else 0 for j in range(r)] for i in range(r)])
        imgs.append(m)
    return LinMap(f, 2, r, imgs)


@given(gf_maps())
def test_zpp_matches_brute_force(phi):
    arr = np.array([m.tolist() for m in phi.images], dtype=np.int64)
    v = check_zpp(phi)
    assert v.holds == brute_force_zpp(arr, phi.field.p)
    if not v.holds:
        assert recheck(phi, v.witness)
        assert (v.witness.A @ v.witness.B).is_zero()


# -- homomorphisms -------------------------------------------------------------------

def test_ring_hom_examples():
    assert check_ring_hom(LinMap.identity(QQ, 2)).holds
    two = LinMap.identity(QQ, 2).scale(QQ(2))
    v = check_ring_hom(two)
    assert not v.holds and recheck(two, v.witness)
    assert two.image(0, 0) @ two.image(0, 0) == Mat.unit(QQ, 2, 0, 0).scale(QQ(4))
    assert check_ring_hom(tensor_map(Mat.identity(QQ, 2), 2)).holds


def test_jordan_examples():
    assert check_jordan(LinMap.transpose_map(QQ, 2)).holds
    assert check_jordan(LinMap.identity(QQ, 2)).holds
    killer = example_symmetric_killer(QQ)
    v = check_jordan(killer)
    assert not v.holds and recheck(killer, v.witness)
    # exhaustive scan over the 16 unit pairs finds at least one violation
    E = units(QQ, 2)
    bad = [(a, b) for a in E for b in E
           if killer.apply(E[a] @ E[b] + E[b] @ E[a])
           != killer.apply(E[a]) @ killer.apply(E[b]) + killer.apply(E[b]) @ killer.apply(E[a])]
    assert bad


def test_jordan_rejects_char_two():
    with pytest.raises(UnsupportedError):
        check_jordan(LinMap.identity(GF2, 2))
    with pytest.raises(UnsupportedError):
        check_idempotent_preserver(LinMap.identity(GF2, 2))


def test_idempotent_examples():
    S = random_invertible(GF7, 4, random.Random(5))
    Si = inverse(S)
    phi = LinMap.from_function(GF7, 2, 4, lambda E: S @ direct_sum(E, E.T) @ Si)
    assert check_idempotent_preserver(phi).holds
    assert check_idempotent_preserver(LinMap.zero(GF7, 2, 3)).holds
    killer = example_symmetric_killer(GF3)
    v = check_idempotent_preserver(killer)
    assert not v.holds
    # brute force over M_2(GF(3)): some idempotent maps to a non-idempotent
    found = False
    for m in all_matrices(3):
        P = Mat(GF3, m.tolist())
        if P @ P == P:
            img = killer.apply(P)
            found |= img @ img != img
    assert found
    if isinstance(v.witness, IdempotentCounterexample):
        assert recheck(killer, v.witness)


def test_trivial_mult_examples():
    assert check_trivial_mult(example_symmetric_killer(QQ)).holds
    v = check_trivial_mult(LinMap.identity(QQ, 1))
    assert not v.holds and recheck(LinMap.identity(QQ, 1), v.witness)
    assert check_trivial_mult(LinMap.zero(QQ, 2, 2)).holds


def test_pairwise_zero():
    f = QQ
    v = check_pairwise_zero([Mat.unit(f, 2, 0, 1), Mat.unit(f, 2, 1, 0)])
    assert not v.holds and recheck_pairwise([Mat.unit(f, 2, 0, 1), Mat.unit(f, 2, 1, 0)], v.witness)
    assert check_pairwise_zero([Mat.unit(f, 3, 0, 2), Mat.unit(f, 3, 0, 1)]).holds


@st.composite
def jordan_maps(draw):
    f = field_from_name(draw(st.sampled_from(["GF(5)", "GF(7)", "Q"])))
    n = draw(st.integers(2, 3))
    k1, k2 = draw(st.integers(0, 2)), draw(st.integers(0, 1))
    t = draw(st.integers(0, 1))
    return random_jordan_map(n, n * (k1 + k2) + t, k1, k2, f, draw(st.integers(0, 2 ** 32))), k2


@given(jordan_maps())
def test_implication_chain(data):
    phi, _ = data
    hom, jor = check_ring_hom(phi).holds, check_jordan(phi).holds
    idem = check_idempotent_preserver(phi).holds
    assert not hom or jor
    assert not jor or idem
    assert jor


@given(jordan_maps())
def test_zpp_and_jordan_force_hom(data):
    phi, k2 = data
    zpp, jor, hom = check_zpp(phi).holds, check_jordan(phi).holds, check_ring_hom(phi).holds
    if zpp and jor:
        assert hom
    assert zpp == (k2 == 0)


@given(st.sampled_from(["GF(3)", "GF(5)", "Q"]), st.integers(1, 3), st.integers(0, 2 ** 32))
def test_false_witnesses_recheck(fname, r, seed):
    f, rng = field_from_name(fname), random.Random(seed)
    phi = LinMap(f, 2, r, [random_matrix(f, r, r, rng) for _ in range(4)])
    checks = [check_zpp, check_ring_hom, check_trivial_mult, check_idempotent_preserver]
    checks += [check_jordan] if f.char != 2 else []
    for chk in checks:
        v = chk(phi)
        if not v.holds:
            assert recheck(phi, v.witness)


def test_rank_one_square_zero():
    assert check_rank_one_square_zero(example_symmetric_killer(GF7)).holds
    v = check_rank_one_square_zero(LinMap.identity(GF7, 2))
    assert not v.holds and recheck(LinMap.identity(GF7, 2), v.witness)


# -- sampling ------------------------------------------------------------------------

@given(st.sampled_from(["GF(2)", "GF(3)", "GF(101)", "Q"]), st.integers(1, 4), st.booleans(),
       st.integers(0, 2 ** 32))
def test_zero_pairs(fname, n, double, seed):
    pair = sample_zero_pair(n, field_from_name(fname), seed, double)
    assert (pair.A @ pair.B).is_zero()
    if double:
        assert (pair.B @ pair.A).is_zero()


def test_zero_pair_support_gf2():
    mats = all_matrices(2)
    key = lambda m: tuple(m.ravel())
    brute = {(key(a), key(b)) for a, b in itertools.product(mats, mats) if not ((a @ b) % 2).any()}
    rng = random.Random(0)
    seen = set()
    for _ in range(10 ** 4):
        pr = sample_zero_pair(2, GF2, rng)
        seen.add((tuple(pr.A.tolist_flat()), tuple(pr.B.tolist_flat())))
    assert seen == brute


def test_zero_pair_deterministic():
    a = sample_zero_pair(3, QQ, 17, True)
    b = sample_zero_pair(3, QQ, 17, True)
    assert a == b


# -- fuzzing -------------------------------------------------------------------------

def test_fuzz_examples():
    v = fuzz_preserver(LinMap.identity(GF7, 2), "dzp", 1000, 0)
    assert v.holds and v.mode == "randomized" and v.trials == 1000
    T = LinMap.transpose_map(GF3, 2)
    v = fuzz_preserver(T, "zpp", 1000, 0)
    assert not v.holds and recheck(T, v.witness)
    assert not brute_force_zpp(np.array([m.tolist() for m in T.images]), 3)
    assert fuzz_preserver(a_plus_at(GF7), "dzp", 1000, 0).holds
    with pytest.raises(PreconditionError):
        fuzz_preserver(T, "zpp", 0, 0)


# -- power products ------------------------------------------------------------------

def test_power_products_examples():
    band = example_band_nilpotent(2, 3, QQ)
    assert check_power_products(band, 3, 50, 0).holds
    killer = example_symmetric_killer(QQ)
    assert killer.at_identity().is_zero()
    assert check_power_products(killer, 1, 50, 0).holds
    with pytest.raises(PreconditionError):
        check_power_products(LinMap.identity(QQ, 2), 0)
    with pytest.raises(NotPreserverError):
        check_power_products(LinMap.transpose_map(QQ, 2), 2)


def test_band_four_products_vanish():
    f = GF7
    band = example_band_nilpotent(2, 3, f)
    rng = random.Random(3)
    for _ in range(30):
        prod = Mat.identity(f, 6)
        for _ in range(4):
            prod = prod @ band.apply(random_matrix(f, 2, 2, rng))
        assert prod.is_zero()
    J = kron(Mat(f, [[0, 1, 0], [0, 0, 1], [0, 0, 0]]), Mat.identity(f, 2))
    assert band.at_identity() == J
