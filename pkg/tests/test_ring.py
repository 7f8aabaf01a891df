from itertools import combinations, product

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from leeisd.errors import RetrySelection, SingularMatrixError
from leeisd.ring import (
    CodeType,
    SystematicGenerator,
    as_ring,
    codewords,
    find_transform,
    inverse,
    is_information_set,
    is_invertible,
    mat_mul,
    parity_from_generator,
    permutation_matrix,
    quaternary_systematic_form,
    random_block_invertible,
    random_invertible,
    random_permutation,
    random_systematic_generator,
    reduce_with_syndrome,
)


def span(g):
    """Row span by brute force: all Z4 combinations of the rows."""
    g = np.asarray(g, dtype=np.int64)
    if g.shape[0] == 0:
        return {tuple([0] * g.shape[1])}
    coeffs = np.array(list(product(range(4), repeat=g.shape[0])), dtype=np.int64)
    return {tuple(r) for r in (coeffs @ g) % 4}


def test_mat_mul_examples(rng):
    m = rng.integers(0, 4, size=(3, 5))
    assert np.array_equal(mat_mul(np.eye(3, dtype=np.int64), m), m)
    assert mat_mul([[2]], [[2]])[0, 0] == 0
    a, b = rng.integers(0, 4, size=(4, 4)), rng.integers(0, 4, size=(4, 4))
    school = [[sum(int(a[i, k]) * int(b[k, j]) for k in range(4)) % 4 for j in range(4)] for i in range(4)]
    assert mat_mul(a, b).tolist() == school
    with pytest.raises(ValueError):
        mat_mul(np.zeros((2, 3), dtype=np.int64), np.zeros((2, 3), dtype=np.int64))
    with pytest.raises(ValueError):
        as_ring([[4]])


def test_code_type_invariants():
    assert CodeType(5, 2, 1).cardinality == 32
    with pytest.raises(ValueError):
        CodeType(3, 2, 2)
    with pytest.raises(ValueError):
        CodeType(3, -1, 0)


def test_systematic_form_trivial_cases():
    g = np.hstack([np.eye(3, dtype=np.int64), np.zeros((3, 4), dtype=np.int64)])
    sg = quaternary_systematic_form(g)
    assert (sg.code_type.k1, sg.code_type.k2) == (3, 0)
    assert not sg.a.any() and not sg.b.any() and not sg.c.any()
    sg = quaternary_systematic_form(2 * g)
    assert (sg.code_type.k1, sg.code_type.k2) == (0, 3)
    sg = quaternary_systematic_form(np.zeros((2, 4), dtype=np.int64))
    assert (sg.code_type.k1, sg.code_type.k2) == (0, 0)


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 4), st.integers(1, 8), st.integers(0, 2**32 - 1))
def test_systematic_form_spans_input(rows, n, seed):
    g = np.random.default_rng(seed).integers(0, 4, size=(rows, n), dtype=np.int64)
    sg = quaternary_systematic_form(g)
    ex = sg.expand()
    assert not (ex[sg.code_type.k1 :] & 1).any()
    assert set(map(tuple, codewords(sg))) == span(g)
    assert sg.code_type.cardinality == len(span(g))
    assert set(sg.a.ravel()) <= {0, 1} and set(sg.c.ravel()) <= {0, 1}


def test_parity_worked_example():
    sg = SystematicGenerator(CodeType(3, 1, 1), np.array([[1]]), np.array([[1]]), np.array([[1]]), np.arange(3))
    ph = parity_from_generator(sg)
    assert ph.d.tolist() == [[2]] and ph.e.tolist() == [[1]] and ph.f.tolist() == [[1]]
    assert not mat_mul(ph.expand(), sg.expand().T).any()


def test_parity_zero_blocks():
    sg = SystematicGenerator(
        CodeType(4, 1, 1), np.zeros((1, 1), int), np.zeros((1, 2), int), np.zeros((1, 2), int), np.arange(4)
    )
    h = parity_from_generator(sg).matrix()
    assert h.tolist() == [[0, 0, 1, 0], [0, 0, 0, 1], [0, 2, 0, 0]]


@settings(max_examples=40, deadline=None)
@given(st.integers(4, 7), st.integers(0, 2**32 - 1))
def test_parity_annihilates_and_counts_syndromes(n, seed):
    rng = np.random.default_rng(seed)
    k1 = int(rng.integers(0, 3))
    k2 = int(rng.integers(0, n - k1 + 1)) if n - k1 else 0
    k2 = min(k2, 2)
    sg = random_systematic_generator(n, k1, k2, rng)
    h = parity_from_generator(sg).expand()
    assert not mat_mul(codewords(sg), h.T).any()
    if n <= 5:
        allv = np.array(list(product(range(4), repeat=n)), dtype=np.int64)
        synd = {tuple(s) for s in mat_mul(allv, h.T)}
        assert len(synd) == 4**n // sg.code_type.cardinality


def _standard_h(n, k1, k2, ell, rng):
    # H already in the block form with I, Z, J natural blocks
    r = n - k1 - k2
    k = k1 + k2
    top = np.hstack([rng.integers(0, 4, size=(r, k)), np.eye(r, dtype=np.int64)])
    bottom = np.hstack([2 * rng.integers(0, 2, size=(k2, k1)), 2 * np.eye(k2, dtype=np.int64), np.zeros((k2, r), dtype=np.int64)])
    info = np.arange(k)
    return np.vstack([top, bottom]) % 4, info, np.arange(k, k + ell), np.arange(k + ell, n)


def test_find_transform_identity_cases(rng):
    h, info, zero, rest = _standard_h(8, 2, 1, 2, rng)
    assert np.array_equal(find_transform(h, info, zero, rest), np.eye(6, dtype=np.int64))
    perm = rng.permutation(8)
    hp = np.zeros_like(h)
    hp[:, perm] = h
    assert np.array_equal(find_transform(hp, perm[info], perm[zero], perm[rest]), np.eye(6, dtype=np.int64))


def _check_blocks(uh, info, zero, rest, k2):
    ell, nz = zero.size, rest.size
    assert np.array_equal(uh[:, zero], np.eye(uh.shape[0], dtype=np.int64)[:, :ell])
    assert np.array_equal(uh[:, rest], np.eye(uh.shape[0], dtype=np.int64)[:, ell:ell + nz])
    assert not (uh[ell + nz :][:, info] & 1).any()
    assert uh.shape[0] - ell - nz == k2


def test_find_transform_random_code(rng):
    done = 0
    while done < 20:
        sg = random_systematic_generator(8, 2, 1, rng)
        h = parity_from_generator(sg).expand()
        perm = rng.permutation(8)
        info, zero, rest = perm[:3], perm[3:4], perm[4:]
        try:
            u = find_transform(h, info, zero, rest)
        except RetrySelection:
            continue
        assert np.array_equal(mat_mul(u, inverse(u)), np.eye(6, dtype=np.int64))
        assert np.array_equal(mat_mul(inverse(u), u), np.eye(6, dtype=np.int64))
        _check_blocks(mat_mul(u, h), info, zero, rest, 1)
        s = rng.integers(0, 4, size=6)
        uh, us = reduce_with_syndrome(h, s, info, zero, rest)
        assert np.array_equal(uh, mat_mul(u, h)) and np.array_equal(us, mat_mul(u, s.reshape(-1, 1))[:, 0])
        done += 1


def test_find_transform_signals_retry_and_bad_input():
    h = np.array([[1, 0, 0], [0, 0, 0]], dtype=np.int64)
    with pytest.raises(RetrySelection):
        find_transform(h, [0], [], [1, 2])
    with pytest.raises(ValueError):
        find_transform(h, [0], [1], [1, 2])


def test_information_set_matches_projection_oracle(rng):
    for _ in range(5):
        sg = random_systematic_generator(8, 2, 1, rng)
        words = codewords(sg)
        k = 3
        for info in combinations(range(8), k):
            proj = {tuple(w) for w in words[:, list(info)]}
            assert is_information_set(sg, info) == (len(proj) == sg.code_type.cardinality)
        assert is_information_set(sg, sg.col_perm[:k])
    zero_cols = SystematicGenerator(
        CodeType(5, 1, 0), np.zeros((1, 0), int), np.zeros((1, 4), int), np.zeros((0, 4), int), np.arange(5)
    )
    assert not is_information_set(zero_cols, [3])
    with pytest.raises(ValueError):
        is_information_set(sg, [0, 1])


def test_inverse_examples(rng):
    assert np.array_equal(inverse(np.eye(4, dtype=np.int64)), np.eye(4, dtype=np.int64))
    assert inverse([[3]]).tolist() == [[3]]
    m = random_invertible(5, rng)
    eye = np.eye(5, dtype=np.int64)
    assert np.array_equal(mat_mul(m, inverse(m)), eye) and np.array_equal(mat_mul(inverse(m), m), eye)
    with pytest.raises(SingularMatrixError):
        inverse([[2, 0], [0, 1]])


def test_invertible_iff_mod2_invertible(rng):
    for _ in range(200):
        m = rng.integers(0, 4, size=(6, 6))
        det2 = round(abs(np.linalg.det(m % 2))) % 2
        assert is_invertible(m) == bool(det2)


def _f2_rank(b):
    b = b.copy() % 2
    r = 0
    for c in range(b.shape[1]):
        piv = [i for i in range(r, b.shape[0]) if b[i, c]]
        if not piv:
            continue
        b[[r, piv[0]]] = b[[piv[0], r]]
        for i in range(b.shape[0]):
            if i != r and b[i, c]:
                b[i] ^= b[r]
        r += 1
    return r


def test_f2_rank_agrees(rng):
    # elimination on {0,2} matrices over Z4, halved, matches F2 elimination
    for _ in range(50):
        b = rng.integers(0, 2, size=(5, 7))
        assert quaternary_systematic_form(2 * b).code_type.k2 == _f2_rank(b)


def test_permutation_helpers(rng):
    p = permutation_matrix([2, 0, 1])
    x = np.array([[5, 6, 7]])
    assert (x @ p).tolist() == [[6, 7, 5]]
    q = random_permutation(6, rng)
    assert (q.sum(axis=0) == 1).all() and (q.sum(axis=1) == 1).all()
    s = random_block_invertible(2, 3, rng)
    assert not s[:2, 2:].any() and not s[2:, :2].any()
    assert is_invertible(s[:2, :2]) and is_invertible(s[2:, 2:])
