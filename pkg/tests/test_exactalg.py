from fractions import Fraction
import random

import pytest
from hypothesis import given, settings, strategies as st

from qfloer.errors import SplittingError
from qfloer.exactalg import (QLaurent, RationalMatrix, charpoly, format_rational, generalized_eigenspaces,
                             inverse, nullspace, qlaurent_arith, qlaurent_eval_at_one,
                             qlaurent_invert_variable, rank, rational_roots, solve)

q = QLaurent.q()
F = Fraction

exponents = st.builds(F, st.integers(-6, 6), st.integers(1, 6))
qlaurents = st.dictionaries(exponents, st.integers(-3, 3), max_size=4).map(QLaurent)


# -- QLaurent examples ------------------------------------------------------


def test_arith_examples():
    one_minus_q = 1 - q
    assert qlaurent_arith(one_minus_q, QLaurent.one(), "mul") == one_minus_q
    a = QLaurent.monomial(F(1, 3), -1)
    assert qlaurent_arith(a, QLaurent.monomial(F(2, 3)), "mul") == -q
    x = 1 + QLaurent.monomial(F(1, 2)) + q
    assert qlaurent_arith(x, x, "sub") == QLaurent.zero()
    assert not qlaurent_arith(x, x, "sub")


def test_invert_variable_examples():
    assert qlaurent_invert_variable(QLaurent.zero()) == QLaurent.zero()
    assert qlaurent_invert_variable(1 + q) == 1 + QLaurent.monomial(-1)
    assert qlaurent_invert_variable(QLaurent.monomial(F(1, 3), -1)) == QLaurent.monomial(F(-1, 3), -1)


def test_eval_at_one_examples():
    cot4 = 1 + QLaurent.monomial(F(2, 4)) + q
    assert qlaurent_eval_at_one(cot4) == 3
    assert qlaurent_eval_at_one(QLaurent.zero()) == 0
    assert qlaurent_eval_at_one(1 - q) == 0


def test_no_zero_terms_stored():
    x = QLaurent({0: 1, F(1, 2): 0, 1: 2})
    assert x.terms == {F(0): F(1), F(1): F(2)}
    assert (x - x)._terms == ()


def test_serialization_matches_documented_form():
    x = 1 - QLaurent.monomial(F(1, 3))
    assert x.to_json() == [[1, 1, [0, 1]], [-1, 1, [1, 3]]]
    assert QLaurent.from_json(x.to_json()) == x


def test_printing():
    assert str(QLaurent.monomial(F(1, 3), -1)) == "-q^(1/3)"
    assert str(1 - q) == "1 - q^(1)"
    assert str(QLaurent.zero()) == "0"
    assert format_rational(F(-2, 3)) == "-2/3"
    assert QLaurent.parse(str(1 - QLaurent.monomial(F(2, 3), F(1, 2)))) == 1 - QLaurent.monomial(F(2, 3), F(1, 2))


def test_negative_power_of_monomial():
    assert QLaurent.monomial(F(1, 3), 2) ** -1 == QLaurent.monomial(F(-1, 3), F(1, 2))
    with pytest.raises(ValueError):
        (1 + q) ** -1


# -- ring properties --------------------------------------------------------


@given(qlaurents, qlaurents, qlaurents)
def test_ring_axioms(a, b, c):
    assert a + b == b + a
    assert a * b == b * a
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a - a == QLaurent.zero()
    assert a + QLaurent.zero() == a
    assert a * QLaurent.one() == a


@given(qlaurents, qlaurents)
def test_arith_against_dict_oracle(a, b):
    # independent evaluation by accumulating in a plain dict
    add, mul = {}, {}
    for e, c in list(a.items()) + list(b.items()):
        add[e] = add.get(e, 0) + c
    for e1, c1 in a.items():
        for e2, c2 in b.items():
            mul[e1 + e2] = mul.get(e1 + e2, 0) + c1 * c2
    assert (a + b).terms == {e: c for e, c in add.items() if c}
    assert (a * b).terms == {e: c for e, c in mul.items() if c}


@given(qlaurents)
def test_invert_variable_is_involution(a):
    assert a.invert_variable().invert_variable() == a


@given(qlaurents, qlaurents)
def test_eval_at_one_is_ring_homomorphism(a, b):
    assert (a * b).eval_at_one() == a.eval_at_one() * b.eval_at_one()
    assert (a + b).eval_at_one() == a.eval_at_one() + b.eval_at_one()


@given(qlaurents)
def test_json_round_trip(a):
    assert QLaurent.from_json(a.to_json()) == a
    exps = [e for e, _ in a.items()]
    assert exps == sorted(exps)


# -- matrices -----------------------------------------------------------------


def _random_matrix(rng, size, lo=-3, hi=3):
    return RationalMatrix.from_rows([[F(rng.randint(lo, hi)) for _ in range(size)] for _ in range(size)])


def _det(rows):
    # plain Gaussian elimination, independent of the library's rref
    a = [list(r) for r in rows]
    n, det = len(a), F(1)
    for col in range(n):
        piv = next((r for r in range(col, n) if a[r][col]), None)
        if piv is None:
            return F(0)
        if piv != col:
            a[col], a[piv] = a[piv], a[col]
            det = -det
        det *= a[col][col]
        for r in range(col + 1, n):
            f = a[r][col] / a[col][col]
            for k in range(col, n):
                a[r][k] -= f * a[col][k]
    return det


def _poly_eval(coeffs, x):
    # coefficients stored leading first
    acc = F(0)
    for c in coeffs:
        acc = acc * x + c
    return acc


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2 ** 32), st.integers(1, 5))
def test_charpoly_against_determinant(seed, size):
    rng = random.Random(seed)
    m = _random_matrix(rng, size)
    coeffs = charpoly(m)
    assert len(coeffs) == size + 1
    for x in range(-2, 3):
        shifted = [[F(x) * (i == j) - m[i, j] for j in range(size)] for i in range(size)]
        assert _poly_eval(coeffs, F(x)) == _det(shifted)


def test_inverse_and_solve():
    rng = random.Random(7)
    for _ in range(20):
        m = _random_matrix(rng, 3)
        if rank(m) < 3:
            with pytest.raises(ZeroDivisionError):
                inverse(m)
            continue
        assert m @ inverse(m) == RationalMatrix.identity(3)
        b = [F(1), F(-2), F(1, 3)]
        x = solve(m, b)
        assert [sum(m[i, j] * x[j] for j in range(3)) for i in range(3)] == b


def test_nullspace_vectors_are_killed():
    m = RationalMatrix.from_rows([[1, 2, 3], [2, 4, 6]])
    ns = nullspace(m)
    assert len(ns) == 2
    for v in ns:
        assert all(sum(m[i, j] * v[j] for j in range(3)) == 0 for i in range(2))


def test_rational_roots_big_integers():
    # (x - 10^12/7)(x + 3) has huge integer coefficients once cleared
    r = F(10 ** 12, 7)
    coeffs = [F(1), F(3) - r, -3 * r]
    roots, rest = rational_roots(coeffs)
    assert dict(roots) == {r: 1, F(-3): 1}
    assert len(rest) == 1


# -- generalized eigenspaces ---------------------------------------------------


def test_identity_single_block():
    dec = generalized_eigenspaces(RationalMatrix.identity(2))
    assert dec.multiplicities() == {F(1): 2}


def test_jordan_block():
    m = RationalMatrix.from_rows([[F(1, 3), 1], [0, F(1, 3)]])
    dec = generalized_eigenspaces(m)
    assert dec.multiplicities() == {F(1, 3): 2}
    assert rank(dec.change_of_basis()) == 2
    shifted = m - RationalMatrix.identity(2).scale(F(1, 3))
    assert (shifted @ shifted).is_zero()


def test_rotation_is_not_split():
    with pytest.raises(SplittingError):
        generalized_eigenspaces(RationalMatrix.from_rows([[0, -1], [1, 0]]))


def _jordan(spectrum):
    """Block-diagonal Jordan matrix from [(eigenvalue, block size), ...]."""
    size = sum(k for _, k in spectrum)
    rows = [[F(0)] * size for _ in range(size)]
    pos = 0
    for lam, k in spectrum:
        for i in range(k):
            rows[pos + i][pos + i] = lam
            if i + 1 < k:
                rows[pos + i][pos + i + 1] = F(1)
        pos += k
    return RationalMatrix.from_rows(rows)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 2 ** 32))
def test_conjugated_jordan_oracle(seed):
    rng = random.Random(seed)
    spectrum = []
    while sum(k for _, k in spectrum) < rng.randint(1, 4):
        spectrum.append((F(rng.randint(-4, 4), rng.choice([1, 2, 3])), rng.randint(1, 2)))
    size = sum(k for _, k in spectrum)
    while True:
        P = _random_matrix(rng, size, -2, 2)
        if rank(P) == size:
            break
    A = P @ _jordan(spectrum) @ inverse(P)
    expected = {}
    for lam, k in spectrum:
        expected[lam] = expected.get(lam, 0) + k
    dec = generalized_eigenspaces(A)
    assert dec.multiplicities() == expected
    assert [b.eigenvalue for b in dec.blocks] == sorted(expected)
    assert rank(dec.change_of_basis()) == size
    for block in dec.blocks:
        N = (A - RationalMatrix.identity(size).scale(block.eigenvalue)) ** block.multiplicity
        for v in block.basis:
            assert all(sum(N[i, j] * v[j] for j in range(size)) == 0 for i in range(size))
