from fractions import Fraction as F

import pytest

from qfloer.chainmodel.cone import (DEFAULT_SIGNS, build_cone, build_tilde_phi1T, check_cone_mu2, cone_square_residual,
                                    cone_table, floer_table, hom_term, les_bookkeeping, les_rank_count)
from qfloer.chainmodel.core import basis
from qfloer.chainmodel.fixtures import affine_a1_model, am_model, padded_sphere_model, sphere_model
from qfloer.errors import IdentityFailure
from qfloer.exactalg import QLaurent
from qfloer.lefschetz import TwistWord, build_affine_A1, build_Am, word_value
from qfloer.qnumbers import EquivariantTable, q_intersection

from modelkit import bare_model


@pytest.fixture(scope="module")
def padded():
    return padded_sphere_model(3, ("V",))


def test_trivial_cone_squares_to_zero():
    m = bare_model([0, 3])
    cone = build_cone(m, "V", "V", "V")
    assert cone.differential.is_zero()
    assert cone_square_residual(cone).passed
    # no corrections at all: the cone map is the diagonal action
    phi = build_tilde_phi1T(m, "V", "V", "V", cone)
    assert phi.is_zero()


def test_cone_layout():
    m = sphere_model(3)
    cone = build_cone(m, "V", "V", "V")
    assert cone.space.dim == 2 + 4
    # Hom generator w x u^v sits in degree |w| - |u| + 1
    assert cone.space.degrees[cone.hom_index(1, 0)] == 3 - 0 + 1
    assert cone.space.degrees[cone.hom_index(0, 1)] == 0 - 3 + 1


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_sphere_cone_ranks_and_table(n):
    m = sphere_model(n)
    counts = les_rank_count(m, "V", "V", "V")
    assert counts["predicted"] == counts["actual"] == 2
    assert cone_table(m, "V", "V", "V") == EquivariantTable(n, {(1 - n, F(-1)): 1, (1, F(0)): 1})


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_hom_term_eigenvalues(n):
    hom = hom_term(sphere_model(n), "V", "V", "V")
    assert hom.labels == ("e_V x e_V^v", "e_V x f^v", "f x e_V^v", "f x f^v")
    assert hom.eigen_on_generators() == [0, -1, 1, 0]


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_les_additivity_on_sphere(n):
    book = les_bookkeeping(sphere_model(n), "V", "V", "V")
    assert not book["additivity"]
    assert not book["correction_gap"]
    assert book["cone"] == book["pair"] + book["correction"]


def test_sign_regression(padded):
    cone = build_cone(padded, "V", "V", "V")
    assert cone_square_residual(cone).passed
    for flip in (0, 1):
        signs = list(DEFAULT_SIGNS)
        signs[flip] = -signs[flip]
        with pytest.raises(IdentityFailure):
            build_cone(padded, "V", "V", "V", signs=tuple(signs))
        broken = build_cone(padded, "V", "V", "V", signs=tuple(signs), verify=False)
        assert not cone_square_residual(broken).passed


def test_padded_cone_is_exact(padded):
    counts = les_rank_count(padded, "V", "V", "V")
    assert counts["predicted"] == counts["actual"]
    book = les_bookkeeping(padded, "V", "V", "V")
    assert not book["additivity"] and not book["correction_gap"]


@pytest.mark.parametrize("side", ["left", "right"])
def test_cone_products_are_chain_maps(padded, side):
    assert check_cone_mu2(sphere_model(3), "V", "V", "V", "V", side).passed
    assert check_cone_mu2(padded, "V", "V", "V", "V", side).passed
    bad = padded.with_entry("mu3", ("V",) * 4, (0, 0, 5), 0)
    assert not check_cone_mu2(bad, "V", "V", "V", "V", side).passed


def test_cone_product_rejects_unknown_side():
    with pytest.raises(ValueError):
        check_cone_mu2(sphere_model(3), "V", "V", "V", "V", "middle")


def test_corrected_cone_map_commutes(padded):
    cone = build_cone(padded, "V", "V", "V")
    phi = build_tilde_phi1T(padded, "V", "V", "V", cone)
    d = cone.differential
    for i in range(cone.space.dim):
        x = basis(i)
        assert d(phi(x)) == phi(d(x))


def _names(m):
    return list(m.lagrangians)


@pytest.mark.parametrize("model, lattice", [(am_model(3), build_Am(3)), (affine_a1_model(), build_affine_A1())])
def test_cone_values_match_twist_formula(model, lattice):
    names = _names(model)
    for v in range(lattice.size):
        for a in range(lattice.size):
            for b in range(lattice.size):
                q_cone = q_intersection(cone_table(model, names[v], names[a], names[b]))
                assert q_cone == word_value(lattice, TwistWord(((v, 1),)), a, b)


@pytest.mark.parametrize("model, lattice", [(am_model(4), build_Am(4)), (affine_a1_model(), build_affine_A1())])
def test_model_tables_match_lattice_pairings(model, lattice):
    names = _names(model)
    for i, a in enumerate(names):
        for j, b in enumerate(names):
            assert q_intersection(floer_table(model, a, b)) == lattice.pairing[i][j]


def test_hom_term_on_two_objects():
    m = padded_sphere_model(3, ("V", "W"), shifts=(F(0), F(1, 2)))
    hom = hom_term(m, "V", "V", "W")
    # c_W = e/2 subtracts 1/2 from the corrected map on CF(V, W)
    half = F(1, 2)
    assert hom.eigen_on_generators() == [-half, -1 - half, 1 - half, -half]
    plain = hom_term(padded_sphere_model(3, ("V",)), "V", "V", "V")
    assert q_intersection(hom.table) == QLaurent.monomial(-half) * q_intersection(plain.table)
