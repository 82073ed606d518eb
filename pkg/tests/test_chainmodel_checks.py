from fractions import Fraction as F

import pytest

from qfloer.chainmodel import checks
from qfloer.chainmodel.checks import (build_tilde_phi1, check_derivation, check_differentials, check_dilation,
                                      check_equivariance, check_hvee, check_kvee, check_mu3_homotopy,
                                      check_phi1_homotopy, check_phi2_homotopy, induced_endomorphism, run_all)
from qfloer.chainmodel.core import DegreeError, GradedSpace, MultiOp, vadd
from qfloer.chainmodel.fixtures import (affine_a1_model, am_model, padded_index, padded_sphere_model,
                                        projective_model, single_generator_model, sphere_model)
from qfloer.errors import DivisibilityError, MissingTensor, NotEquivariant, UnsupportedDimension
from qfloer.exactalg import RationalMatrix

from modelkit import B, BETA, E, bare_model, failing

@pytest.fixture(scope="module")
def padded():
    return padded_sphere_model(3, ("V",))


# -- fixtures pass everything ------------------------------------------------------


@pytest.mark.parametrize("build", [
    lambda: sphere_model(2), lambda: sphere_model(3), lambda: sphere_model(4),
    lambda: projective_model(4), lambda: projective_model(6),
    lambda: single_generator_model(6, 3),
    lambda: am_model(1), lambda: am_model(3), lambda: affine_a1_model(),
])
def test_fixtures_pass_every_checker(build):
    reports = run_all(build())
    assert failing(reports) == []
    assert all("skipped" not in r.details for r in reports)


def test_padded_fixture_passes_every_checker():
    reports = run_all(padded_sphere_model(3, ("V", "W"), shifts=(F(1, 2), F(-1))))
    assert failing(reports) == []


def test_fixture_preconditions():
    with pytest.raises(DivisibilityError):
        single_generator_model(3, 3)  # odd generator with k > 1
    with pytest.raises(DivisibilityError):
        projective_model(3)
    with pytest.raises(UnsupportedDimension):
        am_model(2, n=4)


# -- differentials -------------------------------------------------------------------


def test_differentials_examples():
    assert check_differentials(bare_model([0, 3])).passed
    m = bare_model([0, 1], entries=[("mu1", ("V", "V"), (0,), {1: 1})])
    assert check_differentials(m).passed
    bad = bare_model([0, 1, 2], entries=[("mu1", ("V", "V"), (0,), {1: 1}), ("mu1", ("V", "V"), (1,), {2: 1})])
    rep = check_differentials(bad)
    assert not rep.passed
    assert rep.witnesses[0]["inputs"] and rep.witnesses[0]["residual"]


def test_degree_zero_differential_is_rejected():
    sp = GradedSpace("C", (0,))
    with pytest.raises(DegreeError):
        MultiOp("mu1", (sp,), sp, 1, {(0,): {0: 1}})


# -- mu3 ------------------------------------------------------------------------------


def test_mu3_examples():
    assert check_mu3_homotopy(sphere_model(3)).passed
    assert check_mu3_homotopy(bare_model([0, 3])).passed
    # non-associative product with mu1 = 0: the residual is the associator
    u, x = 0, 1
    m = bare_model([0, 0], labels=["u", "x"], entries=[
        ("mu2", ("V", "V", "V"), (x, x), {u: 1}),
        ("mu2", ("V", "V", "V"), (x, u), {x: 1}),
    ])
    rep = check_mu3_homotopy(m)
    assert not rep.passed
    wit = {tuple(w["inputs"]): w["residual"] for w in rep.witnesses}
    # associator on (x, x, x): x.(x.x) - (x.x).x = x.u - u.x = x
    coeffs = {tuple(r[0] for r in wit[("x", "x", "x")])}
    assert coeffs == {(x,)}


def test_mu3_entry_is_seen_with_nonzero_differential(padded):
    bad = padded.with_entry("mu3", ("V",) * 4, (0, 0, 5), 0)
    assert not check_mu3_homotopy(bad).passed


# -- phi1, phi2 -----------------------------------------------------------------------


def test_phi1_examples():
    # central phi0 image, phi1 = 0, no differentials
    m = bare_model([0, 3], unit={0: 1}, entries=[("phi0", ("V",), (E,), {0: 1}),
                                                   ("mu2", ("V", "V", "V"), (0, 0), {0: 1}),
                                                   ("mu2", ("V", "V", "V"), (0, 1), {1: 1}),
                                                   ("mu2", ("V", "V", "V"), (1, 0), {1: 1})])
    assert check_phi1_homotopy(m).passed
    assert check_phi1_homotopy(sphere_model(3)).passed

def test_phi1_mutation_is_localized(padded):
    # with mu1 = d = 0 no phi1 entry enters this identity, so mutate the padded model
    bad = padded.with_entry("phi1", ("V", "V"), (BETA, padded_index(3, "e.s2")), padded_index(3, "e.t1"))
    rep = check_phi1_homotopy(bad)
    assert not rep.passed
    assert {w["inputs"][0] for w in rep.witnesses} == {"beta"}


def test_phi2_examples(padded):
    assert check_phi2_homotopy(bare_model([0, 3])).passed
    assert check_phi2_homotopy(sphere_model(3)).passed
    bad = padded.with_entry("phi2", ("V", "V", "V"), (BETA, 0, padded_index(3, "f")), 0)
    rep = check_phi2_homotopy(bad)
    assert not rep.passed
    assert rep.witnesses[0]["inputs"][0] == "beta"


# -- hvee, kvee -----------------------------------------------------------------------


def test_hvee_examples(padded):
    assert check_hvee(bare_model([0, 3])).passed
    assert check_hvee(sphere_model(3)).passed
    bad = padded.with_entry("hvee", ("V", "V"), (padded_index(3, "e"), padded_index(3, "f.s2")), 0)
    assert not check_hvee(bad).passed


def test_kvee_examples(padded):
    assert check_kvee(bare_model([0, 3], b=False, delta=False)).passed
    assert check_kvee(sphere_model(3)).passed
    b = padded.closed.labels.index("b")
    bad = padded.with_entry("kvee", ("V",), (b, padded_index(3, "f.s2")), 0)
    assert not check_kvee(bad).passed


# -- dilation, equivariance ------------------------------------------------------------


def test_dilation_examples():
    assert check_dilation(bare_model([0, 3])).passed
    rep = check_dilation(bare_model([0, 3], b=False))
    assert not rep.passed
    assert check_dilation(bare_model([0, 3], e=False, b=False)).passed


def test_equivariance_examples(padded):
    assert check_equivariance(bare_model([0, 3])).passed
    assert check_equivariance(sphere_model(3)).passed
    t2 = padded_index(3, "e.t2")
    bad = padded.with_cochain("c", {t2: F(1)}, "V")
    assert not check_equivariance(bad).passed
    with pytest.raises(NotEquivariant):
        build_tilde_phi1(bad, "V", "V")


# -- corrected map ------------------------------------------------------------------------


def test_tilde_phi1_examples():
    m = bare_model([0, 3], entries=[("phi1", ("V", "V"), (B, 0), {0: F(1, 4)}),
                                    ("phi1", ("V", "V"), (B, 1), {1: F(2)})])
    op = build_tilde_phi1(m, "V", "V")
    assert op.matrix() == RationalMatrix.from_rows([[F(1, 4), 0], [0, 2]])
    for n in range(2, 6):
        op = build_tilde_phi1(sphere_model(n), "V", "V")
        assert op.matrix() == RationalMatrix.from_rows([[0, 0], [0, 1]])


def test_tilde_phi1_shift_identity():
    base = padded_sphere_model(3, ("V", "W"))
    s = F(2, 3)
    shifted = padded_sphere_model(3, ("V", "W"), shifts=(s, 0))
    coh, before = induced_endomorphism(base, "V", "W")
    _, after = induced_endomorphism(shifted, "V", "W")
    for k, mat in before.items():
        assert after[k] - mat == RationalMatrix.identity(mat.rows).scale(s)


def test_boundary_change_of_c_leaves_induced_map(padded):
    s1 = padded_index(3, "e.s1")
    changed = padded.with_cochain("c", vadd(padded.c["V"], {s1: F(1)}), "V")
    assert check_equivariance(changed).passed
    assert induced_endomorphism(changed, "V", "V")[1] == induced_endomorphism(padded, "V", "V")[1]
    # a non-boundary change (the unit, on one end only) does move it
    two = padded_sphere_model(3, ("V", "W"))
    moved = two.with_cochain("c", {padded_index(3, "e"): F(1)}, "V")
    assert induced_endomorphism(moved, "V", "W")[1] != induced_endomorphism(two, "V", "W")[1]


def test_changing_dilation_by_exact_term(padded):
    labels = padded.closed.labels
    y, z = labels.index("y"), labels.index("z")
    t2 = padded_index(3, "e.t2")
    phi0_y = padded.op("phi0", "V")({y: F(1)})
    assert phi0_y == {t2: F(1)}
    new = padded.with_cochain("b", vadd(padded.b, {z: F(1)}))
    new = new.with_cochain("c", vadd(padded.c["V"], phi0_y), "V")
    assert failing(run_all(new)) == []
    assert induced_endomorphism(new, "V", "V")[1] == induced_endomorphism(padded, "V", "V")[1]
    # without the matching change of c the structure is no longer equivariant
    assert not check_equivariance(padded.with_cochain("b", vadd(padded.b, {z: F(1)}))).passed


# -- derivation ----------------------------------------------------------------------------


def test_derivation_examples():
    m = bare_model([0, 3], unit={0: 1}, entries=[("mu2", ("V", "V", "V"), (0, 0), {0: 1}),
                                                   ("mu2", ("V", "V", "V"), (0, 1), {1: 1}),
                                                   ("mu2", ("V", "V", "V"), (1, 0), {1: 1})])
    assert check_derivation(m).passed
    assert check_derivation(sphere_model(3)).passed
    assert check_derivation(projective_model(6)).passed
    bad = sphere_model(3).with_entry("phi1", ("V", "V"), (B, 0), 0)
    assert not check_derivation(bad).passed


# -- reports and the runner ---------------------------------------------------------------


def test_missing_tensor_is_reported_as_skip():
    m = sphere_model(3)
    ops = {k: v for k, v in m.ops.items() if k[0] != "kvee"}
    stripped = m._replace(ops=ops)
    with pytest.raises(MissingTensor):
        check_kvee(stripped)
    reports = {r.identity: r for r in run_all(stripped)}
    assert "skipped" in reports["kvee_homotopy"].details
    assert reports["kvee_homotopy"].passed


def test_structural_failure_skips_cohomological_checks():
    bad = sphere_model(3).with_entry("d", (), (BETA,), E)
    reports = {r.identity: r for r in run_all(bad)}
    assert not reports["chain_maps"].passed
    assert "skipped" in reports["derivation"].details


def test_report_json_shape():
    rep = check_dilation(bare_model([0, 3], b=False))
    doc = rep.to_json()
    assert doc["identity"] == "dilation" and doc["status"] == "fail"
    assert set(doc["witnesses"][0]) >= {"objects", "inputs", "residual"}
    assert list(checks.CHECKERS)[:3] == ["differentials", "chain_maps", "mu2_leibniz"]
